//! Brute-force and group-algebra counts of transposition factorisations in
//! symmetric groups. Everything here is independent of the wedge-space
//! machinery and serves as ground truth for it.
//!
//! Permutations are arrays of images on `{0, ..., d-1}`; products compose
//! right to left, so the product of a tuple `(t_1, ..., t_k)` sends `x` to
//! `t_1(t_2(... t_k(x)))`. Appending a factor multiplies on the right.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hurwitz::{factorial, set_partitions};
use crate::{Int, Rat};

pub const DEFAULT_BUDGET: f64 = 1e8;
const MAX_CONVOLUTION_DEGREE: u64 = 7;

/// Either a conjugacy class (by cycle type) or one fixed permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Class(Vec<u64>),
    Fixed(Vec<usize>),
}

/// A factorisation-counting request.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationQuery {
    pub d: u64,
    pub target: Target,
    pub k: u64,
    pub transitive: bool,
    pub monotone: bool,
    pub orbifold_r: Option<u64>,
    pub budget: f64,
}

impl FactorizationQuery {
    pub fn new(d: u64, target: Target, k: u64) -> Self {
        FactorizationQuery {
            d,
            target,
            k,
            transitive: false,
            monotone: false,
            orbifold_r: None,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn transitive(mut self) -> Self {
        self.transitive = true;
        self
    }

    pub fn monotone(mut self) -> Self {
        self.monotone = true;
        self
    }
}

/// `p ∘ q`: apply `q` first, then `p`.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

pub fn identity(d: usize) -> Vec<usize> {
    (0..d).collect()
}

/// Cycle type as a weakly decreasing list of cycle lengths.
pub fn cycle_type(p: &[usize]) -> Vec<u64> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// A canonical permutation of the given cycle type: consecutive cycles
/// `(0 1 ... mu_1-1)(mu_1 ...) ...`.
pub fn canonical_of_type(mu: &[u64]) -> Vec<usize> {
    let d: u64 = mu.iter().sum();
    let mut p = identity(d as usize);
    let mut base = 0usize;
    for &part in mu {
        let part = part as usize;
        for i in 0..part {
            p[base + i] = base + (i + 1) % part;
        }
        base += part;
    }
    p
}

/// `|Aut(mu)| = prod (multiplicity of each part)!`.
pub fn aut_size(mu: &[u64]) -> Int {
    let mut sorted = mu.to_vec();
    sorted.sort_unstable();
    let mut acc = Int::one();
    let mut i = 0;
    while i < sorted.len() {
        let mut run = 0u64;
        let v = sorted[i];
        while i < sorted.len() && sorted[i] == v {
            run += 1;
            i += 1;
        }
        acc *= factorial(run);
    }
    acc
}

/// All transpositions of `S_d` as `(small, large)` pairs, ordered by the
/// larger element first (the order that matters for monotone tuples).
pub fn transpositions(d: u64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for b in 1..d as usize {
        for a in 0..b {
            out.push((a, b));
        }
    }
    out
}

fn apply_transposition(p: &[usize], (a, b): (usize, usize)) -> Vec<usize> {
    // p ∘ (a b): swap the images of a and b
    let mut out = p.to_vec();
    out.swap(a, b);
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }
    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        self.0[rx] = ry;
    }
}

/// Do the given permutations generate a transitive subgroup? Equivalent to
/// connectivity of `{0..d-1}` under the union of their supports.
fn generates_transitively(d: usize, perms: &[&[usize]]) -> bool {
    let mut uf = UnionFind::new(d);
    for p in perms {
        for x in 0..d {
            if p[x] != x {
                uf.union(x, p[x]);
            }
        }
    }
    let root = uf.find(0);
    (1..d).all(|x| uf.find(x) == root)
}

fn target_matches(target: &Target, p: &[usize]) -> bool {
    match target {
        Target::Class(mu) => {
            let mut sorted = mu.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            cycle_type(p) == sorted
        }
        Target::Fixed(q) => p == q,
    }
}

/// Sign of the class with the given cycle type: `(-1)^(d - n)`.
fn class_sign(mu: &[u64]) -> i8 {
    let d: u64 = mu.iter().sum();
    if (d - mu.len() as u64) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn parity_allows(q: &FactorizationQuery) -> bool {
    let target_sign = match &q.target {
        Target::Class(mu) => class_sign(mu),
        Target::Fixed(p) => class_sign(&cycle_type(p)),
    };
    let mut word_parity = q.k;
    if let Some(r) = q.orbifold_r {
        word_parity += (r - 1) * (q.d / r);
    }
    let word_sign = if word_parity % 2 == 0 { 1 } else { -1 };
    target_sign == word_sign
}

/// Exhaustive count of (optionally monotone, optionally transitive,
/// optionally orbifold) transposition tuples with the requested product.
pub fn count_factorizations(q: &FactorizationQuery) -> Result<Int> {
    if let Target::Class(mu) = &q.target {
        if mu.iter().sum::<u64>() != q.d {
            return Err(Error::InvalidQuery(format!(
                "target class {mu:?} does not partition the degree {}",
                q.d
            )));
        }
    }
    let alphas: Vec<Vec<usize>> = match q.orbifold_r {
        None => vec![identity(q.d as usize)],
        Some(r) => {
            if r == 0 || q.d % r != 0 {
                return Err(Error::InvalidQuery(format!(
                    "orbifold parameter {r} does not divide the degree {}",
                    q.d
                )));
            }
            let mut shape = vec![r; (q.d / r) as usize];
            shape.sort_unstable_by(|a, b| b.cmp(a));
            perms_of_class(q.d, &shape)
        }
    };
    let taus = transpositions(q.d);
    if taus.is_empty() && q.k > 0 {
        return Ok(Int::zero());
    }
    let t = taus.len().max(1);
    let work = (t as f64).powi(q.k as i32) * alphas.len() as f64;
    if work > q.budget {
        return Err(Error::BudgetExceeded(work, q.budget));
    }
    let tau_perms: Vec<Vec<usize>> = taus
        .iter()
        .map(|&(a, b)| {
            let mut p = identity(q.d as usize);
            p.swap(a, b);
            p
        })
        .collect();
    let mut count = Int::zero();
    let mut choice = vec![0usize; q.k as usize];
    'outer: for alpha in &alphas {
        loop {
            let monotone_ok = !q.monotone
                || choice.windows(2).all(|w| taus[w[0]].1 <= taus[w[1]].1);
            if monotone_ok {
                let mut prod = alpha.clone();
                for &c in &choice {
                    prod = apply_transposition(&prod, taus[c]);
                }
                if target_matches(&q.target, &prod) {
                    let mut gens: Vec<&[usize]> =
                        choice.iter().map(|&c| tau_perms[c].as_slice()).collect();
                    if q.orbifold_r.is_some() {
                        gens.push(alpha.as_slice());
                    }
                    if !q.transitive || generates_transitively(q.d as usize, &gens) {
                        count += 1;
                    }
                }
            }
            // advance the odometer
            let mut i = 0;
            loop {
                if i == choice.len() {
                    choice.iter_mut().for_each(|c| *c = 0);
                    continue 'outer;
                }
                choice[i] += 1;
                if choice[i] < t {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
    if !parity_allows(q) {
        assert!(count.is_zero(), "parity constraint violated by exhaustive count");
    }
    Ok(count)
}

/// All permutations of `S_d` together with an index lookup.
fn symmetric_group(d: u64) -> (Vec<Vec<usize>>, HashMap<Vec<usize>, usize>) {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d as usize], &mut perms);
    let index = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    (perms, index)
}

fn perms_of_class(d: u64, shape: &[u64]) -> Vec<Vec<usize>> {
    let (perms, _) = symmetric_group(d);
    let mut sorted = shape.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    perms.into_iter().filter(|p| cycle_type(p) == sorted).collect()
}

/// Count of (non-transitive, non-monotone) factorisations by repeated
/// convolution with the transposition class sum in the group algebra.
pub fn count_by_convolution(q: &FactorizationQuery) -> Result<Int> {
    if q.transitive || q.monotone {
        return Err(Error::InvalidQuery(
            "convolution counts neither transitive nor monotone factorisations".into(),
        ));
    }
    if q.d > MAX_CONVOLUTION_DEGREE {
        return Err(Error::DegreeTooLarge(q.d, MAX_CONVOLUTION_DEGREE));
    }
    let (perms, index) = symmetric_group(q.d);
    let mut vec = vec![Int::zero(); perms.len()];
    match q.orbifold_r {
        None => vec[index[&identity(q.d as usize)]] = Int::one(),
        Some(r) => {
            if r == 0 || q.d % r != 0 {
                return Err(Error::InvalidQuery(format!(
                    "orbifold parameter {r} does not divide the degree {}",
                    q.d
                )));
            }
            let shape = vec![r; (q.d / r) as usize];
            for (i, p) in perms.iter().enumerate() {
                if cycle_type(p) == shape {
                    vec[i] = Int::one();
                }
            }
        }
    }
    let taus = transpositions(q.d);
    for _ in 0..q.k {
        let mut next = vec![Int::zero(); perms.len()];
        for (i, v) in vec.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for &tau in &taus {
                let j = index[&apply_transposition(&perms[i], tau)];
                next[j] += v;
            }
        }
        vec = next;
    }
    let mut count = Int::zero();
    for (i, v) in vec.iter().enumerate() {
        if target_matches(&q.target, &perms[i]) {
            count += v;
        }
    }
    if !parity_allows(q) {
        assert!(count.is_zero(), "parity constraint violated by convolution count");
    }
    Ok(count)
}

/// Disconnected weighted count `|Aut(mu)|/d! * (class count)`, shared by the
/// connected and orbifold paths.
fn weighted_disconnected(mu: &[u64], k: u64, r: Option<u64>) -> Result<Rat> {
    let d: u64 = mu.iter().sum();
    let mut q = FactorizationQuery::new(d, Target::Class(mu.to_vec()), k);
    q.orbifold_r = r;
    let count = count_by_convolution(&q)?;
    Ok(Rat::new(aut_size(mu), factorial(d)) * Rat::from(count))
}

fn conv_key(mu: &[u64]) -> Vec<u64> {
    let mut s = mu.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Weighted connected count via the set-partition triangle: subtract, from
/// the disconnected count, every way of splitting the labelled parts into
/// several connected pieces (with the transpositions distributed by a
/// multinomial).
fn connected_inversion(
    mu: &[u64],
    k: u64,
    r: Option<u64>,
    memo: &mut HashMap<(Vec<u64>, u64), Rat>,
) -> Result<Rat> {
    let key = (conv_key(mu), k);
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    if let Some(rr) = r {
        let d: u64 = mu.iter().sum();
        if d % rr != 0 {
            memo.insert(key, Rat::zero());
            return Ok(Rat::zero());
        }
    }
    let mut value = weighted_disconnected(mu, k, r)?;
    for partition in set_partitions(mu.len()) {
        if partition.len() < 2 {
            continue;
        }
        let blocks: Vec<Vec<u64>> = partition
            .iter()
            .map(|b| b.iter().map(|&i| mu[i]).collect())
            .collect();
        value -= Rat::from(factorial(k)) * block_egf(&blocks, k, r, memo)?;
    }
    memo.insert(key, value.clone());
    Ok(value)
}

fn block_egf(
    blocks: &[Vec<u64>],
    k: u64,
    r: Option<u64>,
    memo: &mut HashMap<(Vec<u64>, u64), Rat>,
) -> Result<Rat> {
    if blocks.is_empty() {
        return Ok(if k == 0 { Rat::one() } else { Rat::zero() });
    }
    let mut acc = Rat::zero();
    for ki in 0..=k {
        let v = connected_inversion(&blocks[0], ki, r, memo)?;
        if v.is_zero() {
            continue;
        }
        acc += v / Rat::from(factorial(ki)) * block_egf(&blocks[1..], k - ki, r, memo)?;
    }
    Ok(acc)
}

/// Weighted connected count: `|Aut(mu)|/d!` times the number of transitive
/// `k`-tuples with product of type `mu`, computed by convolution plus
/// inclusion–exclusion (no transitivity enumeration needed).
pub fn connected_count(d: u64, mu: &[u64], k: u64) -> Result<Rat> {
    if mu.iter().sum::<u64>() != d {
        return Err(Error::InvalidQuery(format!("{mu:?} does not partition {d}")));
    }
    connected_inversion(mu, k, None, &mut HashMap::new())
}

/// Weighted connected orbifold count over tuples `(alpha, t_1, ..., t_k)`
/// with `alpha` of cycle type `(r, ..., r)`, weight `|Aut(mu)|/d!`. At
/// `r = 1` the initial permutation is forced to be the identity and this
/// reduces to [`connected_count`].
pub fn orbifold_count(d: u64, r: u64, mu: &[u64], k: u64) -> Result<Rat> {
    if mu.iter().sum::<u64>() != d {
        return Err(Error::InvalidQuery(format!("{mu:?} does not partition {d}")));
    }
    if r == 0 || d % r != 0 {
        return Err(Error::InvalidQuery(format!("orbifold parameter {r} does not divide {d}")));
    }
    connected_inversion(mu, k, Some(r), &mut HashMap::new())
}

/// Number of monotone `k`-tuples of transpositions in `S_d` with the given
/// product. Without the transitivity constraint this runs a block DP over the
/// maximum symbol; with it, it falls back to exhaustive enumeration.
pub fn monotone_count(
    d: u64,
    target: &Target,
    k: u64,
    transitive: bool,
    budget: f64,
) -> Result<Int> {
    if transitive {
        let mut q = FactorizationQuery::new(d, target.clone(), k).transitive().monotone();
        q.budget = budget;
        return count_factorizations(&q);
    }
    if d > MAX_CONVOLUTION_DEGREE {
        return Err(Error::DegreeTooLarge(d, MAX_CONVOLUTION_DEGREE));
    }
    let (perms, index) = symmetric_group(d);
    // f[l][p]: monotone l-tuples with product p and all larger elements <= b
    let mut f: Vec<Vec<Int>> = vec![vec![Int::zero(); perms.len()]; k as usize + 1];
    f[0][index[&identity(d as usize)]] = Int::one();
    for b in 1..d as usize {
        // appending (a b), a < b, keeps the tuple monotone exactly when all
        // previous factors already have larger element <= b
        for l in 1..=k as usize {
            for i in 0..perms.len() {
                let mut add = Int::zero();
                for a in 0..b {
                    let j = index[&apply_transposition(&perms[i], (a, b))];
                    add += &f[l - 1][j];
                }
                f[l][i] += add;
            }
        }
    }
    let mut count = Int::zero();
    for (i, p) in perms.iter().enumerate() {
        if target_matches(target, p) {
            count += &f[k as usize][i];
        }
    }
    Ok(count)
}
