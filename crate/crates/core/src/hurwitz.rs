//! Hurwitz numbers for fixed ramification profile and arbitrary genus:
//! structure coefficients, the classical fixed-degree formula, the orbifold
//! variant, large-genus asymptotics and the coefficient-gap check.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::correlator::{self, hurwitz_word};
use crate::error::{Error, Result};
use crate::exactalg::{rat_to_string, series_div, ExpCombo, Parity};
use crate::{Int, Rat};

/// A single Hurwitz-number request: profile, genus, orbifold parameter
/// (`r = 1` for simple Hurwitz numbers) and connectedness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzQuery {
    pub mu: Vec<u64>,
    pub g: i64,
    pub r: u64,
    pub connected: bool,
}

impl HurwitzQuery {
    pub fn simple(mu: Vec<u64>, g: i64) -> Self {
        HurwitzQuery { mu, g, r: 1, connected: true }
    }
}

/// The exponential structure of a profile: integer coefficients `C(mu, m)`
/// with `1 <= m <= d(d-1)/2` and the prefactor
/// `2 / (r^(d/r) (d/r)! mu_1 ... mu_n)`, so that the Hurwitz number at
/// exponent index `k = d/r + 2g - 2 + n` is
/// `prefactor * sum_m C(mu, m) m^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTable {
    mu: Vec<u64>,
    r: u64,
    combo: ExpCombo,
    prefactor: Rat,
}

pub fn factorial(n: u64) -> Int {
    let mut acc = Int::one();
    for i in 2..=n {
        acc *= Int::from(i);
    }
    acc
}

fn int_pow(base: u64, exp: u64) -> Int {
    num_traits::pow::pow(Int::from(base), exp as usize)
}

fn validate_profile(mu: &[u64], r: u64) -> Result<u64> {
    if mu.is_empty() || mu.iter().any(|&p| p == 0) {
        return Err(Error::InvalidQuery("profile must be a nonempty tuple of positive parts".into()));
    }
    if r == 0 {
        return Err(Error::InvalidQuery("orbifold parameter must be positive".into()));
    }
    let d: u64 = mu.iter().sum();
    if d % r != 0 {
        return Err(Error::InvalidQuery(format!(
            "degree {d} is not divisible by the orbifold parameter {r}"
        )));
    }
    Ok(d)
}

impl StructureTable {
    pub fn mu(&self) -> &[u64] {
        &self.mu
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn combo(&self) -> &ExpCombo {
        &self.combo
    }

    pub fn prefactor(&self) -> &Rat {
        &self.prefactor
    }

    /// `C(mu, m)` as an integer (zero outside the table).
    pub fn coeff(&self, m: u64) -> Int {
        self.combo.coeff(m).to_integer()
    }

    /// `prefactor * sum_m C(mu, m) m^k` (plus the even-parity constant at
    /// `k = 0`); vanishes when `k` has the wrong parity.
    pub fn evaluate(&self, k: u64) -> Rat {
        let half = &self.prefactor / Rat::from(Int::from(2));
        half * self.combo.eval_factorial_coeff(k)
    }

    pub fn to_json(&self) -> Value {
        let coeffs: serde_json::Map<String, Value> = self
            .combo
            .terms()
            .iter()
            .map(|(m, c)| (m.to_string(), Value::String(c.to_integer().to_string())))
            .collect();
        json!({
            "mu": self.mu,
            "r": self.r,
            "prefactor": rat_to_string(&self.prefactor),
            "C": coeffs,
        })
    }
}

static STRUCTURE_MEMO: OnceLock<Mutex<HashMap<(Vec<u64>, u64), StructureTable>>> = OnceLock::new();

/// Computes (and memoises) the structure table of a profile: the connected
/// correlator of its operator word, expanded and converted to exponential
/// form, with the integrality of every coefficient verified.
pub fn structure_coefficients(mu: &[u64], r: u64) -> Result<StructureTable> {
    let d = validate_profile(mu, r)?;
    let mut key: Vec<u64> = mu.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    let memo = STRUCTURE_MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = memo.lock().unwrap().get(&(key.clone(), r)) {
        return Ok(t.clone());
    }
    let word = hurwitz_word(&key, r)?;
    let poly = correlator::connected(&word)?.laurent()?;
    let combo = ExpCombo::from_laurent(&poly)?;
    for (m, c) in combo.terms() {
        if !c.denom().is_one() {
            return Err(Error::NonIntegerCoefficient {
                mu: key.clone(),
                m: *m,
                value: rat_to_string(c),
            });
        }
    }
    if let Some(m0) = combo.m0() {
        if !m0.denom().is_one() {
            return Err(Error::NonIntegerCoefficient {
                mu: key.clone(),
                m: 0,
                value: rat_to_string(m0),
            });
        }
    }
    let mut den = int_pow(r, d / r) * factorial(d / r);
    for &p in &key {
        den *= Int::from(p);
    }
    let table = StructureTable {
        mu: key.clone(),
        r,
        combo,
        prefactor: Rat::new(Int::from(2), den),
    };
    memo.lock().unwrap().insert((key, r), table.clone());
    Ok(table)
}

/// Exponent index `k = d/r + 2g - 2 + n`, or `None` when negative.
fn k_index(d: u64, r: u64, n: usize, g: i64) -> Option<u64> {
    let k = (d / r) as i64 + 2 * g - 2 + n as i64;
    (k >= 0).then_some(k as u64)
}

/// The (simple or orbifold, connected or disconnected) Hurwitz number of a
/// query, as an exact rational.
pub fn hurwitz_number(q: &HurwitzQuery) -> Result<Rat> {
    let d = validate_profile(&q.mu, q.r)?;
    if q.connected {
        if q.g < 0 {
            return Ok(Rat::zero());
        }
        let table = structure_coefficients(&q.mu, q.r)?;
        let k = k_index(d, q.r, q.mu.len(), q.g)
            .expect("k is non-negative for non-negative genus");
        Ok(table.evaluate(k))
    } else {
        let Some(k) = k_index(d, q.r, q.mu.len(), q.g) else {
            return Ok(Rat::zero());
        };
        disconnected_by_partitions(&q.mu, q.r, k)
    }
}

/// All set partitions of `{0, 1, ..., n-1}`.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for x in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Disconnected Hurwitz number at exponent index `k`, as the set-partition
/// sum of connected values (the exponential-generating-function product).
fn disconnected_by_partitions(mu: &[u64], r: u64, k: u64) -> Result<Rat> {
    let n = mu.len();
    let mut total = Rat::zero();
    for partition in set_partitions(n) {
        // connected blocks with degree not divisible by r contribute nothing
        let mut block_tables = Vec::with_capacity(partition.len());
        let mut possible = true;
        for block in &partition {
            let sub: Vec<u64> = block.iter().map(|&i| mu[i]).collect();
            let d_sub: u64 = sub.iter().sum();
            if d_sub % r != 0 {
                possible = false;
                break;
            }
            block_tables.push(structure_coefficients(&sub, r)?);
        }
        if !possible {
            continue;
        }
        total += Rat::from(factorial(k)) * egf_product(&block_tables, k);
    }
    Ok(total)
}

/// `sum over k_1 + ... + k_m = k` of `prod H(block_i, k_i) / k_i!` — the
/// `hbar^k` coefficient of the product of the blocks' generating functions.
fn egf_product(blocks: &[StructureTable], k: u64) -> Rat {
    match blocks {
        [] => {
            if k == 0 {
                Rat::one()
            } else {
                Rat::zero()
            }
        }
        [first, rest @ ..] => {
            let mut acc = Rat::zero();
            for ki in 0..=k {
                let v = first.evaluate(ki);
                if v.is_zero() {
                    continue;
                }
                acc += v / Rat::from(factorial(ki)) * egf_product(rest, k - ki);
            }
            acc
        }
    }
}

/// `H•` for genus `g_min..=max_g`, where `g_min` is the smallest genus with a
/// non-negative exponent index (it can be negative for disconnected covers).
/// Each value is computed twice — from the disconnected correlator's
/// `hbar`-series and from the set-partition sum of connected values — and the
/// two must agree.
pub fn disconnected_hurwitz_series(mu: &[u64], max_g: i64) -> Result<Vec<(i64, Rat)>> {
    let d = validate_profile(mu, 1)?;
    let n = mu.len();
    let g_min = -((d as i64 + n as i64 - 2) / 2);
    if max_g < g_min {
        return Ok(Vec::new());
    }
    let k_max = k_index(d, 1, n, max_g).expect("max_g >= g_min");
    // route 1: hbar-series of the disconnected correlator; pad the series by
    // the denominator's order of vanishing at hbar = 0
    let word = hurwitz_word(mu, 1)?;
    let value = correlator::disconnected(&word)?;
    let len = k_max as usize + 1;
    let probe = value.den().hbar_series(len + word.len());
    let t = probe
        .iter()
        .position(|c| !c.is_zero())
        .expect("denominator vanishes to unexpectedly high order");
    let num = value.num().hbar_series(len + t);
    let den = value.den().hbar_series(len + t);
    let series = series_div(&num, &den, len)?;
    let mut norm = Rat::from(factorial(d));
    for &p in mu {
        norm *= Rat::from(Int::from(p));
    }
    let mut out = Vec::new();
    for g in g_min..=max_g {
        let Some(k) = k_index(d, 1, n, g) else { continue };
        let from_series = Rat::from(factorial(k)) * &series[k as usize] / &norm;
        let from_partitions = disconnected_by_partitions(mu, 1, k)?;
        if from_series != from_partitions {
            return Err(Error::ConsistencyFailure(format!(
                "disconnected Hurwitz number of {mu:?} at g = {g}: correlator series gives {}, \
                 set-partition sum gives {}",
                rat_to_string(&from_series),
                rat_to_string(&from_partitions)
            )));
        }
        out.push((g, from_partitions));
    }
    Ok(out)
}

/// Classical Hurwitz number `Hur_(g,d)` (profile `(1^d)` divided by `d!`) and
/// the integer coefficients `B(d, m) = C((1^d), m)` with
/// `Hur_(g,d) = (2/d!^2) sum_m B(d,m) m^(2d+2g-2)`.
pub fn classical_hurwitz(g: i64, d: u64) -> Result<(Rat, BTreeMap<u64, Int>)> {
    if d < 2 {
        return Err(Error::InvalidQuery("classical Hurwitz numbers need degree >= 2".into()));
    }
    let mu = vec![1u64; d as usize];
    let table = structure_coefficients(&mu, 1)?;
    let b: BTreeMap<u64, Int> =
        table.combo().terms().iter().map(|(m, c)| (*m, c.to_integer())).collect();
    let q = HurwitzQuery::simple(mu, g);
    let hur = hurwitz_number(&q)? / Rat::from(factorial(d));
    Ok((hur, b))
}

/// Large-genus estimate `prefactor * (d(d-1)/2)^k` for the query's Hurwitz
/// number, exactly as a rational.
pub fn asymptotic_estimate(q: &HurwitzQuery) -> Result<Rat> {
    let d = validate_profile(&q.mu, q.r)?;
    let table = structure_coefficients(&q.mu, q.r)?;
    let Some(k) = k_index(d, q.r, q.mu.len(), q.g) else {
        return Ok(Rat::zero());
    };
    Ok(table.prefactor() * Rat::from(int_pow(d * (d - 1) / 2, k)))
}

/// Outcome of the coefficient-gap check on a profile: whether `C(mu, m) = 0`
/// for all `m` strictly between `(d-1)(d-2)/2` and `d(d-1)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub mu: Vec<u64>,
    pub window: (u64, u64),
    pub failures: Vec<(u64, Int)>,
}

impl GapReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu = self
            .mu
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        if self.holds() {
            write!(f, "gap holds for mu = ({mu}): C = 0 on ({}, {})", self.window.0, self.window.1)
        } else {
            let fails = self
                .failures
                .iter()
                .map(|(m, c)| format!("C({m}) = {c}"))
                .collect::<Vec<_>>()
                .join(", ");
            write!(f, "gap fails for mu = ({mu}): {fails}")
        }
    }
}

/// Checks the coefficient gap `C(mu, m) = 0` for
/// `(d-1)(d-2)/2 < m < d(d-1)/2`.
pub fn check_gap_conjecture(mu: &[u64]) -> Result<GapReport> {
    let d = validate_profile(mu, 1)?;
    if d < 2 {
        return Err(Error::InvalidQuery("gap check needs degree >= 2".into()));
    }
    let table = structure_coefficients(mu, 1)?;
    let lo = (d - 1) * (d - 2) / 2;
    let hi = d * (d - 1) / 2;
    let mut failures = Vec::new();
    for m in lo + 1..hi {
        let c = table.coeff(m);
        if !c.is_zero() {
            failures.push((m, c));
        }
    }
    Ok(GapReport { mu: table.mu().to_vec(), window: (lo, hi), failures })
}

/// Parity of the exponential combination of a profile: odd when
/// `l = d/r + n - 2` is odd.
pub fn expected_parity(d: u64, r: u64, n: usize) -> Parity {
    if ((d / r) as i64 + n as i64 - 2) % 2 != 0 {
        Parity::Odd
    } else {
        Parity::Even
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    fn rr(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    fn coeffs(mu: &[u64]) -> BTreeMap<u64, i64> {
        let t = structure_coefficients(mu, 1).unwrap();
        t.combo()
            .terms()
            .iter()
            .map(|(m, c)| (*m, i64::try_from(&c.to_integer()).unwrap()))
            .collect()
    }

    #[test]
    fn coefficient_tables() {
        let m = |pairs: &[(u64, i64)]| pairs.iter().copied().collect::<BTreeMap<u64, i64>>();
        assert_eq!(coeffs(&[2]), m(&[(1, 1)]));
        assert_eq!(coeffs(&[1, 1]), m(&[(1, 1)]));
        assert_eq!(coeffs(&[2, 1]), m(&[(1, -3), (3, 1)]));
        assert_eq!(coeffs(&[1, 1, 1]), m(&[(1, -9), (3, 1)]));
        assert_eq!(coeffs(&[4]), m(&[(2, -3), (6, 1)]));
        assert_eq!(coeffs(&[2, 1, 1]), m(&[(1, 24), (2, -3), (3, -8), (6, 1)]));
        assert_eq!(coeffs(&[1, 1, 1, 1]), m(&[(1, 144), (2, -9), (3, -16), (6, 1)]));
        assert_eq!(coeffs(&[3, 2]), m(&[(1, 20), (2, 15), (4, -10), (5, -4), (10, 1)]));
        assert_eq!(
            coeffs(&[3, 1, 1]),
            m(&[(1, 20), (2, -15), (3, 40), (4, -10), (5, 4), (6, -10), (10, 1)])
        );
        assert_eq!(
            coeffs(&[2, 1, 1, 1]),
            m(&[(1, -400), (2, 120), (3, 120), (4, -40), (5, 8), (6, -15), (10, 1)])
        );
        assert_eq!(
            coeffs(&[1, 1, 1, 1, 1]),
            m(&[(1, -4000), (2, 600), (3, 400), (4, -100), (5, 16), (6, -25), (10, 1)])
        );
    }

    #[test]
    fn top_coefficient_and_parity() {
        for mu in [
            vec![2u64],
            vec![3],
            vec![2, 1],
            vec![2, 2],
            vec![2, 1, 1],
            vec![3, 2],
            vec![1, 1, 1, 1, 1],
        ] {
            let d: u64 = mu.iter().sum();
            let t = structure_coefficients(&mu, 1).unwrap();
            assert_eq!(t.coeff(d * (d - 1) / 2), Int::one(), "mu = {mu:?}");
            assert_eq!(t.combo().parity(), expected_parity(d, 1, mu.len()), "mu = {mu:?}");
        }
    }

    #[test]
    fn simple_hurwitz_numbers() {
        let h = |mu: &[u64], g: i64| hurwitz_number(&HurwitzQuery::simple(mu.to_vec(), g)).unwrap();
        assert_eq!(h(&[2, 1], 0), rat(4));
        assert_eq!(h(&[2, 1], 1), rat(40));
        for g in 0..6i64 {
            let expected = (int_pow(3, 2 * g as u64 + 3) - 3) / 6;
            assert_eq!(h(&[2, 1], g), Rat::from(expected), "g = {g}");
        }
        assert_eq!(h(&[2, 1, 1], 0), rat(240));
        assert_eq!(h(&[2], 3), rr(1, 2));
        assert_eq!(h(&[1, 1], 0), rat(1));
        assert_eq!(h(&[1], 0), rat(1));
        assert_eq!(h(&[1], 1), rat(0));
        assert_eq!(h(&[2, 1], -1), rat(0));
    }

    #[test]
    fn orbifold_base_cases() {
        for g in 0..5i64 {
            let q = HurwitzQuery { mu: vec![2], g, r: 2, connected: true };
            assert_eq!(hurwitz_number(&q).unwrap(), rr(1, 2), "g = {g}");
        }
        let t = structure_coefficients(&[2], 2).unwrap();
        assert_eq!(t.combo().parity(), Parity::Even);
        assert_eq!(t.coeff(1), Int::one());
        // r must divide the degree
        assert!(structure_coefficients(&[3], 2).is_err());
    }

    #[test]
    fn classical_b_table() {
        let (_, b) = classical_hurwitz(0, 5).unwrap();
        let expected: BTreeMap<u64, Int> = [
            (1u64, -4000i64),
            (2, 600),
            (3, 400),
            (4, -100),
            (5, 16),
            (6, -25),
            (10, 1),
        ]
        .into_iter()
        .map(|(m, c)| (m, Int::from(c)))
        .collect();
        assert_eq!(b, expected);
        let (hur, _) = classical_hurwitz(0, 3).unwrap();
        assert_eq!(hur, rat(4));
        let (hur2, b2) = classical_hurwitz(2, 2).unwrap();
        assert_eq!(b2, [(1u64, Int::one())].into_iter().collect());
        assert_eq!(hur2, rr(1, 2));
    }

    #[test]
    fn gap_conjecture_small_cases() {
        assert!(check_gap_conjecture(&[3, 2]).unwrap().holds());
        assert!(check_gap_conjecture(&[1, 1, 1]).unwrap().holds());
        assert!(check_gap_conjecture(&[2]).unwrap().holds());
        assert!(check_gap_conjecture(&[2, 2, 1]).unwrap().holds());
    }

    #[test]
    fn asymptotic_ratio() {
        use crate::exactalg::rat_to_decimal;
        let q = HurwitzQuery::simple(vec![3, 2], 3);
        let h = hurwitz_number(&q).unwrap();
        let est = asymptotic_estimate(&q).unwrap();
        let ratio = est / h;
        assert!(rat_to_decimal(&ratio, 12).starts_with("1.0023778"));
        let q = HurwitzQuery::simple(vec![3, 2], 20);
        let h = hurwitz_number(&q).unwrap();
        let est = asymptotic_estimate(&q).unwrap();
        let ratio = est / h;
        assert!(rat_to_decimal(&ratio, 19).starts_with("1.00000000000011369"));
        // single-exponential profile: estimate is exact
        let q = HurwitzQuery::simple(vec![2], 4);
        assert_eq!(asymptotic_estimate(&q).unwrap(), hurwitz_number(&q).unwrap());
    }

    #[test]
    fn disconnected_series_checks() {
        let series = disconnected_hurwitz_series(&[1, 1], 2).unwrap();
        assert_eq!(series[0], (-1, rat(1)));
        // mu = (2,1): the only split is (2) + (1), and the degree-1 piece
        // carries no transpositions, so it contributes H_{g+1;(2)} = 1/2
        let h = |mu: &[u64], g| hurwitz_number(&HurwitzQuery::simple(mu.to_vec(), g)).unwrap();
        for (g, v) in disconnected_hurwitz_series(&[2, 1], 3).unwrap() {
            assert_eq!(v, h(&[2, 1], g) + h(&[2], g + 1), "g = {g}");
        }
        // mu = (1,1): the pair partition contributes only at k = 0
        let series = disconnected_hurwitz_series(&[1, 1], 1).unwrap();
        let h11 = |g| hurwitz_number(&HurwitzQuery::simple(vec![1, 1], g)).unwrap();
        assert_eq!(series, vec![(-1, rat(1)), (0, h11(0)), (1, h11(1))]);
    }

    #[test]
    fn disconnected_query_matches_series() {
        for g in 0..3i64 {
            let q = HurwitzQuery { mu: vec![2, 1, 1], g, r: 1, connected: false };
            let series = disconnected_hurwitz_series(&[2, 1, 1], g).unwrap();
            let (_, v) = series.last().unwrap();
            assert_eq!(hurwitz_number(&q).unwrap(), v.clone());
        }
    }

    #[test]
    fn structure_table_json() {
        let t = structure_coefficients(&[2, 1], 1).unwrap();
        assert_eq!(
            serde_json::to_string(&t.to_json()).unwrap(),
            r#"{"C":{"1":"-3","3":"1"},"mu":[2,1],"prefactor":"1/6","r":1}"#
        );
    }

    #[test]
    fn set_partition_counts() {
        // Bell numbers
        let bell: Vec<usize> = (0..7).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203]);
    }
}
