//! Monotone Hurwitz numbers (factors' larger elements weakly increasing) and
//! exact fits of their dependence on the factor count to an
//! exponential-plus-linear model.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::rat_to_string;
use crate::hurwitz::{factorial, set_partitions};
use crate::oracle::{aut_size, monotone_count, Target};
use crate::{Int, Rat};

/// How a monotone count is normalised.
///
/// `Definition` weights the transitive class count by `|Aut(mu)| / d!`;
/// `FixedTarget` counts transitive monotone tuples whose product is one fixed
/// permutation of cycle type `mu`, which is `prod(mu_i)` times larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalisation {
    Definition,
    FixedTarget,
}

impl Normalisation {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalisation::Definition => "definition",
            Normalisation::FixedTarget => "fixed-target",
        }
    }
}

impl Default for Normalisation {
    fn default() -> Self {
        Normalisation::FixedTarget
    }
}

fn validate(mu: &[u64]) -> Result<u64> {
    if mu.is_empty() || mu.iter().any(|&m| m == 0) {
        return Err(Error::InvalidQuery(format!("invalid ramification profile {mu:?}")));
    }
    Ok(mu.iter().sum())
}

/// `|Aut(mu)|/d!` times the (not necessarily transitive) monotone class count.
fn weighted_monotone(mu: &[u64], k: u64) -> Result<Rat> {
    let d: u64 = mu.iter().sum();
    let count = monotone_count(d, &Target::Class(mu.to_vec()), k, false, f64::INFINITY)?;
    Ok(Rat::new(aut_size(mu), factorial(d)) * Rat::from(count))
}

/// Weighted transitive monotone count via inclusion–exclusion over set
/// partitions of the parts. The factor sequences of the pieces merge back
/// uniquely (their supports are disjoint, so the larger elements of factors
/// from different pieces never tie), hence the ordinary convolution in `k`.
fn connected_monotone(
    mu: &[u64],
    k: u64,
    memo: &mut HashMap<(Vec<u64>, u64), Rat>,
) -> Result<Rat> {
    let mut key_mu = mu.to_vec();
    key_mu.sort_unstable_by(|a, b| b.cmp(a));
    let key = (key_mu, k);
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let mut value = weighted_monotone(mu, k)?;
    for partition in set_partitions(mu.len()) {
        if partition.len() < 2 {
            continue;
        }
        let blocks: Vec<Vec<u64>> = partition
            .iter()
            .map(|b| b.iter().map(|&i| mu[i]).collect())
            .collect();
        value -= block_product(&blocks, k, memo)?;
    }
    memo.insert(key, value.clone());
    Ok(value)
}

fn block_product(
    blocks: &[Vec<u64>],
    k: u64,
    memo: &mut HashMap<(Vec<u64>, u64), Rat>,
) -> Result<Rat> {
    if blocks.is_empty() {
        return Ok(if k == 0 { Rat::one() } else { Rat::zero() });
    }
    let mut acc = Rat::zero();
    for ki in 0..=k {
        let v = connected_monotone(&blocks[0], ki, memo)?;
        if v.is_zero() {
            continue;
        }
        acc += v * block_product(&blocks[1..], k - ki, memo)?;
    }
    Ok(acc)
}

/// The monotone analogue of a Hurwitz number: transitive monotone
/// factorisations counted with `k = d + 2g - 2 + n` factors, in the chosen
/// normalisation. Negative factor counts give zero.
pub fn monotone_hurwitz(mu: &[u64], g: i64, normalisation: Normalisation) -> Result<Rat> {
    let d = validate(mu)?;
    let n = mu.len() as i64;
    let k = d as i64 + 2 * g - 2 + n;
    if k < 0 {
        return Ok(Rat::zero());
    }
    let mut value = connected_monotone(mu, k as u64, &mut HashMap::new())?;
    if normalisation == Normalisation::FixedTarget {
        let scale: u64 = mu.iter().product();
        value *= Rat::from(Int::from(scale));
    }
    Ok(value)
}

/// An exact model `k -> C0 * k + sum_{m=1}^{d-1} C(m) m^k` for the dependence
/// of a monotone count on the number of factors.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneModel {
    mu: Vec<u64>,
    normalisation: Normalisation,
    c0: Rat,
    c: BTreeMap<u64, Rat>,
}

impl MonotoneModel {
    pub fn mu(&self) -> &[u64] {
        &self.mu
    }

    pub fn normalisation(&self) -> Normalisation {
        self.normalisation
    }

    /// The coefficient of the linear term.
    pub fn c0(&self) -> &Rat {
        &self.c0
    }

    /// Coefficients of the exponential terms, indexed by base `m`.
    pub fn coefficients(&self) -> &BTreeMap<u64, Rat> {
        &self.c
    }

    pub fn coeff(&self, m: u64) -> Rat {
        self.c.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn evaluate(&self, k: u64) -> Rat {
        let mut acc = &self.c0 * Rat::from(Int::from(k));
        for (m, c) in &self.c {
            acc += c * Rat::from(num_traits::pow::pow(Int::from(*m), k as usize));
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let c: serde_json::Map<String, Value> = self
            .c
            .iter()
            .map(|(m, v)| (m.to_string(), Value::String(rat_to_string(v))))
            .collect();
        json!({
            "C0": rat_to_string(&self.c0),
            "C": c,
        })
    }
}

/// Solves a square linear system over the rationals by Gaussian elimination.
fn solve_exact(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Result<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::SingularSystem(format!("no pivot in column {col}")))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone().recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        b[col] *= &inv;
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone();
            for j in 0..n {
                let t = &a[col][j] * &factor;
                a[row][j] -= t;
            }
            let t = &b[col] * &factor;
            b[row] -= t;
        }
    }
    Ok(b)
}

/// Fits `C0 * k + sum_{m=1}^{d-1} C(m) m^k` exactly through `d` data points
/// `(k, value)`. The points must have distinct `k`.
pub fn fit_exp_linear(mu: &[u64], normalisation: Normalisation, points: &[(u64, Rat)]) -> Result<MonotoneModel> {
    let d = validate(mu)?;
    if points.len() != d as usize {
        return Err(Error::InvalidQuery(format!(
            "need exactly {d} data points to fit a degree-{d} profile, got {}",
            points.len()
        )));
    }
    for i in 0..points.len() {
        for j in 0..i {
            if points[i].0 == points[j].0 {
                return Err(Error::SingularSystem(format!(
                    "duplicate factor count k = {}",
                    points[i].0
                )));
            }
        }
    }
    // unknowns: C(1), ..., C(d-1), C0
    let rows: Vec<Vec<Rat>> = points
        .iter()
        .map(|&(k, _)| {
            let mut row: Vec<Rat> = (1..d)
                .map(|m| Rat::from(num_traits::pow::pow(Int::from(m), k as usize)))
                .collect();
            row.push(Rat::from(Int::from(k)));
            row
        })
        .collect();
    let rhs: Vec<Rat> = points.iter().map(|(_, v)| v.clone()).collect();
    let mut solution = solve_exact(rows, rhs)?;
    let c0 = solution.pop().expect("system has at least one unknown");
    let c: BTreeMap<u64, Rat> = (1..d).zip(solution).filter(|(_, v)| !v.is_zero()).collect();
    Ok(MonotoneModel { mu: mu.to_vec(), normalisation, c0, c })
}

/// The outcome of fitting a model on low genera and validating it on higher
/// ones.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub model: MonotoneModel,
    pub validated_g: Vec<i64>,
    pub all_pass: bool,
}

impl ConjectureReport {
    pub fn to_json(&self) -> Value {
        json!({
            "mu": self.model.mu(),
            "normalisation": self.model.normalisation().as_str(),
            "model": self.model.to_json(),
            "validated_g": self.validated_g,
            "all_pass": self.all_pass,
        })
    }
}

fn factor_count(mu: &[u64], g: i64) -> u64 {
    let d: i64 = mu.iter().sum::<u64>() as i64;
    (d + 2 * g - 2 + mu.len() as i64).max(0) as u64
}

/// Fits the model to the first `d` genera (`g = 0, ..., d-1`) and checks it
/// against every further genus up to `g_max`.
pub fn verify_conjecture(
    mu: &[u64],
    g_max: i64,
    normalisation: Normalisation,
) -> Result<ConjectureReport> {
    let d = validate(mu)? as i64;
    if g_max < d {
        return Err(Error::InvalidQuery(format!(
            "need g_max >= {d} to validate beyond the {d} fitted genera"
        )));
    }
    let points: Vec<(u64, Rat)> = (0..d)
        .map(|g| Ok((factor_count(mu, g), monotone_hurwitz(mu, g, normalisation)?)))
        .collect::<Result<_>>()?;
    let model = fit_exp_linear(mu, normalisation, &points)?;
    let mut validated_g = Vec::new();
    let mut all_pass = true;
    for g in d..=g_max {
        let value = monotone_hurwitz(mu, g, normalisation)?;
        if model.evaluate(factor_count(mu, g)) == value {
            validated_g.push(g);
        } else {
            all_pass = false;
        }
    }
    Ok(ConjectureReport { model, validated_g, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rr(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    fn fit(mu: &[u64]) -> MonotoneModel {
        let d = mu.iter().sum::<u64>() as i64;
        let points: Vec<(u64, Rat)> = (0..d)
            .map(|g| {
                (
                    factor_count(mu, g),
                    monotone_hurwitz(mu, g, Normalisation::FixedTarget).unwrap(),
                )
            })
            .collect();
        fit_exp_linear(mu, Normalisation::FixedTarget, &points).unwrap()
    }

    #[test]
    fn base_values() {
        // a single transposition, and the unique monotone pair squaring to it
        assert_eq!(
            monotone_hurwitz(&[2], 0, Normalisation::FixedTarget).unwrap(),
            Rat::one()
        );
        assert_eq!(
            monotone_hurwitz(&[2], 0, Normalisation::Definition).unwrap(),
            rr(1, 2)
        );
        // two monotone factors with a fixed 3-cycle product
        assert_eq!(
            monotone_hurwitz(&[3], 0, Normalisation::FixedTarget).unwrap(),
            Rat::from(Int::from(2))
        );
        // negative factor count
        assert_eq!(
            monotone_hurwitz(&[1], -1, Normalisation::FixedTarget).unwrap(),
            Rat::zero()
        );
    }

    #[test]
    fn matches_exhaustive_transitive_counts() {
        use crate::oracle::{canonical_of_type, DEFAULT_BUDGET};
        for (mu, gmax) in [(vec![2u64, 1], 2i64), (vec![3], 2), (vec![2, 2], 1), (vec![1, 1], 2)] {
            for g in 0..=gmax {
                let k = factor_count(&mu, g);
                let fixed = monotone_count(
                    mu.iter().sum(),
                    &Target::Fixed(canonical_of_type(&mu)),
                    k,
                    true,
                    DEFAULT_BUDGET,
                )
                .unwrap();
                assert_eq!(
                    monotone_hurwitz(&mu, g, Normalisation::FixedTarget).unwrap(),
                    Rat::from(fixed),
                    "mu = {mu:?}, g = {g}"
                );
            }
        }
    }

    #[test]
    fn fitted_models_single_and_pair() {
        // d = 2 profiles: the constant sequence 1
        for mu in [vec![2u64], vec![1, 1]] {
            let model = fit(&mu);
            assert_eq!(model.coeff(1), Rat::one());
            assert!(model.c0().is_zero());
        }
        // d = 3, mu = (3): (2/3) 2^k - (2/3) 1^k
        let model = fit(&[3]);
        assert_eq!(model.coeff(2), rr(2, 3));
        assert_eq!(model.coeff(1), rr(-2, 3));
        assert!(model.c0().is_zero());
    }

    #[test]
    fn fitted_model_with_linear_term() {
        // d = 4, mu = (2,2): (3/8) 3^k - (2/3) 2^k + (7/24) 1^k - (1/2) k
        let model = fit(&[2, 2]);
        assert_eq!(model.coeff(3), rr(3, 8));
        assert_eq!(model.coeff(2), rr(-2, 3));
        assert_eq!(model.coeff(1), rr(7, 24));
        assert_eq!(model.c0(), &rr(-1, 2));
    }

    #[test]
    fn fitted_model_degree_five() {
        // d = 5, mu = (2,1,1,1):
        // (8/45) 4^k - (9/10) 3^k + (32/45) 2^k - (83/30) 1^k + (10/3) k
        let model = fit(&[2, 1, 1, 1]);
        assert_eq!(model.coeff(4), rr(8, 45));
        assert_eq!(model.coeff(3), rr(-9, 10));
        assert_eq!(model.coeff(2), rr(32, 45));
        assert_eq!(model.coeff(1), rr(-83, 30));
        assert_eq!(model.c0(), &rr(10, 3));
    }

    #[test]
    fn conjecture_validation() {
        let report = verify_conjecture(&[2, 1], 6, Normalisation::FixedTarget).unwrap();
        assert!(report.all_pass);
        assert_eq!(report.validated_g, vec![3, 4, 5, 6]);
        let json = serde_json::to_string(&report.to_json()).unwrap();
        assert!(json.contains("\"all_pass\":true"));
        assert!(json.contains("\"normalisation\":\"fixed-target\""));
    }

    #[test]
    fn fit_error_conditions() {
        let pts = vec![(1u64, Rat::one()), (1, Rat::one()), (2, Rat::one())];
        assert!(matches!(
            fit_exp_linear(&[3], Normalisation::FixedTarget, &pts),
            Err(Error::SingularSystem(_))
        ));
        let pts = vec![(1u64, Rat::one())];
        assert!(fit_exp_linear(&[3], Normalisation::FixedTarget, &pts).is_err());
    }
}
