use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::{Int, Rat};

use super::laurent::LaurentPoly;

/// Symmetry class of an exponential combination: `Odd` is the sinh basis
/// `e^(m hbar) - e^(-m hbar)`, `Even` the cosh basis `e^(m hbar) + e^(-m hbar)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

/// A finite linear combination of exponentials `e^(m hbar) -/+ e^(-m hbar)`
/// for `m >= 1`, plus (in the even case) a constant term counted once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpCombo {
    parity: Parity,
    terms: BTreeMap<u64, Rat>,
    m0: Option<Rat>,
}

impl ExpCombo {
    /// Extracts the exponential-combination form of a Laurent polynomial in
    /// `u = e^(hbar/2)`.
    ///
    /// Every exponent must be even (so each exponential is an integer multiple
    /// of `hbar`) and the polynomial must be symmetric or antisymmetric under
    /// `u -> 1/u`. The coefficient of `u^(2m)`, `m >= 1`, becomes the term at
    /// `m`; in the symmetric case the `u^0` coefficient is kept separately.
    pub fn from_laurent(p: &LaurentPoly<Rat>) -> Result<Self> {
        if let Some((e, _)) = p.terms().find(|(e, _)| e.rem_euclid(2) != 0) {
            return Err(Error::OddExponent(e));
        }
        let flipped = p.substitute_inverse();
        let parity = if flipped == (-p) {
            Parity::Odd
        } else if flipped == *p {
            Parity::Even
        } else {
            return Err(Error::AsymmetricInput);
        };
        let mut terms = BTreeMap::new();
        for (e, c) in p.terms() {
            if e > 0 {
                terms.insert((e / 2) as u64, c.clone());
            }
        }
        let m0 = match parity {
            Parity::Odd => None,
            Parity::Even => Some(p.coeff(0)),
        };
        Ok(ExpCombo { parity, terms, m0 })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Coefficients `m -> C(m)` for `m >= 1`.
    pub fn terms(&self) -> &BTreeMap<u64, Rat> {
        &self.terms
    }

    pub fn coeff(&self, m: u64) -> Rat {
        self.terms.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    /// The constant term of the even case, if any.
    pub fn m0(&self) -> Option<&Rat> {
        self.m0.as_ref()
    }

    /// Largest `m` with a nonzero coefficient.
    pub fn max_m(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// `k! [hbar^k]` of the combination: `sum_m 2 C(m) m^k` when the parity of
    /// `k` matches, plus the constant at `k = 0`; zero otherwise.
    pub fn eval_factorial_coeff(&self, k: u64) -> Rat {
        let matches = match self.parity {
            Parity::Odd => k % 2 == 1,
            Parity::Even => k % 2 == 0,
        };
        if !matches {
            return Rat::zero();
        }
        let two = Rat::from(Int::from(2));
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let p = num_traits::pow::pow(Int::from(*m), k as usize);
            acc += c * Rat::from(p) * &two;
        }
        if k == 0 {
            if let Some(m0) = &self.m0 {
                acc += m0;
            }
        }
        acc
    }

    /// Round trip back to the Laurent polynomial it was extracted from.
    pub fn to_laurent(&self) -> LaurentPoly<Rat> {
        let mut p = LaurentPoly::zero();
        for (m, c) in &self.terms {
            p.add_term(2 * *m as i64, c.clone());
            let mirror = match self.parity {
                Parity::Odd => -c.clone(),
                Parity::Even => c.clone(),
            };
            p.add_term(-2 * *m as i64, mirror);
        }
        if let Some(m0) = &self.m0 {
            p.add_term(0, m0.clone());
        }
        p
    }

    pub fn to_json(&self) -> Value {
        let terms: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(m, c)| (m.to_string(), Value::String(super::rat_to_string(c))))
            .collect();
        json!({
            "parity": self.parity.as_str(),
            "terms": terms,
            "m0": self.m0.as_ref().map(super::rat_to_string),
        })
    }
}

impl fmt::Display for ExpCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.parity {
            Parity::Odd => "-",
            Parity::Even => "+",
        };
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = super::rat_to_string(&c.abs());
            if mag != "1" {
                write!(f, "{mag} ")?;
            }
            write!(f, "(e^{{{m}h}} {op} e^{{-{m}h}})")?;
        }
        if let Some(m0) = &self.m0 {
            if !m0.is_zero() {
                if first {
                    write!(f, "{}", super::rat_to_string(m0))?;
                    first = false;
                } else if m0.is_negative() {
                    write!(f, " - {}", super::rat_to_string(&m0.abs()))?;
                } else {
                    write!(f, " + {}", super::rat_to_string(m0))?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::laurent::QIntProduct;
    use num_traits::One;

    fn rat(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    #[test]
    fn odd_combo_from_f211() {
        // 3 [2]^3 [1]^2 + [3]^2 [2]^3
        let p = &QIntProduct::new(Int::from(3), vec![2, 2, 2, 1, 1]).expand()
            + &QIntProduct::new(Int::one(), vec![3, 3, 2, 2, 2]).expand();
        let combo = ExpCombo::from_laurent(&p).unwrap();
        assert_eq!(combo.parity(), Parity::Odd);
        let expected: BTreeMap<u64, Rat> =
            [(6, rat(1)), (3, rat(-8)), (2, rat(-3)), (1, rat(24))].into_iter().collect();
        assert_eq!(combo.terms(), &expected);
        assert_eq!(combo.m0(), None);
        assert_eq!(combo.to_laurent(), p);
    }

    #[test]
    fn even_combo_from_square() {
        let p = QIntProduct::new(Int::one(), vec![1, 1]).expand();
        let combo = ExpCombo::from_laurent(&p).unwrap();
        assert_eq!(combo.parity(), Parity::Even);
        assert_eq!(combo.coeff(1), rat(1));
        assert_eq!(combo.m0(), Some(&rat(-2)));
    }

    #[test]
    fn rejects_bad_inputs() {
        let odd_exp = LaurentPoly::from_terms([(3, rat(1)), (-3, rat(1))]);
        assert_eq!(ExpCombo::from_laurent(&odd_exp), Err(Error::OddExponent(-3)));
        let asym = LaurentPoly::from_terms([(2, rat(1)), (-2, rat(2))]);
        assert_eq!(ExpCombo::from_laurent(&asym), Err(Error::AsymmetricInput));
    }

    #[test]
    fn factorial_coefficients_match_series() {
        let p = &QIntProduct::new(Int::from(3), vec![2, 2, 2, 1, 1]).expand()
            + &QIntProduct::new(Int::one(), vec![3, 3, 2, 2, 2]).expand();
        let combo = ExpCombo::from_laurent(&p).unwrap();
        for k in 0..10u32 {
            let mut fact = Int::one();
            for i in 1..=k as u64 {
                fact *= Int::from(i);
            }
            assert_eq!(
                combo.eval_factorial_coeff(k as u64) / Rat::from(fact.clone()),
                p.hbar_coeff(k),
                "k = {k}"
            );
        }
    }

    #[test]
    fn json_shape() {
        let p = QIntProduct::new(Int::one(), vec![1, 1]).expand();
        let combo = ExpCombo::from_laurent(&p).unwrap();
        assert_eq!(
            serde_json::to_string(&combo.to_json()).unwrap(),
            r#"{"m0":"-2","parity":"even","terms":{"1":"1"}}"#
        );
    }
}
