use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Num, One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::{Int, Rat};

/// Coefficient ring for [`LaurentPoly`]. Blanket-implemented for any exact
/// scalar with ring operations from `num-traits` (the crate instantiates it
/// at [`crate::Rat`]).
pub trait Coeff: Clone + PartialEq + Num + Neg<Output = Self> {}
impl<T: Clone + PartialEq + Num + Neg<Output = T>> Coeff for T {}

/// Sparse Laurent polynomial in `u = e^(hbar/2)`.
///
/// Coefficients are stored in a map keyed by the integer exponent of `u`; a
/// stored coefficient is never zero, so equality of values is equality of
/// maps. All operations are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly<T> {
    coeffs: BTreeMap<i64, T>,
}

impl<T: Coeff> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, T::one())
    }

    /// `c * u^e`
    pub fn monomial(exp: i64, c: T) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, T)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c * u^e`, stripping the entry if the result is zero.
    pub fn add_term(&mut self, exp: i64, c: T) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&exp) {
            None => {
                self.coeffs.insert(exp, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.coeffs.insert(exp, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> T {
        self.coeffs.get(&exp).cloned().unwrap_or_else(T::zero)
    }

    /// Iterates `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Leading (highest-exponent) coefficient.
    pub fn leading_coeff(&self) -> Option<&T> {
        self.coeffs.values().next_back()
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, x)| (*e, x.clone() * c.clone()))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// `p(1/u)`
    pub fn substitute_inverse(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplies by `u^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `q` with `q * den == self`; the divisor must be nonzero.
    pub fn exact_div(&self, den: &Self) -> Result<Self> {
        let (de, dc) = match den.coeffs.iter().next_back() {
            Some((e, c)) => (*e, c.clone()),
            None => panic!("division by the zero Laurent polynomial"),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // quotient exponents are bounded below by num_min - den_min
        let qmin = self.min_exp().unwrap() - den.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((&re, rc)) = rem.coeffs.iter().next_back() {
            let qe = re - de;
            if qe < qmin {
                return Err(Error::NonExactDivision);
            }
            let qc = rc.clone() / dc.clone();
            quot.add_term(qe, qc.clone());
            let piece = den.scale(&qc).shift(qe);
            rem = &rem - &piece;
        }
        Ok(quot)
    }
}

impl<T: Coeff> Add for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn add(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (e, c) in rhs.coeffs.iter() {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<T: Coeff> Sub for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn sub(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (e, c) in rhs.coeffs.iter() {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<T: Coeff> Mul for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn mul(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.coeffs.iter() {
            for (e2, c2) in rhs.coeffs.iter() {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Coeff> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

/// The q-integer `[k] = u^k - u^(-k)`; antisymmetric in `k`, with `[0] = 0`.
pub fn qint<T: Coeff>(k: i64) -> LaurentPoly<T> {
    if k == 0 {
        return LaurentPoly::zero();
    }
    LaurentPoly::from_terms([(k, T::one()), (-k, -T::one())])
}

/// `[k_1] [k_2] ... [k_l]` for a slice of factors.
pub fn qint_product<T: Coeff>(factors: &[u64]) -> LaurentPoly<T> {
    let mut acc = LaurentPoly::one();
    for &k in factors {
        acc = &acc * &qint(k as i64);
    }
    acc
}

impl LaurentPoly<Rat> {
    /// Coefficient of `hbar^k / k!` in the expansion of `p` under
    /// `u^e = e^(e hbar / 2)`, divided by `k!`: returns
    /// `sum_e c_e (e/2)^k / k!`.
    pub fn hbar_coeff(&self, k: u32) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in self.terms() {
            let mut p = Rat::new(Int::from(e), Int::from(2));
            p = num_traits::pow::pow(p, k as usize);
            acc += c * p;
        }
        let mut fact = Int::one();
        for i in 1..=k as u64 {
            fact *= Int::from(i);
        }
        acc / Rat::from(fact)
    }

    /// The first `len` coefficients of the `hbar`-power series of `p`.
    pub fn hbar_series(&self, len: usize) -> Vec<Rat> {
        (0..len as u32).map(|k| self.hbar_coeff(k)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exponents": self
                .terms()
                .map(|(e, c)| json!([e, super::rat_to_string(c)]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("exponents")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse { position: 0, message: "missing exponents".into() })?;
        let mut p = Self::zero();
        for item in arr {
            let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse {
                position: 0,
                message: "exponent entry must be a pair".into(),
            })?;
            let e = pair[0].as_i64().ok_or_else(|| Error::Parse {
                position: 0,
                message: "exponent must be an integer".into(),
            })?;
            let c = super::rat_from_string(pair[1].as_str().ok_or_else(|| Error::Parse {
                position: 0,
                message: "coefficient must be a string".into(),
            })?)?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let mag = c.abs();
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
            let coeff_str = super::rat_to_string(&mag);
            match (*e, coeff_str.as_str()) {
                (0, s) => write!(f, "{s}")?,
                (1, "1") => write!(f, "u")?,
                (1, s) => write!(f, "{s} u")?,
                (e, "1") => write!(f, "u^{e}")?,
                (e, s) => write!(f, "{s} u^{e}")?,
            }
        }
        Ok(())
    }
}

/// An integer multiple of a product of q-integers `coeff * [k_1] ... [k_l]`,
/// with the factor multiset stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QIntProduct {
    coeff: Int,
    factors: Vec<u64>,
}

impl QIntProduct {
    pub fn new(coeff: Int, mut factors: Vec<u64>) -> Self {
        assert!(factors.iter().all(|&k| k > 0), "q-integer factors must be positive");
        factors.sort_unstable();
        QIntProduct { coeff, factors }
    }

    pub fn coeff(&self) -> &Int {
        &self.coeff
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// `coeff * prod [k_i]`, fully multiplied out.
    pub fn expand(&self) -> LaurentPoly<Rat> {
        qint_product::<Rat>(&self.factors).scale(&Rat::from(self.coeff.clone()))
    }

    pub fn to_json(&self) -> Value {
        json!({ "coeff": self.coeff.to_string(), "factors": self.factors })
    }
}

impl fmt::Display for QIntProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.coeff);
        }
        if self.coeff == Int::from(-1) {
            write!(f, "-")?;
        } else if self.coeff != Int::one() {
            write!(f, "{}", self.coeff)?;
        }
        // descending, with powers collected
        let mut i = self.factors.len();
        while i > 0 {
            let k = self.factors[i - 1];
            let mut count = 0;
            while i > 0 && self.factors[i - 1] == k {
                count += 1;
                i -= 1;
            }
            if count == 1 {
                write!(f, "[{k}]")?;
            } else {
                write!(f, "[{k}]^{count}")?;
            }
        }
        Ok(())
    }
}
