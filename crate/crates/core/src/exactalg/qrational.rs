use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::{Laurent, Rat};

/// A ratio of Laurent polynomials in `u`, the scalar field needed for the
/// eigenvalues of the diagonal operator (which carry a `1/[b]` factor) and for
/// disconnected correlators.
///
/// Values are kept in a normal form: numerator and denominator are divided by
/// the gcd of their rational contents and scaled so the denominator's leading
/// (highest-exponent) coefficient is 1, and the denominator is dropped to 1
/// whenever it divides the numerator exactly. Equality is decided by
/// cross-multiplication, so equal values in different residual forms still
/// compare equal.
#[derive(Debug, Clone)]
pub struct QRational {
    num: Laurent,
    den: Laurent,
}

/// Content of a rational-coefficient Laurent polynomial: gcd of the
/// coefficient numerators over lcm of their denominators, signed to match the
/// leading coefficient.
fn content(p: &Laurent) -> Rat {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for (_, c) in p.terms() {
        num_gcd = num_gcd.gcd(c.numer());
        den_lcm = den_lcm.lcm(c.denom());
    }
    if num_gcd.is_zero() {
        return Rat::one();
    }
    let c = Rat::new(num_gcd, den_lcm);
    match p.leading_coeff() {
        Some(lead) if lead.is_negative() => -c,
        _ => c,
    }
}

impl QRational {
    pub fn new(num: Laurent, den: Laurent) -> Self {
        assert!(!den.is_zero(), "QRational denominator must be nonzero");
        let mut q = QRational { num, den };
        q.normalize();
        q
    }

    pub fn zero() -> Self {
        QRational { num: Laurent::zero(), den: Laurent::one() }
    }

    pub fn one() -> Self {
        QRational { num: Laurent::one(), den: Laurent::one() }
    }

    pub fn from_laurent(p: Laurent) -> Self {
        QRational { num: p, den: Laurent::one() }
    }

    /// `1 / [b]`
    pub fn inverse_qint(b: i64) -> Self {
        Self::new(Laurent::one(), super::qint(b))
    }

    pub fn num(&self) -> &Laurent {
        &self.num
    }

    pub fn den(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Laurent::one();
            return;
        }
        if let Ok(q) = self.num.exact_div(&self.den) {
            self.num = q;
            self.den = Laurent::one();
            return;
        }
        // strip the denominator's content, then make it monic; the inverse
        // scaling goes into the numerator
        let c = content(&self.den);
        self.den = self.den.scale(&c.clone().recip());
        self.num = self.num.scale(&c.recip());
        let lead = self.den.leading_coeff().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    /// The value as a Laurent polynomial, when the denominator divides the
    /// numerator exactly.
    pub fn to_laurent(&self) -> Result<Laurent> {
        self.num.exact_div(&self.den)
    }

    pub fn scale_laurent(&self, p: &Laurent) -> Self {
        Self::new(&self.num * p, self.den.clone())
    }
}

impl PartialEq for QRational {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for QRational {}

impl Add for &QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        if self.den == rhs.den {
            return QRational::new(&self.num + &rhs.num, self.den.clone());
        }
        QRational::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        self + &(-rhs)
    }
}

impl Mul for &QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        QRational::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        QRational { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Laurent::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::qint;

    #[test]
    fn reduces_exact_quotients() {
        // [6]/[2] reduces to a Laurent polynomial
        let q = QRational::new(qint(6), qint(2));
        assert_eq!(q.den(), &Laurent::one());
        assert_eq!(q.to_laurent().unwrap(), qint::<Rat>(6).exact_div(&qint(2)).unwrap());
    }

    #[test]
    fn equality_across_forms() {
        // [4]/[2]^2 == [4][2]/[2]^3
        let a = QRational::new(qint(4), &qint::<Rat>(2) * &qint(2));
        let b = QRational::new(
            &qint::<Rat>(4) * &qint(2),
            &(&qint::<Rat>(2) * &qint(2)) * &qint(2),
        );
        assert_eq!(a, b);
        assert_ne!(a, QRational::one());
    }

    #[test]
    fn arithmetic() {
        // 1/[1] + 1/[2] = ([1]+[2]) / ([1][2])
        let a = QRational::inverse_qint(1);
        let b = QRational::inverse_qint(2);
        let s = &a + &b;
        let expected = QRational::new(&qint::<Rat>(1) + &qint(2), &qint::<Rat>(1) * &qint(2));
        assert_eq!(s, expected);
        assert_eq!(&s - &b, a);
        // product of reciprocals
        let p = &a * &b;
        assert_eq!(p, QRational::new(Laurent::one(), &qint::<Rat>(1) * &qint(2)));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn monic_denominator_normal_form() {
        // build with a non-monic denominator: 1 / (3[2])
        let den = qint::<Rat>(2).scale(&Rat::from(BigInt::from(3)));
        let q = QRational::new(Laurent::one(), den);
        assert_eq!(q.den().leading_coeff().unwrap(), &Rat::one());
    }
}
