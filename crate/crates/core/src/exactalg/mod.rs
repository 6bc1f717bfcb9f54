//! Exact arithmetic kernel: Laurent polynomials in `u = e^(hbar/2)`,
//! q-integers, exact division, rational functions of `u`, and extraction of
//! `hbar`-series coefficients and exponential combinations.

mod expcombo;
mod laurent;
mod qrational;

pub use expcombo::{ExpCombo, Parity};
pub use laurent::{qint, qint_product, LaurentPoly, QIntProduct};
pub use qrational::QRational;

use crate::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Canonical `"p/q"` rendering of a rational (just `"p"` when integral).
pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses a canonical `"p/q"` or `"p"` rational string.
pub fn rat_from_string(s: &str) -> crate::error::Result<Rat> {
    let parse_int = |t: &str, pos: usize| {
        t.parse::<BigInt>().map_err(|_| crate::Error::Parse {
            position: pos,
            message: format!("expected integer, found {t:?}"),
        })
    };
    match s.split_once('/') {
        None => Ok(Rat::from(parse_int(s.trim(), 0)?)),
        Some((p, q)) => {
            let num = parse_int(p.trim(), 0)?;
            let den = parse_int(q.trim(), p.len() + 1)?;
            if den == BigInt::from(0) {
                return Err(crate::Error::Parse {
                    position: p.len() + 1,
                    message: "zero denominator".into(),
                });
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Renders an exact rational as a decimal string with the given number of
/// significant figures, rounding half away from zero.
pub fn rat_to_decimal(x: &Rat, sig_figs: usize) -> String {
    assert!(sig_figs > 0);
    if x.numer().is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // decimal exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = 0;
    let one = Rat::one();
    let ten = Rat::from(BigInt::from(10));
    let mut t = a.clone();
    while t >= ten {
        t = &t / &ten;
        e += 1;
    }
    while t < one {
        t = &t * &ten;
        e -= 1;
    }
    // scaled = a * 10^(sig_figs - 1 - e), rounded to nearest integer
    let shift = sig_figs as i64 - 1 - e;
    let pow = num_traits::pow::pow(BigInt::from(10), shift.unsigned_abs() as usize);
    let scaled = if shift >= 0 {
        &a * Rat::from(pow)
    } else {
        &a / Rat::from(pow)
    };
    let two = BigInt::from(2);
    let rounded = (scaled.numer() * &two + scaled.denom()) / (scaled.denom() * &two);
    let mut digits = rounded.to_string();
    // rounding may carry over to one extra digit (e.g. 999.6 -> 1000)
    let mut e = e;
    if digits.len() > sig_figs {
        digits.truncate(sig_figs);
        e += 1;
    }
    let sign = if neg { "-" } else { "" };
    if (-4..0).contains(&e) {
        let zeros = "0".repeat((-e - 1) as usize);
        format!("{sign}0.{zeros}{digits}")
    } else if e >= 0 && (e as usize) < sig_figs {
        let (int_part, frac_part) = digits.split_at(e as usize + 1);
        if frac_part.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    } else {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e}")
        } else {
            format!("{sign}{head}.{tail}e{e}")
        }
    }
}

use num_traits::Zero;

/// Divides the formal power series `num` by `den` (coefficient lists in
/// `hbar`), returning the first `len` coefficients of the quotient.
///
/// `den` may vanish at the origin as long as `num` vanishes to at least the
/// same order, i.e. the quotient must itself be a power series.
pub fn series_div(num: &[Rat], den: &[Rat], len: usize) -> crate::error::Result<Vec<Rat>> {
    let t = match den.iter().position(|c| !c.is_zero()) {
        Some(t) => t,
        None => return Err(crate::Error::NonExactDivision),
    };
    if num.iter().take(t.min(num.len())).any(|c| !c.is_zero()) {
        return Err(crate::Error::NonExactDivision);
    }
    let num = &num[t.min(num.len())..];
    let den = &den[t..];
    let lead = &den[0];
    let mut out: Vec<Rat> = Vec::with_capacity(len);
    for j in 0..len {
        let mut acc = num.get(j).cloned().unwrap_or_else(Rat::zero);
        for (i, q) in out.iter().enumerate() {
            if let Some(d) = den.get(j - i) {
                acc -= q * d;
            }
        }
        out.push(acc / lead);
    }
    Ok(out)
}
