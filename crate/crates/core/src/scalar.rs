//! Scalar field abstraction.
//!
//! Every computation is generic over [`Scalar`]. Verification runs use
//! [`Rational`] (exact big rationals); large Monte Carlo runs use `f64`.
//! A computation never mixes the two.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{NumAssign, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = BigRational;

pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Send + Sync + Signed + NumAssign + 'static
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_bigint(n: &BigInt) -> Self;

    /// `numer / denom`; `denom` must be nonzero.
    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// Parses `p/q`, an integer, or a decimal literal (`-0.125`, `1.5e-3`).
    fn parse_str(s: &str) -> Result<Self>;

    /// `p/q` (or `p`) for exact scalars, shortest round-trip decimal for floats.
    fn to_text(&self) -> String;

    /// Exact value; floats convert without rounding, non-finite floats map to 0.
    fn to_rational(&self) -> Rational;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn from_u64(n: u64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_bigint(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }

    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Self {
        Rational::new(numer.clone(), denom.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_str(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_text(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Self {
        // Ratio::to_f64 keeps precision when numerator and denominator
        // individually overflow f64.
        ToPrimitive::to_f64(&Rational::new(numer.clone(), denom.clone())).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            return Ok(Scalar::to_f64(&parse_rational(s)?));
        }
        s.parse::<f64>()
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }

    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn to_text(&self) -> String {
        format!("{self}")
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}
