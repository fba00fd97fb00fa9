//! Exact rational scalars and their text forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type ExactScalar = BigRational;

pub fn int(value: impl Into<BigInt>) -> ExactScalar {
    BigRational::from_integer(value.into())
}

pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> ExactScalar {
    BigRational::new(numer.into(), denom.into())
}

/// `num/den`, denominator always present (`"3/1"`, `"0/1"`).
pub fn to_exact_string(value: &ExactScalar) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &ExactScalar) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `"3"`, `"-2/5"` or a terminating decimal such as `"0.125"` into an
/// exact rational. Decimals are read exactly, never through `f64`.
pub fn parse_rational(text: &str) -> Result<ExactScalar> {
    let s = text.trim();
    let bad = |position: usize, message: &str| Error::Parse {
        position,
        message: format!("{message} in rational {text:?}"),
    };
    if s.is_empty() {
        return Err(bad(0, "empty value"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad(0, "bad numerator"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| bad(num.len() + 1, "bad denominator"))?;
        if d.is_zero() {
            return Err(bad(num.len() + 1, "zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad(whole.len() + 1, "bad fractional digits"));
        }
        let w: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits
                .parse()
                .map_err(|_| bad(0, "bad integer part"))?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let f: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse()
                .map_err(|_| bad(whole.len() + 1, "bad fractional digits"))?
        };
        let magnitude = BigRational::new(w * &scale + f, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| bad(0, "not a number"))?;
    Ok(BigRational::from_integer(n))
}

/// Parses a probability (a rational in `[0, 1]`).
pub fn parse_probability(text: &str) -> Result<ExactScalar> {
    let q = parse_rational(text)?;
    if q.is_negative() || q > BigRational::one() {
        return Err(Error::Domain {
            value: text.to_string(),
            domain: "[0, 1]",
        });
    }
    Ok(q)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(n,k) q^k (1-q)^(n-k)`.
pub fn binomial_weight(n: usize, k: usize, q: &ExactScalar) -> ExactScalar {
    let one_minus = BigRational::one() - q;
    BigRational::from_integer(binomial(n, k))
        * num_traits::pow(q.clone(), k)
        * num_traits::pow(one_minus, n - k)
}
