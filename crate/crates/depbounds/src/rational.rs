//! Helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parses a rational from `"a/b"`, an integer literal, or a plain decimal
/// such as `"0.25"`. Decimals convert exactly (base-10 numerator over a
/// power of ten), so `parse_rational("0.1")` is 1/10, not the nearest f64.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("invalid rational numerator `{num}`"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("invalid rational denominator `{den}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let sign = if int_part.trim_start().starts_with('-') {
            -1
        } else {
            1
        };
        let int_part = if int_part.is_empty() || int_part == "-" {
            "0"
        } else {
            int_part
        };
        let i: BigInt = int_part
            .parse()
            .map_err(|_| format!("invalid decimal `{s}`"))?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("invalid decimal `{s}`"));
        }
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| format!("invalid decimal `{s}`"))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(f * sign, scale);
        return Ok(BigRational::from_integer(i) + frac);
    }
    let n: BigInt = s.parse().map_err(|_| format!("invalid rational `{s}`"))?;
    Ok(BigRational::from_integer(n))
}

/// Formats a rational as `"a/b"`, or `"a"` when the denominator is 1.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn from_u64(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `r^k` for a nonnegative integer exponent, exact.
pub fn pow_u32(r: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = r.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    acc
}

/// Smallest integer ≥ r.
pub fn ceil_to_u32(r: &BigRational) -> u32 {
    let c = r.ceil();
    c.numer().to_u32().unwrap_or(u32::MAX)
}

pub fn is_strictly_between_zero_and_one(r: &BigRational) -> bool {
    r.is_positive() && r < &BigRational::one()
}

/// Binomial coefficient C(n, k) in u64 (0 when k > n). Errors on overflow.
pub fn binomial(n: u64, k: u64) -> Result<u64, String> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // multiply before divide stays integral because prefix products of
        // (n-k+1..=n)/(1..=k) are binomials themselves
        acc = acc
            .checked_mul(n - k + 1 + i)
            .ok_or_else(|| format!("binomial({n},{k}) overflows u64"))?
            / (i + 1);
    }
    Ok(acc)
}

/// k! in u64. Errors on overflow (k ≥ 21).
pub fn factorial(k: u64) -> Result<u64, String> {
    let mut acc: u64 = 1;
    for i in 2..=k {
        acc = acc
            .checked_mul(i)
            .ok_or_else(|| format!("{k}! overflows u64"))?;
    }
    Ok(acc)
}
