//! Exact rational arithmetic helpers.
//!
//! Everything downstream of the LP works with `num::BigRational` so that cut
//! values, narrow-cut comparisons and invariant checks are exact. The helpers
//! here cover construction, the `p/q` text form used in reports, and a
//! rounded decimal rendering for human output.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// Rational with the given integer value.
pub fn rat(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact text form: `p/q` in lowest terms, or just `p` for integers.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the output of [`rat_str`]: an integer or `p/q` with `q > 0`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
    }
}

/// Decimal rendering with `digits` places after the point, rounding half away
/// from zero. Used only as a convenience next to the exact form.
pub fn rat_decimal(r: &Rat, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let abs = r.abs();
    let scaled = abs.numer() * &scale;
    let mut quo = &scaled / abs.denom();
    let rem = &scaled % abs.denom();
    if &rem * 2 >= *abs.denom() {
        quo += 1;
    }
    let int_part = &quo / &scale;
    let frac_part = &quo % &scale;
    let sign = if r.is_negative() && !quo.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac:0>width$}", frac = frac_part, width = digits as usize)
    }
}
