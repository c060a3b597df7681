//! Exact rationals and the rounding rule for real-valued thresholds.
//!
//! Bounds that involve roots are evaluated in `f64`; a count `c` meets a
//! lower bound `b` iff `c >= ceil(b − 2^−40)`, and an upper bound iff
//! `c <= floor(b + 2^−40)`.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{param, Result};

pub type Rational = Ratio<i128>;

pub const EPSILON: f64 = 1.0 / (1u64 << 40) as f64;

/// Least integer count meeting the real lower bound `bound`.
pub fn at_least(bound: f64) -> u64 {
    let c = (bound - EPSILON).ceil();
    if c <= 0.0 {
        0
    } else {
        c as u64
    }
}

/// Greatest integer count within the real upper bound `bound`, or `None`
/// when even zero exceeds it.
pub fn at_most(bound: f64) -> Option<u64> {
    let f = (bound + EPSILON).floor();
    if f < 0.0 {
        None
    } else {
        Some(f as u64)
    }
}

/// `ceil(q · m)` for a nonnegative rational `q`.
pub fn ceil_times(q: Rational, m: u128) -> u128 {
    let num = *q.numer() as u128 * m;
    let den = *q.denom() as u128;
    num.div_ceil(den)
}

/// `floor(q · m)` for a nonnegative rational `q`.
pub fn floor_times(q: Rational, m: u128) -> u128 {
    (*q.numer() as u128 * m) / *q.denom() as u128
}

pub fn to_f64(q: Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q`, an integer, a decimal (`0.55`) or scientific form (`1e-4`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().or_else(|_| param(format!("bad numerator in `{s}`")))?;
        let q: i128 = q.trim().parse().or_else(|_| param(format!("bad denominator in `{s}`")))?;
        if q.is_zero() {
            return param(format!("zero denominator in `{s}`"));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().or_else(|_| param(format!("bad exponent in `{s}`")))?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return param(format!("cannot parse `{s}` as a number"));
    }
    let scale = frac.len() as i32 - exp;
    if scale.abs() > 30 {
        return param(format!("`{s}` is out of range"));
    }
    let whole: i128 = format!("{int}{frac}").trim_start_matches('0').parse().unwrap_or(0);
    let whole = if neg { -whole } else { whole };
    let q = if scale >= 0 {
        Rational::new(whole, 10i128.pow(scale as u32))
    } else {
        Rational::from_integer(whole * 10i128.pow((-scale) as u32))
    };
    Ok(q)
}

/// Checks `0 <= q <= 1`.
pub fn unit_interval(name: &str, q: Rational) -> Result<Rational> {
    if q < Rational::zero() || q > Rational::from_integer(1) {
        return param(format!("{name} = {q} must lie in [0, 1]"));
    }
    Ok(q)
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn fraction_string(q: Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
