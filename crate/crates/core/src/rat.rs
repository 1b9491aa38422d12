//! Thin helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(k: i64) -> Int {
    Int::from(k)
}

pub fn rat(k: i64) -> Rat {
    Rat::from_integer(int(k))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(int(p), int(q))
}

/// Largest integer `<= r`.
pub fn floor(r: &Rat) -> Int {
    r.floor().to_integer()
}

/// Fractional part `r - floor(r)`, always in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    r - Rat::from_integer(floor(r))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Non-negative remainder of `a` modulo `n > 0`.
pub fn rem_euclid(a: &Int, n: &Int) -> Int {
    let r = a.mod_floor(n);
    debug_assert!(!r.is_negative());
    r
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap())
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().ok()?;
            let q: Int = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => {
            let p: Int = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

pub fn format_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
