//! Exact rational helpers shared by every module.
//!
//! Everything numeric in this crate is a [`Q`]: an arbitrary-precision
//! rational. Floating point never enters the computation path.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qu(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Returns `a / b`, or `None` when `b` is zero.
pub fn checked_div(a: &Q, b: &Q) -> Option<Q> {
    if b.is_zero() {
        None
    } else {
        Some(a / b)
    }
}

/// Sign as -1, 0 or 1.
pub fn sign(a: &Q) -> i8 {
    match a.cmp(&Q::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

pub fn is_nonneg(a: &Q) -> bool {
    !a.is_negative()
}

/// The value as a `u64` if it is a nonnegative integer that fits.
pub fn to_u64(a: &Q) -> Option<u64> {
    if a.is_integer() {
        a.to_integer().to_u64()
    } else {
        None
    }
}

/// The value as an `i64` if it is an integer that fits.
pub fn to_i64(a: &Q) -> Option<i64> {
    if a.is_integer() {
        a.to_integer().to_i64()
    } else {
        None
    }
}

/// `"p/q"` in lowest terms, or `"p"` when the denominator is one.
pub fn fmt_q(a: &Q) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Parses the form written by [`fmt_q`].
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn cube(a: &Q) -> Q {
    a * a * a
}

pub fn square(a: &Q) -> Q {
    a * a
}
