//! The ground field: exact rationals with arbitrary-precision integers.
//!
//! `BigRational` keeps every value in canonical reduced form (gcd 1,
//! positive denominator), which is what makes echelon forms and hence all
//! reported bases reproducible.

use alloc::string::String;
use alloc::string::ToString;

use num_bigint::BigInt;
pub use num_rational::BigRational as Scalar;
use num_traits::{One, Zero};

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_zero(s: &Scalar) -> bool {
    s.is_zero()
}

/// Renders as `p` or `p/q`, matching the `p/q` wire format.
pub fn display(s: &Scalar) -> String {
    s.to_string()
}

/// Parses `p` or `p/q` with optional sign and surrounding whitespace.
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

pub fn sign_scalar(negative: bool) -> Scalar {
    if negative {
        -one()
    } else {
        one()
    }
}
