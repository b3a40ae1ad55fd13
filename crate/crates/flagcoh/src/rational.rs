//! Exact rational scalars and small helpers shared across the crate.
//!
//! Everything downstream computes over `Rat` (arbitrary-precision rationals);
//! no floating point appears anywhere in this crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Rational n/d. Panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Canonical text form: `p` when the denominator is 1, otherwise `p/q` with q > 0.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the output of [`format_rat`]. Accepts optional sign, `p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<Int>().ok().map(Rat::from_integer),
        Some((num, den)) => {
            let n = num.trim().parse::<Int>().ok()?;
            let d = den.trim().parse::<Int>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
    }
}

/// Clears denominators and divides by the content, so the result is an
/// integer vector with coprime entries. The sign is normalized so the first
/// nonzero entry is positive. Returns `None` for the zero vector.
pub fn primitive_integer_vector(v: &[Rat]) -> Option<Vec<Int>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut content = Int::zero();
    for x in &ints {
        content = content.gcd(x);
    }
    for x in &mut ints {
        *x = &*x / &content;
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -x.clone();
            }
        }
    }
    Some(ints)
}
