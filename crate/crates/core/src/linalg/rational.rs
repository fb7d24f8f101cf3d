use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational coefficient. Always reduced, denominator positive.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Zero denominators are rejected.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `|numerator * denominator|`, the pivot magnitude used by elimination.
pub(crate) fn pivot_weight(r: &Rational) -> BigInt {
    (r.numer() * r.denom()).abs()
}

/// Renders a doubled grading as an exact half: `3 -> "3/2"`, `-4 -> "-2"`.
pub fn format_half(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{doubled}/2")
    }
}

/// Inverse of [`format_half`]; also accepts plain integers.
pub fn parse_half(s: &str) -> Option<i64> {
    let r = parse_rational(s)?;
    let twice = r * int(2);
    if twice.denom().is_one() {
        i64::try_from(twice.numer().clone()).ok()
    } else {
        None
    }
}
