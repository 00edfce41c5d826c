//! Scalar abstraction for the length functional and the bound formulas.
//!
//! Everything that only needs field operations and an order is written
//! against [`Scalar`], so the same code evaluates in exact rationals
//! (the default, see [`crate::Rational`]) or in `f64`/`f32` for quick
//! plotting.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive};

/// An ordered field the grope formulas can be evaluated in.
pub trait Scalar: Num + Clone + PartialOrd + Debug + FromPrimitive {
    /// Embeds a (possibly huge) surface count.
    fn from_count(n: u128) -> Self {
        Self::from_u128(n).expect("count representable in scalar type")
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar type")
    }

    /// `num / den` computed in the field.
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn powu(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn is_at_least_one(&self) -> bool {
        *self >= Self::one()
    }
}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + Debug + FromPrimitive {}

/// Parses `p`, `p/q` or a finite decimal such as `1.5` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int_digits}{frac_part}").parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(digits, den);
        return Some(if negative { -value } else { value });
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// `p/q` (or `p` for integers), the canonical exact rendering.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Six-place decimal rendering, used for display only.
pub fn format_decimal(value: &BigRational) -> String {
    // round half away from zero on the exact value
    let scale = BigInt::from(1_000_000);
    let scaled = value * BigRational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded < BigInt::from(0);
    let magnitude = if negative { -rounded } else { rounded };
    let int_part = &magnitude / &scale;
    let frac_part = &magnitude % &scale;
    let frac = frac_part.to_u64().unwrap_or(0);
    format!(
        "{}{}.{:06}",
        if negative { "-" } else { "" },
        int_part,
        frac
    )
}

/// `p/q (≈ d.dddddd)`.
pub fn format_exact_and_decimal(value: &BigRational) -> String {
    format!("{} (≈ {})", format_rational(value), format_decimal(value))
}
