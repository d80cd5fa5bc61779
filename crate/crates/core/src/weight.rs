//! Probability arithmetic. The engine is generic over [`Weight`] so the
//! same enumeration runs on exact rationals or on `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Float normalization tolerance.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub trait Weight:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn ratio(num: u64, den: u64) -> Self;

    fn as_f64(&self) -> f64;

    /// Equality up to the arithmetic's own precision.
    fn approx_eq(&self, other: &Self) -> bool;

    /// Exact value, when the arithmetic keeps one.
    fn exact(&self) -> Option<BigRational> {
        None
    }

    /// Exact value as "num/den".
    fn fraction(&self) -> Option<String> {
        self.exact()
            .map(|r| format!("{}/{}", r.numer(), r.denom()))
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.clone() + other.clone();
    }
}

impl Weight for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_TOLERANCE
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += *other;
    }
}

impl Weight for BigRational {
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn exact(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

/// Exact rational probability.
pub type Exact = BigRational;

/// Decimal string of a non-negative rational rounded half-up to `digits` places.
pub fn round_half_up(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let negative = x.is_negative();
    let x = x.abs();
    let scaled = x * BigRational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = r * 2;
    let rounded = if &twice >= scaled.denom() { q + 1 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if negative && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = digits as usize
    )
}

/// Decimal rendering of any weight rounded half-up.
pub fn format_weight<W: Weight>(w: &W, digits: u32) -> String {
    match w.exact() {
        Some(r) => round_half_up(&r, digits),
        None => {
            let x = w.as_f64();
            match decimal_to_rational(&format!("{x:.15}")) {
                Some(r) if x.is_finite() => round_half_up(&r, digits),
                _ => format!("{:.*}", digits as usize, x),
            }
        }
    }
}

/// Parses a plain decimal ("-0.0765") into an exact rational.
fn decimal_to_rational(s: &str) -> Option<BigRational> {
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(digits, scale))
}

/// Rounds an `f64` half-up (away from zero on exact ties in decimal).
pub fn round_f64(x: f64, digits: u32) -> f64 {
    let scale = 10f64.powi(digits as i32);
    (x * scale + 0.5).floor() / scale
}
