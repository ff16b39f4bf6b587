//! Scalar traits shared by the generic arithmetic types.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact ring coefficient for cyclotomic integers: `i64`, `i128` or `BigInt`.
///
/// Fixed-width types overflow on large Jacobi-sum products; use `BigInt`
/// unless the magnitudes are known to be small.
pub trait Coeff:
    Clone + Debug + Display + PartialEq + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Decimal rendering, used by the JSON cache formats.
    fn to_decimal(&self) -> String;
    fn from_decimal(s: &str) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl Coeff for i64 {
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn from_decimal(s: &str) -> Option<Self> {
        s.parse().ok()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for i128 {
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn from_decimal(s: &str) -> Option<Self> {
        s.parse().ok()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn to_decimal(&self) -> String {
        self.to_str_radix(10)
    }
    fn from_decimal(s: &str) -> Option<Self> {
        BigInt::parse_bytes(s.as_bytes(), 10)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}
