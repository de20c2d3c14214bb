//! The integer scalar abstraction used by field and curve arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use std::fmt::{Debug, Display};
use std::hash::Hash;

/// Exact signed integers: machine words for quick experiments, `BigInt`
/// whenever coefficients can grow.
pub trait Scalar:
    Integer + Signed + Clone + FromPrimitive + ToPrimitive + Debug + Display + Hash + Send + Sync + 'static
{
    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("value does not fit the scalar type")
    }

    fn to_bigint(&self) -> BigInt;

    /// Residue in [0, m).
    fn mod_u64(&self, m: u64) -> u64 {
        self.mod_floor(&Self::of(m as i64)).to_u64().unwrap()
    }
}

impl Scalar for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}
