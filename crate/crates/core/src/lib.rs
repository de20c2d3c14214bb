//! Frobenius traces, reduction types and CM searches for elliptic curves
//! over quadratic fields.

pub mod arith;
pub mod cmsearch;
pub mod congruence;
pub mod ellcurve;
pub mod ff;
pub mod heavenly;
pub mod json;
pub mod num;
pub mod pointcount;
pub mod quadfield;
pub mod scarcity;
pub mod traces;

use num_bigint::BigInt;

pub use num::Scalar;
pub use ellcurve::CurveOverK;
pub use quadfield::{FieldElem, QuadField};

/// Field elements with arbitrary-precision coordinates.
pub type Elem = FieldElem<BigInt>;

/// Curves over K with arbitrary-precision coefficients.
pub type Curve = CurveOverK<BigInt>;
