//! Scalar abstraction shared by every numeric routine in the crate.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

/// Floating point type the library computes in.
///
/// Implemented for `f32` and `f64`. Most of the bounds come from
/// [`num_traits`]; the serde bounds let checkpoints and scalers be written
/// to disk for either precision.
pub trait Scalar:
    'static
    + Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Sum
    + Default
    + Display
    + LowerExp
    + Debug
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
{
    /// Lossy conversion from an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
