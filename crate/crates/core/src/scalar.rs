//! Numeric abstraction shared by scoring and rating.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Arithmetic needed by the score and rank computations.
pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {
    fn of(v: u32) -> Self {
        <Self as FromPrimitive>::from_u32(v).expect("u32 fits every scalar")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug> Scalar for T {}

/// Exact rational arithmetic; halves and group means stay exact.
pub type Exact = Ratio<i64>;
