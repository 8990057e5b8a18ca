//! Scalar abstraction for the numeric pipeline.
//!
//! Kernel scoring and the evaluation metrics are written against [`Real`]
//! rather than a concrete float so the same code runs at `f32` or `f64`.
//! Concrete aliases live at the crate root.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + NumAssign + Sum + Debug + Send + Sync + 'static {
    /// Lossy conversion for display and CSV formatting.
    fn as_f64(self) -> f64;

    /// Exact small-integer embedding (counts, sizes).
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f32 {
    fn as_f64(self) -> f64 {
        f64::from(self)
    }
}

impl Real for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}
