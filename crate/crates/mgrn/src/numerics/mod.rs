//! Dense-tensor arithmetic with reverse-mode differentiation, the AdamW
//! optimizer, the warmup+cosine learning-rate schedule, and the seeded
//! counter-based RNG that the rest of the crate builds on.
//!
//! Training runs at `f32`; gradient verification runs the same code at
//! `f64` through the [`Real`] trait.

pub mod gradcheck;
pub mod graph;
mod kernels;
pub mod nn;
pub mod optim;
pub mod params;
pub mod rng;
pub mod tensor;

pub use gradcheck::{grad_check, GradCheckReport};
pub use graph::{Grads, Graph, Var};
pub use optim::{AdamWConfig, LrSchedule, Optimizer, StepOutcome};
pub use params::{ParamId, Params};
pub use rng::{RngPool, StreamRng};
pub use tensor::{DType, Real, Tensor};
