//! Multi-granular autoregressive image generation, desk scale.
//!
//! The crate trains and evaluates a small unified generation stack on
//! procedural synthetic scenes: a frozen convolutional encoder produces a
//! feature pyramid by repeated 2x2 average pooling, an autoregressive
//! backbone predicts text tokens and visual feature vectors coarse-to-fine,
//! and one conditional denoising decoder per pyramid level turns features
//! back into pixels. Everything runs on the CPU with a built-in
//! reverse-mode tensor engine, so every gradient and every metric is
//! checkable end to end.

pub mod decoder;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod mllm;
pub mod numerics;
pub mod pyramid;
pub mod synthdata;

pub use error::{Error, Result};
