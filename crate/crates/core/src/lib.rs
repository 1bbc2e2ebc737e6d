//! Chaos-based bitwise dynamical pseudorandom bit generation on a
//! fixed-point logistic map, the baseline generators it is compared against,
//! a self-contained NIST SP 800-22 test suite, and cycle-length experiments
//! on the digitized map.
//!
//! With the default `parallel` feature the suite runner and the period
//! experiment spread work over a rayon pool; without it everything runs on
//! the calling thread and produces identical results.

pub mod bits;
pub mod exec;
pub mod fxp;
pub mod generators;
pub mod maps;
pub mod period;
pub mod sts;

pub use bits::BitStream;
pub use exec::Execution;
pub use fxp::{FxError, FxFormat, FxRole, FxWord};
pub use generators::{fill_bits, BitSource, DynamicalGenerator, SeedConfig};
pub use maps::{chaotic_range, logistic_step, ChaoticRange};
