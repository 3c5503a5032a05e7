//! Rate regions of the half-duplex Gaussian interference channel with
//! transmitter or receiver cooperation: evaluators for the two cooperation
//! schemes, outer bounds and baselines, and a Pareto frontier tracer.
//!
//! Rates are in bits per channel use, noise has unit variance and channel
//! gains are real amplitudes.

// `!(x > 0.0)` is used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod frontier;
pub mod model;
pub mod rc;
pub mod tc;

pub use error::{Error, Result};
pub use frontier::{trace, Allocation, Frontier, FrontierPoint, Scheme, TraceOptions};
pub use model::{ChannelGains, PowerBudget, RatePair, RcAllocation, Simplex2, Simplex3, Sym2, TcAllocation};
