//! (p,q)-Baskakov-Durrmeyer-Stancu operators.
//!
//! (p,q)-calculus primitives, Jackson integrals, the operators themselves,
//! their closed-form moments, and discretised smoothness diagnostics.
//! Everything here is `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod fmath;

pub mod error;
pub mod function;
pub mod integrate;
pub mod kernel;
pub mod moments;
pub mod operators;
pub mod pq;
pub mod smoothness;
pub mod sum;

pub use error::{Error, Result, Site};
pub use function::{Growth, RealFunction};
pub use integrate::{ExpLattice, TruncationConfig};
pub use kernel::{KernelVariant, StancuParams};
pub use moments::{GammaCoefficients, MomentReference, MomentReport};
pub use operators::Operator;
pub use pq::{ExpKind, LogValue, PqParams};
pub use smoothness::{BoundReport, GridSpec, Modulus, ParamSchedule, ScanRow};
