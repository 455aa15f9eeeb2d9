// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod curve;
pub mod diversity;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod output;
pub mod quad;
pub mod specfun;
pub mod svg;

pub use error::UwocError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
