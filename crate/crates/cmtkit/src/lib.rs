//! Numerical toolkit for consecutive-measurement tradeoff inequalities.
//!
//! The crate is organised bottom-up: [`qla`] supplies dense complex linear
//! algebra and sampling, [`cmt`] evaluates tradeoff statistics and bounds,
//! [`jordan`] handles two-projector geometry, [`games`] covers nonlocal games
//! and CHSH bounds, [`crypto`] turns the bounds into security parameters, and
//! [`figures`] emits the comparison series.

pub mod cmt;
pub mod config;
pub mod crypto;
pub mod error;
pub mod figures;
pub mod games;
pub mod jordan;
pub mod qla;
pub mod report;

pub use config::Tolerances;
pub use error::{Error, Result};
