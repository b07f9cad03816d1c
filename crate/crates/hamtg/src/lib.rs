//! Harness around `hamtg-core`: file formats, a basis cache, seeded
//! conjecture campaigns, solver cross-validation and the `hamtg` command.

pub mod cache;
pub mod campaign;
pub mod commands;
pub mod crossval;
pub mod error;
pub mod formats;

pub use error::{HarnessError, Result};
