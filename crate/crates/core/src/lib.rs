pub mod absolute;
pub mod base;
pub mod cli;
pub mod enriched;
pub mod error;
pub mod instances;
pub mod modcalc;

pub use error::{Error, Result};
