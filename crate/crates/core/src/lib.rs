pub mod error;
pub mod fintop;
pub mod ideals;
pub mod modsys;
pub mod monoid;
pub mod report;
pub mod sampling;
pub mod suite;
pub mod valuation;

pub use error::{Error, Result};
