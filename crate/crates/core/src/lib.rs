pub mod cli;
pub mod codes;
pub mod error;
pub mod lattice;
pub mod modform;
pub mod qseries;
pub mod rational;
pub mod secrecy;
pub mod tables;
pub mod theta;

pub use error::{Error, Result};
pub use qseries::QSeries;
