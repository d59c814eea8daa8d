pub mod canon;
pub mod catalog;
pub mod critreg;
pub mod decimal;
pub mod error;
pub mod group;
pub mod manifest;
pub mod growth;
pub mod process;
pub mod ratio;
pub mod realize;
pub mod reproduce;
pub mod wordmetric;

pub use error::{Error, Result};
