//! Structure identifiability and learning from conditional-independence
//! oracles that may answer a bounded number of queries incorrectly.

pub mod adversary;
pub mod cli;
pub mod error;
pub mod graph;
pub mod identifiability;
pub mod io;
pub mod learners;
pub mod oracle;
pub mod separation;
pub mod table;

pub use error::{Error, Result};
