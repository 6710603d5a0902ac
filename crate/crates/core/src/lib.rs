//! Exact and numerical tools for finite-gap differential operators on
//! elliptic curves.

pub mod cm;
pub mod error;
pub mod exact;
pub mod locus3;
pub mod monodromy;
pub mod operator;
pub mod oracle;
pub mod series;
pub mod verify;

pub use error::{Error, Result};

/// Engine version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
