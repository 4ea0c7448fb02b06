//! Instance files, generators, brute-force oracles, theorem suites and the maximal-sensitivity
//! probe around `acl-core`. The `acl` binary is a thin shell over this library.

pub mod analyze;
pub mod error;
pub mod generate;
pub mod instance;
pub mod oracle;
pub mod probe;
pub mod report;
pub mod suite;

pub use analyze::{analyze, Analysis, Options};
pub use error::{HarnessError, Result};
pub use instance::{emit, parse, Instance, InstanceFile};
pub use report::Report;
