//! Generalized sensitivity calculus for finite structured flow functions.
//!
//! A structured flow function is a total self-map on a finite universe together with an
//! arbitrary covering set system (the *structuring*) against which continuity, sensitivity
//! and colocalization are measured. Everything here is exact: unbounded-time quantifiers
//! are decided through orbit periodicity, and searches that cannot finish within their caps
//! report `Unknown` rather than guessing.
//!
//! The crate is `no_std` with `alloc`; file formats, generators and the command line live in
//! the companion `acl-harness` crate.

#![no_std]

extern crate alloc;

pub mod coloc;
pub mod comanence;
pub mod flow;
pub mod mask;
pub mod metric;
pub mod periodic;
pub mod sensitivity;
pub mod setsys;

pub use flow::{Development, StructuredSystem};
pub use mask::Mask;
pub use metric::MetricTable;
pub use periodic::PeriodicIntSet;
pub use setsys::SetSystem;

use core::fmt;

/// Search limits shared by the brute-force and periodicity-based routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest universe for 2^Y enumerations.
    pub brute_force: usize,
    /// Largest number of distinct generator powers scanned before answering `Unknown`.
    pub t_cap: u64,
    /// Depth cap of the sensitivity-order search.
    pub depth_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { brute_force: 16, t_cap: 4096, depth_cap: 4 }
    }
}

/// Three-valued verdict for quantifiers that may exceed a scan cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Truth::True
    }

    pub fn is_false(self) -> bool {
        self == Truth::False
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    OutOfRange { index: usize, universe: usize },
    CoverViolation,
    MetricShape(&'static str),
    LengthMismatch { expected: usize, found: usize },
    UniverseMismatch,
    CapExceeded { size: usize, cap: usize },
    NegativeTimeUnsupported,
    NotADevelopment,
    NotABijection,
    CyclicOrbitUnsupported,
    ScaleBelowResolution,
    NotATopology,
    NotInvariant,
    NoMetric,
    BadParams(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { index, universe } => {
                write!(f, "state {index} out of range for universe of size {universe}")
            }
            Error::CoverViolation => f.write_str("structuring does not cover the universe"),
            Error::MetricShape(why) => write!(f, "invalid metric table: {why}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Error::UniverseMismatch => f.write_str("operands live on different universes"),
            Error::CapExceeded { size, cap } => {
                write!(f, "universe of size {size} exceeds the brute-force cap {cap}")
            }
            Error::NegativeTimeUnsupported => {
                f.write_str("negative times need a bijective generator")
            }
            Error::NotADevelopment => f.write_str("operation needs a bijective development"),
            Error::NotABijection => f.write_str("table is not a bijection"),
            Error::CyclicOrbitUnsupported => {
                f.write_str("trajectory charts must have injective time maps")
            }
            Error::ScaleBelowResolution => {
                f.write_str("scale is below the smallest positive distance")
            }
            Error::NotATopology => f.write_str("set system is not a finite topology"),
            Error::NotInvariant => f.write_str("region is not invariant under the generator"),
            Error::NoMetric => f.write_str("operation needs a metric table"),
            Error::BadParams(why) => write!(f, "bad parameters: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least common multiple, saturating at `u64::MAX`.
pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b)).saturating_mul(b)
}
