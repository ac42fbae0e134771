//! Weighted pushdown automata over path semirings: shortest distance and
//! exact k shortest accepting paths.
//!
//! ```
//! use wpda_kbest::{fixtures, kpaths, semiring::Tropical};
//!
//! let m = fixtures::h2trap::<Tropical>();
//! let best = kpaths::lazy_kshortest(&m, 2).unwrap();
//! assert_eq!(best.weights(), vec![Tropical::from(3), Tropical::from(4)]);
//! ```

pub mod automata;
pub mod bench;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod inference;
pub mod kpaths;
pub mod oracle;
pub mod semiring;

pub use error::{Error, Result};
