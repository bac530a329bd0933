//! Manufactured cases, convergence studies and table output built on
//! [`svkit_core`].
//!
//! ```no_run
//! use svkit::study::{run_study, StudyConfig};
//! use svkit::table::to_csv;
//!
//! let config = StudyConfig { ns: vec![32, 64], ..StudyConfig::default() };
//! let result = run_study(&config).unwrap();
//! print!("{}", to_csv(&result).unwrap());
//! ```

pub mod cases;
pub mod config;
pub mod error;
pub mod study;
pub mod table;

pub use error::{HarnessError, Result};
pub use svkit_core;
