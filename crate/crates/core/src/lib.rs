//! Boolean functions as exhaustive truth tables.
//!
//! The crate builds bit-packed tables from formulas or from the named
//! families [`families::god_function`] and [`families::dayenu`], extracts
//! their full disjunctive normal forms, and computes exact satisfaction
//! probabilities under independent product measures.
//!
//! ```
//! use dayenu_core::{families, probability::{sat_probability, ProductMeasure}};
//!
//! let d15 = families::dayenu(15).unwrap();
//! let half = ProductMeasure::uniform(15, "1/2".parse().unwrap()).unwrap();
//! let p = sat_probability(&d15, &half).unwrap();
//! assert_eq!(p.to_string(), "2047/2048");
//! assert_eq!(p.to_decimal(7), "0.9995117");
//! ```

pub mod error;
pub mod expr;
pub mod families;
pub mod normal_form;
pub mod probability;
pub mod table;

pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use normal_form::{Dnf, Minterm};
pub use probability::{ProductMeasure, Rational};
pub use table::{Assignment, TruthTable, VarId};
