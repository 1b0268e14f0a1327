#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod concentration;
pub mod cli;
pub mod error;
pub mod fgrowth;
pub mod finite_oracle;
pub mod gross_schedule;
pub mod hardy_criteria;
pub mod interp;
pub mod isoperimetry;
pub mod langevin_lab;
pub mod line_measure;
pub mod orlicz;
pub mod quad;
pub mod verify;

pub use error::{Error, Result};
