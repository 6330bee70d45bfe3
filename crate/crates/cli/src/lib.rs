//! Command-line front end of `strictlyap`: experiment configs, the example
//! gallery and the `report.json` format.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod gallery;
pub mod report;
pub mod runner;
