//! Text and JSON formats, reports and the command-line front end for
//! [`adic_core`].

pub mod cli;
pub mod formats;
pub mod report;

pub use adic_core;
