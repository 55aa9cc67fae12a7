//! File formats, run configuration and the batch driver behind the `tfq`
//! command.

pub mod config;
pub mod error;
pub mod io;
pub mod report;
pub mod run;

pub use config::{Command, Format, KernelChoice, MapSpec, Overrides, RunConfig, SignalSpec};
pub use error::{Error, Result};
pub use report::Report;
