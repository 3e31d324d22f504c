//! File formats, parallel drivers and the `qdarwin` command line on top of
//! [`qdarwin_core`].
//!
//! States, configurations, reports and tomography records are exchanged as
//! JSON; tables meant for plotting are written as CSV. Every command also
//! writes a [`RunManifest`] next to its primary output.

pub mod commands;
mod error;
pub mod formats;
pub mod manifest;
pub mod parallel;

pub use commands::{run, Cli, Command};
pub use error::{CliError, Result};
pub use manifest::RunManifest;
