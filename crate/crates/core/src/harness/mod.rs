//! Experiment runner, per-law verification suites and file emitters.

mod config;
mod io;
mod runner;
mod svg;
mod verify;

pub use config::*;
pub use io::*;
pub use runner::*;
pub use svg::*;
pub use verify::*;
