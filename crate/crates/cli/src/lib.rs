//! Scenario-file front end for `uniaxial-cp`.

pub mod config;
pub mod run;

pub use config::{ConfigError, Mode, Scenario};
pub use run::{csv_string, run, summary, write_csv, Row, Status};
