//! Configuration, CSV output and the subcommands of the `wiggler` binary.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod report;

pub use commands::{run, Command, CommandOutput};
pub use config::{parse_config, parse_config_str, ScenarioConfig};
pub use csv::{CsvTable, VERSION};
pub use error::{CliError, ConfigError};
pub use report::RunReport;
