//! Configuration, sweep drivers and result tables.

mod config;
mod runners;
mod table;

pub use config::{parse_axis, Config, Params};
pub use runners::{defaults, flow_logicals, flow_snapshots, loglog_fit, run, summarize_transistor, TransistorSummary, SUBCOMMANDS};
pub use table::{Format, ResultTable, Value, VERSION};
