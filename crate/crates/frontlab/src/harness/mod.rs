//! Configuration, deterministic output writing, and the sweep scheduler.

mod config;
mod emit;
pub mod pipeline;
mod sweep;

pub use config::{
    parse_config, parse_config_str, DispersionConfig, InitialConfig, ModelConfig, NumericsConfig,
    ProfileConfig, RunConfig, TrackingConfig,
};
pub use emit::{csv_float, write_csv, write_json, write_markdown_report, write_text};
pub use sweep::{run_sweep, SweepAxis, SweepConfig};
