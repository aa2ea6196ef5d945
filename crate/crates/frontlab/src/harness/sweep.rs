//! Cartesian sweep scheduler: one isolated run directory per grid point,
//! executed in parallel, with a single merged table. Per-point failures are
//! recorded without aborting the sweep.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::harness::config::{parse_config_str, RunConfig};
use crate::harness::emit::{csv_float, write_csv};
use crate::harness::pipeline::{simulate_run, SimulationSummary};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepAxis {
    /// Dotted path into the configuration, e.g. `model.params.mu`.
    pub path: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub axes: Vec<SweepAxis>,
}

fn set_path(value: &mut Value, path: &str, v: f64) -> Result<()> {
    let mut cursor = value;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let map = cursor
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("sweep axis path `{path}` is not an object")))?;
        if i + 1 == parts.len() {
            map.insert(part.to_string(), serde_json::json!(v));
            return Ok(());
        }
        cursor = map.entry(part.to_string()).or_insert_with(|| serde_json::json!({}));
    }
    Ok(())
}

/// Run the Cartesian sweep defined in the configuration: each grid point is
/// a full simulation pipeline in `out/run_<k>/`, merged into `sweep.csv`.
pub fn run_sweep(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let sweep = cfg
        .sweep
        .clone()
        .ok_or_else(|| Error::Config("sweep: configuration has no `sweep` section".into()))?;
    if sweep.axes.is_empty() {
        return Err(Error::Config("sweep: at least one axis required".into()));
    }
    let base = serde_json::to_value(cfg)?;

    // Cartesian product of axis indices.
    let mut points: Vec<Vec<usize>> = vec![Vec::new()];
    for axis in &sweep.axes {
        let mut next = Vec::new();
        for p in &points {
            for k in 0..axis.values.len() {
                let mut q = p.clone();
                q.push(k);
                next.push(q);
            }
        }
        points = next;
    }

    std::fs::create_dir_all(out_dir)?;
    let parallelism = std::env::var("FRONTLAB_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(cfg.parallelism)
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Config(format!("sweep: thread pool: {e}")))?;

    let results: Vec<(Vec<f64>, std::result::Result<SimulationSummary, String>)> =
        pool.install(|| {
            points
                .par_iter()
                .enumerate()
                .map(|(idx, indices)| {
                    let mut value = base.clone();
                    let mut coords = Vec::new();
                    for (axis, &k) in sweep.axes.iter().zip(indices) {
                        let v = axis.values[k];
                        coords.push(v);
                        set_path(&mut value, &axis.path, v).expect("axis path");
                    }
                    let run_dir = out_dir.join(format!("run_{idx:04}"));
                    let out = (|| -> Result<SimulationSummary> {
                        std::fs::create_dir_all(&run_dir)?;
                        let cfg = parse_config_str(&serde_json::to_string(&value)?)?;
                        simulate_run(&cfg, &run_dir)
                    })()
                    .map_err(|e| format!("{e}"));
                    (coords, out)
                })
                .collect()
        });

    let mut header: Vec<&str> = sweep.axes.iter().map(|a| a.path.as_str()).collect();
    header.extend(["status", "fitted_speed", "sublinear", "wake_state", "separation"]);
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|(coords, res)| {
            let mut row: Vec<String> = coords.iter().map(|&v| csv_float(v)).collect();
            match res {
                Ok(s) => {
                    row.push("ok".into());
                    row.push(csv_float(s.fitted_speed));
                    row.push(if s.sublinear { "1".into() } else { "0".into() });
                    row.push(
                        s.wake_state.map(|i| i.to_string()).unwrap_or_else(|| "-".into()),
                    );
                    row.push(
                        s.separation.map(csv_float).unwrap_or_else(|| "-".into()),
                    );
                }
                Err(e) => {
                    row.push(format!("error: {}", e.replace(',', ";")));
                    row.extend(["-".into(), "-".into(), "-".into(), "-".into()]);
                }
            }
            row
        })
        .collect();
    write_csv(&out_dir.join("sweep.csv"), &header, &rows)
}
