//! Output buffering and formatting.
//!
//! Every run renders its complete output (trajectory CSV, history snapshots,
//! metadata document) into in-memory buffers first and only touches the
//! filesystem once the simulation has finished, so a failed run never leaves
//! partial files behind.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use crate::config::ConfigDoc;
use crate::CliError;

/// Format a float with 17 significant digits, enough to reproduce the f64
/// bit pattern exactly on re-parse.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One finished output file, by name, waiting to be written.
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Render a history snapshot (`k, Re H, Im H` per spectral node, ascending
/// in k) for the grid/field pair of an embedded state.
pub fn render_history(nodes: &[f64], field: &[membed::Complex64]) -> String {
    let mut s = String::from("k,re_h,im_h\n");
    // Grids store their nodes from the upper end of the interval downward;
    // emit rows in ascending k.
    for i in (0..nodes.len()).rev() {
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_f64(nodes[i]),
            fmt_f64(field[i].re),
            fmt_f64(field[i].im)
        );
    }
    s
}

#[derive(Serialize)]
struct MetaDoc {
    version: &'static str,
    wall_time_s: f64,
    steps: u64,
}

#[derive(Serialize)]
struct RunDoc {
    config: ConfigDoc,
    meta: MetaDoc,
}

/// Render the `run.toml` metadata document: the resolved `[config]` table
/// (re-ingestable via `--config`) plus a `[meta]` table with the package
/// version, the simulation wall time, and the number of steps taken.
pub fn render_run_doc(config: ConfigDoc, wall_time_s: f64, steps: u64) -> String {
    let doc = RunDoc {
        config,
        meta: MetaDoc {
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s,
            steps,
        },
    };
    toml::to_string_pretty(&doc).expect("run metadata serializes")
}

/// Create the output directory and write every buffered file.
pub fn write_all(out_dir: &Path, files: &[OutputFile]) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))
        .map_err(CliError::Io)?;
    for file in files {
        let path = out_dir.join(&file.name);
        std::fs::write(&path, &file.contents)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(CliError::Io)?;
    }
    Ok(())
}
