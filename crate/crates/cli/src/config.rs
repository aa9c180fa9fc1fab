//! Run configuration: TOML file loading, flag overrides, defaults, and
//! validation.
//!
//! A config file is a flat table of optional keys (see [`FileConfig`]). The
//! metadata document written next to each run (`run.toml`) nests the same
//! table under `[config]`, and the loader accepts either layout, so a
//! finished run's metadata can be fed straight back in to reproduce it.
//! Command-line flags always override file values; anything still unset
//! falls back to the model's defaults. Unknown keys, values outside their
//! validity range, and a `model` key that contradicts the subcommand are
//! all configuration errors (exit code 2).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{BenchArgs, CliError, StefanArgs, WalkerArgs};

/// The flat config-file schema. Every key is optional; whether a key is
/// *meaningful* depends on the model (`c1`, `c2`, `ic` are walker-only,
/// `t0`, `ktrunc` are stefan-only) and supplying one to the wrong model is
/// rejected rather than ignored.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub t0: Option<f64>,
    pub dt: Option<f64>,
    pub steps: Option<u64>,
    pub tfinal: Option<f64>,
    pub nodes: Option<usize>,
    pub ktrunc: Option<f64>,
    pub ic: Option<[f64; 2]>,
    pub snapshot: Option<Vec<f64>>,
    pub stride: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Fully resolved walker run (embedded or direct).
#[derive(Debug, Clone)]
pub struct WalkerConfig {
    pub direct: bool,
    pub c1: f64,
    pub c2: f64,
    pub dt: f64,
    pub t_final: f64,
    pub nodes: usize,
    pub ic: (f64, f64),
    pub stride: usize,
    pub snapshots: Vec<f64>,
    pub out: PathBuf,
}

/// Fully resolved Stefan run.
#[derive(Debug, Clone)]
pub struct StefanConfig {
    pub t0: f64,
    pub dt: f64,
    pub t_final: f64,
    pub nodes: usize,
    pub k_trunc: f64,
    pub stride: usize,
    pub snapshots: Vec<f64>,
    pub out: PathBuf,
}

/// Fully resolved benchmark run (always the walker pair).
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub c1: f64,
    pub c2: f64,
    pub dt: f64,
    pub t_final: f64,
    pub nodes: usize,
    pub ic: (f64, f64),
    pub out: PathBuf,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Read and parse a config file. Accepts either a flat key table or a run
/// metadata document whose parameters sit under `[config]` (any `[meta]`
/// table is ignored in that case).
pub fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let value: toml::Value = toml::from_str(&text)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let table = value
        .as_table()
        .ok_or_else(|| config_err(format!("{}: expected a TOML table", path.display())))?;
    let config_value = if table.contains_key("config") {
        for key in table.keys() {
            if key != "config" && key != "meta" {
                return Err(config_err(format!(
                    "{}: unexpected top-level key `{key}` next to [config]",
                    path.display()
                )));
            }
        }
        table["config"].clone()
    } else {
        value
    };
    config_value
        .try_into()
        .map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn load_or_default(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        Some(p) => load_file(p),
        None => Ok(FileConfig::default()),
    }
}

fn check_model(file: &FileConfig, expected: &str) -> Result<(), CliError> {
    if let Some(model) = &file.model {
        if model != expected {
            return Err(config_err(format!(
                "config is for model `{model}` but the subcommand expects `{expected}`"
            )));
        }
    }
    Ok(())
}

fn reject_keys(pairs: &[(&str, bool)], model: &str) -> Result<(), CliError> {
    for (key, present) in pairs {
        if *present {
            return Err(config_err(format!(
                "`{key}` does not apply to the {model} model"
            )));
        }
    }
    Ok(())
}

fn require_finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(config_err(format!("`{name}` must be finite, got {x}")))
    }
}

fn require_positive(name: &str, x: f64) -> Result<f64, CliError> {
    require_finite(name, x)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(config_err(format!("`{name}` must be positive, got {x}")))
    }
}

fn require_nonnegative(name: &str, x: f64) -> Result<f64, CliError> {
    require_finite(name, x)?;
    if x >= 0.0 {
        Ok(x)
    } else {
        Err(config_err(format!("`{name}` must be nonnegative, got {x}")))
    }
}

/// Resolve the run duration from `--steps`/`--tfinal` flags, file keys, and
/// the model default. The duration is one logical setting, so either flag
/// overrides both file keys.
fn resolve_t_final(
    flag_steps: Option<u64>,
    flag_tfinal: Option<f64>,
    file: &FileConfig,
    t_start: f64,
    dt: f64,
    default: f64,
) -> Result<f64, CliError> {
    let from_steps = |steps: u64| -> Result<f64, CliError> {
        if steps == 0 {
            return Err(config_err("`steps` must be at least 1"));
        }
        Ok(t_start + steps as f64 * dt)
    };
    let t_final = if let Some(steps) = flag_steps {
        from_steps(steps)?
    } else if let Some(t) = flag_tfinal {
        t
    } else if file.steps.is_some() && file.tfinal.is_some() {
        return Err(config_err(
            "config sets both `steps` and `tfinal`; they are mutually exclusive",
        ));
    } else if let Some(steps) = file.steps {
        from_steps(steps)?
    } else if let Some(t) = file.tfinal {
        t
    } else {
        default
    };
    require_finite("tfinal", t_final)?;
    if t_final <= t_start {
        return Err(config_err(format!(
            "final time {t_final} must exceed the start time {t_start}"
        )));
    }
    Ok(t_final)
}

/// Validate and order snapshot times. Explicit times must lie inside
/// `(t_start, t_final]`; default times outside the run are silently dropped.
fn resolve_snapshots(
    explicit: Option<Vec<f64>>,
    defaults: &[f64],
    t_start: f64,
    t_final: f64,
) -> Result<Vec<f64>, CliError> {
    let mut times = match explicit {
        Some(times) => {
            for &t in &times {
                require_finite("snapshot", t)?;
                if t <= t_start || t > t_final {
                    return Err(config_err(format!(
                        "snapshot time {t} is outside the run interval ({t_start}, {t_final}]"
                    )));
                }
            }
            times
        }
        None => defaults
            .iter()
            .copied()
            .filter(|&t| t > t_start && t <= t_final)
            .collect(),
    };
    times.sort_by(|a, b| a.partial_cmp(b).expect("snapshot times are finite"));
    for pair in times.windows(2) {
        if pair[0] == pair[1] {
            return Err(config_err(format!("duplicate snapshot time {}", pair[0])));
        }
    }
    Ok(times)
}

fn resolve_out(flag: &Option<PathBuf>, file: &FileConfig) -> PathBuf {
    flag.clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

pub fn resolve_walker(args: &WalkerArgs, direct: bool) -> Result<WalkerConfig, CliError> {
    let file = load_or_default(&args.config)?;
    let expected = if direct { "walker_direct" } else { "walker" };
    check_model(&file, expected)?;
    reject_keys(
        &[("t0", file.t0.is_some()), ("ktrunc", file.ktrunc.is_some())],
        "walker",
    )?;

    let c1 = require_nonnegative("c1", args.c1.or(file.c1).unwrap_or(0.1))?;
    let c2 = require_nonnegative("c2", args.c2.or(file.c2).unwrap_or(0.1))?;
    let dt = require_positive("dt", args.dt.or(file.dt).unwrap_or(0.01))?;
    let t_final = resolve_t_final(args.steps, args.tfinal, &file, 0.0, dt, 200.0)?;
    let nodes = args.nodes.or(file.nodes).unwrap_or(30);
    if nodes == 0 {
        return Err(config_err("`nodes` must be at least 1"));
    }
    let ic = match file.ic {
        Some([x, v]) => (
            require_finite("ic[0]", x)?,
            require_finite("ic[1]", v)?,
        ),
        None => (1.0, 1.0),
    };
    let stride = args.stride.or(file.stride).unwrap_or(1);
    if stride == 0 {
        return Err(config_err("`stride` must be at least 1"));
    }

    let explicit = args.snapshot.clone().or_else(|| file.snapshot.clone());
    if direct && explicit.is_some() {
        return Err(config_err(
            "snapshots record the spectral history field, which the direct solver does not carry",
        ));
    }
    let snapshots = if direct {
        Vec::new()
    } else {
        resolve_snapshots(explicit, &[10.0, 50.0, 100.0, 200.0], 0.0, t_final)?
    };

    Ok(WalkerConfig {
        direct,
        c1,
        c2,
        dt,
        t_final,
        nodes,
        ic,
        stride,
        snapshots,
        out: resolve_out(&args.out, &file),
    })
}

pub fn resolve_stefan(args: &StefanArgs) -> Result<StefanConfig, CliError> {
    let file = load_or_default(&args.config)?;
    check_model(&file, "stefan")?;
    reject_keys(
        &[
            ("c1", file.c1.is_some()),
            ("c2", file.c2.is_some()),
            ("ic", file.ic.is_some()),
        ],
        "stefan",
    )?;

    let t0 = require_positive("t0", file.t0.unwrap_or(0.25))?;
    let dt = require_positive("dt", args.dt.or(file.dt).unwrap_or(1e-3))?;
    let t_final = resolve_t_final(args.steps, args.tfinal, &file, t0, dt, 1.0)?;
    let nodes = args.nodes.or(file.nodes).unwrap_or(2000);
    if nodes == 0 {
        return Err(config_err("`nodes` must be at least 1"));
    }
    let k_trunc = require_positive("ktrunc", args.ktrunc.or(file.ktrunc).unwrap_or(500.0))?;
    let stride = args.stride.or(file.stride).unwrap_or(1);
    if stride == 0 {
        return Err(config_err("`stride` must be at least 1"));
    }

    let defaults = [t0 + 0.05, 2.0 * t0, 4.0 * t0];
    let explicit = args.snapshot.clone().or_else(|| file.snapshot.clone());
    let snapshots = resolve_snapshots(explicit, &defaults, t0, t_final)?;

    Ok(StefanConfig {
        t0,
        dt,
        t_final,
        nodes,
        k_trunc,
        stride,
        snapshots,
        out: resolve_out(&args.out, &file),
    })
}

pub fn resolve_bench(args: &BenchArgs) -> Result<BenchConfig, CliError> {
    let file = load_or_default(&args.config)?;
    check_model(&file, "walker")?;
    reject_keys(
        &[("t0", file.t0.is_some()), ("ktrunc", file.ktrunc.is_some())],
        "walker",
    )?;

    let c1 = require_nonnegative("c1", args.c1.or(file.c1).unwrap_or(0.1))?;
    let c2 = require_nonnegative("c2", args.c2.or(file.c2).unwrap_or(0.1))?;
    let dt = require_positive("dt", args.dt.or(file.dt).unwrap_or(0.01))?;
    let t_final = resolve_t_final(args.steps, args.tfinal, &file, 0.0, dt, 100.0)?;
    let nodes = args.nodes.or(file.nodes).unwrap_or(30);
    if nodes == 0 {
        return Err(config_err("`nodes` must be at least 1"));
    }
    let ic = match file.ic {
        Some([x, v]) => (
            require_finite("ic[0]", x)?,
            require_finite("ic[1]", v)?,
        ),
        None => (1.0, 1.0),
    };

    Ok(BenchConfig {
        c1,
        c2,
        dt,
        t_final,
        nodes,
        ic,
        out: resolve_out(&args.out, &file),
    })
}

/// The `[config]` table written into `run.toml`: the fully resolved
/// parameters of a finished run, re-ingestable through [`load_file`].
///
/// The output directory is deliberately not part of it — where a run's files
/// land is not a run parameter, and leaving it out keeps the table identical
/// for identical runs regardless of location.
#[derive(Serialize)]
pub struct ConfigDoc {
    pub model: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    pub dt: f64,
    pub tfinal: f64,
    pub nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ktrunc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ic: Option<[f64; 2]>,
    pub snapshot: Vec<f64>,
    pub stride: usize,
}

impl ConfigDoc {
    pub fn walker(cfg: &WalkerConfig) -> Self {
        ConfigDoc {
            model: if cfg.direct { "walker_direct" } else { "walker" },
            c1: Some(cfg.c1),
            c2: Some(cfg.c2),
            t0: None,
            dt: cfg.dt,
            tfinal: cfg.t_final,
            nodes: cfg.nodes,
            ktrunc: None,
            ic: Some([cfg.ic.0, cfg.ic.1]),
            snapshot: cfg.snapshots.clone(),
            stride: cfg.stride,
        }
    }

    pub fn stefan(cfg: &StefanConfig) -> Self {
        ConfigDoc {
            model: "stefan",
            c1: None,
            c2: None,
            t0: Some(cfg.t0),
            dt: cfg.dt,
            tfinal: cfg.t_final,
            nodes: cfg.nodes,
            ktrunc: Some(cfg.k_trunc),
            ic: None,
            snapshot: cfg.snapshots.clone(),
            stride: cfg.stride,
        }
    }
}
