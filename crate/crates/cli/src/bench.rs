//! Step-cost benchmark: embedded vs direct walker at identical parameters.
//!
//! Both solvers run the same (C1, C2, dt, T) problem while every step is
//! timed individually. The per-decile mean step wall times go to
//! `bench.csv` (schema `decile,embedded_mean_s,direct_mean_s`), and the
//! last-to-first decile ratios — the embedded solver's should stay near 1,
//! the direct solver's grows with the stored path — are printed to stdout.

use std::fmt::Write as _;
use std::time::Instant;

use membed::direct::DirectWalkerSim;
use membed::embedding::{evolve, init_state};
use membed::walker::{WalkerParams, WalkerSystem};

use crate::config::BenchConfig;
use crate::output::{fmt_f64, write_all, OutputFile};
use crate::CliError;

/// Mean of one decile slice of the step durations (seconds).
fn decile_means(durations: &[f64]) -> Vec<f64> {
    let n = durations.len();
    (0..10)
        .map(|i| {
            let slice = &durations[i * n / 10..(i + 1) * n / 10];
            slice.iter().sum::<f64>() / slice.len() as f64
        })
        .collect()
}

pub fn run(cfg: &BenchConfig) -> Result<(), CliError> {
    let params = WalkerParams {
        c1: cfg.c1,
        c2: cfg.c2,
        m: cfg.nodes,
        dt: cfg.dt,
        ic: cfg.ic,
    };

    // Embedded solver: time every step through the stride-1 observer.
    let system = WalkerSystem::new(params);
    let state = init_state(&system, 0.0, &[cfg.ic.0, cfg.ic.1]);
    let mut embedded = Vec::new();
    let mut prev = Instant::now();
    evolve(&system, state, cfg.dt, cfg.t_final, 1, |_| {
        let now = Instant::now();
        embedded.push((now - prev).as_secs_f64());
        prev = now;
    })
    .map_err(CliError::Divergence)?;

    if embedded.len() < 10 {
        return Err(CliError::Config(format!(
            "benchmark run takes only {} step(s); at least 10 are needed for decile statistics",
            embedded.len()
        )));
    }

    // Direct solver: identical stepping loop, timing each step.
    let mut sim = DirectWalkerSim::new(params);
    let mut direct = Vec::new();
    loop {
        let remaining = cfg.t_final - sim.t();
        if remaining <= cfg.dt * 1e-12 {
            break;
        }
        let h = if remaining < cfg.dt * (1.0 + 1e-9) {
            remaining
        } else {
            cfg.dt
        };
        let start = Instant::now();
        sim.step(h).map_err(CliError::Divergence)?;
        direct.push(start.elapsed().as_secs_f64());
    }

    let emb_means = decile_means(&embedded);
    let dir_means = decile_means(&direct);

    let mut table = String::from("decile,embedded_mean_s,direct_mean_s\n");
    for i in 0..10 {
        let _ = writeln!(
            table,
            "{},{},{}",
            i + 1,
            fmt_f64(emb_means[i]),
            fmt_f64(dir_means[i])
        );
    }

    println!(
        "bench: {} steps at dt = {} (C1 = {}, C2 = {}, M = {})",
        embedded.len(),
        cfg.dt,
        cfg.c1,
        cfg.c2,
        cfg.nodes
    );
    println!("decile  embedded_mean_s  direct_mean_s");
    for i in 0..10 {
        println!("{:>6}  {:>15.3e}  {:>13.3e}", i + 1, emb_means[i], dir_means[i]);
    }
    println!(
        "last/first decile ratio: embedded {:.3}, direct {:.3}",
        emb_means[9] / emb_means[0],
        dir_means[9] / dir_means[0]
    );

    write_all(
        &cfg.out,
        &[OutputFile {
            name: "bench.csv".into(),
            contents: table,
        }],
    )
}
