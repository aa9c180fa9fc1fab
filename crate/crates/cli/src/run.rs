//! Simulation runners: drive a resolved config to completion, render the
//! trajectory, snapshots, and metadata into buffers, then write everything.
//!
//! Trajectory schemas (one header row, 17 significant digits per number,
//! strictly increasing t, initial state included):
//!   walker / walker-direct:  t,x_d,v_d,memory_force
//!   stefan:                  t,l,v,g_value,memory_value,l_exact,abs_error
//!
//! History snapshots are written as `hist_1.csv`, `hist_2.csv`, ... in
//! ascending snapshot-time order with schema `k,re_h,im_h`. Rows are recorded
//! every `stride`-th step with the final state always included; snapshot
//! times that do not fall on the step grid are reached by a shortened landing
//! step, after which stepping resumes with the configured dt.

use std::time::Instant;

use membed::direct::DirectWalkerSim;
use membed::embedding::{evolve, init_state, EmbeddedState, EmbeddedSystem};
use membed::stefan::{SimilaritySolution, StefanParams, StefanSystem};
use membed::walker::{WalkerParams, WalkerSystem};

use crate::config::{ConfigDoc, StefanConfig, WalkerConfig};
use crate::output::{fmt_f64, render_history, render_run_doc, write_all, OutputFile};
use crate::CliError;

/// Drive an embedded system to `t_final`, pausing at each snapshot time to
/// render the history field. `record` runs after every step.
fn evolve_segmented(
    system: &impl EmbeddedSystem,
    mut state: EmbeddedState,
    dt: f64,
    t_final: f64,
    snapshots: &[f64],
    mut record: impl FnMut(&EmbeddedState),
) -> Result<(EmbeddedState, Vec<OutputFile>), CliError> {
    let mut files = Vec::new();
    for (i, &t_snap) in snapshots.iter().enumerate() {
        state = evolve(system, state, dt, t_snap, 1, &mut record)
            .map_err(CliError::Divergence)?;
        files.push(OutputFile {
            name: format!("hist_{}.csv", i + 1),
            contents: render_history(&system.grid().nodes, &state.h),
        });
    }
    if state.t < t_final {
        state = evolve(system, state, dt, t_final, 1, &mut record)
            .map_err(CliError::Divergence)?;
    }
    Ok((state, files))
}

fn walker_row(system: &WalkerSystem, s: &EmbeddedState) -> String {
    format!(
        "{},{},{},{}\n",
        fmt_f64(s.t),
        fmt_f64(s.y[0]),
        fmt_f64(s.y[1]),
        fmt_f64(system.memory_force(&s.h))
    )
}

pub fn run_walker_embedded(cfg: &WalkerConfig) -> Result<(), CliError> {
    let system = WalkerSystem::new(WalkerParams {
        c1: cfg.c1,
        c2: cfg.c2,
        m: cfg.nodes,
        dt: cfg.dt,
        ic: cfg.ic,
    });
    let state = init_state(&system, 0.0, &[cfg.ic.0, cfg.ic.1]);

    let mut traj = String::from("t,x_d,v_d,memory_force\n");
    traj.push_str(&walker_row(&system, &state));
    let mut steps: u64 = 0;
    let mut last_recorded = state.t;

    let start = Instant::now();
    let (final_state, snapshot_files) = evolve_segmented(
        &system,
        state,
        cfg.dt,
        cfg.t_final,
        &cfg.snapshots,
        |s| {
            steps += 1;
            if steps % cfg.stride as u64 == 0 {
                traj.push_str(&walker_row(&system, s));
                last_recorded = s.t;
            }
        },
    )?;
    let wall = start.elapsed().as_secs_f64();

    if last_recorded < final_state.t {
        traj.push_str(&walker_row(&system, &final_state));
    }

    let mut files = vec![OutputFile {
        name: "trajectory.csv".into(),
        contents: traj,
    }];
    files.extend(snapshot_files);
    files.push(OutputFile {
        name: "run.toml".into(),
        contents: render_run_doc(ConfigDoc::walker(cfg), wall, steps),
    });
    write_all(&cfg.out, &files)
}

pub fn run_walker_direct(cfg: &WalkerConfig) -> Result<(), CliError> {
    let mut sim = DirectWalkerSim::new(WalkerParams {
        c1: cfg.c1,
        c2: cfg.c2,
        m: cfg.nodes,
        dt: cfg.dt,
        ic: cfg.ic,
    });

    let direct_row = |sim: &DirectWalkerSim| {
        format!(
            "{},{},{},{}\n",
            fmt_f64(sim.t()),
            fmt_f64(sim.position()),
            fmt_f64(sim.velocity()),
            fmt_f64(sim.memory_force())
        )
    };

    let mut traj = String::from("t,x_d,v_d,memory_force\n");
    traj.push_str(&direct_row(&sim));
    let mut steps: u64 = 0;
    let mut last_recorded = sim.t();

    let start = Instant::now();
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
        sim.step(h).map_err(CliError::Divergence)?;
        steps += 1;
        if steps % cfg.stride as u64 == 0 {
            traj.push_str(&direct_row(&sim));
            last_recorded = sim.t();
        }
    }
    let wall = start.elapsed().as_secs_f64();

    if last_recorded < sim.t() {
        traj.push_str(&direct_row(&sim));
    }

    let files = [
        OutputFile {
            name: "trajectory.csv".into(),
            contents: traj,
        },
        OutputFile {
            name: "run.toml".into(),
            contents: render_run_doc(ConfigDoc::walker(cfg), wall, steps),
        },
    ];
    write_all(&cfg.out, &files)
}

fn stefan_row(system: &StefanSystem, sol: &SimilaritySolution, s: &EmbeddedState) -> String {
    let l = s.y[0];
    let mem = s.memory_value(system);
    let g = system.g_value(s.t, l);
    let l_exact = sol.front(s.t);
    format!(
        "{},{},{},{},{},{},{}\n",
        fmt_f64(s.t),
        fmt_f64(l),
        fmt_f64(g + mem),
        fmt_f64(g),
        fmt_f64(mem),
        fmt_f64(l_exact),
        fmt_f64((l - l_exact).abs())
    )
}

pub fn run_stefan(cfg: &StefanConfig) -> Result<(), CliError> {
    let system = StefanSystem::new(StefanParams::similarity(
        cfg.t0,
        cfg.k_trunc,
        cfg.nodes,
        cfg.dt,
    ));
    let sol = SimilaritySolution::new(cfg.t0);
    let state = system.initial_state();

    let mut traj = String::from("t,l,v,g_value,memory_value,l_exact,abs_error\n");
    traj.push_str(&stefan_row(&system, &sol, &state));
    let mut steps: u64 = 0;
    let mut last_recorded = state.t;

    let start = Instant::now();
    let (final_state, snapshot_files) = evolve_segmented(
        &system,
        state,
        cfg.dt,
        cfg.t_final,
        &cfg.snapshots,
        |s| {
            steps += 1;
            if steps % cfg.stride as u64 == 0 {
                traj.push_str(&stefan_row(&system, &sol, s));
                last_recorded = s.t;
            }
        },
    )?;
    let wall = start.elapsed().as_secs_f64();

    if last_recorded < final_state.t {
        traj.push_str(&stefan_row(&system, &sol, &final_state));
    }

    let mut files = vec![OutputFile {
        name: "trajectory.csv".into(),
        contents: traj,
    }];
    files.extend(snapshot_files);
    files.push(OutputFile {
        name: "run.toml".into(),
        contents: render_run_doc(ConfigDoc::stefan(cfg), wall, steps),
    });
    write_all(&cfg.out, &files)
}
