//! Generic Markovian embedding engine: a mechanical state y coupled to a
//! spectrally sampled history field H.
//!
//! A model supplies, per spectral node k, the affine-in-H right-hand side
//!
//! ```text
//! Ḣ(k) = (c(k) + d(k, ·))·H(k) + s(k, ·)
//! ```
//!
//! together with the memory-free mechanical term L(t, y) and the coupling
//! that injects ∫H dk back into ẏ. The time-independent stiff part c(k) is
//! integrated exactly (ETD); d·H + s is treated explicitly.
//!
//! A step runs two stages. Stage 1 advances y and every node with explicit
//! (ETD-)Euler predictors using beginning-of-step values; stage 2 applies the
//! corrector to both using stage-1 values. Each stage evaluates the model
//! functions once, and the history-integral reduction happens before the
//! mechanical right-hand side so both see consistent same-stage data. Node
//! updates and reductions run sequentially in ascending node order, keeping
//! every run bit-reproducible.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::integrators::EtdCoeffs;
use crate::quadrature::{integrate_history, HistoryField, SpectralGrid};
use crate::Error;

/// Same-stage values a model's coefficients may depend on.
///
/// `mech_rhs` is the full mechanical right-hand side (local term plus memory
/// coupling) of the current stage. Models whose spectral coefficients involve
/// the *rate* of the mechanical variable — the Stefan front, where v = l̇ is
/// an observable rather than a state — read it from here; models whose
/// coefficients involve the state itself read `y`.
#[derive(Clone, Copy, Debug)]
pub struct StageValues<'a> {
    pub t: f64,
    pub y: &'a [f64],
    pub mech_rhs: &'a [f64],
}

/// A nonlocal model in embedded form.
pub trait EmbeddedSystem {
    /// Number of first-order mechanical variables.
    fn mech_dim(&self) -> usize;

    /// Spectral grid carrying the history field.
    fn grid(&self) -> &SpectralGrid;

    /// Memory-free part L(t, y) of ẏ, written into `out`.
    fn local_term(&self, t: f64, y: &[f64], out: &mut [f64]);

    /// Add the memory contribution to ẏ, given memory_value = ∫H dk.
    fn coupling(&self, memory_value: f64, t: f64, y: &[f64], out: &mut [f64]);

    /// Stiff linear coefficient c(k); time- and state-independent.
    fn stiff_coeff(&self, k: f64) -> Complex64;

    /// State-dependent multiplicative rate d(k, ·).
    fn drift_coeff(&self, k: f64, stage: &StageValues) -> Complex64;

    /// Source s(k, ·).
    fn source(&self, k: f64, stage: &StageValues) -> Complex64;
}

/// Mechanical state, history field, and current time of an embedded run.
#[derive(Clone, Debug)]
pub struct EmbeddedState {
    pub t: f64,
    pub y: Vec<f64>,
    pub h: HistoryField,
}

impl EmbeddedState {
    /// Memory value ∫H dk on the system's grid.
    pub fn memory_value(&self, system: &impl EmbeddedSystem) -> f64 {
        integrate_history(&self.h, system.grid())
    }

    /// Full mechanical right-hand side at the state's own time.
    pub fn mech_rhs(&self, system: &impl EmbeddedSystem) -> Vec<f64> {
        let mut rhs = vec![0.0; self.y.len()];
        system.local_term(self.t, &self.y, &mut rhs);
        system.coupling(self.memory_value(system), self.t, &self.y, &mut rhs);
        rhs
    }
}

/// Initial state at time `t0`: mechanical variables `y0`, H ≡ 0.
///
/// # Panics
///
/// Panics if `y0.len() != system.mech_dim()`.
pub fn init_state(system: &impl EmbeddedSystem, t0: f64, y0: &[f64]) -> EmbeddedState {
    assert_eq!(
        y0.len(),
        system.mech_dim(),
        "init_state: y0 has wrong dimension"
    );
    EmbeddedState {
        t: t0,
        y: y0.to_vec(),
        h: vec![Complex64::new(0.0, 0.0); system.grid().len()],
    }
}

/// Scratch space for the coupled step, reused across steps by [`evolve`].
struct StepScratch {
    coeffs: Vec<EtdCoeffs>,
    coeffs_dt: f64,
    f0: Vec<Complex64>,
    ha: Vec<Complex64>,
    rhs0: Vec<f64>,
    rhs1: Vec<f64>,
    ystar: Vec<f64>,
}

impl StepScratch {
    fn new(system: &impl EmbeddedSystem, dt: f64) -> Self {
        let nodes = system.grid().len();
        let mech = system.mech_dim();
        let mut scratch = StepScratch {
            coeffs: Vec::with_capacity(nodes),
            coeffs_dt: 0.0,
            f0: vec![Complex64::new(0.0, 0.0); nodes],
            ha: vec![Complex64::new(0.0, 0.0); nodes],
            rhs0: vec![0.0; mech],
            rhs1: vec![0.0; mech],
            ystar: vec![0.0; mech],
        };
        scratch.set_dt(system, dt);
        scratch
    }

    /// (Re)compute the per-node ETD coefficients for step size `dt`.
    fn set_dt(&mut self, system: &impl EmbeddedSystem, dt: f64) {
        self.coeffs.clear();
        self.coeffs
            .extend(system.grid().nodes.iter().map(|&k| EtdCoeffs::new(system.stiff_coeff(k), dt)));
        self.coeffs_dt = dt;
    }
}

/// One coupled two-stage step, in place. `scratch.coeffs_dt` must equal `dt`.
fn step_in_place(
    system: &impl EmbeddedSystem,
    state: &mut EmbeddedState,
    dt: f64,
    scratch: &mut StepScratch,
) -> Result<(), Error> {
    debug_assert!(dt > 0.0);
    debug_assert_eq!(scratch.coeffs_dt, dt);
    let grid = system.grid();
    let t = state.t;

    // Stage 1: beginning-of-step values, Euler / ETD-Euler predictors.
    let mem0 = integrate_history(&state.h, grid);
    system.local_term(t, &state.y, &mut scratch.rhs0);
    system.coupling(mem0, t, &state.y, &mut scratch.rhs0);
    let stage0 = StageValues {
        t,
        y: &state.y,
        mech_rhs: &scratch.rhs0,
    };
    for n in 0..grid.len() {
        let k = grid.nodes[n];
        let f0 = system.drift_coeff(k, &stage0) * state.h[n] + system.source(k, &stage0);
        scratch.f0[n] = f0;
        scratch.ha[n] = scratch.coeffs[n].predict(state.h[n], f0);
    }
    for i in 0..state.y.len() {
        scratch.ystar[i] = state.y[i] + dt * scratch.rhs0[i];
    }

    // Stage 2: stage-1 values, correctors.
    let t1 = t + dt;
    let mem1 = integrate_history(&scratch.ha, grid);
    system.local_term(t1, &scratch.ystar, &mut scratch.rhs1);
    system.coupling(mem1, t1, &scratch.ystar, &mut scratch.rhs1);
    let stage1 = StageValues {
        t: t1,
        y: &scratch.ystar,
        mech_rhs: &scratch.rhs1,
    };
    for n in 0..grid.len() {
        let k = grid.nodes[n];
        let f1 = system.drift_coeff(k, &stage1) * scratch.ha[n] + system.source(k, &stage1);
        state.h[n] = scratch.coeffs[n].correct(scratch.ha[n], scratch.f0[n], f1);
    }
    let half = 0.5 * dt;
    for i in 0..state.y.len() {
        state.y[i] = scratch.ystar[i] + half * (scratch.rhs1[i] - scratch.rhs0[i]);
    }
    state.t = t1;

    if !(state.y.iter().all(|v| v.is_finite()) && mem1.is_finite()) {
        return Err(Error::Divergence { t: state.t });
    }
    Ok(())
}

/// One coupled two-stage step of the mechanical state and every history node.
///
/// # Panics
///
/// Panics if `dt <= 0` or the state does not match the system's dimensions.
pub fn step(
    system: &impl EmbeddedSystem,
    state: &EmbeddedState,
    dt: f64,
) -> Result<EmbeddedState, Error> {
    assert!(dt > 0.0, "step: dt must be positive");
    assert_eq!(state.y.len(), system.mech_dim(), "step: state dimension");
    assert_eq!(state.h.len(), system.grid().len(), "step: field length");
    let mut next = state.clone();
    let mut scratch = StepScratch::new(system, dt);
    step_in_place(system, &mut next, dt, &mut scratch)?;
    Ok(next)
}

/// Repeated fixed-dt stepping until `t_final`, with the last step shortened
/// to land on `t_final` exactly.
///
/// The observer runs after every `stride`-th step and after the final step;
/// `t_final == state.t` returns the state unchanged with no observer calls.
/// ETD coefficients are computed once and reused, so per-step cost is
/// independent of elapsed time.
///
/// # Panics
///
/// Panics if `dt <= 0`, `stride == 0`, or `t_final < state.t`.
pub fn evolve(
    system: &impl EmbeddedSystem,
    state: EmbeddedState,
    dt: f64,
    t_final: f64,
    stride: usize,
    mut observer: impl FnMut(&EmbeddedState),
) -> Result<EmbeddedState, Error> {
    assert!(dt > 0.0, "evolve: dt must be positive");
    assert!(stride >= 1, "evolve: stride must be >= 1");
    assert!(t_final >= state.t, "evolve: t_final must not precede state.t");
    assert_eq!(state.y.len(), system.mech_dim(), "evolve: state dimension");
    assert_eq!(state.h.len(), system.grid().len(), "evolve: field length");

    let mut state = state;
    let mut scratch = StepScratch::new(system, dt);
    let mut steps_taken: usize = 0;
    loop {
        let remaining = t_final - state.t;
        // Anything under dt·1e-12 is accumulated rounding, not a real step.
        if remaining <= dt * 1e-12 {
            break;
        }
        let landing = remaining < dt * (1.0 + 1e-9);
        let h = if landing { remaining } else { dt };
        if scratch.coeffs_dt != h {
            scratch.set_dt(system, h);
        }
        step_in_place(system, &mut state, h, &mut scratch)?;
        steps_taken += 1;
        if landing {
            state.t = t_final;
            observer(&state);
            break;
        }
        if steps_taken % stride == 0 {
            observer(&state);
        }
    }
    Ok(state)
}
