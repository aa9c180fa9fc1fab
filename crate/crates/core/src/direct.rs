//! Direct (non-Markovian) walker solver: correctness oracle and performance
//! baseline.
//!
//! Integrates the same force balance as [`crate::walker`], but head-on: the
//! entire path is stored, and the memory force
//!
//! ```text
//! F(t) = C₁ ∫₀ᵗ J₁(x_d(t) − x_d(s)) e^{−C₂(t−s)} ds
//! ```
//!
//! is re-evaluated from scratch by composite trapezoidal quadrature over the
//! stored samples at every stage of every step. The kernel is smooth in s, so
//! the trapezoidal rule is second order and matches the Heun stepper. Per-step
//! cost grows linearly with the number of samples taken so far — the O(N²)
//! total the spectral embedding exists to avoid — which makes this solver the
//! baseline against which the embedded solver's flat per-step cost is
//! measured.
//!
//! There is deliberately no direct Stefan analogue: its kernels have
//! (t−s)^{−1/2}-type endpoint behavior that plain trapezoid cannot handle,
//! and the similarity solution already provides an exact oracle there.

use alloc::vec::Vec;

use crate::math;
use crate::walker::{bessel_j1, WalkerParams};
use crate::Error;

/// A stored droplet path: strictly increasing sample times with matching
/// positions.
#[derive(Clone, Debug, Default)]
pub struct PathHistory {
    times: Vec<f64>,
    positions: Vec<f64>,
}

impl PathHistory {
    pub fn new() -> Self {
        PathHistory::default()
    }

    /// Appends a sample.
    ///
    /// # Panics
    ///
    /// Panics if `t` does not strictly increase the time sequence.
    pub fn push(&mut self, t: f64, x: f64) {
        if let Some(&last) = self.times.last() {
            assert!(t > last, "PathHistory: times must be strictly increasing");
        }
        self.times.push(t);
        self.positions.push(x);
    }

    fn pop(&mut self) {
        self.times.pop();
        self.positions.pop();
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }
}

/// Memory force C₁·∫₀ᵗ J₁(x_d(t) − x_d(s)) e^{−C₂(t−s)} ds by composite
/// trapezoid over the stored samples, summed in fixed ascending order.
///
/// # Panics
///
/// Panics if the path is empty or `t` is not the last stored time.
pub fn memory_force_direct(path: &PathHistory, t: f64, c1: f64, c2: f64) -> f64 {
    assert!(!path.is_empty(), "memory_force_direct: empty path");
    let n = path.len();
    assert_eq!(
        t,
        path.times[n - 1],
        "memory_force_direct: t must be the last path time"
    );
    if n == 1 {
        return 0.0;
    }
    let times = &path.times;
    let xs = &path.positions;
    let x_t = xs[n - 1];
    let mut acc = 0.0;
    for j in 0..n {
        let w = if j == 0 {
            0.5 * (times[1] - times[0])
        } else if j == n - 1 {
            0.5 * (times[n - 1] - times[n - 2])
        } else {
            0.5 * (times[j + 1] - times[j - 1])
        };
        acc += w * bessel_j1(x_t - xs[j]) * math::exp(-c2 * (t - times[j]));
    }
    c1 * acc
}

/// A running direct simulation: the walker state plus its complete path.
pub struct DirectWalkerSim {
    c1: f64,
    c2: f64,
    path: PathHistory,
    t: f64,
    x: f64,
    v: f64,
}

impl DirectWalkerSim {
    /// Starts at t = 0 from `params.ic`. The spectral parameter `params.m`
    /// plays no role here.
    ///
    /// # Panics
    ///
    /// Panics if C₁ or C₂ is negative or not finite.
    pub fn new(params: WalkerParams) -> Self {
        assert!(params.c1 >= 0.0 && params.c1.is_finite(), "DirectWalkerSim: c1");
        assert!(params.c2 >= 0.0 && params.c2.is_finite(), "DirectWalkerSim: c2");
        let (x0, v0) = params.ic;
        let mut path = PathHistory::new();
        path.push(0.0, x0);
        DirectWalkerSim {
            c1: params.c1,
            c2: params.c2,
            path,
            t: 0.0,
            x: x0,
            v: v0,
        }
    }

    /// One Heun step. The stage-2 force is evaluated on the path extended by
    /// the provisional sample (t + dt, x*), so both stages see quadrature
    /// data consistent with their own stage values.
    ///
    /// # Panics
    ///
    /// Panics if `dt <= 0`.
    pub fn step(&mut self, dt: f64) -> Result<(), Error> {
        assert!(dt > 0.0, "step: dt must be positive");
        let f0 = memory_force_direct(&self.path, self.t, self.c1, self.c2);
        let a0 = -self.v + f0;
        let xstar = self.x + dt * self.v;
        let vstar = self.v + dt * a0;

        let t1 = self.t + dt;
        self.path.push(t1, xstar);
        let f1 = memory_force_direct(&self.path, t1, self.c1, self.c2);
        self.path.pop();
        let a1 = -vstar + f1;

        let half = 0.5 * dt;
        self.x = xstar + half * (vstar - self.v);
        self.v = vstar + half * (a1 - a0);
        self.t = t1;
        self.path.push(t1, self.x);

        if !(self.x.is_finite() && self.v.is_finite()) {
            return Err(Error::Divergence { t: self.t });
        }
        Ok(())
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn position(&self) -> f64 {
        self.x
    }

    pub fn velocity(&self) -> f64 {
        self.v
    }

    pub fn path(&self) -> &PathHistory {
        &self.path
    }

    /// Memory force at the current time, from the stored path.
    pub fn memory_force(&self) -> f64 {
        memory_force_direct(&self.path, self.t, self.c1, self.c2)
    }
}

/// A complete direct run, one record per step (plus the initial sample).
#[derive(Clone, Debug)]
pub struct DirectRun {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
    pub memory_forces: Vec<f64>,
}

/// Heun steps of the direct solver from t = 0 to `t_final`, the last step
/// shortened to land exactly. Records every sample.
///
/// # Panics
///
/// Panics if `t_final <= 0` or `params.dt <= 0`.
pub fn simulate_walker_direct(params: WalkerParams, t_final: f64) -> Result<DirectRun, Error> {
    assert!(t_final > 0.0, "simulate_walker_direct: t_final must be positive");
    assert!(params.dt > 0.0, "simulate_walker_direct: dt must be positive");
    let dt = params.dt;
    let mut sim = DirectWalkerSim::new(params);
    let mut run = DirectRun {
        times: alloc::vec![sim.t()],
        positions: alloc::vec![sim.position()],
        velocities: alloc::vec![sim.velocity()],
        memory_forces: alloc::vec![0.0],
    };
    loop {
        let remaining = t_final - sim.t();
        if remaining <= dt * 1e-12 {
            break;
        }
        let h = if remaining < dt * (1.0 + 1e-9) {
            remaining
        } else {
            dt
        };
        sim.step(h)?;
        run.times.push(sim.t());
        run.positions.push(sim.position());
        run.velocities.push(sim.velocity());
        run.memory_forces.push(sim.memory_force());
    }
    Ok(run)
}
