//! The 1D walking-droplet stroboscopic model in embedded form.
//!
//! The droplet obeys
//!
//! ```text
//! ẍ_d = −ẋ_d − C₁ ∫₀ᵗ J₁(x_d(t) − x_d(s)) e^{−C₂(t−s)} ds,
//! ```
//!
//! a force balance between drag and the guiding wave accumulated along the
//! whole path. Writing J₁ through its integral representation
//! J₁(z) = −(i/π)∫₋₁¹ e^{ikz} k/√(1−k²) dk turns the memory term into
//! ∫ H(k,t) w(k) dk with one complex history node per k:
//!
//! ```text
//! v̇_d = −v_d + C₁ ∫₋₁¹ H(k,t) w(k) dk,
//! Ḣ(k) = −C₂·H + i k v_d·H − i k/π,       H(k, 0) = 0.
//! ```
//!
//! This module provides the embedded system, dual J₁ evaluations (series /
//! asymptotic for arbitrary arguments, plus the quadrature form of the
//! representation itself for cross-validation), the analytical steady speed,
//! and regime diagnostics corresponding to the known droplet states.

use core::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::embedding::{EmbeddedSystem, StageValues};
use crate::math;
use crate::quadrature::{chebyshev_weight_rule, integrate_history, SpectralGrid};

/// Walker parameters: wave amplitude C₁ ≥ 0, inverse memory C₂ ≥ 0 (small C₂
/// means long-lived waves), quadrature parameter M, step size, and initial
/// condition (x_d0, v_d0).
#[derive(Clone, Copy, Debug)]
pub struct WalkerParams {
    pub c1: f64,
    pub c2: f64,
    pub m: usize,
    pub dt: f64,
    pub ic: (f64, f64),
}

impl Default for WalkerParams {
    fn default() -> Self {
        WalkerParams {
            c1: 0.1,
            c2: 0.1,
            m: 30,
            dt: 0.01,
            ic: (1.0, 1.0),
        }
    }
}

/// The walker as an [`EmbeddedSystem`] with mechanical state (x_d, v_d).
#[derive(Clone, Debug)]
pub struct WalkerSystem {
    params: WalkerParams,
    grid: SpectralGrid,
}

impl WalkerSystem {
    /// # Panics
    ///
    /// Panics if C₁ or C₂ is negative or non-finite, M = 0, or dt ≤ 0.
    pub fn new(params: WalkerParams) -> Self {
        assert!(
            params.c1 >= 0.0 && params.c1.is_finite(),
            "walker: C1 must be finite and non-negative"
        );
        assert!(
            params.c2 >= 0.0 && params.c2.is_finite(),
            "walker: C2 must be finite and non-negative"
        );
        assert!(params.dt > 0.0, "walker: dt must be positive");
        let grid = chebyshev_weight_rule(params.m);
        WalkerSystem { params, grid }
    }

    pub fn params(&self) -> &WalkerParams {
        &self.params
    }

    /// Memory force C₁·∫H w dk acting on the droplet in a given state.
    pub fn memory_force(&self, h: &[Complex64]) -> f64 {
        self.params.c1 * integrate_history(h, &self.grid)
    }
}

impl EmbeddedSystem for WalkerSystem {
    fn mech_dim(&self) -> usize {
        2
    }

    fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    fn local_term(&self, _t: f64, y: &[f64], out: &mut [f64]) {
        out[0] = y[1];
        out[1] = -y[1];
    }

    fn coupling(&self, memory_value: f64, _t: f64, _y: &[f64], out: &mut [f64]) {
        out[1] += self.params.c1 * memory_value;
    }

    fn stiff_coeff(&self, _k: f64) -> Complex64 {
        Complex64::new(-self.params.c2, 0.0)
    }

    fn drift_coeff(&self, k: f64, stage: &StageValues) -> Complex64 {
        Complex64::new(0.0, k * stage.y[1])
    }

    fn source(&self, k: f64, _stage: &StageValues) -> Complex64 {
        Complex64::new(0.0, -k * FRAC_1_PI)
    }
}

/// J₁(z) to ≤ 1e−10 absolute for |z| ≤ 50.
///
/// Ascending series for |z| < 12, Hankel asymptotic expansion above; the
/// function is odd, so negative arguments reduce to −J₁(|z|).
pub fn bessel_j1(z: f64) -> f64 {
    let az = math::abs(z);
    if az == 0.0 {
        return 0.0;
    }
    let value = if az < 12.0 {
        j1_series(az)
    } else {
        j1_asymptotic(az)
    };
    if z < 0.0 {
        -value
    } else {
        value
    }
}

/// Σ_{m≥0} (−z²/4)^m (z/2) / (m!(m+1)!). Worst-case cancellation at the
/// branch edge z ≈ 12 costs ~4 digits of the ~700-sized largest term,
/// keeping the absolute error near 1e−13.
fn j1_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 0.5 * z;
    let mut sum = term;
    let mut scale = math::abs(sum);
    let mut m = 1.0;
    while m < 64.0 {
        term *= -q / (m * (m + 1.0));
        sum += term;
        scale = scale.max(math::abs(sum));
        if math::abs(term) <= 1e-17 * scale {
            break;
        }
        m += 1.0;
    }
    sum
}

/// Hankel expansion J₁(z) ≈ √(2/πz)·(P(z)cos χ − Q(z)sin χ), χ = z − 3π/4,
/// with P, Q polynomials in 1/z². Coefficients are (−1)^k a_{2k} and
/// (−1)^k a_{2k+1} for a_m = Π_{j=1..m}(4 − (2j−1)²)/(m!·8^m); eight terms
/// keep the truncation error below 7e−12 for z ≥ 12.
fn j1_asymptotic(z: f64) -> f64 {
    const P: [f64; 8] = [
        1.0,
        0.1171875,
        -0.144195556640625,
        0.6765925884246826,
        -6.883914268109947,
        121.59789187653587,
        -3302.2722944808525,
        127641.2726461746,
    ];
    const Q: [f64; 8] = [
        0.375,
        -0.1025390625,
        0.2775764465332031,
        -1.993531733751297,
        27.248827311268542,
        -603.8440767050702,
        19718.37591223663,
        -890297.8767070678,
    ];
    let zi2 = 1.0 / (z * z);
    let mut p = P[7];
    let mut q = Q[7];
    for i in (0..7).rev() {
        p = p * zi2 + P[i];
        q = q * zi2 + Q[i];
    }
    q /= z;
    let chi = z - 3.0 * FRAC_PI_4;
    math::sqrt(2.0 / (PI * z)) * (p * math::cos(chi) - q * math::sin(chi))
}

/// The spectral representation −(i/π)∫₋₁¹ e^{ikz} k/√(1−k²) dk evaluated by
/// the Chebyshev-weight rule; cross-validates [`bessel_j1`] and the
/// embedding's foundation. The imaginary part of the quadrature sum vanishes
/// by symmetry and is discarded.
///
/// # Panics
///
/// Panics if `m == 0`.
pub fn bessel_j1_quadrature(z: f64, m: usize) -> f64 {
    let grid = chebyshev_weight_rule(m);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&k, &w) in grid.nodes.iter().zip(&grid.weights) {
        let phase = Complex64::new(math::cos(k * z), math::sin(k * z));
        acc += (w * k) * phase;
    }
    (Complex64::new(0.0, -FRAC_1_PI) * acc).re
}

/// Analytical steady walking speed
/// v∞ = (1/√2)·√(2C₁ − C₂² − √(C₂⁴ + 4C₁C₂²)), or `None` when the radicand
/// is not positive (no walking solution).
///
/// # Panics
///
/// Panics if C₁ or C₂ is negative.
pub fn steady_speed(c1: f64, c2: f64) -> Option<f64> {
    assert!(c1 >= 0.0 && c2 >= 0.0, "steady_speed: C1, C2 must be >= 0");
    let c2sq = c2 * c2;
    let radicand = 2.0 * c1 - c2sq - math::sqrt(c2sq * c2sq + 4.0 * c1 * c2sq);
    if radicand > 0.0 {
        Some(FRAC_1_SQRT_2 * math::sqrt(radicand))
    } else {
        None
    }
}

/// Droplet regimes distinguishable from a long trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkerRegime {
    NonWalker,
    SteadyWalker,
    Unsteady,
}

/// Trajectories must reach this time before classification is meaningful.
pub const REGIME_MIN_TIME: f64 = 100.0;
/// Fraction of the run (by time, from the end) the diagnostics average over.
pub const REGIME_WINDOW_FRACTION: f64 = 0.2;
/// |v| below this throughout the window ⇒ the droplet is not walking.
pub const NON_WALKER_SPEED_TOL: f64 = 1e-4;
/// Relative fluctuation of |v| below this about a nonzero mean ⇒ steady.
pub const STEADY_FLUCTUATION_TOL: f64 = 1e-3;

/// Classify a walker trajectory by the behaviour of |v| over the last
/// [`REGIME_WINDOW_FRACTION`] of the run.
///
/// # Panics
///
/// Panics if the series are empty or mismatched, or the trajectory ends
/// before [`REGIME_MIN_TIME`].
pub fn classify_regime(times: &[f64], velocities: &[f64]) -> WalkerRegime {
    assert_eq!(
        times.len(),
        velocities.len(),
        "classify_regime: series length mismatch"
    );
    assert!(!times.is_empty(), "classify_regime: empty trajectory");
    let t_end = times[times.len() - 1];
    assert!(
        t_end >= REGIME_MIN_TIME,
        "classify_regime: trajectory too short (must cover t >= {REGIME_MIN_TIME})"
    );

    let window_start = t_end - REGIME_WINDOW_FRACTION * (t_end - times[0]);
    let mut max_speed = 0.0f64;
    let mut min_speed = f64::INFINITY;
    let mut mean_speed = 0.0;
    let mut count = 0usize;
    for (&t, &v) in times.iter().zip(velocities) {
        if t >= window_start {
            let speed = math::abs(v);
            max_speed = max_speed.max(speed);
            min_speed = min_speed.min(speed);
            mean_speed += speed;
            count += 1;
        }
    }
    assert!(count > 0, "classify_regime: no samples in the window");
    mean_speed /= count as f64;

    if max_speed < NON_WALKER_SPEED_TOL {
        WalkerRegime::NonWalker
    } else if (max_speed - min_speed) / mean_speed < STEADY_FLUCTUATION_TOL {
        WalkerRegime::SteadyWalker
    } else {
        WalkerRegime::Unsteady
    }
}
