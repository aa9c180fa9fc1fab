//! Chebyshev grids and quadrature rules for spectral history integrals.
//!
//! Two rules share the node family k_n = cos(nπ/M), n = 0..M:
//!
//! - [`chebyshev_weight_rule`]: integrates f against the Chebyshev weight
//!   w(k) = 1/√(1−k²) on [−1, 1]. The weights are the trapezoidal rule in
//!   θ = arccos k (π/M interior, π/2M at the ends), which is spectrally
//!   accurate for smooth integrands because the transformed integrand is
//!   smooth and periodic.
//! - [`clenshaw_curtis_rule`]: classical Clenshaw-Curtis weights for the unit
//!   weight, computed in closed form and mapped affinely to [a, b].
//!
//! Weight setup is O(M²) and happens once per grid; no transform dependency.
//! All summations run in fixed ascending node order so results are
//! bit-reproducible.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::math;

/// Complex history field H sampled on the nodes of a [`SpectralGrid`].
pub type HistoryField = Vec<Complex64>;

/// Weight function a grid's quadrature weights absorb.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// w(k) = 1/√(1−k²) on the canonical interval.
    ChebyshevWeight,
    /// w(k) = 1.
    UnitWeight,
}

/// Quadrature nodes and weights on an interval.
///
/// Grids are immutable after construction and safe to share across threads.
#[derive(Clone, Debug)]
pub struct SpectralGrid {
    /// Node-count parameter; the grid has `m + 1` nodes.
    pub m: usize,
    /// Spectral coordinates, strictly decreasing (b down to a).
    pub nodes: Vec<f64>,
    /// Quadrature weights, matching `nodes`.
    pub weights: Vec<f64>,
    /// Endpoints (a, b) the canonical nodes are mapped to.
    pub interval: (f64, f64),
    pub weight_kind: WeightKind,
}

impl SpectralGrid {
    /// Number of nodes (`m + 1`).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Apply the rule to a real integrand, summing in ascending node order.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (&k, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(k);
        }
        acc
    }
}

/// Chebyshev nodes cos(nπ/M) for n = 0..M, exactly ±1 at the ends.
///
/// The values are computed as sin(π(M − 2n)/(2M)) so that the endpoints come
/// out exactly ±1, an even M yields an exact 0 at the midpoint, and the grid
/// is exactly antisymmetric under n ↦ M − n.
///
/// # Panics
///
/// Panics if `m == 0` (degenerate grid).
pub fn chebyshev_nodes(m: usize) -> Vec<f64> {
    assert!(m >= 1, "chebyshev_nodes: M must be >= 1");
    let mf = m as f64;
    (0..=m)
        .map(|n| math::sin(FRAC_PI_2 * (mf - 2.0 * n as f64) / mf))
        .collect()
}

/// Quadrature rule for ∫₋₁¹ f(k)/√(1−k²) dk at the Chebyshev nodes.
///
/// # Panics
///
/// Panics if `m == 0`.
pub fn chebyshev_weight_rule(m: usize) -> SpectralGrid {
    let nodes = chebyshev_nodes(m);
    let mut weights = vec![PI / m as f64; m + 1];
    weights[0] *= 0.5;
    weights[m] *= 0.5;
    SpectralGrid {
        m,
        nodes,
        weights,
        interval: (-1.0, 1.0),
        weight_kind: WeightKind::ChebyshevWeight,
    }
}

/// Classical Clenshaw-Curtis rule for ∫ₐᵇ f(k) dk, exact on polynomials of
/// degree ≤ M for even M.
///
/// Weights come from the closed-form cosine expansion (coefficients
/// 1/(1 − 4j²)); nodes are mapped affinely via the interval midpoint so a
/// symmetric interval keeps the node set exactly antisymmetric.
///
/// # Panics
///
/// Panics if `m == 0` or `a >= b`.
pub fn clenshaw_curtis_rule(m: usize, a: f64, b: f64) -> SpectralGrid {
    assert!(m >= 1, "clenshaw_curtis_rule: M must be >= 1");
    assert!(a < b, "clenshaw_curtis_rule: interval must satisfy a < b");

    let mut weights = vec![0.0; m + 1];
    if m == 1 {
        weights[0] = 1.0;
        weights[1] = 1.0;
    } else {
        let mf = m as f64;
        let endpoint = if m % 2 == 0 {
            1.0 / (mf * mf - 1.0)
        } else {
            1.0 / (mf * mf)
        };
        weights[0] = endpoint;
        weights[m] = endpoint;
        // The rule is symmetric, w_n = w_{M−n}; compute the lower half and
        // mirror so the symmetry is exact in floating point as well.
        for n in 1..=(m / 2) {
            let theta = PI * n as f64 / mf;
            let mut v = 1.0;
            for j in 1..=(m / 2) {
                let jf = j as f64;
                let coeff = if 2 * j == m { 1.0 } else { 2.0 };
                v -= coeff * math::cos(2.0 * jf * theta) / (4.0 * jf * jf - 1.0);
            }
            weights[n] = 2.0 * v / mf;
            weights[m - n] = weights[n];
        }
    }

    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let nodes = chebyshev_nodes(m)
        .into_iter()
        .map(|x| mid + half * x)
        .collect();
    for w in &mut weights {
        *w *= half;
    }

    SpectralGrid {
        m,
        nodes,
        weights,
        interval: (a, b),
        weight_kind: WeightKind::UnitWeight,
    }
}

/// Memory integral ∫ H dk ≈ Σ ω_n · Re H(k_n), in fixed ascending node order.
///
/// Only the real part contributes; see [`integrate_history_complex`] for the
/// full complex sum (whose imaginary part is a symmetry diagnostic).
///
/// # Panics
///
/// Panics if the field and grid lengths differ.
pub fn integrate_history(h: &[Complex64], grid: &SpectralGrid) -> f64 {
    assert_eq!(
        h.len(),
        grid.len(),
        "integrate_history: field/grid size mismatch"
    );
    let mut acc = 0.0;
    for (hn, &w) in h.iter().zip(&grid.weights) {
        acc += w * hn.re;
    }
    acc
}

/// Full complex quadrature sum Σ ω_n · H(k_n).
///
/// On a symmetric grid with H(−k) = conj(H(k)) the imaginary part vanishes up
/// to roundoff; its magnitude measures how well a simulation preserves that
/// symmetry.
///
/// # Panics
///
/// Panics if the field and grid lengths differ.
pub fn integrate_history_complex(h: &[Complex64], grid: &SpectralGrid) -> Complex64 {
    assert_eq!(
        h.len(),
        grid.len(),
        "integrate_history_complex: field/grid size mismatch"
    );
    let mut acc = Complex64::new(0.0, 0.0);
    for (hn, &w) in h.iter().zip(&grid.weights) {
        acc += w * hn;
    }
    acc
}
