//! The 1D single-phase Stefan (melting) problem in embedded form.
//!
//! The melt occupies 0 ≤ x ≤ l(t). The temperature solves the heat equation
//! with θ = f(t) at the wall (f(0) = 1), θ = 0 on the front, and the front
//! advances by the Stefan condition l̇ = −θ_x(l(t), t) at unit Stefan number.
//! Eliminating the temperature through its heat-kernel representation leaves
//! a closed nonlocal law for the front alone, and sampling that kernel in
//! frequency turns it into the local system
//!
//! ```text
//! l̇(t) = v(t) = g(t − t₀, l(t)) + ∫ H(k, t) dk,
//! Ḣ(k) = −k²·H + i k v·H + (i k/π)(1 − e^{2 i k l})·v + (2/π) e^{i k l}·ḟ(t),
//! ```
//!
//! with H(k, t₀) = 0. The local term g carries the diffusing initial
//! temperature gradient θ₀′; the field carries everything the moving front
//! and the driven wall have radiated since t₀. The front speed v is an
//! observable (the full mechanical right-hand side), not a state variable, so
//! the spectral coefficients read it from same-stage values.
//!
//! Besides the embedded system this module provides the heat-kernel pair
//! N₁/N₂ in closed and spectral form (the identity behind the embedding), the
//! classical similarity solution used for verification, and a self-contained
//! error function.

use alloc::sync::Arc;

use core::f64::consts::{FRAC_1_PI, FRAC_2_SQRT_PI, PI};

use num_complex::Complex64;

use crate::embedding::{init_state, EmbeddedState, EmbeddedSystem, StageValues};
use crate::math;
use crate::quadrature::{clenshaw_curtis_rule, SpectralGrid};

/// Error function, accurate to a few ulp over the real line.
///
/// Small arguments (|x| < 3) use the non-alternating Maclaurin form
/// erf(x) = (2/√π) e^{−x²} Σₙ (2x²)ⁿ x / (2n+1)!!, which has no cancellation;
/// large arguments evaluate erfc through the Laplace continued fraction.
pub fn erf(x: f64) -> f64 {
    let ax = math::abs(x);
    let val = if ax < 3.0 {
        erf_series(ax)
    } else {
        1.0 - erfc_tail(ax)
    };
    if x.is_sign_negative() {
        -val
    } else {
        val
    }
}

fn erf_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 1u32;
    while n < 200 {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
        n += 1;
    }
    FRAC_2_SQRT_PI * math::exp(-x2) * sum
}

/// erfc(x) for x ≥ 3 via the continued fraction
/// √π e^{x²} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ···)))),
/// evaluated bottom-free with the modified Lentz recurrence.
fn erfc_tail(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..=80u32 {
        let a = if n == 1 { 1.0 } else { 0.5 * (n - 1) as f64 };
        d = x + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = x + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if math::abs(delta - 1.0) < 1e-17 {
            break;
        }
    }
    math::exp(-x * x) * (0.5 * FRAC_2_SQRT_PI) * f
}

/// Growth constant of the similarity solution: the root of
/// √π α e^{α²} erf(α) = 1, found by bisection on [0.1, 1] where the
/// left-hand side is strictly increasing.
pub fn solve_alpha() -> f64 {
    let sqrt_pi = math::sqrt(PI);
    let residual = |a: f64| sqrt_pi * a * math::exp(a * a) * erf(a) - 1.0;
    let (mut lo, mut hi) = (0.1, 1.0);
    assert!(residual(lo) < 0.0 && residual(hi) > 0.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Dirichlet heat kernel derivative pair on the half line, closed form:
/// N₁(x, y, z) = ((x+y) e^{−(x+y)²/4z} − (x−y) e^{−(x−y)²/4z}) / (2√π z^{3/2}).
///
/// # Panics
///
/// Panics unless z > 0.
pub fn kernel_n1(x: f64, y: f64, z: f64) -> f64 {
    assert!(z > 0.0, "kernel_n1 requires z > 0 (got {z})");
    let p = x + y;
    let q = x - y;
    let quarter = 0.25 / z;
    (p * math::exp(-p * p * quarter) - q * math::exp(-q * q * quarter))
        / (2.0 * math::sqrt(PI) * z * math::sqrt(z))
}

/// Neumann companion kernel, closed form: N₂(x, z) = (2/√π) e^{−x²/4z} / √z.
///
/// # Panics
///
/// Panics unless z > 0.
pub fn kernel_n2(x: f64, z: f64) -> f64 {
    assert!(z > 0.0, "kernel_n2 requires z > 0 (got {z})");
    FRAC_2_SQRT_PI * math::exp(-x * x * 0.25 / z) / math::sqrt(z)
}

/// Residuals of the spectral identities behind the embedding,
///
/// ```text
/// N₁(x, y, z) = (i/π) ∫ (e^{−k²z + ik(x−y)} − e^{−k²z + ik(x+y)}) k dk,
/// N₂(x, z)    = (1/π) ∫ 2 e^{−k²z + ikx} dk,
/// ```
///
/// evaluated on an M-panel Clenshaw–Curtis rule truncated to
/// [−k_trunc, k_trunc] and compared against the closed forms. Returns
/// (|ΔN₁|, |ΔN₂|); both vanish under refinement once k_trunc covers the
/// e^{−k²z} support.
///
/// # Panics
///
/// Panics if `z <= 0`, `m == 0`, or `k_trunc <= 0`.
pub fn spectral_kernel_residual(x: f64, y: f64, z: f64, k_trunc: f64, m: usize) -> (f64, f64) {
    assert!(z > 0.0, "spectral_kernel_residual requires z > 0 (got {z})");
    let grid = clenshaw_curtis_rule(m, -k_trunc, k_trunc);
    let mut n1 = Complex64::new(0.0, 0.0);
    let mut n2 = Complex64::new(0.0, 0.0);
    for (&k, &w) in grid.nodes.iter().zip(grid.weights.iter()) {
        let gauss = math::exp(-k * k * z);
        let eminus = Complex64::from_polar(gauss, k * (x - y));
        let eplus = Complex64::from_polar(gauss, k * (x + y));
        n1 += w * (eminus - eplus) * k;
        n2 += w * 2.0 * Complex64::from_polar(gauss, k * x);
    }
    n1 *= Complex64::new(0.0, FRAC_1_PI);
    n2 *= FRAC_1_PI;
    (
        math::abs(n1.re - kernel_n1(x, y, z)),
        math::abs(n2.re - kernel_n2(x, z)),
    )
}

/// The classical similarity (Neumann) solution of the melting problem:
/// front l(t) = 2α√t, temperature θ(x, t) = 1 − erf(x/2√t)/erf(α).
#[derive(Clone, Copy, Debug)]
pub struct SimilaritySolution {
    pub alpha: f64,
    pub t0: f64,
}

impl SimilaritySolution {
    /// # Panics
    ///
    /// Panics unless `t0 > 0` and finite.
    pub fn new(t0: f64) -> Self {
        assert!(t0 > 0.0 && t0.is_finite(), "SimilaritySolution: t0 > 0");
        SimilaritySolution {
            alpha: solve_alpha(),
            t0,
        }
    }

    /// Exact front position 2α√t.
    pub fn front(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        2.0 * self.alpha * math::sqrt(t)
    }

    /// Exact front speed α/√t.
    pub fn front_velocity(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        self.alpha / math::sqrt(t)
    }

    /// Temperature gradient of the similarity profile at the start time,
    /// θ₀′(x) = −e^{−x²/4t₀} / (erf(α) √(π t₀)).
    pub fn theta0_prime(&self, x: f64) -> f64 {
        -math::exp(-x * x / (4.0 * self.t0)) / (erf(self.alpha) * math::sqrt(PI * self.t0))
    }
}

/// Physical and numerical parameters of the embedded Stefan solver.
#[derive(Clone)]
pub struct StefanParams {
    /// Start time t₀ > 0 of the memory formulation; the front history and the
    /// field both begin here.
    pub t0: f64,
    /// Initial front position l(t₀) > 0.
    pub l0: f64,
    /// Initial temperature gradient θ₀′ on [0, l₀].
    pub theta0_prime: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Wall temperature rate ḟ(t).
    pub f_dot: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Spectral truncation: nodes span [−k_trunc, k_trunc].
    pub k_trunc: f64,
    /// Number of Clenshaw–Curtis panels (M + 1 nodes).
    pub m: usize,
    /// Time step.
    pub dt: f64,
}

impl StefanParams {
    /// Parameters that reproduce the similarity solution from time `t0` on:
    /// θ₀′ is the exact profile gradient at `t0` and the wall stays at its
    /// unit temperature (ḟ ≡ 0).
    pub fn similarity(t0: f64, k_trunc: f64, m: usize, dt: f64) -> StefanParams {
        let sol = SimilaritySolution::new(t0);
        StefanParams {
            t0,
            l0: sol.front(t0),
            theta0_prime: Arc::new(move |x| sol.theta0_prime(x)),
            f_dot: Arc::new(|_| 0.0),
            k_trunc,
            m,
            dt,
        }
    }
}

impl core::fmt::Debug for StefanParams {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("StefanParams")
            .field("t0", &self.t0)
            .field("l0", &self.l0)
            .field("k_trunc", &self.k_trunc)
            .field("m", &self.m)
            .field("dt", &self.dt)
            .finish_non_exhaustive()
    }
}

/// Local (history-free) part of the front speed: the initial temperature
/// gradient diffused for a lag τ and evaluated at the current front,
///
/// ```text
/// g(τ, l) = −(1/√(πτ)) ∫₀^{l₀} (e^{−(l+x)²/4τ} + e^{−(l−x)²/4τ}) θ₀′(x) dx,
/// ```
///
/// with the τ → 0 limit g(0, l₀) = −θ₀′(l₀) (the kernels collapse onto the
/// front, which starts at the edge of the gradient's support). The τ = 0
/// branch is only meaningful at the initial instant, where l = l₀.
///
/// The quadrature resolves the O(√τ) kernel width with
/// max(64, ⌈8 l₀/√τ⌉) panels, so small lags cost O(l₀²/τ) weight setup per
/// call; with the solver's own step sizes this stays in the hundreds.
///
/// # Panics
///
/// Panics if `tau < 0`.
pub fn g_term(tau: f64, l: f64, params: &StefanParams) -> f64 {
    assert!(tau >= 0.0, "g_term requires tau >= 0 (got {tau})");
    if tau == 0.0 {
        return -(params.theta0_prime)(params.l0);
    }
    let panels = (math::ceil(8.0 * params.l0 / math::sqrt(tau)) as usize).max(64);
    let grid = clenshaw_curtis_rule(panels, 0.0, params.l0);
    let quarter = 0.25 / tau;
    let mut acc = 0.0;
    for (&x, &w) in grid.nodes.iter().zip(grid.weights.iter()) {
        let dp = l + x;
        let dm = l - x;
        acc += w
            * (math::exp(-dp * dp * quarter) + math::exp(-dm * dm * quarter))
            * (params.theta0_prime)(x);
    }
    -acc / math::sqrt(PI * tau)
}

/// The embedded Stefan front solver: mechanical state y = [l], one history
/// node per spectral sample of the heat kernel.
pub struct StefanSystem {
    params: StefanParams,
    grid: SpectralGrid,
}

impl StefanSystem {
    /// # Panics
    ///
    /// Panics unless `t0`, `l0`, `k_trunc`, and `dt` are positive and finite
    /// and `m >= 1`.
    pub fn new(params: StefanParams) -> Self {
        assert!(params.t0 > 0.0 && params.t0.is_finite(), "StefanSystem: t0");
        assert!(params.l0 > 0.0 && params.l0.is_finite(), "StefanSystem: l0");
        assert!(
            params.k_trunc > 0.0 && params.k_trunc.is_finite(),
            "StefanSystem: k_trunc"
        );
        assert!(params.m >= 1, "StefanSystem: m");
        assert!(params.dt > 0.0 && params.dt.is_finite(), "StefanSystem: dt");
        let grid = clenshaw_curtis_rule(params.m, -params.k_trunc, params.k_trunc);
        StefanSystem { params, grid }
    }

    pub fn params(&self) -> &StefanParams {
        &self.params
    }

    /// Fresh state at t₀: front at l₀, field identically zero.
    pub fn initial_state(&self) -> EmbeddedState {
        init_state(self, self.params.t0, &[self.params.l0])
    }

    /// Front speed v = g + ∫H dk of a state — the mechanical observable.
    pub fn front_velocity(&self, state: &EmbeddedState) -> f64 {
        state.mech_rhs(self)[0]
    }

    /// The local term alone, as a diagnostic.
    pub fn g_value(&self, t: f64, l: f64) -> f64 {
        g_term(t - self.params.t0, l, &self.params)
    }
}

impl EmbeddedSystem for StefanSystem {
    fn mech_dim(&self) -> usize {
        1
    }

    fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    fn local_term(&self, t: f64, y: &[f64], out: &mut [f64]) {
        out[0] = g_term(t - self.params.t0, y[0], &self.params);
    }

    fn coupling(&self, memory_value: f64, _t: f64, _y: &[f64], out: &mut [f64]) {
        out[0] += memory_value;
    }

    fn stiff_coeff(&self, k: f64) -> Complex64 {
        Complex64::new(-k * k, 0.0)
    }

    fn drift_coeff(&self, k: f64, stage: &StageValues) -> Complex64 {
        Complex64::new(0.0, k * stage.mech_rhs[0])
    }

    fn source(&self, k: f64, stage: &StageValues) -> Complex64 {
        let l = stage.y[0];
        let v = stage.mech_rhs[0];
        let e2 = Complex64::from_polar(1.0, 2.0 * k * l);
        let mut s = Complex64::new(0.0, k * FRAC_1_PI * v) * (Complex64::new(1.0, 0.0) - e2);
        let fd = (self.params.f_dot)(stage.t);
        if fd != 0.0 {
            s += Complex64::from_polar(2.0 * FRAC_1_PI * fd, k * l);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::evolve;
    use crate::quadrature::integrate_history_complex;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn erf_reference_values() {
        // Classical table values, correctly rounded to f64. 2.9/3.0/3.1
        // bracket the series/continued-fraction seam.
        let table = [
            (0.1, 0.1124629160182849),
            (0.5, 0.5204998778130465),
            (1.0, 0.8427007929497149),
            (2.0, 0.9953222650189527),
            (2.9, 0.9999589021219005),
            (3.0, 0.9999779095030014),
            (3.1, 0.9999883513426328),
            (4.0, 0.9999999845827421),
            (5.0, 0.9999999999984626),
        ];
        for (x, want) in table {
            assert_abs_diff_eq!(erf(x), want, epsilon = 1e-14);
            assert_eq!(erf(-x), -erf(x));
        }
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(6.0), 1.0);
        assert_eq!(erf(40.0), 1.0);
    }

    #[test]
    fn alpha_satisfies_transcendental_equation() {
        let alpha = solve_alpha();
        let residual = math::sqrt(PI) * alpha * math::exp(alpha * alpha) * erf(alpha) - 1.0;
        assert!(math::abs(residual) <= 1e-12, "residual {residual:e}");
        assert_abs_diff_eq!(alpha, 0.6200626333135957, epsilon = 1e-13);
    }

    #[test]
    fn kernel_closed_forms() {
        // y = 0: direct and image terms cancel identically.
        assert_eq!(kernel_n1(0.9, 0.0, 0.3), 0.0);
        // Coincident arguments: N₁ = x e^{−x²/z} / (√π z^{3/2}).
        assert_abs_diff_eq!(
            kernel_n1(1.3, 1.3, 0.7),
            0.1119980322727341,
            epsilon = 1e-15
        );
        // N₂(2, 1) = (2/√π) e^{−1}.
        assert_abs_diff_eq!(kernel_n2(2.0, 1.0), 0.4151074974205947, epsilon = 1e-15);
    }

    #[test]
    #[should_panic(expected = "z > 0")]
    fn kernel_n1_rejects_zero_lag() {
        kernel_n1(1.0, 0.5, 0.0);
    }

    #[test]
    #[should_panic(expected = "z > 0")]
    fn kernel_n2_rejects_negative_lag() {
        kernel_n2(1.0, -0.1);
    }

    #[test]
    fn spectral_representation_matches_closed_forms() {
        let (r1, r2) = spectral_kernel_residual(1.0, 0.5, 0.5, 20.0, 200);
        assert!(r1 <= 1e-8 && r2 <= 1e-8, "r1 {r1:e} r2 {r2:e}");

        // y = 0 zeroes the N₁ integrand node-by-node, matching N₁(x,0,z) = 0.
        let (r1, _) = spectral_kernel_residual(1.0, 0.0, 0.5, 20.0, 200);
        assert_eq!(r1, 0.0);
    }

    #[test]
    fn spectral_representation_converges_under_refinement() {
        // Long lag: e^{−k²z} is narrow, so truncation is cheap and accuracy
        // is set by node density.
        let coarse = spectral_kernel_residual(0.8, 0.3, 10.0, 5.0, 64);
        let mid = spectral_kernel_residual(0.8, 0.3, 10.0, 8.0, 128);
        let fine = spectral_kernel_residual(0.8, 0.3, 10.0, 8.0, 256);
        assert!(coarse.0 <= 1e-6 && coarse.1 <= 1e-6);
        assert!(mid.0 <= 1e-8 && mid.1 <= 1e-8);
        assert!(fine.0 <= 1e-13 && fine.1 <= 1e-13);
        assert!(fine.0 < mid.0 && mid.0 < coarse.0);
    }

    fn constant_gradient_params(c: f64) -> StefanParams {
        StefanParams {
            t0: 0.25,
            l0: 0.62,
            theta0_prime: Arc::new(move |_| c),
            f_dot: Arc::new(|_| 0.0),
            k_trunc: 20.0,
            m: 32,
            dt: 1e-3,
        }
    }

    #[test]
    fn g_vanishes_without_initial_gradient() {
        let p = constant_gradient_params(0.0);
        assert_eq!(g_term(0.0, p.l0, &p), 0.0);
        assert_eq!(g_term(0.3, 0.8, &p), 0.0);
    }

    #[test]
    fn g_matches_erf_difference_for_constant_gradient() {
        // For θ₀′ ≡ c the integral has the closed form
        // g(τ, l) = −c (erf((l+l₀)/2√τ) − erf((l−l₀)/2√τ)).
        let c = -1.3;
        let p = constant_gradient_params(c);
        for (tau, l) in [(0.01, 0.7), (0.25, 0.3)] {
            let s = 0.5 / math::sqrt(tau);
            let exact = -c * (erf((l + p.l0) * s) - erf((l - p.l0) * s));
            assert_abs_diff_eq!(g_term(tau, l, &p), exact, epsilon = 1e-10);
        }
    }

    #[test]
    fn g_limit_reproduces_similarity_speed() {
        // At τ = 0 and l₀ = 2α√t₀, −θ₀′(l₀) collapses to α/√t₀ through the
        // defining equation of α.
        let t0 = 0.25;
        let p = StefanParams::similarity(t0, 500.0, 16, 1e-3);
        let sol = SimilaritySolution::new(t0);
        assert_abs_diff_eq!(
            g_term(0.0, p.l0, &p),
            sol.front_velocity(t0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn similarity_solution_shape() {
        let sol = SimilaritySolution::new(0.25);
        assert_abs_diff_eq!(sol.front(0.25), sol.alpha, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.front(1.0), 2.0 * sol.alpha, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.front_velocity(1.0), sol.alpha, epsilon = 1e-15);
        // The gradient is negative (hottest at the wall) and weakens with x.
        assert!(sol.theta0_prime(0.0) < sol.theta0_prime(0.62));
        assert!(sol.theta0_prime(0.62) < 0.0);
    }

    #[test]
    fn source_and_drift_read_off_the_field_equation() {
        let mut p = StefanParams::similarity(0.25, 30.0, 16, 1e-3);
        p.f_dot = Arc::new(|t| 0.25 * t);
        let sys = StefanSystem::new(p);
        let y = [0.9];
        let mech = [1.7];
        let stage = StageValues {
            t: 2.0,
            y: &y,
            mech_rhs: &mech,
        };
        for k in [0.35, -4.0, 17.5] {
            assert_eq!(sys.drift_coeff(k, &stage), Complex64::new(0.0, k * 1.7));
            let e2 = Complex64::from_polar(1.0, 2.0 * k * 0.9);
            let want = Complex64::new(0.0, k * FRAC_1_PI) * (Complex64::new(1.0, 0.0) - e2) * 1.7
                + Complex64::from_polar(1.0, k * 0.9) * (2.0 * FRAC_1_PI * 0.5);
            let got = sys.source(k, &stage);
            assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-15);
            assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-15);
        }
        assert_eq!(sys.stiff_coeff(-3.0), Complex64::new(-9.0, 0.0));
    }

    #[test]
    fn quiescent_configuration_stays_put() {
        // No initial gradient, no wall drive: nothing may move, and the
        // field must stay identically zero.
        let p = StefanParams {
            t0: 0.25,
            l0: 0.62,
            theta0_prime: Arc::new(|_| 0.0),
            f_dot: Arc::new(|_| 0.0),
            k_trunc: 20.0,
            m: 32,
            dt: 1e-3,
        };
        let sys = StefanSystem::new(p);
        let state = sys.initial_state();
        let end = evolve(&sys, state, 1e-3, 0.55, 100, |_| {}).unwrap();
        assert!(math::abs(end.y[0] - 0.62) <= 1e-14);
        assert_eq!(sys.front_velocity(&end), 0.0);
        assert!(end.h.iter().all(|h| h.re == 0.0 && h.im == 0.0));
    }

    #[test]
    fn front_tracks_similarity_solution() {
        let t0 = 0.25;
        let dt = 2e-3;
        let sol = SimilaritySolution::new(t0);
        let sys = StefanSystem::new(StefanParams::similarity(t0, 60.0, 240, dt));

        // v(t₀) = α/√t₀ through the full trait plumbing: the field is zero,
        // so the whole speed is the local term.
        let state = sys.initial_state();
        assert_abs_diff_eq!(
            sys.front_velocity(&state),
            sol.front_velocity(t0),
            epsilon = 1e-12
        );

        let mut max_rel: f64 = 0.0;
        let mut prev_l = state.y[0];
        let mut monotone = true;
        let mut sym_dev: f64 = 0.0;
        let mut imag_mem: f64 = 0.0;
        evolve(&sys, state, dt, 2.0 * t0, 1, |s| {
            let exact = sol.front(s.t);
            max_rel = max_rel.max(math::abs(s.y[0] - exact) / exact);
            monotone &= s.y[0] > prev_l;
            prev_l = s.y[0];
            let m = s.h.len();
            for n in 0..m {
                sym_dev = sym_dev.max((s.h[n] - s.h[m - 1 - n].conj()).norm());
            }
            imag_mem = imag_mem.max(math::abs(
                integrate_history_complex(&s.h, sys.grid()).im,
            ));
        })
        .unwrap();

        assert!(max_rel <= 5e-3, "max relative front error {max_rel:e}");
        assert!(monotone, "front must advance monotonically");
        assert!(sym_dev <= 1e-12, "H(-k) = conj(H(k)) violated by {sym_dev:e}");
        assert!(imag_mem <= 1e-10, "memory integral imaginary part {imag_mem:e}");
    }

    #[test]
    fn field_definition_consistent_with_node_equation() {
        // The node ODE must be the time derivative of the path-history
        // quadrature it encodes. Reconstruct
        //   H(k, t) = ∫ v(s) (ik/π)(e^{−k²(t−s)+ik(l(t)−l(s))}
        //                          − e^{−k²(t−s)+ik(l(t)+l(s))}) ds
        // from a stored trajectory by trapezoidal quadrature, differentiate
        // in t by central differences, and compare with
        //   −k²H + ikvH + (ik/π)(1 − e^{2ikl}) v.
        let t0 = 0.25;
        let dt = 5e-4;
        let sys = StefanSystem::new(StefanParams::similarity(t0, 40.0, 160, dt));
        let state = sys.initial_state();
        let mut ts = vec![t0];
        let mut ls = vec![state.y[0]];
        let mut vs = vec![sys.front_velocity(&state)];
        evolve(&sys, state, dt, t0 + 0.2, 1, |s| {
            ts.push(s.t);
            ls.push(s.y[0]);
            vs.push(sys.front_velocity(s));
        })
        .unwrap();

        let h_def = |k: f64, i: usize| -> Complex64 {
            let x = ls[i];
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=i {
                let z = ts[i] - ts[j];
                let gauss = math::exp(-k * k * z);
                let val = Complex64::new(0.0, k * FRAC_1_PI)
                    * (Complex64::from_polar(gauss, k * (x - ls[j]))
                        - Complex64::from_polar(gauss, k * (x + ls[j])))
                    * vs[j];
                let w = if j == 0 {
                    0.5 * (ts[1] - ts[0])
                } else if j == i {
                    0.5 * (ts[i] - ts[i - 1])
                } else {
                    0.5 * (ts[j + 1] - ts[j - 1])
                };
                acc += w * val;
            }
            acc
        };

        let i = ts.len() / 2;
        // Small |k| keeps the e^{−k²(t−s)} layer wide enough for the stored
        // step spacing to resolve.
        for k in [0.7, 2.0, -1.3] {
            let dh = (h_def(k, i + 1) - h_def(k, i - 1)) / (ts[i + 1] - ts[i - 1]);
            let h = h_def(k, i);
            let v = vs[i];
            let l = ls[i];
            let rhs = Complex64::new(-k * k, k * v) * h
                + Complex64::new(0.0, k * FRAC_1_PI)
                    * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * k * l))
                    * v;
            let err = (dh - rhs).norm();
            assert!(err <= 1e-3 * (1.0 + rhs.norm()), "k={k}: err={err:e}");
        }
    }
}
