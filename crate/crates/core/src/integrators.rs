//! Second-order single-step integrators: Heun and exponential time
//! differencing (ETDRK2, Cox-Matthews), with stable φ-function evaluation.
//!
//! The two schemes are arranged to share one arithmetic path: Heun is written
//! as predictor `y* = y + dt·k₁` followed by the increment
//! `y* + (dt/2)(k₂ − k₁)`, and ETDRK2 precomputes `w₁ = dt·φ₁(z)`,
//! `w₂ = dt·φ₂(z)`. At c = 0 the φ limits are exact (φ₁ = 1, φ₂ = 1/2), so
//! `etdrk2_step` with c = 0 reproduces `heun_step` bit for bit — a cheap,
//! sharp regression check on both.

use alloc::vec::Vec;

use num_complex::Complex64;

/// Switch point between the direct φ formulas and their Taylor series.
///
/// Below this |z| the subtractions in (e^z − 1)/z and (e^z − 1 − z)/z² lose
/// digits, so an 8-term series is used instead; z = 0 occurs on every grid
/// that contains k = 0.
pub const TAU_PHI: f64 = 1e-2;

/// Values of φ₁(z) = (e^z − 1)/z and φ₂(z) = (e^z − 1 − z)/z².
#[derive(Clone, Copy, Debug)]
pub struct PhiValues {
    pub phi1: Complex64,
    pub phi2: Complex64,
}

/// Evaluate φ₁, φ₂ stably: direct formula for |z| ≥ [`TAU_PHI`], truncated
/// Taylor series below.
///
/// At z = 0 the limits φ₁ = 1 and φ₂ = 1/2 are exact.
pub fn phi_funcs(z: Complex64) -> PhiValues {
    if z.norm_sqr() < TAU_PHI * TAU_PHI {
        // Horner evaluation of Σ z^j/(j+1)! and Σ z^j/(j+2)!, j = 0..7.
        // The omitted tail is below 1e-18 relative for |z| < 1e-2.
        const C1: [f64; 8] = [
            1.0,
            1.0 / 2.0,
            1.0 / 6.0,
            1.0 / 24.0,
            1.0 / 120.0,
            1.0 / 720.0,
            1.0 / 5040.0,
            1.0 / 40320.0,
        ];
        const C2: [f64; 8] = [
            1.0 / 2.0,
            1.0 / 6.0,
            1.0 / 24.0,
            1.0 / 120.0,
            1.0 / 720.0,
            1.0 / 5040.0,
            1.0 / 40320.0,
            1.0 / 362880.0,
        ];
        let horner = |c: &[f64; 8]| {
            let mut acc = Complex64::new(c[7], 0.0);
            for &coeff in c[..7].iter().rev() {
                acc = acc * z + coeff;
            }
            acc
        };
        PhiValues {
            phi1: horner(&C1),
            phi2: horner(&C2),
        }
    } else {
        let em1 = z.exp() - 1.0;
        PhiValues {
            phi1: em1 / z,
            phi2: (em1 - z) / (z * z),
        }
    }
}

/// One Heun (explicit trapezoidal) step of ẏ = rhs(t, y).
///
/// Predictor y* = y + dt·rhs(t, y), corrector
/// y' = y + (dt/2)·(rhs(t, y) + rhs(t + dt, y*)), evaluated as
/// y* + (dt/2)·(k₂ − k₁) so the arithmetic matches `etdrk2_step` at c = 0.
/// Non-finite rhs output propagates into the result; solver loops detect it
/// as divergence.
pub fn heun_step<F>(y: &[f64], rhs: F, t: f64, dt: f64) -> Vec<f64>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    debug_assert!(dt > 0.0);
    let k1 = rhs(t, y);
    debug_assert_eq!(k1.len(), y.len());
    let ystar: Vec<f64> = y.iter().zip(&k1).map(|(yi, k)| yi + dt * k).collect();
    let k2 = rhs(t + dt, &ystar);
    let half = 0.5 * dt;
    ystar
        .iter()
        .zip(k2.iter().zip(&k1))
        .map(|(ys, (k2i, k1i))| ys + half * (k2i - k1i))
        .collect()
}

/// Precomputed per-node ETDRK2 step coefficients for fixed z = c·dt.
///
/// The stiff coefficients c(k) of an embedded system are time-independent, so
/// a solver loop computes these once per node and reuses them every step.
#[derive(Clone, Copy, Debug)]
pub struct EtdCoeffs {
    /// e^{c·dt}
    pub ez: Complex64,
    /// dt·φ₁(c·dt)
    pub w1: Complex64,
    /// dt·φ₂(c·dt)
    pub w2: Complex64,
}

impl EtdCoeffs {
    pub fn new(c: Complex64, dt: f64) -> Self {
        let z = c * dt;
        let phi = phi_funcs(z);
        EtdCoeffs {
            ez: z.exp(),
            w1: phi.phi1 * dt,
            w2: phi.phi2 * dt,
        }
    }

    /// Predictor stage a = e^z·h + dt·φ₁(z)·f0.
    #[inline]
    pub fn predict(&self, h: Complex64, f0: Complex64) -> Complex64 {
        self.ez * h + self.w1 * f0
    }

    /// Corrector stage a + dt·φ₂(z)·(f1 − f0).
    #[inline]
    pub fn correct(&self, a: Complex64, f0: Complex64, f1: Complex64) -> Complex64 {
        a + self.w2 * (f1 - f0)
    }
}

/// One ETDRK2 (Cox-Matthews) step of ḣ = c·h + F(t, h).
///
/// The linear part c is integrated exactly; with z = c·dt,
/// a = e^z·h + dt·φ₁(z)·F(t, h) and the result is
/// a + dt·φ₂(z)·(F(t + dt, a) − F(t, h)). Reduces to `heun_step` exactly when
/// c = 0. Non-finite F output propagates as in `heun_step`.
pub fn etdrk2_step<F>(h: Complex64, c: Complex64, f: F, t: f64, dt: f64) -> Complex64
where
    F: Fn(f64, Complex64) -> Complex64,
{
    debug_assert!(dt > 0.0);
    let coeffs = EtdCoeffs::new(c, dt);
    let f0 = f(t, h);
    let a = coeffs.predict(h, f0);
    let f1 = f(t + dt, a);
    coeffs.correct(a, f0, f1)
}
