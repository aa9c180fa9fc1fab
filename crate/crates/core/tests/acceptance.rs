//! Acceptance suite: one check per shipped claim, each printed as a
//! `[PASS]`/`[FAIL]` line with the measured value and its tolerance. Run
//! `cargo test --test acceptance -- --nocapture` to see the table.
//!
//! Everything lives in a single `#[test]` so the wall-time profile of
//! criterion 9 is not polluted by parallel test threads, and so shared runs
//! (the dt = 0.01 walker pair) are computed once.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use membed::direct::DirectWalkerSim;
use membed::embedding::{evolve, init_state, EmbeddedState, EmbeddedSystem};
use membed::integrators::{etdrk2_step, heun_step};
use membed::quadrature::integrate_history_complex;
use membed::stefan::{
    erf, solve_alpha, spectral_kernel_residual, SimilaritySolution, StefanParams, StefanSystem,
};
use membed::walker::{
    bessel_j1, bessel_j1_quadrature, classify_regime, steady_speed, WalkerParams, WalkerRegime,
    WalkerSystem,
};
use membed::Complex64;

struct Tally {
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, num: usize, name: &str, pass: bool, detail: String) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {num:>2}. {name:<20} {detail}");
        if !pass {
            self.failures.push(format!("{num}. {name} — {detail}"));
        }
    }
}

/// One embedded walker run from ic (1, 1): per-step samples plus the field
/// diagnostics and per-step wall times the criteria consume.
struct WalkerTrace {
    times: Vec<f64>,
    positions: Vec<f64>,
    velocities: Vec<f64>,
    step_times: Vec<Duration>,
    sym_dev: f64,
    imag_mem: f64,
}

fn run_walker(c1: f64, c2: f64, m: usize, dt: f64, t_final: f64) -> WalkerTrace {
    let params = WalkerParams {
        c1,
        c2,
        m,
        dt,
        ic: (1.0, 1.0),
    };
    let sys = WalkerSystem::new(params);
    let state = init_state(&sys, 0.0, &[1.0, 1.0]);
    let mut trace = WalkerTrace {
        times: Vec::new(),
        positions: Vec::new(),
        velocities: Vec::new(),
        step_times: Vec::new(),
        sym_dev: 0.0,
        imag_mem: 0.0,
    };
    let mut prev = Instant::now();
    evolve(&sys, state, dt, t_final, 1, |s: &EmbeddedState| {
        let now = Instant::now();
        trace.step_times.push(now - prev);
        prev = now;
        trace.times.push(s.t);
        trace.positions.push(s.y[0]);
        trace.velocities.push(s.y[1]);
        let n = s.h.len();
        for i in 0..n {
            let dev = (s.h[i] - s.h[n - 1 - i].conj()).norm();
            trace.sym_dev = trace.sym_dev.max(dev);
        }
        let im = integrate_history_complex(&s.h, sys.grid()).im.abs();
        trace.imag_mem = trace.imag_mem.max(im);
    })
    .unwrap();
    trace
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn decile_ratio(step_times: &[Duration]) -> f64 {
    let d = step_times.len() / 10;
    let mean =
        |s: &[Duration]| s.iter().map(Duration::as_secs_f64).sum::<f64>() / s.len() as f64;
    mean(&step_times[step_times.len() - d..]) / mean(&step_times[..d])
}

#[test]
fn acceptance_criteria() {
    let mut tally = Tally {
        failures: Vec::new(),
    };
    println!("\nacceptance criteria\n");

    // 1. Steady walker speed against the analytical value.
    let v_inf = steady_speed(0.1, 0.1).unwrap();
    let steady = run_walker(0.1, 0.1, 30, 0.01, 200.0);
    let err = (steady.velocities.last().unwrap().abs() - v_inf).abs();
    tally.check(
        1,
        "steady-speed",
        err <= 1e-3,
        format!("terminal speed err {err:.2e} (tol 1e-3)"),
    );

    // 2. Regime reproduction, with qualitative bounds for the unsteady run.
    let non = run_walker(0.01, 0.1, 30, 0.01, 200.0);
    let uns = run_walker(1.5, 0.01, 30, 0.01, 500.0);
    let r_non = classify_regime(&non.times, &non.velocities);
    let r_steady = classify_regime(&steady.times, &steady.velocities);
    let r_uns = classify_regime(&uns.times, &uns.velocities);
    let vmax = uns.velocities.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let reversals = uns
        .velocities
        .windows(2)
        .filter(|w| w[0] * w[1] < 0.0)
        .count();
    let pass = r_non == WalkerRegime::NonWalker
        && r_steady == WalkerRegime::SteadyWalker
        && r_uns == WalkerRegime::Unsteady
        && vmax < 10.0
        && reversals >= 5;
    tally.check(
        2,
        "regimes",
        pass,
        format!("{r_non:?}/{r_steady:?}/{r_uns:?}; max|v| {vmax:.2} (< 10), {reversals} sign reversals (>= 5)"),
    );

    // 3. Oracle equivalence over [0, 100] at dt = 0.01, M = 30. The direct
    // run is stepped manually so criterion 9 can reuse its per-step times.
    let emb = run_walker(0.1, 0.1, 30, 0.01, 100.0);
    let mut direct = DirectWalkerSim::new(WalkerParams {
        c1: 0.1,
        c2: 0.1,
        m: 1,
        dt: 0.01,
        ic: (1.0, 1.0),
    });
    let mut dir_pos = Vec::with_capacity(10_000);
    let mut dir_steps = Vec::with_capacity(10_000);
    while direct.t() < 100.0 - 1e-9 {
        let start = Instant::now();
        direct.step(0.01).unwrap();
        dir_steps.push(start.elapsed());
        dir_pos.push(direct.position());
    }
    let sup = sup_diff(&emb.positions, &dir_pos);
    tally.check(
        3,
        "oracle-equivalence",
        emb.positions.len() == dir_pos.len() && sup <= 1e-2,
        format!("sup|Δx| {sup:.2e} over [0,100] (tol 1e-2)"),
    );

    // 4. Node-count sufficiency: M = 30 vs M = 60 on the same run.
    let emb60 = run_walker(0.1, 0.1, 60, 0.01, 100.0);
    let sup = sup_diff(&emb.positions, &emb60.positions);
    tally.check(
        4,
        "node-sufficiency",
        sup < 1e-6,
        format!("sup|Δx| {sup:.2e} M=30 vs M=60 (tol 1e-6)"),
    );

    // 5. Spectral kernel identities and the Bessel representation.
    let (r1, r2) = spectral_kernel_residual(1.0, 0.5, 0.5, 20.0, 200);
    let mut j1_sup = 0.0f64;
    for i in 0..=400 {
        let z = -20.0 + 0.1 * i as f64;
        j1_sup = j1_sup.max((bessel_j1_quadrature(z, 200) - bessel_j1(z)).abs());
    }
    tally.check(
        5,
        "kernel-identities",
        r1 <= 1e-8 && r2 <= 1e-8 && j1_sup <= 1e-10,
        format!("N1 res {r1:.1e}, N2 res {r2:.1e} (tol 1e-8); J1 sup {j1_sup:.1e} on |z|<=20 (tol 1e-10)"),
    );

    // 6. Stefan similarity tracking at the production configuration,
    // collecting field diagnostics for criterion 7 along the way.
    let t0 = 0.25;
    let alpha = solve_alpha();
    let alpha_res = (PI.sqrt() * alpha * (alpha * alpha).exp() * erf(alpha) - 1.0).abs();
    let sol = SimilaritySolution::new(t0);
    let ssys = StefanSystem::new(StefanParams::similarity(t0, 500.0, 2000, 1e-3));
    let mut front_rel = 0.0f64;
    let mut s_sym = 0.0f64;
    let mut s_imag = 0.0f64;
    evolve(&ssys, ssys.initial_state(), 1e-3, 4.0 * t0, 1, |s| {
        let exact = sol.front(s.t);
        front_rel = front_rel.max((s.y[0] - exact).abs() / exact);
        let n = s.h.len();
        for i in 0..n {
            s_sym = s_sym.max((s.h[i] - s.h[n - 1 - i].conj()).norm());
        }
        s_imag = s_imag.max(integrate_history_complex(&s.h, ssys.grid()).im.abs());
    })
    .unwrap();
    tally.check(
        6,
        "stefan-similarity",
        front_rel <= 1e-2 && alpha_res <= 1e-12,
        format!("front rel err {front_rel:.2e} on [t0,4t0] (tol 1e-2); α residual {alpha_res:.1e} (tol 1e-12)"),
    );

    // 7. Field symmetry invariants across all runs above.
    let w_sym = emb
        .sym_dev
        .max(steady.sym_dev)
        .max(non.sym_dev)
        .max(uns.sym_dev);
    let w_imag = emb
        .imag_mem
        .max(steady.imag_mem)
        .max(non.imag_mem)
        .max(uns.imag_mem);
    tally.check(
        7,
        "field-symmetry",
        w_sym <= 1e-12 && s_sym <= 1e-12 && w_imag <= 1e-10 && s_imag <= 1e-10,
        format!("H(-k)=conj(H(k)) dev {w_sym:.1e}/{s_sym:.1e} (tol 1e-12); Im ∫H {w_imag:.1e}/{s_imag:.1e} (tol 1e-10)"),
    );

    // 8. Integrator orders on ẏ = −y + sin t over [0, 1] (exact solution
    // 1.5e^{−t} + (sin t − cos t)/2), plus the exact c = 0 reduction.
    let exact = 1.5 * (-1.0f64).exp() + 0.5 * (1.0f64.sin() - 1.0f64.cos());
    let heun_err = |dt: f64| {
        let steps = (1.0 / dt).round() as usize;
        let mut y = vec![1.0];
        for i in 0..steps {
            y = heun_step(&y, |t, y| vec![-y[0] + t.sin()], i as f64 * dt, dt);
        }
        (y[0] - exact).abs()
    };
    let etd_err = |dt: f64| {
        let steps = (1.0 / dt).round() as usize;
        let mut h = Complex64::new(1.0, 0.0);
        for i in 0..steps {
            h = etdrk2_step(
                h,
                Complex64::new(-1.0, 0.0),
                |t, _| Complex64::new(t.sin(), 0.0),
                i as f64 * dt,
                dt,
            );
        }
        (h.re - exact).abs()
    };
    let orders = [
        (heun_err(1e-2) / heun_err(5e-3)).log2(),
        (heun_err(5e-3) / heun_err(2.5e-3)).log2(),
        (etd_err(1e-2) / etd_err(5e-3)).log2(),
        (etd_err(5e-3) / etd_err(2.5e-3)).log2(),
    ];
    let f = |t: f64, h: Complex64| {
        Complex64::new(0.7, -0.4) * (Complex64::new(1.3, 0.2) - h) + t.sin() * 0.3
    };
    let mut h = Complex64::new(0.9, 0.6);
    let mut yv = vec![h.re, h.im];
    let mut bit_exact = true;
    for i in 0..200 {
        let t = i as f64 * 0.05;
        h = etdrk2_step(h, Complex64::new(0.0, 0.0), f, t, 0.05);
        yv = heun_step(
            &yv,
            |t, y| {
                let fv = f(t, Complex64::new(y[0], y[1]));
                vec![fv.re, fv.im]
            },
            t,
            0.05,
        );
        bit_exact &= h.re.to_bits() == yv[0].to_bits() && h.im.to_bits() == yv[1].to_bits();
    }
    let in_range = orders.iter().all(|o| (1.8..=2.2).contains(o));
    tally.check(
        8,
        "integrator-orders",
        in_range && bit_exact,
        format!(
            "heun {:.2}/{:.2}, etdrk2 {:.2}/{:.2} (range [1.8,2.2]); c=0 bit-exact: {bit_exact}",
            orders[0], orders[1], orders[2], orders[3]
        ),
    );

    // 9. Cost profile: embedded per-step time flat, direct growing, from the
    // 10^4-step dt = 0.01 runs of criterion 3.
    let emb_ratio = decile_ratio(&emb.step_times);
    let dir_ratio = decile_ratio(&dir_steps);
    let pass = emb.step_times.len() >= 10_000
        && dir_steps.len() >= 10_000
        && emb_ratio <= 2.0
        && dir_ratio >= 5.0;
    tally.check(
        9,
        "cost-profile",
        pass,
        format!(
            "last/first decile: embedded {emb_ratio:.2} (<= 2), direct {dir_ratio:.1} (>= 5), over {} steps",
            dir_steps.len()
        ),
    );

    // 10. Trivial limits: drag-only walker decay and a quiescent Stefan front.
    let decay = run_walker(0.0, 0.1, 30, 0.01, 5.0);
    let derr = (decay.velocities.last().unwrap() - (-5.0f64).exp()).abs();
    let sp = StefanParams {
        t0: 0.25,
        l0: 0.62,
        theta0_prime: Arc::new(|_| 0.0),
        f_dot: Arc::new(|_| 0.0),
        k_trunc: 20.0,
        m: 32,
        dt: 1e-3,
    };
    let qsys = StefanSystem::new(sp);
    let qend = evolve(&qsys, qsys.initial_state(), 1e-3, 0.75, 1, |_| {}).unwrap();
    let drift = (qend.y[0] - 0.62).abs();
    tally.check(
        10,
        "trivial-limits",
        derr <= 1e-4 && drift <= 1e-14,
        format!("C1=0 decay err {derr:.1e} (tol 1e-4); stationary front drift {drift:.1e} (tol 1e-14)"),
    );

    println!();
    assert!(
        tally.failures.is_empty(),
        "acceptance failures:\n  {}",
        tally.failures.join("\n  ")
    );
}
