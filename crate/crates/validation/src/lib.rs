//! The acceptance criteria, each evaluated to a pass/fail line.
//!
//! Run `cargo run -p itqsl-validation --bin acceptance` for the table; the
//! `acceptance` test target fails when any criterion fails.

mod random;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};
use std::time::Instant;

use itqsl::models::*;
use itqsl::quadrature::simpson_fn;
use itqsl::{
    infidelity_to, propagate_exact, propagate_rk4, qsl_report, rate_check, saturation_certificate,
    TimeGrid, Trajectory,
};
use random::*;

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Angle from the arccos expression exactly as written.
fn theta_arccos_form(theta: f64, e: f64, t: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let x = (-e * t).exp();
    ((c * c * x + s * s) / (c * c * x * x + s * s).sqrt()).acos()
}

/// `θ − arctan(e^{−ET} cot θ)`, the dispersion integral as stated in the
/// criteria.
fn stated_integral(theta: f64, e: f64, t: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    theta - ((-e * t).exp() * c / s).atan()
}

fn criterion_1(store: &mut Vec<Trajectory>) -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for _ in 0..100 {
        let d = 2 + (uniform(&mut r, 0.0, 7.0) as usize).min(6);
        let h = random_hermitian(&mut r, d);
        let psi0 = random_state(&mut r, d);
        let t = uniform(&mut r, 0.1, 10.0);
        let traj = propagate_exact(&h, &psi0, TimeGrid::new(t, 2000).unwrap()).unwrap();
        let rep = qsl_report(&traj).unwrap();
        let margin = rep.path_length + 1e-8 * (1.0 + rep.path_length) - rep.theta_t;
        worst = worst.min(margin);
        if margin < 0.0 {
            failures += 1;
        }
        store.push(traj);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures == 0 && secs < 10.0,
        format!("{}/100 instances hold, min margin {worst:.3e}, {secs:.2} s (< 10 s)", 100 - failures),
    )
}

fn criterion_2() -> Outcome {
    let mut worst_sim = 0.0_f64;
    let mut worst_closed = 0.0_f64;
    for e in [0.5, 1.0, 2.0] {
        for t in [0.5, 1.0, 2.0, 5.0] {
            let p = TwoLevelParams::new(FRAC_PI_4, e, t).unwrap();
            let (h, psi0) = two_level_hamiltonian(&p).unwrap();
            let traj = propagate_exact(&h, &psi0, TimeGrid::new(t, 2000).unwrap()).unwrap();
            let rep = qsl_report(&traj).unwrap();
            worst_sim = worst_sim.max((rep.theta_t - rep.path_length).abs());
            let closed = (theta_arccos_form(FRAC_PI_4, e, t) - stated_integral(FRAC_PI_4, e, t)).abs();
            worst_closed = worst_closed.max(closed);
        }
    }
    let saturation_ok = worst_sim <= 1e-6 && worst_closed <= 1e-12;

    // θ = π/6, E = 1, T = 1: slack from the stated closed forms
    let stated_slack = stated_integral(FRAC_PI_6, 1.0, 1.0) - theta_arccos_form(FRAC_PI_6, 1.0, 1.0);
    let p = TwoLevelParams::new(FRAC_PI_6, 1.0, 1.0).unwrap();
    let corrected_slack = two_level_saturation_gap(&p);
    let (h, psi0) = two_level_hamiltonian(&p).unwrap();
    let sim_slack = qsl_report(&propagate_exact(&h, &psi0, TimeGrid::new(1.0, 2000).unwrap()).unwrap())
        .unwrap()
        .slack;
    let non_saturation_ok = stated_slack > 1e-4;
    outcome(
        saturation_ok && non_saturation_ok,
        format!(
            "θ=π/4: max |Θ−∫ΔH| sim {worst_sim:.2e} (≤1e-6), closed {worst_closed:.2e} (≤1e-12) [{}]; \
             θ=π/6 slack > 1e-4 [{}]: stated closed forms {stated_slack:.6}, \
             exact closed forms {corrected_slack:.2e}, simulation {sim_slack:.2e}",
            if saturation_ok { "ok" } else { "FAIL" },
            if non_saturation_ok { "ok" } else { "FAIL" },
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut matched = 0;
    let mut worst_stated = 0.0_f64;
    let mut worst_exact = 0.0_f64;
    for _ in 0..50 {
        let theta = uniform(&mut r, 0.05, FRAC_PI_2 - 0.05);
        let e = uniform(&mut r, 0.2, 3.0);
        let t = uniform(&mut r, 0.2, 5.0);
        let p = TwoLevelParams::new(theta, e, t).unwrap();
        let q = simpson_fn(|s| two_level_dispersion(&p, s), 0.0, t, 2000).unwrap();
        let err = (q - stated_integral(theta, e, t)).abs();
        worst_stated = worst_stated.max(err);
        worst_exact = worst_exact.max((q - two_level_dispersion_integral(&p)).abs());
        if err <= 1e-8 {
            matched += 1;
        }
    }
    outcome(
        matched == 50,
        format!(
            "Simpson(n=2000) vs θ − arctan(e^(−ET) cot θ): {matched}/50 within 1e-8 (max error {worst_stated:.3e}); \
             vs π/2 − θ − arctan(e^(−ET) cot θ): max error {worst_exact:.2e}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0_f64;
    for n in [4, 1024] {
        for g in [1.0, 2.0] {
            let p = GroverParams::new(n, 0.0, g, 10.0, 0.01).unwrap();
            let m = grover_model(&p, n <= EMBED_LIMIT).unwrap();
            let traj = propagate_exact(&m.hamiltonian, &m.psi0, TimeGrid::new(10.0, 2000).unwrap()).unwrap();
            for s in &traj.samples {
                let sim = m.tangent_ratio(&s.phi).unwrap();
                let want = grover_tangent(&p, s.t);
                worst = worst.max((sim - want).abs() / want);
            }
        }
    }
    outcome(worst <= 1e-9, format!("max relative error of tan θ(t) {worst:.2e} (≤ 1e-9)"))
}

fn criterion_5() -> Outcome {
    let p = GroverParams::new(1024, 0.0, 1.0, 10.0, 0.01).unwrap();
    let crossing = grover_crossing_time(&p, false).unwrap().unwrap_or(f64::NAN);
    let crossing_ok = (crossing - 8.07043).abs() <= 1e-4;

    let dims = [16usize, 64, 256, 1024];
    let times: Vec<f64> = dims
        .iter()
        .map(|&n| {
            let q = GroverParams { dimension: n, horizon: 20.0, ..p };
            grover_crossing_time(&q, n <= EMBED_LIMIT).unwrap().unwrap()
        })
        .collect();
    let mut worst = 0.0_f64;
    for i in 0..dims.len() {
        for j in i + 1..dims.len() {
            let want = 0.5 * ((dims[j] - 1) as f64 / (dims[i] - 1) as f64).ln();
            worst = worst.max((times[j] - times[i] - want).abs());
        }
    }
    outcome(
        crossing_ok && worst <= 1e-6,
        format!(
            "crossing {crossing:.7} (8.07043 ± 1e-4); log-scaling max deviation {worst:.2e} (≤ 1e-6); \
             times {times:.5?}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut worst_residual = 0.0_f64;
    let mut min_lambda = f64::INFINITY;
    let two_level = TwoLevelParams::new(FRAC_PI_4, 1.0, 5.0).unwrap();
    let (h, psi0) = two_level_hamiltonian(&two_level).unwrap();
    let mut families = vec![(h, psi0)];
    for n in [4, 64, 1024] {
        let p = GroverParams::new(n, 0.0, 1.0, 5.0, 0.01).unwrap();
        let m = grover_model(&p, n <= EMBED_LIMIT).unwrap();
        families.push((m.hamiltonian, m.psi0));
    }
    for (h, psi0) in &families {
        let traj = propagate_exact(h, psi0, TimeGrid::new(5.0, 1000).unwrap()).unwrap();
        let cert = saturation_certificate(&traj, h).unwrap();
        worst_residual = worst_residual.max(cert.max_residual());
        min_lambda = min_lambda.min(cert.min_lambda().unwrap_or(0.0));
    }
    let families_ok = worst_residual <= 1e-8 && min_lambda >= 0.0;

    let mut r = rng(6);
    let mut consistent = 0;
    let mut considered = 0;
    for _ in 0..20 {
        let h = random_hermitian(&mut r, 4);
        let psi0 = random_state(&mut r, 4);
        let t = uniform(&mut r, 1.0, 5.0);
        let traj = propagate_exact(&h, &psi0, TimeGrid::new(t, 1000).unwrap()).unwrap();
        let rep = qsl_report(&traj).unwrap();
        if rep.slack > 1e-3 {
            considered += 1;
            if saturation_certificate(&traj, &h).unwrap().max_residual() > 1e-3 {
                consistent += 1;
            }
        }
    }
    outcome(
        families_ok && consistent == considered,
        format!(
            "saturating families: max residual {worst_residual:.2e} (≤ 1e-8), min λ {min_lambda:.3e} (≥ 0); \
             random: {consistent}/{considered} with slack > 1e-3 have residual > 1e-3"
        ),
    )
}

fn criterion_7(store: &[Trajectory]) -> Outcome {
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for traj in store {
        let rc = rate_check(traj).unwrap();
        worst = worst.min(rc.min_interior_margin() + rc.tolerance);
        if !rc.holds() {
            failures += 1;
        }
    }
    outcome(
        failures == 0 && !store.is_empty(),
        format!(
            "{}/{} instances satisfy |dΘ/dt| ≤ ΔH + tol at interior samples (min slack to tolerance {worst:.3e})",
            store.len() - failures,
            store.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut violations = 0;
    let mut samples = 0;
    for n in [4, 1024] {
        let p = GroverParams::new(n, 0.0, 1.0, 10.0, 0.01).unwrap();
        let m = grover_model(&p, n <= EMBED_LIMIT).unwrap();
        let traj = propagate_exact(&m.hamiltonian, &m.psi0, TimeGrid::new(10.0, 2000).unwrap()).unwrap();
        let alpha_sq = 1.0 / n as f64;
        for (t, q) in infidelity_to(&traj, &m.marked).unwrap() {
            let b = fidelity_convergence_bound(alpha_sq, 1.0 - alpha_sq, p.gap(), t).unwrap();
            samples += 1;
            // relative 1e-12 for floating-point rounding of the two sides
            if q > b * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violations of 1 − F ≤ (‖χ‖²/|α|²)e^(−2Δt) over {samples} samples"),
    )
}

fn criterion_9() -> Outcome {
    let p = TwoLevelParams::new(FRAC_PI_4, 1.0, 2.0).unwrap();
    let (h, psi0) = two_level_hamiltonian(&p).unwrap();
    let err = |n: usize| {
        let grid = TimeGrid::new(p.horizon, n).unwrap();
        let a = propagate_exact(&h, &psi0, grid).unwrap();
        let b = propagate_rk4(&h, &psi0, grid).unwrap();
        a.samples
            .iter()
            .zip(&b.samples)
            .map(|(x, y)| x.phi.distance(&y.phi).unwrap())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(20), err(40));
    let ratio = e1 / e2;
    outcome(
        (11.0..=20.0).contains(&ratio),
        format!(
            "max error n=20 {e1:.3e}, n=40 {e2:.3e}, ratio {ratio:.3} (in [11, 20]), order {:.3}",
            ratio.log2()
        ),
    )
}

/// A named criterion and its outcome.
pub struct Criterion {
    pub name: &'static str,
    pub outcome: Outcome,
}

impl Criterion {
    pub fn line(&self) -> String {
        let tag = if self.outcome.pass { "PASS" } else { "FAIL" };
        format!("[{tag}] {}: {}", self.name, self.outcome.detail)
    }
}

/// Evaluates every criterion in order; the last one times the others.
pub fn evaluate_all() -> Vec<Criterion> {
    let start = Instant::now();
    let mut store = Vec::new();
    let mut results = vec![
        ("C1 QSL inequality on random instances", criterion_1(&mut store)),
        ("C2 two-level saturation / non-saturation", criterion_2()),
        ("C3 dispersion integral closed form", criterion_3()),
        ("C4 Grover tangent law", criterion_4()),
        ("C5 Grover runtime and log scaling", criterion_5()),
        ("C6 saturation certificate", criterion_6()),
        ("C7 rate bound", criterion_7(&store)),
        ("C8 ground-state convergence bound", criterion_8()),
        ("C9 RK4 order", criterion_9()),
    ];
    let secs = start.elapsed().as_secs_f64();
    results.push((
        "C10 time budget",
        outcome(secs < 60.0, format!("acceptance workload {secs:.2} s (< 60 s)")),
    ));
    results
        .into_iter()
        .map(|(name, outcome)| Criterion { name, outcome })
        .collect()
}
