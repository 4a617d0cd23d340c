//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saari_core::equilibria::solve_ce;
use saari_core::fixtures::{
    circular_two_body, circular_two_body_period, equal_mass_square, equilateral_triangle, euler_collinear, rotation_rate,
};
use saari_core::forcelaw::log_grid;
use saari_core::integrators::{convergence_order, time_reversed};
use saari_core::probe::{minimize, ProbeConfig, ProbeLaw};
use saari_core::saari::{admissible_battery, analyze, find_counterexample, run_battery, CounterexampleConfig, Tolerances, Verdict};
use saari_core::{
    classify_admissibility, integrate, AdmissibilityClass, Bodies, ForceLaw, IntegratorConfig, Method, PhaseState,
    System,
};

/// Newtonian probe minimum at N=3, K=2, rho=0.1, 50 restarts, seed 0.
const PROBE_BASELINE: f64 = 3.638573e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn c1_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let d = rng.random_range(1..=3);
        let masses: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..10.0)).collect();
        let bodies = Bodies::new(masses, d).unwrap();
        let q: Vec<f64> = (0..n * d).map(|_| rng.random_range(-5.0..5.0)).collect();
        let st = bodies.reduce_to_barycenter(&PhaseState::new(0.0, d, q, vec![0.0; n * d]).unwrap());
        // independent double sum over ordered pairs
        let mut c1 = 0.0;
        for j in 0..n {
            for k in 0..n {
                let r2: f64 = st.position(j).iter().zip(st.position(k)).map(|(a, b)| (a - b).powi(2)).sum();
                c1 += bodies.masses()[j] * bodies.masses()[k] * r2;
            }
        }
        let inertia: f64 = (0..n)
            .map(|k| bodies.masses()[k] * st.position(k).iter().map(|x| x * x).sum::<f64>())
            .sum();
        worst = worst.max((c1 - 2.0 * inertia * bodies.total_mass()).abs() / c1);
        worst = worst.max((bodies.c1_sum(&st) - c1).abs() / c1);
    }
    outcome(worst < 1e-11, format!("max |C1 - 2IM|/C1 = {worst:.3e} over 1000 states (< 1e-11)"))
}

fn energy_conservation() -> Outcome {
    let cfg = IntegratorConfig::adaptive(10.0, 1e-12);
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, (sys, st)) in [
        ("two-body", circular_two_body(ForceLaw::newtonian())),
        ("lagrange", equilateral_triangle(ForceLaw::newtonian(), 0.0)),
    ] {
        let traj = integrate(&sys, &st, &cfg).unwrap();
        let e0 = traj.samples[0].energy;
        let drift = traj.samples.iter().map(|s| (s.energy - e0).abs()).fold(0.0, f64::max) / e0.abs();
        pass &= drift < 1e-8;
        parts.push(format!("{name} {drift:.3e}"));
    }
    outcome(pass, format!("relative energy drift over t = 10: {} (< 1e-8)", parts.join(", ")))
}

/// Random starts in `[-2, 2]^2` with pairwise separation at least 1 and
/// velocities in `[-0.5, 0.5]^2`. A second difference at `h = 1e-3` cannot
/// resolve close encounters, so the first five trajectories whose closest
/// approach stays above 0.2 are used.
fn lagrange_jacobi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let system = System::new(Bodies::new(vec![1.0, 0.8, 1.3], 2).unwrap(), ForceLaw::newtonian());
    let h = 1e-3;
    let cfg = IntegratorConfig::fixed(Method::Rk4Fixed, h, 2.0);
    let (mut done, mut draws, mut worst) = (0, 0, 0.0f64);
    while done < 5 && draws < 1000 {
        draws += 1;
        let q: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
        let v: Vec<f64> = (0..6).map(|_| rng.random_range(-0.5..0.5)).collect();
        let st = PhaseState::new(0.0, 2, q, v).unwrap();
        if saari_core::pairwise_distances(&st).iter().any(|p| p.2 < 1.0) {
            continue;
        }
        let st = system.reduce_to_barycenter(&st);
        let Ok(traj) = integrate(&system, &st, &cfg) else { continue };
        if traj.samples.iter().any(|s| s.r_min < 0.2) {
            continue;
        }
        let inertia: Vec<f64> = traj.samples.iter().map(|s| s.inertia).collect();
        let scale = traj.samples.iter().map(|s| s.iddot.abs()).fold(0.0, f64::max);
        for k in 1..inertia.len() - 1 {
            let fd = (inertia[k + 1] - 2.0 * inertia[k] + inertia[k - 1]) / (h * h);
            // independent of the sample's own Iddot: 4T - 2 sum m m r^2 f
            let rhs = system.lagrange_jacobi_rhs(&traj.states[k]).unwrap();
            worst = worst.max((fd - rhs).abs() / scale);
        }
        done += 1;
    }
    outcome(
        done == 5 && worst < 1e-4,
        format!("{done} trajectories ({draws} draws), max |FD(I'') - LJ rhs| / max|I''| = {worst:.3e} (< 1e-4)"),
    )
}

fn relative_equilibria_are_rigid() -> Outcome {
    let tol = Tolerances::default();
    let mut pass = true;
    let mut worst = (0.0f64, 0.0f64);
    let mut count = 0;
    for alpha in [1.0, 3.0] {
        let law = ForceLaw::power_law(alpha, 1.0).unwrap();
        let cases = [
            circular_two_body(law.clone()),
            euler_collinear(law.clone(), 1.0),
            equilateral_triangle(law.clone(), 0.0),
            equal_mass_square(law.clone(), 1.0),
        ];
        for (sys, st) in &cases {
            // the closed forms must agree with the solver
            let cc = solve_ce(&st.q, sys, None).unwrap();
            assert!((cc.omega2 - rotation_rate(st).powi(2)).abs() < 1e-9 * cc.omega2);
        }
        for (sys, st) in cases {
            let period = 2.0 * PI / rotation_rate(&st);
            let traj = integrate(&sys, &st, &IntegratorConfig::adaptive(5.0 * period, 1e-13)).unwrap();
            let rep = analyze(&traj, &tol).unwrap();
            pass &= rep.verdict == Verdict::ConstantInertiaRigid
                && rep.inertia_rel_variation < 1e-6
                && rep.rigidity_rel_variation < 1e-6;
            worst.0 = worst.0.max(rep.inertia_rel_variation);
            worst.1 = worst.1.max(rep.rigidity_rel_variation);
            count += 1;
        }
    }
    outcome(
        pass,
        format!(
            "{count} equilibria over 5 periods: max I variation {:.3e}, max R variation {:.3e} (< 1e-6, ConstantInertiaRigid)",
            worst.0, worst.1
        ),
    )
}

fn inverse_cube_degeneracy() -> Outcome {
    let law = ForceLaw::inverse_cube();
    let adm = classify_admissibility(&law, &log_grid(0.1, 10.0, 41)).unwrap();
    let max_g = adm.evidence.iter().map(|(_, g)| g.abs()).fold(0.0, f64::max);
    let ce = find_counterexample(&CounterexampleConfig::default());
    let (ok_ce, ce_detail) = match &ce {
        Ok(c) => (
            c.attempts <= 100 && c.report.inertia_rel_variation < 1e-6 && c.report.rigidity_rel_variation > 0.05,
            format!(
                "counterexample after {} attempt(s): I variation {:.3e}, R variation {:.3}",
                c.attempts, c.report.inertia_rel_variation, c.report.rigidity_rel_variation
            ),
        ),
        Err(e) => (false, format!("counterexample search failed: {e}")),
    };
    outcome(
        adm.class == AdmissibilityClass::DegenerateInverseCube && max_g < 1e-12 && ok_ce,
        format!("alpha = 4 is {:?} with max|G| = {max_g:.3e}; {ce_detail}", adm.class),
    )
}

fn no_admissible_anomaly() -> Outcome {
    let scenarios = admissible_battery(5, 5.0, 31).unwrap();
    let report = run_battery(&scenarios, &Tolerances::default());
    let analyzed = report.entries.iter().filter(|e| e.report.is_some()).count();
    // alpha = 2 cells are Indefinite and can never be flagged; count the rest
    let admissible = report
        .entries
        .iter()
        .filter(|e| e.report.is_some() && e.class.is_admissible())
        .count();
    outcome(
        analyzed >= 50 && report.summary.anomalies == 0,
        format!(
            "{} scenarios, {analyzed} analyzed ({admissible} under fixed-sign laws), {} failed, {} anomalies; verdicts {:?}",
            report.summary.total, report.summary.failed, report.summary.anomalies, report.summary.verdicts
        ),
    )
}

fn probe_regression() -> Outcome {
    let cfg = ProbeConfig::default();
    let newtonian = minimize(&[ProbeLaw::newtonian()], &cfg).unwrap();
    let zero = minimize(&[ProbeLaw::Zero], &cfg).unwrap();
    let floor = newtonian.min_residual;
    outcome(
        floor > 1e-6 && floor >= 0.5 * PROBE_BASELINE && zero.min_residual < 1e-12,
        format!(
            "newtonian min residual {floor:.6e} (> 1e-6: {}; >= 0.5 x baseline {PROBE_BASELINE:.6e}: {}); zero control {:.3e} (< 1e-12)",
            floor > 1e-6,
            floor >= 0.5 * PROBE_BASELINE,
            zero.min_residual
        ),
    )
}

fn integrator_orders() -> Outcome {
    let law = ForceLaw::newtonian();
    let (sys, mut st) = circular_two_body(law.clone());
    st.v[1] *= 1.15;
    st.v[3] *= 1.15;
    let period = circular_two_body_period(&law);
    let rk4_h: Vec<f64> = [32.0, 64.0, 128.0, 256.0].iter().map(|k| period / k).collect();
    let lf_h: Vec<f64> = [64.0, 128.0, 256.0, 512.0].iter().map(|k| period / k).collect();
    let rk4 = convergence_order(&sys, &st, Method::Rk4Fixed, period, &rk4_h).unwrap().order();
    let lf = convergence_order(&sys, &st, Method::Leapfrog, period, &lf_h).unwrap().order();

    let cfg = IntegratorConfig::adaptive(7.0, 1e-12);
    let fwd = integrate(&sys, &st, &cfg).unwrap();
    let back = integrate(&sys, &time_reversed(fwd.last()), &cfg).unwrap();
    let v_back: Vec<f64> = back.last().v.iter().map(|x| -x).collect();
    let reversal = max_abs_diff(&back.last().q, &st.q).max(max_abs_diff(&v_back, &st.v));

    let near = |o: Option<f64>, target: f64| o.is_some_and(|o| (o - target).abs() <= 0.3);
    outcome(
        near(rk4, 4.0) && near(lf, 2.0) && reversal < 1e-7,
        format!("rk4 order {rk4:.3?}, leapfrog order {lf:.3?} (+-0.3); time-reversal error {reversal:.3e} (< 1e-7)"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("C1 pair-sum identity C1 = 2IM", c1_identity),
        ("C2 energy conservation", energy_conservation),
        ("C3 Lagrange-Jacobi identity", lagrange_jacobi),
        ("C4 relative equilibria are rigid", relative_equilibria_are_rigid),
        ("C5 inverse-cube degeneracy and counterexample", inverse_cube_degeneracy),
        ("C6 no anomaly under fixed-sign laws", no_admissible_anomaly),
        ("C7 probe regression", probe_regression),
        ("C8 integrator orders and reversibility", integrator_orders),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let out = check();
        failed += usize::from(!out.pass);
        println!("{} {name}: {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
