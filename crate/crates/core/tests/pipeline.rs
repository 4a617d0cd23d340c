use proptest::prelude::*;
use saari_core::output::{csv_header, write_series_csv};
use saari_core::scenario::Scenario;
use saari_core::{analyze, integrate, Bodies, ForceLaw, IntegratorConfig, PhaseState, System, Verdict};

const LAGRANGE: &str = r#"{
  "masses": [1.0, 2.0, 3.0], "d": 2,
  "init": {"generator": {"type": "polygon", "rng_seed": 0}},
  "law": {"type": "power", "alpha": 3.0, "C": 1.0},
  "integrator": {"method": "adaptive", "rtol": 1e-12, "atol": 1e-12, "t_end": 6.0, "sample_every": 1},
  "analysis": {"tol_i": 1e-6, "tol_r": 1e-3}
}"#;

#[test]
fn generated_lagrange_triangle_is_rigid() {
    let p = Scenario::from_json(LAGRANGE).unwrap().prepare().unwrap();
    let traj = integrate(&p.system, &p.state0, &p.integrator).unwrap();
    let rep = analyze(&traj, &p.tolerances).unwrap();
    assert_eq!(rep.verdict, Verdict::ConstantInertiaRigid);

    // unequal masses still give an equilateral triangle
    let d: Vec<f64> = saari_core::pairwise_distances(&p.state0).into_iter().map(|x| x.2).collect();
    assert!(d.iter().all(|x| (x - d[0]).abs() < 1e-9 * d[0]), "{d:?}");

    let mut csv = Vec::new();
    write_series_csv(&traj, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with(&csv_header(2)));
}

#[test]
fn perturbed_equilibrium_loses_constant_inertia() {
    let text = LAGRANGE.replace(r#""rng_seed": 0"#, r#""params": {"perturbation": 0.05}, "rng_seed": 3"#);
    let p = Scenario::from_json(&text).unwrap().prepare().unwrap();
    let traj = integrate(&p.system, &p.state0, &p.integrator).unwrap();
    let rep = analyze(&traj, &p.tolerances).unwrap();
    assert_eq!(rep.verdict, Verdict::VariableInertia);
    assert!(rep.energy_drift < 1e-9);
}

fn bounded_state(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0.5..2.0f64, n),
        prop::collection::vec(-1.0..1.0f64, 2 * n),
        prop::collection::vec(-0.3..0.3f64, 2 * n),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // momentum and angular momentum are conserved by every law, admissible or not
    #[test]
    fn integration_conserves_momenta(
        (m, q, v) in bounded_state(3),
        alpha in prop::sample::select(vec![1.0, 2.0, 3.0, 4.0]),
    ) {
        let system = System::new(Bodies::new(m, 2).unwrap(), ForceLaw::power_law(alpha, 1.0).unwrap());
        let st = system.reduce_to_barycenter(&PhaseState::new(0.0, 2, q, v).unwrap());
        prop_assume!(saari_core::pairwise_distances(&st).iter().all(|p| p.2 > 0.3));
        let Ok(traj) = integrate(&system, &st, &IntegratorConfig::adaptive(1.0, 1e-10)) else {
            return Ok(());
        };
        let (first, last) = (&traj.samples[0], traj.samples.last().unwrap());
        let scale = 1.0 + first.angular_momentum[0].abs();
        prop_assert!((last.angular_momentum[0] - first.angular_momentum[0]).abs() < 1e-8 * scale);
        for (a, b) in last.momentum.iter().zip(&first.momentum) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        // C1 tracks 2 I M along the flow
        for s in &traj.samples {
            prop_assert!((s.c1_sum - 2.0 * s.inertia * system.bodies.total_mass()).abs() < 1e-9 * s.c1_sum);
        }
    }
}
