//! Closed-form reference configurations.

use std::f64::consts::PI;

use crate::forcelaw::ForceLaw;
use crate::nbody::{Bodies, PhaseState, System};

/// Unit masses at `(-0.5, 0)` and `(0.5, 0)` in uniform rotation.
///
/// Force balance at separation 1 gives `omega^2 = 2 f(1)`; for the Newtonian
/// law the speeds are `sqrt(2)/2` and the period is `pi sqrt(2)`.
pub fn circular_two_body(law: ForceLaw) -> (System, PhaseState) {
    let omega = (2.0 * law.f(1.0)).sqrt();
    let q = vec![-0.5, 0.0, 0.5, 0.0];
    let v = rotating_velocities(&q, omega);
    let system = System::new(Bodies::equal(2, 2).expect("two unit masses"), law);
    (system, PhaseState::new(0.0, 2, q, v).expect("consistent shape"))
}

/// Rotation period of [`circular_two_body`].
pub fn circular_two_body_period(law: &ForceLaw) -> f64 {
    2.0 * PI / (2.0 * law.f(1.0)).sqrt()
}

/// Equal unit masses on an equilateral triangle of side 1 in rigid rotation
/// (`omega^2 = 3 f(1)`), with position and velocity translated by
/// `(drift, -drift)`.
pub fn equilateral_triangle(law: ForceLaw, drift: f64) -> (System, PhaseState) {
    let radius = 1.0 / 3f64.sqrt();
    let mut q = Vec::with_capacity(6);
    for k in 0..3 {
        let th = 2.0 * PI * k as f64 / 3.0;
        q.extend([radius * th.cos(), radius * th.sin()]);
    }
    let omega = (3.0 * law.f(1.0)).sqrt();
    let mut v = rotating_velocities(&q, omega);
    for (qk, vk) in q.chunks_exact_mut(2).zip(v.chunks_exact_mut(2)) {
        qk[0] += drift;
        qk[1] -= drift;
        vk[0] += drift;
        vk[1] -= drift;
    }
    let system = System::new(Bodies::equal(3, 2).expect("three unit masses"), law);
    (system, PhaseState::new(0.0, 2, q, v).expect("consistent shape"))
}

/// `v_k = omega (-y_k, x_k)` for planar positions.
pub fn rotating_velocities(q: &[f64], omega: f64) -> Vec<f64> {
    q.chunks_exact(2)
        .flat_map(|p| [-omega * p[1], omega * p[0]])
        .collect()
}

/// Unit masses at `(+-radius, 0)` and `(0, +-radius)` in rigid rotation, with
/// `omega^2 = 2 f(2 R^2) + 2 f(4 R^2)`. The coordinates are exact in binary,
/// so the four-fold symmetry holds to the last bit.
pub fn equal_mass_square(law: ForceLaw, radius: f64) -> (System, PhaseState) {
    let r2 = radius * radius;
    let omega = (2.0 * law.f(2.0 * r2) + 2.0 * law.f(4.0 * r2)).sqrt();
    let q = vec![radius, 0.0, 0.0, radius, -radius, 0.0, 0.0, -radius];
    let v = rotating_velocities(&q, omega);
    let system = System::new(Bodies::equal(4, 2).expect("four unit masses"), law);
    (system, PhaseState::new(0.0, 2, q, v).expect("consistent shape"))
}

/// Euler's collinear configuration: unit masses at `-a, 0, a` on the x axis,
/// rotating with `omega^2 = f(a^2) + 2 f(4 a^2)`.
pub fn euler_collinear(law: ForceLaw, a: f64) -> (System, PhaseState) {
    let omega = (law.f(a * a) + 2.0 * law.f(4.0 * a * a)).sqrt();
    let q = vec![-a, 0.0, 0.0, 0.0, a, 0.0];
    let v = rotating_velocities(&q, omega);
    let system = System::new(Bodies::equal(3, 2).expect("three unit masses"), law);
    (system, PhaseState::new(0.0, 2, q, v).expect("consistent shape"))
}

/// Angular rate of a rigidly rotating planar state, read off body 0.
pub fn rotation_rate(state: &PhaseState) -> f64 {
    let (q, v) = (state.position(0), state.velocity(0));
    (q[0] * v[1] - q[1] * v[0]) / (q[0] * q[0] + q[1] * q[1])
}
