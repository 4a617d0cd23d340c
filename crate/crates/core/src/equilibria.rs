//! Planar relative equilibria from the uniform-rotation ansatz.
//!
//! `q(t) = R(omega t) q(0)` solves the equations of motion iff
//! `sum_{j != k} m_j (q_j - q_k) f(r_jk^2) + omega^2 q_k = 0` for every body.
//! [`solve_ce`] finds such `(q, omega^2)` by damped Gauss–Newton with the
//! translation, rotation and scale symmetries removed by extra equations.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::rotating_velocities;
use crate::forcelaw::ForceLaw;
use crate::nbody::{Bodies, PhaseState, System};

/// Convergence threshold on the infinity norm of the balance residual.
pub const SOLVER_TOL: f64 = 1e-11;
const MAX_ITERATIONS: usize = 100;
const MAX_HALVINGS: usize = 30;
const FD_STEP: f64 = 1e-7;

/// Balance residual `R_k = a_k + omega^2 q_k`, flat `n * 2`.
pub fn ce_residual(q: &[f64], omega2: f64, system: &System) -> Result<Vec<f64>> {
    let mut r = vec![0.0; q.len()];
    system.accelerations_into(q, &mut r)?;
    for (ri, qi) in r.iter_mut().zip(q) {
        *ri += omega2 * qi;
    }
    Ok(r)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Which symmetry representatives the solver pins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeSpec {
    /// Body constrained to the positive x-axis.
    pub pin_body: usize,
    /// Moment of inertia about the barycenter held fixed.
    pub inertia: f64,
}

impl GaugeSpec {
    /// Pins the body farthest from the barycenter and keeps the seed's inertia.
    pub fn from_seed(seed: &[f64], bodies: &Bodies) -> Self {
        let centered = recenter(seed, bodies);
        let (pin_body, _) = centered
            .chunks_exact(2)
            .map(|p| p[0] * p[0] + p[1] * p[1])
            .enumerate()
            .fold((0, -1.0), |best, (k, r2)| if r2 > best.1 { (k, r2) } else { best });
        Self {
            pin_body,
            inertia: planar_inertia(&centered, bodies),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CentralConfiguration {
    /// Barycentric planar positions, flat `n * 2`.
    pub q: Vec<f64>,
    pub omega2: f64,
    /// `max |R|` re-evaluated at the returned point.
    pub residual_norm: f64,
    pub iterations: usize,
    pub system: System,
}

impl CentralConfiguration {
    /// Validates a candidate and records its residual.
    pub fn from_parts(q: Vec<f64>, omega2: f64, system: &System) -> Result<Self> {
        if system.dim() != 2 {
            return Err(Error::InvalidInput("relative equilibria are constructed in the plane".into()));
        }
        if q.len() != 2 * system.n() {
            return Err(Error::InvalidInput("configuration size does not match bodies".into()));
        }
        if !(omega2 > 0.0 && omega2.is_finite()) {
            return Err(Error::InvalidInput(format!("omega^2 must be positive, got {omega2}")));
        }
        let com = centroid(&q, system.bodies.masses());
        let scale = inf_norm(&q).max(1.0);
        if com.iter().any(|c| c.abs() > 1e-9 * scale) {
            return Err(Error::InvalidInput("configuration is not barycentric".into()));
        }
        let residual_norm = inf_norm(&ce_residual(&q, omega2, system)?);
        Ok(Self {
            q,
            omega2,
            residual_norm,
            iterations: 0,
            system: system.clone(),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega2.sqrt()
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega()
    }

    pub fn law(&self) -> &ForceLaw {
        &self.system.law
    }

    pub fn masses(&self) -> &[f64] {
        self.system.bodies.masses()
    }
}

/// Initial state of the rigid rotation: `v_k = omega (-y_k, x_k)` at `t = 0`.
pub fn make_rotating_state(cc: &CentralConfiguration) -> PhaseState {
    PhaseState {
        t: 0.0,
        dim: 2,
        q: cc.q.clone(),
        v: rotating_velocities(&cc.q, cc.omega()),
    }
}

fn centroid(q: &[f64], m: &[f64]) -> [f64; 2] {
    let total: f64 = m.iter().sum();
    let mut c = [0.0; 2];
    for (p, mk) in q.chunks_exact(2).zip(m) {
        c[0] += mk * p[0];
        c[1] += mk * p[1];
    }
    [c[0] / total, c[1] / total]
}

fn recenter(q: &[f64], bodies: &Bodies) -> Vec<f64> {
    let c = centroid(q, bodies.masses());
    q.chunks_exact(2).flat_map(|p| [p[0] - c[0], p[1] - c[1]]).collect()
}

fn planar_inertia(q: &[f64], bodies: &Bodies) -> f64 {
    q.chunks_exact(2)
        .zip(bodies.masses())
        .map(|(p, m)| m * (p[0] * p[0] + p[1] * p[1]))
        .sum()
}

/// Residual plus gauge equations; `x = (q, omega^2)`.
fn augmented(x: &[f64], system: &System, gauge: &GaugeSpec) -> Result<Vec<f64>> {
    let n2 = x.len() - 1;
    let (q, omega2) = (&x[..n2], x[n2]);
    let mut out = ce_residual(q, omega2, system)?;
    let c = centroid(q, system.bodies.masses());
    out.extend(c);
    out.push(q[2 * gauge.pin_body + 1]);
    out.push(planar_inertia(q, &system.bodies) / gauge.inertia - 1.0);
    Ok(out)
}

/// Solves the balance equations from `seed` (flat `n * 2`).
///
/// With `gauge = None` the gauge is taken from the seed; see [`GaugeSpec::from_seed`].
pub fn solve_ce(seed: &[f64], system: &System, gauge: Option<GaugeSpec>) -> Result<CentralConfiguration> {
    if system.dim() != 2 {
        return Err(Error::InvalidInput("relative equilibria are constructed in the plane".into()));
    }
    let n = system.n();
    if seed.len() != 2 * n || seed.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("seed must hold n finite planar positions".into()));
    }
    system.check_separation(seed)?;
    let gauge = gauge.unwrap_or_else(|| GaugeSpec::from_seed(seed, &system.bodies));
    if gauge.pin_body >= n || !(gauge.inertia > 0.0) {
        return Err(Error::InvalidInput("gauge must pin an existing body at positive inertia".into()));
    }

    // Move the seed into the gauge: barycentric, pinned body on +x, inertia matched.
    let mut q = recenter(seed, &system.bodies);
    let p = &q[2 * gauge.pin_body..2 * gauge.pin_body + 2];
    let theta = p[1].atan2(p[0]);
    let (s, c) = (-theta).sin_cos();
    for pt in q.chunks_exact_mut(2) {
        let (x, y) = (pt[0], pt[1]);
        pt[0] = c * x - s * y;
        pt[1] = s * x + c * y;
    }
    let stretch = (gauge.inertia / planar_inertia(&q, &system.bodies)).sqrt();
    q.iter_mut().for_each(|x| *x *= stretch);

    let acc = ce_residual(&q, 0.0, system)?;
    let m = system.bodies.masses();
    let num: f64 = acc.chunks_exact(2).zip(q.chunks_exact(2)).zip(m).map(|((a, p), mk)| mk * (a[0] * p[0] + a[1] * p[1])).sum();
    let den = planar_inertia(&q, &system.bodies);
    let omega2_guess = (-num / den).abs().max(1e-8);

    let mut x = q;
    x.push(omega2_guess);
    let dim = x.len();
    let mut fx = augmented(&x, system, &gauge)?;
    let mut norm = l2(&fx);

    for iter in 0..MAX_ITERATIONS {
        if inf_norm(&fx) < SOLVER_TOL {
            let omega2 = x[dim - 1];
            return finish(x, omega2, system, iter);
        }
        let jac = jacobian(&x, &fx, system, &gauge)?;
        let svd = jac.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smin > 1e-10 * smax) {
            return Err(Error::SingularJacobian);
        }
        let rhs = -DVector::from_column_slice(&fx);
        let dx = svd
            .solve(&rhs, 1e-14 * smax)
            .map_err(|_| Error::SingularJacobian)?;

        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, b)| a + lambda * b).collect();
            if let Ok(ft) = augmented(&trial, system, &gauge) {
                let nt = l2(&ft);
                if nt < norm {
                    x = trial;
                    fx = ft;
                    norm = nt;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            if inf_norm(&fx) < SOLVER_TOL {
                break;
            }
            return Err(Error::NoConvergence {
                iterations: iter + 1,
                residual: inf_norm(&fx),
            });
        }
    }
    if inf_norm(&fx) < SOLVER_TOL {
        let omega2 = x[dim - 1];
        return finish(x, omega2, system, MAX_ITERATIONS);
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: inf_norm(&fx),
    })
}

fn finish(mut x: Vec<f64>, omega2: f64, system: &System, iterations: usize) -> Result<CentralConfiguration> {
    x.pop();
    let mut cc = CentralConfiguration::from_parts(x, omega2, system)?;
    if cc.residual_norm >= SOLVER_TOL {
        return Err(Error::NoConvergence {
            iterations,
            residual: cc.residual_norm,
        });
    }
    cc.iterations = iterations;
    Ok(cc)
}

fn jacobian(x: &[f64], fx: &[f64], system: &System, gauge: &GaugeSpec) -> Result<DMatrix<f64>> {
    let mut jac = DMatrix::zeros(fx.len(), x.len());
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        let h = FD_STEP * (1.0 + x[i].abs());
        xp[i] = x[i] + h;
        let fp = augmented(&xp, system, gauge)?;
        xp[i] = x[i] - h;
        let fm = augmented(&xp, system, gauge)?;
        xp[i] = x[i];
        for (r, (a, b)) in fp.iter().zip(&fm).enumerate() {
            jac[(r, i)] = (a - b) / (2.0 * h);
        }
    }
    Ok(jac)
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Vertices of a regular `n`-gon of circumradius `radius`, body 0 on +x.
pub fn polygon_seed(n: usize, radius: f64) -> Vec<f64> {
    (0..n)
        .flat_map(|k| {
            let th = 2.0 * PI * k as f64 / n as f64;
            [radius * th.cos(), radius * th.sin()]
        })
        .collect()
}

/// `n` points on the x-axis, evenly spaced and centered on the origin.
pub fn collinear_seed(n: usize, spacing: f64) -> Vec<f64> {
    let mid = (n as f64 - 1.0) / 2.0;
    (0..n).flat_map(|k| [spacing * (k as f64 - mid), 0.0]).collect()
}
