//! System state, equations of motion and the conserved or constrained
//! quantities along their solutions.
//!
//! Positions and velocities are stored row-major as flat `n * d` buffers.
//! All double sums run over ordered pairs `j != k` and are evaluated as twice
//! the sum over `j < k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcelaw::ForceLaw;

/// Default minimum admissible pairwise distance.
pub const DEFAULT_COLLISION_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bodies {
    masses: Vec<f64>,
    dim: usize,
}

impl Bodies {
    pub fn new(masses: Vec<f64>, dim: usize) -> Result<Self> {
        if masses.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least two bodies, got {}",
                masses.len()
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidInput(format!("masses must be positive, got {m}")));
        }
        Ok(Self { masses, dim })
    }

    pub fn equal(n: usize, dim: usize) -> Result<Self> {
        Self::new(vec![1.0; n], dim)
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `I = sum_j m_j |q_j|^2`, about the origin.
    pub fn moment_of_inertia(&self, state: &PhaseState) -> f64 {
        self.masses
            .iter()
            .zip(state.q.chunks_exact(self.dim))
            .map(|(m, q)| m * norm2(q))
            .sum()
    }

    /// `dI/dt = 2 sum_k m_k q_k . v_k`.
    pub fn inertia_rate(&self, state: &PhaseState) -> f64 {
        2.0 * self
            .masses
            .iter()
            .zip(state.q.chunks_exact(self.dim).zip(state.v.chunks_exact(self.dim)))
            .map(|(m, (q, v))| m * dot(q, v))
            .sum::<f64>()
    }

    pub fn kinetic_energy(&self, state: &PhaseState) -> f64 {
        0.5 * self
            .masses
            .iter()
            .zip(state.v.chunks_exact(self.dim))
            .map(|(m, v)| m * norm2(v))
            .sum::<f64>()
    }

    /// `sum_{j != k} m_j m_k |q_j - q_k|^2`; equals `2 I M` about the barycenter.
    pub fn c1_sum(&self, state: &PhaseState) -> f64 {
        let mut s = 0.0;
        self.for_each_pair(state, |j, k, r2, _| s += self.masses[j] * self.masses[k] * r2);
        2.0 * s
    }

    pub fn momentum(&self, state: &PhaseState) -> Vec<f64> {
        let mut p = vec![0.0; self.dim];
        for (m, v) in self.masses.iter().zip(state.v.chunks_exact(self.dim)) {
            for (pa, va) in p.iter_mut().zip(v) {
                *pa += m * va;
            }
        }
        p
    }

    pub fn center_of_mass(&self, state: &PhaseState) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for (m, q) in self.masses.iter().zip(state.q.chunks_exact(self.dim)) {
            for (ca, qa) in c.iter_mut().zip(q) {
                *ca += m * qa;
            }
        }
        let total = self.total_mass();
        c.iter_mut().for_each(|x| *x /= total);
        c
    }

    /// Independent components `L_ab = sum m (q_a v_b - q_b v_a)` for `a < b`,
    /// in lexicographic order of `(a, b)`.
    pub fn angular_momentum(&self, state: &PhaseState) -> Vec<f64> {
        let d = self.dim;
        let mut l = Vec::with_capacity(d * (d.saturating_sub(1)) / 2);
        for a in 0..d {
            for b in a + 1..d {
                let s: f64 = self
                    .masses
                    .iter()
                    .zip(state.q.chunks_exact(d).zip(state.v.chunks_exact(d)))
                    .map(|(m, (q, v))| m * (q[a] * v[b] - q[b] * v[a]))
                    .sum();
                l.push(s);
            }
        }
        l
    }

    /// Shifts positions and velocities so that `sum m q = 0` and `sum m v = 0`.
    pub fn reduce_to_barycenter(&self, state: &PhaseState) -> PhaseState {
        let d = self.dim;
        let total = self.total_mass();
        let com = self.center_of_mass(state);
        let vcm: Vec<f64> = self.momentum(state).into_iter().map(|p| p / total).collect();
        let mut out = state.clone();
        for (q, v) in out.q.chunks_exact_mut(d).zip(out.v.chunks_exact_mut(d)) {
            for a in 0..d {
                q[a] -= com[a];
                v[a] -= vcm[a];
            }
        }
        out
    }

    /// Checks shape and finiteness of `state` against these bodies.
    pub fn validate(&self, state: &PhaseState) -> Result<()> {
        let len = self.n() * self.dim;
        if state.dim != self.dim || state.q.len() != len || state.v.len() != len {
            return Err(Error::InvalidInput(format!(
                "state shape ({} x {}) does not match {} bodies in dimension {}",
                state.n(),
                state.dim,
                self.n(),
                self.dim
            )));
        }
        if !state.t.is_finite() || state.q.iter().chain(&state.v).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("state contains non-finite entries".into()));
        }
        Ok(())
    }

    #[inline]
    fn for_each_pair(&self, state: &PhaseState, mut visit: impl FnMut(usize, usize, f64, &[f64])) {
        let d = self.dim;
        let n = self.n();
        let mut diff = vec![0.0; d];
        for k in 0..n {
            let qk = &state.q[k * d..(k + 1) * d];
            for j in k + 1..n {
                let qj = &state.q[j * d..(j + 1) * d];
                for a in 0..d {
                    diff[a] = qj[a] - qk[a];
                }
                visit(j, k, norm2(&diff), &diff);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub dim: usize,
    pub q: Vec<f64>,
    pub v: Vec<f64>,
}

impl PhaseState {
    pub fn new(t: f64, dim: usize, q: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if dim == 0 || q.len() % dim != 0 || q.len() != v.len() {
            return Err(Error::InvalidInput(format!(
                "positions ({}) and velocities ({}) must be equal multiples of d = {dim}",
                q.len(),
                v.len()
            )));
        }
        Ok(Self { t, dim, q, v })
    }

    /// Builds a state from per-body rows.
    pub fn from_rows(t: f64, q: &[Vec<f64>], v: &[Vec<f64>]) -> Result<Self> {
        let dim = q.first().map(Vec::len).unwrap_or(0);
        if q.len() != v.len() || q.iter().chain(v).any(|row| row.len() != dim) {
            return Err(Error::InvalidInput("ragged position/velocity rows".into()));
        }
        Self::new(t, dim, q.concat(), v.concat())
    }

    pub fn n(&self) -> usize {
        self.q.len() / self.dim.max(1)
    }

    pub fn position(&self, k: usize) -> &[f64] {
        &self.q[k * self.dim..(k + 1) * self.dim]
    }

    pub fn velocity(&self, k: usize) -> &[f64] {
        &self.v[k * self.dim..(k + 1) * self.dim]
    }

    pub fn rows(buf: &[f64], dim: usize) -> Vec<Vec<f64>> {
        buf.chunks_exact(dim).map(<[f64]>::to_vec).collect()
    }
}

/// `(j, k, r_jk)` for every pair `j < k`.
pub fn pairwise_distances(state: &PhaseState) -> Vec<(usize, usize, f64)> {
    let n = state.n();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        for k in j + 1..n {
            let r2: f64 = state
                .position(j)
                .iter()
                .zip(state.position(k))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            out.push((j, k, r2.sqrt()));
        }
    }
    out
}

/// Invariant and constraint quantities at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSample {
    pub t: f64,
    pub inertia: f64,
    pub energy: f64,
    pub c1_sum: f64,
    pub c2_sum: f64,
    pub iddot: f64,
    pub momentum: Vec<f64>,
    pub angular_momentum: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
}

/// Bodies plus a force law: everything needed to evaluate the right-hand side.
#[derive(Debug, Clone)]
pub struct System {
    pub bodies: Bodies,
    pub law: ForceLaw,
    pub collision_guard: f64,
}

impl System {
    pub fn new(bodies: Bodies, law: ForceLaw) -> Self {
        Self {
            bodies,
            law,
            collision_guard: DEFAULT_COLLISION_GUARD,
        }
    }

    pub fn with_collision_guard(mut self, guard: f64) -> Self {
        self.collision_guard = guard;
        self
    }

    pub fn n(&self) -> usize {
        self.bodies.n()
    }

    pub fn dim(&self) -> usize {
        self.bodies.dim()
    }

    fn guard_pair(&self, j: usize, k: usize, r2: f64) -> Result<()> {
        let r = r2.sqrt();
        if r <= self.collision_guard || !r.is_finite() {
            return Err(Error::CollisionApproach {
                j: k.min(j),
                k: k.max(j),
                distance: r,
            });
        }
        Ok(())
    }

    /// Fails if any pair is at or inside the collision guard.
    pub fn check_separation(&self, q: &[f64]) -> Result<()> {
        let d = self.dim();
        let n = self.n();
        for k in 0..n {
            for j in k + 1..n {
                let r2: f64 = (0..d).map(|a| (q[j * d + a] - q[k * d + a]).powi(2)).sum();
                self.guard_pair(j, k, r2)?;
            }
        }
        Ok(())
    }

    /// Writes `a_k = sum_{j != k} m_j (q_j - q_k) f(|q_j - q_k|^2)` into `acc`.
    ///
    /// Each pair kernel is evaluated once and applied to both bodies with
    /// opposite sign.
    pub fn accelerations_into(&self, q: &[f64], acc: &mut [f64]) -> Result<()> {
        let d = self.dim();
        let n = self.n();
        let m = self.bodies.masses();
        acc.iter_mut().for_each(|a| *a = 0.0);
        for k in 0..n {
            for j in k + 1..n {
                let mut r2 = 0.0;
                for a in 0..d {
                    let da = q[j * d + a] - q[k * d + a];
                    r2 += da * da;
                }
                self.guard_pair(j, k, r2)?;
                let fr = self.law.f(r2);
                for a in 0..d {
                    let w = (q[j * d + a] - q[k * d + a]) * fr;
                    acc[k * d + a] += m[j] * w;
                    acc[j * d + a] -= m[k] * w;
                }
            }
        }
        Ok(())
    }

    pub fn accelerations(&self, state: &PhaseState) -> Result<Vec<f64>> {
        let mut acc = vec![0.0; state.q.len()];
        self.accelerations_into(&state.q, &mut acc)?;
        Ok(acc)
    }

    /// `V = (1/4) sum_{j != k} m_j m_k F(r_jk^2)`.
    pub fn potential_energy(&self, state: &PhaseState) -> Result<f64> {
        self.pair_sum(state, |law, r2| law.antiderivative(r2)).map(|s| 0.5 * s)
    }

    /// Kinetic plus pair potential; a first integral for every law.
    pub fn total_energy(&self, state: &PhaseState) -> Result<f64> {
        Ok(self.bodies.kinetic_energy(state) + self.potential_energy(state)?)
    }

    /// `sum_{j != k} m_j m_k G(r_jk^2)`.
    pub fn c2_sum(&self, state: &PhaseState) -> Result<f64> {
        self.pair_sum(state, |law, r2| law.g(r2)).map(|s| 2.0 * s)
    }

    /// Second time derivative of `I`:
    /// `2 sum m |v|^2 - sum_{j != k} m_j m_k r^2 f(r^2)`.
    pub fn lagrange_jacobi_rhs(&self, state: &PhaseState) -> Result<f64> {
        let virial = self.pair_sum(state, |law, r2| r2 * law.f(r2))?;
        Ok(4.0 * self.bodies.kinetic_energy(state) - 2.0 * virial)
    }

    pub fn moment_of_inertia(&self, state: &PhaseState) -> f64 {
        self.bodies.moment_of_inertia(state)
    }

    pub fn c1_sum(&self, state: &PhaseState) -> f64 {
        self.bodies.c1_sum(state)
    }

    pub fn reduce_to_barycenter(&self, state: &PhaseState) -> PhaseState {
        self.bodies.reduce_to_barycenter(state)
    }

    /// Full invariant record; fails on collision.
    pub fn sample(&self, state: &PhaseState) -> Result<InvariantSample> {
        let (r_min, r_max) = pairwise_distances(state)
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, _, r)| (lo.min(r), hi.max(r)));
        let b = &self.bodies;
        Ok(InvariantSample {
            t: state.t,
            inertia: b.moment_of_inertia(state),
            energy: self.total_energy(state)?,
            c1_sum: b.c1_sum(state),
            c2_sum: self.c2_sum(state)?,
            iddot: self.lagrange_jacobi_rhs(state)?,
            momentum: b.momentum(state),
            angular_momentum: b.angular_momentum(state),
            r_min,
            r_max,
        })
    }

    /// `sum_{j < k} m_j m_k kernel(r_jk^2)`, collision-guarded.
    fn pair_sum(&self, state: &PhaseState, kernel: impl Fn(&ForceLaw, f64) -> f64) -> Result<f64> {
        let m = self.bodies.masses();
        let mut s = 0.0;
        let mut err = None;
        self.bodies.for_each_pair(state, |j, k, r2, _| {
            if err.is_some() {
                return;
            }
            match self.guard_pair(j, k, r2) {
                Ok(()) => s += m[j] * m[k] * kernel(&self.law, r2),
                Err(e) => err = Some(e),
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(s),
        }
    }
}

/// Sampled states with their invariant series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub bodies: Bodies,
    pub states: Vec<PhaseState>,
    pub samples: Vec<InvariantSample>,
    pub accepted_steps: usize,
}

impl Trajectory {
    /// Recomputes the invariant series from `states`.
    pub fn from_states(system: &System, states: Vec<PhaseState>, accepted_steps: usize) -> Result<Self> {
        let samples = states.iter().map(|s| system.sample(s)).collect::<Result<_>>()?;
        Ok(Self {
            bodies: system.bodies.clone(),
            states,
            samples,
            accepted_steps,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &PhaseState {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}
