//! Time integration of the equations of motion.
//!
//! Three methods are provided: classical fixed-step RK4, the Dormand–Prince
//! 5(4) embedded pair with an elementary step controller, and kick–drift–kick
//! leapfrog. Invariant samples are taken at accepted steps only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbody::{PhaseState, System, Trajectory};

pub const DEFAULT_TOL: f64 = 1e-12;

const SAFETY: f64 = 0.9;
const FACTOR_MIN: f64 = 0.2;
const FACTOR_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "rk4")]
    Rk4Fixed,
    #[serde(rename = "adaptive")]
    AdaptiveEmbedded,
    #[serde(rename = "leapfrog")]
    Leapfrog,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Method::Rk4Fixed),
            "adaptive" => Ok(Method::AdaptiveEmbedded),
            "leapfrog" => Ok(Method::Leapfrog),
            _ => Err(Error::InvalidInput(format!("unknown integrator `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Step bound for the fixed-step methods. Steps are uniform and the count
    /// is the smallest that keeps them at or below `h`, so `t_end` is hit exactly.
    pub h: Option<f64>,
    /// Integration span measured from the initial state's time.
    pub t_end: f64,
    pub max_steps: usize,
    pub sample_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::AdaptiveEmbedded,
            rel_tol: DEFAULT_TOL,
            abs_tol: DEFAULT_TOL,
            h: None,
            t_end: 10.0,
            max_steps: 10_000_000,
            sample_every: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn adaptive(t_end: f64, tol: f64) -> Self {
        Self {
            rel_tol: tol,
            abs_tol: tol,
            t_end,
            ..Self::default()
        }
    }

    pub fn fixed(method: Method, h: f64, t_end: f64) -> Self {
        Self {
            method,
            h: Some(h),
            t_end,
            ..Self::default()
        }
    }

    pub fn with_sample_every(mut self, k: usize) -> Self {
        self.sample_every = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be finite and non-negative, got {}", self.t_end));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be at least 1".into());
        }
        if self.sample_every == 0 {
            return bad("sample_every must be at least 1".into());
        }
        match self.method {
            Method::AdaptiveEmbedded => {
                for (name, tol) in [("rtol", self.rel_tol), ("atol", self.abs_tol)] {
                    if !(1e-14..=1e-2).contains(&tol) {
                        return bad(format!("{name} = {tol} outside [1e-14, 1e-2]"));
                    }
                }
            }
            Method::Rk4Fixed | Method::Leapfrog => match self.h {
                Some(h) if h > 0.0 && h.is_finite() => {}
                Some(h) => return bad(format!("step h must be positive, got {h}")),
                None => return bad("fixed-step methods need a step h".into()),
            },
        }
        Ok(())
    }
}

/// Integrates from `state0` for `cfg.t_end` time units.
pub fn integrate(system: &System, state0: &PhaseState, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    system.bodies.validate(state0)?;
    system.check_separation(&state0.q)?;

    let mut rec = Recorder::new(system, state0, cfg.sample_every)?;
    if cfg.t_end > 0.0 {
        match cfg.method {
            Method::AdaptiveEmbedded => run_adaptive(system, state0, cfg, &mut rec)?,
            Method::Rk4Fixed => run_rk4(system, state0, cfg, &mut rec)?,
            Method::Leapfrog => run_leapfrog(system, state0, cfg, &mut rec)?,
        }
    }
    rec.finish(system)
}

struct Recorder {
    dim: usize,
    every: usize,
    steps: usize,
    states: Vec<PhaseState>,
    pending: Option<PhaseState>,
}

impl Recorder {
    fn new(system: &System, state0: &PhaseState, every: usize) -> Result<Self> {
        Ok(Self {
            dim: system.dim(),
            every,
            steps: 0,
            states: vec![state0.clone()],
            pending: None,
        })
    }

    fn accept(&mut self, t: f64, y: &[f64]) {
        self.steps += 1;
        let nd = y.len() / 2;
        let st = PhaseState {
            t,
            dim: self.dim,
            q: y[..nd].to_vec(),
            v: y[nd..].to_vec(),
        };
        if self.steps % self.every == 0 {
            self.states.push(st);
            self.pending = None;
        } else {
            self.pending = Some(st);
        }
    }

    fn finish(mut self, system: &System) -> Result<Trajectory> {
        if let Some(st) = self.pending.take() {
            self.states.push(st);
        }
        Trajectory::from_states(system, self.states, self.steps)
    }
}

fn pack(state: &PhaseState) -> Vec<f64> {
    let mut y = state.q.clone();
    y.extend_from_slice(&state.v);
    y
}

fn rhs(system: &System, y: &[f64], dy: &mut [f64]) -> Result<()> {
    let nd = y.len() / 2;
    dy[..nd].copy_from_slice(&y[nd..]);
    system.accelerations_into(&y[..nd], &mut dy[nd..])
}

fn uniform_steps(t_end: f64, h: f64) -> (usize, f64) {
    let n = ((t_end / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (n, t_end / n as f64)
}

fn run_rk4(system: &System, state0: &PhaseState, cfg: &IntegratorConfig, rec: &mut Recorder) -> Result<()> {
    let (n, h) = uniform_steps(cfg.t_end, cfg.h.expect("validated"));
    if n > cfg.max_steps {
        return Err(Error::MaxStepsExceeded(cfg.max_steps));
    }
    let mut y = pack(state0);
    let len = y.len();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for i in 1..=n {
        rhs(system, &y, &mut k1)?;
        axpy(&mut tmp, &y, 0.5 * h, &k1);
        rhs(system, &tmp, &mut k2)?;
        axpy(&mut tmp, &y, 0.5 * h, &k2);
        rhs(system, &tmp, &mut k3)?;
        axpy(&mut tmp, &y, h, &k3);
        rhs(system, &tmp, &mut k4)?;
        for j in 0..len {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        rec.accept(state0.t + i as f64 * h, &y);
    }
    system.check_separation(&y[..len / 2])
}

fn run_leapfrog(system: &System, state0: &PhaseState, cfg: &IntegratorConfig, rec: &mut Recorder) -> Result<()> {
    let (n, h) = uniform_steps(cfg.t_end, cfg.h.expect("validated"));
    if n > cfg.max_steps {
        return Err(Error::MaxStepsExceeded(cfg.max_steps));
    }
    let mut q = state0.q.clone();
    let mut v = state0.v.clone();
    let mut a = vec![0.0; q.len()];
    system.accelerations_into(&q, &mut a)?;
    let mut y = vec![0.0; 2 * q.len()];
    for i in 1..=n {
        for j in 0..q.len() {
            v[j] += 0.5 * h * a[j];
            q[j] += h * v[j];
        }
        system.accelerations_into(&q, &mut a)?;
        for j in 0..q.len() {
            v[j] += 0.5 * h * a[j];
        }
        y[..q.len()].copy_from_slice(&q);
        y[q.len()..].copy_from_slice(&v);
        rec.accept(state0.t + i as f64 * h, &y);
    }
    Ok(())
}

// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes are unused.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn error_norm(y0: &[f64], y1: &[f64], err: &[f64], cfg: &IntegratorConfig) -> f64 {
    let s: f64 = y0
        .iter()
        .zip(y1)
        .zip(err)
        .map(|((a, b), e)| {
            let sc = cfg.abs_tol + cfg.rel_tol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (s / y0.len() as f64).sqrt()
}

fn initial_step(system: &System, y: &[f64], f0: &[f64], cfg: &IntegratorConfig) -> Result<f64> {
    let scale = |v: &[f64]| {
        let s: f64 = v
            .iter()
            .zip(y)
            .map(|(x, yi)| (x / (cfg.abs_tol + cfg.rel_tol * yi.abs())).powi(2))
            .sum();
        (s / y.len() as f64).sqrt()
    };
    let d0 = scale(y);
    let d1 = scale(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(cfg.t_end);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; y.len()];
    rhs(system, &y1, &mut f1)?;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = scale(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(cfg.t_end))
}

fn run_adaptive(system: &System, state0: &PhaseState, cfg: &IntegratorConfig, rec: &mut Recorder) -> Result<()> {
    let t0 = state0.t;
    let t_final = t0 + cfg.t_end;
    let h_min = 1e-14 * cfg.t_end;
    let mut y = pack(state0);
    let len = y.len();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; len]; 7];
    let mut stage = vec![0.0; len];
    let mut y_new = vec![0.0; len];
    let mut err = vec![0.0; len];
    // compensated summation of the increments keeps round-off from seeding
    // instabilities of symmetric configurations
    let mut comp = vec![0.0; len];
    let mut comp_new = vec![0.0; len];

    rhs(system, &y, &mut k[0])?;
    let mut h = initial_step(system, &y, &k[0], cfg)?;
    let mut t = t0;
    let mut accepted = 0usize;
    let mut rejected_last = false;

    while t < t_final {
        if accepted >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(cfg.max_steps));
        }
        let last = t + h >= t_final;
        let h_step = if last { t_final - t } else { h };
        if h_step < h_min && !last {
            return Err(Error::StepUnderflow { t, h: h_step });
        }

        let mut stage_result = Ok(());
        for s in 1..7 {
            for j in 0..len {
                let mut acc = 0.0;
                for (i, ki) in k.iter().enumerate().take(s) {
                    acc += A[s][i] * ki[j];
                }
                stage[j] = y[j] + h_step * acc;
            }
            if let Err(e) = rhs(system, &stage, &mut k[s]) {
                stage_result = Err(e);
                break;
            }
        }
        // a stage that lands inside the collision guard is treated as a
        // rejected step unless the step is already minimal
        if let Err(e) = stage_result {
            if h_step * 0.25 < h_min {
                return Err(e);
            }
            h = h_step * 0.25;
            rejected_last = true;
            continue;
        }
        for j in 0..len {
            let mut inc = 0.0;
            for (i, ki) in k.iter().enumerate().take(6) {
                inc += A[6][i] * ki[j];
            }
            let dx = h_step * inc + comp[j];
            y_new[j] = y[j] + dx;
            comp_new[j] = dx - (y_new[j] - y[j]);
        }
        for j in 0..len {
            let mut acc = 0.0;
            for (i, ki) in k.iter().enumerate() {
                acc += E[i] * ki[j];
            }
            err[j] = h_step * acc;
        }
        let en = error_norm(&y, &y_new, &err, cfg);
        let factor = if en == 0.0 {
            FACTOR_MAX
        } else {
            (SAFETY * en.powf(-0.2)).clamp(FACTOR_MIN, FACTOR_MAX)
        };

        if en <= 1.0 {
            t = if last { t_final } else { t + h_step };
            y.copy_from_slice(&y_new);
            comp.copy_from_slice(&comp_new);
            accepted += 1;
            rec.accept(t, &y);
            // FSAL: the last stage is the derivative at the new point
            let (first, rest) = k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            let grow = if rejected_last { factor.min(1.0) } else { factor };
            if !last {
                h = h_step * grow;
            }
            rejected_last = false;
        } else {
            h = h_step * factor.min(1.0);
            rejected_last = true;
            if h < h_min {
                return Err(Error::StepUnderflow { t, h });
            }
        }
    }
    Ok(())
}

fn axpy(out: &mut [f64], y: &[f64], a: f64, x: &[f64]) {
    for ((o, yi), xi) in out.iter_mut().zip(y).zip(x) {
        *o = yi + a * xi;
    }
}

/// Result of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OrderEstimate {
    Measured { order: f64, errors: Vec<(f64, f64)> },
    /// All errors sit at the rounding floor; no slope can be fitted.
    NotApplicable { errors: Vec<(f64, f64)> },
}

impl OrderEstimate {
    pub fn order(&self) -> Option<f64> {
        match self {
            OrderEstimate::Measured { order, .. } => Some(*order),
            OrderEstimate::NotApplicable { .. } => None,
        }
    }
}

/// Errors below this are considered rounding noise against the reference.
pub const ORDER_NOISE_FLOOR: f64 = 1e-10;

/// Fits the slope of `log(error)` against `log(h)` at `t_end`, with the error
/// measured in max-norm over the phase vector against an adaptive run at
/// tolerance `1e-13`.
pub fn convergence_order(
    system: &System,
    state0: &PhaseState,
    method: Method,
    t_end: f64,
    h_list: &[f64],
) -> Result<OrderEstimate> {
    if h_list.len() < 4 {
        return Err(Error::InvalidInput("convergence study needs at least four steps".into()));
    }
    for w in h_list.windows(2) {
        let r = w[0] / w[1];
        if (r - 2.0).abs() > 1e-9 && (r - 0.5).abs() > 1e-9 {
            return Err(Error::InvalidInput("step list must be geometric with ratio 2".into()));
        }
    }
    if !(t_end > 0.0) {
        return Err(Error::InvalidInput("t_end must be positive".into()));
    }
    let reference = integrate(system, state0, &IntegratorConfig::adaptive(t_end, 1e-13))?;
    let y_ref = pack(reference.last());

    let mut errors = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let cfg = IntegratorConfig::fixed(method, h, t_end).with_sample_every(usize::MAX);
        let traj = integrate(system, state0, &cfg)?;
        let y = pack(traj.last());
        let e = y.iter().zip(&y_ref).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        errors.push((h, e));
    }
    if errors.iter().all(|&(_, e)| e < ORDER_NOISE_FLOOR) {
        return Ok(OrderEstimate::NotApplicable { errors });
    }
    let pts: Vec<(f64, f64)> = errors
        .iter()
        .map(|&(h, e)| (h.ln(), e.max(f64::MIN_POSITIVE).ln()))
        .collect();
    Ok(OrderEstimate::Measured {
        order: least_squares_slope(&pts),
        errors,
    })
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Reverses velocities and time origin so that integrating the result
/// retraces the trajectory.
pub fn time_reversed(state: &PhaseState) -> PhaseState {
    PhaseState {
        t: 0.0,
        dim: state.dim,
        q: state.q.clone(),
        v: state.v.iter().map(|v| -v).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{circular_two_body, circular_two_body_period};
    use crate::forcelaw::ForceLaw;
    use crate::nbody::Bodies;

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn circular_orbit_closes_after_one_period() {
        let (sys, st) = circular_two_body(ForceLaw::newtonian());
        let period = circular_two_body_period(&sys.law);
        assert!((period - std::f64::consts::PI * 2f64.sqrt()).abs() < 1e-15);
        let traj = integrate(&sys, &st, &IntegratorConfig::adaptive(period, 1e-12)).unwrap();
        assert!(max_diff(&traj.last().q, &st.q) < 1e-8);
        assert!((traj.last().t - period).abs() < 1e-14);
    }

    #[test]
    fn zero_span_yields_initial_sample() {
        let (sys, st) = circular_two_body(ForceLaw::newtonian());
        for method in [Method::AdaptiveEmbedded, Method::Rk4Fixed, Method::Leapfrog] {
            let cfg = IntegratorConfig {
                method,
                h: Some(0.1),
                t_end: 0.0,
                ..Default::default()
            };
            let traj = integrate(&sys, &st, &cfg).unwrap();
            assert_eq!(traj.len(), 1);
            assert_eq!(traj.samples.len(), 1);
            assert_eq!(traj.states[0], st);
            assert_eq!(traj.accepted_steps, 0);
        }
    }

    #[test]
    fn sample_count_matches_stride() {
        let (sys, st) = circular_two_body(ForceLaw::newtonian());
        for k in [1usize, 3, 7, 100] {
            let cfg = IntegratorConfig::fixed(Method::Rk4Fixed, 0.01, 1.0).with_sample_every(k);
            let traj = integrate(&sys, &st, &cfg).unwrap();
            assert_eq!(traj.accepted_steps, 100);
            assert_eq!(traj.len(), traj.accepted_steps.div_ceil(k) + 1, "k={k}");
            let cfg = IntegratorConfig::adaptive(3.0, 1e-10).with_sample_every(k);
            let traj = integrate(&sys, &st, &cfg).unwrap();
            assert_eq!(traj.len(), traj.accepted_steps.div_ceil(k) + 1, "adaptive k={k}");
        }
    }

    #[test]
    fn rk4_and_leapfrog_orders() {
        let (sys, st) = circular_two_body(ForceLaw::newtonian());
        let period = circular_two_body_period(&sys.law);
        let hs: Vec<f64> = (5..9).map(|p| period / f64::from(1u32 << p)).collect();
        let rk4 = convergence_order(&sys, &st, Method::Rk4Fixed, period, &hs).unwrap();
        let o = rk4.order().unwrap();
        assert!((3.7..=4.3).contains(&o), "rk4 order {o}: {rk4:?}");
        let hs: Vec<f64> = (6..10).map(|p| period / f64::from(1u32 << p)).collect();
        let lf = convergence_order(&sys, &st, Method::Leapfrog, period, &hs).unwrap();
        let o = lf.order().unwrap();
        assert!((1.7..=2.3).contains(&o), "leapfrog order {o}: {lf:?}");
    }

    #[test]
    fn order_on_equilibrium_is_not_applicable() {
        // two bodies at rest under zero force never move
        let law = ForceLaw::custom("null", |_| 0.0, |_| 0.0);
        let sys = System::new(Bodies::equal(2, 2).unwrap(), law);
        let st = PhaseState::new(0.0, 2, vec![-0.5, 0.0, 0.5, 0.0], vec![0.0; 4]).unwrap();
        let hs = [0.4, 0.2, 0.1, 0.05];
        let est = convergence_order(&sys, &st, Method::Rk4Fixed, 2.0, &hs).unwrap();
        assert!(matches!(est, OrderEstimate::NotApplicable { .. }), "{est:?}");
    }

    #[test]
    fn convergence_study_rejects_bad_step_lists() {
        let (sys, st) = circular_two_body(ForceLaw::newtonian());
        assert!(convergence_order(&sys, &st, Method::Rk4Fixed, 1.0, &[0.1, 0.05, 0.025]).is_err());
        assert!(convergence_order(&sys, &st, Method::Rk4Fixed, 1.0, &[0.1, 0.03, 0.01, 0.003]).is_err());
    }

    #[test]
    fn time_reversal_round_trip() {
        let (sys, st) = circular_two_body(ForceLaw::newtonian());
        let mut st = st;
        st.v[1] *= 1.2; // eccentric
        st.v[3] *= 1.2;
        let cfg = IntegratorConfig::adaptive(7.0, 1e-12);
        let fwd = integrate(&sys, &st, &cfg).unwrap();
        let back = integrate(&sys, &time_reversed(fwd.last()), &cfg).unwrap();
        assert!(max_diff(&back.last().q, &st.q) < 1e-7);
        let v: Vec<f64> = back.last().v.iter().map(|x| -x).collect();
        assert!(max_diff(&v, &st.v) < 1e-7);
    }

    #[test]
    fn leapfrog_energy_error_stays_bounded() {
        let (sys, st) = circular_two_body(ForceLaw::newtonian());
        let mut st = st;
        st.v[1] *= 1.1;
        st.v[3] *= 1.1;
        let traj = integrate(&sys, &st, &IntegratorConfig::fixed(Method::Leapfrog, 0.01, 100.0)).unwrap();
        assert_eq!(traj.accepted_steps, 10_000);
        let e0 = traj.samples[0].energy;
        let drift: Vec<f64> = traj.samples.iter().map(|s| (s.energy - e0).abs()).collect();
        let early = drift[..1000].iter().copied().fold(0.0, f64::max);
        let overall = drift.iter().copied().fold(0.0, f64::max);
        assert!(early > 0.0);
        assert!(overall < 10.0 * early, "early {early:e} overall {overall:e}");
    }

    #[test]
    fn collision_is_reported() {
        let sys = System::new(Bodies::equal(2, 1).unwrap(), ForceLaw::newtonian());
        let st = PhaseState::new(0.0, 1, vec![-0.5, 0.5], vec![0.0, 0.0]).unwrap();
        // radial infall collides at t = pi/4 (Kepler); fixed steps may jump
        // across the singularity, the adaptive controller cannot
        let err = integrate(&sys, &st, &IntegratorConfig::adaptive(2.0, 1e-10)).unwrap_err();
        assert!(err.is_integration_failure(), "{err:?}");
    }

    #[test]
    fn initial_overlap_is_rejected() {
        let sys = System::new(Bodies::equal(2, 2).unwrap(), ForceLaw::newtonian());
        let st = PhaseState::new(0.0, 2, vec![0.0, 0.0, 0.0, 1e-11], vec![0.0; 4]).unwrap();
        for cfg in [IntegratorConfig::fixed(Method::Rk4Fixed, 1e-3, 1.0), IntegratorConfig::adaptive(1.0, 1e-10)] {
            assert!(matches!(integrate(&sys, &st, &cfg), Err(Error::CollisionApproach { j: 0, k: 1, .. })));
        }
    }

    #[test]
    fn max_steps_is_enforced() {
        let (sys, st) = circular_two_body(ForceLaw::newtonian());
        let cfg = IntegratorConfig {
            max_steps: 5,
            ..IntegratorConfig::adaptive(10.0, 1e-12)
        };
        assert_eq!(integrate(&sys, &st, &cfg).unwrap_err(), Error::MaxStepsExceeded(5));
        let cfg = IntegratorConfig {
            max_steps: 5,
            ..IntegratorConfig::fixed(Method::Leapfrog, 0.1, 10.0)
        };
        assert_eq!(integrate(&sys, &st, &cfg).unwrap_err(), Error::MaxStepsExceeded(5));
    }

    #[test]
    fn config_validation() {
        let mut cfg = IntegratorConfig::adaptive(1.0, 1e-15);
        assert!(cfg.validate().is_err());
        cfg.rel_tol = 1e-8;
        cfg.abs_tol = 1e-8;
        assert!(cfg.validate().is_ok());
        cfg.method = Method::Rk4Fixed;
        assert!(cfg.validate().is_err());
        cfg.h = Some(-1.0);
        assert!(cfg.validate().is_err());
        cfg.h = Some(0.1);
        cfg.sample_every = 0;
        assert!(cfg.validate().is_err());
        assert_eq!("leapfrog".parse::<Method>().unwrap(), Method::Leapfrog);
        assert!("euler".parse::<Method>().is_err());
    }
}
