//! Numerical probe of the two-sum constancy obstruction.
//!
//! Take `N` trigonometric polynomials `D_j(z) = c_j + sum_k (a_jk cos kz + b_jk sin kz)`,
//! which are entire, bounded on the real line and (under the margin constraint)
//! positive there. The probe minimizes the grid variance of `S1 = sum_j D_j`
//! plus that of `S2 = sum_j F_j(D_j)` over families with a fixed amount of
//! non-constancy. When every `F_j` blows up at `0+` the minimum stays away from
//! zero; with `F_j == 0` the cancelling pair `c + sin z`, `c - sin z` reaches it.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID_SIZE: usize = 256;
pub const MIN_GRID_SIZE: usize = 64;
pub const DEFAULT_MARGIN: f64 = 0.05;
/// Mean offset of the family; fixes the value of `S1`.
pub const DEFAULT_OFFSET_MEAN: f64 = 1.0;

const MAX_ITERATIONS: usize = 1000;
const MAX_HALVINGS: usize = 40;
const FD_STEP: f64 = 1e-6;

/// The functions `F_j` applied to each `D_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProbeLaw {
    /// `F(x) = x^(-exponent)`.
    Power { exponent: f64 },
    /// `F == 0`: violates the blow-up hypothesis; used as a control.
    Zero,
}

impl ProbeLaw {
    /// `F(x) = x^(-1/2)`, the magnitude of `G` for the Newtonian force.
    pub fn newtonian() -> Self {
        ProbeLaw::Power { exponent: 0.5 }
    }

    /// `|G|` of the power-law force with exponent `alpha`, up to its constant:
    /// `F(x) = x^(1 - alpha/2)`.
    pub fn from_force_alpha(alpha: f64) -> Self {
        ProbeLaw::Power {
            exponent: 0.5 * alpha - 1.0,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ProbeLaw::Power { exponent } if exponent == 0.5 => x.sqrt().recip(),
            ProbeLaw::Power { exponent } => x.powf(-exponent),
            ProbeLaw::Zero => 0.0,
        }
    }

    pub fn is_control(&self) -> bool {
        matches!(self, ProbeLaw::Zero)
    }

    /// Positivity on a log grid and growth without bound towards `0+`,
    /// checked along `x = 10^-3, 10^-6, ..., 10^-300`.
    pub fn audit(&self) -> Result<()> {
        if self.is_control() {
            return Ok(());
        }
        let name = format!("{self:?}");
        let grid = crate::forcelaw::log_grid(1e-6, 1e6, 49);
        if grid.iter().any(|&x| !(self.eval(x) > 0.0 && self.eval(x).is_finite())) {
            return Err(Error::InvalidLawFamily(name));
        }
        let mut probe: Vec<f64> = Vec::new();
        for i in 1..=100 {
            let v = self.eval(10f64.powi(-3 * i));
            probe.push(v);
            if v.is_infinite() {
                break;
            }
        }
        let grows = probe.windows(2).all(|w| w[1] > w[0]);
        if !grows || !(*probe.last().unwrap() >= 100.0 * self.eval(1.0)) {
            return Err(Error::InvalidLawFamily(name));
        }
        Ok(())
    }
}

impl std::str::FromStr for ProbeLaw {
    type Err = Error;

    /// `newtonian`, `zero`, or `power:ALPHA` (force exponent; `F = |G|`).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "newtonian" => Ok(ProbeLaw::newtonian()),
            "zero" => Ok(ProbeLaw::Zero),
            _ => {
                let alpha = s
                    .strip_prefix("power:")
                    .and_then(|a| a.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("unrecognised probe law `{s}`")))?;
                Ok(ProbeLaw::from_force_alpha(alpha))
            }
        }
    }
}

/// Trigonometric-polynomial family, coefficients stored row-major `[j][k-1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigFamily {
    pub n_funcs: usize,
    pub degree: usize,
    pub offsets: Vec<f64>,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    pub margin: f64,
}

impl TrigFamily {
    pub fn constant(offsets: Vec<f64>, degree: usize, margin: f64) -> Self {
        let n = offsets.len();
        Self {
            n_funcs: n,
            degree,
            offsets,
            cos: vec![0.0; n * degree],
            sin: vec![0.0; n * degree],
            margin,
        }
    }

    /// `sum_jk a_jk^2 + b_jk^2`.
    pub fn nonconstancy(&self) -> f64 {
        self.cos.iter().chain(&self.sin).map(|x| x * x).sum()
    }

    /// `c_j - sum_k (|a_jk| + |b_jk|)`; a lower bound of `D_j` on the real line.
    pub fn floor(&self, j: usize) -> f64 {
        let k = self.degree;
        let spread: f64 = self.cos[j * k..(j + 1) * k]
            .iter()
            .chain(&self.sin[j * k..(j + 1) * k])
            .map(|x| x.abs())
            .sum();
        self.offsets[j] - spread
    }

    pub fn satisfies_margin(&self) -> bool {
        (0..self.n_funcs).all(|j| self.floor(j) >= self.margin * (1.0 - 1e-12))
    }

    pub fn eval(&self, j: usize, z: f64) -> f64 {
        let k = self.degree;
        let mut s = self.offsets[j];
        for h in 1..=k {
            let (sn, cs) = (h as f64 * z).sin_cos();
            s += self.cos[j * k + h - 1] * cs + self.sin[j * k + h - 1] * sn;
        }
        s
    }

    /// Two-function family `c + amp sin z`, `c - amp sin z`, padded with
    /// constants `c` up to `n_funcs`.
    pub fn cancelling_pair(n_funcs: usize, degree: usize, c: f64, amp: f64, margin: f64) -> Self {
        assert!(n_funcs >= 2 && degree >= 1);
        let mut fam = Self::constant(vec![c; n_funcs], degree, margin);
        fam.sin[0] = amp;
        fam.sin[degree] = -amp;
        fam
    }

    fn to_params(&self) -> Vec<f64> {
        let mut p = self.offsets.clone();
        p.extend_from_slice(&self.cos);
        p.extend_from_slice(&self.sin);
        p
    }

    fn from_params(&self, p: &[f64]) -> Self {
        let n = self.n_funcs;
        let nk = n * self.degree;
        Self {
            offsets: p[..n].to_vec(),
            cos: p[n..n + nk].to_vec(),
            sin: p[n + nk..].to_vec(),
            ..self.clone()
        }
    }
}

/// `n` uniform points on `[0, 2 pi)`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

fn variance(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64
}

fn law_for<'a>(laws: &'a [ProbeLaw], j: usize) -> &'a ProbeLaw {
    if laws.len() == 1 {
        &laws[0]
    } else {
        &laws[j]
    }
}

/// `Var(S1) + Var(S2)` over `grid`.
///
/// `laws` holds either one law shared by every `D_j` or one per function.
pub fn residual(fam: &TrigFamily, laws: &[ProbeLaw], grid: &[f64]) -> Result<f64> {
    if grid.len() < MIN_GRID_SIZE {
        return Err(Error::InvalidInput(format!(
            "probe grid needs at least {MIN_GRID_SIZE} points, got {}",
            grid.len()
        )));
    }
    if laws.len() != 1 && laws.len() != fam.n_funcs {
        return Err(Error::InvalidInput("need one law or one per function".into()));
    }
    residual_on(fam, laws, &Harmonics::new(grid, fam.degree))
}

/// `cos hz`, `sin hz` for every grid point and harmonic, row-major `[i][h-1]`.
struct Harmonics {
    z: Vec<f64>,
    degree: usize,
    cs: Vec<(f64, f64)>,
}

impl Harmonics {
    fn new(grid: &[f64], degree: usize) -> Self {
        let cs = grid
            .iter()
            .flat_map(|&z| (1..=degree).map(move |h| {
                let (s, c) = (h as f64 * z).sin_cos();
                (c, s)
            }))
            .collect();
        Self {
            z: grid.to_vec(),
            degree,
            cs,
        }
    }
}

fn residual_on(fam: &TrigFamily, laws: &[ProbeLaw], table: &Harmonics) -> Result<f64> {
    let k = table.degree;
    let n = table.z.len();
    let mut s1 = vec![0.0; n];
    let mut s2 = vec![0.0; n];
    for i in 0..n {
        let row = &table.cs[i * k..(i + 1) * k];
        for j in 0..fam.n_funcs {
            let a = &fam.cos[j * k..(j + 1) * k];
            let b = &fam.sin[j * k..(j + 1) * k];
            let mut d = fam.offsets[j];
            for h in 0..k {
                d += a[h] * row[h].0 + b[h] * row[h].1;
            }
            if !(d > 0.0) || d < fam.margin * (1.0 - 1e-9) {
                return Err(Error::NonPositiveSample { z: table.z[i], value: d });
            }
            s1[i] += d;
            s2[i] += law_for(laws, j).eval(d);
        }
    }
    Ok(variance(&s1) + variance(&s2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub n_funcs: usize,
    pub degree: usize,
    pub rho: f64,
    pub restarts: usize,
    pub rng_seed: u64,
    pub margin: f64,
    pub offset_mean: f64,
    pub grid_size: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            n_funcs: 3,
            degree: 2,
            rho: 0.1,
            restarts: 50,
            rng_seed: 0,
            margin: DEFAULT_MARGIN,
            offset_mean: DEFAULT_OFFSET_MEAN,
            grid_size: DEFAULT_GRID_SIZE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub min_residual: f64,
    pub at_params: TrigFamily,
    pub nonconstancy: f64,
    pub restarts: usize,
    pub grid_size: usize,
    /// Best residual after each restart prefix; non-increasing.
    pub running_min: Vec<f64>,
}

/// Feasible-set projection: coefficients onto the sphere of squared radius
/// `rho`, offsets onto `{sum c = N mean, c_j >= floor_j + margin}`.
fn project(fam: &TrigFamily, cfg: &ProbeConfig) -> Option<TrigFamily> {
    let mut out = fam.clone();
    let norm2 = out.nonconstancy();
    if cfg.rho == 0.0 {
        out.cos.iter_mut().chain(out.sin.iter_mut()).for_each(|x| *x = 0.0);
    } else {
        if norm2 == 0.0 {
            return None;
        }
        let s = (cfg.rho / norm2).sqrt();
        out.cos.iter_mut().chain(out.sin.iter_mut()).for_each(|x| *x *= s);
    }
    let lower: Vec<f64> = (0..out.n_funcs)
        .map(|j| out.margin + (out.offsets[j] - out.floor(j)))
        .collect();
    let target = cfg.offset_mean * out.n_funcs as f64;
    if lower.iter().sum::<f64>() > target {
        return None;
    }
    // c_j = max(lower_j, y_j - tau), with tau chosen by bisection to hit target
    let y = out.offsets.clone();
    let total = |tau: f64| -> f64 { y.iter().zip(&lower).map(|(yj, lj)| (yj - tau).max(*lj)).sum() };
    let spread = y.iter().chain(&lower).fold(0.0f64, |m, v| m.max(v.abs())) + target;
    let (mut lo, mut hi) = (-2.0 * spread - 1.0, 2.0 * spread + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    for (c, (yj, lj)) in out.offsets.iter_mut().zip(y.iter().zip(&lower)) {
        *c = (yj - tau).max(*lj);
    }
    // remove bisection residue from the free offsets
    let excess = out.offsets.iter().sum::<f64>() - target;
    let free: Vec<usize> = (0..out.n_funcs).filter(|&j| out.offsets[j] > lower[j] + 1e-12).collect();
    if !free.is_empty() {
        let share = excess / free.len() as f64;
        for j in free {
            out.offsets[j] -= share;
        }
    }
    out.satisfies_margin().then_some(out)
}

fn descend(start: TrigFamily, laws: &[ProbeLaw], grid: &Harmonics, cfg: &ProbeConfig) -> Result<(f64, TrigFamily)> {
    let mut fam = start;
    let mut r = residual_on(&fam, laws, grid)?;
    if cfg.rho == 0.0 {
        return Ok((r, fam));
    }
    let mut step: f64 = 1.0;
    for _ in 0..MAX_ITERATIONS {
        if r == 0.0 {
            break;
        }
        let p = fam.to_params();
        let mut grad = vec![0.0; p.len()];
        let mut probe = p.clone();
        for i in 0..p.len() {
            probe[i] = p[i] + FD_STEP;
            let up = residual_on(&fam.from_params(&probe), laws, grid);
            probe[i] = p[i] - FD_STEP;
            let down = residual_on(&fam.from_params(&probe), laws, grid);
            probe[i] = p[i];
            grad[i] = match (up, down) {
                (Ok(u), Ok(d)) => (u - d) / (2.0 * FD_STEP),
                (Ok(u), Err(_)) => (u - r) / FD_STEP,
                (Err(_), Ok(d)) => (r - d) / FD_STEP,
                (Err(_), Err(_)) => 0.0,
            };
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm == 0.0 {
            break;
        }
        let mut eta = (2.0 * step).min(1e3);
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = p.iter().zip(&grad).map(|(x, g)| x - eta * g).collect();
            if let Some(cand) = project(&fam.from_params(&trial), cfg) {
                if let Ok(rc) = residual_on(&cand, laws, grid) {
                    if rc < r {
                        accepted = Some((rc, cand));
                        break;
                    }
                }
            }
            eta *= 0.5;
        }
        match accepted {
            Some((rc, cand)) => {
                let gain = (r - rc) / r;
                r = rc;
                fam = cand;
                step = eta;
                if gain < 1e-10 {
                    break;
                }
            }
            None => break,
        }
    }
    Ok((r, fam))
}

fn random_start(cfg: &ProbeConfig, restart: usize) -> Option<TrigFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(restart as u64);
    let offsets: Vec<f64> = (0..cfg.n_funcs)
        .map(|_| cfg.offset_mean * rng.random_range(0.5..1.5))
        .collect();
    let mut fam = TrigFamily::constant(offsets, cfg.degree, cfg.margin);
    for x in fam.cos.iter_mut().chain(fam.sin.iter_mut()) {
        *x = rng.random_range(-1.0..1.0);
    }
    project(&fam, cfg)
}

/// Multi-start projected descent. Restart 0 starts from the cancelling pair
/// (when `n_funcs >= 2`); restart `i > 0` draws from stream `i` of the seeded
/// generator, so results for a prefix of restarts do not depend on the total.
pub fn minimize(laws: &[ProbeLaw], cfg: &ProbeConfig) -> Result<ProbeResult> {
    if cfg.n_funcs == 0 || cfg.degree == 0 || cfg.restarts == 0 {
        return Err(Error::InvalidInput("need at least one function, harmonic and restart".into()));
    }
    if !(cfg.rho >= 0.0 && cfg.rho.is_finite()) || !(cfg.margin > 0.0) || !(cfg.offset_mean > cfg.margin) {
        return Err(Error::InvalidInput("rho must be non-negative and 0 < margin < offset mean".into()));
    }
    if cfg.grid_size < MIN_GRID_SIZE || cfg.degree >= cfg.grid_size / 2 {
        return Err(Error::InvalidInput("degree aliases on the probe grid".into()));
    }
    for law in laws {
        law.audit()?;
    }
    if laws.len() != 1 && laws.len() != cfg.n_funcs {
        return Err(Error::InvalidInput("need one law or one per function".into()));
    }
    let grid = Harmonics::new(&uniform_grid(cfg.grid_size), cfg.degree);

    let outcomes: Vec<Result<Option<(f64, TrigFamily)>>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let start = if i == 0 && cfg.n_funcs >= 2 {
                let amp = (0.5 * cfg.rho).sqrt();
                project(
                    &TrigFamily::cancelling_pair(cfg.n_funcs, cfg.degree, cfg.offset_mean, amp.max(1e-300), cfg.margin),
                    cfg,
                )
            } else {
                random_start(cfg, i)
            };
            match start {
                Some(s) => descend(s, laws, &grid, cfg).map(Some),
                None => Ok(None),
            }
        })
        .collect();

    let mut best: Option<(f64, TrigFamily)> = None;
    let mut running_min = Vec::with_capacity(cfg.restarts);
    for out in outcomes {
        if let Some((r, fam)) = out? {
            if best.as_ref().is_none_or(|b| r < b.0) {
                best = Some((r, fam));
            }
        }
        running_min.push(best.as_ref().map_or(f64::INFINITY, |b| b.0));
    }
    let (min_residual, at_params) = best.ok_or_else(|| {
        Error::InvalidInput(format!("nonconstancy {} is infeasible under the positivity margin", cfg.rho))
    })?;
    Ok(ProbeResult {
        min_residual,
        nonconstancy: at_params.nonconstancy(),
        at_params,
        restarts: cfg.restarts,
        grid_size: cfg.grid_size,
        running_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        uniform_grid(DEFAULT_GRID_SIZE)
    }

    #[test]
    fn constants_have_zero_residual() {
        let fam = TrigFamily::constant(vec![1.0, 0.7, 2.0], 2, 0.05);
        let r = residual(&fam, &[ProbeLaw::newtonian()], &grid()).unwrap();
        assert!(r < 1e-24, "{r}");
    }

    #[test]
    fn cancelling_pair_without_blowup() {
        let fam = TrigFamily::cancelling_pair(2, 1, 2.0, 1.0, 0.05);
        assert!(residual(&fam, &[ProbeLaw::Zero], &grid()).unwrap() < 1e-28);
    }

    #[test]
    fn cancelling_pair_with_blowup() {
        // S2 at z = 0 is 2 c^-1/2; at z = pi/2 it is (c+1)^-1/2 + (c-1)^-1/2
        let c: f64 = 2.0;
        let s2_0 = 2.0 / c.sqrt();
        let s2_half = 1.0 / (c + 1.0).sqrt() + 1.0 / (c - 1.0).sqrt();
        assert!((s2_half - s2_0).abs() > 0.1);
        let fam = TrigFamily::cancelling_pair(2, 1, c, 1.0, 0.05);
        let sum2 = |z: f64| (0..2).map(|j| ProbeLaw::newtonian().eval(fam.eval(j, z))).sum::<f64>();
        assert!((sum2(0.0) - s2_0).abs() < 1e-14);
        assert!((sum2(PI / 2.0) - s2_half).abs() < 1e-14);
        assert!(residual(&fam, &[ProbeLaw::newtonian()], &grid()).unwrap() > 1e-4);
    }

    #[test]
    fn residual_errors() {
        let fam = TrigFamily::cancelling_pair(2, 1, 0.5, 1.0, 0.05);
        assert!(matches!(
            residual(&fam, &[ProbeLaw::Zero], &grid()),
            Err(Error::NonPositiveSample { .. })
        ));
        let ok = TrigFamily::constant(vec![1.0; 2], 1, 0.05);
        assert!(residual(&ok, &[ProbeLaw::Zero], &uniform_grid(32)).is_err());
        assert!(residual(&ok, &[ProbeLaw::Zero; 3], &grid()).is_err());
    }

    #[test]
    fn permutation_and_phase_invariance() {
        let cfg = ProbeConfig::default();
        let fam = random_start(&cfg, 3).unwrap();
        let laws = [ProbeLaw::newtonian()];
        let base = residual(&fam, &laws, &grid()).unwrap();

        let mut perm = fam.clone();
        let k = fam.degree;
        for (dst, src) in [(0usize, 2usize), (1, 0), (2, 1)] {
            perm.offsets[dst] = fam.offsets[src];
            perm.cos[dst * k..(dst + 1) * k].copy_from_slice(&fam.cos[src * k..(src + 1) * k]);
            perm.sin[dst * k..(dst + 1) * k].copy_from_slice(&fam.sin[src * k..(src + 1) * k]);
        }
        assert!((residual(&perm, &laws, &grid()).unwrap() - base).abs() < 1e-14 * base.max(1e-300) + 1e-18);

        // shift by a grid multiple: z -> z + 2 pi * 5 / 256
        let phi = 2.0 * PI * 5.0 / DEFAULT_GRID_SIZE as f64;
        let mut shifted = fam.clone();
        for j in 0..fam.n_funcs {
            for h in 1..=k {
                let (a, b) = (fam.cos[j * k + h - 1], fam.sin[j * k + h - 1]);
                let (s, c) = (h as f64 * phi).sin_cos();
                shifted.cos[j * k + h - 1] = a * c + b * s;
                shifted.sin[j * k + h - 1] = b * c - a * s;
            }
        }
        assert!(shifted.satisfies_margin());
        let r = residual(&shifted, &laws, &grid()).unwrap();
        assert!((r - base).abs() < 1e-10 * base);
    }

    #[test]
    fn projection_lands_on_constraints() {
        let cfg = ProbeConfig::default();
        for i in 0..10 {
            let fam = random_start(&cfg, i).unwrap();
            assert!((fam.nonconstancy() - cfg.rho).abs() < 1e-12);
            assert!((fam.offsets.iter().sum::<f64>() - 3.0).abs() < 1e-9);
            assert!(fam.satisfies_margin());
        }
    }

    #[test]
    fn zero_law_reaches_machine_zero() {
        let cfg = ProbeConfig {
            restarts: 4,
            ..Default::default()
        };
        let res = minimize(&[ProbeLaw::Zero], &cfg).unwrap();
        assert!(res.min_residual < 1e-12, "{}", res.min_residual);
    }

    #[test]
    fn zero_nonconstancy_is_trivial() {
        let cfg = ProbeConfig {
            rho: 0.0,
            restarts: 3,
            ..Default::default()
        };
        let res = minimize(&[ProbeLaw::newtonian()], &cfg).unwrap();
        assert!(res.min_residual < 1e-15);
        assert_eq!(res.nonconstancy, 0.0);
    }

    #[test]
    fn running_min_is_monotone() {
        let cfg = ProbeConfig {
            restarts: 6,
            ..Default::default()
        };
        let res = minimize(&[ProbeLaw::newtonian()], &cfg).unwrap();
        assert!(res.running_min.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*res.running_min.last().unwrap(), res.min_residual);
        // prefix stability: fewer restarts reproduce the same prefix
        let short = minimize(&[ProbeLaw::newtonian()], &ProbeConfig { restarts: 3, ..cfg }).unwrap();
        assert_eq!(short.running_min[..], res.running_min[..3]);
    }

    #[test]
    fn law_audit() {
        assert!(ProbeLaw::newtonian().audit().is_ok());
        assert!(ProbeLaw::from_force_alpha(5.0).audit().is_ok());
        assert!(ProbeLaw::Zero.audit().is_ok());
        // alpha < 2 gives F growing at infinity, vanishing at zero
        assert!(matches!(ProbeLaw::from_force_alpha(1.0).audit(), Err(Error::InvalidLawFamily(_))));
        assert!(minimize(&[ProbeLaw::from_force_alpha(1.0)], &ProbeConfig::default()).is_err());
        assert_eq!("power:3".parse::<ProbeLaw>().unwrap(), ProbeLaw::newtonian());
        assert!("cube".parse::<ProbeLaw>().is_err());
    }

    #[test]
    fn infeasible_nonconstancy_is_reported() {
        let cfg = ProbeConfig {
            rho: 50.0,
            restarts: 2,
            ..Default::default()
        };
        assert!(minimize(&[ProbeLaw::newtonian()], &cfg).is_err());
    }
}
