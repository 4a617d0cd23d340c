//! Pairwise force laws.
//!
//! A law is the kernel `f` of the pair interaction `m_j (q_j - q_k) f(|q_j - q_k|^2)`,
//! together with a closed-form antiderivative `F` (`F' = f`) and the key function
//! `G(x) = x f(x) + F(x) = (x F(x))'`. A law is admissible when `G` keeps a fixed
//! sign on the positive half-line; the inverse-cube family `f = C / x^2` is the
//! unique power law with `G == 0`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which `|G|` counts as identically zero.
pub const DEGENERACY_TOL: f64 = 1e-12;

type Kernel = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LawKind {
    PowerLaw { alpha: f64, c: f64 },
    Custom { name: String },
}

#[derive(Clone)]
enum Repr {
    Power { alpha: f64, c: f64 },
    Custom { f: Kernel, antiderivative: Kernel },
}

/// An immutable, shareable force law.
#[derive(Clone)]
pub struct ForceLaw {
    kind: LawKind,
    repr: Repr,
}

impl fmt::Debug for ForceLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ForceLaw").field("kind", &self.kind).finish()
    }
}

impl ForceLaw {
    /// `f(x) = C x^(-alpha/2)`, with the zero-constant antiderivative
    /// (`C ln x` when `alpha = 2`).
    pub fn power_law(alpha: f64, c: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidInput(format!("alpha must be finite, got {alpha}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("C must be positive, got {c}")));
        }
        Ok(Self {
            kind: LawKind::PowerLaw { alpha, c },
            repr: Repr::Power { alpha, c },
        })
    }

    /// The classical gravitational kernel `x^(-3/2)`.
    pub fn newtonian() -> Self {
        Self::power_law(3.0, 1.0).expect("valid constants")
    }

    /// `f(x) = x^(-2)`, the force falling off with the inverse cube of distance.
    pub fn inverse_cube() -> Self {
        Self::power_law(4.0, 1.0).expect("valid constants")
    }

    /// A law from a closed-form pair. `antiderivative` must satisfy `F' = f`;
    /// see [`derivative_audit`].
    pub fn custom<Fk, Ak>(name: impl Into<String>, f: Fk, antiderivative: Ak) -> Self
    where
        Fk: Fn(f64) -> f64 + Send + Sync + 'static,
        Ak: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            kind: LawKind::Custom { name: name.into() },
            repr: Repr::Custom {
                f: Arc::new(f),
                antiderivative: Arc::new(antiderivative),
            },
        }
    }

    pub fn kind(&self) -> &LawKind {
        &self.kind
    }

    /// Exponent `alpha` for power laws.
    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            LawKind::PowerLaw { alpha, .. } => Some(alpha),
            LawKind::Custom { .. } => None,
        }
    }

    #[inline]
    pub fn f(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Power { alpha, c } => c * x.powf(-0.5 * alpha),
            Repr::Custom { f, .. } => f(x),
        }
    }

    /// The antiderivative `F`.
    #[inline]
    pub fn antiderivative(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Power { alpha, c } => {
                let p = 1.0 - 0.5 * alpha;
                if p == 0.0 {
                    c * x.ln()
                } else {
                    c * x.powf(p) / p
                }
            }
            Repr::Custom { antiderivative, .. } => antiderivative(x),
        }
    }

    /// `G(x) = x f(x) + F(x)` without argument checking.
    #[inline]
    pub fn g(&self, x: f64) -> f64 {
        x * self.f(x) + self.antiderivative(x)
    }

    /// `G(x)` for `x > 0`.
    pub fn eval_g(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::NonPositiveArgument(x));
        }
        Ok(self.g(x))
    }

    pub fn label(&self) -> String {
        match &self.kind {
            LawKind::PowerLaw { alpha, c } => format!("power(alpha={alpha}, C={c})"),
            LawKind::Custom { name } => name.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdmissibilityClass {
    PositiveG,
    NegativeG,
    DegenerateInverseCube,
    Indefinite,
}

impl AdmissibilityClass {
    /// Whether the fixed-sign hypothesis on `G` holds.
    pub fn is_admissible(self) -> bool {
        matches!(self, Self::PositiveG | Self::NegativeG)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PositiveG => "PositiveG",
            Self::NegativeG => "NegativeG",
            Self::DegenerateInverseCube => "DegenerateInverseCube",
            Self::Indefinite => "Indefinite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub class: AdmissibilityClass,
    /// `(x, G(x))` for every grid point.
    pub evidence: Vec<(f64, f64)>,
}

/// Classifies `law` by the sign of `G` over `grid`.
///
/// The grid must be non-empty, strictly positive and span at least two decades.
/// Degeneracy is tested first: `max |G| < 1e-12 (1 + max |x f(x)|)`.
pub fn classify_admissibility(law: &ForceLaw, grid: &[f64]) -> Result<Admissibility> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(&x) = grid.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::NonPositiveArgument(x));
    }
    let lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = grid.iter().copied().fold(0.0, f64::max);
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidInput(format!(
            "admissibility grid [{lo}, {hi}] spans less than two decades"
        )));
    }

    let evidence: Vec<(f64, f64)> = grid.iter().map(|&x| (x, law.g(x))).collect();
    let max_abs_g = evidence.iter().map(|(_, g)| g.abs()).fold(0.0, f64::max);
    let max_abs_xf = grid.iter().map(|&x| (x * law.f(x)).abs()).fold(0.0, f64::max);
    let min_g = evidence.iter().map(|(_, g)| *g).fold(f64::INFINITY, f64::min);
    let max_g = evidence.iter().map(|(_, g)| *g).fold(f64::NEG_INFINITY, f64::max);

    let class = if max_abs_g < DEGENERACY_TOL * (1.0 + max_abs_xf) {
        AdmissibilityClass::DegenerateInverseCube
    } else if min_g > 0.0 {
        AdmissibilityClass::PositiveG
    } else if max_g < 0.0 {
        AdmissibilityClass::NegativeG
    } else {
        AdmissibilityClass::Indefinite
    };
    Ok(Admissibility { class, evidence })
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Four decades around unity; used wherever a law must be classified without
/// a caller-supplied grid.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-2, 1e2, 41)
}

/// Largest central-difference discrepancy over `grid`, taking the max of
/// `|F'(x) - f(x)| / (1 + |f(x)|)` and `|(xF)'(x) - G(x)| / (1 + |G(x)|)`.
/// Step `h = 1e-6 x`.
pub fn derivative_audit(law: &ForceLaw, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&x| {
            let h = 1e-6 * x;
            let dfa = (law.antiderivative(x + h) - law.antiderivative(x - h)) / (2.0 * h);
            let xf = |y: f64| y * law.antiderivative(y);
            let dxf = (xf(x + h) - xf(x - h)) / (2.0 * h);
            let (f, g) = (law.f(x), law.g(x));
            ((dfa - f).abs() / (1.0 + f.abs())).max((dxf - g).abs() / (1.0 + g.abs()))
        })
        .fold(0.0, f64::max)
}

/// Serializable force-law description, as it appears in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LawSpec {
    Power {
        alpha: f64,
        #[serde(rename = "C")]
        c: f64,
    },
}

impl LawSpec {
    pub fn build(&self) -> Result<ForceLaw> {
        match *self {
            LawSpec::Power { alpha, c } => ForceLaw::power_law(alpha, c),
        }
    }
}

impl FromStr for LawSpec {
    type Err = Error;

    /// Accepts `newtonian`, `inverse-cube`, `power:ALPHA` and `power:ALPHA:C`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unrecognised law `{s}`"));
        match s {
            "newtonian" => return Ok(LawSpec::Power { alpha: 3.0, c: 1.0 }),
            "inverse-cube" => return Ok(LawSpec::Power { alpha: 4.0, c: 1.0 }),
            _ => {}
        }
        let mut parts = s.split(':');
        if parts.next() != Some("power") {
            return Err(bad());
        }
        let alpha: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let c: f64 = match parts.next() {
            Some(c) => c.parse().map_err(|_| bad())?,
            None => 1.0,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(LawSpec::Power { alpha, c })
    }
}
