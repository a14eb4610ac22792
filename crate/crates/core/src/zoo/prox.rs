//! Convex functions with exact proximal maps and exact conjugates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::zoo::sets::BoxBounds;

/// Convex piecewise-linear function of one variable on an interval domain.
///
/// Between consecutive knots `lo < b₁ < … < bₘ < hi` the slope is
/// `slopes[i]`; outside `[lo, hi]` the value is `+∞`. Slopes must be strictly
/// increasing so that every knot is a genuine kink.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewise", into = "RawPiecewise")]
pub struct PiecewiseLinear1d {
    lo: f64,
    hi: f64,
    breakpoints: Vec<f64>,
    slopes: Vec<f64>,
    /// A point of the domain and the function value there.
    anchor: (f64, f64),
}

#[derive(Clone, Serialize, Deserialize)]
struct RawPiecewise {
    #[serde(default)]
    lo: Option<f64>,
    #[serde(default)]
    hi: Option<f64>,
    #[serde(default)]
    breakpoints: Vec<f64>,
    slopes: Vec<f64>,
    anchor: (f64, f64),
}

impl TryFrom<RawPiecewise> for PiecewiseLinear1d {
    type Error = Error;

    fn try_from(r: RawPiecewise) -> Result<Self> {
        PiecewiseLinear1d::new(
            r.lo.unwrap_or(f64::NEG_INFINITY),
            r.hi.unwrap_or(f64::INFINITY),
            r.breakpoints,
            r.slopes,
            r.anchor,
        )
    }
}

impl From<PiecewiseLinear1d> for RawPiecewise {
    fn from(p: PiecewiseLinear1d) -> Self {
        RawPiecewise {
            lo: p.lo.is_finite().then_some(p.lo),
            hi: p.hi.is_finite().then_some(p.hi),
            breakpoints: p.breakpoints,
            slopes: p.slopes,
            anchor: p.anchor,
        }
    }
}

impl PiecewiseLinear1d {
    pub fn new(
        lo: f64,
        hi: f64,
        breakpoints: Vec<f64>,
        slopes: Vec<f64>,
        anchor: (f64, f64),
    ) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidArgument(format!("piecewise-linear: {msg}")));
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return bad("empty domain");
        }
        if slopes.len() != breakpoints.len() + 1 {
            return bad("need exactly one more slope than breakpoints");
        }
        if slopes.iter().chain(&breakpoints).any(|v| !v.is_finite()) {
            return bad("non-finite slope or breakpoint");
        }
        if slopes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("slopes must be strictly increasing");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must be strictly increasing");
        }
        if breakpoints.iter().any(|&b| b <= lo || b >= hi) {
            return bad("breakpoints must lie strictly inside the domain");
        }
        if !(anchor.0 >= lo && anchor.0 <= hi && anchor.0.is_finite() && anchor.1.is_finite()) {
            return bad("anchor must be a finite point of the domain");
        }
        Ok(PiecewiseLinear1d {
            lo,
            hi,
            breakpoints,
            slopes,
            anchor,
        })
    }

    /// `max(0, x − c)`.
    pub fn hinge_right(c: f64) -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY, vec![c], vec![0.0, 1.0], (c, 0.0))
            .expect("valid hinge")
    }

    /// `max(0, c − x)`.
    pub fn hinge_left(c: f64) -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY, vec![c], vec![-1.0, 0.0], (c, 0.0))
            .expect("valid hinge")
    }

    /// Indicator of `[lo, hi]`.
    pub fn interval_indicator(lo: f64, hi: f64) -> Result<Self> {
        let anchor = if lo.is_finite() {
            lo
        } else if hi.is_finite() {
            hi
        } else {
            0.0
        };
        Self::new(lo, hi, vec![], vec![0.0], (anchor, 0.0))
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn slope_at(&self, t: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= t);
        self.slopes[i]
    }

    /// `∫_from^to f'`, both ends inside the domain.
    fn integral(&self, from: f64, to: f64) -> f64 {
        if from > to {
            return -self.integral(to, from);
        }
        let mut acc = 0.0;
        let mut cursor = from;
        for &b in &self.breakpoints {
            if b <= cursor {
                continue;
            }
            if b >= to {
                break;
            }
            acc += self.slope_at(cursor) * (b - cursor);
            cursor = b;
        }
        acc + self.slope_at(cursor) * (to - cursor)
    }

    pub fn value(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            return f64::INFINITY;
        }
        self.anchor.1 + self.integral(self.anchor.0, x)
    }

    /// `prox_{γf}(x)`, by locating the piece where `x − z ∈ γ∂f(z)`.
    pub fn prox(&self, gamma: f64, x: f64) -> f64 {
        let m = self.breakpoints.len();
        if self.lo.is_finite() && x <= self.lo + gamma * self.slopes[0] {
            return self.lo;
        }
        for i in 0..=m {
            let left = if i == 0 { self.lo } else { self.breakpoints[i - 1] };
            let right = if i == m { self.hi } else { self.breakpoints[i] };
            let z = x - gamma * self.slopes[i];
            if z >= left && z <= right {
                return z;
            }
            if i < m {
                let b = self.breakpoints[i];
                if x >= b + gamma * self.slopes[i] && x <= b + gamma * self.slopes[i + 1] {
                    return b;
                }
            }
        }
        // Only reachable past a finite upper end of the domain.
        self.hi
    }

    /// Fenchel conjugate, again piecewise linear.
    ///
    /// The kinks of `f*` sit at the slopes of `f`, and the slopes of `f*` are
    /// the kinks of `f` together with its finite domain ends.
    pub fn conjugate(&self) -> PiecewiseLinear1d {
        if self.lo == self.hi {
            // f finite only at c: f*(y) = c·y − f(c)
            let c = self.lo;
            return PiecewiseLinear1d::new(
                f64::NEG_INFINITY,
                f64::INFINITY,
                vec![],
                vec![c],
                (0.0, -self.anchor.1),
            )
            .expect("affine conjugate");
        }
        let first = self.slopes[0];
        let last = *self.slopes.last().expect("at least one slope");
        let lo = if self.lo.is_finite() { f64::NEG_INFINITY } else { first };
        let hi = if self.hi.is_finite() { f64::INFINITY } else { last };
        let breakpoints: Vec<f64> = self
            .slopes
            .iter()
            .copied()
            .filter(|&s| s > lo && s < hi)
            .collect();
        let mut slopes = Vec::with_capacity(breakpoints.len() + 1);
        if self.lo.is_finite() {
            slopes.push(self.lo);
        }
        slopes.extend(&self.breakpoints);
        if self.hi.is_finite() {
            slopes.push(self.hi);
        }
        if lo == hi {
            // affine f on ℝ: f* is finite at a single point
            slopes = vec![0.0];
        }
        // f*(s₀) = s₀·x − f(x) for any x with s₀ ∈ ∂f(x)
        let x_star = self.breakpoints.first().copied().unwrap_or(if self.lo.is_finite() {
            self.lo
        } else {
            self.anchor.0
        });
        let anchor = (first, first * x_star - self.value(x_star));
        PiecewiseLinear1d::new(lo, hi, breakpoints, slopes, anchor)
            .expect("conjugate of a valid piecewise-linear function is valid")
    }

    /// `x ↦ f(−x)`.
    pub fn reflect(&self) -> PiecewiseLinear1d {
        PiecewiseLinear1d {
            lo: -self.hi,
            hi: -self.lo,
            breakpoints: self.breakpoints.iter().rev().map(|b| -b).collect(),
            slopes: self.slopes.iter().rev().map(|s| -s).collect(),
            anchor: (-self.anchor.0, self.anchor.1),
        }
    }
}

/// A proper lower semicontinuous convex function with closed-form prox,
/// value, and conjugate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProxFunction {
    /// `½‖x‖²`, its own conjugate.
    HalfSquaredNorm { dim: usize },
    /// One-dimensional piecewise-linear function.
    PiecewiseLinear(PiecewiseLinear1d),
    /// Indicator of a box.
    BoxIndicator(BoxBounds),
    /// Support function `σ_B(y) = sup_{x∈B} ⟨x, y⟩` of a box.
    BoxSupport(BoxBounds),
}

impl ProxFunction {
    pub fn dim(&self) -> usize {
        match self {
            ProxFunction::HalfSquaredNorm { dim } => *dim,
            ProxFunction::PiecewiseLinear(_) => 1,
            ProxFunction::BoxIndicator(b) | ProxFunction::BoxSupport(b) => b.dim(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ProxFunction::HalfSquaredNorm { dim } => format!("half_sq_norm[{dim}]"),
            ProxFunction::PiecewiseLinear(p) => {
                format!("pl(knots={:?}, slopes={:?})", p.breakpoints, p.slopes)
            }
            ProxFunction::BoxIndicator(b) => format!("indicator({:?}, {:?})", b.lo, b.hi),
            ProxFunction::BoxSupport(b) => format!("support({:?}, {:?})", b.lo, b.hi),
        }
    }

    /// Function value, `+∞` outside the domain.
    pub fn value(&self, x: &Point) -> Result<f64> {
        x.ensure_dim(self.dim())?;
        Ok(match self {
            ProxFunction::HalfSquaredNorm { .. } => 0.5 * x.norm_squared(),
            ProxFunction::PiecewiseLinear(p) => p.value(x[0]),
            ProxFunction::BoxIndicator(b) => {
                if b.contains(x, 0.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ProxFunction::BoxSupport(b) => x
                .coords()
                .iter()
                .zip(b.lo.iter().zip(&b.hi))
                .map(|(&y, (&l, &h))| {
                    if y > 0.0 {
                        h * y
                    } else if y < 0.0 {
                        l * y
                    } else {
                        0.0
                    }
                })
                .sum(),
        })
    }

    /// `prox_{γf}(x) = argmin_z f(z) + ‖z − x‖²/(2γ)`.
    pub fn prox_scaled(&self, gamma: f64, x: &Point) -> Point {
        match self {
            ProxFunction::HalfSquaredNorm { .. } => x * (1.0 / (1.0 + gamma)),
            ProxFunction::PiecewiseLinear(p) => Point::raw(vec![p.prox(gamma, x[0])]),
            ProxFunction::BoxIndicator(b) => b.project(x),
            // Moreau: prox_{γσ_B}(x) = x − γ P_B(x/γ)
            ProxFunction::BoxSupport(b) => x - &(&b.project(&(x * (1.0 / gamma))) * gamma),
        }
    }

    pub fn prox(&self, x: &Point) -> Result<Point> {
        x.ensure_dim(self.dim())?;
        Ok(self.prox_scaled(1.0, x))
    }

    pub fn conjugate(&self) -> ProxFunction {
        match self {
            ProxFunction::HalfSquaredNorm { dim } => ProxFunction::HalfSquaredNorm { dim: *dim },
            ProxFunction::PiecewiseLinear(p) => ProxFunction::PiecewiseLinear(p.conjugate()),
            ProxFunction::BoxIndicator(b) => ProxFunction::BoxSupport(b.clone()),
            ProxFunction::BoxSupport(b) => ProxFunction::BoxIndicator(b.clone()),
        }
    }

    /// `f^∨ = f ∘ (−Id)`.
    pub fn reflect(&self) -> ProxFunction {
        match self {
            ProxFunction::HalfSquaredNorm { dim } => ProxFunction::HalfSquaredNorm { dim: *dim },
            ProxFunction::PiecewiseLinear(p) => ProxFunction::PiecewiseLinear(p.reflect()),
            ProxFunction::BoxIndicator(b) => ProxFunction::BoxIndicator(b.reflect()),
            ProxFunction::BoxSupport(b) => ProxFunction::BoxSupport(b.reflect()),
        }
    }
}
