use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::SampleRng;

/// Axis-aligned box `∏ [loᵢ, hiᵢ]`; infinite bounds are allowed.
///
/// In JSON, unbounded sides are written as `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox", into = "RawBox")]
pub struct BoxBounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawBox {
    lo: Vec<Option<f64>>,
    hi: Vec<Option<f64>>,
}

impl TryFrom<RawBox> for BoxBounds {
    type Error = Error;

    fn try_from(raw: RawBox) -> Result<Self> {
        let lo = raw.lo.into_iter().map(|v| v.unwrap_or(f64::NEG_INFINITY)).collect();
        let hi = raw.hi.into_iter().map(|v| v.unwrap_or(f64::INFINITY)).collect();
        BoxBounds::new(lo, hi)
    }
}

impl From<BoxBounds> for RawBox {
    fn from(b: BoxBounds) -> Self {
        let finite = |v: Vec<f64>| v.into_iter().map(|x| x.is_finite().then_some(x)).collect();
        RawBox {
            lo: finite(b.lo),
            hi: finite(b.hi),
        }
    }
}

impl BoxBounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidArgument(format!(
                "box bounds need equal non-zero lengths, got {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        for (i, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if l.is_nan() || h.is_nan() || l > h || l == f64::INFINITY || h == f64::NEG_INFINITY {
                return Err(Error::InvalidArgument(format!(
                    "empty or invalid box side {i}: [{l}, {h}]"
                )));
            }
        }
        Ok(BoxBounds { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn project(&self, x: &Point) -> Point {
        Point::raw(
            x.coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .map(|(&v, (&l, &h))| v.clamp(l, h))
                .collect(),
        )
    }

    pub fn intersect(&self, other: &BoxBounds) -> Option<BoxBounds> {
        let lo: Vec<f64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect();
        let hi: Vec<f64> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(*b)).collect();
        BoxBounds::new(lo, hi).ok()
    }

    /// `−B`.
    pub fn reflect(&self) -> BoxBounds {
        BoxBounds {
            lo: self.hi.iter().map(|h| -h).collect(),
            hi: self.lo.iter().map(|l| -l).collect(),
        }
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        x.coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (&l, &h))| v >= l - tol && v <= h + tol)
    }
}

#[derive(Clone)]
enum Shape {
    Box(BoxBounds),
    Custom(Arc<dyn Fn(&Point) -> Point + Send + Sync>),
}

/// A nonempty closed convex subset of ℝ^dim, known through its projection.
#[derive(Clone)]
pub struct ConvexSet {
    dim: usize,
    label: String,
    shape: Shape,
}

impl fmt::Debug for ConvexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexSet")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .finish()
    }
}

impl ConvexSet {
    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        Ok(Self::from_box(BoxBounds::new(lo, hi)?))
    }

    pub fn from_box(b: BoxBounds) -> Self {
        let label = box_label(&b);
        ConvexSet {
            dim: b.dim(),
            label,
            shape: Shape::Box(b),
        }
    }

    pub fn whole(dim: usize) -> Self {
        Self::from_box(BoxBounds {
            lo: vec![f64::NEG_INFINITY; dim],
            hi: vec![f64::INFINITY; dim],
        })
        .with_label(format!("R^{dim}"))
    }

    pub fn nonnegative_orthant(dim: usize) -> Self {
        Self::from_box(BoxBounds {
            lo: vec![0.0; dim],
            hi: vec![f64::INFINITY; dim],
        })
    }

    pub fn singleton(p: &Point) -> Self {
        Self::from_box(BoxBounds {
            lo: p.to_vec(),
            hi: p.to_vec(),
        })
    }

    /// `{origin + t·direction : t ≥ 0}`.
    pub fn ray(origin: Point, direction: Point) -> Result<Self> {
        if origin.dim() != direction.dim() {
            return Err(Error::DimensionMismatch {
                expected: origin.dim(),
                found: direction.dim(),
            });
        }
        let nn = direction.norm_squared();
        if nn == 0.0 {
            return Err(Error::InvalidArgument("ray direction must be non-zero".into()));
        }
        let label = format!("ray({origin}, {direction})");
        let dim = origin.dim();
        Ok(ConvexSet {
            dim,
            label,
            shape: Shape::Custom(Arc::new(move |x: &Point| {
                let t = ((x - &origin).dot(&direction) / nn).max(0.0);
                &origin + &(&direction * t)
            })),
        })
    }

    /// `{x : ⟨normal, x⟩ ≤ offset}`.
    pub fn halfspace(normal: Point, offset: f64) -> Result<Self> {
        let nn = normal.norm_squared();
        if nn == 0.0 || !offset.is_finite() {
            return Err(Error::InvalidArgument("degenerate halfspace".into()));
        }
        let label = format!("halfspace({normal} . x <= {offset})");
        Ok(ConvexSet {
            dim: normal.dim(),
            label,
            shape: Shape::Custom(Arc::new(move |x: &Point| {
                let excess = x.dot(&normal) - offset;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    x - &(&normal * (excess / nn))
                }
            })),
        })
    }

    /// Set given by a trusted projection map.
    pub fn from_projection<F>(dim: usize, projection: F, label: impl Into<String>) -> Self
    where
        F: Fn(&Point) -> Point + Send + Sync + 'static,
    {
        ConvexSet {
            dim,
            label: label.into(),
            shape: Shape::Custom(Arc::new(projection)),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn box_bounds(&self) -> Option<&BoxBounds> {
        match &self.shape {
            Shape::Box(b) => Some(b),
            Shape::Custom(_) => None,
        }
    }

    pub fn project(&self, x: &Point) -> Result<Point> {
        x.ensure_dim(self.dim)?;
        Ok(self.project_unchecked(x))
    }

    pub(crate) fn project_unchecked(&self, x: &Point) -> Point {
        match &self.shape {
            Shape::Box(b) => b.project(x),
            Shape::Custom(f) => f(x),
        }
    }

    pub fn distance(&self, x: &Point) -> Result<f64> {
        Ok(self.project(x)?.distance(x))
    }

    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        Ok(self.distance(x)? <= tol)
    }

    /// Point of the set obtained by projecting a uniform sample of the cube
    /// of half-width `radius`.
    pub fn sample(&self, rng: &mut SampleRng, radius: f64) -> Point {
        self.project_unchecked(&rng.point(self.dim, radius))
    }

    /// Intersection, when it has a closed-form projection (boxes).
    pub fn intersect(&self, other: &ConvexSet) -> Result<ConvexSet> {
        match (&self.shape, &other.shape) {
            (Shape::Box(a), Shape::Box(b)) => a
                .intersect(b)
                .map(ConvexSet::from_box)
                .ok_or_else(|| Error::Precondition("box intersection is empty".into())),
            _ => Err(Error::InvalidArgument(format!(
                "no closed-form projection onto {} ∩ {}",
                self.label, other.label
            ))),
        }
    }

    /// `y + S`.
    pub fn translate(&self, y: &Point) -> ConvexSet {
        let base = self.clone();
        let y = y.clone();
        let label = format!("{y} + {}", self.label);
        ConvexSet::from_projection(
            self.dim,
            move |x: &Point| &y + &base.project_unchecked(&(x - &y)),
            label,
        )
    }
}

fn box_label(b: &BoxBounds) -> String {
    let sides: Vec<String> = b
        .lo
        .iter()
        .zip(&b.hi)
        .map(|(l, h)| {
            if l == h {
                format!("{{{l}}}")
            } else {
                format!("[{l}, {h}]")
            }
        })
        .collect();
    sides.join(" x ")
}
