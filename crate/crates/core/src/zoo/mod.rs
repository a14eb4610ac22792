//! Operators with exact closed-form resolvents.

mod ast;
mod prox;
mod sets;

pub use ast::OperatorSpec;
pub use prox::{PiecewiseLinear1d, ProxFunction};
pub use sets::{BoxBounds, ConvexSet};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{is_paramonotone_linear, monotone_symmetric_part, Resolvent, ResolventOperator};
use crate::point::Point;

struct Zero(usize);

impl Resolvent for Zero {
    fn dim(&self) -> usize {
        self.0
    }

    fn resolvent(&self, x: &Point) -> Point {
        x.clone()
    }

    fn resolvent_scaled(&self, _gamma: f64, x: &Point) -> Option<Point> {
        Some(x.clone())
    }
}

/// The zero operator; `J_0 = Id`.
pub fn zero_operator(dim: usize) -> ResolventOperator {
    ResolventOperator::from_resolvent(Zero(dim), true, format!("zero[{dim}]"))
}

struct NormalCone(ConvexSet);

impl Resolvent for NormalCone {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn resolvent(&self, x: &Point) -> Point {
        self.0.project_unchecked(x)
    }

    fn resolvent_scaled(&self, _gamma: f64, x: &Point) -> Option<Point> {
        Some(self.0.project_unchecked(x))
    }
}

/// `N_S`, whose resolvent is the projection onto `S`.
pub fn normal_cone_operator(set: &ConvexSet) -> ResolventOperator {
    let label = format!("N[{}]", set.label());
    ResolventOperator::from_resolvent(NormalCone(set.clone()), true, label)
}

struct Linear {
    matrix: DMatrix<f64>,
    shifted: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Linear {
    fn solve(&self, gamma: f64, x: &Point) -> Point {
        let rhs = x.vector().clone();
        let sol = if gamma == 1.0 {
            self.shifted.solve(&rhs)
        } else {
            let n = self.matrix.nrows();
            (DMatrix::identity(n, n) + &self.matrix * gamma).lu().solve(&rhs)
        };
        // Id + γM is invertible for monotone M
        Point::from_vector(sol.expect("Id + γM is nonsingular for monotone M"))
    }
}

impl Resolvent for Linear {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn resolvent(&self, x: &Point) -> Point {
        self.solve(1.0, x)
    }

    fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Option<Point> {
        Some(self.solve(gamma, x))
    }
}

/// Monotone linear map `x ↦ Mx`; the resolvent solves `(Id + M) z = x`.
pub fn linear_operator(m: &DMatrix<f64>) -> Result<ResolventOperator> {
    monotone_symmetric_part(m)?;
    let paramonotone = is_paramonotone_linear(m)?;
    let n = m.nrows();
    let shifted = (DMatrix::identity(n, n) + m).lu();
    let label = format!("linear{:?}", m.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>());
    Ok(ResolventOperator::from_resolvent(
        Linear {
            matrix: m.clone(),
            shifted,
        },
        paramonotone,
        label,
    ))
}

struct Constant(Point);

impl Resolvent for Constant {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn resolvent(&self, x: &Point) -> Point {
        x - &self.0
    }

    fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Option<Point> {
        Some(x - &(&self.0 * gamma))
    }
}

/// `A x ≡ u`, the gradient of `⟨u, ·⟩`.
pub fn constant_operator(u: &Point) -> ResolventOperator {
    let label = format!("const{u}");
    ResolventOperator::from_resolvent(Constant(u.clone()), true, label)
}

struct Prox(ProxFunction);

impl Resolvent for Prox {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn resolvent(&self, x: &Point) -> Point {
        self.0.prox_scaled(1.0, x)
    }

    fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Option<Point> {
        Some(self.0.prox_scaled(gamma, x))
    }
}

/// `∂f`, whose resolvent is `prox_f`.
pub fn prox_operator(f: &ProxFunction) -> ResolventOperator {
    let label = format!("subdiff[{}]", f.label());
    ResolventOperator::from_resolvent(Prox(f.clone()), true, label)
}

/// `N_U + R` with `U = ℝ × ℝ₊` and `R` the rotation by `+π/2`.
struct SkewPlusNormalCone;

impl Resolvent for SkewPlusNormalCone {
    fn dim(&self) -> usize {
        2
    }

    fn resolvent(&self, x: &Point) -> Point {
        self.resolvent_scaled(1.0, x).expect("closed form")
    }

    // (Id + γR + N_U) z ∋ x: interior z₂ > 0 solves (Id + γR) z = x, which
    // is consistent iff x₂ > γx₁; otherwise z = (x₁, 0).
    fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Option<Point> {
        let (x1, x2) = (x[0], x[1]);
        if x2 > gamma * x1 {
            let d = 1.0 + gamma * gamma;
            Some(Point::raw(vec![(x1 + gamma * x2) / d, (x2 - gamma * x1) / d]))
        } else {
            Some(Point::raw(vec![x1, 0.0]))
        }
    }
}

/// The two-dimensional operator `N_{ℝ×ℝ₊} + R`, `R(x₁, x₂) = (−x₂, x₁)`.
///
/// At `(ξ, 0)` its value is `{0} × (−∞, ξ]`, so the dual solution sets
/// `K_x` grow strictly along the line `ℝ × {0}`. Not paramonotone.
pub fn skew_plus_normal_cone_ww() -> ResolventOperator {
    ResolventOperator::from_resolvent(SkewPlusNormalCone, false, "N[R x R+] + rot(+pi/2)")
}

struct ComposedLcl {
    inner: ResolventOperator,
    map: DMatrix<f64>,
    alpha: f64,
}

impl ComposedLcl {
    // J_{γL*CL} = Id + α⁻¹ Lᵀ (J_{αγC} − Id) L, valid when L Lᵀ = α Id.
    fn eval(&self, gamma: f64, x: &Point) -> Option<Point> {
        let lx = &self.map * x.vector();
        let lx = Point::from_vector(lx);
        let j = self.inner.resolvent_scaled(self.alpha * gamma, &lx).ok()?;
        let corr: DVector<f64> = self.map.transpose() * (&j - &lx).vector() * (1.0 / self.alpha);
        Some(x + &Point::from_vector(corr))
    }
}

impl Resolvent for ComposedLcl {
    fn dim(&self) -> usize {
        self.map.ncols()
    }

    fn resolvent(&self, x: &Point) -> Point {
        self.eval(1.0, x).expect("scaling checked at construction")
    }

    fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Option<Point> {
        self.eval(gamma, x)
    }
}

/// `L* C L` for a linear `L: ℝⁿ → ℝᵐ` with `L Lᵀ = α Id`.
///
/// The flag is inherited from `C`: paramonotonicity of `C` passes to
/// `L* C L`.
pub fn composed_lcl(c: &ResolventOperator, l: &DMatrix<f64>) -> Result<ResolventOperator> {
    if l.nrows() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: l.nrows(),
        });
    }
    if l.ncols() == 0 || l.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("L must be finite with at least one column".into()));
    }
    let gram = l * l.transpose();
    let alpha = gram.trace() / l.nrows() as f64;
    let defect = (&gram - DMatrix::identity(l.nrows(), l.nrows()) * alpha).amax();
    if alpha.is_nan() || alpha <= 0.0 || defect > 1e-10 * alpha.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "L Lᵀ must be a positive multiple of the identity (defect {defect:e})"
        )));
    }
    if alpha != 1.0 && !c.supports_scaling() {
        return Err(Error::ScaledResolventUnavailable(c.label().to_string()));
    }
    let label = format!("L*[{}]L", c.label());
    Ok(ResolventOperator::from_resolvent(
        ComposedLcl {
            inner: c.clone(),
            map: l.clone(),
            alpha,
        },
        c.is_paramonotone(),
        label,
    ))
}
