//! Maximally monotone operators represented by their resolvents.
//!
//! An operator `A` on ℝⁿ is stored as its resolvent `J_A = (Id + A)⁻¹`,
//! which is total and firmly nonexpansive exactly when `A` is maximally
//! monotone. Every set-valued question about `A` (graph membership, zeros,
//! the splitting operators) is answered through `J_A`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::SampleRng;

/// Default absolute tolerance on `‖J_A(x+u) − x‖` for graph membership.
pub const DEFAULT_GRAPH_TOL: f64 = 1e-9;

/// Slack allowed when sampling the firm-nonexpansiveness inequality.
pub const FNE_TOL: f64 = 1e-10;

/// Closed-form resolvent of a maximally monotone operator.
///
/// `resolvent_scaled(γ, x)` evaluates `J_{γA}`; implementations return `None`
/// when no closed form is known.
pub trait Resolvent: Send + Sync {
    fn dim(&self) -> usize;

    fn resolvent(&self, x: &Point) -> Point;

    fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Option<Point> {
        let _ = (gamma, x);
        None
    }
}

/// A maximally monotone operator on ℝ^dim, carried by its resolvent.
///
/// The `paramonotone` flag is declared by the constructor that knows it
/// (subdifferentials, validated linear maps); it is never inferred.
#[derive(Clone)]
pub struct ResolventOperator {
    inner: Arc<dyn Resolvent>,
    paramonotone: bool,
    label: String,
}

impl fmt::Debug for ResolventOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResolventOperator")
            .field("label", &self.label)
            .field("dim", &self.dim())
            .field("paramonotone", &self.paramonotone)
            .finish()
    }
}

impl ResolventOperator {
    /// Wraps a trusted closed-form resolvent.
    pub fn from_resolvent(
        inner: impl Resolvent + 'static,
        paramonotone: bool,
        label: impl Into<String>,
    ) -> Self {
        ResolventOperator {
            inner: Arc::new(inner),
            paramonotone,
            label: label.into(),
        }
    }

    /// Wraps a user-supplied resolvent map.
    ///
    /// In debug builds the map is sampled for firm nonexpansiveness and
    /// rejected if it fails.
    pub fn from_fn<F>(
        dim: usize,
        map: F,
        paramonotone: bool,
        label: impl Into<String>,
    ) -> Result<Self>
    where
        F: Fn(&Point) -> Point + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::EmptyPoint);
        }
        let op = Self::from_resolvent(FnResolvent { dim, map }, paramonotone, label);
        if cfg!(debug_assertions) {
            let mut rng = SampleRng::new(0x5eed);
            let defect = op.firm_nonexpansiveness_defect(&mut rng, 32, 10.0);
            if defect > FNE_TOL {
                return Err(Error::NotFirmlyNonexpansive { defect });
            }
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn is_paramonotone(&self) -> bool {
        self.paramonotone
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `J_A x = (Id + A)⁻¹ x`.
    pub fn resolvent(&self, x: &Point) -> Result<Point> {
        x.ensure_dim(self.dim())?;
        Ok(self.inner.resolvent(x))
    }

    /// `R_A x = 2 J_A x − x`.
    pub fn reflected_resolvent(&self, x: &Point) -> Result<Point> {
        let j = self.resolvent(x)?;
        Ok(&(&j * 2.0) - x)
    }

    /// `J_{γA} x`, when a closed form exists.
    pub fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Result<Point> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "resolvent scale must be positive, got {gamma}"
            )));
        }
        x.ensure_dim(self.dim())?;
        if gamma == 1.0 {
            return Ok(self.inner.resolvent(x));
        }
        self.inner
            .resolvent_scaled(gamma, x)
            .ok_or_else(|| Error::ScaledResolventUnavailable(self.label.clone()))
    }

    pub fn supports_scaling(&self) -> bool {
        let probe = Point::zeros(self.dim());
        self.inner.resolvent_scaled(2.0, &probe).is_some()
    }

    /// `A⁻¹`, with resolvent `Id − J_A`.
    pub fn inverse(&self) -> ResolventOperator {
        ResolventOperator {
            inner: Arc::new(Inverse(self.inner.clone())),
            paramonotone: self.paramonotone,
            label: format!("inv({})", self.label),
        }
    }

    /// `A^∨ = (−Id)∘A∘(−Id)`, with resolvent `x ↦ −J_A(−x)`.
    pub fn ovee(&self) -> ResolventOperator {
        ResolventOperator {
            inner: Arc::new(Ovee(self.inner.clone())),
            paramonotone: self.paramonotone,
            label: format!("ovee({})", self.label),
        }
    }

    /// `A^{−∨} = (A⁻¹)^∨ = (A^∨)⁻¹`, with resolvent `x ↦ x + J_A(−x)`.
    pub fn neg_ovee_inverse(&self) -> ResolventOperator {
        self.inverse().ovee()
    }

    /// Computable test for `u ∈ A x`: `‖J_A(x+u) − x‖ ≤ tol`.
    pub fn graph_contains(&self, x: &Point, u: &Point, tol: f64) -> Result<bool> {
        x.ensure_dim(self.dim())?;
        u.ensure_dim(self.dim())?;
        let j = self.inner.resolvent(&(x + u));
        Ok(j.distance(x) <= tol)
    }

    /// Minty parametrization: `x ↦ (J_A x, x − J_A x) ∈ gr A`, with
    /// `a + a* == x` in floating point.
    pub fn minty_param(&self, x: &Point) -> Result<(Point, Point)> {
        let a = self.resolvent(x)?;
        let a_star = a.complement_in(x);
        Ok((a, a_star))
    }

    /// Largest sampled violation of
    /// `‖Jx − Jy‖² ≤ ⟨x − y, Jx − Jy⟩`.
    pub fn firm_nonexpansiveness_defect(
        &self,
        rng: &mut SampleRng,
        pairs: usize,
        radius: f64,
    ) -> f64 {
        let dim = self.dim();
        (0..pairs)
            .map(|_| {
                let x = rng.point(dim, radius);
                let y = rng.point(dim, radius);
                let d = &self.inner.resolvent(&x) - &self.inner.resolvent(&y);
                d.norm_squared() - (&x - &y).dot(&d)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

struct FnResolvent<F> {
    dim: usize,
    map: F,
}

impl<F> Resolvent for FnResolvent<F>
where
    F: Fn(&Point) -> Point + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn resolvent(&self, x: &Point) -> Point {
        (self.map)(x)
    }
}

struct Inverse(Arc<dyn Resolvent>);

impl Resolvent for Inverse {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn resolvent(&self, x: &Point) -> Point {
        x - &self.0.resolvent(x)
    }

    // J_{γA⁻¹}(x) = x − γ J_{A/γ}(x/γ)
    fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Option<Point> {
        let inner = &(x * (1.0 / gamma));
        let j = if gamma == 1.0 {
            self.0.resolvent(inner)
        } else {
            self.0.resolvent_scaled(1.0 / gamma, inner)?
        };
        Some(x - &(&j * gamma))
    }
}

struct Ovee(Arc<dyn Resolvent>);

impl Resolvent for Ovee {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn resolvent(&self, x: &Point) -> Point {
        -self.0.resolvent(&-x)
    }

    fn resolvent_scaled(&self, gamma: f64, x: &Point) -> Option<Point> {
        Some(-self.0.resolvent_scaled(gamma, &-x)?)
    }
}

/// Checks that `M + Mᵀ` is positive semidefinite within a scale-relative
/// tolerance; returns the eigen-decomposition of `M₊ = ½(M + Mᵀ)`.
pub(crate) fn monotone_symmetric_part(m: &DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::InvalidArgument(format!(
            "matrix must be square and non-empty, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let scale = m.norm().max(1.0);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -1e-10 * scale {
        return Err(Error::NotMonotone(format!(
            "symmetric part has eigenvalue {min:e}"
        )));
    }
    Ok(eig)
}

/// Paramonotonicity test for a monotone linear map: `ker M₊ ⊆ ker M`.
///
/// The kernel of the symmetric part is read off its eigen-decomposition and
/// each basis vector is checked to be annihilated by `M`.
pub fn is_paramonotone_linear(m: &DMatrix<f64>) -> Result<bool> {
    let eig = monotone_symmetric_part(m)?;
    let scale = m.norm().max(1.0);
    let kernel_tol = 1e-10 * scale;
    for (i, lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= kernel_tol {
            let v = eig.eigenvectors.column(i);
            if (m * v).norm() > kernel_tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;
    use crate::zoo;

    fn rot_minus() -> ResolventOperator {
        zoo::linear_operator(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])).unwrap()
    }

    fn nonneg_half_line() -> ResolventOperator {
        zoo::normal_cone_operator(&zoo::ConvexSet::nonnegative_orthant(1))
    }

    #[test]
    fn resolvent_examples() {
        let j = rot_minus().resolvent(&pt![1, 0]).unwrap();
        assert!(j.distance(&pt![0.5, 0.5]) < 1e-15);
        let z = zoo::zero_operator(3);
        assert_eq!(z.resolvent(&pt![1, -2, 3]).unwrap(), pt![1, -2, 3]);
        assert_eq!(nonneg_half_line().resolvent(&pt![-1]).unwrap(), pt![0]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            rot_minus().resolvent(&pt![1]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(rot_minus().reflected_resolvent(&pt![1, 2, 3]).is_err());
    }

    #[test]
    fn reflected_resolvent_examples() {
        let r = rot_minus().reflected_resolvent(&pt![1, 0]).unwrap();
        assert!(r.distance(&pt![0, 1]) < 1e-15);
        let z = zoo::zero_operator(2);
        assert_eq!(z.reflected_resolvent(&pt![4, 5]).unwrap(), pt![4, 5]);
        let box02 = zoo::normal_cone_operator(&zoo::ConvexSet::boxed(vec![0.0], vec![2.0]).unwrap());
        assert_eq!(box02.reflected_resolvent(&pt![5]).unwrap(), pt![-1]);
    }

    #[test]
    fn inverse_examples() {
        let inv = nonneg_half_line().inverse();
        assert_eq!(inv.resolvent(&pt![-1]).unwrap(), pt![-1]);
        let z = zoo::zero_operator(2).inverse();
        assert_eq!(z.resolvent(&pt![3, -4]).unwrap(), pt![0, 0]);

        let a = rot_minus();
        let back = a.inverse().inverse();
        let mut rng = SampleRng::new(1);
        for x in rng.points(2, 10.0, 100) {
            let d = a.resolvent(&x).unwrap().distance(&back.resolvent(&x).unwrap());
            assert!(d <= 1e-12);
        }
    }

    #[test]
    fn ovee_examples() {
        let o = nonneg_half_line().ovee();
        assert_eq!(o.resolvent(&pt![1]).unwrap(), pt![0]);
        let z = zoo::zero_operator(2).ovee();
        assert_eq!(z.resolvent(&pt![3, -4]).unwrap(), pt![3, -4]);
        let a = rot_minus();
        let mut rng = SampleRng::new(2);
        for x in rng.points(2, 10.0, 100) {
            let d = a.resolvent(&x).unwrap().distance(&a.ovee().resolvent(&x).unwrap());
            assert!(d <= 1e-12);
        }
    }

    #[test]
    fn neg_ovee_inverse_examples() {
        let a = nonneg_half_line();
        let nov = a.neg_ovee_inverse();
        let mut rng = SampleRng::new(3);
        for x in rng.points(1, 10.0, 100) {
            let expected = &x + &a.resolvent(&-&x).unwrap();
            assert!(nov.resolvent(&x).unwrap().distance(&expected) <= 1e-12);
        }
        let z = zoo::zero_operator(2).neg_ovee_inverse();
        assert_eq!(z.resolvent(&pt![1, 1]).unwrap(), pt![0, 0]);

        // B = rotation by +π/2, B^{−∨} = B⁻¹ = −B; (Id − B) z = (1, 1) gives z = (0, 1).
        let b = zoo::linear_operator(&DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])).unwrap();
        let j = b.neg_ovee_inverse().resolvent(&pt![1, 1]).unwrap();
        assert!(j.distance(&pt![0, 1]) < 1e-15, "{j:?}");
    }

    #[test]
    fn graph_contains_examples() {
        let n = nonneg_half_line();
        assert!(n.graph_contains(&pt![0], &pt![-1], DEFAULT_GRAPH_TOL).unwrap());
        assert!(!n.graph_contains(&pt![1], &pt![-1], DEFAULT_GRAPH_TOL).unwrap());
        let z = zoo::zero_operator(2);
        assert!(z.graph_contains(&pt![7, -3], &pt![0, 0], DEFAULT_GRAPH_TOL).unwrap());
    }

    #[test]
    fn minty_examples() {
        let (a, a_star) = nonneg_half_line().minty_param(&pt![-1]).unwrap();
        assert_eq!((a, a_star), (pt![0], pt![-1]));
        let (a, a_star) = zoo::zero_operator(2).minty_param(&pt![2, 3]).unwrap();
        assert_eq!((a, a_star), (pt![2, 3], pt![0, 0]));
        let (a, a_star) = rot_minus().minty_param(&pt![1, 0]).unwrap();
        assert!(a.distance(&pt![0.5, 0.5]) < 1e-15);
        assert!(a_star.distance(&pt![0.5, -0.5]) < 1e-15);
    }

    #[test]
    fn paramonotone_linear_examples() {
        let rot = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(!is_paramonotone_linear(&rot).unwrap());
        assert!(is_paramonotone_linear(&DMatrix::identity(3, 3)).unwrap());
        let proj = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(is_paramonotone_linear(&proj).unwrap());
        let bad = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(is_paramonotone_linear(&bad), Err(Error::NotMonotone(_))));
        assert!(is_paramonotone_linear(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn from_fn_rejects_expansive_maps() {
        let err = ResolventOperator::from_fn(1, |x: &Point| x * 2.0, false, "doubling");
        if cfg!(debug_assertions) {
            assert!(matches!(err, Err(Error::NotFirmlyNonexpansive { .. })));
        }
        let ok = ResolventOperator::from_fn(1, |x: &Point| x * 0.5, true, "half");
        assert!(ok.is_ok());
    }

    #[test]
    fn scaled_resolvent_through_transforms() {
        // J_{γA⁻¹} via Moreau: x − γ J_{A/γ}(x/γ); for A = N_C this is x − γ P_C(x/γ).
        let n = nonneg_half_line();
        let inv = n.inverse();
        let j = inv.resolvent_scaled(2.0, &pt![3]).unwrap();
        assert_eq!(j, pt![0]);
        let j = inv.resolvent_scaled(2.0, &pt![-3]).unwrap();
        assert_eq!(j, pt![-3]);
        assert!(inv.resolvent_scaled(0.0, &pt![1]).is_err());
    }
}
