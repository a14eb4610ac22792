//! Projections onto `Z + K` and onto `Z` through the shadow map `J_A`.
//!
//! For paramonotone pairs `Fix T = Z + K` and `(Z − Z) ⊥ (K − K)`, which
//! turns the projection onto the sum into a sum of projections.

use crate::duality::{kz_contains, DualPair};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::{SampleRng, DEFAULT_SAMPLE_RADIUS};
use crate::zoo::ConvexSet;

/// Number of sampled pairs used to validate an orthogonality hypothesis.
pub const ORTHOGONALITY_SAMPLES: usize = 50;

/// Tolerance on sampled inner products.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

const ORTHOGONALITY_SEED: u64 = 0x0f1e_2d3c;

/// Which orthogonality relation between two sets is claimed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orthogonality {
    /// `U ⊥ V`.
    Sets,
    /// `(U − U) ⊥ V`.
    DifferencesToSet,
    /// `U ⊥ (V − V)`.
    SetToDifferences,
    /// `(U − U) ⊥ (V − V)`.
    Differences,
}

/// Largest `|⟨u, v⟩|` over sampled vectors of the claimed kind.
///
/// Sampling is a guard, not a proof; the seed is fixed so that the guard is
/// deterministic.
pub fn orthogonality_defect(u: &ConvexSet, v: &ConvexSet, kind: Orthogonality) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let mut rng = SampleRng::new(ORTHOGONALITY_SEED);
    let r = DEFAULT_SAMPLE_RADIUS;
    let mut worst = 0.0f64;
    for _ in 0..ORTHOGONALITY_SAMPLES {
        let (u1, u2) = (u.sample(&mut rng, r), u.sample(&mut rng, r));
        let (v1, v2) = (v.sample(&mut rng, r), v.sample(&mut rng, r));
        let (a, b) = match kind {
            Orthogonality::Sets => (u1, v1),
            Orthogonality::DifferencesToSet => (&u1 - &u2, v1),
            Orthogonality::SetToDifferences => (u1, &v1 - &v2),
            Orthogonality::Differences => (&u1 - &u2, &v1 - &v2),
        };
        worst = worst.max(a.dot(&b).abs());
    }
    Ok(worst)
}

fn require_orthogonal(u: &ConvexSet, v: &ConvexSet, kind: Orthogonality) -> Result<()> {
    let defect = orthogonality_defect(u, v, kind)?;
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal {
            defect,
            tol: ORTHOGONALITY_TOL,
        });
    }
    Ok(())
}

/// Two sets whose orthogonality has been checked.
#[derive(Clone, Debug)]
pub struct OrthogonalSumSet {
    u: ConvexSet,
    v: ConvexSet,
    kind: Orthogonality,
}

impl OrthogonalSumSet {
    pub fn new(u: ConvexSet, v: ConvexSet, kind: Orthogonality) -> Result<Self> {
        require_orthogonal(&u, &v, kind)?;
        Ok(OrthogonalSumSet { u, v, kind })
    }

    pub fn u(&self) -> &ConvexSet {
        &self.u
    }

    pub fn v(&self) -> &ConvexSet {
        &self.v
    }

    pub fn kind(&self) -> Orthogonality {
        self.kind
    }

    /// `P_U x + P_V x`, which is `P_{U+V} x` when `U ⊥ V`.
    pub fn project(&self, x: &Point) -> Result<Point> {
        if self.kind != Orthogonality::Sets {
            return Err(Error::Precondition(
                "the sum formula needs U ⊥ V, not only orthogonal differences".into(),
            ));
        }
        Ok(&self.u.project(x)? + &self.v.project(x)?)
    }
}

/// `P_{U+V} x = P_U x + P_V x` for `U ⊥ V`.
pub fn project_orthogonal_sum(u: &ConvexSet, v: &ConvexSet, x: &Point) -> Result<Point> {
    OrthogonalSumSet::new(u.clone(), v.clone(), Orthogonality::Sets)?.project(x)
}

/// `P_{y+S}(x) = y + P_S(x − y)`.
pub fn project_translate(s: &ConvexSet, y: &Point, x: &Point) -> Result<Point> {
    y.ensure_dim(s.dim())?;
    Ok(y + &s.project(&(x - y))?)
}

fn require_paramonotone(pair: &DualPair) -> Result<()> {
    if pair.is_paramonotone() {
        Ok(())
    } else {
        Err(Error::NotParamonotone(format!(
            "({}, {})",
            pair.a().label(),
            pair.b().label()
        )))
    }
}

/// `P_{Z+K}(x) = P_Z(x − k₀) + P_K(x − z₀)` for any `z₀ ∈ Z`, `k₀ ∈ K`.
///
/// `(z₀, k₀)` is checked to lie in `gr K`, which for a paramonotone pair is
/// the rectangle `Z × K`.
pub fn project_z_plus_k(
    pair: &DualPair,
    z: &ConvexSet,
    k: &ConvexSet,
    z0: &Point,
    k0: &Point,
    x: &Point,
    tol: f64,
) -> Result<Point> {
    require_paramonotone(pair)?;
    if !kz_contains(pair, z0, k0, tol)? {
        return Err(Error::Precondition(format!("({z0}, {k0}) is not a primal-dual solution")));
    }
    Ok(&z.project(&(x - k0))? + &k.project(&(x - z0))?)
}

/// `P_{Z+K}(x) = P_Z(x) + P_K(x − z₀)` when `(Z − Z) ⊥ K`.
pub fn project_z_plus_k_zero_in_k(z: &ConvexSet, k: &ConvexSet, z0: &Point, x: &Point) -> Result<Point> {
    require_orthogonal(z, k, Orthogonality::DifferencesToSet)?;
    Ok(&z.project(x)? + &k.project(&(x - z0))?)
}

/// `P_{Z+K}(x) = P_Z(x − k₀) + P_K(x)` when `Z ⊥ (K − K)`.
pub fn project_z_plus_k_zero_in_z(z: &ConvexSet, k: &ConvexSet, k0: &Point, x: &Point) -> Result<Point> {
    require_orthogonal(z, k, Orthogonality::SetToDifferences)?;
    Ok(&z.project(&(x - k0))? + &k.project(x)?)
}

/// Both sides of `J_A P_{Z+K}(x) = P_Z(x − k₀)`.
#[derive(Clone, Debug)]
pub struct ShadowProjection {
    /// `J_A P_{Z+K}(x)`.
    pub shadow: Point,
    /// `P_Z(x − k₀)`.
    pub predicted: Point,
    pub residual: f64,
}

/// Evaluates `J_A P_{Z+K}(x)` and compares it with `P_Z(x − k₀)`.
///
/// `P_Z(x)` serves as the primal witness for `k₀`.
pub fn shadow_projection(
    pair: &DualPair,
    z: &ConvexSet,
    k: &ConvexSet,
    k0: &Point,
    x: &Point,
    tol: f64,
) -> Result<ShadowProjection> {
    let z0 = z.project(x)?;
    let p = project_z_plus_k(pair, z, k, &z0, k0, x, tol)?;
    let shadow = pair.a().resolvent(&p)?;
    let predicted = z.project(&(x - k0))?;
    let residual = shadow.distance(&predicted);
    Ok(ShadowProjection {
        shadow,
        predicted,
        residual,
    })
}

/// `(P_U P_{Fix T} x, P_{U∩V} x)`; the two agree for the feasibility pair
/// `(N_U, N_V)` with `U ∩ V ≠ ∅`.
///
/// `U` and `V` must be boxes, so that `P_{U∩V}` has a closed form.
pub fn summerland_check(
    u: &ConvexSet,
    v: &ConvexSet,
    fix_t: &ConvexSet,
    x: &Point,
) -> Result<(Point, Point)> {
    let inter = u.intersect(v)?;
    let via_fix = u.project(&fix_t.project(x)?)?;
    Ok((via_fix, inter.project(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;
    use crate::zoo;

    const INF: f64 = f64::INFINITY;

    fn nonneg_axis() -> ConvexSet {
        ConvexSet::boxed(vec![0.0, 0.0], vec![INF, 0.0]).unwrap()
    }

    fn vertical_axis() -> ConvexSet {
        ConvexSet::boxed(vec![0.0, -INF], vec![0.0, INF]).unwrap()
    }

    fn horizontal_axis() -> ConvexSet {
        ConvexSet::boxed(vec![-INF, 0.0], vec![INF, 0.0]).unwrap()
    }

    fn orthogonal_pair() -> DualPair {
        DualPair::new(
            zoo::normal_cone_operator(&horizontal_axis()),
            zoo::normal_cone_operator(&nonneg_axis()),
        )
        .unwrap()
    }

    fn interval(lo: f64, hi: f64) -> ConvexSet {
        ConvexSet::boxed(vec![lo], vec![hi]).unwrap()
    }

    fn feasibility() -> DualPair {
        DualPair::new(
            zoo::normal_cone_operator(&interval(0.0, 2.0)),
            zoo::normal_cone_operator(&interval(1.0, 3.0)),
        )
        .unwrap()
    }

    // ℝ₊ × ℝ, the sum of the two axes
    fn half_plane() -> ConvexSet {
        ConvexSet::boxed(vec![0.0, -INF], vec![INF, INF]).unwrap()
    }

    #[test]
    fn orthogonal_sum_examples() {
        let x = pt![-1, 2];
        assert_eq!(project_orthogonal_sum(&nonneg_axis(), &vertical_axis(), &x).unwrap(), pt![0, 2]);
        let inside = pt![3, -4];
        assert_eq!(project_orthogonal_sum(&nonneg_axis(), &vertical_axis(), &inside).unwrap(), inside);
        let origin = ConvexSet::singleton(&pt![0, 0]);
        let halfspace = ConvexSet::halfspace(pt![1, 1], 1.0).unwrap();
        assert_eq!(
            project_orthogonal_sum(&origin, &halfspace, &pt![3, 3]).unwrap(),
            halfspace.project(&pt![3, 3]).unwrap()
        );
        assert!(matches!(
            project_orthogonal_sum(&nonneg_axis(), &half_plane(), &x),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn orthogonal_sum_matches_direct_projection() {
        let mut rng = SampleRng::new(21);
        let sum = OrthogonalSumSet::new(nonneg_axis(), vertical_axis(), Orthogonality::Sets).unwrap();
        for _ in 0..500 {
            let x = rng.point(2, 10.0);
            assert!(sum.project(&x).unwrap().distance(&half_plane().project(&x).unwrap()) <= 1e-11);
        }
    }

    #[test]
    fn orthogonality_kinds() {
        // a translated axis is orthogonal to the other axis only through
        // differences
        let shifted = vertical_axis().translate(&pt![1, 0]);
        assert!(orthogonality_defect(&nonneg_axis(), &shifted, Orthogonality::Sets).unwrap() > 1e-9);
        assert!(orthogonality_defect(&nonneg_axis(), &shifted, Orthogonality::SetToDifferences).unwrap() <= 1e-9);
        assert!(orthogonality_defect(&shifted, &nonneg_axis(), Orthogonality::DifferencesToSet).unwrap() <= 1e-9);
        assert!(orthogonality_defect(&shifted, &nonneg_axis(), Orthogonality::Differences).unwrap() <= 1e-9);
        assert!(OrthogonalSumSet::new(nonneg_axis(), shifted.clone(), Orthogonality::SetToDifferences)
            .unwrap()
            .project(&pt![0, 0])
            .is_err());
    }

    #[test]
    fn translate_examples() {
        let s = ConvexSet::nonnegative_orthant(1);
        assert_eq!(project_translate(&s, &pt![3], &pt![0]).unwrap(), pt![3]);
        assert_eq!(project_translate(&s, &pt![0], &pt![-2]).unwrap(), pt![0]);
        let origin = ConvexSet::singleton(&pt![0]);
        assert_eq!(project_translate(&origin, &pt![7], &pt![-2]).unwrap(), pt![7]);
    }

    #[test]
    fn z_plus_k_examples() {
        let pair = orthogonal_pair();
        let (z, k) = (nonneg_axis(), vertical_axis());
        let x = pt![-1, 2];
        let tol = 1e-9;
        assert_eq!(project_z_plus_k(&pair, &z, &k, &pt![1, 0], &pt![0, 1], &x, tol).unwrap(), pt![0, 2]);
        assert_eq!(project_z_plus_k_zero_in_k(&z, &k, &pt![1, 0], &x).unwrap(), pt![0, 2]);
        assert_eq!(project_z_plus_k_zero_in_z(&z, &k, &pt![0, 1], &x).unwrap(), pt![0, 2]);
        let inside = pt![2, -3];
        assert_eq!(project_z_plus_k(&pair, &z, &k, &pt![1, 0], &pt![0, 1], &inside, tol).unwrap(), inside);
        // (1, 0) with k = (1, 0) is not in gr K
        assert!(project_z_plus_k(&pair, &z, &k, &pt![1, 0], &pt![1, 0], &x, tol).is_err());

        let fe = feasibility();
        let (zf, kf) = (interval(1.0, 2.0), ConvexSet::singleton(&pt![0]));
        assert_eq!(project_z_plus_k(&fe, &zf, &kf, &pt![1.5], &pt![0], &pt![5], tol).unwrap(), pt![2]);
    }

    #[test]
    fn formula_variants_agree() {
        let pair = orthogonal_pair();
        let (z, k) = (nonneg_axis(), vertical_axis());
        let mut rng = SampleRng::new(33);
        for _ in 0..100 {
            let x = rng.point(2, 10.0);
            let z0 = z.sample(&mut rng, 10.0);
            let k0 = k.sample(&mut rng, 10.0);
            let p2 = project_z_plus_k(&pair, &z, &k, &z0, &k0, &x, 1e-9).unwrap();
            let p3 = project_z_plus_k_zero_in_k(&z, &k, &z0, &x).unwrap();
            let p4 = project_z_plus_k_zero_in_z(&z, &k, &k0, &x).unwrap();
            let direct = half_plane().project(&x).unwrap();
            for p in [&p3, &p4, &direct] {
                assert!(p2.distance(p) <= 1e-11);
            }
        }
    }

    #[test]
    fn shadow_projection_examples() {
        let pair = orthogonal_pair();
        let (z, k) = (nonneg_axis(), vertical_axis());
        let s = shadow_projection(&pair, &z, &k, &pt![0, 0], &pt![-1, 2], 1e-9).unwrap();
        assert_eq!((s.shadow, s.predicted), (pt![0, 0], pt![0, 0]));
        let s = shadow_projection(&pair, &z, &k, &pt![0, 5], &pt![4, 0], 1e-9).unwrap();
        assert_eq!(s.shadow, pt![4, 0]);
        assert_eq!(s.residual, 0.0);

        let fe = feasibility();
        let (zf, kf) = (interval(1.0, 2.0), ConvexSet::singleton(&pt![0]));
        let s = shadow_projection(&fe, &zf, &kf, &pt![0], &pt![5], 1e-9).unwrap();
        assert_eq!(s.shadow, pt![2]);
        assert_eq!(s.predicted, pt![2]);

        let ww = DualPair::new(zoo::skew_plus_normal_cone_ww(), zoo::normal_cone_operator(&horizontal_axis()))
            .unwrap();
        assert!(matches!(
            shadow_projection(&ww, &z, &k, &pt![0, 0], &pt![1, 1], 1e-9),
            Err(Error::NotParamonotone(_))
        ));
    }

    #[test]
    fn summerland_examples() {
        let (u, v) = (interval(0.0, 2.0), interval(1.0, 3.0));
        assert_eq!(summerland_check(&u, &v, &interval(1.0, 2.0), &pt![5]).unwrap(), (pt![2], pt![2]));
        assert_eq!(summerland_check(&u, &v, &interval(1.0, 2.0), &pt![1.25]).unwrap(), (pt![1.25], pt![1.25]));
        let (p, q) = summerland_check(&horizontal_axis(), &nonneg_axis(), &half_plane(), &pt![-1, 2]).unwrap();
        assert_eq!((p, q), (pt![0, 0], pt![0, 0]));
        let halfspace = ConvexSet::halfspace(pt![1, 0], 0.0).unwrap();
        assert!(summerland_check(&halfspace, &v, &v, &pt![0]).is_err());
    }
}
