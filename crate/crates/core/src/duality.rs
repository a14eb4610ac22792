//! Dual pairs and the primal/dual solution sets.
//!
//! For a pair `(A, B)` the primal problem is `0 ∈ Az + Bz` and the dual
//! problem is `0 ∈ A⁻¹k + B^{−∨}k`. The two solution sets are linked through
//!
//! ```text
//! K_z = Az ∩ (−Bz),    Z_k = A⁻¹k ∩ (−B^{−∨}k),    k ∈ K_z ⟺ z ∈ Z_k,
//! ```
//!
//! and the Douglas–Rachford operator `T` of the pair has
//! `Fix T = {z + k : k ∈ K_z}`, the image of `gr K` under `Ψ(z, k) = z + k`.

use crate::error::{Error, Result};
use crate::operator::ResolventOperator;
use crate::point::Point;
use crate::zoo::{BoxBounds, ConvexSet, ProxFunction};

/// An ordered pair `(A, B)` together with its dual `(A⁻¹, B^{−∨})`.
#[derive(Clone, Debug)]
pub struct DualPair {
    a: ResolventOperator,
    b: ResolventOperator,
    dual_a: ResolventOperator,
    dual_b: ResolventOperator,
}

impl DualPair {
    pub fn new(a: ResolventOperator, b: ResolventOperator) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        let dual_a = a.inverse();
        let dual_b = b.neg_ovee_inverse();
        Ok(DualPair { a, b, dual_a, dual_b })
    }

    pub fn a(&self) -> &ResolventOperator {
        &self.a
    }

    pub fn b(&self) -> &ResolventOperator {
        &self.b
    }

    /// `A⁻¹`.
    pub fn dual_a(&self) -> &ResolventOperator {
        &self.dual_a
    }

    /// `B^{−∨}`.
    pub fn dual_b(&self) -> &ResolventOperator {
        &self.dual_b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Both operators carry the paramonotone flag.
    pub fn is_paramonotone(&self) -> bool {
        self.a.is_paramonotone() && self.b.is_paramonotone()
    }

    /// The dual pair `(A⁻¹, B^{−∨})` as a pair in its own right.
    pub fn dual(&self) -> DualPair {
        DualPair::new(self.dual_a.clone(), self.dual_b.clone()).expect("dual keeps dimensions")
    }

    /// `T x = J_B R_A x + x − J_A x`, the Douglas–Rachford operator.
    pub fn douglas_rachford(&self, x: &Point) -> Result<Point> {
        let ja = self.a.resolvent(x)?;
        let ra = &(&ja * 2.0) - x;
        let jb = self.b.resolvent(&ra)?;
        Ok(&(&jb + x) - &ja)
    }

    /// `‖T x − x‖`.
    pub fn dr_residual(&self, x: &Point) -> Result<f64> {
        Ok(self.douglas_rachford(x)?.distance(x))
    }
}

/// Ground-truth description of `Z` and `K` carried by a fixture.
#[derive(Clone, Debug, Default)]
pub struct SolutionDescription {
    pub z_set: Option<ConvexSet>,
    pub k_set: Option<ConvexSet>,
    pub sample_z: Vec<Point>,
    pub sample_k: Vec<Point>,
}

/// `k ∈ K_z = Az ∩ (−Bz)`.
pub fn kz_contains(pair: &DualPair, z: &Point, k: &Point, tol: f64) -> Result<bool> {
    Ok(pair.a.graph_contains(z, k, tol)? && pair.b.graph_contains(z, &-k, tol)?)
}

/// `z ∈ Z_k = A⁻¹k ∩ (−B^{−∨}k)`, decided through the dual operators.
pub fn zk_contains(pair: &DualPair, k: &Point, z: &Point, tol: f64) -> Result<bool> {
    Ok(pair.dual_a.graph_contains(k, z, tol)? && pair.dual_b.graph_contains(k, &-z, tol)?)
}

/// Outcome of a witnessed membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
    /// No witness was given, or the witness failed on a pair where that
    /// proves nothing.
    Undecidable,
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Member
    }
}

/// `z ∈ Z`, witnessed by a candidate `k ∈ K_z`.
///
/// A passing witness proves membership. A failing witness `k ∈ K` disproves
/// it only for paramonotone pairs, where `K_z = K` for every `z ∈ Z`; on
/// other pairs the answer is [`Membership::Undecidable`].
pub fn z_contains(pair: &DualPair, z: &Point, witness: Option<&Point>, tol: f64) -> Result<Membership> {
    z.ensure_dim(pair.dim())?;
    let Some(k) = witness else {
        return Ok(Membership::Undecidable);
    };
    Ok(if kz_contains(pair, z, k, tol)? {
        Membership::Member
    } else if pair.is_paramonotone() {
        Membership::NotMember
    } else {
        Membership::Undecidable
    })
}

/// `k ∈ K`, witnessed by a candidate `z ∈ Z_k`; same rules as
/// [`z_contains`] with `Z_k = Z` under paramonotonicity.
pub fn k_contains(pair: &DualPair, k: &Point, witness: Option<&Point>, tol: f64) -> Result<Membership> {
    k.ensure_dim(pair.dim())?;
    let Some(z) = witness else {
        return Ok(Membership::Undecidable);
    };
    Ok(if zk_contains(pair, k, z, tol)? {
        Membership::Member
    } else if pair.is_paramonotone() {
        Membership::NotMember
    } else {
        Membership::Undecidable
    })
}

/// `Ψ(z, k) = z + k`, mapping `gr K` onto `Fix T`.
pub fn psi(pair: &DualPair, z: &Point, k: &Point, tol: f64) -> Result<Point> {
    if !kz_contains(pair, z, k, tol)? {
        return Err(Error::Precondition(format!("({z}, {k}) is not in gr K")));
    }
    Ok(z + k)
}

/// `Ψ⁻¹(x) = (J_A x, x − J_A x)` for `x ∈ Fix T`; the parts add up to `x`
/// exactly.
pub fn psi_inverse(pair: &DualPair, x: &Point, tol: f64) -> Result<(Point, Point)> {
    let r = pair.dr_residual(x)?;
    if r > tol {
        return Err(Error::Precondition(format!(
            "{x} is not a fixed point (residual {r:e})"
        )));
    }
    pair.a.minty_param(x)
}

/// `⟨k₁ − k₂, z₁ − z₂⟩` for two members of `gr K`.
pub fn passty_orthogonality(
    pair: &DualPair,
    (z1, k1): (&Point, &Point),
    (z2, k2): (&Point, &Point),
    tol: f64,
) -> Result<f64> {
    for (z, k) in [(z1, k1), (z2, k2)] {
        if !kz_contains(pair, z, k, tol)? {
            return Err(Error::Precondition(format!("({z}, {k}) is not in gr K")));
        }
    }
    Ok((k1 - k2).dot(&(z1 - z2)))
}

/// Grid-witnessed test for `w ∈ (A □ B)x = ⋃_y Ay ∩ B(x − y)`.
///
/// `false` means no grid point witnessed the inclusion.
pub fn parallel_sum_contains(
    a: &ResolventOperator,
    b: &ResolventOperator,
    x: &Point,
    w: &Point,
    grid: &[Point],
    tol: f64,
) -> Result<bool> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("parallel-sum grid is empty".into()));
    }
    for y in grid {
        if a.graph_contains(y, w, tol)? && b.graph_contains(&(x - y), w, tol)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest number of grid points a minimization oracle will visit.
pub const MAX_GRID_POINTS: usize = 20_000_000;

/// Source of the optimal value of a minimization problem.
#[derive(Clone, Debug)]
pub enum MinimizationOracle {
    /// Dense grid of multiples of `step` inside a finite box, `dim ≤ 2`.
    Grid { bounds: BoxBounds, step: f64 },
    /// Registered closed form.
    Known { value: f64, argmin: Point },
}

impl MinimizationOracle {
    pub fn grid(bounds: BoxBounds, step: f64) -> Self {
        MinimizationOracle::Grid { bounds, step }
    }

    /// `(inf h, argmin)` where `h` is evaluated at points of the oracle.
    pub fn minimize(&self, h: impl Fn(&Point) -> Result<f64>) -> Result<(f64, Point)> {
        match self {
            MinimizationOracle::Known { value, argmin } => Ok((*value, argmin.clone())),
            MinimizationOracle::Grid { bounds, step } => {
                let axes = grid_axes(bounds, *step)?;
                let total = axes.iter().map(Vec::len).product::<usize>();
                if total > MAX_GRID_POINTS {
                    return Err(Error::Oracle(format!("grid has {total} points")));
                }
                let mut best: Option<(f64, Point)> = None;
                let mut idx = vec![0usize; axes.len()];
                loop {
                    let p = Point::raw(idx.iter().zip(&axes).map(|(&i, ax)| ax[i]).collect());
                    let v = h(&p)?;
                    if v.is_finite() && best.as_ref().is_none_or(|(b, _)| v < *b) {
                        best = Some((v, p));
                    }
                    // odometer increment over the axes
                    let mut d = 0;
                    while d < idx.len() {
                        idx[d] += 1;
                        if idx[d] < axes[d].len() {
                            break;
                        }
                        idx[d] = 0;
                        d += 1;
                    }
                    if d == idx.len() {
                        break;
                    }
                }
                best.ok_or_else(|| Error::Oracle("objective is +∞ on the whole grid".into()))
            }
        }
    }
}

/// Multiples of `step` inside each side of the box. When `1/step` is an
/// integer `m` the coordinates are computed as `i/m`, so that grid points
/// such as `1.0` are exact.
fn grid_axes(bounds: &BoxBounds, step: f64) -> Result<Vec<Vec<f64>>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid step must be positive, got {step}")));
    }
    if bounds.dim() > 2 {
        return Err(Error::InvalidArgument(format!(
            "grid oracle supports dimension ≤ 2, got {}",
            bounds.dim()
        )));
    }
    let inv = (1.0 / step).round();
    let exact = (inv * step - 1.0).abs() < 1e-12;
    let coord = |i: i64| if exact { i as f64 / inv } else { i as f64 * step };
    bounds
        .lo
        .iter()
        .zip(&bounds.hi)
        .map(|(&lo, &hi)| {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidArgument("grid box must be bounded".into()));
            }
            let first = (lo / step).ceil() as i64;
            let last = (hi / step).floor() as i64;
            Ok((first..=last).map(coord).filter(|v| *v >= lo && *v <= hi).collect())
        })
        .collect()
}

/// Primal and dual optimal values of `min f + g` and
/// `min f* + (g*)^∨`.
#[derive(Clone, Debug)]
pub struct TotalDualityReport {
    /// `μ = inf (f + g)`.
    pub primal_value: f64,
    /// `μ* = inf (f* + (g*)^∨)`.
    pub dual_value: f64,
    /// `|μ + μ*|`.
    pub gap: f64,
    pub primal_solution: Point,
    pub dual_solution: Point,
}

impl TotalDualityReport {
    pub fn has_total_duality(&self, tol: f64) -> bool {
        self.gap <= tol
    }
}

/// Evaluates both optimal values and checks weak duality `μ ≥ −μ*`.
///
/// Weak duality always holds, so a violation beyond `tol` is reported as an
/// oracle failure. Whether the gap closes is left to the caller, who knows
/// whether `Z` is nonempty.
pub fn total_duality_check(
    f: &ProxFunction,
    g: &ProxFunction,
    primal_oracle: &MinimizationOracle,
    dual_oracle: &MinimizationOracle,
    tol: f64,
) -> Result<TotalDualityReport> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    let f_star = f.conjugate();
    let g_star_v = g.conjugate().reflect();
    let (mu, z) = primal_oracle.minimize(|x| Ok(f.value(x)? + g.value(x)?))?;
    let (mu_star, k) = dual_oracle.minimize(|y| Ok(f_star.value(y)? + g_star_v.value(y)?))?;
    if mu + mu_star < -tol {
        return Err(Error::Oracle(format!(
            "weak duality violated: μ = {mu}, μ* = {mu_star}"
        )));
    }
    Ok(TotalDualityReport {
        primal_value: mu,
        dual_value: mu_star,
        gap: (mu + mu_star).abs(),
        primal_solution: z,
        dual_solution: k,
    })
}

/// The probes lying in `Z_{k0}`; for a paramonotone pair and `k0 ∈ K` this
/// set is all of `Z`. Returns an empty list when `k0 ∉ K`.
pub fn recover_z_from_dual(pair: &DualPair, k0: &Point, probes: &[Point], tol: f64) -> Result<Vec<Point>> {
    if !pair.is_paramonotone() {
        return Err(Error::NotParamonotone(format!(
            "({}, {})",
            pair.a.label(),
            pair.b.label()
        )));
    }
    let mut out = Vec::new();
    for z in probes {
        if zk_contains(pair, k0, z, tol)? {
            out.push(z.clone());
        }
    }
    Ok(out)
}
