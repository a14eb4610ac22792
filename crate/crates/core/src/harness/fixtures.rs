//! Compiled-in fixture registry.
//!
//! Each fixture is a pair `(A, B)` with a closed-form description of `Z`,
//! `K`, and `Fix T`, and a sampler for `gr K = {(z, k) : k ∈ K_z}`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::report::Measured;
use super::Suite;
use crate::duality::{kz_contains, psi_inverse, zk_contains, DualPair, SolutionDescription};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::SampleRng;
use crate::splitting::{dr_operator, iterate_dr};
use crate::zoo::{self, BoxBounds, ConvexSet, PiecewiseLinear1d, ProxFunction};
use crate::{pt, ResolventOperator};

const INF: f64 = f64::INFINITY;

/// Tolerance used when a fixture validates its own declarations.
pub const SELF_CHECK_TOL: f64 = 1e-10;

type PairSampler = Arc<dyn Fn(&mut SampleRng) -> (Point, Point) + Send + Sync>;
type ExpectationFn = Arc<dyn Fn(&Fixture, &mut SampleRng, usize) -> Result<Measured> + Send + Sync>;

#[derive(Clone)]
enum Sampler {
    Closure(PairSampler),
    Listed(Vec<(Point, Point)>),
    /// Run Douglas–Rachford from a random start and split the limit with
    /// `Ψ⁻¹`.
    DouglasRachford,
}

/// Whether `zer A ∩ zer B` is nonempty, i.e. whether `0 ∈ K`.
#[derive(Clone, Debug)]
pub enum CommonZero {
    Witness(Point),
    Absent,
    Unknown,
}

/// Data for the Fenchel suite: `A = ∂f`, `B = ∂g`, and grid boxes for the
/// primal and dual problems.
#[derive(Clone, Debug)]
pub struct FenchelData {
    pub f: ProxFunction,
    pub g: ProxFunction,
    pub primal_box: BoxBounds,
    pub dual_box: BoxBounds,
    pub step: f64,
}

/// A fixture-specific check.
#[derive(Clone)]
pub struct Expectation {
    pub name: String,
    pub suite: Suite,
    pub reference: String,
    pub tolerance: f64,
    eval: ExpectationFn,
}

impl Expectation {
    pub fn new<F>(name: &str, suite: Suite, reference: &str, tolerance: f64, eval: F) -> Self
    where
        F: Fn(&Fixture, &mut SampleRng, usize) -> Result<Measured> + Send + Sync + 'static,
    {
        Expectation {
            name: name.into(),
            suite,
            reference: reference.into(),
            tolerance,
            eval: Arc::new(eval),
        }
    }

    pub fn evaluate(&self, fixture: &Fixture, rng: &mut SampleRng, samples: usize) -> Result<Measured> {
        (self.eval)(fixture, rng, samples)
    }
}

/// A worked example: an operator pair plus ground truth.
#[derive(Clone)]
pub struct Fixture {
    pub name: String,
    pub summary: String,
    pub pair: DualPair,
    pub solutions: SolutionDescription,
    pub fix_t: Option<ConvexSet>,
    pub common_zero: CommonZero,
    /// `(U, V)` when the pair is `(N_U, N_V)`.
    pub feasibility_sets: Option<(ConvexSet, ConvexSet)>,
    pub fenchel: Option<FenchelData>,
    pub default_x0: Point,
    pub expectations: Vec<Expectation>,
    sampler: Sampler,
}

impl fmt::Debug for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fixture")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("paramonotone", &self.pair.is_paramonotone())
            .finish()
    }
}

impl Fixture {
    fn new(name: &str, summary: &str, pair: DualPair, sampler: Sampler) -> Self {
        let dim = pair.dim();
        Fixture {
            name: name.into(),
            summary: summary.into(),
            pair,
            solutions: SolutionDescription::default(),
            fix_t: None,
            common_zero: CommonZero::Unknown,
            feasibility_sets: None,
            fenchel: None,
            default_x0: Point::zeros(dim),
            expectations: Vec::new(),
            sampler,
        }
    }

    /// A user fixture: samples of `gr K` are taken from `samples` when
    /// given, otherwise from converged Douglas–Rachford runs.
    pub fn user(name: &str, summary: &str, pair: DualPair, samples: Vec<(Point, Point)>) -> Result<Self> {
        for (z, k) in &samples {
            z.ensure_dim(pair.dim())?;
            k.ensure_dim(pair.dim())?;
        }
        let sampler = if samples.is_empty() {
            Sampler::DouglasRachford
        } else {
            Sampler::Listed(samples.clone())
        };
        let mut fx = Fixture::new(name, summary, pair, sampler);
        fx.solutions.sample_z = samples.iter().map(|(z, _)| z.clone()).collect();
        fx.solutions.sample_k = samples.into_iter().map(|(_, k)| k).collect();
        Ok(fx)
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn z_set(&self) -> Option<&ConvexSet> {
        self.solutions.z_set.as_ref()
    }

    pub fn k_set(&self) -> Option<&ConvexSet> {
        self.solutions.k_set.as_ref()
    }

    /// One element of `gr K`.
    pub fn sample_pair(&self, rng: &mut SampleRng) -> Result<(Point, Point)> {
        match &self.sampler {
            Sampler::Closure(f) => Ok(f(rng)),
            Sampler::Listed(list) => Ok(list[rng.index(list.len())].clone()),
            Sampler::DouglasRachford => {
                let op = dr_operator(&self.pair);
                let x0 = rng.point(self.dim(), 10.0);
                let trace = iterate_dr(&op, &x0, 1e-12, 10_000)?;
                if !trace.converged {
                    return Err(Error::Oracle(format!(
                        "Douglas–Rachford did not converge on `{}`; is Z empty?",
                        self.name
                    )));
                }
                psi_inverse(&self.pair, trace.last(), 1e-12)
            }
        }
    }

    pub fn sample_pairs(&self, rng: &mut SampleRng, n: usize) -> Result<Vec<(Point, Point)>> {
        (0..n).map(|_| self.sample_pair(rng)).collect()
    }

    /// Checks the fixture's declarations against the membership oracles.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Error::Precondition(format!("fixture `{}`: {what}", self.name));
        if self.solutions.sample_z.len() != self.solutions.sample_k.len() {
            return Err(bad("sample_z and sample_k differ in length".into()));
        }
        let declared = self.solutions.sample_z.iter().zip(&self.solutions.sample_k);
        for (z, k) in declared {
            if !kz_contains(&self.pair, z, k, SELF_CHECK_TOL)? {
                return Err(bad(format!("declared sample ({z}, {k}) is not in gr K")));
            }
        }
        let mut rng = SampleRng::new(0x5e1f);
        for _ in 0..8 {
            let (z, k) = self.sample_pair(&mut rng)?;
            if !kz_contains(&self.pair, &z, &k, SELF_CHECK_TOL)? {
                return Err(bad(format!("sampled ({z}, {k}) is not in gr K")));
            }
            if let Some(zs) = self.z_set() {
                if zs.distance(&z)? > SELF_CHECK_TOL {
                    return Err(bad(format!("sampled z = {z} is outside the declared Z")));
                }
            }
            if let Some(ks) = self.k_set() {
                if ks.distance(&k)? > SELF_CHECK_TOL {
                    return Err(bad(format!("sampled k = {k} is outside the declared K")));
                }
            }
        }
        if let Some(fix) = &self.fix_t {
            for _ in 0..8 {
                let x = fix.sample(&mut rng, 10.0);
                let r = self.pair.dr_residual(&x)?;
                if r > SELF_CHECK_TOL {
                    return Err(bad(format!("declared fixed point {x} has residual {r:e}")));
                }
            }
        }
        if let CommonZero::Witness(w) = &self.common_zero {
            if !kz_contains(&self.pair, w, &Point::zeros(self.dim()), SELF_CHECK_TOL)? {
                return Err(bad(format!("{w} is not a common zero")));
            }
        }
        Ok(())
    }

    fn with_samples(mut self, n: usize) -> Self {
        let mut rng = SampleRng::new(0xface);
        let pairs = self.sample_pairs(&mut rng, n).expect("closed-form samplers do not fail");
        self.solutions.sample_z = pairs.iter().map(|(z, _)| z.clone()).collect();
        self.solutions.sample_k = pairs.into_iter().map(|(_, k)| k).collect();
        self
    }

    fn expect<F>(mut self, name: &str, suite: Suite, reference: &str, tol: f64, eval: F) -> Self
    where
        F: Fn(&Fixture, &mut SampleRng, usize) -> Result<Measured> + Send + Sync + 'static,
    {
        self.expectations.push(Expectation::new(name, suite, reference, tol, eval));
        self
    }
}

fn boxed(lo: &[f64], hi: &[f64]) -> ConvexSet {
    ConvexSet::boxed(lo.to_vec(), hi.to_vec()).expect("valid fixture box")
}

fn linear(rows: &[f64]) -> ResolventOperator {
    let n = (rows.len() as f64).sqrt() as usize;
    zoo::linear_operator(&DMatrix::from_row_slice(n, n, rows)).expect("monotone fixture matrix")
}

fn pair(a: ResolventOperator, b: ResolventOperator) -> DualPair {
    DualPair::new(a, b).expect("fixture dimensions agree")
}

fn closure(f: impl Fn(&mut SampleRng) -> (Point, Point) + Send + Sync + 'static) -> Sampler {
    Sampler::Closure(Arc::new(f))
}

fn bool_measure(expected: bool, actual: bool) -> Measured {
    Measured {
        expected: expected.to_string(),
        actual: actual.to_string(),
        residual: if expected == actual { 0.0 } else { 1.0 },
    }
}

fn skewskew() -> Fixture {
    let a = linear(&[0.0, 1.0, -1.0, 0.0]);
    let b = linear(&[0.0, -1.0, 1.0, 0.0]);
    let mut fx = Fixture::new(
        "skewskew",
        "rotators by -pi/2 and +pi/2; A + B = 0, so Z = K = R^2 and T = Id",
        pair(a, b),
        closure(|rng| {
            let z = rng.point(2, 10.0);
            let k = pt![z[1], -z[0]];
            (z, k)
        }),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(ConvexSet::whole(2));
    fx.solutions.k_set = Some(ConvexSet::whole(2));
    fx.fix_t = Some(ConvexSet::whole(2));
    fx.common_zero = CommonZero::Witness(pt![0, 0]);
    fx.default_x0 = pt![1, 0];
    fx.expect(
        "skewskew.t_is_identity",
        Suite::Identities,
        "sum of opposite rotators vanishes, so the Douglas-Rachford operator is the identity",
        1e-12,
        |fx, rng, n| {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let x = rng.point(2, 10.0);
                worst = worst.max(fx.pair.dr_residual(&x)?);
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    )
    .expect(
        "skewskew.dual_pair_swaps_operators",
        Suite::Duality,
        "the dual pair of two opposite rotators is the swapped pair",
        1e-12,
        |fx, rng, n| {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let x = rng.point(2, 10.0);
                let da = fx.pair.dual_a().resolvent(&x)?;
                let db = fx.pair.dual_b().resolvent(&x)?;
                worst = worst
                    .max(da.distance(&fx.pair.b().resolvent(&x)?))
                    .max(db.distance(&fx.pair.a().resolvent(&x)?));
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    )
    .expect(
        "skewskew.every_point_is_primal",
        Suite::Duality,
        "K_z = {Az} for every z",
        0.0,
        |fx, rng, n| {
            let mut failures = 0usize;
            for _ in 0..n.min(100) {
                let z = rng.point(2, 10.0);
                let az = pt![z[1], -z[0]];
                failures += !kz_contains(&fx.pair, &z, &az, 1e-9)? as usize;
            }
            Ok(Measured::count(failures))
        },
    )
}

fn normskew() -> Fixture {
    let a = zoo::normal_cone_operator(&ConvexSet::nonnegative_orthant(2));
    let b = linear(&[0.0, -1.0, 1.0, 0.0]);
    let mut fx = Fixture::new(
        "normskew",
        "normal cone of the nonnegative quadrant plus a rotator; K_z varies with z, not paramonotone",
        pair(a, b),
        closure(|rng| {
            let t = rng.uniform(0.0, 10.0);
            (pt![t, 0], pt![0, -t])
        }),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(boxed(&[0.0, 0.0], &[INF, 0.0]));
    fx.solutions.k_set = Some(boxed(&[0.0, -INF], &[0.0, 0.0]));
    fx.fix_t = Some(ConvexSet::ray(pt![0, 0], pt![1, -1]).expect("ray"));
    fx.common_zero = CommonZero::Witness(pt![0, 0]);
    fx.default_x0 = pt![3, -1];
    fx.expect(
        "normskew.ray_is_fixed",
        Suite::Duality,
        "Fix T is the image of gr K under (z, k) -> z + k",
        1e-12,
        |fx, _, _| {
            let mut worst = 0.0f64;
            for t in [0.0, 0.5, 1.0, 2.0, 10.0] {
                let x = pt![t, -t];
                worst = worst.max(fx.pair.dr_residual(&x)?);
                let (z, k) = psi_inverse(&fx.pair, &x, 1e-12)?;
                worst = worst.max(z.distance(&pt![t, 0])).max(k.distance(&pt![0, -t]));
                if !kz_contains(&fx.pair, &z, &k, 1e-9)? {
                    worst = worst.max(1.0);
                }
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    )
    .expect(
        "normskew.rectangle_counterexample",
        Suite::Duality,
        "without paramonotonicity gr K need not be the rectangle Z x K",
        0.0,
        |fx, _, _| {
            let actual = kz_contains(&fx.pair, &pt![1, 0], &pt![0, -2], 1e-9)?;
            Ok(bool_measure(false, actual))
        },
    )
}

fn feasibility_1d() -> Fixture {
    let (u, v) = (boxed(&[0.0], &[2.0]), boxed(&[1.0], &[3.0]));
    let p = pair(zoo::normal_cone_operator(&u), zoo::normal_cone_operator(&v));
    let mut fx = Fixture::new(
        "feasibility-1d",
        "normal cones of U = [0, 2] and V = [1, 3]; Z = U n V = [1, 2], K = {0}",
        p,
        closure(|rng| (pt![rng.uniform(1.0, 2.0)], pt![0])),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(boxed(&[1.0], &[2.0]));
    fx.solutions.k_set = Some(ConvexSet::singleton(&pt![0]));
    fx.fix_t = Some(boxed(&[1.0], &[2.0]));
    fx.common_zero = CommonZero::Witness(pt![1.5]);
    fx.feasibility_sets = Some((u, v));
    fx.fenchel = Some(FenchelData {
        f: ProxFunction::BoxIndicator(BoxBounds::new(vec![0.0], vec![2.0]).expect("box")),
        g: ProxFunction::BoxIndicator(BoxBounds::new(vec![1.0], vec![3.0]).expect("box")),
        primal_box: BoxBounds::new(vec![-3.0], vec![5.0]).expect("box"),
        dual_box: BoxBounds::new(vec![-3.0], vec![3.0]).expect("box"),
        step: 1e-3,
    });
    fx.default_x0 = pt![5];
    fx.expect(
        "feasibility-1d.dr_step",
        Suite::Identities,
        "T(5) = 5 - P_U(5) + P_V(2 P_U(5) - 5)",
        0.0,
        |fx, _, _| {
            let t = fx.pair.douglas_rachford(&pt![5])?;
            Ok(Measured::scalar(4.0, t[0], (t[0] - 4.0).abs()))
        },
    )
}

fn ww_nested() -> Fixture {
    let line = boxed(&[-INF, 0.0], &[INF, 0.0]);
    let p = pair(zoo::skew_plus_normal_cone_ww(), zoo::normal_cone_operator(&line));
    let mut fx = Fixture::new(
        "ww-nested",
        "N_{R x R+} + rotator against N_{R x {0}}; K_(xi,0) = {0} x (-inf, xi] grows with xi",
        p,
        closure(|rng| {
            let xi = rng.uniform(-10.0, 10.0);
            let s = xi - rng.uniform(0.0, 10.0);
            (pt![xi, 0], pt![0, s])
        }),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(line);
    fx.solutions.k_set = Some(boxed(&[0.0, -INF], &[0.0, INF]));
    fx.fix_t = Some(ConvexSet::halfspace(pt![-1, 1], 0.0).expect("halfspace"));
    fx.common_zero = CommonZero::Witness(pt![0, 0]);
    fx.default_x0 = pt![1, 3];
    fx.expect(
        "ww-nested.larger_xi_admits_k",
        Suite::Duality,
        "(0, 0.5) lies in K_(2,0) = {0} x (-inf, 2]",
        0.0,
        |fx, _, _| Ok(bool_measure(true, kz_contains(&fx.pair, &pt![2, 0], &pt![0, 0.5], 1e-9)?)),
    )
    .expect(
        "ww-nested.smaller_xi_rejects_k",
        Suite::Duality,
        "(0, 1.5) is outside K_(1,0) = {0} x (-inf, 1]",
        0.0,
        |fx, _, _| Ok(bool_measure(false, kz_contains(&fx.pair, &pt![1, 0], &pt![0, 1.5], 1e-9)?)),
    )
    .expect(
        "ww-nested.strict_nesting",
        Suite::Duality,
        "K_(xi,0) is a proper subset of K_(eta,0) whenever xi < eta",
        0.0,
        |fx, rng, n| {
            let mut failures = 0usize;
            for _ in 0..n.min(200) {
                let xi = rng.uniform(-10.0, 10.0);
                let eta = xi + rng.uniform(0.01, 5.0);
                let s_in = xi - rng.uniform(0.0, 5.0);
                let s_gap = 0.5 * (xi + eta);
                let nested = kz_contains(&fx.pair, &pt![xi, 0], &pt![0, s_in], 1e-9)?
                    && kz_contains(&fx.pair, &pt![eta, 0], &pt![0, s_in], 1e-9)?;
                let strict = kz_contains(&fx.pair, &pt![eta, 0], &pt![0, s_gap], 1e-9)?
                    && !kz_contains(&fx.pair, &pt![xi, 0], &pt![0, s_gap], 1e-9)?;
                failures += !(nested && strict) as usize;
            }
            Ok(Measured::count(failures))
        },
    )
}

fn orthogonal_2d() -> Fixture {
    let line = boxed(&[-INF, 0.0], &[INF, 0.0]);
    let ray = boxed(&[0.0, 0.0], &[INF, 0.0]);
    let p = pair(zoo::normal_cone_operator(&line), zoo::normal_cone_operator(&ray));
    let mut fx = Fixture::new(
        "orthogonal-2d",
        "normal cones of U = R x {0} and V = R+ x {0}; Z = R+ x {0}, K = {0} x R",
        p,
        closure(|rng| (pt![rng.uniform(0.0, 10.0), 0], pt![0, rng.uniform(-10.0, 10.0)])),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(ray.clone());
    fx.solutions.k_set = Some(boxed(&[0.0, -INF], &[0.0, INF]));
    fx.fix_t = Some(boxed(&[0.0, -INF], &[INF, INF]));
    fx.common_zero = CommonZero::Witness(pt![1, 0]);
    fx.feasibility_sets = Some((line, ray));
    fx.default_x0 = pt![-1, 2];
    fx
}

fn hinge() -> Fixture {
    let f = ProxFunction::PiecewiseLinear(PiecewiseLinear1d::hinge_right(1.0));
    let g = ProxFunction::PiecewiseLinear(PiecewiseLinear1d::hinge_left(-1.0));
    let p = pair(zoo::prox_operator(&f), zoo::prox_operator(&g));
    let mut fx = Fixture::new(
        "hinge",
        "subdifferentials of max(0, x - 1) and max(0, -x - 1); Z = [-1, 1], K = {0}",
        p,
        closure(|rng| (pt![rng.uniform(-1.0, 1.0)], pt![0])),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(boxed(&[-1.0], &[1.0]));
    fx.solutions.k_set = Some(ConvexSet::singleton(&pt![0]));
    fx.fix_t = Some(boxed(&[-1.0], &[1.0]));
    fx.common_zero = CommonZero::Witness(pt![0]);
    fx.fenchel = Some(FenchelData {
        f,
        g,
        primal_box: BoxBounds::new(vec![-3.0], vec![3.0]).expect("box"),
        dual_box: BoxBounds::new(vec![-3.0], vec![3.0]).expect("box"),
        step: 1e-3,
    });
    fx.default_x0 = pt![4];
    fx
}

fn constant_pair() -> Fixture {
    let u = pt![1, 0];
    let p = pair(zoo::constant_operator(&u), zoo::constant_operator(&-&u));
    let mut fx = Fixture::new(
        "constant-pair",
        "A = u and B = -u constant; Z = R^2, K = {u}, T = Id, no common zero",
        p,
        closure(|rng| (rng.point(2, 10.0), pt![1, 0])),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(ConvexSet::whole(2));
    fx.solutions.k_set = Some(ConvexSet::singleton(&u));
    fx.fix_t = Some(ConvexSet::whole(2));
    fx.common_zero = CommonZero::Absent;
    fx.default_x0 = pt![2, 3];
    fx.expect(
        "constant-pair.only_k_is_u",
        Suite::Duality,
        "K_z = {u} for every z",
        0.0,
        |fx, rng, n| {
            let mut failures = 0usize;
            for _ in 0..n.min(100) {
                let z = rng.point(2, 10.0);
                let k = rng.point(2, 10.0);
                failures += !kz_contains(&fx.pair, &z, &pt![1, 0], 1e-9)? as usize;
                failures += kz_contains(&fx.pair, &z, &k, 1e-9)? as usize;
            }
            Ok(Measured::count(failures))
        },
    )
}

fn lcl_composed() -> Fixture {
    let line = boxed(&[-INF, 0.0], &[INF, 0.0]);
    let c = zoo::normal_cone_operator(&ConvexSet::nonnegative_orthant(1));
    let l = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
    let b = zoo::composed_lcl(&c, &l).expect("L Lᵀ = 2");
    let p = pair(zoo::normal_cone_operator(&line), b);
    let mut fx = Fixture::new(
        "lcl-composed",
        "N_{R x {0}} against L*CL with L = [1 1], C = N_{R+}; Z = R+ x {0}, K = {0}",
        p,
        closure(|rng| (pt![rng.uniform(0.0, 10.0), 0], pt![0, 0])),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(boxed(&[0.0, 0.0], &[INF, 0.0]));
    fx.solutions.k_set = Some(ConvexSet::singleton(&pt![0, 0]));
    fx.fix_t = Some(boxed(&[0.0, 0.0], &[INF, 0.0]));
    fx.common_zero = CommonZero::Witness(pt![1, 0]);
    fx.default_x0 = pt![-2, 3];
    fx.expect(
        "lcl-composed.matches_halfspace_projection",
        Suite::Identities,
        "L*CL with C a normal cone is the normal cone of the preimage {x1 + x2 >= 0}",
        1e-12,
        |fx, rng, n| {
            let h = ConvexSet::halfspace(pt![-1, -1], 0.0)?;
            let mut worst = 0.0f64;
            for _ in 0..n {
                let x = rng.point(2, 10.0);
                worst = worst.max(fx.pair.b().resolvent(&x)?.distance(&h.project(&x)?));
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    )
    .expect(
        "lcl-composed.flag_inherited",
        Suite::Identities,
        "paramonotonicity of C passes to L*CL",
        0.0,
        |fx, _, _| Ok(bool_measure(true, fx.pair.b().is_paramonotone())),
    )
}

fn inconsistent_origin() -> Fixture {
    let u = boxed(&[1.0], &[INF]);
    let primal = pair(zoo::normal_cone_operator(&u), zoo::normal_cone_operator(&u));
    let mut fx = Fixture::new(
        "inconsistent-origin",
        "dual of the feasibility pair for U = V = [1, inf): U - V = R, Z = {0}, K = [1, inf)",
        primal.dual(),
        closure(|rng| (pt![0], pt![rng.uniform(1.0, 11.0)])),
    )
    .with_samples(8);
    fx.solutions.z_set = Some(ConvexSet::singleton(&pt![0]));
    fx.solutions.k_set = Some(u.clone());
    fx.fix_t = Some(u);
    fx.common_zero = CommonZero::Absent;
    fx.default_x0 = pt![-3];
    fx.expect(
        "inconsistent-origin.dual_recovers_primal",
        Suite::Duality,
        "Z of the dual pair is K of the primal pair and vice versa",
        0.0,
        |fx, rng, n| {
            let mut failures = 0usize;
            for _ in 0..n.min(100) {
                let k = pt![rng.uniform(1.0, 11.0)];
                let not_k = pt![rng.uniform(-10.0, 0.99)];
                failures += !zk_contains(&fx.pair, &k, &pt![0], 1e-9)? as usize;
                failures += zk_contains(&fx.pair, &not_k, &pt![0], 1e-9)? as usize;
            }
            Ok(Measured::count(failures))
        },
    )
}

/// All compiled-in fixtures, in registry order.
pub fn builtin_fixtures() -> Vec<Fixture> {
    vec![
        skewskew(),
        normskew(),
        feasibility_1d(),
        ww_nested(),
        orthogonal_2d(),
        hinge(),
        constant_pair(),
        lcl_composed(),
        inconsistent_origin(),
    ]
}

/// Builtins plus user fixtures; a user fixture replaces a builtin of the
/// same name.
#[derive(Clone, Debug)]
pub struct Registry {
    fixtures: Vec<Fixture>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry {
            fixtures: builtin_fixtures(),
        }
    }
}

impl Registry {
    pub fn add(&mut self, fixture: Fixture) {
        self.fixtures.retain(|f| f.name != fixture.name);
        self.fixtures.push(fixture);
    }

    pub fn get(&self, name: &str) -> Result<&Fixture> {
        self.fixtures
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFixture(name.to_string()))
    }

    pub fn fixtures(&self) -> &[Fixture] {
        &self.fixtures
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_contents() {
        let reg = Registry::default();
        let names: Vec<&str> = reg.fixtures().iter().map(|f| f.name.as_str()).collect();
        for n in [
            "skewskew",
            "normskew",
            "feasibility-1d",
            "ww-nested",
            "orthogonal-2d",
            "hinge",
            "constant-pair",
            "lcl-composed",
        ] {
            assert!(names.contains(&n), "{n}");
        }
        assert!(names.len() >= 8);
        assert!(matches!(reg.get("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn every_builtin_validates() {
        for fx in builtin_fixtures() {
            fx.validate().unwrap_or_else(|e| panic!("{}: {e}", fx.name));
        }
    }

    #[test]
    fn paramonotone_flags() {
        let reg = Registry::default();
        let flag = |n: &str| reg.get(n).unwrap().pair.is_paramonotone();
        assert!(!flag("skewskew"));
        assert!(!flag("normskew"));
        assert!(!flag("ww-nested"));
        for n in ["feasibility-1d", "orthogonal-2d", "hinge", "constant-pair", "lcl-composed", "inconsistent-origin"] {
            assert!(flag(n), "{n}");
        }
    }

    #[test]
    fn dr_sampler_recovers_gr_k() {
        let base = Registry::default().get("feasibility-1d").unwrap().clone();
        let fx = Fixture::user("copy", "", base.pair.clone(), Vec::new()).unwrap();
        let mut rng = SampleRng::new(4);
        for _ in 0..20 {
            let (z, k) = fx.sample_pair(&mut rng).unwrap();
            assert!(kz_contains(&fx.pair, &z, &k, 1e-9).unwrap());
            assert!((1.0..=2.0).contains(&z[0]));
        }
    }
}
