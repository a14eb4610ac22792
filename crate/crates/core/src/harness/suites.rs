//! The five verification suites.
//!
//! Every check draws from its own generator, seeded from the run seed and
//! the check name, so adding or reordering checks leaves the others intact.

use super::fixtures::{CommonZero, Fixture};
use super::report::{Check, CheckMode, Measured, Report};
use super::Suite;
use crate::bestapprox::{
    orthogonality_defect, project_z_plus_k, project_z_plus_k_zero_in_k, project_z_plus_k_zero_in_z,
    shadow_projection, summerland_check, Orthogonality, ORTHOGONALITY_TOL,
};
use crate::duality::{
    k_contains, kz_contains, psi, psi_inverse, recover_z_from_dual, total_duality_check, zk_contains,
    Membership, MinimizationOracle,
};
use crate::error::{Error, Result};
use crate::operator::{ResolventOperator, DEFAULT_GRAPH_TOL};
use crate::point::Point;
use crate::rng::{SampleRng, DEFAULT_SAMPLE_RADIUS};
use crate::splitting::{dr_operator, iterate_dr, pr_operator};

const R: f64 = DEFAULT_SAMPLE_RADIUS;

/// Cap on sampled `gr K` pairs; pairwise checks are quadratic in it.
const MAX_PAIRS: usize = 200;

fn name_hash(name: &str) -> u64 {
    // FNV-1a
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

struct Ctx<'a> {
    fx: &'a Fixture,
    seed: u64,
    samples: usize,
    checks: Vec<Check>,
}

impl<'a> Ctx<'a> {
    fn rng(&self, name: &str) -> SampleRng {
        SampleRng::new(self.seed ^ name_hash(name))
    }

    fn check<F>(&mut self, name: &str, tol: f64, reference: &str, f: F)
    where
        F: FnOnce(&Fixture, &mut SampleRng, usize) -> Result<Measured>,
    {
        self.check_mode(name, tol, CheckMode::Normal, reference, f)
    }

    fn check_mode<F>(&mut self, name: &str, tol: f64, mode: CheckMode, reference: &str, f: F)
    where
        F: FnOnce(&Fixture, &mut SampleRng, usize) -> Result<Measured>,
    {
        let mut rng = self.rng(name);
        let check = match f(self.fx, &mut rng, self.samples) {
            Ok(m) => Check::new(name, m, tol, mode, reference),
            Err(e) => Check::errored(name, &e, reference),
        };
        self.checks.push(check);
    }

    fn expectations(&mut self, suite: Suite) {
        for e in self.fx.expectations.iter().filter(|e| e.suite == suite) {
            let mut rng = self.rng(&e.name);
            let check = match e.evaluate(self.fx, &mut rng, self.samples) {
                Ok(m) => Check::new(&e.name, m, e.tolerance, CheckMode::Normal, &e.reference),
                Err(err) => Check::errored(&e.name, &err, &e.reference),
            };
            self.checks.push(check);
        }
    }
}

fn max_over<F>(rng: &mut SampleRng, dim: usize, n: usize, mut f: F) -> Result<Measured>
where
    F: FnMut(&Point) -> Result<f64>,
{
    let mut worst = 0.0f64;
    for _ in 0..n {
        let x = rng.point(dim, R);
        let v = f(&x)?;
        // NaN must not be swallowed by max
        worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
    }
    Ok(Measured::scalar(0.0, worst, worst))
}

fn not_applicable(fx: &Fixture, suite: Suite, reason: &str) -> Error {
    Error::SuiteNotApplicable {
        suite: suite.name().into(),
        fixture: fx.name.clone(),
        reason: reason.into(),
    }
}

/// Runs one suite on one fixture. Deterministic for a fixed seed.
pub fn run_suite(fx: &Fixture, suite: Suite, samples: usize, seed: u64) -> Result<Report> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let mut ctx = Ctx {
        fx,
        seed,
        samples,
        checks: Vec::new(),
    };
    match suite {
        Suite::Identities => identities(&mut ctx),
        Suite::Duality => duality(&mut ctx),
        Suite::Paramonotone => paramonotone(&mut ctx),
        Suite::Projections => projections(&mut ctx)?,
        Suite::Fenchel => fenchel(&mut ctx)?,
    }
    ctx.expectations(suite);
    Ok(Report::new(&fx.name, suite.name(), seed, samples, ctx.checks))
}

fn operator_identities(ctx: &mut Ctx<'_>, tag: &str, op: &ResolventOperator) {
    let d = op.dim();
    let inv = op.inverse();
    let ovee = op.ovee();
    let nov = op.neg_ovee_inverse();
    ctx.check(
        &format!("{tag}.inverse_resolvent_sum"),
        1e-11,
        "inverse resolvent identity J_A + J_{A^-1} = Id",
        |_, rng, n| max_over(rng, d, n, |x| Ok((&op.resolvent(x)? + &inv.resolvent(x)?).distance(x))),
    );
    ctx.check(
        &format!("{tag}.inverse_reflection"),
        1e-11,
        "reflected resolvent of the inverse R_{A^-1} = -R_A",
        |_, rng, n| {
            max_over(rng, d, n, |x| Ok((&inv.reflected_resolvent(x)? + &op.reflected_resolvent(x)?).norm()))
        },
    );
    ctx.check(
        &format!("{tag}.ovee_resolvent"),
        1e-11,
        "resolvent of the reflected operator J_{A^v} = -J_A(-Id)",
        |_, rng, n| max_over(rng, d, n, |x| Ok((&ovee.resolvent(x)? + &op.resolvent(&-x)?).norm())),
    );
    ctx.check(
        &format!("{tag}.neg_ovee_reflection"),
        1e-11,
        "R_{A^{-v}} = Id - 2(-J_A(-Id))",
        |_, rng, n| {
            max_over(rng, d, n, |x| {
                let expected = x + &(&op.resolvent(&-x)? * 2.0);
                Ok(nov.reflected_resolvent(x)?.distance(&expected))
            })
        },
    );
    ctx.check(
        &format!("{tag}.minty_parametrization"),
        1e-12,
        "Minty parametrization x -> (J_A x, x - J_A x) onto gr A",
        |_, rng, n| {
            max_over(rng, d, n, |x| {
                let (a, a_star) = op.minty_param(x)?;
                let in_graph = op.graph_contains(&a, &a_star, DEFAULT_GRAPH_TOL)?;
                Ok(if in_graph { (&a + &a_star).distance(x) } else { f64::INFINITY })
            })
        },
    );
    ctx.check(
        &format!("{tag}.firm_nonexpansiveness"),
        1e-10,
        "resolvents of maximally monotone operators are firmly nonexpansive",
        |_, rng, n| {
            let defect = op.firm_nonexpansiveness_defect(rng, n, R).max(0.0);
            Ok(Measured::scalar(0.0, defect, defect))
        },
    );
}

fn identities(ctx: &mut Ctx<'_>) {
    let pair = ctx.fx.pair.clone();
    let d = pair.dim();
    operator_identities(ctx, "a", pair.a());
    operator_identities(ctx, "b", pair.b());
    ctx.check("biduality", 1e-12, "the dual of the dual pair is the pair", |fx, rng, n| {
        let dd = fx.pair.dual().dual();
        max_over(rng, d, n, |x| {
            Ok(dd.a().resolvent(x)?.distance(&fx.pair.a().resolvent(x)?)
                .max(dd.b().resolvent(x)?.distance(&fx.pair.b().resolvent(x)?)))
        })
    });
    ctx.check(
        "dr_formula_equivalence",
        1e-12,
        "Douglas-Rachford operator: (Id + R_B R_A)/2 = J_B R_A + Id - J_A",
        |fx, rng, n| {
            let pr = pr_operator(&fx.pair);
            max_over(rng, d, n, |x| {
                let half = x.lerp(&pr.apply(x)?, 0.5);
                Ok(half.distance(&fx.pair.douglas_rachford(x)?))
            })
        },
    );
    ctx.check(
        "dr_self_duality",
        1e-11,
        "self-duality of the Douglas-Rachford operator",
        |fx, rng, n| {
            let dual = fx.pair.dual();
            max_over(rng, d, n, |x| Ok(fx.pair.douglas_rachford(x)?.distance(&dual.douglas_rachford(x)?)))
        },
    );
    ctx.check(
        "pr_self_duality",
        1e-11,
        "self-duality of the Peaceman-Rachford operator R_B R_A",
        |fx, rng, n| {
            let pr = pr_operator(&fx.pair);
            let dual = pr.on_dual();
            max_over(rng, d, n, |x| Ok(pr.apply(x)?.distance(&dual.apply(x)?)))
        },
    );
    ctx.check(
        "dr_firm_nonexpansiveness",
        1e-10,
        "the Douglas-Rachford operator is firmly nonexpansive",
        |fx, rng, n| {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let (x, y) = (rng.point(d, R), rng.point(d, R));
                let diff = &fx.pair.douglas_rachford(&x)? - &fx.pair.douglas_rachford(&y)?;
                worst = worst.max(diff.norm_squared() - (&x - &y).dot(&diff));
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
}

/// Largest deviation of `z + k` from `x`, in units of one rounding of the
/// larger summand.
fn round_trip_ulps(z: &Point, k: &Point, x: &Point) -> f64 {
    let back = z + k;
    (0..x.dim())
        .map(|i| {
            let err = (back[i] - x[i]).abs();
            if err == 0.0 {
                0.0
            } else {
                err / (f64::EPSILON * z[i].abs().max(k[i].abs()).max(f64::MIN_POSITIVE))
            }
        })
        .fold(0.0, f64::max)
}

fn duality(ctx: &mut Ctx<'_>) {
    let tol = DEFAULT_GRAPH_TOL;
    let m = |n: usize| n.min(MAX_PAIRS);
    ctx.check(
        "gr_k.samples_are_members",
        0.0,
        "k in K_z = Az n (-Bz) for the fixture's solution samples",
        |fx, rng, n| {
            let mut failures = 0;
            for (z, k) in fx.sample_pairs(rng, m(n))? {
                failures += !kz_contains(&fx.pair, &z, &k, tol)? as usize;
                if let Some(zs) = fx.z_set() {
                    failures += (zs.distance(&z)? > tol) as usize;
                }
                if let Some(ks) = fx.k_set() {
                    failures += (ks.distance(&k)? > tol) as usize;
                }
            }
            Ok(Measured::count(failures))
        },
    );
    ctx.check(
        "kz_zk_equivalence",
        0.0,
        "k in K_z iff z in Z_k",
        |fx, rng, n| {
            let d = fx.dim();
            let mut failures = 0;
            for (z, k) in fx.sample_pairs(rng, m(n))? {
                let dz = rng.point(d, 1.0);
                let dk = rng.point(d, 1.0);
                for (zz, kk) in [(z.clone(), k.clone()), (&z + &dz, k.clone()), (z, &k + &dk)] {
                    failures += (kz_contains(&fx.pair, &zz, &kk, tol)? != zk_contains(&fx.pair, &kk, &zz, tol)?)
                        as usize;
                }
            }
            Ok(Measured::count(failures))
        },
    );
    ctx.check(
        "psi.image_is_fixed",
        1e-10,
        "(z, k) -> z + k maps gr K into Fix T",
        |fx, rng, n| {
            let mut worst = 0.0f64;
            for (z, k) in fx.sample_pairs(rng, m(n))? {
                let x = psi(&fx.pair, &z, &k, tol)?;
                worst = worst.max(fx.pair.dr_residual(&x)?);
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    ctx.check(
        "psi.round_trip_ulps",
        1.0,
        "psi o psi^-1 = Id on Fix T, up to one rounding of z + k",
        |fx, rng, n| {
            let mut worst = 0.0f64;
            for (z, k) in fx.sample_pairs(rng, m(n))? {
                let x = &z + &k;
                let (z2, k2) = psi_inverse(&fx.pair, &x, 1e-10)?;
                if !kz_contains(&fx.pair, &z2, &k2, tol)? {
                    return Err(Error::Oracle(format!("psi^-1({x}) left gr K")));
                }
                worst = worst.max(round_trip_ulps(&z2, &k2, &x));
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    ctx.check(
        "psi.inverse_of_image",
        1e-10,
        "psi^-1 o psi = Id on gr K",
        |fx, rng, n| {
            let mut worst = 0.0f64;
            for (z, k) in fx.sample_pairs(rng, m(n))? {
                let (z2, k2) = psi_inverse(&fx.pair, &psi(&fx.pair, &z, &k, tol)?, 1e-10)?;
                worst = worst.max(z2.distance(&z)).max(k2.distance(&k));
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    ctx.check(
        "graph_convexity",
        0.0,
        "gr K is convex",
        |fx, rng, n| {
            let pairs = fx.sample_pairs(rng, m(n))?;
            let mut failures = 0;
            for w in pairs.windows(2) {
                let ((z1, k1), (z2, k2)) = (&w[0], &w[1]);
                for t in [0.25, 0.5, 0.75] {
                    failures += !kz_contains(&fx.pair, &z1.lerp(z2, t), &k1.lerp(k2, t), 1e-8)? as usize;
                }
            }
            Ok(Measured::count(failures))
        },
    );
    ctx.check(
        "passty_orthogonality",
        1e-10,
        "<k1 - k2, z1 - z2> = 0 on gr K",
        |fx, rng, n| {
            let pairs = fx.sample_pairs(rng, m(n))?;
            let mut worst = 0.0f64;
            for (i, (z1, k1)) in pairs.iter().enumerate() {
                for (z2, k2) in &pairs[i + 1..] {
                    worst = worst.max((k1 - k2).dot(&(z1 - z2)).abs());
                }
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    ctx.check(
        "dr_limits_split_into_gr_k",
        0.0,
        "J_A maps Fix T onto Z; psi^-1 of a Douglas-Rachford limit lies in gr K",
        |fx, rng, n| {
            let op = dr_operator(&fx.pair);
            let mut failures = 0;
            for _ in 0..n.min(20) {
                let trace = iterate_dr(&op, &rng.point(fx.dim(), R), 1e-11, 10_000)?;
                if !trace.converged {
                    failures += 1;
                    continue;
                }
                let (z, k) = psi_inverse(&fx.pair, trace.last(), 1e-10)?;
                failures += !kz_contains(&fx.pair, &z, &k, tol)? as usize;
                if let Some(zs) = fx.z_set() {
                    failures += (zs.distance(&z)? > 1e-8) as usize;
                }
            }
            Ok(Measured::count(failures))
        },
    );
    ctx.check(
        "fejer_monotonicity",
        1e-10,
        "Douglas-Rachford iterates are Fejer monotone with respect to Fix T",
        |fx, rng, n| {
            let op = dr_operator(&fx.pair);
            let mut worst = 0.0f64;
            for _ in 0..n.min(20) {
                let trace = iterate_dr(&op, &rng.point(fx.dim(), R), 1e-11, 2_000)?;
                let (z, k) = fx.sample_pair(rng)?;
                worst = worst.max(trace.fejer_defect(&(&z + &k)));
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    ctx.check(
        "declared_fix_t_is_fixed",
        1e-10,
        "declared Fix T points are fixed by T",
        |fx, rng, n| match &fx.fix_t {
            Some(fix) => {
                let mut worst = 0.0f64;
                for _ in 0..n.min(MAX_PAIRS) {
                    worst = worst.max(fx.pair.dr_residual(&fix.sample(rng, R))?);
                }
                Ok(Measured::scalar(0.0, worst, worst))
            }
            None => Ok(Measured {
                expected: "declared Fix T".into(),
                actual: "none declared".into(),
                residual: 0.0,
            }),
        },
    );
    ctx.check(
        "common_zero",
        0.0,
        "zer A n zer B is nonempty iff 0 lies in K",
        |fx, _, _| {
            let zero = Point::zeros(fx.dim());
            match &fx.common_zero {
                CommonZero::Witness(w) => {
                    let got = k_contains(&fx.pair, &zero, Some(w), tol)?;
                    Ok(Measured {
                        expected: "0 in K".into(),
                        actual: format!("{got:?}"),
                        residual: (got != Membership::Member) as u8 as f64,
                    })
                }
                CommonZero::Absent => {
                    let inside = match fx.k_set() {
                        Some(ks) => ks.distance(&zero)? <= tol,
                        None => false,
                    };
                    Ok(Measured {
                        expected: "0 not in K".into(),
                        actual: if inside { "0 in declared K" } else { "0 not in declared K" }.into(),
                        residual: inside as u8 as f64,
                    })
                }
                CommonZero::Unknown => Ok(Measured {
                    expected: "ground truth".into(),
                    actual: "not declared".into(),
                    residual: 0.0,
                }),
            }
        },
    );
}

fn paramonotone(ctx: &mut Ctx<'_>) {
    let tol = DEFAULT_GRAPH_TOL;
    let m = |n: usize| n.min(100);
    if !ctx.fx.pair.is_paramonotone() {
        ctx.check_mode(
            "rectangle",
            0.0,
            CheckMode::ExpectedFailure,
            "without paramonotonicity gr K need not be the rectangle Z x K",
            |fx, rng, n| {
                let pairs = fx.sample_pairs(rng, m(n).max(2))?;
                let mut failing = 0usize;
                for (z, _) in &pairs {
                    for (_, k) in &pairs {
                        failing += !kz_contains(&fx.pair, z, k, tol)? as usize;
                    }
                }
                Ok(Measured {
                    expected: "some cross pair (z_i, k_j) outside gr K".into(),
                    actual: format!("{failing} of {} cross pairs outside gr K", pairs.len() * pairs.len()),
                    residual: (failing == 0) as u8 as f64,
                })
            },
        );
        return;
    }
    ctx.check(
        "rectangle",
        0.0,
        "for paramonotone pairs gr K is the rectangle Z x K",
        |fx, rng, n| {
            let pairs = fx.sample_pairs(rng, m(n))?;
            let mut failures = 0;
            for (z, _) in &pairs {
                for (_, k) in &pairs {
                    failures += !kz_contains(&fx.pair, z, k, tol)? as usize;
                }
            }
            Ok(Measured::count(failures))
        },
    );
    ctx.check(
        "orthogonal_differences",
        1e-10,
        "(Z - Z) is orthogonal to (K - K) for paramonotone pairs",
        |fx, rng, n| {
            let pairs = fx.sample_pairs(rng, m(n))?;
            let k_shift: Vec<&Point> = pairs.iter().map(|(_, k)| k).cycle().skip(1).take(pairs.len()).collect();
            let mut worst = 0.0f64;
            for i in 0..pairs.len() {
                for j in i + 1..pairs.len() {
                    let dz = &pairs[i].0 - &pairs[j].0;
                    let dk = k_shift[i] - k_shift[j];
                    worst = worst.max(dz.dot(&dk).abs());
                }
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    ctx.check(
        "fix_t_is_z_plus_k",
        1e-10,
        "Fix T = Z + K for paramonotone pairs",
        |fx, rng, n| {
            let pairs = fx.sample_pairs(rng, m(n).min(50))?;
            let mut worst = 0.0f64;
            for (z, _) in &pairs {
                for (_, k) in &pairs {
                    worst = worst.max(fx.pair.dr_residual(&(z + k))?);
                }
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    ctx.check(
        "dual_recovers_z",
        0.0,
        "Z_k = Z for every k in K: one dual solution recovers all primal solutions",
        |fx, rng, n| {
            let pairs = fx.sample_pairs(rng, m(n))?;
            let k0 = pairs[0].1.clone();
            let mut probes: Vec<Point> = pairs.iter().map(|(z, _)| z.clone()).collect();
            probes.extend((0..pairs.len()).map(|_| rng.point(fx.dim(), R)));
            let recovered = recover_z_from_dual(&fx.pair, &k0, &probes, tol)?;
            let mut failures = 0;
            for (i, p) in probes.iter().enumerate() {
                let found = recovered.contains(p);
                let truth = match fx.z_set() {
                    Some(zs) => zs.distance(p)? <= tol,
                    None if i < pairs.len() => true,
                    None => continue,
                };
                failures += (found != truth) as usize;
            }
            Ok(Measured::count(failures))
        },
    );
}

fn projections(ctx: &mut Ctx<'_>) -> Result<()> {
    let fx = ctx.fx;
    if !fx.pair.is_paramonotone() {
        return Err(not_applicable(fx, Suite::Projections, "the projection formulas need a paramonotone pair"));
    }
    let (Some(zs), Some(ks)) = (fx.z_set().cloned(), fx.k_set().cloned()) else {
        return Err(not_applicable(fx, Suite::Projections, "Z and K are not declared"));
    };
    let tol = DEFAULT_GRAPH_TOL;
    let d = fx.dim();
    if let Some(fix) = fx.fix_t.clone() {
        ctx.check(
            "z_plus_k.formula_vs_fix_t",
            1e-11,
            "P_{Z+K}(x) = P_Z(x - k0) + P_K(x - z0), compared with the declared Fix T = Z + K",
            |fx, rng, n| {
                let mut worst = 0.0f64;
                for _ in 0..n {
                    let x = rng.point(d, R);
                    let (z0, k0) = fx.sample_pair(rng)?;
                    let p = project_z_plus_k(&fx.pair, &zs, &ks, &z0, &k0, &x, tol)?;
                    worst = worst.max(p.distance(&fix.project(&x)?));
                }
                Ok(Measured::scalar(0.0, worst, worst))
            },
        );
        ctx.check(
            "shadow_of_fix_t_projection",
            1e-11,
            "P_Z(x - k0) = J_A P_{Fix T}(x) for every k0 in K",
            |fx, rng, n| {
                let mut worst = 0.0f64;
                for _ in 0..n {
                    let x = rng.point(d, R);
                    let (_, k0) = fx.sample_pair(rng)?;
                    let shadow = fx.pair.a().resolvent(&fix.project(&x)?)?;
                    worst = worst.max(shadow.distance(&zs.project(&(&x - &k0))?));
                }
                Ok(Measured::scalar(0.0, worst, worst))
            },
        );
    }
    if orthogonality_defect(&zs, &ks, Orthogonality::DifferencesToSet)? <= ORTHOGONALITY_TOL {
        ctx.check(
            "z_plus_k.variant_zero_in_k",
            1e-11,
            "P_{Z+K}(x) = P_Z(x) + P_K(x - z0) when (Z - Z) is orthogonal to K",
            |fx, rng, n| {
                let mut worst = 0.0f64;
                for _ in 0..n {
                    let x = rng.point(d, R);
                    let (z0, k0) = fx.sample_pair(rng)?;
                    let full = project_z_plus_k(&fx.pair, &zs, &ks, &z0, &k0, &x, tol)?;
                    worst = worst.max(full.distance(&project_z_plus_k_zero_in_k(&zs, &ks, &z0, &x)?));
                }
                Ok(Measured::scalar(0.0, worst, worst))
            },
        );
    }
    if orthogonality_defect(&zs, &ks, Orthogonality::SetToDifferences)? <= ORTHOGONALITY_TOL {
        ctx.check(
            "z_plus_k.variant_zero_in_z",
            1e-11,
            "P_{Z+K}(x) = P_Z(x - k0) + P_K(x) when Z is orthogonal to (K - K)",
            |fx, rng, n| {
                let mut worst = 0.0f64;
                for _ in 0..n {
                    let x = rng.point(d, R);
                    let (z0, k0) = fx.sample_pair(rng)?;
                    let full = project_z_plus_k(&fx.pair, &zs, &ks, &z0, &k0, &x, tol)?;
                    worst = worst.max(full.distance(&project_z_plus_k_zero_in_z(&zs, &ks, &k0, &x)?));
                }
                Ok(Measured::scalar(0.0, worst, worst))
            },
        );
    }
    ctx.check(
        "shadow_projection",
        1e-11,
        "J_A P_{Z+K}(x) = P_Z(x - k0)",
        |fx, rng, n| {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let x = rng.point(d, R);
                let (_, k0) = fx.sample_pair(rng)?;
                worst = worst.max(shadow_projection(&fx.pair, &zs, &ks, &k0, &x, tol)?.residual);
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    ctx.check(
        "shadow_projection.k0_independence",
        1e-11,
        "J_A P_{Z+K}(x) does not depend on the dual solution used to build it",
        |fx, rng, n| {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let x = rng.point(d, R);
                let (_, ka) = fx.sample_pair(rng)?;
                let (_, kb) = fx.sample_pair(rng)?;
                let a = shadow_projection(&fx.pair, &zs, &ks, &ka, &x, tol)?;
                let b = shadow_projection(&fx.pair, &zs, &ks, &kb, &x, tol)?;
                worst = worst.max(a.shadow.distance(&b.shadow)).max(a.predicted.distance(&b.predicted));
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    if let (Some((u, v)), Some(fix)) = (fx.feasibility_sets.clone(), fx.fix_t.clone()) {
        ctx.check(
            "summerland",
            1e-11,
            "P_{U n V} = P_U P_{Fix T} for the feasibility pair (N_U, N_V)",
            |_, rng, n| {
                max_over(rng, d, n, |x| {
                    let (a, b) = summerland_check(&u, &v, &fix, x)?;
                    Ok(a.distance(&b))
                })
            },
        );
    }
    ctx.check(
        "abstract_algorithm",
        1e-8,
        "a Douglas-Rachford limit x satisfies J_A x = P_Z(x - k) for every k in K",
        |fx, rng, n| {
            let op = dr_operator(&fx.pair);
            let mut worst = 0.0f64;
            for _ in 0..n.min(20) {
                let trace = iterate_dr(&op, &rng.point(d, R), 1e-12, 10_000)?;
                if !trace.converged {
                    return Err(Error::Oracle("Douglas-Rachford did not converge".into()));
                }
                let x = trace.last();
                let (_, k) = fx.sample_pair(rng)?;
                worst = worst.max(trace.last_shadow().distance(&zs.project(&(x - &k))?));
            }
            Ok(Measured::scalar(0.0, worst, worst))
        },
    );
    Ok(())
}

fn fenchel(ctx: &mut Ctx<'_>) -> Result<()> {
    let fx = ctx.fx;
    let Some(data) = fx.fenchel.clone() else {
        return Err(not_applicable(fx, Suite::Fenchel, "no Fenchel formulation declared"));
    };
    let primal = MinimizationOracle::grid(data.primal_box.clone(), data.step);
    let dual = MinimizationOracle::grid(data.dual_box.clone(), data.step);
    let report = total_duality_check(&data.f, &data.g, &primal, &dual, 1e-6);
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            ctx.checks.push(Check::errored("total_duality_gap", &e, "total duality"));
            return Ok(());
        }
    };
    let zero_gap = report.clone();
    ctx.check(
        "total_duality_gap",
        1e-6,
        "Z nonempty iff total duality: mu + mu* = 0 with both problems attained",
        move |_, _, _| {
            Ok(Measured {
                expected: "mu + mu* = 0".into(),
                actual: format!("mu = {}, mu* = {}", zero_gap.primal_value, zero_gap.dual_value),
                residual: zero_gap.gap,
            })
        },
    );
    let z_star = report.primal_solution.clone();
    let k_star = report.dual_solution.clone();
    ctx.check(
        "primal_solution_in_z",
        data.step,
        "grid minimizer of f + g lies in Z",
        |fx, _, _| {
            let zs = fx.z_set().ok_or_else(|| Error::Oracle("Z not declared".into()))?;
            let dist = zs.distance(&z_star)?;
            Ok(Measured {
                expected: "in Z".into(),
                actual: z_star.to_string(),
                residual: dist,
            })
        },
    );
    ctx.check(
        "dual_solution_in_k",
        data.step,
        "grid minimizer of f* + g*^v lies in K",
        |fx, _, _| {
            let ks = fx.k_set().ok_or_else(|| Error::Oracle("K not declared".into()))?;
            let dist = ks.distance(&k_star)?;
            Ok(Measured {
                expected: "in K".into(),
                actual: k_star.to_string(),
                residual: dist,
            })
        },
    );
    let k0 = report.dual_solution.clone();
    ctx.check(
        "dual_recovers_z",
        0.0,
        "a dual solution recovers the primal solution set: Z_k0 = Z",
        |fx, _, _| {
            let zs = fx.z_set().ok_or_else(|| Error::Oracle("Z not declared".into()))?;
            let (lo, hi) = (data.primal_box.lo[0], data.primal_box.hi[0]);
            let steps = ((hi - lo) * 4.0).round() as i64;
            let probes: Vec<Point> = (0..=steps)
                .map(|i| Point::new(vec![lo + i as f64 / 4.0; fx.dim()]))
                .collect::<Result<_>>()?;
            let recovered = recover_z_from_dual(&fx.pair, &k0, &probes, DEFAULT_GRAPH_TOL)?;
            let mut failures = 0;
            for p in &probes {
                failures += (recovered.contains(p) != (zs.distance(p)? <= DEFAULT_GRAPH_TOL)) as usize;
            }
            Ok(Measured::count(failures))
        },
    );
    Ok(())
}
