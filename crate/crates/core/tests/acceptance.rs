//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::process::ExitCode;

use nalgebra::DMatrix;

use dualsplit::bestapprox::{project_z_plus_k, project_z_plus_k_zero_in_k, project_z_plus_k_zero_in_z};
use dualsplit::duality::{kz_contains, psi, psi_inverse, recover_z_from_dual, total_duality_check, MinimizationOracle};
use dualsplit::harness::{run_suite, Fixture, Registry, Suite};
use dualsplit::splitting::{default_halpern_schedule, dr_operator, iterate_dr, iterate_halpern, iterate_haugazeau};
use dualsplit::zoo::{self, BoxBounds, ConvexSet, PiecewiseLinear1d, ProxFunction};
use dualsplit::{is_paramonotone_linear, pt, Error, Point, ResolventOperator, Result, SampleRng};

const RADIUS: f64 = 10.0;

type Verdict = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Verdict);

fn mat(n: usize, rows: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, rows.len() / n, rows)
}

fn registry() -> Registry {
    Registry::default()
}

fn fixture<'a>(reg: &'a Registry, name: &str) -> &'a Fixture {
    reg.get(name).expect("builtin fixture")
}

fn zoo_operators() -> Result<Vec<ResolventOperator>> {
    let u = pt![1, -2];
    let mut ops = vec![
        zoo::zero_operator(2),
        zoo::normal_cone_operator(&ConvexSet::nonnegative_orthant(2)),
        zoo::normal_cone_operator(&ConvexSet::boxed(vec![0.0, -1.0], vec![2.0, 1.0])?),
        zoo::normal_cone_operator(&ConvexSet::halfspace(pt![1, 2], 3.0)?),
        zoo::normal_cone_operator(&ConvexSet::ray(pt![1, 1], pt![1, -1])?),
        zoo::linear_operator(&mat(2, &[0.0, 1.0, -1.0, 0.0]))?,
        zoo::linear_operator(&mat(2, &[2.0, 1.0, -1.0, 1.0]))?,
        zoo::linear_operator(&mat(2, &[1.0, 0.0, 0.0, 0.0]))?,
        zoo::constant_operator(&u),
        zoo::prox_operator(&ProxFunction::HalfSquaredNorm { dim: 2 }),
        zoo::prox_operator(&ProxFunction::PiecewiseLinear(PiecewiseLinear1d::hinge_right(1.0))),
        zoo::prox_operator(&ProxFunction::PiecewiseLinear(PiecewiseLinear1d::interval_indicator(-1.0, 2.0)?)),
        zoo::prox_operator(&ProxFunction::BoxIndicator(BoxBounds::new(vec![0.0, 0.0], vec![1.0, 3.0])?)),
        zoo::prox_operator(&ProxFunction::BoxSupport(BoxBounds::new(vec![-1.0, 0.0], vec![1.0, 2.0])?)),
        zoo::skew_plus_normal_cone_ww(),
        zoo::composed_lcl(&zoo::normal_cone_operator(&ConvexSet::nonnegative_orthant(1)), &mat(1, &[1.0, 1.0]))?,
    ];
    let derived: Vec<ResolventOperator> = ops
        .iter()
        .flat_map(|op| [op.inverse(), op.ovee(), op.neg_ovee_inverse()])
        .collect();
    ops.extend(derived);
    for fx in registry().fixtures() {
        ops.push(fx.pair.a().clone());
        ops.push(fx.pair.b().clone());
    }
    Ok(ops)
}

/// Resolvent identities at 1000 random points per zoo operator.
fn criterion_1() -> Verdict {
    let mut worst = [0.0f64; 4];
    let ops = zoo_operators()?;
    let mut rng = SampleRng::new(1);
    for op in &ops {
        let (inv, ovee, nov) = (op.inverse(), op.ovee(), op.neg_ovee_inverse());
        for _ in 0..1000 {
            let x = rng.point(op.dim(), RADIUS);
            let j = op.resolvent(&x)?;
            let j_neg = op.resolvent(&-&x)?;
            let r = [
                (&j + &inv.resolvent(&x)?).distance(&x),
                (&inv.reflected_resolvent(&x)? + &op.reflected_resolvent(&x)?).norm(),
                (&ovee.resolvent(&x)? + &j_neg).norm(),
                nov.reflected_resolvent(&x)?.distance(&(&x + &(&j_neg * 2.0))),
            ];
            for (w, v) in worst.iter_mut().zip(r) {
                *w = w.max(v);
            }
        }
    }
    let max = worst.iter().cloned().fold(0.0, f64::max);
    Ok((
        max <= 1e-11,
        format!("{} operators; max residuals {:?}", ops.len(), worst),
    ))
}

/// Self-duality of the Douglas-Rachford and Peaceman-Rachford operators.
fn criterion_2() -> Verdict {
    let (mut dr, mut pr) = (0.0f64, 0.0f64);
    let mut rng = SampleRng::new(2);
    for fx in registry().fixtures() {
        let pair = &fx.pair;
        let dual = pair.dual();
        for _ in 0..1000 {
            let x = rng.point(fx.dim(), RADIUS);
            dr = dr.max(pair.douglas_rachford(&x)?.distance(&dual.douglas_rachford(&x)?));
            let primal_pr = pair.b().reflected_resolvent(&pair.a().reflected_resolvent(&x)?)?;
            let dual_pr = pair.dual_b().reflected_resolvent(&pair.dual_a().reflected_resolvent(&x)?)?;
            pr = pr.max(primal_pr.distance(&dual_pr));
        }
    }
    Ok((dr <= 1e-11 && pr <= 1e-11, format!("max DR gap {dr:e}, max PR gap {pr:e}")))
}

/// skewskew: T is the identity and K_z = {Az}.
fn criterion_3() -> Verdict {
    let reg = registry();
    let fx = fixture(&reg, "skewskew");
    let mut rng = SampleRng::new(3);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = rng.point(2, RADIUS);
        worst = worst.max(fx.pair.douglas_rachford(&x)?.distance(&x));
    }
    let mut misses = 0;
    for _ in 0..100 {
        let z = rng.point(2, RADIUS);
        let az = pt![z[1], -z[0]];
        misses += !kz_contains(&fx.pair, &z, &az, 1e-9)? as usize;
    }
    Ok((
        worst <= 1e-12 && misses == 0,
        format!("max |Tx - x| {worst:e}; {misses}/100 (z, Az) rejected"),
    ))
}

/// normskew: the ray t(1, -1) is fixed and splits into ((t, 0), (0, -t));
/// the cross pair ((1, 0), (0, -2)) is not a solution pair.
fn criterion_4() -> Verdict {
    let reg = registry();
    let fx = fixture(&reg, "normskew");
    let mut ok = true;
    let mut worst = 0.0f64;
    for t in [0.0, 0.5, 1.0, 2.0, 10.0] {
        let x = pt![t, -t];
        worst = worst.max(fx.pair.douglas_rachford(&x)?.distance(&x));
        let (z, k) = psi_inverse(&fx.pair, &x, 1e-12)?;
        ok &= z == pt![t, 0] && k == pt![0, -t] && kz_contains(&fx.pair, &z, &k, 1e-9)?;
    }
    let cross = kz_contains(&fx.pair, &pt![1, 0], &pt![0, -2], 1e-9)?;
    Ok((
        ok && worst == 0.0 && !cross,
        format!("ray residual {worst:e}, splits exact: {ok}, cross pair accepted: {cross}"),
    ))
}

/// ww-nested: K_(1,0) is strictly smaller than K_(2,0).
fn criterion_5() -> Verdict {
    let reg = registry();
    let fx = fixture(&reg, "ww-nested");
    let inside = kz_contains(&fx.pair, &pt![2, 0], &pt![0, 0.5], 1e-9)?;
    let outside = kz_contains(&fx.pair, &pt![1, 0], &pt![0, 1.5], 1e-9)?;
    Ok((inside && !outside, format!("(0,0.5) in K_(2,0): {inside}; (0,1.5) in K_(1,0): {outside}")))
}

/// (z, k) -> z + k maps solution pairs into Fix T and inverts exactly.
fn criterion_6() -> Verdict {
    let mut worst = 0.0f64;
    let (mut inexact, mut total) = (0usize, 0usize);
    for fx in registry().fixtures() {
        let mut rng = SampleRng::new(6);
        for (z, k) in fx.sample_pairs(&mut rng, 200)? {
            let x = psi(&fx.pair, &z, &k, 1e-9)?;
            worst = worst.max(fx.pair.douglas_rachford(&x)?.distance(&x));
            let (z2, k2) = psi_inverse(&fx.pair, &x, 1e-10)?;
            inexact += (psi(&fx.pair, &z2, &k2, 1e-9)? != x) as usize;
            total += 1;
        }
    }
    Ok((
        worst <= 1e-10 && inexact == 0,
        format!("{total} pairs; max |T(z+k) - (z+k)| {worst:e}; {inexact} inexact round trips"),
    ))
}

/// Convex combinations of solution pairs are solution pairs.
fn criterion_7() -> Verdict {
    let (mut failed, mut total) = (0usize, 0usize);
    for fx in registry().fixtures() {
        let mut rng = SampleRng::new(7);
        let pairs = fx.sample_pairs(&mut rng, 100)?;
        for (i, (z1, k1)) in pairs.iter().enumerate() {
            let (z2, k2) = &pairs[(i + 1) % pairs.len()];
            for t in [0.25, 0.5, 0.75] {
                failed += !kz_contains(&fx.pair, &z1.lerp(z2, t), &k1.lerp(k2, t), 1e-8)? as usize;
                total += 1;
            }
        }
    }
    Ok((failed == 0, format!("{failed}/{total} combinations rejected")))
}

/// <k1 - k2, z1 - z2> = 0 over all sampled solution pairs.
fn criterion_8() -> Verdict {
    let mut worst = 0.0f64;
    for fx in registry().fixtures() {
        let mut rng = SampleRng::new(8);
        let pairs = fx.sample_pairs(&mut rng, 200)?;
        for (i, (z1, k1)) in pairs.iter().enumerate() {
            for (z2, k2) in &pairs[i + 1..] {
                worst = worst.max((k1 - k2).dot(&(z1 - z2)).abs());
            }
        }
    }
    Ok((worst <= 1e-10, format!("max |<k1 - k2, z1 - z2>| {worst:e}")))
}

/// Douglas-Rachford on [0,2] and [1,3] from 5.
fn criterion_9() -> Verdict {
    let reg = registry();
    let fx = fixture(&reg, "feasibility-1d");
    let trace = iterate_dr(&dr_operator(&fx.pair), &pt![5], 1e-8, 10)?;
    let limit = trace.last()[0];
    let shadow = trace.last_shadow()[0];
    let fejer = [1.0, 1.5, 2.0]
        .iter()
        .map(|&p| trace.fejer_defect(&pt![p]))
        .fold(f64::NEG_INFINITY, f64::max);
    let ok = trace.last_residual() <= 1e-8
        && trace.iterations_used <= 10
        && (limit - 2.0).abs() <= 1e-8
        && (1.0..=2.0).contains(&shadow)
        && fejer <= 0.0;
    Ok((
        ok,
        format!(
            "{} iterations, limit {limit}, shadow {shadow}, residual {:e}, Fejer defect {fejer:e}",
            trace.iterations_used,
            trace.last_residual()
        ),
    ))
}

/// Independent projections for orthogonal-2d: Fix T = R+ x R, Z = R+ x {0}.
fn fix_t_projection(x: &Point) -> Point {
    pt![x[0].max(0.0), x[1]]
}

fn z_projection(x: &Point) -> Point {
    pt![x[0].max(0.0), 0]
}

/// Halpern on orthogonal-2d anchored at (-1, 2).
fn criterion_10() -> Verdict {
    let reg = registry();
    let fx = fixture(&reg, "orthogonal-2d");
    let y = pt![-1, 2];
    let trace = iterate_halpern(&dr_operator(&fx.pair), &y, &y, default_halpern_schedule, 1e-8, 100_000)?;
    let dx = trace.last().distance(&fix_t_projection(&y));
    let ds = trace.last_shadow().distance(&z_projection(&y));
    Ok((
        dx <= 1e-3 && ds <= 1e-3,
        format!("{} iterations; |x_n - (0,2)| {dx:e}; |shadow - (0,0)| {ds:e}", trace.iterations_used),
    ))
}

/// Haugazeau on orthogonal-2d anchored at (-1, 2).
fn criterion_11() -> Verdict {
    let reg = registry();
    let fx = fixture(&reg, "orthogonal-2d");
    let y = pt![-1, 2];
    let trace = iterate_haugazeau(&dr_operator(&fx.pair), &y, 1e-12, 10_000)?;
    let dx = trace.last().distance(&fix_t_projection(&y));
    Ok((dx <= 1e-6, format!("{} iterations; |x_n - (0,2)| {dx:e}", trace.iterations_used)))
}

/// The P_{Z+K} formulas agree with the direct projection, and the shadow
/// of P_{Z+K} is P_Z.
fn criterion_12() -> Verdict {
    let reg = registry();
    let fx = fixture(&reg, "orthogonal-2d");
    let (zs, ks) = (fx.z_set().unwrap(), fx.k_set().unwrap());
    let mut rng = SampleRng::new(12);
    let (mut agree, mut shadow) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let x = rng.point(2, RADIUS);
        let (z0, k0) = fx.sample_pair(&mut rng)?;
        let candidates = [
            project_z_plus_k(&fx.pair, zs, ks, &z0, &k0, &x, 1e-9)?,
            project_z_plus_k_zero_in_k(zs, ks, &z0, &x)?,
            project_z_plus_k_zero_in_z(zs, ks, &k0, &x)?,
            fix_t_projection(&x),
        ];
        for a in &candidates {
            for b in &candidates {
                agree = agree.max(a.distance(b));
            }
        }
        shadow = shadow.max(fx.pair.a().resolvent(&candidates[0])?.distance(&z_projection(&x)));
    }
    Ok((
        agree <= 1e-11 && shadow <= 1e-11,
        format!("max pairwise disagreement {agree:e}; max |J_A P_(Z+K) x - P_Z x| {shadow:e}"),
    ))
}

/// Total duality on the hinge pair and recovery of Z = [-1, 1] from k0 = 0.
fn criterion_13() -> Verdict {
    let f = ProxFunction::PiecewiseLinear(PiecewiseLinear1d::hinge_right(1.0));
    let g = ProxFunction::PiecewiseLinear(PiecewiseLinear1d::hinge_left(-1.0));
    let bounds = BoxBounds::new(vec![-3.0], vec![3.0])?;
    let oracle = MinimizationOracle::grid(bounds, 1e-3);
    let report = total_duality_check(&f, &g, &oracle, &oracle, 1e-6)?;
    let reg = registry();
    let fx = fixture(&reg, "hinge");
    let probes: Vec<Point> = (-8..=8).map(|i| pt![i as f64 * 0.25]).collect();
    let recovered = recover_z_from_dual(&fx.pair, &pt![0], &probes, 1e-9)?;
    let wrong = probes
        .iter()
        .filter(|p| recovered.contains(p) != (p[0].abs() <= 1.0))
        .count();
    Ok((
        report.gap <= 1e-6 && wrong == 0,
        format!(
            "mu {}, mu* {}, gap {:e}; {wrong}/{} probes misclassified",
            report.primal_value,
            report.dual_value,
            report.gap,
            probes.len()
        ),
    ))
}

/// L*CL inherits C's paramonotone flag; the linear classifier matches the
/// hand-derived answers.
fn criterion_14() -> Verdict {
    let cs: Vec<(ResolventOperator, DMatrix<f64>)> = vec![
        (zoo::normal_cone_operator(&ConvexSet::nonnegative_orthant(1)), mat(1, &[1.0, 1.0])),
        (zoo::normal_cone_operator(&ConvexSet::nonnegative_orthant(1)), mat(1, &[1.0, 0.0])),
        (zoo::linear_operator(&mat(2, &[0.0, 1.0, -1.0, 0.0]))?, mat(2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0])),
        (zoo::linear_operator(&mat(2, &[1.0, 0.0, 0.0, 0.0]))?, mat(2, &[0.0, 2.0, 2.0, 0.0])),
        (zoo::linear_operator(&mat(2, &[2.0, 1.0, -1.0, 1.0]))?, mat(2, &[1.0, 1.0, 1.0, -1.0])),
        (zoo::normal_cone_operator(&ConvexSet::boxed(vec![0.0, -1.0], vec![2.0, 1.0])?), mat(2, &[1.0, 0.0, 0.0, 1.0])),
        (zoo::zero_operator(1), mat(1, &[3.0, 4.0])),
    ];
    let mut mismatched = 0;
    for (c, l) in &cs {
        let composed = zoo::composed_lcl(c, l)?;
        mismatched += (composed.is_paramonotone() != c.is_paramonotone()) as usize;
    }
    let flags = [
        is_paramonotone_linear(&mat(2, &[0.0, 1.0, -1.0, 0.0]))?,
        is_paramonotone_linear(&DMatrix::identity(2, 2))?,
        is_paramonotone_linear(&mat(2, &[1.0, 0.0, 0.0, 0.0]))?,
    ];
    let expected = [false, true, true];
    Ok((
        mismatched == 0 && flags == expected,
        format!("{mismatched}/{} composed flags differ from C; classifier {flags:?}", cs.len()),
    ))
}

/// Every suite on every fixture gives the same report twice for one seed.
fn criterion_15() -> Verdict {
    let reg = registry();
    let (mut runs, mut differing) = (0usize, 0usize);
    for fx in reg.fixtures() {
        for suite in Suite::ALL {
            let first = match run_suite(fx, suite, 200, 15) {
                Ok(r) => r,
                Err(Error::SuiteNotApplicable { .. }) => continue,
                Err(e) => return Err(e),
            };
            let mut second = run_suite(fx, suite, 200, 15)?;
            second.timestamp = first.timestamp;
            differing += (first.to_json() != second.to_json()) as usize;
            runs += 1;
        }
    }
    Ok((differing == 0, format!("{differing}/{runs} suite runs differ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("resolvent identities", criterion_1),
        ("self-duality of T and R_B R_A", criterion_2),
        ("skewskew: T = Id and K_z = {Az}", criterion_3),
        ("normskew: fixed ray and rectangle counterexample", criterion_4),
        ("ww-nested: strict nesting of K_z", criterion_5),
        ("psi bijection onto Fix T", criterion_6),
        ("convexity of the solution graph", criterion_7),
        ("orthogonality of solution pairs", criterion_8),
        ("Douglas-Rachford on interval feasibility", criterion_9),
        ("Halpern anchored iteration", criterion_10),
        ("Haugazeau anchored iteration", criterion_11),
        ("P_(Z+K) formulas and shadow projection", criterion_12),
        ("total duality and dual recovery on hinge", criterion_13),
        ("paramonotone flag propagation", criterion_14),
        ("suite determinism", criterion_15),
    ];
    let mut failures = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        failures += !pass as usize;
        println!("{} criterion {:>2}: {title}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
