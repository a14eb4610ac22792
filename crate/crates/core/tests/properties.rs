use nalgebra::DMatrix;
use proptest::prelude::*;

use dualsplit::duality::{kz_contains, psi_inverse, DualPair};
use dualsplit::splitting::{dr_operator, haugazeau_step, iterate_dr};
use dualsplit::zoo::{self, ConvexSet};
use dualsplit::{Point, ResolventOperator};

fn coord() -> impl Strategy<Value = f64> {
    -50.0..50.0f64
}

fn point(dim: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(coord(), dim).prop_map(|v| Point::new(v).unwrap())
}

/// Boxes with possibly infinite sides.
fn box_set(dim: usize) -> impl Strategy<Value = ConvexSet> {
    prop::collection::vec((prop::option::of(coord()), prop::option::of(0.0..20.0f64)), dim).prop_map(|sides| {
        let lo: Vec<f64> = sides.iter().map(|(l, _)| l.unwrap_or(f64::NEG_INFINITY)).collect();
        let hi: Vec<f64> = sides
            .iter()
            .map(|(l, w)| match (l, w) {
                (Some(l), Some(w)) => l + w,
                _ => f64::INFINITY,
            })
            .collect();
        ConvexSet::boxed(lo, hi).unwrap()
    })
}

/// `M = S + W` with `S` positive semidefinite and `W` skew.
fn monotone_matrix() -> impl Strategy<Value = DMatrix<f64>> {
    (prop::collection::vec(-3.0..3.0f64, 4), -3.0..3.0f64).prop_map(|(g, w)| {
        let g = DMatrix::from_row_slice(2, 2, &g);
        let skew = DMatrix::from_row_slice(2, 2, &[0.0, w, -w, 0.0]);
        &g * g.transpose() + skew
    })
}

fn operator() -> impl Strategy<Value = ResolventOperator> {
    prop_oneof![
        box_set(2).prop_map(|s| zoo::normal_cone_operator(&s)),
        monotone_matrix().prop_map(|m| zoo::linear_operator(&m).unwrap()),
        point(2).prop_map(|u| zoo::constant_operator(&u)),
    ]
}

proptest! {
    #[test]
    fn resolvents_are_firmly_nonexpansive(op in operator(), x in point(2), y in point(2)) {
        let (jx, jy) = (op.resolvent(&x).unwrap(), op.resolvent(&y).unwrap());
        let d = &jx - &jy;
        prop_assert!(d.norm_squared() <= (&x - &y).dot(&d) + 1e-9 * (1.0 + (&x - &y).norm_squared()));
    }

    #[test]
    fn minty_points_lie_on_the_graph(op in operator(), x in point(2)) {
        let (a, a_star) = op.minty_param(&x).unwrap();
        prop_assert!(op.graph_contains(&a, &a_star, 1e-9).unwrap());
        prop_assert!((&a + &a_star).distance(&x) <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn inverse_and_reflection_identities(op in operator(), x in point(2)) {
        let inv = op.inverse();
        let sum = &op.resolvent(&x).unwrap() + &inv.resolvent(&x).unwrap();
        prop_assert!(sum.distance(&x) <= 1e-12 * (1.0 + x.norm()));
        let r = &op.reflected_resolvent(&x).unwrap() + &inv.reflected_resolvent(&x).unwrap();
        prop_assert!(r.norm() <= 1e-12 * (1.0 + x.norm()));
        let dd = op.inverse().inverse();
        prop_assert!(dd.resolvent(&x).unwrap().distance(&op.resolvent(&x).unwrap()) <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn douglas_rachford_is_self_dual(a in operator(), b in operator(), x in point(2)) {
        let pair = DualPair::new(a, b).unwrap();
        let gap = pair.douglas_rachford(&x).unwrap().distance(&pair.dual().douglas_rachford(&x).unwrap());
        prop_assert!(gap <= 1e-11 * (1.0 + x.norm()));
    }

    #[test]
    fn dr_limits_split_into_solution_pairs(u in box_set(2), shift in point(2), x0 in point(2)) {
        // Disjoint draws diverge and are skipped.
        let v = u.translate(&shift.map(|t| t / 10.0));
        let pair = DualPair::new(zoo::normal_cone_operator(&u), zoo::normal_cone_operator(&v)).unwrap();
        let trace = iterate_dr(&dr_operator(&pair), &x0, 1e-12, 5_000).unwrap();
        prop_assume!(trace.converged);
        let (z, k) = psi_inverse(&pair, trace.last(), 1e-10).unwrap();
        prop_assert!(kz_contains(&pair, &z, &k, 1e-8).unwrap());
        prop_assert!(u.distance(&z).unwrap() <= 1e-8);
    }

    #[test]
    fn haugazeau_step_lands_in_both_halfspaces(x in point(2), a in point(2), b in point(2)) {
        // Q(x, a, b) lies in H(x, a) n H(a, b) whenever that set is nonempty.
        if let Ok(q) = haugazeau_step(&x, &a, &b) {
            let scale = 1e-9 * (1.0 + x.norm_squared() + a.norm_squared() + b.norm_squared());
            prop_assert!((&q - &a).dot(&(&x - &a)) <= scale);
            prop_assert!((&q - &b).dot(&(&a - &b)) <= scale);
        }
    }
}
