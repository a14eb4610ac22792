//! Algorithm runs on a fixture, with checks against its ground truth.

use std::fmt;
use std::str::FromStr;

use super::fixtures::Fixture;
use super::report::{Check, CheckMode, Measured, Report, TraceSummary};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::splitting::{
    averaged_operator, default_halpern_schedule, dr_operator, iterate_dr, iterate_halpern, iterate_haugazeau,
    IterationTrace, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

/// Shadow tolerance for Halpern runs, whose error decays like `1/n`.
const HALPERN_SHADOW_TOL: f64 = 1e-3;
const SHADOW_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunAlgorithm {
    Dr,
    /// `(1 − λ) Id + λ R_B R_A`.
    PrAveraged,
    Halpern,
    Haugazeau,
}

impl RunAlgorithm {
    pub const ALL: [RunAlgorithm; 4] = [
        RunAlgorithm::Dr,
        RunAlgorithm::PrAveraged,
        RunAlgorithm::Halpern,
        RunAlgorithm::Haugazeau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RunAlgorithm::Dr => "dr",
            RunAlgorithm::PrAveraged => "pr_averaged",
            RunAlgorithm::Halpern => "halpern",
            RunAlgorithm::Haugazeau => "haugazeau",
        }
    }

    fn anchored(self) -> bool {
        matches!(self, RunAlgorithm::Halpern | RunAlgorithm::Haugazeau)
    }
}

impl fmt::Display for RunAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RunAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RunAlgorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub x0: Option<Point>,
    pub anchor: Option<Point>,
    /// Relaxation for `pr_averaged`; defaults to `1/2`, which is DR.
    pub lambda: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            x0: None,
            anchor: None,
            lambda: None,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Runs `alg` on the fixture and checks the limit. For anchored methods
/// the anchor defaults to `x0`, which defaults to the fixture's start.
pub fn run_algorithm(fx: &Fixture, alg: RunAlgorithm, opts: &RunOptions) -> Result<(Report, IterationTrace)> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    if opts.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be positive".into()));
    }
    let d = fx.dim();
    let x0 = opts.x0.clone().or_else(|| opts.anchor.clone()).unwrap_or_else(|| fx.default_x0.clone());
    x0.ensure_dim(d)?;
    let anchor = opts.anchor.clone().unwrap_or_else(|| x0.clone());
    anchor.ensure_dim(d)?;
    if opts.lambda.is_some() && alg != RunAlgorithm::PrAveraged {
        return Err(Error::InvalidArgument("lambda only applies to pr_averaged".into()));
    }

    let dr = dr_operator(&fx.pair);
    let trace = match alg {
        RunAlgorithm::Dr => iterate_dr(&dr, &x0, opts.tol, opts.max_iter)?,
        RunAlgorithm::PrAveraged => {
            let op = averaged_operator(&fx.pair, opts.lambda.unwrap_or(0.5))?;
            iterate_dr(&op, &x0, opts.tol, opts.max_iter)?
        }
        RunAlgorithm::Halpern => {
            iterate_halpern(&dr, &x0, &anchor, default_halpern_schedule, opts.tol, opts.max_iter)?
        }
        RunAlgorithm::Haugazeau => iterate_haugazeau(&dr, &anchor, opts.tol, opts.max_iter)?,
    };

    // Halpern's residual decays like 1/n, so `tol` is a stopping target
    // rather than a pass threshold.
    let (shadow_tol, residual_tol) = if alg == RunAlgorithm::Halpern {
        (HALPERN_SHADOW_TOL, HALPERN_SHADOW_TOL.max(opts.tol))
    } else {
        (SHADOW_TOL, opts.tol)
    };
    let mut checks = Vec::new();
    let mut push = |name: &str, m: Result<Measured>, tol: f64, reference: &str| {
        checks.push(match m {
            Ok(m) => Check::new(name, m, tol, CheckMode::Normal, reference),
            Err(e) => Check::errored(name, &e, reference),
        });
    };

    let last = trace.last().clone();
    let shadow = trace.last_shadow().clone();
    push(
        "fixed_point_residual",
        Ok(Measured {
            expected: format!("<= {}", super::format_f64(residual_tol)),
            actual: format!("{} after {} iterations", super::format_f64(trace.last_residual()), trace.iterations_used),
            residual: trace.last_residual(),
        }),
        residual_tol,
        "the iteration reaches a fixed point of T",
    );
    if let Some(zs) = fx.z_set() {
        push(
            "shadow_in_z",
            zs.project(&shadow).map(|p| Measured::points(&p, &shadow)),
            shadow_tol,
            "shadows J_A x_n converge to a point of Z",
        );
    }
    if alg.anchored() {
        if let Some(fix) = &fx.fix_t {
            push(
                "limit_is_projection",
                fix.project(&anchor).map(|p| Measured::points(&p, &last)),
                shadow_tol,
                "anchored iterations converge to P_{Fix T}(y)",
            );
        }
        if let (true, Some(zs), Some(ks)) = (fx.pair.is_paramonotone(), fx.z_set(), fx.k_set()) {
            let predicted = ks
                .project(&Point::zeros(d))
                .and_then(|k0| zs.project(&(&anchor - &k0)));
            push(
                "shadow_is_projection",
                predicted.map(|p| Measured::points(&p, &shadow)),
                shadow_tol,
                "for paramonotone pairs the anchored shadow limit is P_Z(y - k0)",
            );
        }
    }

    let mut report = Report::new(&fx.name, &format!("run:{}", alg.name()), 0, 1, checks);
    report.traces = Some(vec![TraceSummary::of(&trace)]);
    Ok((report, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Registry;
    use crate::pt;

    #[test]
    fn dr_on_interval_feasibility() {
        let reg = Registry::default();
        let (rep, trace) = run_algorithm(reg.get("feasibility-1d").unwrap(), RunAlgorithm::Dr, &RunOptions {
            x0: Some(pt![5]),
            ..RunOptions::default()
        })
        .unwrap();
        assert!(rep.passed, "{}", rep.to_text());
        assert_eq!(trace.last(), &pt![2]);
        assert_eq!(trace.last_shadow(), &pt![2]);
    }

    #[test]
    fn every_algorithm_passes_on_every_fixture() {
        let reg = Registry::default();
        for fx in reg.fixtures() {
            for alg in RunAlgorithm::ALL {
                let (rep, _) = run_algorithm(fx, alg, &RunOptions::default()).unwrap();
                assert!(rep.passed, "{} {alg}:\n{}", fx.name, rep.to_text());
            }
        }
    }

    #[test]
    fn option_validation() {
        let reg = Registry::default();
        let fx = reg.get("hinge").unwrap();
        let bad = |o: RunOptions| run_algorithm(fx, RunAlgorithm::Dr, &o).unwrap_err().is_usage();
        assert!(bad(RunOptions { tol: 0.0, ..RunOptions::default() }));
        assert!(bad(RunOptions { x0: Some(pt![1, 2]), ..RunOptions::default() }));
        assert!(bad(RunOptions { lambda: Some(0.3), ..RunOptions::default() }));
        assert!("nope".parse::<RunAlgorithm>().is_err());
    }
}
