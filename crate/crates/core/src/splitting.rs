//! Douglas–Rachford and Peaceman–Rachford operators and the fixed-point
//! iterations driven by them.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::duality::DualPair;
use crate::error::{Error, Result};
use crate::point::Point;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Formula {
    /// `J_B R_A + Id − J_A`.
    DouglasRachford,
    /// `(1 − λ) Id + λ R_B R_A`.
    Averaged,
}

/// `T_λ = (1 − λ) Id + λ R_B R_A` for a pair `(A, B)`.
///
/// `λ = ½` is the Douglas–Rachford operator and is evaluated through
/// `J_B R_A + Id − J_A`; `λ = 1` is Peaceman–Rachford.
#[derive(Clone, Debug)]
pub struct SplittingOperator {
    pair: DualPair,
    relaxation: f64,
    formula: Formula,
}

impl SplittingOperator {
    pub fn pair(&self) -> &DualPair {
        &self.pair
    }

    pub fn relaxation(&self) -> f64 {
        self.relaxation
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        match self.formula {
            Formula::DouglasRachford => self.pair.douglas_rachford(x),
            Formula::Averaged => {
                let ra = self.pair.a().reflected_resolvent(x)?;
                let rbra = self.pair.b().reflected_resolvent(&ra)?;
                if self.relaxation == 1.0 {
                    Ok(rbra)
                } else {
                    Ok(x.lerp(&rbra, self.relaxation))
                }
            }
        }
    }

    /// The same operator built on the dual pair `(A⁻¹, B^{−∨})`.
    pub fn on_dual(&self) -> SplittingOperator {
        SplittingOperator {
            pair: self.pair.dual(),
            ..self.clone()
        }
    }
}

/// `T = J_B R_A + Id − J_A`.
pub fn dr_operator(pair: &DualPair) -> SplittingOperator {
    SplittingOperator {
        pair: pair.clone(),
        relaxation: 0.5,
        formula: Formula::DouglasRachford,
    }
}

/// `R_B R_A`.
pub fn pr_operator(pair: &DualPair) -> SplittingOperator {
    SplittingOperator {
        pair: pair.clone(),
        relaxation: 1.0,
        formula: Formula::Averaged,
    }
}

/// `(1 − λ) Id + λ R_B R_A`, `λ ∈ [0, 1]`.
pub fn averaged_operator(pair: &DualPair, lambda: f64) -> Result<SplittingOperator> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!(
            "relaxation must lie in [0, 1], got {lambda}"
        )));
    }
    Ok(SplittingOperator {
        pair: pair.clone(),
        relaxation: lambda,
        formula: Formula::Averaged,
    })
}

/// `‖J_B J_A x − J_{B^{−∨}} J_{A⁻¹} x‖`; unlike `T`, the backward-backward
/// composition changes when the pair is replaced by its dual.
pub fn backward_backward_dual_gap(pair: &DualPair, x: &Point) -> Result<f64> {
    let primal = pair.b().resolvent(&pair.a().resolvent(x)?)?;
    let dual = pair.dual_b().resolvent(&pair.dual_a().resolvent(x)?)?;
    Ok(primal.distance(&dual))
}

/// `‖T x − x‖`.
pub fn fixed_point_residual(op: &SplittingOperator, x: &Point) -> Result<f64> {
    Ok(op.apply(x)?.distance(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Dr,
    Averaged,
    Halpern,
    Haugazeau,
}

/// Governing sequence `xₙ`, shadows `J_A xₙ`, and residuals `‖T xₙ − xₙ‖`
/// of one run.
#[derive(Clone, Debug, Serialize)]
pub struct IterationTrace {
    pub iterates: Vec<Point>,
    pub shadows: Vec<Point>,
    pub residuals: Vec<f64>,
    pub algorithm: Algorithm,
    pub anchor: Option<Point>,
    pub converged: bool,
    pub iterations_used: usize,
}

impl IterationTrace {
    fn new(algorithm: Algorithm, anchor: Option<Point>) -> Self {
        IterationTrace {
            iterates: Vec::new(),
            shadows: Vec::new(),
            residuals: Vec::new(),
            algorithm,
            anchor,
            converged: false,
            iterations_used: 0,
        }
    }

    fn record(&mut self, op: &SplittingOperator, x: &Point, tx: &Point) -> Result<()> {
        let r = tx.distance(x);
        if !r.is_finite() {
            return Err(Error::Oracle(format!("non-finite residual at iterate {}", self.iterates.len())));
        }
        self.shadows.push(op.pair().a().resolvent(x)?);
        self.iterates.push(x.clone());
        self.residuals.push(r);
        Ok(())
    }

    pub fn last(&self) -> &Point {
        self.iterates.last().expect("traces are never empty")
    }

    pub fn last_shadow(&self) -> &Point {
        self.shadows.last().expect("traces are never empty")
    }

    pub fn last_residual(&self) -> f64 {
        *self.residuals.last().expect("traces are never empty")
    }

    /// `max_n ‖xₙ₊₁ − p‖ − ‖xₙ − p‖`; non-positive when the trace is Fejér
    /// monotone with respect to `p`.
    pub fn fejer_defect(&self, p: &Point) -> f64 {
        self.iterates
            .windows(2)
            .map(|w| w[1].distance(p) - w[0].distance(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV rows `n, x_0.., shadow_0.., residual`, floats with 17 significant
    /// digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let d = self.iterates.first().map_or(0, Point::dim);
        let mut header = vec!["n".to_string()];
        header.extend((0..d).map(|i| format!("x_{i}")));
        header.extend((0..d).map(|i| format!("shadow_{i}")));
        header.push("residual".into());
        writeln!(out, "{}", header.join(","))?;
        for (n, ((x, s), r)) in self.iterates.iter().zip(&self.shadows).zip(&self.residuals).enumerate() {
            write!(out, "{n}")?;
            for v in x.coords().iter().chain(s.coords()) {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out, ",{r:.16e}")?;
        }
        Ok(())
    }
}

fn check_budget(tol: f64, max_iter: usize) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    Ok(())
}

/// `xₙ₊₁ = T xₙ`, stopped once `‖xₙ₊₁ − xₙ‖ = ‖T xₙ − xₙ‖ ≤ tol`.
///
/// The stopping iterate is the last one recorded, so a start in `Fix T`
/// gives a one-point trace with `iterations_used = 0`.
pub fn iterate_dr(op: &SplittingOperator, x0: &Point, tol: f64, max_iter: usize) -> Result<IterationTrace> {
    check_budget(tol, max_iter)?;
    x0.ensure_dim(op.dim())?;
    let algorithm = if op.formula == Formula::DouglasRachford {
        Algorithm::Dr
    } else {
        Algorithm::Averaged
    };
    let mut trace = IterationTrace::new(algorithm, None);
    let mut x = x0.clone();
    for n in 0..=max_iter {
        let tx = op.apply(&x)?;
        trace.record(op, &x, &tx)?;
        trace.iterations_used = n;
        if trace.last_residual() <= tol {
            trace.converged = true;
            break;
        }
        if n == max_iter {
            break;
        }
        x = tx;
    }
    Ok(trace)
}

/// The default Halpern schedule `λₙ = 1/(n + 2)`.
pub fn default_halpern_schedule(n: usize) -> f64 {
    1.0 / (n as f64 + 2.0)
}

/// `xₙ₊₁ = (1 − λₙ) T xₙ + λₙ y`.
///
/// Stops when `‖xₙ₊₁ − xₙ‖ ≤ tol` and `λₙ ≤ √tol`, so that a small step
/// taken while the anchor still pulls hard is not mistaken for convergence.
/// It also stops when an iterate within `tol` of `y` is a fixed point, since
/// then `y` is (up to `tol`) its own projection onto `Fix T`.
pub fn iterate_halpern(
    op: &SplittingOperator,
    x0: &Point,
    y: &Point,
    schedule: impl Fn(usize) -> f64,
    tol: f64,
    max_iter: usize,
) -> Result<IterationTrace> {
    check_budget(tol, max_iter)?;
    x0.ensure_dim(op.dim())?;
    y.ensure_dim(op.dim())?;
    let lambda_stop = tol.sqrt();
    let mut trace = IterationTrace::new(Algorithm::Halpern, Some(y.clone()));
    let mut x = x0.clone();
    let mut tx = op.apply(&x)?;
    trace.record(op, &x, &tx)?;
    for n in 0..max_iter {
        if trace.last_residual() <= tol && x.distance(y) <= tol {
            trace.converged = true;
            break;
        }
        let lambda = schedule(n);
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "Halpern parameter λ_{n} = {lambda} is outside (0, 1)"
            )));
        }
        let next = tx.lerp(y, lambda);
        let step = next.distance(&x);
        x = next;
        tx = op.apply(&x)?;
        trace.record(op, &x, &tx)?;
        trace.iterations_used = n + 1;
        if step <= tol && lambda <= lambda_stop {
            trace.converged = true;
            break;
        }
    }
    Ok(trace)
}

/// Projection of `x` onto `H(x, a) ∩ H(a, b)`, where
/// `H(u, v) = {p : ⟨p − v, u − v⟩ ≤ 0}`.
pub fn haugazeau_step(x: &Point, a: &Point, b: &Point) -> Result<Point> {
    let xa = x - a;
    let ab = a - b;
    let pi = xa.dot(&ab);
    let mu = xa.norm_squared();
    let nu = ab.norm_squared();
    let rho = mu * nu - pi * pi;
    // ρ ≥ 0 by Cauchy–Schwarz; rounding can leave a tiny residue when x − a
    // and a − b are parallel
    let rho = if rho <= 1e-12 * mu * nu { 0.0 } else { rho };
    if rho == 0.0 {
        if pi >= 0.0 {
            Ok(b.clone())
        } else {
            Err(Error::InconsistentHalfspaces)
        }
    } else if pi * nu >= rho {
        Ok(x + &(&(b - a) * (1.0 + pi / nu)))
    } else {
        let dir = &(&xa * pi) + &(&(b - a) * mu);
        Ok(a + &(&dir * (nu / rho)))
    }
}

/// `x₀ = y`, `xₙ₊₁ = Q(y, xₙ, T xₙ)`.
///
/// Each `xₙ` is the projection of `y` onto a convex set containing `Fix T`,
/// so the run stops as soon as `‖T xₙ − xₙ‖ ≤ tol`.
pub fn iterate_haugazeau(op: &SplittingOperator, y: &Point, tol: f64, max_iter: usize) -> Result<IterationTrace> {
    check_budget(tol, max_iter)?;
    y.ensure_dim(op.dim())?;
    let mut trace = IterationTrace::new(Algorithm::Haugazeau, Some(y.clone()));
    let mut x = y.clone();
    for n in 0..=max_iter {
        let tx = op.apply(&x)?;
        trace.record(op, &x, &tx)?;
        trace.iterations_used = n;
        if trace.last_residual() <= tol {
            trace.converged = true;
            break;
        }
        if n == max_iter {
            break;
        }
        x = haugazeau_step(y, &x, &tx)?;
    }
    Ok(trace)
}
