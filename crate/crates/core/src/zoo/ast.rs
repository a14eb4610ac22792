use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::ResolventOperator;
use crate::point::Point;
use crate::zoo::{self, BoxBounds, ConvexSet, PiecewiseLinear1d, ProxFunction};

/// Serialized form of a zoo operator, as used by fixture overlay files.
///
/// ```json
/// {"kind": "normal_cone_box", "lo": [0, null], "hi": [2, null]}
/// {"kind": "linear", "matrix": [0, 1, -1, 0]}
/// {"kind": "inverse", "of": {"kind": "ww_example"}}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    Zero {
        dim: usize,
    },
    NormalConeBox {
        #[serde(flatten)]
        bounds: BoxBounds,
    },
    /// Square matrix in row-major order.
    Linear {
        matrix: Vec<f64>,
    },
    Constant {
        u: Point,
    },
    WwExample,
    /// Subdifferential of a 1-D piecewise-linear function.
    ProxHinge {
        #[serde(flatten)]
        function: PiecewiseLinear1d,
    },
    Prox {
        function: ProxFunction,
    },
    Inverse {
        of: Box<OperatorSpec>,
    },
    Ovee {
        of: Box<OperatorSpec>,
    },
    NegOveeInverse {
        of: Box<OperatorSpec>,
    },
    /// `L* C L`, `L` given row-major with `rows = dim C`.
    Lcl {
        c: Box<OperatorSpec>,
        rows: usize,
        cols: usize,
        l: Vec<f64>,
    },
}

impl OperatorSpec {
    pub fn build(&self) -> Result<ResolventOperator> {
        Ok(match self {
            OperatorSpec::Zero { dim } => {
                if *dim == 0 {
                    return Err(Error::EmptyPoint);
                }
                zoo::zero_operator(*dim)
            }
            OperatorSpec::NormalConeBox { bounds } => {
                zoo::normal_cone_operator(&ConvexSet::from_box(bounds.clone()))
            }
            OperatorSpec::Linear { matrix } => {
                let n = (matrix.len() as f64).sqrt().round() as usize;
                if n == 0 || n * n != matrix.len() {
                    return Err(Error::InvalidArgument(format!(
                        "linear operator needs a square matrix, got {} entries",
                        matrix.len()
                    )));
                }
                zoo::linear_operator(&DMatrix::from_row_slice(n, n, matrix))?
            }
            OperatorSpec::Constant { u } => zoo::constant_operator(u),
            OperatorSpec::WwExample => zoo::skew_plus_normal_cone_ww(),
            OperatorSpec::ProxHinge { function } => {
                zoo::prox_operator(&ProxFunction::PiecewiseLinear(function.clone()))
            }
            OperatorSpec::Prox { function } => zoo::prox_operator(function),
            OperatorSpec::Inverse { of } => of.build()?.inverse(),
            OperatorSpec::Ovee { of } => of.build()?.ovee(),
            OperatorSpec::NegOveeInverse { of } => of.build()?.neg_ovee_inverse(),
            OperatorSpec::Lcl { c, rows, cols, l } => {
                if rows * cols != l.len() {
                    return Err(Error::InvalidArgument(format!(
                        "L has {} entries, expected {rows}x{cols}",
                        l.len()
                    )));
                }
                zoo::composed_lcl(&c.build()?, &DMatrix::from_row_slice(*rows, *cols, l))?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;

    #[test]
    fn parses_every_kind() {
        let src = r#"[
            {"kind": "zero", "dim": 2},
            {"kind": "normal_cone_box", "lo": [0, null], "hi": [2, null]},
            {"kind": "linear", "matrix": [0, 1, -1, 0]},
            {"kind": "constant", "u": [1, 0]},
            {"kind": "ww_example"},
            {"kind": "prox_hinge", "breakpoints": [1], "slopes": [0, 1], "anchor": [1, 0]},
            {"kind": "prox", "function": {"kind": "half_squared_norm", "dim": 2}},
            {"kind": "inverse", "of": {"kind": "ww_example"}},
            {"kind": "ovee", "of": {"kind": "zero", "dim": 1}},
            {"kind": "neg_ovee_inverse", "of": {"kind": "linear", "matrix": [0, -1, 1, 0]}},
            {"kind": "lcl", "c": {"kind": "normal_cone_box", "lo": [0], "hi": [null]},
             "rows": 1, "cols": 2, "l": [1, 0]}
        ]"#;
        let specs: Vec<OperatorSpec> = serde_json::from_str(src).unwrap();
        let ops: Vec<_> = specs.iter().map(|s| s.build().unwrap()).collect();
        assert_eq!(ops.len(), 11);
        assert_eq!(ops[1].resolvent(&pt![5, -7]).unwrap(), pt![2, -7]);
        assert_eq!(ops[5].resolvent(&pt![3]).unwrap(), pt![2]);
        assert_eq!(ops[10].resolvent(&pt![-1, 5]).unwrap(), pt![0, 5]);
        // B^{−∨} = −B for the rotation by +π/2
        let j = ops[9].resolvent(&pt![1, 1]).unwrap();
        assert!(j.distance(&pt![0, 1]) < 1e-15);
    }

    #[test]
    fn rejects_malformed_specs() {
        let bad = [
            r#"{"kind": "linear", "matrix": [1, 2, 3]}"#,
            r#"{"kind": "linear", "matrix": [-1, 0, 0, -1]}"#,
            r#"{"kind": "normal_cone_box", "lo": [3], "hi": [1]}"#,
            r#"{"kind": "lcl", "c": {"kind": "zero", "dim": 1}, "rows": 1, "cols": 2, "l": [1, 1, 1]}"#,
            r#"{"kind": "prox_hinge", "breakpoints": [1], "slopes": [1, 0], "anchor": [1, 0]}"#,
        ];
        for src in bad {
            let parsed: std::result::Result<OperatorSpec, _> = serde_json::from_str(src);
            let built = parsed.map_err(Error::from).and_then(|s| s.build());
            assert!(built.is_err(), "{src}");
        }
    }
}
