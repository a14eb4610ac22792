//! User fixtures loaded from JSON.
//!
//! ```json
//! {
//!   "name": "my-pair",
//!   "dim": 1,
//!   "operator_a": {"kind": "normal_cone_box", "lo": [0], "hi": [2]},
//!   "operator_b": {"kind": "normal_cone_box", "lo": [1], "hi": [3]},
//!   "samples": [{"z": [1.5], "k": [0]}]
//! }
//! ```
//!
//! A file holds one such object or an array of them.

use std::path::Path;

use serde::Deserialize;

use super::fixtures::Fixture;
use crate::duality::DualPair;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::zoo::OperatorSpec;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SamplePair {
    z: Point,
    k: Point,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OverlayFixture {
    name: String,
    dim: usize,
    #[serde(default)]
    description: String,
    operator_a: OperatorSpec,
    operator_b: OperatorSpec,
    #[serde(default)]
    samples: Vec<SamplePair>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OverlayFile {
    Many(Vec<OverlayFixture>),
    One(Box<OverlayFixture>),
}

impl OverlayFixture {
    fn build(self) -> Result<Fixture> {
        if self.name.trim().is_empty() {
            return Err(Error::InvalidArgument("fixture name is empty".into()));
        }
        let a = self.operator_a.build()?;
        let b = self.operator_b.build()?;
        for op in [&a, &b] {
            if op.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: op.dim(),
                });
            }
        }
        let samples = self.samples.into_iter().map(|s| (s.z, s.k)).collect();
        let fx = Fixture::user(&self.name, &self.description, DualPair::new(a, b)?, samples)?;
        fx.validate()?;
        Ok(fx)
    }
}

/// Parses and validates overlay fixtures.
pub fn parse_overlay(text: &str) -> Result<Vec<Fixture>> {
    let file: OverlayFile = serde_json::from_str(text)?;
    let list = match file {
        OverlayFile::Many(v) => v,
        OverlayFile::One(f) => vec![*f],
    };
    list.into_iter().map(OverlayFixture::build).collect()
}

pub fn load_overlay(path: &Path) -> Result<Vec<Fixture>> {
    parse_overlay(&std::fs::read_to_string(path)?)
}
