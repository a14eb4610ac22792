//! Fixture registry, verification suites, and algorithm runs.

mod fixtures;
mod overlay;
mod report;
mod runner;
mod suites;

use std::fmt;
use std::str::FromStr;

pub use fixtures::{builtin_fixtures, CommonZero, Expectation, FenchelData, Fixture, Registry};
pub use overlay::{load_overlay, parse_overlay};
pub use report::{format_f64, Check, CheckMode, Measured, Report, TraceSummary, SCHEMA_VERSION};
pub use runner::{run_algorithm, RunAlgorithm, RunOptions};
pub use suites::run_suite;

use crate::error::Error;

/// Verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Resolvent calculus and splitting-operator identities.
    Identities,
    /// Membership oracles, `Ψ`, graph convexity, orthogonality.
    Duality,
    /// Rectangle structure of `gr K`; runs as an expected failure on
    /// pairs without the paramonotone flag.
    Paramonotone,
    /// `P_{Z+K}` formulas and shadow projections.
    Projections,
    /// Fenchel total duality on a grid.
    Fenchel,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Duality,
        Suite::Paramonotone,
        Suite::Projections,
        Suite::Fenchel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Duality => "duality",
            Suite::Paramonotone => "paramonotone",
            Suite::Projections => "projections",
            Suite::Fenchel => "fenchel",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

/// Parses `"v1,v2,…"` into a point.
pub fn parse_point(s: &str) -> Result<crate::Point, Error> {
    let coords = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("`{t}` is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    crate::Point::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("-1, 2.5").unwrap(), crate::pt![-1, 2.5]);
        assert!(parse_point("1,x").is_err());
        assert!(parse_point("1,inf").is_err());
    }
}
