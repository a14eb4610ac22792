//! Dense points of ℝⁿ.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DVector;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of ℝⁿ with finite coordinates.
#[derive(Clone, PartialEq)]
pub struct Point(DVector<f64>);

impl Point {
    /// Builds a point, rejecting empty or non-finite input.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Point(DVector::from_vec(coords)))
    }

    /// Builds a point without validation. Used for values produced by
    /// arithmetic on already-validated points.
    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        Point(DVector::from_vec(coords))
    }

    pub(crate) fn from_vector(v: DVector<f64>) -> Self {
        Point(v)
    }

    pub fn zeros(dim: usize) -> Self {
        Point(DVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.as_slice().to_vec()
    }

    pub(crate) fn vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `(1 - t) * self + t * other`
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point(&self.0 * (1.0 - t) + &other.0 * t)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Point {
        Point(self.0.map(f))
    }

    /// Returns `d` with `self + d == total` coordinatewise in floating point
    /// whenever such a neighbour of `total - self` exists.
    ///
    /// Plain subtraction can be off by one ulp, which would break the exact
    /// reconstruction `a + (x - a) == x` of the Minty parametrization.
    pub fn complement_in(&self, total: &Point) -> Point {
        let coords = self
            .coords()
            .iter()
            .zip(total.coords())
            .map(|(&a, &x)| exact_complement(a, x))
            .collect();
        Point::raw(coords)
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

fn exact_complement(a: f64, x: f64) -> f64 {
    let d = x - a;
    if a + d == x {
        return d;
    }
    let (mut up, mut down) = (d, d);
    for _ in 0..4 {
        up = up.next_up();
        if a + up == x {
            return up;
        }
        down = down.next_down();
        if a + down == x {
            return down;
        }
    }
    d
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Point {
    type Output = Point;

    fn add(self, rhs: &Point) -> Point {
        Point(&self.0 + &rhs.0)
    }
}

impl Sub for &Point {
    type Output = Point;

    fn sub(self, rhs: &Point) -> Point {
        Point(&self.0 - &rhs.0)
    }
}

impl Neg for &Point {
    type Output = Point;

    fn neg(self) -> Point {
        Point(-&self.0)
    }
}

impl Mul<f64> for &Point {
    type Output = Point;

    fn mul(self, rhs: f64) -> Point {
        Point(&self.0 * rhs)
    }
}

impl Add for Point {
    type Output = Point;

    fn add(self, rhs: Point) -> Point {
        Point(self.0 + rhs.0)
    }
}

impl Sub for Point {
    type Output = Point;

    fn sub(self, rhs: Point) -> Point {
        Point(self.0 - rhs.0)
    }
}

impl Neg for Point {
    type Output = Point;

    fn neg(self) -> Point {
        Point(-self.0)
    }
}

impl Mul<f64> for Point {
    type Output = Point;

    fn mul(self, rhs: f64) -> Point {
        Point(self.0 * rhs)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        Point::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building points in tests and fixtures.
#[macro_export]
macro_rules! pt {
    ($($c:expr),+ $(,)?) => {
        $crate::Point::new(vec![$($c as f64),+]).expect("finite literal point")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(matches!(Point::new(vec![]), Err(Error::EmptyPoint)));
        assert!(matches!(
            Point::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(Point::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = pt![1, 2];
        let b = pt![3, -1];
        assert_eq!(&a + &b, pt![4, 1]);
        assert_eq!(&a - &b, pt![-2, 3]);
        assert_eq!(-&a, pt![-1, -2]);
        assert_eq!(&a * 2.0, pt![2, 4]);
        assert_eq!(a.dot(&b), 1.0);
        assert_eq!(a.lerp(&b, 0.5), pt![2, 0.5]);
    }

    #[test]
    fn complement_reconstructs_exactly() {
        let a = pt![0.3, 0.1, 7.0, -1e-3];
        let x = pt![0.1, 0.7, -2.5, 3.3];
        let d = a.complement_in(&x);
        assert_eq!(&a + &d, x);
    }

    #[test]
    fn serde_roundtrip_validates() {
        let p: Point = serde_json::from_str("[1.5, -2]").unwrap();
        assert_eq!(p, pt![1.5, -2]);
        assert!(serde_json::from_str::<Point>("[]").is_err());
    }
}
