use std::fmt;

use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::rational::Rational;
use crate::scalar::{Scalar, ScalarMode};

/// A point of R^N: a price vector or a production plan.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Vector(coords)
    }

    /// Exact integer vector.
    pub fn ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| Scalar::from_int(c, ScalarMode::Rational)).collect())
    }

    /// Exact vector from `(numer, denom)` pairs.
    pub fn ratios(coords: &[(i64, i64)]) -> Self {
        Vector(coords.iter().map(|&(n, d)| Scalar::ratio(n, d)).collect())
    }

    pub fn floats(coords: &[f64]) -> Self {
        Vector(coords.iter().map(|&c| Scalar::Float(c)).collect())
    }

    pub fn zeros(dim: usize, mode: ScalarMode) -> Self {
        Vector(vec![Scalar::zero(mode); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }

    pub fn to_mode(&self, mode: ScalarMode) -> Option<Vector> {
        self.0.iter().map(|c| c.to_mode(mode)).collect::<Option<Vec<_>>>().map(Vector)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.signum().is_eq())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Scalar::is_finite)
    }

    pub fn max_abs(&self) -> Option<Scalar> {
        self.0.iter().map(Scalar::abs).max()
    }

    pub fn scale(&self, factor: &Scalar) -> Vector {
        Vector(self.0.iter().map(|c| c * factor).collect())
    }

    /// Coordinatewise difference; callers guarantee equal dimensions.
    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<(), GeometryError> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch { expected, found: self.dim() })
        }
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(coords: Vec<Scalar>) -> Self {
        Vector(coords)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Inner product `p · z`.
///
/// Exact in rational mode. In float mode every product and partial sum is
/// carried exactly and only the final value is rounded, so the result is the
/// correctly rounded inner product.
pub fn dot(p: &Vector, z: &Vector) -> Result<Scalar, GeometryError> {
    z.check_dim(p.dim())?;
    Ok(dot_unchecked(p, z))
}

pub(crate) fn dot_unchecked(p: &Vector, z: &Vector) -> Scalar {
    let exact = p.0.iter().chain(&z.0).all(|c| matches!(c, Scalar::Exact(_)));
    if exact {
        let mut acc = Rational::zero();
        for (a, b) in p.0.iter().zip(&z.0) {
            if let (Scalar::Exact(a), Scalar::Exact(b)) = (a, b) {
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
        }
        return Scalar::Exact(acc);
    }
    let mut acc = Rational::zero();
    for (a, b) in p.0.iter().zip(&z.0) {
        match (exact_of(a), exact_of(b)) {
            (Some(a), Some(b)) => acc = &acc + &(&a * &b),
            // non-finite input: fall back to IEEE semantics
            _ => return Scalar::Float(p.0.iter().zip(&z.0).map(|(a, b)| a.to_f64() * b.to_f64()).sum()),
        }
    }
    Scalar::Float(acc.to_f64())
}

fn exact_of(s: &Scalar) -> Option<Rational> {
    match s {
        Scalar::Exact(r) => Some(r.clone()),
        Scalar::Float(x) => Rational::from_f64(*x),
    }
}
