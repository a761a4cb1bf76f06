//! Finite point sets in R^N: inner products, support values, argmax faces
//! and convex-hull membership.
//!
//! Production sets are V-represented (convex hulls of finitely many
//! generators), so suprema and exposed faces reduce to scans over the
//! generator list. No facet enumeration is ever performed.

mod lp;
mod vector;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::io::{self, IoError};
use crate::scalar::{Arith, Scalar, ScalarMode};

pub use vector::{dot, Vector};
pub(crate) use vector::dot_unchecked;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("production set has no generators")]
    EmptyGenerators,
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
}

/// Convex hull of finitely many production plans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeV {
    dimension: usize,
    generators: Vec<Vector>,
}

/// Outcome of a hull-membership query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Convex weights, one per generator, when `member` holds.
    pub weights: Option<Vec<Scalar>>,
}

impl PolytopeV {
    /// Builds the hull of `generators`, dropping exact duplicates while
    /// keeping first-occurrence order.
    pub fn new(dimension: usize, generators: Vec<Vector>) -> Result<Self, GeometryError> {
        if dimension < 2 {
            return Err(GeometryError::DimensionTooSmall(dimension));
        }
        if generators.is_empty() {
            return Err(GeometryError::EmptyGenerators);
        }
        let mut seen = HashSet::new();
        let mut unique = Vec::with_capacity(generators.len());
        for g in generators {
            g.check_dim(dimension)?;
            if seen.insert(g.clone()) {
                unique.push(g);
            }
        }
        Ok(PolytopeV { dimension, generators: unique })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn mode(&self) -> ScalarMode {
        self.generators[0].coords()[0].mode()
    }

    /// Profit function `max_z p·z` over the hull; attained at a generator.
    pub fn support_value(&self, p: &Vector) -> Result<Scalar, GeometryError> {
        p.check_dim(self.dimension)?;
        Ok(self.values(p).into_iter().max().expect("nonempty generators"))
    }

    fn values(&self, p: &Vector) -> Vec<Scalar> {
        self.generators.iter().map(|g| dot_unchecked(p, g)).collect()
    }

    /// Indices of generators attaining the support value at `p`.
    pub fn argmax_indices(&self, p: &Vector, arith: &Arith) -> Result<Vec<usize>, GeometryError> {
        p.check_dim(self.dimension)?;
        let values = self.values(p);
        let best = values.iter().max().expect("nonempty generators").clone();
        Ok(values
            .iter()
            .enumerate()
            .filter(|(_, v)| arith.is_zero(&(&best - v)))
            .map(|(i, _)| i)
            .collect())
    }

    /// Generators spanning the exposed face at `p`, in generator order.
    pub fn argmax_points(&self, p: &Vector, arith: &Arith) -> Result<Vec<Vector>, GeometryError> {
        Ok(self
            .argmax_indices(p, arith)?
            .into_iter()
            .map(|i| self.generators[i].clone())
            .collect())
    }

    /// Decides `z ∈ conv(generators)` by linear feasibility and returns the
    /// convex weights on success.
    pub fn hull_membership(&self, z: &Vector, arith: &Arith) -> Result<Membership, GeometryError> {
        z.check_dim(self.dimension)?;
        let k = self.generators.len();
        if let Some(i) = self.generators.iter().position(|g| g == z) {
            let mut w = vec![arith.zero(); k];
            w[i] = arith.one();
            return Ok(Membership { member: true, weights: Some(w) });
        }
        let mut rows: Vec<Vec<Scalar>> = (0..self.dimension)
            .map(|d| self.generators.iter().map(|g| g.coords()[d].clone()).collect())
            .collect();
        rows.push(vec![arith.one(); k]);
        let mut rhs: Vec<Scalar> = z.coords().to_vec();
        rhs.push(arith.one());
        match lp::feasible_point(&rows, &rhs, k, arith) {
            Some(w) => Ok(Membership { member: true, weights: Some(w) }),
            None => Ok(Membership { member: false, weights: None }),
        }
    }

    /// The same hull without generators that are convex combinations of the
    /// others.
    pub fn prune_redundant(&self, arith: &Arith) -> PolytopeV {
        let mut kept = self.generators.clone();
        let mut i = 0;
        while i < kept.len() && kept.len() > 1 {
            let rest: Vec<Vector> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            let others = PolytopeV { dimension: self.dimension, generators: rest };
            let redundant = others.hull_membership(&kept[i], arith).map(|m| m.member).unwrap_or(false);
            if redundant {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        PolytopeV { dimension: self.dimension, generators: kept }
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = io::read_text(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let raw: PolytopeFile = io::parse_json(text)?;
        let mode = raw.scalar;
        let generators = raw
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| io::vector_from_json(g, mode, &format!("generators[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        PolytopeV::new(raw.dimension, generators).map_err(IoError::Geometry)
    }

    pub fn to_json(&self) -> String {
        let file = PolytopeFileOut { dimension: self.dimension, scalar: self.mode(), generators: &self.generators };
        serde_json::to_string_pretty(&file).expect("polytope serializes") + "\n"
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        io::write_text(path, &self.to_json())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFile {
    dimension: usize,
    scalar: ScalarMode,
    generators: Vec<serde_json::Value>,
}

#[derive(Serialize)]
struct PolytopeFileOut<'a> {
    dimension: usize,
    scalar: ScalarMode,
    generators: &'a [Vector],
}
