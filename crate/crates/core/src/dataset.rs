//! Observed supply data: a finite sample of the graph of a correspondence.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::geometry::Vector;
use crate::io::{self, IoError};
use crate::scalar::{Arith, ScalarMode, DEFAULT_TOL};

/// How an observation's plan list is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    /// Exactly the listed points.
    #[default]
    Finite,
    /// The convex hull of the listed points.
    Hull,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceDomain {
    #[default]
    AllReals,
    NonnegOrthant,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("{at}: expected {expected} coordinates, found {found}")]
    DimensionInconsistency { at: String, expected: usize, found: usize },
    #[error("{at}: scalar mode differs from the dataset's {expected}")]
    ModeMismatch { at: String, expected: ScalarMode },
    #[error("{at}: non-finite coordinate")]
    NonFinite { at: String },
    #[error("observation {0} has no plans")]
    EmptyPlans(usize),
    #[error("observation {observation}: price {price} leaves the nonnegative orthant")]
    DomainViolation { observation: usize, price: String },
    #[error("observation {observation}: price {price} repeats with a different set kind")]
    KindConflict { observation: usize, price: String },
    #[error("tolerance must be finite and nonnegative, got {0}")]
    InvalidTolerance(f64),
    #[error("tolerance is only meaningful in float mode")]
    ToleranceInRationalMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub price: Vector,
    pub plans: Vec<Vector>,
    pub set_kind: SetKind,
}

impl Observation {
    pub fn finite(price: Vector, plans: Vec<Vector>) -> Self {
        Observation { price, plans, set_kind: SetKind::Finite }
    }

    pub fn hull(price: Vector, plans: Vec<Vector>) -> Self {
        Observation { price, plans, set_kind: SetKind::Hull }
    }
}

/// A validated dataset. Plans are deduplicated and observations sharing an
/// identical price are merged, so each price carries a single supply set.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    dimension: usize,
    mode: ScalarMode,
    tolerance: f64,
    price_domain: PriceDomain,
    observations: Vec<Observation>,
}

impl Dataset {
    pub fn new(
        dimension: usize,
        mode: ScalarMode,
        tolerance: Option<f64>,
        price_domain: PriceDomain,
        observations: Vec<Observation>,
    ) -> Result<Self, DatasetError> {
        if dimension < 2 {
            return Err(DatasetError::DimensionTooSmall(dimension));
        }
        let tolerance = match (mode, tolerance) {
            (ScalarMode::Rational, None) => 0.0,
            (ScalarMode::Rational, Some(_)) => return Err(DatasetError::ToleranceInRationalMode),
            (ScalarMode::Float, None) => DEFAULT_TOL,
            (ScalarMode::Float, Some(t)) if t.is_finite() && t >= 0.0 => t,
            (ScalarMode::Float, Some(t)) => return Err(DatasetError::InvalidTolerance(t)),
        };

        let check = |v: &Vector, at: String| -> Result<(), DatasetError> {
            if v.dim() != dimension {
                return Err(DatasetError::DimensionInconsistency { at, expected: dimension, found: v.dim() });
            }
            if v.coords().iter().any(|c| c.mode() != mode) {
                return Err(DatasetError::ModeMismatch { at, expected: mode });
            }
            if !v.is_finite() {
                return Err(DatasetError::NonFinite { at });
            }
            Ok(())
        };

        let mut merged: Vec<Observation> = Vec::with_capacity(observations.len());
        let mut by_price: HashMap<Vector, usize> = HashMap::new();
        for (i, obs) in observations.into_iter().enumerate() {
            check(&obs.price, format!("observations[{i}].price"))?;
            for (j, z) in obs.plans.iter().enumerate() {
                check(z, format!("observations[{i}].plans[{j}]"))?;
            }
            if obs.plans.is_empty() {
                return Err(DatasetError::EmptyPlans(i));
            }
            if price_domain == PriceDomain::NonnegOrthant && obs.price.coords().iter().any(|c| c.signum().is_lt()) {
                return Err(DatasetError::DomainViolation { observation: i, price: obs.price.to_string() });
            }
            match by_price.get(&obs.price) {
                Some(&k) => {
                    let target = &mut merged[k];
                    if target.set_kind != obs.set_kind {
                        return Err(DatasetError::KindConflict { observation: i, price: obs.price.to_string() });
                    }
                    target.plans.extend(obs.plans);
                }
                None => {
                    by_price.insert(obs.price.clone(), merged.len());
                    merged.push(obs);
                }
            }
        }
        for obs in &mut merged {
            let mut seen = HashSet::new();
            obs.plans.retain(|z| seen.insert(z.clone()));
        }
        Ok(Dataset { dimension, mode, tolerance, price_domain, observations: merged })
    }

    /// Exact dataset over all of R^N.
    pub fn exact(dimension: usize, observations: Vec<Observation>) -> Result<Self, DatasetError> {
        Self::new(dimension, ScalarMode::Rational, None, PriceDomain::AllReals, observations)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn price_domain(&self) -> PriceDomain {
        self.price_domain
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn arith(&self) -> Arith {
        Arith::new(self.mode, self.tolerance)
    }

    /// Rebuilds with new observations, keeping the header.
    pub fn with_observations(&self, observations: Vec<Observation>) -> Result<Self, DatasetError> {
        let tol = (self.mode == ScalarMode::Float).then_some(self.tolerance);
        Self::new(self.dimension, self.mode, tol, self.price_domain, observations)
    }

    pub fn flatten(&self) -> FlatGraph<'_> {
        let points = self
            .observations
            .iter()
            .enumerate()
            .flat_map(|(o, obs)| {
                obs.plans.iter().enumerate().map(move |(k, z)| GraphPoint { observation: o, plan: k, price: &obs.price, point: z })
            })
            .collect();
        FlatGraph { points }
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        Self::from_json(&io::read_text(path)?)
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let raw: DatasetFile = io::parse_json(text)?;
        let mode = raw.scalar;
        let mut observations = Vec::with_capacity(raw.observations.len());
        for (i, o) in raw.observations.iter().enumerate() {
            let price = io::vector_from_json(&o.price, mode, &format!("observations[{i}].price"))?;
            let plans = o
                .plans
                .iter()
                .enumerate()
                .map(|(j, z)| io::vector_from_json(z, mode, &format!("observations[{i}].plans[{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            observations.push(Observation { price, plans, set_kind: o.set_kind.unwrap_or_default() });
        }
        Ok(Dataset::new(raw.dimension, mode, raw.tolerance, raw.price_domain.unwrap_or_default(), observations)?)
    }

    pub fn to_json(&self) -> String {
        let file = DatasetFileOut {
            dimension: self.dimension,
            scalar: self.mode,
            tolerance: (self.mode == ScalarMode::Float).then_some(self.tolerance),
            price_domain: self.price_domain,
            observations: self
                .observations
                .iter()
                .map(|o| ObservationOut { price: &o.price, plans: &o.plans, set_kind: o.set_kind })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("dataset serializes") + "\n"
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        io::write_text(path, &self.to_json())
    }
}

/// One `(price, plan)` point of the observed graph.
#[derive(Clone, Copy, Debug)]
pub struct GraphPoint<'a> {
    pub observation: usize,
    pub plan: usize,
    pub price: &'a Vector,
    pub point: &'a Vector,
}

/// Graph points in observation order, then plan order.
#[derive(Clone, Debug)]
pub struct FlatGraph<'a> {
    points: Vec<GraphPoint<'a>>,
}

impl<'a> FlatGraph<'a> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GraphPoint<'a>] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &GraphPoint<'a> {
        &self.points[i]
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetFile {
    dimension: usize,
    scalar: ScalarMode,
    tolerance: Option<f64>,
    price_domain: Option<PriceDomain>,
    observations: Vec<ObservationFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservationFile {
    price: Value,
    plans: Vec<Value>,
    set_kind: Option<SetKind>,
}

#[derive(Serialize)]
struct DatasetFileOut<'a> {
    dimension: usize,
    scalar: ScalarMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    price_domain: PriceDomain,
    observations: Vec<ObservationOut<'a>>,
}

#[derive(Serialize)]
struct ObservationOut<'a> {
    price: &'a Vector,
    plans: &'a [Vector],
    set_kind: SetKind,
}
