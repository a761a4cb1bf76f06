//! Constructive rationalization and strong-rationalizability tests.
//!
//! Data that obey the law of supply and are homogeneous of degree zero are
//! rationalized by the convex hull of everything observed. Strong
//! rationalization additionally needs every maximizer to be observed; a
//! maximizer outside the data whose addition keeps the graph monotone is an
//! extension witness, and rules out maximal monotonicity.

use serde::Serialize;

use crate::checks::{supplies, CheckName, CheckReport, Checker, Witness};
use crate::dataset::{Dataset, SetKind};
use crate::forward::{OracleError, SupplyOracle};
use crate::geometry::{dot_unchecked, GeometryError, PolytopeV, Vector};
use crate::scalar::{Arith, Scalar, ScalarMode};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RationalizeError {
    #[error("precondition failed: {}", .0.summary_line())]
    PreconditionFailed(Box<CheckReport>),
    #[error("dataset has no observations")]
    Empty,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PriceMargin {
    pub observation: usize,
    pub price: Vector,
    pub support: Scalar,
    /// Support value minus the least profitable observed plan's value.
    pub margin: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalizationResult {
    /// Convex hull of every observed plan.
    pub production_set: PolytopeV,
    pub weak_verified: bool,
    pub margins: Vec<PriceMargin>,
}

/// Builds the hull of all observed plans after confirming the law of supply
/// and homogeneity, and checks that each observed plan maximizes profit
/// over it.
pub fn rationalize_build(ds: &Dataset) -> Result<RationalizationResult, RationalizeError> {
    rationalize_with(&Checker::new(ds))
}

/// As [`rationalize_build`], reusing the checker's profit table.
pub fn rationalize_with(checker: &Checker<'_>) -> Result<RationalizationResult, RationalizeError> {
    let ds = checker.dataset();
    for report in [checker.law_of_supply(), checker.homogeneity()] {
        if !report.passed {
            return Err(RationalizeError::PreconditionFailed(Box::new(report)));
        }
    }
    let image: Vec<Vector> = ds.observations().iter().flat_map(|o| o.plans.iter().cloned()).collect();
    if image.is_empty() {
        return Err(RationalizeError::Empty);
    }
    let production_set = PolytopeV::new(ds.dimension(), image)?;
    let arith = ds.arith();
    let mut margins = Vec::with_capacity(ds.observations().len());
    let mut weak_verified = true;
    for (o, obs) in ds.observations().iter().enumerate() {
        let support = production_set.support_value(&obs.price)?;
        let worst = obs.plans.iter().map(|z| dot_unchecked(&obs.price, z)).min().expect("nonempty plans");
        let margin = &support - &worst;
        weak_verified &= !arith.is_positive(&margin);
        margins.push(PriceMargin { observation: o, price: obs.price.clone(), support, margin });
    }
    Ok(RationalizationResult { production_set, weak_verified, margins })
}

/// Every observed plan attains the support value of `y` at its price.
pub fn verify_weak(ds: &Dataset, y: &PolytopeV) -> Result<CheckReport, GeometryError> {
    let mut report = CheckReport::new(CheckName::WeakRationalization);
    weak_pass(ds, y, &mut report)?;
    Ok(report)
}

fn weak_pass(ds: &Dataset, y: &PolytopeV, report: &mut CheckReport) -> Result<(), GeometryError> {
    let arith = ds.arith();
    for (o, obs) in ds.observations().iter().enumerate() {
        let support = y.support_value(&obs.price)?;
        for z in &obs.plans {
            let value = dot_unchecked(&obs.price, z);
            let slack = &value - &support;
            report.stats.pairs_examined += 1;
            report.margin(&slack);
            if arith.is_negative(&slack) {
                report.violation(Witness::Shortfall {
                    observation: o,
                    price: obs.price.clone(),
                    plan: z.clone(),
                    value,
                    support: support.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Each observation equals the exposed face of `y` at its price.
///
/// A `hull` observation must contain every attaining generator of `y` and
/// lie inside the face. A `finite` observation must contain every attaining
/// generator, and the face must be a single point: a face spanned by two or
/// more points is a continuum that no finite list equals. In that case the
/// witness is the first dyadic mixture of the face generators that the list
/// omits.
pub fn verify_strong(ds: &Dataset, y: &PolytopeV) -> Result<CheckReport, GeometryError> {
    let mut report = CheckReport::new(CheckName::StrongRationalization);
    weak_pass(ds, y, &mut report)?;
    let arith = ds.arith();
    for (o, obs) in ds.observations().iter().enumerate() {
        let support = y.support_value(&obs.price)?;
        let face = y.argmax_points(&obs.price, &arith)?;
        let missing = |z: &Vector| !supplies(obs, z, ds.dimension(), &arith);
        let mut witness = face.iter().find(|g| missing(g)).cloned();
        if witness.is_none() && obs.set_kind == SetKind::Finite && face.len() > 1 {
            witness = MixtureGrid::default().points(&face, arith.mode).map(|(_, z)| z).find(|z| missing(z));
        }
        if witness.is_none() && obs.set_kind == SetKind::Hull {
            // observed generators must also lie in the face
            let face_set = PolytopeV::new(ds.dimension(), face.clone())?;
            if let Some(z) = obs.plans.iter().find(|z| !face_set.hull_membership(z, &arith).map(|m| m.member).unwrap_or(false)) {
                report.violation(Witness::OutsideFace { observation: o, price: obs.price.clone(), plan: z.clone() });
            }
        }
        report.stats.pairs_examined += face.len() as u64;
        if let Some(point) = witness {
            let value = dot_unchecked(&obs.price, &point);
            report.violation(Witness::MissingMaximizer { observation: o, price: obs.price.clone(), point, value, support });
        }
    }
    Ok(report)
}

/// Dyadic convex weights over a face's generators.
///
/// Denominators run through 1, 2, 4, ... up to `max_denominator`; for each,
/// weight vectors come in lexicographically decreasing order of numerators,
/// skipping those already produced at a smaller denominator and those with
/// more than `max_support` nonzero entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MixtureGrid {
    pub max_denominator: u32,
    pub max_support: usize,
}

impl Default for MixtureGrid {
    fn default() -> Self {
        MixtureGrid { max_denominator: 8, max_support: 4 }
    }
}

impl MixtureGrid {
    pub fn weights(&self, k: usize) -> Vec<Vec<(u32, u32)>> {
        let mut out = Vec::new();
        let mut d = 1;
        while d <= self.max_denominator {
            let mut parts = vec![0u32; k];
            compositions(d, 0, &mut parts, &mut |c| {
                let fresh = d == 1 || c.iter().any(|x| x % 2 == 1);
                let support = c.iter().filter(|&&x| x > 0).count();
                if fresh && support <= self.max_support {
                    out.push(c.iter().map(|&x| (x, d)).collect());
                }
            });
            d *= 2;
        }
        out
    }

    /// Mixture points in grid order, paired with their weights.
    pub fn points<'a>(&self, face: &'a [Vector], mode: ScalarMode) -> impl Iterator<Item = (Vec<Scalar>, Vector)> + 'a {
        self.weights(face.len()).into_iter().map(move |w| {
            let weights: Vec<Scalar> = w
                .iter()
                .map(|&(n, d)| match mode {
                    ScalarMode::Rational => Scalar::ratio(n as i64, d as i64),
                    ScalarMode::Float => Scalar::Float(n as f64 / d as f64),
                })
                .collect();
            let mut z = Vector::zeros(face[0].dim(), mode);
            for (g, wi) in face.iter().zip(&weights) {
                if !wi.signum().is_eq() {
                    z = z.add(&g.scale(wi));
                }
            }
            (weights, z)
        })
    }
}

fn compositions(total: u32, at: usize, parts: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if at + 1 == parts.len() {
        parts[at] = total;
        emit(parts);
        return;
    }
    for first in (0..=total).rev() {
        parts[at] = first;
        compositions(total - first, at + 1, parts, emit);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Exact oracle, exact mixture: a genuine failure of maximality.
    Structural,
    /// Float arithmetic or a sampled smooth body; may be an artifact of the
    /// finite hull under-approximating the true production set.
    Discretization,
}

/// A pair `(price, plan)` outside the oracle's graph that attains the
/// support value, with the monotonicity of the enlarged graph checked
/// against every sampled point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionWitness {
    pub price: Vector,
    pub plan: Vector,
    pub weights: Vec<Scalar>,
    pub attains_support: bool,
    pub monotone_consistent: bool,
    pub kind: WitnessKind,
}

/// Probes the oracle at each price in order and returns the first mixture
/// of the face of `y` that attains the support value yet is not supplied.
pub fn extension_witness(
    oracle: &SupplyOracle,
    y: &PolytopeV,
    probe_prices: &[Vector],
    grid: &MixtureGrid,
    arith: &Arith,
) -> Result<Option<ExtensionWitness>, RationalizeError> {
    if y.dimension() != oracle.dimension() {
        return Err(GeometryError::DimensionMismatch { expected: oracle.dimension(), found: y.dimension() }.into());
    }
    let mut graph: Vec<(Vector, crate::forward::Supply)> = Vec::new();
    for p in probe_prices {
        match oracle.supply(p, arith) {
            Ok(s) => graph.push((p.clone(), s)),
            Err(OracleError::EntireSet) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let structural = arith.mode == ScalarMode::Rational
        && oracle.is_exact()
        && y.mode() == ScalarMode::Rational
        && probe_prices.iter().all(|p| p.coords().iter().all(|c| c.mode() == ScalarMode::Rational));
    let kind = if structural { WitnessKind::Structural } else { WitnessKind::Discretization };

    for (p, supplied) in &graph {
        let support = y.support_value(p)?;
        let face = y.argmax_points(p, arith)?;
        let obs = crate::dataset::Observation { price: p.clone(), plans: supplied.plans.clone(), set_kind: supplied.set_kind };
        for (weights, z) in grid.points(&face, arith.mode) {
            let attains = arith.is_zero(&(&dot_unchecked(p, &z) - &support));
            if !attains || supplies(&obs, &z, y.dimension(), arith) {
                continue;
            }
            let monotone = graph.iter().all(|(q, s)| {
                let dp = p.sub(q);
                s.plans.iter().all(|w| !arith.is_negative(&dot_unchecked(&dp, &z.sub(w))))
            });
            return Ok(Some(ExtensionWitness {
                price: p.clone(),
                plan: z,
                weights,
                attains_support: attains,
                monotone_consistent: monotone,
                kind,
            }));
        }
    }
    Ok(None)
}
