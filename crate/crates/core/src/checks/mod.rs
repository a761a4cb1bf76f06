//! Revealed-preference tests on observed supply data.
//!
//! Every check runs on the flattened graph. For `hull` observations only the
//! listed generators enter the graph: each defining inequality is affine in
//! every plan it involves, so its minimum over a hull is attained at a
//! generator.

mod cycles;
mod report;

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{Dataset, FlatGraph, Observation, SetKind};
use crate::geometry::{dot_unchecked, PolytopeV, Vector};
use crate::scalar::{Arith, Scalar, ScalarMode};

pub use report::{CheckName, CheckReport, PointRef, Stats, Witness, MAX_WITNESSES};

/// The five data checks selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CheckKind {
    LawOfSupply,
    Homogeneity,
    Wapm,
    ConstantProfit,
    CyclicMonotonicity,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::LawOfSupply,
        CheckKind::Homogeneity,
        CheckKind::Wapm,
        CheckKind::ConstantProfit,
        CheckKind::CyclicMonotonicity,
    ];
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "los" => CheckKind::LawOfSupply,
            "h0" => CheckKind::Homogeneity,
            "wapm" => CheckKind::Wapm,
            "const" => CheckKind::ConstantProfit,
            "cyclic" => CheckKind::CyclicMonotonicity,
            _ => return Err(format!("unknown check `{s}` (expected los, h0, wapm, const, cyclic)")),
        })
    }
}

/// Shared state for running several checks on one dataset: the flattened
/// graph and, on first use, the table `values[i][j] = p_i · z_j`.
pub struct Checker<'a> {
    ds: &'a Dataset,
    flat: FlatGraph<'a>,
    arith: Arith,
    values: OnceLock<Vec<Vec<Scalar>>>,
}

impl<'a> Checker<'a> {
    pub fn new(ds: &'a Dataset) -> Self {
        Checker { ds, flat: ds.flatten(), arith: ds.arith(), values: OnceLock::new() }
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.ds
    }

    fn values(&self) -> &Vec<Vec<Scalar>> {
        self.values.get_or_init(|| {
            let pts = self.flat.points();
            pts.par_iter().map(|gi| pts.iter().map(|gj| dot_unchecked(gi.price, gj.point)).collect()).collect()
        })
    }

    fn point(&self, i: usize) -> PointRef {
        PointRef::new(i, self.flat.get(i))
    }

    pub fn run(&self, kind: CheckKind) -> CheckReport {
        match kind {
            CheckKind::LawOfSupply => self.law_of_supply(),
            CheckKind::Homogeneity => self.homogeneity(),
            CheckKind::Wapm => self.wapm(),
            CheckKind::ConstantProfit => self.constant_profit(),
            CheckKind::CyclicMonotonicity => self.cyclic_monotonicity(None),
        }
    }

    /// `(p - p')·(z - z') >= 0` over unordered pairs of graph points.
    pub fn law_of_supply(&self) -> CheckReport {
        let mut report = CheckReport::new(CheckName::LawOfSupply);
        let v = self.values();
        let m = self.flat.len();
        for i in 0..m {
            for j in i + 1..m {
                let value = &(&(&v[i][i] - &v[i][j]) - &v[j][i]) + &v[j][j];
                report.stats.pairs_examined += 1;
                report.margin(&value);
                if self.arith.is_negative(&value) {
                    report.violation(Witness::Monotonicity { a: self.point(i), b: self.point(j), value });
                }
            }
        }
        report
    }

    /// `p·z >= p·z'` for every ordered pair: each chosen plan is at least as
    /// profitable at its own price as every other observed plan.
    pub fn wapm(&self) -> CheckReport {
        let mut report = CheckReport::new(CheckName::Wapm);
        let v = self.values();
        let m = self.flat.len();
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let value = &v[i][i] - &v[i][j];
                report.stats.pairs_examined += 1;
                report.margin(&value);
                if self.arith.is_negative(&value) {
                    report.violation(Witness::ProfitableDeviation { at: self.point(i), rival: self.point(j), value });
                }
            }
        }
        report
    }

    /// All plans observed at one price earn the same profit there.
    pub fn constant_profit(&self) -> CheckReport {
        let mut report = CheckReport::new(CheckName::ConstantProfit);
        for (o, obs) in self.ds.observations().iter().enumerate() {
            let values: Vec<Scalar> = obs.plans.iter().map(|z| dot_unchecked(&obs.price, z)).collect();
            let lo = (0..values.len()).min_by(|&a, &b| values[a].cmp(&values[b])).expect("nonempty plans");
            let hi = (0..values.len()).max_by(|&a, &b| values[a].cmp(&values[b]).then(b.cmp(&a))).expect("nonempty plans");
            let spread = &values[hi] - &values[lo];
            report.stats.pairs_examined += (values.len() * (values.len() - 1) / 2) as u64;
            report.margin(&-&spread);
            if self.arith.is_positive(&spread) {
                report.violation(Witness::ProfitSpread {
                    observation: o,
                    price: obs.price.clone(),
                    low_plan: obs.plans[lo].clone(),
                    low_value: values[lo].clone(),
                    high_plan: obs.plans[hi].clone(),
                    high_value: values[hi].clone(),
                });
            }
        }
        report
    }

    /// No directed cycle of graph points has negative total weight, where
    /// `w(i -> j) = p_j·(z_j - z_i)`.
    ///
    /// With `max_cycle_len` the search is an exhaustive enumeration of
    /// simple cycles up to that many points instead of Bellman–Ford.
    pub fn cyclic_monotonicity(&self, max_cycle_len: Option<usize>) -> CheckReport {
        let mut report = CheckReport::new(CheckName::CyclicMonotonicity);
        let v = self.values();
        let m = self.flat.len();
        let w = |i: usize, j: usize| &v[j][j] - &v[j][i];
        let cycle = match max_cycle_len {
            Some(len) => {
                let (c, examined) = cycles::brute_force_negative_cycle(m, len, &w, &self.arith);
                report.stats.pairs_examined = examined;
                c
            }
            None => {
                report.stats.pairs_examined = (m * m.saturating_sub(1)) as u64;
                for i in 0..m {
                    for j in 0..m {
                        if i != j {
                            report.margin(&w(i, j));
                        }
                    }
                }
                cycles::find_negative_cycle(m, &w, &self.arith)
            }
        };
        if let Some(c) = cycle {
            let weight = cycles::cycle_weight(&c, &w);
            report.stats.worst_margin = Some(weight.clone());
            let nodes = c.iter().map(|&i| self.point(i)).collect();
            report.violation(Witness::NegativeCycle { nodes, weight });
        }
        report
    }

    /// Positively colinear prices carry equal supply sets.
    pub fn homogeneity(&self) -> CheckReport {
        let mut report = CheckReport::new(CheckName::Homogeneity);
        let obs = self.ds.observations();
        for group in ray_groups(obs, &self.arith) {
            for (x, &a) in group.iter().enumerate() {
                for &b in &group[x + 1..] {
                    report.stats.pairs_examined += 1;
                    if let Some((point, a_has)) = set_difference(&obs[a], &obs[b], self.ds.dimension(), &self.arith) {
                        let (present, missing) = if a_has { (a, b) } else { (b, a) };
                        report.violation(Witness::ScaleMismatch {
                            present_in: present,
                            present_price: obs[present].price.clone(),
                            missing_from: missing,
                            missing_price: obs[missing].price.clone(),
                            point,
                        });
                    }
                }
            }
        }
        report
    }
}

pub fn check_law_of_supply(ds: &Dataset) -> CheckReport {
    Checker::new(ds).law_of_supply()
}

pub fn check_homogeneity(ds: &Dataset) -> CheckReport {
    Checker::new(ds).homogeneity()
}

pub fn check_wapm(ds: &Dataset) -> CheckReport {
    Checker::new(ds).wapm()
}

pub fn check_constant_profit(ds: &Dataset) -> CheckReport {
    Checker::new(ds).constant_profit()
}

pub fn check_cyclic_monotonicity(ds: &Dataset, max_cycle_len: Option<usize>) -> CheckReport {
    Checker::new(ds).cyclic_monotonicity(max_cycle_len)
}

/// Groups observation indices by price ray, in order of first appearance.
/// The zero price is its own ray.
fn ray_groups(obs: &[Observation], arith: &Arith) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    match arith.mode {
        ScalarMode::Rational => {
            let mut index: HashMap<Vector, usize> = HashMap::new();
            for (i, o) in obs.iter().enumerate() {
                let key = ray_key(&o.price);
                let g = *index.entry(key).or_insert_with(|| {
                    groups.push(Vec::new());
                    groups.len() - 1
                });
                groups[g].push(i);
            }
        }
        ScalarMode::Float => {
            let mut reps: Vec<Vec<f64>> = Vec::new();
            for (i, o) in obs.iter().enumerate() {
                let key = normalized_f64(&o.price);
                let found = reps.iter().position(|r| r.iter().zip(&key).all(|(a, b)| (a - b).abs() <= arith.tol));
                match found {
                    Some(g) => groups[g].push(i),
                    None => {
                        reps.push(key);
                        groups.push(vec![i]);
                    }
                }
            }
        }
    }
    groups
}

/// `p / max|p_i|`, the canonical point of the ray through `p`.
pub(crate) fn ray_key(p: &Vector) -> Vector {
    match p.max_abs() {
        Some(m) if !m.signum().is_eq() => p.scale(&(&Scalar::one(m.mode()) / &m)),
        _ => p.clone(),
    }
}

fn normalized_f64(p: &Vector) -> Vec<f64> {
    let v = p.to_f64s();
    let m = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if m == 0.0 {
        v
    } else {
        v.iter().map(|x| x / m).collect()
    }
}

/// Whether `z` belongs to the observation's supply set.
pub(crate) fn supplies(obs: &Observation, z: &Vector, dimension: usize, arith: &Arith) -> bool {
    match obs.set_kind {
        SetKind::Finite => obs.plans.iter().any(|p| within(p, z, arith)),
        SetKind::Hull => PolytopeV::new(dimension, obs.plans.clone())
            .and_then(|h| h.hull_membership(z, arith))
            .map(|m| m.member)
            .unwrap_or(false),
    }
}

fn within(a: &Vector, b: &Vector, arith: &Arith) -> bool {
    a.coords().iter().zip(b.coords()).all(|(x, y)| arith.is_zero(&(x - y)))
}

/// A point supplied by exactly one of the two observations, flagged `true`
/// when it is `a`'s.
fn set_difference(a: &Observation, b: &Observation, dimension: usize, arith: &Arith) -> Option<(Vector, bool)> {
    for z in &a.plans {
        if !supplies(b, z, dimension, arith) {
            return Some((z.clone(), true));
        }
    }
    for z in &b.plans {
        if !supplies(a, z, dimension, arith) {
            return Some((z.clone(), false));
        }
    }
    // generators agree both ways; a finite set still differs from a hull
    // with two distinct points, which contains a continuum
    match (a.set_kind, b.set_kind) {
        (SetKind::Finite, SetKind::Hull) => hull_point_outside(b, a, arith).map(|z| (z, false)),
        (SetKind::Hull, SetKind::Finite) => hull_point_outside(a, b, arith).map(|z| (z, true)),
        _ => None,
    }
}

/// A convex combination of `hull`'s first two distinct generators that the
/// finite set `finite` does not contain.
fn hull_point_outside(hull: &Observation, finite: &Observation, arith: &Arith) -> Option<Vector> {
    let g0 = &hull.plans[0];
    let g1 = hull.plans.iter().find(|g| !within(g, g0, arith))?;
    let mode = arith.mode;
    (2..).take(finite.plans.len() + 2).find_map(|k: i64| {
        let t = &Scalar::one(mode) / &Scalar::from_int(k, mode);
        let z = g0.scale(&t).add(&g1.scale(&(&Scalar::one(mode) - &t)));
        (!finite.plans.iter().any(|p| within(p, &z, arith))).then_some(z)
    })
}
