use std::fmt;

use serde::Serialize;

use crate::dataset::GraphPoint;
use crate::geometry::Vector;
use crate::scalar::Scalar;

/// Reports keep at most this many witnesses; `stats.violations` counts all.
pub const MAX_WITNESSES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    LawOfSupply,
    Homogeneity,
    Wapm,
    ConstantProfit,
    CyclicMonotonicity,
    WeakRationalization,
    StrongRationalization,
}

impl CheckName {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::LawOfSupply => "law_of_supply",
            CheckName::Homogeneity => "homogeneity",
            CheckName::Wapm => "wapm",
            CheckName::ConstantProfit => "constant_profit",
            CheckName::CyclicMonotonicity => "cyclic_monotonicity",
            CheckName::WeakRationalization => "weak_rationalization",
            CheckName::StrongRationalization => "strong_rationalization",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A graph point named by flat index, with its data inlined so the witness
/// can be re-checked without the dataset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointRef {
    pub index: usize,
    pub observation: usize,
    pub price: Vector,
    pub plan: Vector,
}

impl PointRef {
    pub(crate) fn new(index: usize, g: &GraphPoint<'_>) -> Self {
        PointRef { index, observation: g.observation, price: g.price.clone(), plan: g.point.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `(p_a - p_b)·(z_a - z_b) = value < 0`.
    Monotonicity { a: PointRef, b: PointRef, value: Scalar },
    /// At `at.price`, the rival plan earns more: `p·(z_at - z_rival) = value < 0`.
    ProfitableDeviation { at: PointRef, rival: PointRef, value: Scalar },
    /// Two plans of one observation with different profits.
    ProfitSpread { observation: usize, price: Vector, low_plan: Vector, low_value: Scalar, high_plan: Vector, high_value: Scalar },
    /// Positively colinear prices whose supply sets differ; `point` lies in
    /// the set at `present_in` and not in the set at `missing_from`.
    ScaleMismatch { present_in: usize, present_price: Vector, missing_from: usize, missing_price: Vector, point: Vector },
    /// Cycle `nodes[0] -> nodes[1] -> ... -> nodes[0]` with edge weights
    /// `p_next·(z_next - z_prev)` summing to `weight < 0`.
    NegativeCycle { nodes: Vec<PointRef>, weight: Scalar },
    /// Observed plan earning `value` below the support value `support`.
    Shortfall { observation: usize, price: Vector, plan: Vector, value: Scalar, support: Scalar },
    /// A maximizer over the production set that the observation omits.
    MissingMaximizer { observation: usize, price: Vector, point: Vector, value: Scalar, support: Scalar },
    /// An observed plan that attains the support value but lies outside the
    /// exposed face.
    OutsideFace { observation: usize, price: Vector, plan: Vector },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub pairs_examined: u64,
    pub violations: u64,
    /// Smallest slack seen in the defining inequality; negative on failure.
    pub worst_margin: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: CheckName,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    pub stats: Stats,
}

impl CheckReport {
    pub(crate) fn new(check: CheckName) -> Self {
        CheckReport { check, passed: true, witnesses: Vec::new(), stats: Stats::default() }
    }

    pub(crate) fn margin(&mut self, value: &Scalar) {
        match &self.stats.worst_margin {
            Some(w) if w <= value => {}
            _ => self.stats.worst_margin = Some(value.clone()),
        }
    }

    pub(crate) fn violation(&mut self, w: Witness) {
        self.passed = false;
        self.stats.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One grep-friendly line: `PASS name ...` or `FAIL name ...`.
    pub fn summary_line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!("{verdict} {}", self.check);
        if let Some(m) = &self.stats.worst_margin {
            line.push_str(&format!(" worst_margin={m}"));
        }
        line.push_str(&format!(" pairs={}", self.stats.pairs_examined));
        if !self.passed {
            line.push_str(&format!(" violations={}", self.stats.violations));
            if let Some(w) = self.witnesses.first() {
                line.push_str(&format!(" first: {}", w.describe()));
            }
        }
        line
    }
}

impl Witness {
    pub fn describe(&self) -> String {
        match self {
            Witness::Monotonicity { a, b, value } => {
                format!("({}, {}) vs ({}, {}) value {value}", a.price, a.plan, b.price, b.plan)
            }
            Witness::ProfitableDeviation { at, rival, value } => {
                format!("at price {} plan {} loses to {} by {value}", at.price, at.plan, rival.plan)
            }
            Witness::ProfitSpread { observation, low_plan, low_value, high_plan, high_value, .. } => {
                format!("observation {observation}: {low_plan} earns {low_value}, {high_plan} earns {high_value}")
            }
            Witness::ScaleMismatch { present_in, missing_from, point, missing_price, .. } => {
                format!("{point} supplied at observation {present_in} but missing at {missing_price} (observation {missing_from})")
            }
            Witness::NegativeCycle { nodes, weight } => {
                let path: Vec<String> = nodes.iter().map(|n| n.index.to_string()).collect();
                format!("cycle {} weight {weight}", path.join("->"))
            }
            Witness::Shortfall { observation, plan, value, support, .. } => {
                format!("observation {observation}: plan {plan} earns {value} < support {support}")
            }
            Witness::MissingMaximizer { observation, price, point, .. } => {
                format!("observation {observation}: maximizer {point} at price {price} not supplied")
            }
            Witness::OutsideFace { observation, price, plan } => {
                format!("observation {observation}: plan {plan} lies outside the face at price {price}")
            }
        }
    }
}
