//! Ground-truth supply oracles and dataset generation.
//!
//! Polytope, ball and ellipsoid oracles return the exact argmax set of a
//! convex body, so they are strongly rationalizable by construction. The
//! `Figure1` oracle (two corners, with a chosen subset `S` of the segment at
//! equal prices) and the rotation oracle are the two counterexamples.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::dataset::{Dataset, DatasetError, Observation, PriceDomain, SetKind};
use crate::geometry::{dot_unchecked, GeometryError, PolytopeV, Vector};
use crate::rational::Rational;
use crate::scalar::{Arith, Scalar, ScalarMode};

/// Denominator used to place sphere samples on an exact lattice.
pub const SPHERE_LATTICE: i64 = 4096;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("argmax at the zero price is the whole body")]
    EntireSet,
    #[error("oracle is defined for dimension {expected}, got a price of dimension {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid oracle: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ForwardError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Config(String),
    #[error("perturbation requires a float-mode dataset")]
    RationalMode,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SupplyOracle {
    /// Exposed face of a V-polytope.
    Polytope(PolytopeV),
    /// `{z : |z| <= radius}`; supplies `radius * p / |p|`.
    Ball { dimension: usize, radius: f64 },
    /// `{z : z' A^-1 z <= 1}`; supplies `A p / sqrt(p' A p)`.
    Ellipsoid { shape: Vec<Vec<f64>> },
    /// Corner `(1,0)` when `p1 > p2`, `(0,1)` when `p2 > p1`, and the finite
    /// set `S` on the segment between them when `p1 = p2`.
    Figure1 { s: Vec<Vector> },
    /// `z = R(theta) p` in the plane.
    Rotation { degrees: f64 },
}

/// One oracle answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Supply {
    pub plans: Vec<Vector>,
    pub set_kind: SetKind,
}

impl SupplyOracle {
    pub fn ball(dimension: usize, radius: f64) -> Result<Self, OracleError> {
        if dimension < 2 || !(radius.is_finite() && radius > 0.0) {
            return Err(OracleError::Invalid(format!("ball needs dimension >= 2 and radius > 0, got {dimension}, {radius}")));
        }
        Ok(SupplyOracle::Ball { dimension, radius })
    }

    pub fn ellipsoid(shape: Vec<Vec<f64>>) -> Result<Self, OracleError> {
        let n = shape.len();
        if n < 2 || shape.iter().any(|r| r.len() != n) {
            return Err(OracleError::Invalid("ellipsoid shape must be square with dimension >= 2".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if (shape[i][j] - shape[j][i]).abs() > 1e-12 * (1.0 + shape[i][j].abs()) {
                    return Err(OracleError::Invalid("ellipsoid shape must be symmetric".into()));
                }
            }
        }
        if cholesky(&shape).is_none() {
            return Err(OracleError::Invalid("ellipsoid shape must be positive definite".into()));
        }
        Ok(SupplyOracle::Ellipsoid { shape })
    }

    /// `s` must lie on the segment `conv{(0,1), (1,0)}` and contain both
    /// endpoints.
    pub fn figure1(s: Vec<Vector>) -> Result<Self, OracleError> {
        let invalid = |m: String| Err(OracleError::Invalid(m));
        if s.iter().any(|z| z.dim() != 2) {
            return invalid("two-corner plans live in the plane".into());
        }
        for z in &s {
            let c = z.coords();
            let mode = c[0].mode();
            let on_segment = c.iter().all(|x| !x.signum().is_lt()) && &c[0] + &c[1] == Scalar::one(mode);
            if !on_segment {
                return invalid(format!("{z} is not on the segment between (1,0) and (0,1)"));
            }
        }
        let has = |a: i64, b: i64| s.iter().any(|z| z.to_f64s() == [a as f64, b as f64]);
        if !has(1, 0) || !has(0, 1) {
            return invalid("S must contain both (1,0) and (0,1)".into());
        }
        let mut unique: Vec<Vector> = Vec::new();
        for z in s {
            if !unique.contains(&z) {
                unique.push(z);
            }
        }
        Ok(SupplyOracle::Figure1 { s: unique })
    }

    /// `S = {(0,1), (1,0)}`.
    pub fn figure1_endpoints() -> Self {
        SupplyOracle::Figure1 { s: vec![Vector::ints(&[0, 1]), Vector::ints(&[1, 0])] }
    }

    /// `S = {(0,1), (1,0), (1/2,1/2)}`.
    pub fn figure1_with_midpoint() -> Self {
        SupplyOracle::Figure1 { s: vec![Vector::ints(&[0, 1]), Vector::ints(&[1, 0]), Vector::ratios(&[(1, 2), (1, 2)])] }
    }

    pub fn rotation(degrees: f64) -> Result<Self, OracleError> {
        if !(degrees > 0.0 && degrees <= 90.0) {
            return Err(OracleError::Invalid(format!("rotation angle must lie in (0, 90] degrees, got {degrees}")));
        }
        Ok(SupplyOracle::Rotation { degrees })
    }

    pub fn dimension(&self) -> usize {
        match self {
            SupplyOracle::Polytope(y) => y.dimension(),
            SupplyOracle::Ball { dimension, .. } => *dimension,
            SupplyOracle::Ellipsoid { shape } => shape.len(),
            SupplyOracle::Figure1 { .. } | SupplyOracle::Rotation { .. } => 2,
        }
    }

    /// Whether answers at exact prices are exact.
    pub fn is_exact(&self) -> bool {
        match self {
            SupplyOracle::Polytope(y) => y.mode() == ScalarMode::Rational,
            SupplyOracle::Figure1 { s } => s.iter().all(|z| z.coords().iter().all(|c| c.mode() == ScalarMode::Rational)),
            SupplyOracle::Rotation { degrees } => *degrees == 90.0,
            SupplyOracle::Ball { .. } | SupplyOracle::Ellipsoid { .. } => false,
        }
    }

    /// Whether the oracle is the argmax correspondence of a convex body.
    pub fn is_strongly_rationalizable(&self) -> bool {
        matches!(self, SupplyOracle::Polytope(_) | SupplyOracle::Ball { .. } | SupplyOracle::Ellipsoid { .. })
    }

    pub fn supply(&self, p: &Vector, arith: &Arith) -> Result<Supply, OracleError> {
        if p.dim() != self.dimension() {
            return Err(OracleError::DimensionMismatch { expected: self.dimension(), found: p.dim() });
        }
        let finite = |plans: Vec<Vector>| Ok(Supply { plans, set_kind: SetKind::Finite });
        match self {
            SupplyOracle::Polytope(y) => {
                let plans = y.argmax_points(p, arith).expect("dimension checked");
                Ok(Supply { plans, set_kind: SetKind::Hull })
            }
            SupplyOracle::Ball { radius, .. } => {
                let v = p.to_f64s();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(OracleError::EntireSet);
                }
                finite(vec![Vector::floats(&v.iter().map(|x| radius * x / norm).collect::<Vec<_>>())])
            }
            SupplyOracle::Ellipsoid { shape } => {
                let v = p.to_f64s();
                let ap: Vec<f64> = shape.iter().map(|row| row.iter().zip(&v).map(|(a, x)| a * x).sum()).collect();
                let q: f64 = ap.iter().zip(&v).map(|(a, x)| a * x).sum();
                if q <= 0.0 {
                    return Err(OracleError::EntireSet);
                }
                let s = q.sqrt();
                finite(vec![Vector::floats(&ap.iter().map(|a| a / s).collect::<Vec<_>>())])
            }
            SupplyOracle::Figure1 { s } => {
                let c = p.coords();
                let mode = s[0].coords()[0].mode();
                let corner = |a, b| Vector::new(vec![Scalar::from_int(a, mode), Scalar::from_int(b, mode)]);
                match arith.compare(&c[0], &c[1]) {
                    std::cmp::Ordering::Greater => finite(vec![corner(1, 0)]),
                    std::cmp::Ordering::Less => finite(vec![corner(0, 1)]),
                    std::cmp::Ordering::Equal => finite(s.clone()),
                }
            }
            SupplyOracle::Rotation { degrees } => {
                let c = p.coords();
                if *degrees == 90.0 && c.iter().all(|x| x.mode() == ScalarMode::Rational) {
                    return finite(vec![Vector::new(vec![-&c[1], c[0].clone()])]);
                }
                let t = degrees * PI / 180.0;
                let (x, y) = (c[0].to_f64(), c[1].to_f64());
                finite(vec![Vector::floats(&[t.cos() * x - t.sin() * y, t.sin() * x + t.cos() * y])])
            }
        }
    }
}

fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

#[derive(Clone, Debug, PartialEq)]
pub enum PriceSampler {
    /// Uniform directions on the unit sphere. In rational mode coordinates
    /// are rounded to multiples of `1 / SPHERE_LATTICE`.
    Sphere { count: usize },
    /// Every integer vector in `[-k, k]^N`, lexicographically.
    Grid { half_width: i64 },
    Explicit(Vec<Vector>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub sampler: PriceSampler,
    /// Positive multipliers; each sampled price `p` is followed by `λ p`.
    pub multipliers: Vec<Scalar>,
    /// Extra prices at which a polytope oracle's face has two or more
    /// generators.
    pub tie_prices: usize,
    pub seed: u64,
    pub mode: ScalarMode,
    pub tolerance: Option<f64>,
}

impl GeneratorConfig {
    pub fn new(sampler: PriceSampler, seed: u64, mode: ScalarMode) -> Self {
        GeneratorConfig { sampler, multipliers: Vec::new(), tie_prices: 0, seed, mode, tolerance: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub dataset: Dataset,
    /// Prices where the oracle answer was not representable.
    pub skipped: usize,
}

/// Samples the oracle's graph.
pub fn generate(oracle: &SupplyOracle, cfg: &GeneratorConfig) -> Result<Generated, ForwardError> {
    let n = oracle.dimension();
    if cfg.mode == ScalarMode::Rational && !oracle.is_exact() {
        return Err(ForwardError::Config("this oracle only runs in float mode".into()));
    }
    for m in &cfg.multipliers {
        if !m.signum().is_gt() {
            return Err(ForwardError::Config(format!("multiplier {m} is not positive")));
        }
    }
    let arith = Arith::new(cfg.mode, cfg.tolerance.unwrap_or(crate::scalar::DEFAULT_TOL));
    let multipliers: Vec<Scalar> = cfg
        .multipliers
        .iter()
        .map(|m| m.to_mode(cfg.mode).ok_or_else(|| ForwardError::Config(format!("multiplier {m} not representable"))))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut prices = match &cfg.sampler {
        PriceSampler::Sphere { count } => (0..*count).map(|_| sphere_price(&mut rng, n, cfg.mode)).collect(),
        PriceSampler::Grid { half_width } => grid_prices(n, *half_width, cfg.mode),
        PriceSampler::Explicit(list) => list
            .iter()
            .map(|p| {
                if p.dim() != n {
                    return Err(ForwardError::Oracle(OracleError::DimensionMismatch { expected: n, found: p.dim() }));
                }
                p.to_mode(cfg.mode).ok_or_else(|| ForwardError::Config(format!("price {p} not representable")))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    if let SupplyOracle::Polytope(y) = oracle {
        for _ in 0..cfg.tie_prices {
            if let Some(p) = tie_price(&mut rng, y, &arith) {
                prices.push(p);
            }
        }
    }

    let mut observations = Vec::new();
    let mut skipped = 0;
    for p in prices {
        let mut ray = vec![p.clone()];
        ray.extend(multipliers.iter().map(|m| p.scale(m)));
        for q in ray {
            match oracle.supply(&q, &arith) {
                Ok(s) => {
                    let plans = s
                        .plans
                        .iter()
                        .map(|z| z.to_mode(cfg.mode).ok_or_else(|| ForwardError::Config(format!("plan {z} not representable"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    observations.push(Observation { price: q, plans, set_kind: s.set_kind });
                }
                Err(OracleError::EntireSet) => skipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    let dataset = Dataset::new(n, cfg.mode, cfg.tolerance.filter(|_| cfg.mode == ScalarMode::Float), PriceDomain::AllReals, observations)?;
    Ok(Generated { dataset, skipped })
}

fn sphere_price(rng: &mut ChaCha8Rng, n: usize, mode: ScalarMode) -> Vector {
    loop {
        let g: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            continue;
        }
        let unit: Vec<f64> = g.iter().map(|x| x / norm).collect();
        match mode {
            ScalarMode::Float => return Vector::floats(&unit),
            ScalarMode::Rational => {
                let v = Vector::new(
                    unit.iter()
                        .map(|x| Scalar::Exact(Rational::new((x * SPHERE_LATTICE as f64).round() as i64, SPHERE_LATTICE)))
                        .collect(),
                );
                if !v.is_zero() {
                    return v;
                }
            }
        }
    }
}

fn grid_prices(n: usize, k: i64, mode: ScalarMode) -> Vec<Vector> {
    let side: Vec<i64> = (-k..=k).collect();
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|prefix| side.iter().map(move |&c| [prefix.clone(), vec![c]].concat())).collect();
    }
    out.into_iter().map(|c| Vector::new(c.into_iter().map(|x| Scalar::from_int(x, mode)).collect())).collect()
}

/// A price at which the face of `y` has at least two generators.
///
/// Starts at a random price with maximizer `g`, picks another generator
/// `h`, and moves along `h - g` until the first generator catches up with
/// `g`. Both then attain the maximum and nothing exceeds them.
fn tie_price(rng: &mut ChaCha8Rng, y: &PolytopeV, arith: &Arith) -> Option<Vector> {
    let gens = y.generators();
    if gens.len() < 2 {
        return None;
    }
    let p = sphere_price(rng, y.dimension(), arith.mode);
    let top = y.argmax_indices(&p, arith).ok()?;
    if top.len() > 1 {
        return Some(p);
    }
    let g = &gens[top[0]];
    let mut other = rng.gen_range(0..gens.len() - 1);
    if other >= top[0] {
        other += 1;
    }
    let dir = gens[other].sub(g);
    let mut best: Option<Scalar> = None;
    for h in gens {
        let gap = g.sub(h);
        let a = dot_unchecked(&p, &gap);
        let b = dot_unchecked(&dir, &gap);
        if b.signum().is_lt() {
            let t = &a / &-&b;
            if best.as_ref().is_none_or(|s| t < *s) {
                best = Some(t);
            }
        }
    }
    Some(p.add(&dir.scale(&best?)))
}

/// A random polytope with 3 to 12 integer generators in `[-box_half, box_half]^dim`.
pub fn random_polytope(rng: &mut ChaCha8Rng, dim: usize, box_half: i64) -> PolytopeV {
    loop {
        let count = rng.gen_range(3..=12);
        let gens: Vec<Vector> =
            (0..count).map(|_| Vector::ints(&(0..dim).map(|_| rng.gen_range(-box_half..=box_half)).collect::<Vec<_>>())).collect();
        let y = PolytopeV::new(dim, gens).expect("valid generators");
        if y.generators().len() >= 3 {
            return y;
        }
    }
}

/// Adds independent uniform noise in `[-sigma, sigma]` to every plan
/// coordinate. Prices are untouched.
pub fn perturb(ds: &Dataset, sigma: f64, seed: u64) -> Result<Dataset, ForwardError> {
    if ds.mode() != ScalarMode::Float {
        return Err(ForwardError::RationalMode);
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(ForwardError::Config(format!("noise scale must be finite and nonnegative, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(ds.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let observations = ds
        .observations()
        .iter()
        .map(|o| Observation {
            price: o.price.clone(),
            plans: o
                .plans
                .iter()
                .map(|z| Vector::floats(&z.to_f64s().iter().map(|x| x + rng.gen_range(-sigma..=sigma)).collect::<Vec<_>>()))
                .collect(),
            set_kind: o.set_kind,
        })
        .collect();
    Ok(ds.with_observations(observations)?)
}

/// Summary of an oracle for reports.
#[derive(Clone, Debug, Serialize)]
pub struct OracleInfo {
    pub kind: &'static str,
    pub dimension: usize,
}

impl From<&SupplyOracle> for OracleInfo {
    fn from(o: &SupplyOracle) -> Self {
        let kind = match o {
            SupplyOracle::Polytope(_) => "polytope",
            SupplyOracle::Ball { .. } => "ball",
            SupplyOracle::Ellipsoid { .. } => "ellipsoid",
            SupplyOracle::Figure1 { .. } => "figure1",
            SupplyOracle::Rotation { .. } => "rotation",
        };
        OracleInfo { kind, dimension: o.dimension() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::{check_cyclic_monotonicity, check_homogeneity, check_law_of_supply, Checker, CheckKind, Witness};

    fn ex() -> Arith {
        Arith::exact()
    }

    #[test]
    fn figure1_branches() {
        let o = SupplyOracle::figure1_endpoints();
        assert_eq!(o.supply(&Vector::ints(&[2, 1]), &ex()).unwrap().plans, vec![Vector::ints(&[1, 0])]);
        assert_eq!(o.supply(&Vector::ints(&[1, 2]), &ex()).unwrap().plans, vec![Vector::ints(&[0, 1])]);
        assert_eq!(o.supply(&Vector::ints(&[3, 3]), &ex()).unwrap().plans.len(), 2);
    }

    #[test]
    fn figure1_validation() {
        assert!(SupplyOracle::figure1(vec![Vector::ints(&[0, 1])]).is_err());
        assert!(SupplyOracle::figure1(vec![Vector::ints(&[0, 1]), Vector::ints(&[1, 0]), Vector::ints(&[1, 1])]).is_err());
        assert!(SupplyOracle::figure1(vec![Vector::ints(&[0, 1]), Vector::ints(&[1, 0]), Vector::ratios(&[(1, 3), (2, 3)])]).is_ok());
    }

    #[test]
    fn ball_supply_matches_dense_boundary_search() {
        let o = SupplyOracle::ball(2, 1.0).unwrap();
        let z = o.supply(&Vector::floats(&[3.0, 4.0]), &Arith::float(1e-9)).unwrap().plans[0].to_f64s();
        assert!((z[0] - 0.6).abs() < 1e-15 && (z[1] - 0.8).abs() < 1e-15);
        // independent oracle: maximize p·z over a dense grid of boundary angles
        let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
        for k in 0..200_000 {
            let t = 2.0 * PI * k as f64 / 200_000.0;
            let v = 3.0 * t.cos() + 4.0 * t.sin();
            if v > best {
                best = v;
                arg = t;
            }
        }
        assert!((arg.cos() - 0.6).abs() < 1e-4 && (arg.sin() - 0.8).abs() < 1e-4);
        assert_eq!(o.supply(&Vector::floats(&[0.0, 0.0]), &Arith::float(1e-9)), Err(OracleError::EntireSet));
    }

    #[test]
    fn rotation_supply() {
        let o = SupplyOracle::rotation(90.0).unwrap();
        assert_eq!(o.supply(&Vector::ints(&[1, 0]), &ex()).unwrap().plans, vec![Vector::ints(&[0, 1])]);
        assert!(SupplyOracle::rotation(0.0).is_err());
        assert!(SupplyOracle::rotation(120.0).is_err());
    }

    #[test]
    fn ellipsoid_validation_and_supply() {
        assert!(SupplyOracle::ellipsoid(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        let o = SupplyOracle::ellipsoid(vec![vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let z = o.supply(&Vector::floats(&[1.0, 0.0]), &Arith::float(1e-9)).unwrap().plans[0].to_f64s();
        assert_eq!(z, vec![2.0, 0.0]);
    }

    fn segment_oracle() -> SupplyOracle {
        SupplyOracle::Polytope(PolytopeV::new(2, vec![Vector::ints(&[0, 1]), Vector::ints(&[1, 0])]).unwrap())
    }

    #[test]
    fn generate_explicit_with_duplicates() {
        let mut cfg = GeneratorConfig::new(
            PriceSampler::Explicit(vec![Vector::ints(&[2, 1]), Vector::ints(&[1, 2]), Vector::ints(&[1, 1])]),
            7,
            ScalarMode::Rational,
        );
        cfg.multipliers = vec![Scalar::ratio(3, 1)];
        let g = generate(&segment_oracle(), &cfg).unwrap();
        assert_eq!(g.dataset.observations().len(), 6);
        assert_eq!(g.skipped, 0);
        let checker = Checker::new(&g.dataset);
        for kind in CheckKind::ALL {
            assert!(checker.run(kind).passed, "{kind:?}");
        }
        let h = checker.homogeneity();
        assert_eq!(h.stats.pairs_examined, 3);
    }

    #[test]
    fn generate_rotation_dataset() {
        let cfg = GeneratorConfig::new(
            PriceSampler::Explicit(vec![Vector::ints(&[1, 0]), Vector::ints(&[0, 1]), Vector::ints(&[-1, 0])]),
            0,
            ScalarMode::Rational,
        );
        let ds = generate(&SupplyOracle::rotation(90.0).unwrap(), &cfg).unwrap().dataset;
        let plans: Vec<Vector> = ds.observations().iter().map(|o| o.plans[0].clone()).collect();
        assert_eq!(plans, vec![Vector::ints(&[0, 1]), Vector::ints(&[-1, 0]), Vector::ints(&[0, -1])]);
        assert!(check_law_of_supply(&ds).passed);
        assert!(!check_cyclic_monotonicity(&ds, None).passed);
    }

    #[test]
    fn empty_price_list() {
        let cfg = GeneratorConfig::new(PriceSampler::Explicit(vec![]), 0, ScalarMode::Rational);
        assert!(generate(&segment_oracle(), &cfg).unwrap().dataset.observations().is_empty());
    }

    #[test]
    fn ball_zero_price_skipped() {
        let cfg = GeneratorConfig::new(PriceSampler::Grid { half_width: 1 }, 0, ScalarMode::Float);
        let g = generate(&SupplyOracle::ball(2, 1.0).unwrap(), &cfg).unwrap();
        assert_eq!(g.skipped, 1);
        assert_eq!(g.dataset.observations().len(), 8);
        assert!(generate(&SupplyOracle::ball(2, 1.0).unwrap(), &GeneratorConfig::new(PriceSampler::Grid { half_width: 1 }, 0, ScalarMode::Rational)).is_err());
    }

    #[test]
    fn generation_is_seed_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let y = random_polytope(&mut rng, 3, 5);
        let mut cfg = GeneratorConfig::new(PriceSampler::Sphere { count: 10 }, 11, ScalarMode::Rational);
        cfg.tie_prices = 5;
        let a = generate(&SupplyOracle::Polytope(y.clone()), &cfg).unwrap();
        let b = generate(&SupplyOracle::Polytope(y.clone()), &cfg).unwrap();
        assert_eq!(a, b);
        cfg.seed = 12;
        assert_ne!(generate(&SupplyOracle::Polytope(y), &cfg).unwrap(), a);
    }

    #[test]
    fn tie_prices_have_multi_point_faces() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for dim in 2..=5 {
            let y = random_polytope(&mut rng, dim, 5);
            for _ in 0..20 {
                let p = tie_price(&mut rng, &y, &ex()).unwrap();
                assert!(y.argmax_indices(&p, &ex()).unwrap().len() >= 2);
            }
        }
    }

    #[test]
    fn perturb_rules() {
        let ds = Dataset::new(
            2,
            ScalarMode::Float,
            None,
            PriceDomain::AllReals,
            vec![
                Observation::finite(Vector::floats(&[2.0, 1.0]), vec![Vector::floats(&[1.0, 0.0])]),
                Observation::finite(Vector::floats(&[4.0, 2.0]), vec![Vector::floats(&[1.0, 0.0])]),
                Observation::finite(Vector::floats(&[1.0, 2.0]), vec![Vector::floats(&[0.0, 1.0])]),
                Observation::finite(Vector::floats(&[2.0, 4.0]), vec![Vector::floats(&[0.0, 1.0])]),
            ],
        )
        .unwrap();
        assert_eq!(perturb(&ds, 0.0, 1).unwrap(), ds);
        let noisy = perturb(&ds, 0.5, 1).unwrap();
        assert_eq!(noisy, perturb(&ds, 0.5, 1).unwrap());
        for (a, b) in ds.observations().iter().zip(noisy.observations()) {
            assert_eq!(a.price, b.price);
            for (x, y) in a.plans[0].to_f64s().iter().zip(b.plans[0].to_f64s()) {
                assert!((x - y).abs() <= 0.5);
            }
        }
        let r = check_law_of_supply(&noisy);
        assert!(!r.passed);
        for w in &r.witnesses {
            let Witness::Monotonicity { a, b, .. } = w else { panic!("unexpected witness") };
            let v: f64 = (0..2).map(|k| (a.price.to_f64s()[k] - b.price.to_f64s()[k]) * (a.plan.to_f64s()[k] - b.plan.to_f64s()[k])).sum();
            assert!(v < -1e-9);
        }
        let exact = Dataset::exact(2, vec![]).unwrap();
        assert_eq!(perturb(&exact, 0.1, 0), Err(ForwardError::RationalMode));
        let single = ds.with_observations(ds.observations()[..1].to_vec()).unwrap();
        assert!(check_law_of_supply(&perturb(&single, 0.7, 3).unwrap()).passed);
        assert!(check_homogeneity(&perturb(&single, 0.7, 3).unwrap()).passed);
    }
}
