//! Finite-difference checks of the differentiable conditions on a supply
//! function: symmetric, positive semidefinite Jacobian with `Dy(p) p = 0`.

use serde::Serialize;

use crate::forward::{OracleError, SupplyOracle};
use crate::geometry::Vector;
use crate::scalar::{Arith, DEFAULT_TOL};

pub const DEFAULT_STEP: f64 = 1e-5;
pub const DEFAULT_TOL_SYM: f64 = 1e-6;
pub const DEFAULT_TOL_PSD: f64 = 1e-7;
pub const DEFAULT_TOL_EULER: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SmoothError {
    #[error("supply is not single-valued at stencil point {point:?}")]
    Stencil { point: Vec<f64> },
    #[error("oracle undefined at stencil point {point:?}: {source}")]
    Oracle { point: Vec<f64>, source: OracleError },
    #[error("step must be positive and finite, got {0}")]
    Step(f64),
    #[error("price has {found} coordinates, oracle expects {expected}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobianReport {
    pub price: Vec<f64>,
    /// `matrix[i][j] = d y_i / d p_j`.
    pub matrix: Vec<Vec<f64>>,
    pub symmetry_defect: f64,
    pub min_eigenvalue: f64,
    pub euler_residual: f64,
    pub step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub symmetry: f64,
    pub psd: f64,
    pub euler: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { symmetry: DEFAULT_TOL_SYM, psd: DEFAULT_TOL_PSD, euler: DEFAULT_TOL_EULER }
    }
}

impl Tolerances {
    pub fn accepts(&self, r: &JacobianReport) -> bool {
        r.symmetry_defect <= self.symmetry && r.min_eigenvalue >= -self.psd && r.euler_residual <= self.euler
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobianCheck {
    pub passed: bool,
    pub tolerances: Tolerances,
    pub reports: Vec<JacobianReport>,
}

fn eval(o: &SupplyOracle, p: &[f64]) -> Result<Vec<f64>, SmoothError> {
    let arith = Arith::float(DEFAULT_TOL);
    let s = o.supply(&Vector::floats(p), &arith).map_err(|source| SmoothError::Oracle { point: p.to_vec(), source })?;
    match s.plans.as_slice() {
        [z] => Ok(z.to_f64s()),
        _ => Err(SmoothError::Stencil { point: p.to_vec() }),
    }
}

/// Central differences with step `h * max(|p_j|, 1)` in coordinate `j`.
pub fn numeric_jacobian(o: &SupplyOracle, p: &[f64], h: f64) -> Result<Vec<Vec<f64>>, SmoothError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(SmoothError::Step(h));
    }
    let n = o.dimension();
    if p.len() != n {
        return Err(SmoothError::Dimension { expected: n, found: p.len() });
    }
    eval(o, p)?;
    let mut jac = vec![vec![0.0; n]; n];
    for j in 0..n {
        let step = h * p[j].abs().max(1.0);
        let mut up = p.to_vec();
        let mut down = p.to_vec();
        up[j] += step;
        down[j] -= step;
        // the actual spacing after rounding
        let width = up[j] - down[j];
        let (yu, yd) = (eval(o, &up)?, eval(o, &down)?);
        for i in 0..n {
            jac[i][j] = (yu[i] - yd[i]) / width;
        }
    }
    Ok(jac)
}

pub fn jacobian_report(o: &SupplyOracle, p: &[f64], h: f64) -> Result<JacobianReport, SmoothError> {
    let matrix = numeric_jacobian(o, p, h)?;
    let n = matrix.len();
    let mut symmetry_defect: f64 = 0.0;
    let mut sym = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            symmetry_defect = symmetry_defect.max((matrix[i][j] - matrix[j][i]).abs());
            sym[i][j] = 0.5 * (matrix[i][j] + matrix[j][i]);
        }
    }
    let min_eigenvalue = symmetric_eigenvalues(sym).into_iter().fold(f64::INFINITY, f64::min);
    let euler_residual = matrix.iter().map(|row| row.iter().zip(p).map(|(a, x)| a * x).sum::<f64>().abs()).fold(0.0, f64::max);
    Ok(JacobianReport { price: p.to_vec(), matrix, symmetry_defect, min_eigenvalue, euler_residual, step: h })
}

pub fn check_jacobian_conditions(o: &SupplyOracle, prices: &[Vec<f64>], h: f64, tol: Tolerances) -> Result<JacobianCheck, SmoothError> {
    let reports = prices.iter().map(|p| jacobian_report(o, p, h)).collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| tol.accepts(r));
    Ok(JacobianCheck { passed, tolerances: tol, reports })
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= f64::EPSILON * f64::EPSILON * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PolytopeV;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ball() -> SupplyOracle {
        SupplyOracle::ball(2, 1.0).unwrap()
    }

    fn analytic_ball(p: &[f64], r: f64) -> Vec<Vec<f64>> {
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        let n = p.len();
        (0..n).map(|i| (0..n).map(|j| r * ((i == j) as u8 as f64 / norm - p[i] * p[j] / norm.powi(3))).collect()).collect()
    }

    #[test]
    fn ball_at_axis() {
        let j = numeric_jacobian(&ball(), &[1.0, 0.0], 1e-5).unwrap();
        let want = [[0.0, 0.0], [0.0, 1.0]];
        for i in 0..2 {
            for k in 0..2 {
                assert!((j[i][k] - want[i][k]).abs() < 1e-8, "{j:?}");
            }
        }
    }

    #[test]
    fn ball_matches_closed_form_and_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let o = SupplyOracle::ball(3, 2.0).unwrap();
        let prices: Vec<Vec<f64>> = (0..20).map(|_| (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
        for p in &prices {
            let j = numeric_jacobian(&o, p, 1e-5).unwrap();
            let a = analytic_ball(p, 2.0);
            for i in 0..3 {
                for k in 0..3 {
                    assert!((j[i][k] - a[i][k]).abs() < 1e-7);
                }
            }
        }
        assert!(check_jacobian_conditions(&o, &prices, 1e-5, Tolerances::default()).unwrap().passed);
    }

    #[test]
    fn rotation_is_antisymmetric() {
        let o = SupplyOracle::rotation(90.0).unwrap();
        let r = jacobian_report(&o, &[0.3, -1.7], 1e-5).unwrap();
        assert!((r.matrix[0][1] + 1.0).abs() < 1e-9 && (r.matrix[1][0] - 1.0).abs() < 1e-9);
        assert!((r.symmetry_defect - 2.0).abs() < 1e-9);
        let check = check_jacobian_conditions(&o, &[vec![1.0, 0.0], vec![-2.0, 5.0]], 1e-5, Tolerances::default()).unwrap();
        assert!(!check.passed);
        assert!(check.reports.iter().all(|r| r.symmetry_defect > 1.0));

        let o = SupplyOracle::rotation(30.0).unwrap();
        let r = jacobian_report(&o, &[1.0, 1.0], 1e-5).unwrap();
        assert!((r.symmetry_defect - 2.0 * 30f64.to_radians().sin()).abs() < 1e-9);
    }

    #[test]
    fn constant_supply_has_zero_jacobian() {
        let o = SupplyOracle::Polytope(PolytopeV::new(2, vec![Vector::floats(&[0.5, -2.0])]).unwrap());
        let r = jacobian_report(&o, &[1.0, 2.0], 1e-5).unwrap();
        assert!(r.matrix.iter().flatten().all(|&x| x == 0.0));
        assert_eq!(r.euler_residual, 0.0);
    }

    #[test]
    fn euler_along_the_ray() {
        let p = [0.6, -0.8];
        let r1 = jacobian_report(&ball(), &p, 1e-5).unwrap();
        let r2 = jacobian_report(&ball(), &[1.2, -1.6], 1e-5).unwrap();
        assert!(r1.euler_residual < 1e-8 && r2.euler_residual < 1e-8);
    }

    #[test]
    fn stencil_errors() {
        let segment = PolytopeV::new(2, vec![Vector::floats(&[0.0, 1.0]), Vector::floats(&[1.0, 0.0])]).unwrap();
        let o = SupplyOracle::Polytope(segment);
        assert!(matches!(numeric_jacobian(&o, &[1.0, 1.0], 1e-5), Err(SmoothError::Stencil { .. })));
        assert!(matches!(numeric_jacobian(&ball(), &[0.0, 0.0], 1e-5), Err(SmoothError::Oracle { .. })));
        assert_eq!(numeric_jacobian(&ball(), &[1.0, 0.0], 0.0), Err(SmoothError::Step(0.0)));
        assert!(matches!(numeric_jacobian(&ball(), &[1.0], 1e-5), Err(SmoothError::Dimension { .. })));
    }

    #[test]
    fn jacobi_known_spectrum() {
        let mut e = symmetric_eigenvalues(vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]]);
        e.sort_by(f64::total_cmp);
        let s = 2f64.sqrt();
        for (got, want) in e.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn jacobi_preserves_trace_and_frobenius(v in prop::collection::vec(-5.0f64..5.0, 10)) {
            let n = 4;
            let mut a = vec![vec![0.0; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    a[i][j] = v[k];
                    a[j][i] = v[k];
                    k += 1;
                }
            }
            let e = symmetric_eigenvalues(a.clone());
            let trace: f64 = (0..n).map(|i| a[i][i]).sum();
            let frob: f64 = a.iter().flatten().map(|x| x * x).sum();
            prop_assert!((e.iter().sum::<f64>() - trace).abs() < 1e-9);
            prop_assert!((e.iter().map(|x| x * x).sum::<f64>() - frob).abs() < 1e-8);
        }
    }
}
