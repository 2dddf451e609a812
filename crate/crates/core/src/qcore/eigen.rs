use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{invalid, Error, Result};

/// Hermitian inputs may deviate from exact symmetry by at most this much.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;
const RELATIVE_OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// All eigenvalues of a Hermitian matrix, ascending.
///
/// Cyclic Jacobi: each (p, q) step first rotates the phase of `a_pq` onto the
/// real axis with a diagonal unitary, then zeroes it with a real plane
/// rotation. Stops once the off-diagonal Frobenius mass drops below
/// `1e-12 · ‖M‖_F`.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_INPUT_TOL {
        return invalid(format!("matrix is not Hermitian (defect {defect:.3e})"));
    }
    let d = m.dim();
    let mut a = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            a[i * d + j] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
        a[i * d + i].im = 0.0;
    }
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(vec![0.0; d]);
    }
    let target = RELATIVE_OFF_DIAGONAL_TOL * norm;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a, d) < target {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                rotate(&mut a, d, p, q);
            }
        }
    }
    if !converged && off_diagonal_mass(&a, d) >= target {
        return Err(Error::NumericalFailure(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps (dimension {d})")));
    }
    let mut values: Vec<f64> = (0..d).map(|i| a[i * d + i].re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn off_diagonal_mass(a: &[Complex64], d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[i * d + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut [Complex64], d: usize, p: usize, q: usize) {
    let apq = a[p * d + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // Phase step: column q *= conj(phase), row q *= phase, so a_pq becomes r.
    let phase = apq / r;
    for k in 0..d {
        a[k * d + q] *= phase.conj();
    }
    for k in 0..d {
        a[q * d + k] *= phase;
    }

    let app = a[p * d + p].re;
    let aqq = a[q * d + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..d {
        let (bp, bq) = (a[p * d + k], a[q * d + k]);
        a[p * d + k] = bp * c - bq * s;
        a[q * d + k] = bp * s + bq * c;
    }
    for k in 0..d {
        let (bp, bq) = (a[k * d + p], a[k * d + q]);
        a[k * d + p] = bp * c - bq * s;
        a[k * d + q] = bp * s + bq * c;
    }
    a[p * d + q] = Complex64::new(0.0, 0.0);
    a[q * d + p] = Complex64::new(0.0, 0.0);
    a[p * d + p].im = 0.0;
    a[q * d + q].im = 0.0;
}
