//! Dense complex matrix aliases and a few helpers shared across modules.

use nalgebra::{DMatrix, DVector};

pub use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Largest entrywise modulus of `a - b`. Panics on shape mismatch.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation from Hermiticity, `max |A_ij - conj(A_ji)|`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `|psi><psi|`.
pub fn outer(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// Eigenpairs of a small Hermitian matrix by cyclic complex Jacobi
/// rotations, ascending. Unlike Householder/QR reduction this resolves
/// small eigenvalues of graded positive semidefinite matrices to high
/// relative accuracy, which matters wherever their square roots are taken.
pub fn jacobi_eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    assert!(a.is_square(), "jacobi_eigh needs a square matrix");
    let mut m = a.clone();
    let mut v = CMatrix::identity(n, n);
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if mag == 0.0 || mag <= f64::EPSILON * 0.5 * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let g_pp = c(cs, 0.0);
                let g_pq = c(sn, 0.0);
                let g_qp = phase.conj() * (-sn);
                let g_qq = phase.conj() * cs;
                // columns: M <- M G
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * g_pp + mkq * g_qp;
                    m[(k, q)] = mkp * g_pq + mkq * g_qq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                // rows: M <- G^dagger M
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
                    m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
                }
                m[(p, q)] = c(0.0, 0.0);
                m[(q, p)] = c(0.0, 0.0);
                m[(p, p)] = c(app - t * mag, 0.0);
                m[(q, q)] = c(aqq + t * mag, 0.0);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let vals = order.iter().map(|&k| m[(k, k)].re).collect();
    let vecs = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    (vals, vecs)
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
