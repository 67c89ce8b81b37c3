//! Dense linear-algebra helpers shared by the modelling and estimation code.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type CMat = DMatrix<Complex<f64>>;
pub type C64 = Complex<f64>;

/// Default relative threshold for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-10;

pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn complex_singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values at least `tol * sigma_max`. A zero matrix has rank 0.
pub fn rank_from_singular_values(s: &[f64], tol: f64) -> usize {
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&v| v >= tol * smax).count(),
        _ => 0,
    }
}

pub fn numerical_rank(m: &Mat, tol: f64) -> usize {
    rank_from_singular_values(&singular_values(m), tol)
}

pub fn complex_rank(m: &CMat, tol: f64) -> usize {
    rank_from_singular_values(&complex_singular_values(m), tol)
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    m.clone().try_inverse().ok_or(Error::SingularMatrix)
}

/// Moore-Penrose pseudo-inverse with singular values below `tol * sigma_max` discarded.
pub fn pinv(m: &Mat, tol: f64) -> Mat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Mat::zeros(m.ncols(), m.nrows());
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cut = tol * smax;
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let mut out = Mat::zeros(m.ncols(), m.nrows());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cut && s > 0.0 {
            out += (vt.row(k).transpose() * u.column(k).transpose()) / s;
        }
    }
    out
}

/// Orthonormal basis of the left null space of `m` (vectors w with w' m = 0),
/// returned as columns. Directions with singular value at most
/// `tol * sigma_max` count as null.
pub fn left_null_space(m: &Mat, tol: f64) -> Mat {
    let (n, k) = m.shape();
    if k == 0 || n == 0 {
        return Mat::identity(n, n);
    }
    // SVD of the transpose padded to at least n rows yields a full n x n V.
    let mut mt = m.transpose();
    if k < n {
        mt = vstack(&[&mt, &Mat::zeros(n - k, n)]);
    }
    let svd = mt.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max();
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol * smax)
        .map(|(i, _)| vt.row(i).transpose())
        .collect();
    if cols.is_empty() {
        Mat::zeros(n, 0)
    } else {
        Mat::from_columns(&cols)
    }
}

/// Symmetric eigen-decomposition with eigenvalues sorted in decreasing order.
pub fn sym_eig_desc(m: &Mat) -> (Vec<f64>, Mat) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = Mat::from_fn(m.nrows(), idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

pub fn spectral_radius(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Orthonormal basis of the column space of a full-column-rank `b` (thin QR).
pub fn orthonormal_basis(b: &Mat) -> Mat {
    if b.ncols() == 0 {
        return Mat::zeros(b.nrows(), 0);
    }
    b.clone().qr().q()
}

/// LQ-type factorisation of a square matrix: returns an orthogonal `q` such that
/// `m * q` is lower triangular with nonnegative diagonal.
pub fn lower_triangularizing_rotation(m: &Mat) -> Mat {
    let n = m.nrows();
    // m' = Q R  =>  m Q = R', lower triangular.
    let qr = m.transpose().qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..n.min(r.nrows()) {
        if r[(i, i)] < 0.0 {
            let mut col = q.column_mut(i);
            col *= -1.0;
        }
    }
    q
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |a, &b| a.max(b.abs()))
}

/// Largest principal angle (radians) between the column spaces of `a` and `b`.
pub fn max_principal_angle(a: &Mat, b: &Mat) -> f64 {
    let qa = orthonormal_basis(a);
    let qb = orthonormal_basis(b);
    let s = singular_values(&(qa.transpose() * qb));
    let smin = s.last().copied().unwrap_or(0.0).clamp(-1.0, 1.0);
    smin.acos()
}

/// Vertically stacks matrices with equal column counts.
pub fn vstack(blocks: &[&Mat]) -> Mat {
    let cols = blocks.first().map(|b| b.ncols()).unwrap_or(0);
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut r0 = 0;
    for b in blocks {
        out.view_mut((r0, 0), (b.nrows(), cols)).copy_from(*b);
        r0 += b.nrows();
    }
    out
}

/// Horizontally stacks matrices with equal row counts.
pub fn hstack(blocks: &[&Mat]) -> Mat {
    let rows = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut c0 = 0;
    for b in blocks {
        out.view_mut((0, c0), (rows, b.ncols())).copy_from(*b);
        c0 += b.ncols();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_makes_lower_triangular() {
        let m = Mat::from_row_slice(3, 3, &[1.0, 2.0, 3.0, -1.0, 0.5, 2.0, 0.3, 0.2, 4.0]);
        let q = lower_triangularizing_rotation(&m);
        let l = &m * &q;
        for i in 0..3 {
            assert!(l[(i, i)] >= 0.0);
            for j in (i + 1)..3 {
                assert!(l[(i, j)].abs() < 1e-12);
            }
        }
        assert!(max_abs(&(q.transpose() * &q - Mat::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn pinv_of_tall_matrix_is_left_inverse() {
        let m = Mat::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 0.0, 2.0]);
        let p = pinv(&m, 1e-12);
        assert!(max_abs(&(p * &m - Mat::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn left_null_space_annihilates() {
        let m = Mat::from_row_slice(3, 1, &[1.0, 1.0, 1.0]);
        let n = left_null_space(&m, 1e-10);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(n.transpose() * m)) < 1e-12);
    }

    #[test]
    fn principal_angle_of_same_space_is_zero() {
        let a = Mat::from_row_slice(3, 1, &[1.0, 2.0, 3.0]);
        let b = &a * -2.0;
        assert!(max_principal_angle(&a, &b) < 1e-7);
        let c = Mat::from_row_slice(3, 1, &[-2.0, 1.0, 0.0]);
        assert!((max_principal_angle(&a, &c) - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }
}
