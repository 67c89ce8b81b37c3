//! Finite matrix polynomials in the lag operator `L`.
//!
//! A [`PolyMatrix`] stores its coefficients lowest power first, so
//! `coeffs[k]` multiplies `L^k`. Everything here is a pure function on
//! immutable values.
//!
//! Serialized form: a JSON array of coefficient matrices, each an array of
//! rows, i.e. `[coeff_index][row][col]`. The identity `I_2 - 0.5 L I_2` is
//! `[[[1,0],[0,1]],[[-0.5,0],[0,-0.5]]]`.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Mat, C64};

/// Roots closer than this (relative to `max(1, |z|)`) are merged into one
/// cluster before rank tests. Multiple roots of determinant polynomials are
/// returned by the companion eigen-solver as rings of radius ~eps^(1/k), so
/// this has to be much looser than machine precision.
pub const ROOT_CLUSTER_TOL: f64 = 1e-5;

/// Roots with modulus at most `1 + STABILITY_MARGIN` are treated as unstable.
pub const STABILITY_MARGIN: f64 = 1e-6;

/// Default maximal degree searched by [`left_inverse`].
pub const DEFAULT_MAX_INVERSE_DEGREE: usize = 12;

// Coefficients of an interpolated determinant below this fraction of the
// Hadamard bound are interpolation noise.
const DET_TRIM_TOL: f64 = 1e-11;

/// A real scalar polynomial, lowest degree first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut p = Polynomial::new(vec![1.0]);
        for &r in roots {
            p = p.mul(&Polynomial::new(vec![-r, 1.0]));
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Coefficient of the highest power.
    pub fn leading(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn roots(&self) -> Result<Vec<C64>> {
        poly_roots(self)
    }
}

/// All complex roots of `p` from the eigenvalues of its companion matrix,
/// each polished by a few guarded Newton steps. A nonzero constant has no
/// roots.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<C64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = p.coeffs();
    let zeros_at_origin = c.iter().take_while(|&&x| x == 0.0).count();
    let reduced = &c[zeros_at_origin..];
    let n = reduced.len() - 1;
    let mut roots = vec![C64::new(0.0, 0.0); zeros_at_origin];
    if n == 0 {
        return Ok(roots);
    }
    let lead = reduced[n];
    let mut companion = Mat::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -reduced[i] / lead;
    }
    let reduced_poly = Polynomial::new(reduced.to_vec());
    for z in companion.complex_eigenvalues().iter() {
        roots.push(polish_root(&reduced_poly, *z));
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn polish_root(p: &Polynomial, mut z: C64) -> C64 {
    let (mut val, _) = p.eval_with_derivative(z);
    for _ in 0..8 {
        let (pv, dp) = p.eval_with_derivative(z);
        if dp.norm() == 0.0 || pv.norm() == 0.0 {
            break;
        }
        let cand = z - pv / dp;
        let cand_val = p.eval(cand);
        if cand_val.norm() < val.norm() {
            z = cand;
            val = cand_val;
        } else {
            break;
        }
    }
    z
}

/// Groups roots whose mutual distance is below `tol * max(1, |z|)`
/// (single linkage). Returns cluster centroids with multiplicities.
pub fn cluster_roots(roots: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1.0_f64.max(roots[i].norm()).max(roots[j].norm());
            if (roots[i] - roots[j]).norm() <= tol * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, C64, usize)> = Vec::new();
    for (i, &z) in roots.iter().enumerate() {
        let root = find(&mut label, i);
        match clusters.iter_mut().find(|(id, _, _)| *id == root) {
            Some((_, sum, count)) => {
                *sum += z;
                *count += 1;
            }
            None => clusters.push((root, z, 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, count)| (sum / count as f64, count))
        .collect()
}

/// Resultant of `a` and `b`: `a_0^m b_0^n prod(alpha_i - beta_j)` where
/// `a_0`, `b_0` are the leading coefficients and `n`, `m` the degrees. It is
/// the determinant of the Sylvester matrix and vanishes iff the polynomials
/// share a root.
pub fn resultant(a: &Polynomial, b: &Polynomial) -> Result<f64> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::DegenerateResultant);
    }
    Ok(sylvester_matrix(a, b).determinant())
}

/// Resultant divided by `a_0^m b_0^n`, i.e. `prod(alpha_i - beta_j)`. This is
/// invariant to rescaling either polynomial.
pub fn normalized_resultant(a: &Polynomial, b: &Polynomial) -> Result<f64> {
    let r = resultant(a, b)?;
    let (n, m) = (a.degree() as i32, b.degree() as i32);
    Ok(r / (a.leading().powi(m) * b.leading().powi(n)))
}

/// `sigma_min / sigma_max` of the Sylvester matrix of the unit-norm
/// polynomials: the relative distance to a pair with a common root. Unlike
/// the resultant it does not grow with the spread of the other roots.
pub fn sylvester_gap(a: &Polynomial, b: &Polynomial) -> f64 {
    let unit = |p: &Polynomial| {
        let n = p.coeffs().iter().map(|c| c * c).sum::<f64>().sqrt();
        Polynomial::new(p.coeffs().iter().map(|c| c / n).collect())
    };
    let s = linalg::singular_values(&sylvester_matrix(&unit(a), &unit(b)));
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 1.0,
    }
}

/// Sylvester matrix with coefficients ordered highest power first.
pub fn sylvester_matrix(a: &Polynomial, b: &Polynomial) -> Mat {
    let (n, m) = (a.degree(), b.degree());
    let size = n + m;
    let mut s = Mat::zeros(size, size);
    let a_hi: Vec<f64> = a.coeffs().iter().rev().copied().collect();
    let b_hi: Vec<f64> = b.coeffs().iter().rev().copied().collect();
    for row in 0..m {
        for (k, &c) in a_hi.iter().enumerate() {
            s[(row, row + k)] = c;
        }
    }
    for row in 0..n {
        for (k, &c) in b_hi.iter().enumerate() {
            s[(m + row, row + k)] = c;
        }
    }
    s
}

/// Which Beveridge-Nelson style split [`PolyMatrix::bn_split`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMode {
    /// `P(L) = P(1) + (1-L) P*(L)`.
    AtOne,
    /// `P(L) = P(1) L + (1-L) P*(L)`.
    Lagged,
}

/// A finite matrix polynomial `P(L) = P_0 + P_1 L + ... + P_s L^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    coeffs: Vec<Mat>,
}

impl PolyMatrix {
    pub fn new(coeffs: Vec<Mat>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::EmptyInput("polynomial matrix needs a coefficient".into()))?;
        let (rows, cols) = first.shape();
        if let Some(bad) = coeffs.iter().find(|c| c.shape() != (rows, cols)) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient {}x{} in a {}x{} polynomial",
                bad.nrows(),
                bad.ncols(),
                rows,
                cols
            )));
        }
        Ok(Self::trimmed(rows, cols, coeffs))
    }

    fn trimmed(rows: usize, cols: usize, mut coeffs: Vec<Mat>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1].iter().all(|&x| x == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Mat::zeros(rows, cols));
        }
        PolyMatrix { rows, cols, coeffs }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, coeffs: vec![Mat::zeros(rows, cols)] }
    }

    pub fn constant(m: Mat) -> Self {
        let (rows, cols) = m.shape();
        PolyMatrix { rows, cols, coeffs: vec![m] }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(Mat::identity(n, n))
    }

    /// `(1 - L) I_n`.
    pub fn one_minus_l(n: usize) -> Self {
        Self::trimmed(n, n, vec![Mat::identity(n, n), -Mat::identity(n, n)])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Mat] {
        &self.coeffs
    }

    /// Coefficient of `L^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Mat {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Mat::zeros(self.rows, self.cols))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|&x| x == 0.0))
    }

    pub fn eval(&self, z: C64) -> CMat {
        let mut acc = CMat::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + linalg::to_complex(c);
        }
        acc
    }

    pub fn eval_real(&self, x: f64) -> Mat {
        let mut acc = Mat::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `P(1)`, the sum of the coefficients.
    pub fn at_one(&self) -> Mat {
        self.coeffs.iter().fold(Mat::zeros(self.rows, self.cols), |acc, c| acc + c)
    }

    pub fn multiply(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = vec![Mat::zeros(self.rows, other.cols); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self::trimmed(self.rows, other.cols, out))
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &PolyMatrix, sign: f64) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let out = (0..len).map(|k| self.coeff(k) + other.coeff(k) * sign).collect();
        Ok(Self::trimmed(self.rows, self.cols, out))
    }

    pub fn scale(&self, s: f64) -> PolyMatrix {
        Self::trimmed(self.rows, self.cols, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `m * P(L)` for a constant matrix `m`.
    pub fn left_mul(&self, m: &Mat) -> Result<PolyMatrix> {
        if m.ncols() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot left-multiply {}x{} polynomial by {}x{}",
                self.rows,
                self.cols,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self::trimmed(m.nrows(), self.cols, self.coeffs.iter().map(|c| m * c).collect()))
    }

    /// `P(L) * m` for a constant matrix `m`.
    pub fn right_mul(&self, m: &Mat) -> Result<PolyMatrix> {
        if m.nrows() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot right-multiply {}x{} polynomial by {}x{}",
                self.rows,
                self.cols,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self::trimmed(self.rows, m.ncols(), self.coeffs.iter().map(|c| c * m).collect()))
    }

    /// `L^k P(L)`.
    pub fn shift(&self, k: usize) -> PolyMatrix {
        let mut out = vec![Mat::zeros(self.rows, self.cols); k];
        out.extend(self.coeffs.iter().cloned());
        Self::trimmed(self.rows, self.cols, out)
    }

    /// `(1 - L) P(L)`.
    pub fn difference(&self) -> PolyMatrix {
        let len = self.coeffs.len() + 1;
        let out = (0..len)
            .map(|k| {
                let prev = if k == 0 { Mat::zeros(self.rows, self.cols) } else { self.coeff(k - 1) };
                self.coeff(k) - prev
            })
            .collect();
        Self::trimmed(self.rows, self.cols, out)
    }

    pub fn transpose(&self) -> PolyMatrix {
        Self::trimmed(self.cols, self.rows, self.coeffs.iter().map(|c| c.transpose()).collect())
    }

    pub fn select_rows(&self, idx: &[usize]) -> PolyMatrix {
        let out = self.coeffs.iter().map(|c| c.select_rows(idx.iter())).collect();
        Self::trimmed(idx.len(), self.cols, out)
    }

    pub fn vstack(blocks: &[&PolyMatrix]) -> Result<PolyMatrix> {
        let cols = blocks.first().map(|b| b.cols).unwrap_or(0);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::ShapeMismatch("vstack of polynomials with different column counts".into()));
        }
        let len = blocks.iter().map(|b| b.coeffs.len()).max().unwrap_or(1);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let out = (0..len)
            .map(|k| {
                let parts: Vec<Mat> = blocks.iter().map(|b| b.coeff(k)).collect();
                let refs: Vec<&Mat> = parts.iter().collect();
                linalg::vstack(&refs)
            })
            .collect();
        Ok(Self::trimmed(rows, cols, out))
    }

    pub fn hstack(blocks: &[&PolyMatrix]) -> Result<PolyMatrix> {
        let rows = blocks.first().map(|b| b.rows).unwrap_or(0);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::ShapeMismatch("hstack of polynomials with different row counts".into()));
        }
        let len = blocks.iter().map(|b| b.coeffs.len()).max().unwrap_or(1);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let out = (0..len)
            .map(|k| {
                let parts: Vec<Mat> = blocks.iter().map(|b| b.coeff(k)).collect();
                let refs: Vec<&Mat> = parts.iter().collect();
                linalg::hstack(&refs)
            })
            .collect();
        Ok(Self::trimmed(rows, cols, out))
    }

    /// Largest absolute coefficient difference; shapes must agree.
    pub fn max_abs_diff(&self, other: &PolyMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).map(|k| linalg::max_abs(&(self.coeff(k) - other.coeff(k)))).fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    /// Splits `P` into `(P(1), P*)` with `P(L) = P(1) + (1-L)P*(L)` or, in
    /// lagged mode, `P(L) = P(1) L + (1-L)P*(L)`.
    pub fn bn_split(&self, mode: SplitMode) -> (Mat, PolyMatrix) {
        let p1 = self.at_one();
        let star = match mode {
            SplitMode::AtOne => {
                // P*_k = -(P_{k+1} + ... + P_s)
                let s = self.degree();
                let mut out = vec![Mat::zeros(self.rows, self.cols); s.max(1)];
                let mut tail = Mat::zeros(self.rows, self.cols);
                for k in (0..s).rev() {
                    tail += &self.coeffs[k + 1];
                    out[k] = -&tail;
                }
                out
            }
            SplitMode::Lagged => {
                // Q(L) = P(L) - P(1)L has Q(1) = 0; Q*_k is the running sum of Q.
                let mut q: Vec<Mat> = (0..self.coeffs.len().max(2)).map(|k| self.coeff(k)).collect();
                q[1] -= &p1;
                let mut out = Vec::with_capacity(q.len() - 1);
                let mut run = Mat::zeros(self.rows, self.cols);
                for qk in q.iter().take(q.len() - 1) {
                    run += qk;
                    out.push(run.clone());
                }
                out
            }
        };
        (p1, Self::trimmed(self.rows, self.cols, star))
    }

    /// Determinant as a scalar polynomial, interpolated from values on the
    /// unit circle by an inverse discrete Fourier transform.
    pub fn det_poly(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::new(vec![1.0]));
        }
        let bound = self.degree() * n;
        let npts = bound + 1;
        let mut values = Vec::with_capacity(npts);
        let mut hadamard = 0.0_f64;
        for k in 0..npts {
            let z = C64::from_polar(1.0, 2.0 * PI * k as f64 / npts as f64);
            let m = self.eval(z);
            let h: f64 = (0..n).map(|i| m.row(i).norm()).product();
            hadamard = hadamard.max(h);
            values.push(m.determinant());
        }
        let mut coeffs: Vec<f64> = (0..npts)
            .map(|j| {
                let s: C64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * C64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / npts as f64))
                    .sum();
                s.re / npts as f64
            })
            .collect();
        let cut = DET_TRIM_TOL * hadamard;
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1].abs() <= cut {
            coeffs.pop();
        }
        if coeffs.len() == 1 && coeffs[0].abs() <= cut {
            coeffs[0] = 0.0;
        }
        Ok(Polynomial::new(coeffs))
    }
}

/// First `n` coefficients of the power series `U(L) = D(L)^{-1} B(L)` for a
/// square `D` with invertible `D(0)`: `U_j = D_0^{-1}(B_j - sum_{i>=1} D_i U_{j-i})`.
pub fn series_quotient(den: &PolyMatrix, num: &PolyMatrix, n: usize) -> Result<Vec<Mat>> {
    if den.rows() != den.cols() || den.cols() != num.rows() {
        return Err(Error::ShapeMismatch(format!(
            "series quotient of {}x{} by {}x{}",
            num.rows(),
            num.cols(),
            den.rows(),
            den.cols()
        )));
    }
    let d0_inv = linalg::inverse(&den.coeff(0))?;
    let mut out: Vec<Mat> = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = num.coeff(j);
        for i in 1..=j.min(den.degree()) {
            acc -= &den.coeffs()[i] * &out[j - i];
        }
        out.push(&d0_inv * acc);
    }
    Ok(out)
}

impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nested: Vec<Vec<Vec<f64>>> = self.coeffs.iter().map(crate::serde_mat::to_nested).collect();
        nested.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let nested: Vec<Vec<Vec<f64>>> = Vec::deserialize(d)?;
        let coeffs = nested
            .iter()
            .map(|m| crate::serde_mat::from_nested(m))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        PolyMatrix::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Row-index subsets of size `k` out of `n`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Tolerances for zero searches of tall polynomial matrices.
#[derive(Clone, Copy, Debug)]
pub struct ZeroSearchOptions {
    /// Relative singular-value threshold for numerical rank.
    pub rank_tol: f64,
    /// Relative distance below which roots are merged.
    pub cluster_tol: f64,
    /// Normalized resultant magnitude a witness pair must exceed.
    pub resultant_tol: f64,
}

impl Default for ZeroSearchOptions {
    fn default() -> Self {
        ZeroSearchOptions { rank_tol: linalg::RANK_TOL, cluster_tol: ROOT_CLUSTER_TOL, resultant_tol: 1e-7 }
    }
}

/// Evidence behind a zeroless verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZerolessWitness {
    /// The minor on these rows has a nonzero constant determinant.
    ConstantMinor { rows: Vec<usize> },
    /// Two minors whose determinant polynomials share no root.
    ResultantPair { first: Vec<usize>, second: Vec<usize>, normalized_resultant: f64 },
    /// Every root of the minor's determinant was checked and gave full rank.
    RootsFullRank { rows: Vec<usize>, roots_checked: usize },
    /// A point where the rank drops below the column count.
    Zero { re: f64, im: f64, rank: usize },
    /// Every maximal minor is identically zero.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZerolessCertificate {
    pub verdict: bool,
    pub witness: ZerolessWitness,
}

struct PrimaryMinor {
    rows: Vec<usize>,
    det: Polynomial,
    /// Cluster centroids of the determinant's roots with multiplicities.
    clusters: Vec<(C64, usize)>,
}

fn primary_minor(v: &PolyMatrix, cluster_tol: f64) -> Result<Option<PrimaryMinor>> {
    for rows in combinations(v.rows(), v.cols()) {
        let det = v.select_rows(&rows).det_poly()?;
        if det.is_zero() {
            continue;
        }
        let roots = poly_roots(&det)?;
        let clusters = cluster_roots(&roots, cluster_tol);
        return Ok(Some(PrimaryMinor { rows, det, clusters }));
    }
    Ok(None)
}

/// Numerical rank of `v(z)`. Singular values are measured against
/// `sum_k |z|^k |V_k|`, the scale of the terms summed to form `v(z)`, so a
/// matrix that cancels to rounding noise at `z` has rank 0.
pub fn rank_at(v: &PolyMatrix, z: C64, tol: f64) -> usize {
    let scale: f64 = v.coeffs().iter().enumerate().map(|(k, c)| z.norm().powi(k as i32) * c.norm()).sum();
    let s = linalg::complex_singular_values(&v.eval(z));
    s.iter().filter(|&&x| x > 0.0 && x >= tol * scale).count()
}

/// Polishes a candidate zero by Gauss-Newton on `v(z) x = 0`, `c^H x = 1`
/// in `(x, z)`. Computed roots of an `m`-fold determinant root scatter by
/// `eps^(1/m)`, but the null-vector system stays regular there.
fn polish_zero(v: &PolyMatrix, z: C64) -> C64 {
    let (rows, cols) = (v.rows(), v.cols());
    let dv = if v.degree() == 0 {
        PolyMatrix::zeros(rows, cols)
    } else {
        PolyMatrix::trimmed(rows, cols, (1..=v.degree()).map(|k| &v.coeffs[k] * k as f64).collect())
    };
    let svd = v.eval(z).svd(false, true);
    let Some(vt) = svd.v_t else { return z };
    let imin = svd.singular_values.imin();
    let mut x: DVector<C64> = vt.row(imin).adjoint();
    let c = x.clone();
    let reach = 0.05 * (1.0 + z.norm());
    let mut p = z;
    for _ in 0..30 {
        let vz = v.eval(p);
        let mut f = DVector::<C64>::zeros(rows + 1);
        f.rows_mut(0, rows).copy_from(&(&vz * &x));
        f[rows] = c.dotc(&x) - C64::new(1.0, 0.0);
        let mut jac = CMat::zeros(rows + 1, cols + 1);
        jac.view_mut((0, 0), (rows, cols)).copy_from(&vz);
        jac.view_mut((0, cols), (rows, 1)).copy_from(&(dv.eval(p) * &x));
        jac.view_mut((rows, 0), (1, cols)).copy_from(&c.adjoint());
        let Ok(delta) = jac.svd(true, true).solve(&(-f), 1e-14) else { break };
        let next = p + delta[cols];
        if !next.re.is_finite() || (next - z).norm() > reach {
            break;
        }
        x += delta.rows(0, cols);
        p = next;
        if delta.norm() < 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    p
}

/// Decides whether a tall polynomial matrix has full column rank at every
/// complex point.
pub fn is_zeroless(v: &PolyMatrix, tol: f64) -> Result<ZerolessCertificate> {
    is_zeroless_with(v, &ZeroSearchOptions { rank_tol: tol, ..Default::default() })
}

pub fn is_zeroless_with(v: &PolyMatrix, opts: &ZeroSearchOptions) -> Result<ZerolessCertificate> {
    if v.rows() <= v.cols() {
        return Err(Error::NotTall { rows: v.rows(), cols: v.cols() });
    }
    let Some(primary) = primary_minor(v, opts.cluster_tol)? else {
        return Ok(ZerolessCertificate { verdict: false, witness: ZerolessWitness::Degenerate });
    };
    if primary.det.degree() == 0 {
        return Ok(ZerolessCertificate {
            verdict: true,
            witness: ZerolessWitness::ConstantMinor { rows: primary.rows },
        });
    }
    for &(z0, _) in &primary.clusters {
        let z = polish_zero(v, z0);
        let rank = rank_at(v, z, opts.rank_tol);
        if rank < v.cols() {
            return Ok(ZerolessCertificate {
                verdict: false,
                witness: ZerolessWitness::Zero { re: z.re, im: z.im, rank },
            });
        }
    }
    // All candidate zeros were cleared; look for a cheaper certificate.
    for rows in combinations(v.rows(), v.cols()).into_iter().filter(|r| *r != primary.rows).take(32) {
        let det = v.select_rows(&rows).det_poly()?;
        if det.is_zero() {
            continue;
        }
        let res = normalized_resultant(&primary.det, &det)?;
        if res.is_finite() && res.abs() > opts.resultant_tol && sylvester_gap(&primary.det, &det) > opts.resultant_tol {
            return Ok(ZerolessCertificate {
                verdict: true,
                witness: ZerolessWitness::ResultantPair {
                    first: primary.rows,
                    second: rows,
                    normalized_resultant: res,
                },
            });
        }
    }
    let roots_checked = primary.clusters.len();
    Ok(ZerolessCertificate {
        verdict: true,
        witness: ZerolessWitness::RootsFullRank { rows: primary.rows, roots_checked },
    })
}

/// Points strictly inside the unit disk where `v(z)` loses column rank.
/// `None` when every maximal minor vanishes identically.
pub fn rank_drops_inside_unit_disk(v: &PolyMatrix, opts: &ZeroSearchOptions) -> Result<Option<Vec<C64>>> {
    if v.rows() < v.cols() {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix cannot have full column rank", v.rows(), v.cols())));
    }
    let Some(primary) = primary_minor(v, opts.cluster_tol)? else {
        return Ok(None);
    };
    Ok(Some(
        primary
            .clusters
            .iter()
            .map(|&(z, _)| polish_zero(v, z))
            .filter(|z| z.norm() < 1.0 - STABILITY_MARGIN)
            .filter(|&z| rank_at(v, z, opts.rank_tol) < v.cols())
            .collect(),
    ))
}

/// True when every root of `det P(z)` lies outside the closed unit disk
/// (with margin). A constant nonzero determinant counts as stable.
pub fn is_stable(p: &PolyMatrix, margin: f64) -> Result<bool> {
    Ok(min_root_modulus(p)? > 1.0 + margin)
}

/// Smallest root modulus of `det P(z)`, `f64::INFINITY` for a nonzero constant.
///
/// With `P(0)` invertible this is `1 / rho(K)` for the block companion matrix
/// `K` of `P(0)^{-1} P(z)`, which avoids expanding the determinant (that
/// expansion loses all accuracy once the coefficients are large).
pub fn min_root_modulus(p: &PolyMatrix) -> Result<f64> {
    if p.rows() != p.cols() {
        return Err(Error::NonSquare { rows: p.rows(), cols: p.cols() });
    }
    let n = p.rows();
    if n == 0 {
        return Ok(f64::INFINITY);
    }
    let p0 = p.coeff(0);
    if linalg::numerical_rank(&p0, 1e-12) < n {
        return Ok(0.0);
    }
    let deg = p.degree();
    if deg == 0 {
        return Ok(f64::INFINITY);
    }
    let p0_inv = linalg::inverse(&p0)?;
    let mut companion = Mat::zeros(n * deg, n * deg);
    for i in 1..=deg {
        let block = -(&p0_inv * p.coeff(i));
        companion.view_mut((0, (i - 1) * n), (n, n)).copy_from(&block);
    }
    for i in 1..deg {
        companion.view_mut((i * n, (i - 1) * n), (n, n)).copy_from(&Mat::identity(n, n));
    }
    let rho = linalg::spectral_radius(&companion);
    Ok(if rho > 0.0 { 1.0 / rho } else { f64::INFINITY })
}

/// Options for [`left_inverse_with`].
#[derive(Clone, Copy, Debug)]
pub struct LeftInverseOptions {
    pub max_degree: usize,
    /// Residual tolerance, relative to `max(1, max |M_k|)`.
    pub tol: f64,
    pub rank_tol: f64,
    pub stability_margin: f64,
    /// Run [`is_zeroless`] before the degree search.
    pub check_zeroless: bool,
}

impl Default for LeftInverseOptions {
    fn default() -> Self {
        LeftInverseOptions {
            max_degree: DEFAULT_MAX_INVERSE_DEGREE,
            tol: 1e-10,
            rank_tol: linalg::RANK_TOL,
            stability_margin: STABILITY_MARGIN,
            check_zeroless: true,
        }
    }
}

/// The solution set of `N(L) M(L) = M(0)` for a fixed degree `p`:
/// `particular` is the minimum-norm solution and every
/// `particular + sum_i t_i * homogeneous[i]` is again a left inverse.
#[derive(Clone, Debug)]
pub struct LeftInverseSet {
    pub degree: usize,
    pub particular: PolyMatrix,
    /// Polynomials `Z(L) = Z_1 L + ... + Z_p L^p` with `Z(L) M(L) = 0`.
    pub homogeneous: Vec<PolyMatrix>,
    /// Largest coefficient of `N(L)M(L) - M(0)` for the particular solution.
    pub residual: f64,
}

/// Solves the convolution equations of `N(L)M(L) = M(0)` with
/// `N(L) = I + N_1 L + ... + N_p L^p` in the minimum-norm sense.
pub fn left_inverse_solutions(m: &PolyMatrix, p: usize, rank_tol: f64) -> Result<LeftInverseSet> {
    let (r, q, s) = (m.rows(), m.cols(), m.degree());
    if p == 0 {
        let n = PolyMatrix::identity(r);
        let residual = n.multiply(m)?.max_abs_diff(&PolyMatrix::constant(m.coeff(0)));
        return Ok(LeftInverseSet { degree: 0, particular: n, homogeneous: Vec::new(), residual });
    }
    let eqs = p + s;
    // Unknown X = [N_1 .. N_p] (r x rp); X * T = -[M_1 .. M_{p+s}].
    let mut toeplitz = Mat::zeros(r * p, q * eqs);
    for i in 1..=p {
        for k in 1..=eqs {
            if k >= i && k - i <= s {
                toeplitz.view_mut(((i - 1) * r, (k - 1) * q), (r, q)).copy_from(&m.coeffs()[k - i]);
            }
        }
    }
    let mut rhs = Mat::zeros(r, q * eqs);
    for k in 1..=eqs {
        rhs.view_mut((0, (k - 1) * q), (r, q)).copy_from(&(-m.coeff(k)));
    }
    let x = &rhs * linalg::pinv(&toeplitz, rank_tol * 1e-3);
    let mut coeffs = vec![Mat::identity(r, r)];
    for i in 0..p {
        coeffs.push(x.view((0, i * r), (r, r)).into_owned());
    }
    let particular = PolyMatrix::new(coeffs)?;
    let residual = particular.multiply(m)?.max_abs_diff(&PolyMatrix::constant(m.coeff(0)));

    let null = linalg::left_null_space(&toeplitz, rank_tol);
    let mut homogeneous = Vec::new();
    for w in null.column_iter() {
        for row in 0..r {
            let mut coeffs = vec![Mat::zeros(r, r)];
            for i in 0..p {
                let mut c = Mat::zeros(r, r);
                for j in 0..r {
                    c[(row, j)] = w[i * r + j];
                }
                coeffs.push(c);
            }
            homogeneous.push(PolyMatrix::new(coeffs)?);
        }
    }
    Ok(LeftInverseSet { degree: p, particular, homogeneous, residual })
}

/// Minimal-degree stable left inverse `N(L) = I + N_1 L + ... + N_p L^p`
/// with `N(L) M(L) = M(0)`.
pub fn left_inverse(m: &PolyMatrix, max_degree: usize, tol: f64) -> Result<PolyMatrix> {
    left_inverse_with(m, &LeftInverseOptions { max_degree, tol, ..Default::default() })
}

pub fn left_inverse_with(m: &PolyMatrix, opts: &LeftInverseOptions) -> Result<PolyMatrix> {
    if m.rows() <= m.cols() {
        return Err(Error::NotTall { rows: m.rows(), cols: m.cols() });
    }
    let rank0 = linalg::numerical_rank(&m.coeff(0), opts.rank_tol);
    if rank0 < m.cols() {
        return Err(Error::RankDeficientAtZero { rank: rank0, cols: m.cols() });
    }
    if opts.check_zeroless {
        let cert = is_zeroless(m, opts.rank_tol)?;
        if !cert.verdict {
            let (re, im, rank) = match cert.witness {
                ZerolessWitness::Zero { re, im, rank } => (re, im, rank),
                _ => (f64::NAN, f64::NAN, 0),
            };
            return Err(Error::NotZeroless { re, im, rank });
        }
    }
    let scale = m.max_abs_coeff().max(1.0);
    let mut best = f64::INFINITY;
    for p in 0..=opts.max_degree {
        let set = left_inverse_solutions(m, p, opts.rank_tol)?;
        best = best.min(set.residual);
        if set.residual <= opts.tol * scale && is_stable(&set.particular, opts.stability_margin)? {
            return Ok(set.particular);
        }
    }
    Err(Error::NoStableInverseWithinDegree { max_degree: opts.max_degree, best_residual: best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[f64]) -> Mat {
        Mat::from_row_slice(rows, cols, v)
    }

    fn pm(coeffs: Vec<Mat>) -> PolyMatrix {
        PolyMatrix::new(coeffs).unwrap()
    }

    fn ab_column(a: f64, b: f64) -> PolyMatrix {
        pm(vec![m(2, 1, &[1.0, 1.0]), m(2, 1, &[a, b])])
    }

    #[test]
    fn trailing_zero_coefficients_are_trimmed() {
        let p = pm(vec![Mat::identity(2, 2), Mat::zeros(2, 2), Mat::zeros(2, 2)]);
        assert_eq!(p.degree(), 0);
        let z = pm(vec![Mat::zeros(2, 3), Mat::zeros(2, 3)]);
        assert_eq!(z.degree(), 0);
        assert!(z.is_zero());
    }

    #[test]
    fn mismatched_coefficient_shapes_are_rejected() {
        assert!(PolyMatrix::new(vec![Mat::zeros(2, 2), Mat::zeros(2, 1)]).is_err());
        assert!(PolyMatrix::new(vec![]).is_err());
    }

    #[test]
    fn eval_examples() {
        let i2 = PolyMatrix::identity(2);
        let v = i2.eval(C64::new(5.0, 0.0));
        assert_eq!(v, linalg::to_complex(&Mat::identity(2, 2)));
        let col = ab_column(0.5, -0.5).eval(C64::new(1.0, 0.0));
        assert!((col[(0, 0)] - C64::new(1.5, 0.0)).norm() < 1e-15);
        assert!((col[(1, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn multiply_examples() {
        let p = ab_column(0.3, 0.7);
        assert_eq!(PolyMatrix::identity(2).multiply(&p).unwrap(), p);
        let plus = pm(vec![Mat::identity(2, 2), Mat::identity(2, 2)]);
        let prod = PolyMatrix::one_minus_l(2).multiply(&plus).unwrap();
        let expect = pm(vec![Mat::identity(2, 2), Mat::zeros(2, 2), -Mat::identity(2, 2)]);
        assert_eq!(prod, expect);
        assert!(p.multiply(&p).is_err());
    }

    #[test]
    fn bn_split_examples() {
        let (p1, star) = PolyMatrix::identity(2).bn_split(SplitMode::AtOne);
        assert_eq!(p1, Mat::identity(2, 2));
        assert!(star.is_zero());

        let b = m(2, 2, &[0.4, 0.1, -0.2, 0.3]);
        let p = pm(vec![Mat::identity(2, 2), -&b]);
        let (a1, star) = p.bn_split(SplitMode::Lagged);
        assert!(linalg::max_abs(&(a1 - (Mat::identity(2, 2) - &b))) < 1e-15);
        assert_eq!(star.degree(), 0);
        assert!(linalg::max_abs(&(star.coeff(0) - Mat::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn det_poly_examples() {
        let d = PolyMatrix::identity(2).det_poly().unwrap();
        assert_eq!(d.degree(), 0);
        assert!((d.coeffs()[0] - 1.0).abs() < 1e-14);
        let d = PolyMatrix::one_minus_l(2).det_poly().unwrap();
        let expect = [1.0, -2.0, 1.0];
        assert_eq!(d.degree(), 2);
        for (c, e) in d.coeffs().iter().zip(expect) {
            assert!((c - e).abs() < 1e-14);
        }
        assert!(pm(vec![Mat::zeros(2, 3)]).det_poly().is_err());
    }

    #[test]
    fn det_poly_of_projection_bracket_matches_symbolic_expansion() {
        // I - B z with B = [[ab, a^2], [b^2, -ab]] / (b - a) as displayed.
        // Symbolic: det = 1 - tr(B) z + det(B) z^2 = 1 + 0 z + (-a^2 b^2 - a^2 b^2)/(b-a)^2 z^2.
        let (a, b) = (0.5_f64, -0.5_f64);
        let s = b - a;
        let bm = m(2, 2, &[a * b / s, a * a / s, b * b / s, -a * b / s]);
        let p = pm(vec![Mat::identity(2, 2), -bm]);
        let d = p.det_poly().unwrap();
        let quad = -2.0 * a * a * b * b / (s * s);
        let expect = [1.0, 0.0, quad];
        assert_eq!(d.degree(), 2);
        for (c, e) in d.coeffs().iter().zip(expect) {
            assert!((c - e).abs() < 1e-14, "{c} vs {e}");
        }
    }

    #[test]
    fn root_examples() {
        let r = poly_roots(&Polynomial::new(vec![1.0, -1.0])).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - C64::new(1.0, 0.0)).norm() < 1e-14);

        let r = poly_roots(&Polynomial::new(vec![1.0, -2.0, 1.0])).unwrap();
        assert_eq!(r.len(), 2);
        for z in &r {
            assert!((z - C64::new(1.0, 0.0)).norm() < 1e-7);
        }

        let p = Polynomial::new(vec![1.0, -0.6]).mul(&Polynomial::new(vec![1.0, -0.3]));
        let r = poly_roots(&p).unwrap();
        assert!((r[0] - C64::new(1.0 / 0.6, 0.0)).norm() < 1e-10);
        assert!((r[1] - C64::new(1.0 / 0.3, 0.0)).norm() < 1e-10);

        assert!(matches!(poly_roots(&Polynomial::new(vec![0.0])), Err(Error::ZeroPolynomial)));
        assert!(poly_roots(&Polynomial::new(vec![3.0])).unwrap().is_empty());
    }

    #[test]
    fn roots_at_origin_are_kept() {
        let r = poly_roots(&Polynomial::new(vec![0.0, 0.0, 2.0, -1.0])).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(r.iter().any(|z| (z - C64::new(2.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn resultant_examples() {
        let z1 = Polynomial::new(vec![-1.0, 1.0]);
        assert!(resultant(&z1, &z1).unwrap().abs() < 1e-15);
        let r = resultant(&Polynomial::new(vec![-2.0, 1.0]), &Polynomial::new(vec![-3.0, 1.0])).unwrap();
        assert!((r + 1.0).abs() < 1e-14);
        let r = resultant(&Polynomial::new(vec![-1.0, 0.0, 1.0]), &z1).unwrap();
        assert!(r.abs() < 1e-15);
        assert!(matches!(resultant(&Polynomial::new(vec![0.0]), &z1), Err(Error::DegenerateResultant)));
    }

    #[test]
    fn resultant_matches_product_formula() {
        // a = 2(z - 1)(z + 2), b = -3(z - 0.5)
        let a = Polynomial::from_roots(&[1.0, -2.0]).mul(&Polynomial::new(vec![2.0]));
        let b = Polynomial::from_roots(&[0.5]).mul(&Polynomial::new(vec![-3.0]));
        let expect = 2.0_f64.powi(1) * (-3.0_f64).powi(2) * (1.0 - 0.5) * (-2.0 - 0.5);
        assert!((resultant(&a, &b).unwrap() - expect).abs() < 1e-12);
        assert!((normalized_resultant(&a, &b).unwrap() - (0.5 * -2.5)).abs() < 1e-12);
    }

    #[test]
    fn zeroless_examples() {
        let v = pm(vec![m(2, 1, &[1.0, 0.0]), m(2, 1, &[0.0, 1.0])]);
        let cert = is_zeroless(&v, 1e-10).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.witness, ZerolessWitness::ConstantMinor { rows: vec![0] });

        let v = pm(vec![m(2, 1, &[1.0, 0.0]), m(2, 1, &[-1.0, 1.0]), m(2, 1, &[0.0, -1.0])]);
        let cert = is_zeroless(&v, 1e-10).unwrap();
        assert!(!cert.verdict);
        match cert.witness {
            ZerolessWitness::Zero { re, im, rank } => {
                assert!((re - 1.0).abs() < 1e-8 && im.abs() < 1e-8);
                assert_eq!(rank, 0);
            }
            other => panic!("unexpected witness {other:?}"),
        }

        assert!(matches!(is_zeroless(&PolyMatrix::identity(2), 1e-10), Err(Error::NotTall { .. })));
    }

    #[test]
    fn zeroless_certificate_with_resultant_pair() {
        let v = ab_column(0.5, -0.5);
        let cert = is_zeroless(&v, 1e-10).unwrap();
        assert!(cert.verdict);
        match cert.witness {
            ZerolessWitness::ResultantPair { normalized_resultant, .. } => {
                // roots -2 and 2
                assert!((normalized_resultant.abs() - 4.0).abs() < 1e-10);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn all_minors_zero_is_degenerate() {
        let v = PolyMatrix::zeros(3, 2);
        let cert = is_zeroless(&v, 1e-10).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.witness, ZerolessWitness::Degenerate);
    }

    #[test]
    fn constant_full_rank_has_identity_inverse() {
        let c = PolyMatrix::constant(m(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]));
        let n = left_inverse(&c, 12, 1e-10).unwrap();
        assert_eq!(n, PolyMatrix::identity(3));
    }

    #[test]
    fn two_by_one_example_has_degree_one_inverse() {
        let (a, b) = (0.5, -0.5);
        let c = ab_column(a, b);
        let n = left_inverse(&c, 12, 1e-10).unwrap();
        assert_eq!(n.degree(), 1);
        // N = I - B L with B from substituting u_t = (b dF1 - a dF2)/(b - a).
        let s = b - a;
        let bmat = m(2, 2, &[a * b / s, -a * a / s, b * b / s, -a * b / s]);
        assert!(linalg::max_abs(&(n.coeff(1) + &bmat)) < 1e-12);
        assert!(linalg::max_abs(&(bmat - m(2, 2, &[0.25, 0.25, -0.25, -0.25]))) < 1e-15);
        let prod = n.multiply(&c).unwrap();
        assert!(prod.max_abs_diff(&PolyMatrix::constant(m(2, 1, &[1.0, 1.0]))) < 1e-12);
    }

    #[test]
    fn three_shock_example_inverse_is_not_unique() {
        let c = pm(vec![m(3, 1, &[1.0, 1.0, 1.0]), m(3, 1, &[0.5, -0.3, 0.2])]);
        let set = left_inverse_solutions(&c, 1, 1e-10).unwrap();
        assert!(set.residual < 1e-12);
        assert!(!set.homogeneous.is_empty());
        let alt = set.particular.add(&set.homogeneous[0].scale(0.1)).unwrap();
        let target = PolyMatrix::constant(c.coeff(0));
        assert!(alt.multiply(&c).unwrap().max_abs_diff(&target) < 1e-12);
        assert!(alt.max_abs_diff(&set.particular) > 1e-3);
        let n = left_inverse(&c, 12, 1e-10).unwrap();
        assert!(n.multiply(&c).unwrap().max_abs_diff(&target) < 1e-12);
        assert!(is_stable(&n, STABILITY_MARGIN).unwrap());
    }

    #[test]
    fn non_zeroless_input_is_rejected() {
        let v = pm(vec![m(2, 1, &[1.0, 0.0]), m(2, 1, &[-1.0, 1.0]), m(2, 1, &[0.0, -1.0])]);
        assert!(matches!(left_inverse(&v, 12, 1e-10), Err(Error::NotZeroless { .. })));
        let v = pm(vec![m(2, 1, &[0.0, 0.0]), m(2, 1, &[1.0, 2.0])]);
        assert!(matches!(left_inverse(&v, 12, 1e-10), Err(Error::RankDeficientAtZero { .. })));
    }

    #[test]
    fn serde_uses_nested_arrays() {
        let p = pm(vec![Mat::identity(2, 2), m(2, 2, &[-0.5, 0.0, 0.0, -0.5])]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[[1.0,0.0],[0.0,1.0]],[[-0.5,0.0],[0.0,-0.5]]]");
        let back: PolyMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<PolyMatrix>("[[[1.0],[2.0]],[[1.0,2.0]]]").is_err());
    }

    #[test]
    fn series_quotient_inverts_first_order_factor() {
        // (1 - 0.5 L)^{-1} = sum 0.5^j L^j
        let den = pm(vec![m(1, 1, &[1.0]), m(1, 1, &[-0.5])]);
        let u = series_quotient(&den, &PolyMatrix::identity(1), 6).unwrap();
        for (j, uj) in u.iter().enumerate() {
            assert!((uj[(0, 0)] - 0.5_f64.powi(j as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
