//! Rational reduced-rank I(1) families and their representations.
//!
//! A family member is
//!
//! ```text
//! (1 - L) F_t = S(L)^{-1} C(L) u_t,   C(L) = xi eta' + (1 - L) D + (1 - L)^2 E(L),
//! ```
//!
//! with `F_t` of dimension `r`, `u_t` a `q`-dimensional white noise (`q < r`)
//! and cointegration rank `c = r - rank(xi eta')`. From this the module derives
//! the error-correction form `A(L) F_t = h + C(0) u_t`, the split into
//! `q - d` permanent and `d = c - (r - q)` transitory shocks, impulse
//! responses and a handful of diagnostics.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, C64, RANK_TOL};
use crate::polymat::{self, PolyMatrix, SplitMode, ZeroSearchOptions};
use crate::serde_mat;

/// Default horizon for impulse responses.
pub const DEFAULT_IRF_HORIZON: usize = 80;

/// One member of a rational reduced-rank I(1) family with cointegration rank `c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecDocument", into = "SpecDocument")]
pub struct I1FamilySpec {
    pub r: usize,
    pub q: usize,
    pub c: usize,
    /// `r x (r - c)`.
    pub xi: Mat,
    /// `q x (r - c)`.
    pub eta: Mat,
    /// `r x q` coefficient of `(1 - L)`.
    pub d_mat: Mat,
    /// `r x q` coefficient polynomial of `(1 - L)^2`.
    pub e_poly: PolyMatrix,
    /// `r x r`, `S(0) = I`, stable.
    pub s_poly: PolyMatrix,
    /// `q x q` innovation covariance.
    pub gamma_u: Mat,
}

/// On-disk layout of a family specification.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub r: usize,
    pub q: usize,
    pub c: usize,
    #[serde(with = "serde_mat")]
    pub xi: Mat,
    #[serde(with = "serde_mat")]
    pub eta: Mat,
    #[serde(rename = "D", with = "serde_mat")]
    pub d: Mat,
    #[serde(rename = "E")]
    pub e: PolyMatrix,
    #[serde(rename = "S")]
    pub s: PolyMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_u: Option<Vec<Vec<f64>>>,
}

impl TryFrom<SpecDocument> for I1FamilySpec {
    type Error = Error;

    fn try_from(doc: SpecDocument) -> Result<Self> {
        let gamma_u = match doc.gamma_u {
            Some(rows) => serde_mat::from_nested(&rows).map_err(Error::InvalidSpec)?,
            None => Mat::identity(doc.q, doc.q),
        };
        I1FamilySpec::new(doc.r, doc.q, doc.c, doc.xi, doc.eta, doc.d, doc.e, doc.s, gamma_u)
    }
}

impl From<I1FamilySpec> for SpecDocument {
    fn from(s: I1FamilySpec) -> Self {
        SpecDocument {
            r: s.r,
            q: s.q,
            c: s.c,
            xi: s.xi,
            eta: s.eta,
            d: s.d_mat,
            e: s.e_poly,
            s: s.s_poly,
            gamma_u: Some(serde_mat::to_nested(&s.gamma_u)),
        }
    }
}

impl I1FamilySpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        r: usize,
        q: usize,
        c: usize,
        xi: Mat,
        eta: Mat,
        d_mat: Mat,
        e_poly: PolyMatrix,
        s_poly: PolyMatrix,
        gamma_u: Mat,
    ) -> Result<Self> {
        let spec = I1FamilySpec { r, q, c, xi, eta, d_mat, e_poly, s_poly, gamma_u };
        spec.validate()?;
        for w in spec.genericity_warnings() {
            tracing::warn!("{w}");
        }
        Ok(spec)
    }

    /// Number of transitory shocks, `c - (r - q)`.
    pub fn d(&self) -> usize {
        self.c + self.q - self.r
    }

    /// Number of permanent shocks, `r - c`.
    pub fn permanent(&self) -> usize {
        self.r - self.c
    }

    /// Hard checks: dimensions, `S(0) = I`, stability of `S`, and a
    /// positive-definite `gamma_u`.
    pub fn validate(&self) -> Result<()> {
        let (r, q, c) = (self.r, self.q, self.c);
        if !(r > q && q > 0) {
            return Err(Error::InvalidSpec(format!("need r > q > 0, got r={r}, q={q}")));
        }
        if !(c < r && c + q >= r) {
            return Err(Error::InvalidSpec(format!("need r > c >= r - q, got r={r}, q={q}, c={c}")));
        }
        let k = r - c;
        let shapes = [
            ("xi", self.xi.shape(), (r, k)),
            ("eta", self.eta.shape(), (q, k)),
            ("D", self.d_mat.shape(), (r, q)),
            ("E", (self.e_poly.rows(), self.e_poly.cols()), (r, q)),
            ("S", (self.s_poly.rows(), self.s_poly.cols()), (r, r)),
            ("gamma_u", self.gamma_u.shape(), (q, q)),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(Error::InvalidSpec(format!(
                    "{name} is {}x{}, expected {}x{}",
                    got.0, got.1, want.0, want.1
                )));
            }
        }
        if self.s_poly.coeff(0) != Mat::identity(r, r) {
            return Err(Error::InvalidSpec("S(0) must equal the identity".into()));
        }
        let smin = polymat::min_root_modulus(&self.s_poly)?;
        if smin <= 1.0 {
            return Err(Error::InvalidSpec(format!("det S(z) has a root with modulus {smin} <= 1")));
        }
        if linalg::max_abs(&(&self.gamma_u - self.gamma_u.transpose())) > 1e-12 {
            return Err(Error::InvalidSpec("gamma_u must be symmetric".into()));
        }
        if self.gamma_u.clone().cholesky().is_none() {
            return Err(Error::InvalidSpec("gamma_u must be positive definite".into()));
        }
        Ok(())
    }

    /// Rank conditions that hold for generic parameters; violations are
    /// reported, never repaired.
    pub fn genericity_warnings(&self) -> Vec<String> {
        let k = self.r - self.c;
        let mut out = Vec::new();
        let rx = linalg::numerical_rank(&self.xi, RANK_TOL);
        if rx < k {
            out.push(format!("xi has rank {rx} < r - c = {k}"));
        }
        let re = linalg::numerical_rank(&self.eta, RANK_TOL);
        if re < k {
            out.push(format!("eta has rank {re} < r - c = {k}"));
        }
        let null = degenerate_cointegration_vectors(self);
        if null.ncols() > 0 {
            out.push(format!(
                "C(L) has {} constant left null vector(s): degenerate cointegration",
                null.ncols()
            ));
        }
        out
    }

    /// A random member with standard normal `xi`, `eta`, `D`, `0.5 * N(0,1)`
    /// entries in `E(L)` of degree `s1`, and `S(L)` a product of `s2` factors
    /// `I - B L` with spectral radius of `B` equal to 0.5.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, r: usize, q: usize, c: usize, s1: usize, s2: usize) -> Result<Self> {
        let k = r.checked_sub(c).ok_or_else(|| Error::InvalidSpec("c exceeds r".into()))?;
        let mut normal = |rows: usize, cols: usize, scale: f64| {
            Mat::from_fn(rows, cols, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
        };
        let xi = normal(r, k, 1.0);
        let eta = normal(q, k, 1.0);
        let d_mat = normal(r, q, 1.0);
        let e_poly = PolyMatrix::new((0..=s1).map(|_| normal(r, q, 0.5)).collect())?;
        let mut s_poly = PolyMatrix::identity(r);
        for _ in 0..s2 {
            let b = normal(r, r, 1.0);
            let rho = linalg::spectral_radius(&b);
            let b = if rho > 0.0 { b * (0.5 / rho) } else { b };
            s_poly = s_poly.multiply(&PolyMatrix::new(vec![Mat::identity(r, r), -b])?)?;
        }
        I1FamilySpec::new(r, q, c, xi, eta, d_mat, e_poly, s_poly, Mat::identity(q, q))
    }
}

/// Orthonormal basis of the orthogonal complement of the column space of a
/// full-column-rank `b`. Columns are picked greedily from the standard basis
/// (largest residual first, lowest index on ties), so the result is a
/// deterministic function of `b`.
pub fn orth_complement(b: &Mat) -> Result<Mat> {
    let (n, m) = b.shape();
    if m > n {
        return Err(Error::RankDeficient { rank: n, expected: m });
    }
    let rank = linalg::numerical_rank(b, RANK_TOL);
    if rank < m {
        return Err(Error::RankDeficient { rank, expected: m });
    }
    let qb = linalg::orthonormal_basis(b);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n - m);
    let project_out = |v: &mut DVector<f64>, basis: &[DVector<f64>]| {
        for _ in 0..2 {
            for col in qb.column_iter() {
                let dot = col.dot(v);
                *v -= col * dot;
            }
            for u in basis {
                let dot = u.dot(v);
                *v -= u * dot;
            }
        }
    };
    for _ in 0..(n - m) {
        let mut best: Option<DVector<f64>> = None;
        for j in 0..n {
            let mut v = DVector::zeros(n);
            v[j] = 1.0;
            project_out(&mut v, &basis);
            if best.as_ref().is_none_or(|b| v.norm() > b.norm() + 1e-12) {
                best = Some(v);
            }
        }
        let mut v = best.expect("n > 0");
        v /= v.norm();
        project_out(&mut v, &basis);
        v /= v.norm();
        basis.push(v);
    }
    if basis.is_empty() {
        Ok(Mat::zeros(n, 0))
    } else {
        Ok(Mat::from_columns(&basis))
    }
}

/// `C(L) = xi eta' + (1 - L) D + (1 - L)^2 E(L)`.
pub fn build_c_poly(spec: &I1FamilySpec) -> PolyMatrix {
    let long_run = PolyMatrix::constant(&spec.xi * spec.eta.transpose());
    let slope = PolyMatrix::constant(spec.d_mat.clone()).difference();
    let curve = spec.e_poly.difference().difference();
    long_run
        .add(&slope)
        .and_then(|p| p.add(&curve))
        .expect("validated spec has consistent shapes")
}

/// `zeta = [xi_perp'; xi']` and the `r x q` polynomial `M(L)` with
/// `zeta C(L) = diag((1 - L) I_c, I_{r-c}) M(L)`.
pub fn build_m_poly(spec: &I1FamilySpec) -> Result<(Mat, PolyMatrix)> {
    let xi_perp = orth_complement(&spec.xi)
        .map_err(|e| Error::GenericityViolation(format!("xi is not of full column rank: {e}")))?;
    let zeta = linalg::vstack(&[&xi_perp.transpose(), &spec.xi.transpose()]);
    if linalg::numerical_rank(&zeta, RANK_TOL) < spec.r {
        return Err(Error::GenericityViolation("zeta is numerically singular".into()));
    }
    Ok((zeta, m_poly_from(spec, &xi_perp)?))
}

fn m_poly_from(spec: &I1FamilySpec, xi_perp: &Mat) -> Result<PolyMatrix> {
    let xpt = xi_perp.transpose();
    let xt = spec.xi.transpose();
    let q = spec.q;
    let level = PolyMatrix::constant(linalg::vstack(&[&(&xpt * &spec.d_mat), &(&xt * &spec.xi * spec.eta.transpose())]));
    let first = PolyMatrix::vstack(&[
        &spec.e_poly.left_mul(&xpt)?,
        &PolyMatrix::constant(&xt * &spec.d_mat),
    ])?
    .difference();
    let second = PolyMatrix::vstack(&[&PolyMatrix::zeros(spec.c, q), &spec.e_poly.left_mul(&xt)?])?
        .difference()
        .difference();
    level.add(&first)?.add(&second)
}

/// Error-correction representation
/// `A(L) F_t = A*(L)(1 - L) F_t + alpha beta' F_{t-1} = h + C(0) u_t`.
#[derive(Clone, Debug, Serialize)]
pub struct GrangerRep {
    #[serde(with = "serde_mat")]
    pub zeta: Mat,
    #[serde(with = "serde_mat")]
    pub xi_perp: Mat,
    #[serde(rename = "M")]
    pub m_poly: PolyMatrix,
    #[serde(rename = "N")]
    pub n_poly: PolyMatrix,
    #[serde(rename = "A")]
    pub a_poly: PolyMatrix,
    #[serde(rename = "A_star")]
    pub a_star: PolyMatrix,
    #[serde(with = "serde_mat")]
    pub alpha: Mat,
    #[serde(with = "serde_mat")]
    pub beta: Mat,
    #[serde(with = "serde_mat::vector")]
    pub h: DVector<f64>,
    #[serde(with = "serde_mat::vector")]
    pub k: DVector<f64>,
    #[serde(rename = "C0", with = "serde_mat")]
    pub c0: Mat,
}

impl GrangerRep {
    /// `A(1)`, equal to `alpha beta'`.
    pub fn a_at_one(&self) -> Mat {
        self.a_poly.at_one()
    }

    /// Cointegration rank `c`.
    pub fn rank(&self) -> usize {
        self.alpha.ncols()
    }
}

#[derive(Clone, Debug)]
pub struct GrangerOptions {
    pub max_degree: usize,
    pub tol: f64,
    /// Mean of `xi_perp' S(L) F_t`; zero when absent.
    pub k: Option<DVector<f64>>,
}

impl Default for GrangerOptions {
    fn default() -> Self {
        GrangerOptions { max_degree: polymat::DEFAULT_MAX_INVERSE_DEGREE, tol: 1e-10, k: None }
    }
}

pub fn granger_rep(spec: &I1FamilySpec, max_degree: usize) -> Result<GrangerRep> {
    granger_rep_with(spec, &GrangerOptions { max_degree, ..Default::default() })
}

pub fn granger_rep_with(spec: &I1FamilySpec, opts: &GrangerOptions) -> Result<GrangerRep> {
    let (_, m) = build_m_poly(spec)?;
    let n = polymat::left_inverse(&m, opts.max_degree, opts.tol)?;
    granger_rep_from_inverse(spec, &n, opts.k.clone())
}

/// Builds the representation around a caller-supplied left inverse `N(L)`
/// of `M(L)`. Any valid left inverse yields the same impulse responses.
pub fn granger_rep_from_inverse(spec: &I1FamilySpec, n: &PolyMatrix, k: Option<DVector<f64>>) -> Result<GrangerRep> {
    let (r, c) = (spec.r, spec.c);
    let (zeta, m) = build_m_poly(spec)?;
    if (n.rows(), n.cols()) != (r, r) {
        return Err(Error::ShapeMismatch(format!("left inverse must be {r}x{r}")));
    }
    let xi_perp = zeta.rows(0, c).transpose();
    let zeta_inv = linalg::inverse(&zeta)?;
    // [xi_perp'; (1 - L) xi'] = zeta - L [0; xi']
    let mut lagged = Mat::zeros(r, r);
    lagged.rows_mut(c, r - c).copy_from(&(-spec.xi.transpose()));
    let middle = PolyMatrix::new(vec![zeta.clone(), lagged])?;
    let a_poly = n.multiply(&middle)?.multiply(&spec.s_poly)?.left_mul(&zeta_inv)?;
    // A(0) = zeta^{-1} N(0) zeta = I; drop the rounding.
    let mut a_coeffs = a_poly.coeffs().to_vec();
    a_coeffs[0] = Mat::identity(r, r);
    let a_poly = PolyMatrix::new(a_coeffs)?;
    let (a1, a_star) = a_poly.bn_split(SplitMode::Lagged);
    let alpha = &zeta_inv * n.at_one().columns(0, c);
    let beta = spec.s_poly.at_one().transpose() * &xi_perp;
    let k = k.unwrap_or_else(|| DVector::zeros(c));
    if k.len() != c {
        return Err(Error::ShapeMismatch(format!("k has length {}, expected {c}", k.len())));
    }
    let mut padded = DVector::zeros(r);
    padded.rows_mut(0, c).copy_from(&k);
    let h = &a1 * padded;
    let c0 = build_c_poly(spec).coeff(0);
    Ok(GrangerRep { zeta, xi_perp, m_poly: m, n_poly: n.clone(), a_poly, a_star, alpha, beta, h, k, c0 })
}

/// Permanent/transitory split of the shocks.
#[derive(Clone, Debug, Serialize)]
pub struct PtDecomp {
    /// `(D + (1 - L) E(L)) eta_perp_bar`, loads the `d` transitory shocks.
    #[serde(rename = "G1")]
    pub g1: PolyMatrix,
    /// `(D + (1 - L) E(L)) eta_bar`, loads the `q - d` permanent shocks.
    #[serde(rename = "G2")]
    pub g2: PolyMatrix,
    #[serde(with = "serde_mat")]
    pub xi: Mat,
    #[serde(with = "serde_mat")]
    pub eta_bar: Mat,
    #[serde(with = "serde_mat")]
    pub eta_perp_bar: Mat,
    #[serde(with = "serde_mat")]
    pub eta_perp: Mat,
    #[serde(with = "serde_mat")]
    pub eta: Mat,
}

impl PtDecomp {
    pub fn transitory(&self) -> usize {
        self.eta_perp.ncols()
    }

    pub fn permanent(&self) -> usize {
        self.eta.ncols()
    }

    /// `v1 = eta_perp' u` (transitory).
    pub fn transitory_shocks(&self, u: &DVector<f64>) -> DVector<f64> {
        self.eta_perp.transpose() * u
    }

    /// `v2 = eta' u` (permanent).
    pub fn permanent_shocks(&self, u: &DVector<f64>) -> DVector<f64> {
        self.eta.transpose() * u
    }
}

pub fn pt_decompose(spec: &I1FamilySpec) -> Result<PtDecomp> {
    let eta = &spec.eta;
    let eta_perp = orth_complement(eta)?;
    let eta_bar = eta * linalg::inverse(&(eta.transpose() * eta))?;
    let eta_perp_bar = if eta_perp.ncols() == 0 {
        eta_perp.clone()
    } else {
        &eta_perp * linalg::inverse(&(eta_perp.transpose() * &eta_perp))?
    };
    let base = PolyMatrix::constant(spec.d_mat.clone()).add(&spec.e_poly.difference())?;
    Ok(PtDecomp {
        g1: base.right_mul(&eta_perp_bar)?,
        g2: base.right_mul(&eta_bar)?,
        xi: spec.xi.clone(),
        eta_bar,
        eta_perp_bar,
        eta_perp,
        eta: eta.clone(),
    })
}

/// Impulse responses up to horizon `H`: `U_j` of the differences and the
/// cumulated level responses `H_j = U_0 + ... + U_j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrfSet {
    pub horizons: usize,
    #[serde(with = "serde_mat::matrix_list")]
    pub diff_coeffs: Vec<Mat>,
    #[serde(with = "serde_mat::matrix_list")]
    pub level_coeffs: Vec<Mat>,
}

impl IrfSet {
    pub fn from_differences(diff: Vec<Mat>) -> Result<Self> {
        let first = diff.first().ok_or_else(|| Error::EmptyInput("no impulse responses".into()))?;
        let mut acc = Mat::zeros(first.nrows(), first.ncols());
        let level = diff
            .iter()
            .map(|u| {
                acc += u;
                acc.clone()
            })
            .collect();
        Ok(IrfSet { horizons: diff.len() - 1, diff_coeffs: diff, level_coeffs: level })
    }

    pub fn from_levels(level: Vec<Mat>) -> Result<Self> {
        let first = level.first().ok_or_else(|| Error::EmptyInput("no impulse responses".into()))?;
        let mut prev = Mat::zeros(first.nrows(), first.ncols());
        let diff = level
            .iter()
            .map(|h| {
                let d = h - &prev;
                prev = h.clone();
                d
            })
            .collect();
        Ok(IrfSet { horizons: level.len() - 1, diff_coeffs: diff, level_coeffs: level })
    }

    pub fn responses(&self) -> usize {
        self.level_coeffs[0].nrows()
    }

    pub fn shocks(&self) -> usize {
        self.level_coeffs[0].ncols()
    }

    /// Level responses as CSV with columns `lag, response_i_shock_j` (1-based).
    pub fn to_csv(&self) -> String {
        let (n, k) = (self.responses(), self.shocks());
        let mut out = String::from("lag");
        for i in 1..=n {
            for j in 1..=k {
                out.push_str(&format!(",response_{i}_shock_{j}"));
            }
        }
        out.push('\n');
        for (lag, h) in self.level_coeffs.iter().enumerate() {
            out.push_str(&lag.to_string());
            for i in 0..n {
                for j in 0..k {
                    out.push_str(&format!(",{}", h[(i, j)]));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Responses of `F` to `u` implied by `(1 - L) F_t = S(L)^{-1} C(L) u_t`.
pub fn theoretical_irf(spec: &I1FamilySpec, horizon: usize) -> Result<IrfSet> {
    let c = build_c_poly(spec);
    IrfSet::from_differences(polymat::series_quotient(&spec.s_poly, &c, horizon + 1)?)
}

/// Level responses `K_j R` of an autoregression `A(L) F_t = R u_t` with
/// `A(0) = I`, where `K(L) = A(L)^{-1}`.
pub fn ar_level_irf(a: &PolyMatrix, impact: &Mat, horizon: usize) -> Result<IrfSet> {
    let k = polymat::series_quotient(a, &PolyMatrix::identity(a.rows()), horizon + 1)?;
    IrfSet::from_levels(k.iter().map(|kj| kj * impact).collect())
}

/// `r - rank(xi eta')`; warns when it differs from the declared `c`.
pub fn coint_rank_theoretical(spec: &I1FamilySpec, tol: f64) -> usize {
    let rank = linalg::numerical_rank(&(&spec.xi * spec.eta.transpose()), tol);
    let c = spec.r - rank;
    if c != spec.c {
        tracing::warn!(declared = spec.c, implied = c, "cointegration rank differs from declared value");
    }
    c
}

/// Zero-frequency spectral density of `(1 - L) F_t`:
/// `(2 pi)^{-1} S(1)^{-1} C(1) gamma_u C(1)' S(1)^{-T}`.
pub fn spectral_zero(spec: &I1FamilySpec) -> Result<Mat> {
    let s1_inv = linalg::inverse(&spec.s_poly.at_one())?;
    let u1 = s1_inv * &spec.xi * spec.eta.transpose();
    let out = &u1 * &spec.gamma_u * u1.transpose() / (2.0 * std::f64::consts::PI);
    Ok((&out + out.transpose()) * 0.5)
}

#[derive(Clone, Debug, Serialize)]
pub struct FundamentalnessReport {
    pub fundamental: bool,
    /// Points inside the open unit disk where `C(z)` loses rank.
    pub offending_zeros: Vec<(f64, f64)>,
    /// Every maximal minor of `C(z)` vanishes identically.
    pub degenerate: bool,
}

/// Whether `u_t` is fundamental for `(1 - L) F_t`, i.e. `C(z)` has full
/// column rank everywhere inside the open unit disk.
pub fn check_fundamental(spec: &I1FamilySpec) -> Result<FundamentalnessReport> {
    check_fundamental_poly(&build_c_poly(spec))
}

pub fn check_fundamental_poly(c: &PolyMatrix) -> Result<FundamentalnessReport> {
    match polymat::rank_drops_inside_unit_disk(c, &ZeroSearchOptions::default())? {
        None => Ok(FundamentalnessReport { fundamental: false, offending_zeros: Vec::new(), degenerate: true }),
        Some(zeros) => Ok(FundamentalnessReport {
            fundamental: zeros.is_empty(),
            offending_zeros: zeros.iter().map(|z: &C64| (z.re, z.im)).collect(),
            degenerate: false,
        }),
    }
}

/// Constant vectors `w` with `w' C(L) = 0`, as columns.
pub fn degenerate_cointegration_vectors(spec: &I1FamilySpec) -> Mat {
    let c = build_c_poly(spec);
    let refs: Vec<&Mat> = c.coeffs().iter().collect();
    linalg::left_null_space(&linalg::hstack(&refs), RANK_TOL)
}

/// Stacks `U_f(L), L U_f(L), ..., L^p U_f(L)` and returns the `q p` trivial
/// cointegration vectors `t^{h,k}` (+1 at `h`, -1 at `k q + h`).
pub fn stacked_representation(uf: &PolyMatrix, p: usize) -> Result<(PolyMatrix, Vec<DVector<f64>>)> {
    if p == 0 {
        return Err(Error::InvalidSpec("stacking needs p >= 1".into()));
    }
    let q = uf.rows();
    let shifted: Vec<PolyMatrix> = (0..=p).map(|k| uf.shift(k)).collect();
    let refs: Vec<&PolyMatrix> = shifted.iter().collect();
    let u = PolyMatrix::vstack(&refs)?;
    let r = q * (p + 1);
    let mut vectors = Vec::with_capacity(q * p);
    for h in 0..q {
        for k in 1..=p {
            let mut t = DVector::zeros(r);
            t[h] = 1.0;
            t[k * q + h] = -1.0;
            vectors.push(t);
        }
    }
    Ok((u, vectors))
}

/// Builds a spec from raw row-major data; handy in tests and examples.
pub fn mat(rows: usize, cols: usize, data: &[f64]) -> Mat {
    DMatrix::from_row_slice(rows, cols, data)
}
