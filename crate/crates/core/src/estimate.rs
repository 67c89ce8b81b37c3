//! Least-squares VARs in levels and differences, the Johansen reduced-rank
//! VECM, recursive shock identification and the implied impulse responses.
//!
//! Sign conventions: a levels VAR is `y_t = mu + B_1 y_{t-1} + ... + B_P y_{t-P} + e_t`
//! and a VECM is `dy_t = mu + Pi y_{t-1} + Gamma_1 dy_{t-1} + ... + e_t` with
//! `Pi = alpha beta'`. In the lag-polynomial form `A(L) y_t = e_t` used in
//! [`crate::model`], `A_i = -B_i` and `A(1) = -Pi`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::model::{self, IrfSet};
use crate::polymat::{self, PolyMatrix};
use crate::serde_mat;

/// Regressor matrices with a condition number above this are rejected.
pub const COLLINEARITY_LIMIT: f64 = 1e12;

/// Moment matrices with a condition number above this get a small ridge.
pub const RIDGE_CONDITION: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Levels,
    Differences,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetSpec {
    #[default]
    None,
    Const,
}

#[derive(Clone, Debug, Serialize)]
pub struct VarEstimate {
    pub kind: VarKind,
    pub lag_order: usize,
    /// `B_1 .. B_P`.
    #[serde(with = "serde_mat::matrix_list")]
    pub coeffs: Vec<Mat>,
    #[serde(with = "serde_mat::vector")]
    pub intercept: DVector<f64>,
    #[serde(with = "serde_mat")]
    pub residuals: Mat,
    #[serde(with = "serde_mat")]
    pub sigma: Mat,
}

impl VarEstimate {
    /// `I - B_1 L - ... - B_P L^P`.
    pub fn a_poly(&self) -> PolyMatrix {
        ar_poly(&self.coeffs, self.intercept.len())
    }
}

fn ar_poly(coeffs: &[Mat], r: usize) -> PolyMatrix {
    let mut c = vec![Mat::identity(r, r)];
    c.extend(coeffs.iter().map(|b| -b));
    PolyMatrix::new(c).expect("square coefficient blocks")
}

#[derive(Clone, Debug, Serialize)]
pub struct VecmEstimate {
    #[serde(with = "serde_mat")]
    pub alpha: Mat,
    /// Orthonormal columns.
    #[serde(with = "serde_mat")]
    pub beta: Mat,
    /// `Gamma_1 .. Gamma_{P-1}`.
    #[serde(with = "serde_mat::matrix_list")]
    pub gammas: Vec<Mat>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_vector")]
    pub intercept: Option<DVector<f64>>,
    #[serde(with = "serde_mat")]
    pub residuals: Mat,
    #[serde(with = "serde_mat")]
    pub sigma: Mat,
    /// The `c` largest squared canonical correlations, descending.
    pub eigenvalues: Vec<f64>,
    /// All `r` of them.
    pub all_eigenvalues: Vec<f64>,
    pub ridge: Option<f64>,
}

mod opt_vector {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<DVector<f64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => v.iter().copied().collect::<Vec<f64>>().serialize(s),
            None => s.serialize_none(),
        }
    }
}

impl VecmEstimate {
    /// `Pi = alpha beta'`.
    pub fn pi(&self) -> Mat {
        &self.alpha * self.beta.transpose()
    }

    pub fn lag_order(&self) -> usize {
        self.gammas.len() + 1
    }

    /// Equivalent levels VAR coefficients `B_1 .. B_P`.
    pub fn levels_coeffs(&self) -> Vec<Mat> {
        vecm_to_levels(&self.pi(), &self.gammas)
    }
}

/// `B_1 = I + Pi + Gamma_1`, `B_i = Gamma_i - Gamma_{i-1}`, `B_P = -Gamma_{P-1}`.
pub fn vecm_to_levels(pi: &Mat, gammas: &[Mat]) -> Vec<Mat> {
    let r = pi.nrows();
    let p = gammas.len() + 1;
    let zero = Mat::zeros(r, r);
    let g = |i: usize| if i >= 1 && i <= gammas.len() { &gammas[i - 1] } else { &zero };
    (1..=p)
        .map(|i| {
            let mut b = g(i) - g(i - 1);
            if i == 1 {
                b += Mat::identity(r, r) + pi;
            }
            b
        })
        .collect()
}

/// Inverse of [`vecm_to_levels`]: `Pi = B_1 + ... + B_P - I`,
/// `Gamma_i = -(B_{i+1} + ... + B_P)`.
pub fn levels_to_vecm(b: &[Mat]) -> Result<(Mat, Vec<Mat>)> {
    let r = b.first().ok_or_else(|| Error::EmptyInput("no levels coefficients".into()))?.nrows();
    let mut pi = -Mat::identity(r, r);
    for bi in b {
        pi += bi;
    }
    let gammas = (1..b.len())
        .map(|i| {
            let mut g = Mat::zeros(r, r);
            for bj in &b[i..] {
                g -= bj;
            }
            g
        })
        .collect();
    Ok((pi, gammas))
}

fn difference(y: &Mat) -> Mat {
    let n = y.nrows().saturating_sub(1);
    Mat::from_fn(n, y.ncols(), |t, j| y[(t + 1, j)] - y[(t, j)])
}

/// Least squares `Y = X Theta + E` via thin QR; returns `Theta` and the
/// condition number of `X`.
fn least_squares(x: &Mat, y: &Mat) -> Result<(Mat, f64)> {
    if x.ncols() == 0 {
        return Ok((Mat::zeros(0, y.ncols()), 1.0));
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let s = linalg::singular_values(&r);
    let cond = match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    };
    if cond > COLLINEARITY_LIMIT {
        return Err(Error::Collinear { condition: cond });
    }
    let qty = qr.q().transpose() * y;
    let theta = r
        .solve_upper_triangular(&qty)
        .ok_or(Error::Collinear { condition: cond })?;
    Ok((theta, cond))
}

/// Stacks `[1?, z_{t-1}, ..., z_{t-lags}]` for `t = lags .. n-1`.
fn lagged_design(z: &Mat, lags: usize, first_lag: usize, constant: bool) -> Mat {
    let (n, r) = z.shape();
    let rows = n - lags;
    let cols = usize::from(constant) + r * (lags + 1 - first_lag);
    let mut x = Mat::zeros(rows, cols);
    for t in 0..rows {
        let mut col = 0;
        if constant {
            x[(t, 0)] = 1.0;
            col = 1;
        }
        for k in first_lag..=lags {
            for j in 0..r {
                x[(t, col)] = z[(t + lags - k, j)];
                col += 1;
            }
        }
    }
    x
}

/// Equation-by-equation least squares with an intercept. `kind = Differences`
/// fits the VAR to `y_t - y_{t-1}`.
pub fn ols_var(y: &Mat, lags: usize, kind: VarKind) -> Result<VarEstimate> {
    let r = y.ncols();
    if r == 0 {
        return Err(Error::EmptyInput("no series".into()));
    }
    let parameters = r * lags + 1;
    if y.nrows() <= r * lags + 5 {
        return Err(Error::InsufficientData { observations: y.nrows(), parameters });
    }
    let z = match kind {
        VarKind::Levels => y.clone(),
        VarKind::Differences => difference(y),
    };
    if z.nrows() <= lags + parameters {
        return Err(Error::InsufficientData { observations: z.nrows(), parameters });
    }
    let n = z.nrows() - lags;
    let x = lagged_design(&z, lags, 1, true);
    let target = z.rows(lags, n).into_owned();
    let (theta, _) = least_squares(&x, &target)?;
    let residuals = &target - &x * &theta;
    let sigma = residuals.transpose() * &residuals / n as f64;
    let intercept = theta.row(0).transpose();
    let coeffs = (0..lags)
        .map(|k| theta.rows(1 + k * r, r).transpose())
        .collect();
    Ok(VarEstimate { kind, lag_order: lags, coeffs, intercept, residuals, sigma })
}

fn condition(m: &Mat) -> f64 {
    let (vals, _) = linalg::sym_eig_desc(m);
    match (vals.first(), vals.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

fn with_ridge(m: &Mat, label: &str) -> (Mat, Option<f64>) {
    let cond = condition(m);
    if cond > RIDGE_CONDITION {
        let n = m.nrows();
        let eps = 1e-10 * m.trace() / n as f64;
        tracing::warn!(matrix = label, condition = cond, ridge = eps, "near-singular moment matrix; adding ridge");
        (m + Mat::identity(n, n) * eps, Some(eps))
    } else {
        (m.clone(), None)
    }
}

/// Johansen reduced-rank regression with known rank `c` and `lags - 1`
/// lagged differences.
pub fn johansen_vecm(y: &Mat, lags: usize, c: usize, det: DetSpec) -> Result<VecmEstimate> {
    let (t_obs, r) = y.shape();
    if r == 0 {
        return Err(Error::EmptyInput("no series".into()));
    }
    if lags == 0 {
        return Err(Error::InvalidConfig("a VECM needs at least one levels lag".into()));
    }
    if c == 0 || c >= r {
        return Err(Error::InvalidConfig(format!("cointegration rank must satisfy 0 < c < r, got c={c}, r={r}")));
    }
    let constant = det == DetSpec::Const;
    let parameters = r * lags + usize::from(constant);
    if t_obs <= r * lags + 5 || t_obs <= lags + parameters {
        return Err(Error::InsufficientData { observations: t_obs, parameters });
    }
    let dy = difference(y);
    // rows of dy: dy[s] = y[s+1] - y[s]; sample t = lags .. T-1 in y-indexing
    let n = t_obs - lags;
    let z0 = dy.rows(lags - 1, n).into_owned();
    let z1 = y.rows(lags - 1, n).into_owned();
    let z2 = if lags > 1 || constant {
        let full = lagged_design(&dy, lags - 1, 1, constant);
        Some(full)
    } else {
        None
    };
    let (r0, r1) = match &z2 {
        Some(x) => {
            let (t0, _) = least_squares(x, &z0)?;
            let (t1, _) = least_squares(x, &z1)?;
            (&z0 - x * t0, &z1 - x * t1)
        }
        None => (z0.clone(), z1.clone()),
    };
    let nf = n as f64;
    let s00 = r0.transpose() * &r0 / nf;
    let s11 = r1.transpose() * &r1 / nf;
    let s01 = r0.transpose() * &r1 / nf;
    let (s00r, ridge0) = with_ridge(&s00, "S00");
    let (s11r, ridge1) = with_ridge(&s11, "S11");
    let s00_inv = linalg::inverse(&s00r).map_err(|_| Error::EigenFailure("S00 is singular".into()))?;
    let chol = s11r
        .clone()
        .cholesky()
        .ok_or_else(|| Error::EigenFailure("S11 is not positive definite".into()))?;
    let l_inv = linalg::inverse(&chol.l()).map_err(|_| Error::EigenFailure("S11 factor is singular".into()))?;
    let sym = &l_inv * s01.transpose() * &s00_inv * &s01 * l_inv.transpose();
    let (vals, vecs) = linalg::sym_eig_desc(&sym);
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure("non-finite eigenvalues".into()));
    }
    let all_eigenvalues: Vec<f64> = vals.iter().map(|v| v.clamp(0.0, 1.0 - f64::EPSILON)).collect();
    let raw_beta = l_inv.transpose() * vecs.columns(0, c);
    let beta = linalg::orthonormal_basis(&raw_beta);
    let alpha = &s01 * &beta * linalg::inverse(&(beta.transpose() * &s11 * &beta))?;
    let pi = &alpha * beta.transpose();

    // short-run parameters given Pi
    let target = &z0 - &z1 * pi.transpose();
    let (gammas, intercept, residuals) = match &z2 {
        Some(x) => {
            let (theta, _) = least_squares(x, &target)?;
            let resid = &target - x * &theta;
            let off = usize::from(constant);
            let intercept = constant.then(|| theta.row(0).transpose());
            let gammas = (0..lags - 1).map(|k| theta.rows(off + k * r, r).transpose()).collect();
            (gammas, intercept, resid)
        }
        None => (Vec::new(), None, target),
    };
    let sigma = residuals.transpose() * &residuals / nf;
    Ok(VecmEstimate {
        alpha,
        beta,
        gammas,
        intercept,
        residuals,
        sigma,
        eigenvalues: all_eigenvalues[..c].to_vec(),
        all_eigenvalues,
        ridge: ridge0.or(ridge1),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShockIdentification {
    /// `r x q` impact matrix, upper `q x q` block lower triangular with
    /// nonnegative diagonal.
    #[serde(with = "serde_mat")]
    pub r_hat: Mat,
    #[serde(with = "serde_mat")]
    pub rotation: Mat,
}

/// Rank-`q` factor of `sigma` rotated to the recursive convention.
pub fn identify_shocks(sigma: &Mat, q: usize) -> Result<ShockIdentification> {
    let r = sigma.nrows();
    if sigma.ncols() != r {
        return Err(Error::NonSquare { rows: r, cols: sigma.ncols() });
    }
    if q == 0 || q > r {
        return Err(Error::InvalidConfig(format!("cannot identify {q} shocks from a {r}x{r} covariance")));
    }
    let (vals, mut vecs) = linalg::sym_eig_desc(sigma);
    if vals[q - 1] <= 1e-12 * vals[0].max(0.0) {
        tracing::warn!(q, "covariance has numerical rank below q; using the best rank-q approximation");
    }
    // sign convention: largest-magnitude entry of each eigenvector positive
    for j in 0..q {
        let mut col = vecs.column_mut(j);
        let imax = col.iamax();
        if col[imax] < 0.0 {
            col *= -1.0;
        }
    }
    let k = Mat::from_fn(r, q, |i, j| vecs[(i, j)] * vals[j].max(0.0).sqrt());
    let rotation = linalg::lower_triangularizing_rotation(&k.rows(0, q).into_owned());
    let r_hat = &k * &rotation;
    Ok(ShockIdentification { r_hat, rotation })
}

/// Either kind of fitted model.
#[derive(Clone, Debug)]
pub enum Fitted {
    Var(VarEstimate),
    Vecm(VecmEstimate),
}

impl Fitted {
    pub fn sigma(&self) -> &Mat {
        match self {
            Fitted::Var(v) => &v.sigma,
            Fitted::Vecm(v) => &v.sigma,
        }
    }
}

/// Level impulse responses to the identified shocks.
pub fn irf_from_estimate(est: &Fitted, ident: &ShockIdentification, horizon: usize) -> Result<IrfSet> {
    match est {
        Fitted::Var(v) if v.kind == VarKind::Levels => model::ar_level_irf(&v.a_poly(), &ident.r_hat, horizon),
        Fitted::Var(v) => {
            let k = polymat::series_quotient(&v.a_poly(), &PolyMatrix::identity(v.intercept.len()), horizon + 1)?;
            IrfSet::from_differences(k.iter().map(|kj| kj * &ident.r_hat).collect())
        }
        Fitted::Vecm(v) => model::ar_level_irf(&ar_poly(&v.levels_coeffs(), v.alpha.nrows()), &ident.r_hat, horizon),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{self, VarDynamics};
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn noiseless_var1_is_recovered() {
        let b = Mat::from_row_slice(3, 3, &[0.5, 0.1, 0.0, -0.2, 0.4, 0.3, 0.1, 0.0, 0.6]);
        let mu = DVector::from_vec(vec![0.3, -0.1, 0.2]);
        let mut y = Mat::zeros(15, 3);
        y.row_mut(0).copy_from(&DVector::from_vec(vec![1.0, -2.0, 0.5]).transpose());
        for t in 1..15 {
            let next = &mu + &b * y.row(t - 1).transpose();
            y.row_mut(t).copy_from(&next.transpose());
        }
        let est = ols_var(&y, 1, VarKind::Levels).unwrap();
        assert!(linalg::max_abs(&(&est.coeffs[0] - &b)) < 1e-8);
        assert!((&est.intercept - &mu).amax() < 1e-8);
        assert!(est.residuals.amax() < 1e-8);
    }

    #[test]
    fn normal_equations_hold() {
        let mut rng = simulate::stream_rng(1, 0);
        let y = Mat::from_fn(200, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
        for kind in [VarKind::Levels, VarKind::Differences] {
            let est = ols_var(&y, 2, kind).unwrap();
            let z = if kind == VarKind::Levels { y.clone() } else { difference(&y) };
            let x = lagged_design(&z, 2, 1, true);
            let orth = x.transpose() * &est.residuals;
            assert!(linalg::max_abs(&orth) < 1e-8 * linalg::max_abs(&x) * linalg::max_abs(&est.residuals) * 200.0);
        }
        assert!(matches!(ols_var(&y.rows(0, 12).into_owned(), 3, VarKind::Levels), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn collinear_regressors_are_reported() {
        let mut rng = simulate::stream_rng(2, 0);
        let a = DVector::from_fn(100, |_, _| rng.sample::<f64, _>(StandardNormal));
        let y = Mat::from_fn(100, 2, |t, j| a[t] * (1.0 + j as f64));
        assert!(matches!(ols_var(&y, 1, VarKind::Levels), Err(Error::Collinear { .. })));
    }

    #[test]
    fn vecm_levels_round_trip() {
        let mut rng = simulate::stream_rng(3, 0);
        let mut m = |_: usize| Mat::from_fn(3, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
        let pi = m(0);
        let gammas = vec![m(1), m(2)];
        let b = vecm_to_levels(&pi, &gammas);
        assert_eq!(b.len(), 3);
        let (pi2, g2) = levels_to_vecm(&b).unwrap();
        assert!(linalg::max_abs(&(pi2 - &pi)) < 1e-12);
        for (a, b) in g2.iter().zip(&gammas) {
            assert!(linalg::max_abs(&(a - b)) < 1e-12);
        }
        let b1 = vecm_to_levels(&pi, &[]);
        assert_eq!(b1, vec![Mat::identity(3, 3) + &pi]);
    }

    #[test]
    fn identification_examples() {
        let draw = simulate::draw_dgp(5);
        let sigma = &draw.c0 * draw.c0.transpose();
        let id = identify_shocks(&sigma, 3).unwrap();
        assert!(linalg::max_abs(&(&id.r_hat - &draw.c0)) < 1e-8);

        let l = Mat::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.5, 1.0, 0.0, -0.3, 0.2, 0.7]);
        let id = identify_shocks(&(&l * l.transpose()), 3).unwrap();
        assert!(linalg::max_abs(&(&id.r_hat - &l)) < 1e-10);

        let scaled = identify_shocks(&(&sigma * 4.0), 3).unwrap();
        let base = identify_shocks(&sigma, 3).unwrap();
        assert!(linalg::max_abs(&(&scaled.r_hat - &base.r_hat * 2.0)) < 1e-10);
        assert!(linalg::max_abs(&(&scaled.rotation - &base.rotation)) < 1e-10);
    }

    #[test]
    fn true_parameters_reproduce_theoretical_irfs() {
        let draw = simulate::draw_dgp(8);
        let (spec, _) = simulate::dgp_to_spec(&draw).unwrap();
        let truth = model::theoretical_irf(&spec, 40).unwrap();
        let ident = ShockIdentification { r_hat: draw.c0.clone(), rotation: Mat::identity(3, 3) };
        let r = 4;
        let var = VarEstimate {
            kind: VarKind::Levels,
            lag_order: 2,
            coeffs: vec![draw.a1.clone(), draw.a2.clone()],
            intercept: DVector::zeros(r),
            residuals: Mat::zeros(0, r),
            sigma: Mat::identity(r, r),
        };
        let lv = irf_from_estimate(&Fitted::Var(var.clone()), &ident, 40).unwrap();
        let (pi, gammas) = levels_to_vecm(&var.coeffs).unwrap();
        let vecm = VecmEstimate {
            alpha: pi.clone(),
            beta: Mat::identity(r, r),
            gammas,
            intercept: None,
            residuals: Mat::zeros(0, r),
            sigma: Mat::identity(r, r),
            eigenvalues: vec![],
            all_eigenvalues: vec![],
            ridge: None,
        };
        let vc = irf_from_estimate(&Fitted::Vecm(vecm), &ident, 40).unwrap();
        for j in 0..=40 {
            assert!(linalg::max_abs(&(&lv.level_coeffs[j] - &truth.level_coeffs[j])) < 1e-10);
            assert!(linalg::max_abs(&(&vc.level_coeffs[j] - &truth.level_coeffs[j])) < 1e-10);
        }
        assert_eq!(lv.level_coeffs[0], draw.c0);
        // VECM truth: Pi = -A(1)
        assert!(linalg::max_abs(&(pi + draw.a_at_one())) < 1e-12);
    }

    #[test]
    fn johansen_recovers_cointegration_space() {
        let draw = simulate::draw_dgp(10);
        let (_, rep) = simulate::dgp_to_spec(&draw).unwrap();
        let dynamics = VarDynamics::from_draw(&draw);
        let path = simulate::simulate_factors(&dynamics, 10_000, 200, 10).unwrap();
        let est = johansen_vecm(&path.f, 2, 3, DetSpec::None).unwrap();
        assert!(linalg::max_principal_angle(&est.beta, &rep.beta) < 0.05);
        assert!((est.pi() + draw.a_at_one()).norm() < 0.1);
        assert!(est.all_eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        assert!(est.all_eigenvalues.iter().all(|&v| (0.0..1.0).contains(&v)));
        let with_const = johansen_vecm(&path.f, 2, 3, DetSpec::Const).unwrap();
        assert!(with_const.intercept.is_some());
        assert!(linalg::max_principal_angle(&with_const.beta, &rep.beta) < 0.05);
    }

    #[test]
    fn random_walks_have_no_cointegration_signal() {
        let mut rng = simulate::stream_rng(4, 0);
        let mut y = Mat::zeros(2000, 2);
        for t in 1..2000 {
            for j in 0..2 {
                y[(t, j)] = y[(t - 1, j)] + rng.sample::<f64, _>(StandardNormal);
            }
        }
        let est = johansen_vecm(&y, 1, 1, DetSpec::None).unwrap();
        assert!(*est.all_eigenvalues.last().unwrap() < 0.05);
        assert!(johansen_vecm(&y, 1, 2, DetSpec::None).is_err());
    }

    #[test]
    fn levels_and_vecm_fits_agree_on_a_long_path() {
        let draw = simulate::draw_dgp(13);
        let dynamics = VarDynamics::from_draw(&draw);
        let path = simulate::simulate_factors(&dynamics, 100_000, 200, 13).unwrap();
        let lv = ols_var(&path.f, 2, VarKind::Levels).unwrap();
        let vc = johansen_vecm(&path.f, 2, 3, DetSpec::None).unwrap();
        let il = irf_from_estimate(&Fitted::Var(lv.clone()), &identify_shocks(&lv.sigma, 3).unwrap(), 20).unwrap();
        let iv = irf_from_estimate(&Fitted::Vecm(vc.clone()), &identify_shocks(&vc.sigma, 3).unwrap(), 20).unwrap();
        for j in 0..=20 {
            assert!(linalg::max_abs(&(&il.level_coeffs[j] - &iv.level_coeffs[j])) <= 0.01, "lag {j}");
        }
        let dv = ols_var(&path.f, 2, VarKind::Differences).unwrap();
        let ident = identify_shocks(&dv.sigma, 3).unwrap();
        let id = irf_from_estimate(&Fitted::Var(dv.clone()), &ident, 5).unwrap();
        assert_eq!(id.level_coeffs[0], ident.r_hat);
        assert!(dv.sigma.trace() > vc.sigma.trace());
    }
}
