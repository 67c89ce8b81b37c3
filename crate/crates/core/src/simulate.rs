//! Data generation: the four-variable Monte Carlo design, factor paths from an
//! autoregressive representation, observable panels and the subvector
//! cointegration predictor.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, RANK_TOL};
use crate::model::{self, GrangerRep, I1FamilySpec, PtDecomp};
use crate::polymat::{self, PolyMatrix};
use crate::serde_mat;

/// Default number of discarded initial observations.
pub const DEFAULT_BURN_IN: usize = 200;

/// Roots of `det A(z)` may sit on the unit circle (the unit roots of the
/// levels process) but not inside it.
const EXPLOSIVE_TOL: f64 = 1e-5;

/// ChaCha8 generator on an explicit stream. Monte Carlo code uses the
/// replication index (plus attempt/sample-size bits) as the stream id so that
/// replications are independent of scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Dimensions of the Monte Carlo design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgpShape {
    pub r: usize,
    pub q: usize,
    pub c: usize,
}

impl Default for DgpShape {
    fn default() -> Self {
        DgpShape { r: 4, q: 3, c: 3 }
    }
}

/// One draw of the design
/// `(I - M1 L)(I - U1 L) F_t = C0 u_t`, `C0 = G H`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DgpDraw {
    pub shape: DgpShape,
    #[serde(rename = "U1", with = "serde_mat")]
    pub u1: Mat,
    #[serde(rename = "M1", with = "serde_mat")]
    pub m1: Mat,
    #[serde(rename = "A1", with = "serde_mat")]
    pub a1: Mat,
    #[serde(rename = "A2", with = "serde_mat")]
    pub a2: Mat,
    #[serde(rename = "G", with = "serde_mat")]
    pub g: Mat,
    #[serde(rename = "Hmix", with = "serde_mat")]
    pub hmix: Mat,
    #[serde(rename = "C0", with = "serde_mat")]
    pub c0: Mat,
    pub seed: u64,
}

impl DgpDraw {
    /// `A(L) = I - A1 L - A2 L^2`.
    pub fn a_poly(&self) -> PolyMatrix {
        let r = self.shape.r;
        PolyMatrix::new(vec![Mat::identity(r, r), -self.a1.clone(), -self.a2.clone()]).expect("square blocks")
    }

    /// `A(1) = (I - M1)(I - U1)`.
    pub fn a_at_one(&self) -> Mat {
        let r = self.shape.r;
        (Mat::identity(r, r) - &self.m1) * (Mat::identity(r, r) - &self.u1)
    }
}

pub fn draw_dgp(seed: u64) -> DgpDraw {
    draw_dgp_with(DgpShape::default(), seed).expect("default shape is valid")
}

pub fn draw_dgp_with(shape: DgpShape, seed: u64) -> Result<DgpDraw> {
    let DgpShape { r, q, c } = shape;
    if !(r > q && q > 0 && c < r && c + q >= r) {
        return Err(Error::InvalidConfig(format!("invalid design shape r={r}, q={q}, c={c}")));
    }
    let mut rng = stream_rng(seed, 0);
    let mut u1 = Mat::from_fn(r, r, |i, j| {
        if i == j {
            rng.random_range(0.5..0.8)
        } else {
            rng.random_range(0.0..0.3)
        }
    });
    u1 *= 0.6 / linalg::spectral_radius(&u1);

    let mut m1 = Mat::zeros(r, r);
    for i in 0..(r - c) {
        m1[(i, i)] = 1.0;
    }

    // Haar orthogonal matrix: QR of a Gaussian matrix with R's diagonal made positive.
    let gauss = Mat::from_fn(r, r, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = gauss.qr();
    let mut g_check = qr.q();
    let rr = qr.r();
    for j in 0..r {
        if rr[(j, j)] < 0.0 {
            let mut col = g_check.column_mut(j);
            col *= -1.0;
        }
    }
    let scales: Vec<f64> = (0..q).map(|_| rng.random_range(0.8_f64..1.2).sqrt()).collect();
    let g = Mat::from_fn(r, q, |i, j| g_check[(i, j)] * scales[j]);
    let hmix = linalg::lower_triangularizing_rotation(&g.rows(0, q).into_owned());
    let c0 = &g * &hmix;

    let a1 = &m1 + &u1;
    let a2 = -(&m1 * &u1);
    Ok(DgpDraw { shape, u1, m1, a1, a2, g, hmix, c0, seed })
}

/// The draw written as a family member: `S(L) = I - U1 L`,
/// `C(L) = diag(I_{r-c}, (1 - L) I_c) C0`, together with its
/// error-correction representation.
pub fn dgp_to_spec(draw: &DgpDraw) -> Result<(I1FamilySpec, GrangerRep)> {
    let DgpShape { r, q, c } = draw.shape;
    let k = r - c;
    let mut xi = Mat::zeros(r, k);
    for i in 0..k {
        xi[(i, i)] = 1.0;
    }
    let eta = draw.c0.transpose() * &xi;
    let mut d_mat = draw.c0.clone();
    d_mat.rows_mut(0, k).fill(0.0);
    let s_poly = PolyMatrix::new(vec![Mat::identity(r, r), -draw.u1.clone()])?;
    let spec = I1FamilySpec::new(r, q, c, xi, eta, d_mat, PolyMatrix::zeros(r, q), s_poly, Mat::identity(q, q))?;
    let rep = model::granger_rep(&spec, polymat::DEFAULT_MAX_INVERSE_DEGREE)?;
    let rank = linalg::numerical_rank(&rep.a_at_one(), 1e-9);
    if rank != c {
        return Err(Error::InconsistentDraw { rank, expected: c });
    }
    Ok((spec, rep))
}

/// Autoregressive data-generating recursion `A(L) F_t = h + C0 u_t` with `A(0) = I`.
#[derive(Clone, Debug)]
pub struct VarDynamics {
    pub a_poly: PolyMatrix,
    pub h: DVector<f64>,
    pub c0: Mat,
    pub gamma_u: Mat,
}

impl VarDynamics {
    pub fn new(a_poly: PolyMatrix, h: DVector<f64>, c0: Mat, gamma_u: Mat) -> Result<Self> {
        let r = a_poly.rows();
        if a_poly.cols() != r || h.len() != r || c0.nrows() != r || gamma_u.shape() != (c0.ncols(), c0.ncols()) {
            return Err(Error::ShapeMismatch("inconsistent VAR dynamics".into()));
        }
        if a_poly.coeff(0) != Mat::identity(r, r) {
            return Err(Error::InvalidSpec("A(0) must equal the identity".into()));
        }
        Ok(VarDynamics { a_poly, h, c0, gamma_u })
    }

    pub fn from_rep(rep: &GrangerRep, gamma_u: &Mat) -> Result<Self> {
        VarDynamics::new(rep.a_poly.clone(), rep.h.clone(), rep.c0.clone(), gamma_u.clone())
    }

    pub fn from_draw(draw: &DgpDraw) -> Self {
        let (r, q) = (draw.shape.r, draw.shape.q);
        VarDynamics { a_poly: draw.a_poly(), h: DVector::zeros(r), c0: draw.c0.clone(), gamma_u: Mat::identity(q, q) }
    }

    pub fn r(&self) -> usize {
        self.a_poly.rows()
    }

    pub fn q(&self) -> usize {
        self.c0.ncols()
    }

    pub fn check_not_explosive(&self) -> Result<()> {
        let modulus = polymat::min_root_modulus(&self.a_poly)?;
        if modulus < 1.0 - EXPLOSIVE_TOL {
            return Err(Error::Explosive { modulus });
        }
        Ok(())
    }
}

/// A simulated factor path. Row `t` of `f` and `u` is period `t + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SimPath {
    #[serde(with = "serde_mat")]
    pub f: Mat,
    #[serde(with = "serde_mat")]
    pub u: Mat,
    /// The `deg A` levels preceding the retained sample.
    #[serde(with = "serde_mat")]
    pub presample: Mat,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_mat")]
    pub v1: Option<Mat>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_mat")]
    pub v2: Option<Mat>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_mat")]
    pub trend: Option<Mat>,
    #[serde(with = "serde_mat::vector")]
    pub w: DVector<f64>,
    pub burn_in: usize,
}

mod opt_mat {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(m: &Option<Mat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match m {
            Some(m) => serde_mat::to_nested(m).serialize(s),
            None => s.serialize_none(),
        }
    }
}

impl SimPath {
    pub fn len(&self) -> usize {
        self.f.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.f.nrows() == 0
    }

    /// Level at retained index `t`, reaching into the presample for `t < 0`.
    fn level(&self, t: isize) -> DVector<f64> {
        if t >= 0 {
            self.f.row(t as usize).transpose()
        } else {
            let p = self.presample.nrows() as isize;
            self.presample.row((p + t) as usize).transpose()
        }
    }

    /// `max_t |A(L) F_t - h - C0 u_t|` over the retained sample.
    pub fn recursion_residual(&self, dynamics: &VarDynamics) -> f64 {
        let deg = dynamics.a_poly.degree() as isize;
        let mut worst = 0.0_f64;
        for t in 0..self.len() {
            let mut e = self.level(t as isize) - &dynamics.h - &dynamics.c0 * self.u.row(t).transpose();
            for k in 1..=deg {
                if t as isize - k < -(self.presample.nrows() as isize) {
                    break;
                }
                e += &dynamics.a_poly.coeffs()[k as usize] * self.level(t as isize - k);
            }
            worst = worst.max(e.amax());
        }
        worst
    }

    /// Fills `v1 = eta_perp' u`, `v2 = eta' u` and `trend_t = xi (v2_1 + ... + v2_t)`.
    pub fn attach_pt(&mut self, pt: &PtDecomp) {
        let v1 = &self.u * &pt.eta_perp;
        let v2 = &self.u * &pt.eta;
        let mut trend = Mat::zeros(self.len(), pt.xi.nrows());
        let mut acc = DVector::zeros(v2.ncols());
        for t in 0..self.len() {
            acc += v2.row(t).transpose();
            trend.row_mut(t).copy_from(&(&pt.xi * &acc).transpose());
        }
        self.v1 = Some(v1);
        self.v2 = Some(v2);
        self.trend = Some(trend);
    }

    /// Largest gap between `C(L) u_t` and its rebuild
    /// `(1 - L) G1(L) v1_t + (1 - L) G2(L) v2_t + (1 - L) trend_t` from the
    /// attached shocks, over retained `t` where all lags are available.
    pub fn pt_reconstruction_error(&self, spec: &I1FamilySpec, pt: &PtDecomp) -> Result<f64> {
        let (v1, v2, trend) = match (&self.v1, &self.v2, &self.trend) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(Error::InvalidSpec("permanent/transitory shocks are not attached".into())),
        };
        let c_poly = model::build_c_poly(spec);
        let g1 = pt.g1.difference();
        let g2 = pt.g2.difference();
        let lags = c_poly.degree().max(g1.degree()).max(g2.degree());
        let mut worst = 0.0_f64;
        for t in (lags + 1)..self.len() {
            let mut direct = DVector::zeros(spec.r);
            for (k, ck) in c_poly.coeffs().iter().enumerate() {
                direct += ck * self.u.row(t - k).transpose();
            }
            let mut rebuilt = (trend.row(t) - trend.row(t - 1)).transpose();
            for (k, gk) in g1.coeffs().iter().enumerate() {
                if gk.ncols() > 0 {
                    rebuilt += gk * v1.row(t - k).transpose();
                }
            }
            for (k, gk) in g2.coeffs().iter().enumerate() {
                rebuilt += gk * v2.row(t - k).transpose();
            }
            worst = worst.max((direct - rebuilt).amax());
        }
        Ok(worst)
    }

    /// CSV with columns `t, F1..Fr, u1..uq`, `t` starting at 1.
    pub fn to_csv(&self) -> String {
        let (r, q) = (self.f.ncols(), self.u.ncols());
        let mut out = String::from("t");
        for i in 1..=r {
            out.push_str(&format!(",F{i}"));
        }
        for i in 1..=q {
            out.push_str(&format!(",u{i}"));
        }
        out.push('\n');
        for t in 0..self.len() {
            out.push_str(&(t + 1).to_string());
            for v in self.f.row(t).iter().chain(self.u.row(t).iter()) {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs the recursion forward from zero initial conditions and drops the
/// first `burn_in` periods.
pub fn simulate_factors(dynamics: &VarDynamics, t: usize, burn_in: usize, seed: u64) -> Result<SimPath> {
    simulate_factors_with_rng(dynamics, t, burn_in, &mut stream_rng(seed, 0))
}

pub fn simulate_factors_with_rng<R: Rng + ?Sized>(
    dynamics: &VarDynamics,
    t: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<SimPath> {
    dynamics.check_not_explosive()?;
    let q = dynamics.q();
    let chol = dynamics
        .gamma_u
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidSpec("gamma_u must be positive definite".into()))?
        .l();
    let total = t + burn_in;
    let mut u = Mat::zeros(total, q);
    for i in 0..total {
        let z = DVector::from_fn(q, |_, _| rng.sample::<f64, _>(StandardNormal));
        u.row_mut(i).copy_from(&(&chol * z).transpose());
    }
    simulate_from_shocks(dynamics, &u, burn_in)
}

/// Deterministic part of the simulation: levels implied by a given shock
/// sequence (including burn-in rows).
pub fn simulate_from_shocks(dynamics: &VarDynamics, u: &Mat, burn_in: usize) -> Result<SimPath> {
    let (r, q) = (dynamics.r(), dynamics.q());
    if u.ncols() != q {
        return Err(Error::ShapeMismatch(format!("shocks have {} columns, expected {q}", u.ncols())));
    }
    let total = u.nrows();
    if burn_in > total {
        return Err(Error::InvalidConfig("burn-in exceeds the number of shocks".into()));
    }
    let deg = dynamics.a_poly.degree();
    let coeffs = dynamics.a_poly.coeffs();
    let mut f = Mat::zeros(total, r);
    for s in 0..total {
        let mut x = &dynamics.h + &dynamics.c0 * u.row(s).transpose();
        for (k, ak) in coeffs.iter().enumerate().take(deg.min(s) + 1).skip(1) {
            x -= ak * f.row(s - k).transpose();
        }
        f.row_mut(s).copy_from(&x.transpose());
    }
    let mut presample = Mat::zeros(deg, r);
    for i in 0..deg {
        // presample row i is period burn_in - deg + i (zero before the start)
        let s = burn_in as isize - deg as isize + i as isize;
        if s >= 0 {
            presample.row_mut(i).copy_from(&f.row(s as usize));
        }
    }
    Ok(SimPath {
        f: f.rows(burn_in, total - burn_in).into_owned(),
        u: u.rows(burn_in, total - burn_in).into_owned(),
        presample,
        v1: None,
        v2: None,
        trend: None,
        w: DVector::zeros(r),
        burn_in,
    })
}

/// Order of integration of an idiosyncratic component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdioOrder {
    I0,
    I1,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "order", rename_all = "snake_case", deny_unknown_fields)]
pub enum IdioComponent {
    /// `e_t = ar e_{t-1} + scale w_t`, `|ar| < 1`, started from its stationary law.
    I0 { ar: f64, scale: f64 },
    /// `e_t = e_{t-1} + scale w_t`, `e_0 = 0`.
    I1 { scale: f64 },
}

impl IdioComponent {
    pub fn order(&self) -> IdioOrder {
        match self {
            IdioComponent::I0 { .. } => IdioOrder::I0,
            IdioComponent::I1 { .. } => IdioOrder::I1,
        }
    }

    /// Spectral density of `(1 - L) e_t` at frequency zero.
    pub fn diff_density_at_zero(&self) -> f64 {
        match *self {
            IdioComponent::I0 { .. } => 0.0,
            IdioComponent::I1 { scale } => scale * scale / (2.0 * std::f64::consts::PI),
        }
    }
}

/// `x_t = Lambda F_t + e_t` with independent idiosyncratic components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSpec {
    #[serde(rename = "Lambda", with = "serde_mat")]
    pub lambda: Mat,
    pub idio: Vec<IdioComponent>,
}

impl PanelSpec {
    pub fn new(lambda: Mat, idio: Vec<IdioComponent>) -> Result<Self> {
        let p = PanelSpec { lambda, idio };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.lambda.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        let (n, r) = self.lambda.shape();
        if n < r {
            return Err(Error::InvalidSpec(format!("panel size {n} is below the number of factors {r}")));
        }
        if self.idio.len() != n {
            return Err(Error::InvalidSpec(format!("{} idiosyncratic components for {n} series", self.idio.len())));
        }
        for c in &self.idio {
            match *c {
                IdioComponent::I0 { ar, scale } if !(ar.abs() < 1.0 && scale >= 0.0) => {
                    return Err(Error::InvalidSpec(format!("invalid I(0) component ar={ar}, scale={scale}")));
                }
                IdioComponent::I1 { scale } if scale < 0.0 => {
                    return Err(Error::InvalidSpec(format!("negative random-walk scale {scale}")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn orders(&self) -> Vec<IdioOrder> {
        self.idio.iter().map(IdioComponent::order).collect()
    }
}

/// `T x n` panel. Each series draws its idiosyncratic noise from its own stream.
pub fn simulate_panel(path: &SimPath, panel: &PanelSpec, seed: u64) -> Result<Mat> {
    panel.validate()?;
    if panel.lambda.ncols() != path.f.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "Lambda has {} columns but the path has {} factors",
            panel.lambda.ncols(),
            path.f.ncols()
        )));
    }
    let mut x = &path.f * panel.lambda.transpose();
    for (i, comp) in panel.idio.iter().enumerate() {
        let mut rng = stream_rng(seed, i as u64);
        let mut e = match *comp {
            IdioComponent::I0 { ar, scale } => scale / (1.0 - ar * ar).sqrt() * rng.sample::<f64, _>(StandardNormal),
            IdioComponent::I1 { .. } => 0.0,
        };
        for t in 0..x.nrows() {
            let w: f64 = rng.sample(StandardNormal);
            e = match *comp {
                IdioComponent::I0 { ar, scale } => ar * e + scale * w,
                IdioComponent::I1 { scale } => e + scale * w,
            };
            x[(t, i)] += e;
        }
    }
    Ok(x)
}

/// CSV with columns `t, x1..xn`.
pub fn panel_to_csv(x: &Mat) -> String {
    let mut out = String::from("t");
    for i in 1..=x.ncols() {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    for t in 0..x.nrows() {
        out.push_str(&(t + 1).to_string());
        for v in x.row(t).iter() {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubvectorPrediction {
    /// The common component `Lambda^(p) F_t` is cointegrated.
    pub chi_cointegrated: bool,
    /// The observable subvector is cointegrated.
    pub x_cointegrated: bool,
    pub rank_lambda_xi: usize,
    pub reason: String,
}

/// Cointegration of a `p`-dimensional subvector with loadings `lambda_p`
/// (`p x r`). The common component is cointegrated iff
/// `rank(Lambda^(p) xi) < p`; the observables additionally need the
/// cointegrating combination to avoid the series with I(1) idiosyncratic
/// parts, i.e. `rank(Lambda^(I0) xi) < |I0|`.
pub fn predict_subvector_cointegration(
    lambda_p: &Mat,
    spec: &I1FamilySpec,
    idio: &[IdioOrder],
) -> Result<SubvectorPrediction> {
    let p = lambda_p.nrows();
    if lambda_p.ncols() != spec.r || idio.len() != p {
        return Err(Error::ShapeMismatch(format!(
            "loadings are {}x{} with {} idiosyncratic flags; expected p x {} with p flags",
            p,
            lambda_p.ncols(),
            idio.len(),
            spec.r
        )));
    }
    let lx = lambda_p * &spec.xi;
    let rank = linalg::numerical_rank(&lx, RANK_TOL);
    let chi = rank < p;
    let stationary: Vec<usize> = (0..p).filter(|&i| idio[i] == IdioOrder::I0).collect();
    let (x, reason) = if stationary.len() == p {
        let why = if chi {
            format!("rank(Lambda xi) = {rank} < p = {p}; idiosyncratic parts are I(0)")
        } else {
            format!("rank(Lambda xi) = {rank} = p; common trends are not annihilated")
        };
        (chi, why)
    } else {
        let sub = Mat::from_fn(stationary.len(), lx.ncols(), |i, j| lx[(stationary[i], j)]);
        let sub_rank = linalg::numerical_rank(&sub, RANK_TOL);
        let x = sub_rank < stationary.len();
        let why = format!(
            "{} series carry I(1) idiosyncratic parts; rank over the I(0) series is {sub_rank} of {}",
            p - stationary.len(),
            stationary.len()
        );
        (x, why)
    };
    Ok(SubvectorPrediction { chi_cointegrated: chi, x_cointegrated: x, rank_lambda_xi: rank, reason })
}

/// Zero-frequency spectral densities of `(1 - L) chi_t`, `(1 - L) e_t` and
/// `(1 - L) x_t`.
pub fn zero_frequency_densities(spec: &I1FamilySpec, panel: &PanelSpec) -> Result<(Mat, Mat, Mat)> {
    let f0 = model::spectral_zero(spec)?;
    let chi = &panel.lambda * f0 * panel.lambda.transpose();
    let eps = Mat::from_diagonal(&DVector::from_iterator(
        panel.n(),
        panel.idio.iter().map(IdioComponent::diff_density_at_zero),
    ));
    let x = &chi + &eps;
    Ok((chi, eps, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draw_dgp_contract() {
        let d = draw_dgp(7);
        assert!((linalg::spectral_radius(&d.u1) - 0.6).abs() < 1e-10);
        for i in 0..3 {
            assert!(d.c0[(i, i)] >= 0.0);
            for j in (i + 1)..3 {
                assert!(d.c0[(i, j)].abs() <= 1e-12);
            }
        }
        assert_eq!(draw_dgp(7), d);
        assert_ne!(draw_dgp(8).u1, d.u1);
        // (I - M1 L)(I - U1 L) = I - (M1 + U1) L + M1 U1 L^2
        let i4 = Mat::identity(4, 4);
        let prod = PolyMatrix::new(vec![i4.clone(), -d.m1.clone()])
            .unwrap()
            .multiply(&PolyMatrix::new(vec![i4, -d.u1.clone()]).unwrap())
            .unwrap();
        assert!(prod.max_abs_diff(&d.a_poly()) < 1e-15);
        // G has orthogonal columns with squared norms in [0.8, 1.2]
        let gram = d.g.transpose() * &d.g;
        for i in 0..3 {
            assert!(gram[(i, i)] > 0.8 - 1e-12 && gram[(i, i)] < 1.2 + 1e-12);
            for j in 0..3 {
                if i != j {
                    assert!(gram[(i, j)].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dgp_to_spec_matches_the_draw() {
        let d = draw_dgp(11);
        let (spec, rep) = dgp_to_spec(&d).unwrap();
        assert_eq!(spec.d(), 2);
        assert!(rep.a_poly.max_abs_diff(&d.a_poly()) < 1e-12);
        assert_eq!(linalg::numerical_rank(&rep.a_at_one(), 1e-9), 3);
        assert_eq!(rep.a_poly.coeff(0), Mat::identity(4, 4));
        assert!(linalg::max_abs(&(rep.c0.clone() - &d.c0)) < 1e-15);
        assert!(linalg::max_abs(&(rep.a_at_one() - d.a_at_one())) < 1e-12);
        let irf = model::theoretical_irf(&spec, 200).unwrap();
        assert!(linalg::max_abs(&(rep.beta.transpose() * &irf.level_coeffs[200])) < 1e-6);
        let ar = model::ar_level_irf(&d.a_poly(), &d.c0, 60).unwrap();
        for j in 0..=60 {
            assert!(linalg::max_abs(&(&ar.level_coeffs[j] - &irf.level_coeffs[j])) < 1e-10);
        }
    }

    #[test]
    fn zero_shocks_give_zero_path() {
        let dynamics = VarDynamics::from_draw(&draw_dgp(1));
        let path = simulate_from_shocks(&dynamics, &Mat::zeros(50, 3), 10).unwrap();
        assert_eq!(path.f, Mat::zeros(40, 4));
    }

    #[test]
    fn recursion_holds_on_simulated_paths() {
        let dynamics = VarDynamics::from_draw(&draw_dgp(2));
        let path = simulate_factors(&dynamics, 500, DEFAULT_BURN_IN, 3).unwrap();
        assert_eq!(path.len(), 500);
        assert!(path.recursion_residual(&dynamics) <= 1e-9);
        let again = simulate_factors(&dynamics, 500, DEFAULT_BURN_IN, 3).unwrap();
        assert_eq!(again.f, path.f);
        let no_burn = simulate_factors(&dynamics, 30, 0, 3).unwrap();
        assert!(no_burn.recursion_residual(&dynamics) <= 1e-12);
    }

    #[test]
    fn explosive_dynamics_are_rejected() {
        let a = PolyMatrix::new(vec![Mat::identity(2, 2), Mat::identity(2, 2) * -1.5]).unwrap();
        let dynamics = VarDynamics::new(a, DVector::zeros(2), Mat::from_element(2, 1, 1.0), Mat::identity(1, 1)).unwrap();
        assert!(matches!(simulate_factors(&dynamics, 10, 0, 1), Err(Error::Explosive { .. })));
    }

    #[test]
    fn cointegrating_combination_has_bounded_variance() {
        let d = draw_dgp(4);
        let (_, rep) = dgp_to_spec(&d).unwrap();
        let dynamics = VarDynamics::from_draw(&d);
        let var = |x: &[f64]| {
            let m = x.iter().sum::<f64>() / x.len() as f64;
            x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64
        };
        let mut stat = Vec::new();
        let mut trend = Vec::new();
        let b = rep.beta.column(0).into_owned();
        let perp = model::orth_complement(&rep.beta).unwrap().column(0).into_owned();
        for t in [1000, 10000] {
            let mut s = 0.0;
            let mut n = 0.0;
            for rep_id in 0..8 {
                let path = simulate_factors_with_rng(&dynamics, t, 200, &mut stream_rng(5, rep_id)).unwrap();
                s += var((&path.f * &b).as_slice());
                n += var((&path.f * &perp).as_slice());
            }
            stat.push(s / 8.0);
            trend.push(n / 8.0);
        }
        assert!(stat[1] / stat[0] < 2.0);
        assert!(trend[1] / trend[0] > 4.0);
    }

    #[test]
    fn pt_reconstruction_on_a_path() {
        let mut rng = stream_rng(9, 0);
        let spec = I1FamilySpec::random(&mut rng, 4, 3, 3, 1, 1).unwrap();
        let rep = model::granger_rep(&spec, 20).unwrap();
        let pt = model::pt_decompose(&spec).unwrap();
        let dynamics = VarDynamics::from_rep(&rep, &spec.gamma_u).unwrap();
        let mut path = simulate_factors(&dynamics, 1000, 100, 2).unwrap();
        path.attach_pt(&pt);
        assert_eq!(path.v1.as_ref().unwrap().ncols(), 2);
        assert_eq!(path.v2.as_ref().unwrap().ncols(), 1);
        assert!(path.pt_reconstruction_error(&spec, &pt).unwrap() <= 1e-10);
        assert!(path.recursion_residual(&dynamics) <= 1e-9);
    }

    #[test]
    fn panel_without_noise_is_lambda_f() {
        let dynamics = VarDynamics::from_draw(&draw_dgp(3));
        let path = simulate_factors(&dynamics, 100, 20, 1).unwrap();
        let lambda = Mat::from_fn(6, 4, |i, j| (i + 2 * j) as f64 * 0.1);
        let panel = PanelSpec::new(lambda.clone(), vec![IdioComponent::I0 { ar: 0.5, scale: 0.0 }; 6]).unwrap();
        let x = simulate_panel(&path, &panel, 4).unwrap();
        assert!(linalg::max_abs(&(x - &path.f * lambda.transpose())) < 1e-12);
        assert!(PanelSpec::new(Mat::zeros(3, 4), vec![IdioComponent::I1 { scale: 1.0 }; 3]).is_err());
        assert!(PanelSpec::new(Mat::zeros(4, 4), vec![IdioComponent::I0 { ar: 1.0, scale: 1.0 }; 4]).is_err());
        let csv = panel_to_csv(&Mat::zeros(2, 2));
        assert_eq!(csv.lines().next().unwrap(), "t,x1,x2");
    }

    #[test]
    fn subvector_predictions() {
        let draw = draw_dgp(6);
        let (spec, _) = dgp_to_spec(&draw).unwrap();
        let i0 = |p| vec![IdioOrder::I0; p];
        // q - d = 1: any single series with nonzero loading on the trend is I(1)
        let one = Mat::from_row_slice(1, 4, &[1.0, 0.3, 0.0, 0.2]);
        let pred = predict_subvector_cointegration(&one, &spec, &i0(1)).unwrap();
        assert!(!pred.chi_cointegrated);
        let two = Mat::from_row_slice(2, 4, &[1.0, 0.3, 0.0, 0.2, -0.5, 0.1, 1.0, 0.0]);
        let pred = predict_subvector_cointegration(&two, &spec, &i0(2)).unwrap();
        assert!(pred.chi_cointegrated && pred.x_cointegrated);
        let pred = predict_subvector_cointegration(&two, &spec, &[IdioOrder::I0, IdioOrder::I1]).unwrap();
        assert!(pred.chi_cointegrated && !pred.x_cointegrated);
        let degenerate = Mat::from_row_slice(1, 4, &[0.0, 1.0, 0.0, 0.0]);
        assert!(predict_subvector_cointegration(&degenerate, &spec, &i0(1)).unwrap().chi_cointegrated);
    }

    #[test]
    fn weyl_bound_on_zero_frequency_densities() {
        let draw = draw_dgp(12);
        let (spec, _) = dgp_to_spec(&draw).unwrap();
        let mut rng = stream_rng(12, 1);
        for _ in 0..20 {
            let lambda = Mat::from_fn(5, 4, |_, _| rng.sample::<f64, _>(StandardNormal));
            let idio = (0..5)
                .map(|i| if i % 2 == 0 { IdioComponent::I1 { scale: 0.5 + i as f64 } } else { IdioComponent::I0 { ar: 0.3, scale: 1.0 } })
                .collect();
            let panel = PanelSpec::new(lambda, idio).unwrap();
            let (chi, eps, x) = zero_frequency_densities(&spec, &panel).unwrap();
            let min = |m: &Mat| *linalg::sym_eig_desc(m).0.last().unwrap();
            assert!(min(&x) >= min(&chi) + min(&eps) - 1e-12);
        }
    }

    #[test]
    fn path_csv_header() {
        let dynamics = VarDynamics::from_draw(&draw_dgp(1));
        let path = simulate_factors(&dynamics, 3, 0, 1).unwrap();
        let csv = path.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,F1,F2,F3,F4,u1,u2,u3");
        assert_eq!(csv.lines().count(), 4);
        assert!(lines.next().unwrap().starts_with("1,"));
    }
}
