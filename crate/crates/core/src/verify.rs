//! Built-in invariant suite. Each check is self-contained, seeded, and
//! reports a one-line verdict.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{self, Mat};
use crate::model::{self, I1FamilySpec};
use crate::montecarlo::{self, Estimator, McConfig};
use crate::polymat::{self, LeftInverseOptions, PolyMatrix, Polynomial, ZeroSearchOptions};
use crate::estimate::{self, DetSpec};
use crate::simulate::{self, IdioOrder, VarDynamics};

/// Seed shared by all checks.
pub const VERIFY_SEED: u64 = 2024;

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(id: &'static str, name: &'static str, result: Result<(bool, String)>) -> Self {
        match result {
            Ok((passed, detail)) => CheckOutcome { id, name, passed, detail },
            Err(e) => CheckOutcome { id, name, passed: false, detail: format!("error: {e}") },
        }
    }

    pub fn line(&self) -> String {
        format!("{} [{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replications for the Monte Carlo pattern check.
    pub mc_replications: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: VERIFY_SEED, mc_replications: 200 }
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    vec![
        left_inverse_identity(opts.seed),
        two_variable_inverse(),
        cointegration_annihilation(opts.seed),
        pt_reconstruction(opts.seed),
        recursion_consistency(opts.seed),
        irf_invariance(),
        johansen_angle(opts.seed),
        johansen_pi(opts.seed),
        table_pattern(opts.seed, opts.mc_replications),
        subvector_predictor(opts.seed),
        resultant_suite(opts.seed),
    ]
}

/// Random generic family with `r <= 6`, `q < r`, `s1, s2 <= 2`.
fn random_generic_spec<R: Rng>(rng: &mut R) -> Result<I1FamilySpec> {
    let r = rng.random_range(2..=6);
    let q = rng.random_range(1..r);
    let c = rng.random_range((r - q)..r);
    let s1 = rng.random_range(0..=2);
    let s2 = rng.random_range(0..=2);
    I1FamilySpec::random(rng, r, q, c, s1, s2)
}

/// Degree bound from counting unknowns against equations per row of `N`.
fn inverse_degree_bound(m: &PolyMatrix) -> usize {
    let (r, q, s) = (m.rows(), m.cols(), m.degree());
    (q * s).div_ceil(r - q) + 2
}

fn generic_specs(seed: u64, n: usize) -> Result<Vec<I1FamilySpec>> {
    let mut rng = simulate::stream_rng(seed, 101);
    (0..n).map(|_| random_generic_spec(&mut rng)).collect()
}

pub fn left_inverse_identity(seed: u64) -> CheckOutcome {
    CheckOutcome::new("1", "left-inverse identity", (|| {
        let mut worst_res = 0.0_f64;
        let mut worst_mod = f64::INFINITY;
        let mut max_p = 0;
        for spec in generic_specs(seed, 100)? {
            let (_, m) = model::build_m_poly(&spec)?;
            let opts = LeftInverseOptions { max_degree: inverse_degree_bound(&m), ..Default::default() };
            let n = polymat::left_inverse_with(&m, &opts)?;
            max_p = max_p.max(n.degree());
            worst_res = worst_res.max(n.multiply(&m)?.max_abs_diff(&PolyMatrix::constant(m.coeff(0))));
            worst_mod = worst_mod.min(polymat::min_root_modulus(&n)?);
        }
        let ok = worst_res <= 1e-8 && worst_mod > 1.0;
        Ok((ok, format!("100 draws, max residual {worst_res:.2e}, min |root det N| {worst_mod:.3}, max degree {max_p}")))
    })())
}

pub fn two_variable_inverse() -> CheckOutcome {
    CheckOutcome::new("2", "two-variable inverse", (|| {
        let (a, b) = (0.5, -0.5);
        let m = PolyMatrix::new(vec![Mat::from_element(2, 1, 1.0), Mat::from_row_slice(2, 1, &[a, b])])?;
        let n = polymat::left_inverse(&m, polymat::DEFAULT_MAX_INVERSE_DEGREE, 1e-12)?;
        let identity_err = n.multiply(&m)?.max_abs_diff(&PolyMatrix::constant(Mat::from_element(2, 1, 1.0)));
        // (I - B L)(1 - L) F_t = [1; 1] u_t with B from u_t = (b dF1 - a dF2)/(b - a)
        let bmat = Mat::from_row_slice(2, 2, &[a * b, -a * a, b * b, -a * b]) / (b - a);
        let b_err = linalg::max_abs(&(-n.coeff(1) - &bmat));
        let expected = Mat::from_row_slice(2, 2, &[0.25, 0.25, -0.25, -0.25]);
        let ok = n.degree() == 1 && identity_err <= 1e-12 && b_err <= 1e-12 && bmat == expected;
        Ok((ok, format!("degree {}, identity error {identity_err:.1e}, matrix error {b_err:.1e}", n.degree())))
    })())
}

pub fn cointegration_annihilation(seed: u64) -> CheckOutcome {
    CheckOutcome::new("3", "cointegration annihilation", (|| {
        let mut worst_irf = 0.0_f64;
        let mut worst_exact = 0.0_f64;
        for spec in generic_specs(seed, 100)? {
            let (_, m) = model::build_m_poly(&spec)?;
            let rep = model::granger_rep(&spec, inverse_degree_bound(&m))?;
            let irf = model::theoretical_irf(&spec, 200)?;
            worst_irf = worst_irf.max(linalg::max_abs(&(rep.beta.transpose() * &irf.level_coeffs[200])));
            let long_run = linalg::inverse(&spec.s_poly.at_one())? * model::build_c_poly(&spec).at_one();
            worst_exact = worst_exact.max(linalg::max_abs(&(rep.beta.transpose() * long_run)));
        }
        let ok = worst_irf <= 1e-6 && worst_exact <= 1e-12;
        Ok((ok, format!("max |beta' H_200| {worst_irf:.2e}, max |beta' S(1)^-1 C(1)| {worst_exact:.2e}")))
    })())
}

pub fn pt_reconstruction(seed: u64) -> CheckOutcome {
    CheckOutcome::new("4", "permanent/transitory reconstruction", (|| {
        let mut rng = simulate::stream_rng(seed, 104);
        let mut worst = 0.0_f64;
        let mut counts_ok = true;
        for k in 0..5 {
            let spec = I1FamilySpec::random(&mut rng, 4, 3, 3, 1, 1)?;
            let rep = model::granger_rep(&spec, 20)?;
            let pt = model::pt_decompose(&spec)?;
            counts_ok &= pt.permanent() == 1 && pt.transitory() == 2;
            let dynamics = VarDynamics::from_rep(&rep, &spec.gamma_u)?;
            let mut path = simulate::simulate_factors(&dynamics, 1000, simulate::DEFAULT_BURN_IN, seed + k)?;
            path.attach_pt(&pt);
            worst = worst.max(path.pt_reconstruction_error(&spec, &pt)?);
        }
        Ok((worst <= 1e-10 && counts_ok, format!("T=1000, max error {worst:.2e}, shock counts 1 permanent / 2 transitory: {counts_ok}")))
    })())
}

pub fn recursion_consistency(seed: u64) -> CheckOutcome {
    CheckOutcome::new("5", "VECM recursion self-consistency", (|| {
        let mut worst = 0.0_f64;
        let mut paths = 0;
        for k in 0..3 {
            let draw = simulate::draw_dgp(seed + k);
            let dynamics = VarDynamics::from_draw(&draw);
            let path = simulate::simulate_factors(&dynamics, 1000, simulate::DEFAULT_BURN_IN, seed + k)?;
            worst = worst.max(path.recursion_residual(&dynamics));
            paths += 1;
        }
        let mut rng = simulate::stream_rng(seed, 105);
        for k in 0..5 {
            let spec = I1FamilySpec::random(&mut rng, 5, 3, 3, 1, 1)?;
            let (_, m) = model::build_m_poly(&spec)?;
            let rep = model::granger_rep(&spec, inverse_degree_bound(&m))?;
            let dynamics = VarDynamics::from_rep(&rep, &spec.gamma_u)?;
            let path = simulate::simulate_factors(&dynamics, 1000, simulate::DEFAULT_BURN_IN, seed + 10 + k)?;
            worst = worst.max(path.recursion_residual(&dynamics));
            paths += 1;
        }
        Ok((worst <= 1e-9, format!("{paths} paths, max residual {worst:.2e}")))
    })())
}

/// `(1 - L) F_t = [1 + aL; 1 + bL; 1 + cL] u_t`.
pub fn three_variable_spec(a: f64, b: f64, c: f64) -> Result<I1FamilySpec> {
    I1FamilySpec::new(
        3,
        1,
        2,
        Mat::from_row_slice(3, 1, &[1.0 + a, 1.0 + b, 1.0 + c]),
        Mat::from_element(1, 1, 1.0),
        Mat::from_row_slice(3, 1, &[-a, -b, -c]),
        PolyMatrix::zeros(3, 1),
        PolyMatrix::identity(3),
        Mat::identity(1, 1),
    )
}

pub fn irf_invariance() -> CheckOutcome {
    CheckOutcome::new("6", "impulse-response invariance", (|| {
        let spec = three_variable_spec(0.5, -0.5, 0.2)?;
        let (_, m) = model::build_m_poly(&spec)?;
        let n1 = polymat::left_inverse(&m, polymat::DEFAULT_MAX_INVERSE_DEGREE, 1e-10)?;
        let set = polymat::left_inverse_solutions(&m, n1.degree().max(1), linalg::RANK_TOL)?;
        let h = set.homogeneous.first().ok_or_else(|| crate::Error::EmptyInput("left inverse is unique".into()))?;
        let n2 = set.particular.add(&h.scale(0.3))?;
        let distance = n1.max_abs_diff(&n2);
        let res2 = n2.multiply(&m)?.max_abs_diff(&PolyMatrix::constant(m.coeff(0)));
        let rep1 = model::granger_rep_from_inverse(&spec, &n1, None)?;
        let rep2 = model::granger_rep_from_inverse(&spec, &n2, None)?;
        let i1 = model::ar_level_irf(&rep1.a_poly, &rep1.c0, 50)?;
        let i2 = model::ar_level_irf(&rep2.a_poly, &rep2.c0, 50)?;
        let gap = i1
            .level_coeffs
            .iter()
            .zip(&i2.level_coeffs)
            .map(|(x, y)| linalg::max_abs(&(x - y)))
            .fold(0.0, f64::max);
        let ok = distance > 1e-3 && res2 <= 1e-10 && gap <= 1e-10;
        Ok((ok, format!("inverses differ by {distance:.3}, max IRF gap over 50 lags {gap:.2e}")))
    })())
}

/// Johansen fit on one long path of the design: subspace angle of the
/// cointegration space and the error of `Pi_hat`.
pub fn johansen_fit(seed: u64) -> Result<(f64, f64)> {
    let draw = simulate::draw_dgp(seed);
    let (_, rep) = simulate::dgp_to_spec(&draw)?;
    let path = simulate::simulate_factors(&VarDynamics::from_draw(&draw), 10_000, simulate::DEFAULT_BURN_IN, seed)?;
    let est = estimate::johansen_vecm(&path.f, 2, draw.shape.c, DetSpec::None)?;
    let angle = linalg::max_principal_angle(&est.beta, &rep.beta);
    // Pi estimates -A(1) under the error-correction sign convention
    let gap = (est.pi() + draw.a_at_one()).norm();
    Ok((angle, gap))
}

pub fn johansen_angle(seed: u64) -> CheckOutcome {
    CheckOutcome::new("7a", "Johansen cointegration space", johansen_fit(seed).map(|(angle, _)| {
        (angle < 0.05, format!("T=10000, largest principal angle {angle:.2e} rad (limit 0.05)"))
    }))
}

pub fn johansen_pi(seed: u64) -> CheckOutcome {
    CheckOutcome::new("7b", "Johansen long-run matrix", johansen_fit(seed).map(|(_, gap)| {
        (gap < 0.1, format!("T=10000, |Pi_hat + A(1)|_F = {gap:.4} (limit 0.1)"))
    }))
}

pub fn table_pattern(seed: u64, replications: usize) -> CheckOutcome {
    CheckOutcome::new("8", "Monte Carlo pattern", (|| {
        let cfg = McConfig {
            t_list: vec![100, 500],
            replications,
            seed,
            estimators: vec![Estimator::Dvar, Estimator::Lvar, Estimator::Vecm],
            ..Default::default()
        };
        let table = montecarlo::run_experiment(&cfg)?;
        let get = |t, lag, e| table.rmse(t, lag, e).unwrap_or(f64::NAN);
        let a = get(500, 80, Estimator::Vecm) < 0.6 * get(500, 80, Estimator::Lvar);
        let b = [100, 500].iter().all(|&t| get(t, 80, Estimator::Lvar) > get(t, 20, Estimator::Lvar));
        let c = [100, 500].iter().all(|&t| get(t, 80, Estimator::Vecm) / get(t, 20, Estimator::Vecm) <= 1.3);
        let d = [Estimator::Dvar, Estimator::Lvar, Estimator::Vecm]
            .iter()
            .all(|&e| get(500, 0, e) <= get(100, 0, e));
        let detail = format!(
            "(a) {a} VECM {:.3} vs LVAR {:.3} at T=500 lag 80; (b) {b}; (c) {c} ratios {:.2}/{:.2}; (d) {d}",
            get(500, 80, Estimator::Vecm),
            get(500, 80, Estimator::Lvar),
            get(100, 80, Estimator::Vecm) / get(100, 20, Estimator::Vecm),
            get(500, 80, Estimator::Vecm) / get(500, 20, Estimator::Vecm),
        );
        Ok((a && b && c && d, detail))
    })())
}

pub fn subvector_predictor(seed: u64) -> CheckOutcome {
    CheckOutcome::new("9", "subvector cointegration predictor", (|| {
        let mut rng = simulate::stream_rng(seed, 109);
        let spec = I1FamilySpec::random(&mut rng, 6, 5, 3, 1, 1)?;
        let trends = spec.q - spec.d();
        let mut mismatches = 0;
        let mut high_ok = true;
        let mut full_ok = true;
        for _ in 0..100 {
            let p = rng.random_range(1..=spec.r);
            let deficient = p >= 2 && p <= trends && rng.random_bool(0.4);
            let lambda = if deficient {
                let a = Mat::from_fn(p, p - 1, |_, _| rng.sample::<f64, _>(StandardNormal));
                let b = Mat::from_fn(p - 1, spec.r, |_, _| rng.sample::<f64, _>(StandardNormal));
                a * b
            } else {
                Mat::from_fn(p, spec.r, |_, _| rng.sample::<f64, _>(StandardNormal))
            };
            let pred = simulate::predict_subvector_cointegration(&lambda, &spec, &vec![IdioOrder::I0; p])?;
            // oracle: a p x p Gram determinant test, no rank routine involved
            let oracle = if p > trends {
                true
            } else {
                let lx = &lambda * &spec.xi;
                let gram = &lx * lx.transpose();
                let scale = (gram.trace() / p as f64).powi(p as i32);
                gram.determinant().abs() <= 1e-10 * scale
            };
            if pred.chi_cointegrated != oracle {
                mismatches += 1;
            }
            if p > trends && !pred.chi_cointegrated {
                high_ok = false;
            }
            if p == trends && !deficient && pred.chi_cointegrated {
                full_ok = false;
            }
        }
        Ok((
            mismatches == 0 && high_ok && full_ok,
            format!("100 draws with q-d={trends}, {mismatches} oracle mismatches"),
        ))
    })())
}

pub fn resultant_suite(seed: u64) -> CheckOutcome {
    CheckOutcome::new("10", "resultant classification", (|| {
        let tol = ZeroSearchOptions::default().resultant_tol;
        let mut rng = simulate::stream_rng(seed, 110);
        let grid: Vec<f64> = (-4..=4).map(|k| k as f64 * 0.5).collect();
        let mut wrong = 0;
        let mut shared_count = 0;
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let deg = rng.random_range(1..=4);
            let roots: Vec<f64> = (0..deg).map(|_| grid[rng.random_range(0..grid.len())]).collect();
            let scale = rng.random_range(0.5..2.0);
            let p = Polynomial::from_roots(&roots);
            (Polynomial::new(p.coeffs().iter().map(|c| c * scale).collect()), roots)
        };
        for _ in 0..500 {
            let (a, ra) = draw(&mut rng);
            let (b, rb) = draw(&mut rng);
            let distance = ra
                .iter()
                .flat_map(|x| rb.iter().map(move |y| (x - y).abs()))
                .fold(f64::INFINITY, f64::min);
            let shared = distance == 0.0;
            shared_count += usize::from(shared);
            let res = polymat::normalized_resultant(&a, &b)?;
            if (res.abs() <= tol) != shared {
                wrong += 1;
            }
        }
        Ok((wrong == 0, format!("500 pairs ({shared_count} sharing a root), {wrong} misclassified at tolerance {tol:e}")))
    })())
}
