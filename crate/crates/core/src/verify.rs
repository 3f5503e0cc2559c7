//! Property suites behind the `verify` CLI command.
//!
//! Each check runs an independent oracle (quadrature, exact moment
//! enumeration, or a seeded random sweep) against the closed-form algebra and
//! reports the worst residual seen. The acceptance tests drive the same
//! checks, so every tolerance is pinned here.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::algebra::{cross_coefficient, tilde_coeffs, PerturbationCoeffs, PerturbedDensity};
use crate::entropy::{entropy_numeric, kl_numeric};
use crate::error::Result;
use crate::fading_bc::{
    counterexample_limit, hermite_gain, optimal_r, BCParams, FadingAtom, FadingLaw,
};
use crate::hermite::{gaussian_density, hermite_normalized};
use crate::interference::{f_k, sum_rate_limit, ICParams};
use crate::quad::{integrate, QuadratureSpec};
use crate::shamai_laroia::{sl_gap, sl_numeric_limit, SLPoint};

pub const EIGEN_TOL: f64 = 1e-8;
pub const CROSS_CONSTANT_TOL: f64 = 1e-8;
pub const APPRO_MIN_EXPONENT: f64 = 2.5;
pub const SL_MAGNITUDE_REL_TOL: f64 = 0.15;

/// Epsilon ladders used by the numeric oracles. Top values sit inside the
/// positivity windows of the tilde-corrected directions: the correction at
/// degree 4k oscillates, so the usable range shrinks rapidly with k.
pub const LADDER_K2: [f64; 3] = [0.04, 0.02, 0.01];
pub const LADDER_K3: [f64; 3] = [0.012, 0.008, 0.004];
pub const LADDER_K8: [f64; 3] = [2.0e-6, 1.4e-6, 1.0e-6];

/// Outcome of one property check.
#[derive(Debug, Clone)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &str, passed: bool, residual: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            residual,
            tolerance,
            detail,
        }
    }
}

impl std::fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<28} residual {:9.3e} (tol {:.1e})  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance,
            self.detail
        )
    }
}

/// Named property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Eigen,
    Lemmas,
    Contraction,
    Oracle,
}

pub fn run_suite(suite: Suite, q: &QuadratureSpec) -> Result<Vec<PropertyCheck>> {
    Ok(match suite {
        Suite::Eigen => vec![check_eigen_identity(q)],
        Suite::Lemmas => vec![
            check_cross_constant_k1(q)?,
            check_cross_constant_general(q)?,
            check_kl_convergence(q)?,
            check_degree_two_entropy(q)?,
        ],
        Suite::Contraction => vec![check_contraction(), check_tightened_contraction()],
        Suite::Oracle => vec![
            check_ic_sign_agreement(q)?,
            check_sl_numeric(q)?,
            check_fading_counterexample(q)?,
        ],
    })
}

/// Numeric projection oracles for the cross-convolution constant.
pub mod projection {
    use super::*;

    /// `int (g_a H_j^[a] * g_b H_k^[b])(x) H_{j+k}^[a+b](x) dx` by double
    /// composite quadrature; independent of the closed-form constant.
    pub fn quadrature(j: usize, k: usize, a: f64, b: f64, panels: usize) -> f64 {
        let r = 12.0;
        let (sa, sab) = (a.sqrt(), (a + b).sqrt());
        integrate(
            |x| {
                let conv = integrate(
                    |t| {
                        gaussian_density(0.0, a, t).expect("valid variance")
                            * hermite_normalized(j, a, t).expect("valid degree")
                            * gaussian_density(0.0, b, x - t).expect("valid variance")
                            * hermite_normalized(k, b, x - t).expect("valid degree")
                    },
                    -r * sa,
                    r * sa,
                    panels,
                );
                conv * hermite_normalized(j + k, a + b, x).expect("valid degree")
            },
            -r * sab,
            r * sab,
            panels,
        )
    }

    /// Same projection by exact enumeration: expand every Hermite factor into
    /// monomials and integrate with closed-form Gaussian moments.
    pub fn moments(j: usize, k: usize, a: f64, b: f64) -> f64 {
        let cj = monomial_coeffs(j);
        let ck = monomial_coeffs(k);
        let cm = monomial_coeffs(j + k);
        let mut total = 0.0;
        for (alpha, &ca) in cj.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let ca = ca / a.powf(alpha as f64 / 2.0);
            for (beta, &cb) in ck.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let cb = cb / b.powf(beta as f64 / 2.0);
                for (m, &cc) in cm.iter().enumerate() {
                    if cc == 0.0 {
                        continue;
                    }
                    let cc = cc / (a + b).powf(m as f64 / 2.0);
                    // (t + s)^m expanded binomially
                    let mut binom = 1.0;
                    for i in 0..=m {
                        total += ca
                            * cb
                            * cc
                            * binom
                            * gaussian_moment(alpha + i, a)
                            * gaussian_moment(beta + m - i, b);
                        binom *= (m - i) as f64 / (i + 1) as f64;
                    }
                }
            }
        }
        total * inv_sqrt_fact(j) * inv_sqrt_fact(k) * inv_sqrt_fact(j + k)
    }

    fn inv_sqrt_fact(k: usize) -> f64 {
        let mut f = 1.0f64;
        for i in 1..=k {
            f *= i as f64;
        }
        1.0 / f.sqrt()
    }

    /// Monomial coefficients of the probabilists' `H_k`, by the recurrence on
    /// coefficient vectors (exact integers well inside f64 range for k <= 16).
    fn monomial_coeffs(k: usize) -> Vec<f64> {
        let mut prev = vec![0.0; k + 1];
        prev[0] = 1.0;
        if k == 0 {
            return prev;
        }
        let mut cur = vec![0.0; k + 1];
        cur[1] = 1.0;
        for j in 1..k {
            let mut next = vec![0.0; k + 1];
            for d in 0..k {
                next[d + 1] += cur[d];
            }
            for d in 0..=k {
                next[d] -= j as f64 * prev[d];
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `E[T^m]` for centered Gaussian `T` with the given variance.
    fn gaussian_moment(m: usize, var: f64) -> f64 {
        if m % 2 == 1 {
            return 0.0;
        }
        let mut acc = 1.0;
        let mut i = 1;
        while i < m {
            acc *= i as f64;
            i += 2;
        }
        acc * var.powi((m / 2) as i32)
    }
}

/// Channel eigen-identity: the numerically convolved `(g_p H_k^[p]) * g_v`
/// matches `(p/(p+v))^(k/2) g_{p+v} H_k^[p+v]` pointwise.
pub fn check_eigen_identity(q: &QuadratureSpec) -> PropertyCheck {
    let mut worst = 0.0f64;
    let mut at = String::new();
    for &p in &[0.5f64, 1.0, 2.0] {
        for &v in &[0.5f64, 1.0, 2.0] {
            for k in 0..=8usize {
                let factor = (p / (p + v)).powf(k as f64 / 2.0);
                let sp = p.sqrt();
                let sout = (p + v).sqrt();
                for i in 0..50 {
                    let x = -5.0 * sout + 10.0 * sout * i as f64 / 49.0;
                    let lhs = integrate(
                        |t| {
                            gaussian_density(0.0, p, t).expect("valid variance")
                                * hermite_normalized(k, p, t).expect("valid degree")
                                * gaussian_density(0.0, v, x - t).expect("valid variance")
                        },
                        -q.radius_sigmas * sp,
                        q.radius_sigmas * sp,
                        q.nodes,
                    );
                    let rhs = factor
                        * gaussian_density(0.0, p + v, x).expect("valid variance")
                        * hermite_normalized(k, p + v, x).expect("valid degree");
                    let resid = (lhs - rhs).abs();
                    if resid > worst {
                        worst = resid;
                        at = format!("worst at k={k} p={p} v={v} x={x:.3}");
                    }
                }
            }
        }
    }
    PropertyCheck::new(
        "eigen-identity",
        worst < EIGEN_TOL,
        worst,
        EIGEN_TOL,
        format!("k <= 8, p,v in {{0.5,1,2}}, 50 points each; {at}"),
    )
}

/// Cross-convolution constant at `j = k = 1` against `sqrt(2ab)/(a+b)`,
/// by the quadrature projection.
pub fn check_cross_constant_k1(_q: &QuadratureSpec) -> Result<PropertyCheck> {
    let pairs = [
        (0.5, 0.5),
        (1.0, 1.0),
        (1.0, 2.0),
        (2.0, 1.0),
        (0.3, 1.7),
        (2.5, 0.4),
        (3.0, 3.0),
        (0.7, 0.9),
        (1.5, 2.5),
        (4.0, 1.0),
    ];
    let mut worst = 0.0f64;
    for &(a, b) in &pairs {
        let projected = projection::quadrature(1, 1, a, b, 250);
        let closed = (2.0 * a * b).sqrt() / (a + b);
        worst = worst.max((projected - closed).abs());
    }
    Ok(PropertyCheck::new(
        "cross-constant-k1",
        worst < CROSS_CONSTANT_TOL,
        worst,
        CROSS_CONSTANT_TOL,
        format!(
            "sqrt(2ab)/(a+b) vs quadrature projection at {} pairs",
            pairs.len()
        ),
    ))
}

/// General cross-convolution constant for `j + k <= 8` against the exact
/// moment-expansion projection, plus one quadrature spot check.
pub fn check_cross_constant_general(_q: &QuadratureSpec) -> Result<PropertyCheck> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for &(a, b) in &[(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)] {
        for j in 1..=7usize {
            for k in 1..=(8 - j) {
                let closed = cross_coefficient(j, k, a, b);
                let oracle = projection::moments(j, k, a, b);
                worst = worst.max((closed - oracle).abs());
                count += 1;
            }
        }
    }
    // quadrature route for the degree-(3,3) unit-variance case
    let spot =
        (projection::quadrature(3, 3, 1.0, 1.0, 250) - cross_coefficient(3, 3, 1.0, 1.0)).abs();
    worst = worst.max(spot);
    Ok(PropertyCheck::new(
        "cross-constant-general",
        worst < CROSS_CONSTANT_TOL,
        worst,
        CROSS_CONSTANT_TOL,
        format!("{count} (j,k,a,b) combinations by moment expansion + quadrature spot"),
    ))
}

fn fitted_exponent(rows: &[(f64, f64)]) -> f64 {
    // least-squares slope of ln(residual) against ln(eps)
    let n = rows.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(eps, resid) in rows {
        let (x, y) = (eps.ln(), resid.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Second-order KL model: `D(g(1 + eps H~_k) || g) = eps^2/2 + o(eps^2)`.
///
/// The remainder ratio must decrease along the ladder and the fitted
/// exponent of the absolute remainder must be at least 2.5. Degree 3 needs
/// the tilde correction for positivity, which caps the usable epsilon at
/// about 0.016; its ladder is scaled accordingly. Degree 4 is a valid
/// density on its own and runs the wider ladder.
pub fn check_kl_convergence(q: &QuadratureSpec) -> Result<PropertyCheck> {
    let cases: [(usize, f64, &[f64]); 2] = [
        (3, 0.01, &[0.012, 0.006, 0.003, 0.0015]),
        (4, 0.0, &[0.08, 0.04, 0.02, 0.01]),
    ];
    let mut worst_exponent = f64::INFINITY;
    let mut monotone = true;
    let mut detail = String::new();
    for (k, delta, ladder) in cases {
        let mut rows = Vec::new();
        let mut ratios = Vec::new();
        for &eps in ladder {
            let d = PerturbedDensity::new(0.0, 1.0, tilde_coeffs(k, eps, delta)?)?;
            let kl = kl_numeric(&d, 0.0, 1.0, q)?;
            let resid = (kl - 0.5 * eps * eps).abs();
            ratios.push(resid / (eps * eps));
            rows.push((eps, resid));
        }
        monotone &= ratios.windows(2).all(|w| w[1] < w[0]);
        let exponent = fitted_exponent(&rows);
        worst_exponent = worst_exponent.min(exponent);
        detail.push_str(&format!("k={k}: exponent {exponent:.2}; "));
    }
    Ok(PropertyCheck::new(
        "kl-second-order",
        monotone && worst_exponent >= APPRO_MIN_EXPONENT,
        worst_exponent,
        APPRO_MIN_EXPONENT,
        format!("{detail}ratios decreasing: {monotone} (residual column holds the worst fitted exponent; pass needs >= tol)"),
    ))
}

/// Linear degree-2 entropy correction: `h(g(1 + c H~_2))` matches
/// `1/2 ln(2 pi e p) - c^2/2 + c/sqrt(2)` with error `o(c)`.
pub fn check_degree_two_entropy(q: &QuadratureSpec) -> Result<PropertyCheck> {
    let ladder = [0.08, 0.04, 0.02, 0.01];
    let mut ratios = Vec::new();
    for &c in &ladder {
        let d = PerturbedDensity::new(0.0, 1.0, tilde_coeffs(2, c, 0.05)?)?;
        let h = entropy_numeric(&d, q)?;
        let model =
            crate::entropy::gaussian_entropy(1.0)? - 0.5 * c * c + c / std::f64::consts::SQRT_2;
        ratios.push((h - model).abs() / c);
    }
    let monotone = ratios.windows(2).all(|w| w[1] < w[0]);
    let last = *ratios.last().expect("nonempty ladder");
    Ok(PropertyCheck::new(
        "degree-two-entropy",
        monotone && last < 1e-3,
        last,
        1e-3,
        format!(
            "|h - model|/c along c in {ladder:?}: {:?}",
            ratios
                .iter()
                .map(|r| format!("{r:.2e}"))
                .collect::<Vec<_>>()
        ),
    ))
}

fn random_coeffs(rng: &mut StdRng) -> PerturbationCoeffs {
    let pairs: Vec<(usize, f64)> = (3..=10).map(|k| (k, rng.gen_range(-0.2..0.2))).collect();
    PerturbationCoeffs::from_pairs(pairs).expect("degrees are valid")
}

/// Channel contraction: `||add_noise coeffs|| <= ||coeffs||`, strict for
/// nonzero directions. 1000 seeded random coefficient vectors on degrees
/// 3..=10.
pub fn check_contraction() -> PropertyCheck {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let p = rng.gen_range(0.3..3.0);
        let v = rng.gen_range(0.3..3.0);
        let coeffs = random_coeffs(&mut rng);
        let d = PerturbedDensity::new(0.0, p, coeffs).expect("valid density");
        let out = d.add_noise(v).expect("valid noise");
        worst = worst.max(out.coeffs().norm() - d.coeffs().norm());
    }
    PropertyCheck::new(
        "contraction",
        worst < 0.0,
        worst,
        0.0,
        "max ||noisy|| - ||input|| over 1000 random directions (must be < 0)".into(),
    )
}

/// Tightened contraction: `||add_noise coeffs||^2 <= (p/(p+v))^3 ||coeffs||^2`
/// for directions supported on degrees >= 3, with equality exactly for a pure
/// degree-3 direction.
pub fn check_tightened_contraction() -> PropertyCheck {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut worst = f64::NEG_INFINITY;
    let mut pure_resid = 0.0f64;
    for _ in 0..1000 {
        let p: f64 = rng.gen_range(0.3..3.0);
        let v: f64 = rng.gen_range(0.3..3.0);
        let factor = (p / (p + v)).powi(3);
        let coeffs = random_coeffs(&mut rng);
        let d = PerturbedDensity::new(0.0, p, coeffs).expect("valid density");
        let out = d.add_noise(v).expect("valid noise");
        worst = worst.max(out.coeffs().sum_squares() - factor * d.coeffs().sum_squares());

        // equality case: pure degree-3 direction
        let pure = PerturbedDensity::new(
            0.0,
            p,
            PerturbationCoeffs::from_pairs([(3, 0.1)]).expect("valid degree"),
        )
        .expect("valid density");
        let pure_out = pure.add_noise(v).expect("valid noise");
        pure_resid = pure_resid
            .max((pure_out.coeffs().sum_squares() - factor * pure.coeffs().sum_squares()).abs());
    }
    PropertyCheck::new(
        "tightened-contraction",
        worst <= 0.0 && pure_resid < 1e-15,
        worst.max(pure_resid),
        1e-15,
        "(p/(p+v))^3 bound over 1000 random directions; equality on pure H_3".into(),
    )
}

/// Sign agreement between the numeric sum-rate limit and the closed-form
/// `F_k` at 12 points straddling the degree-2 and degree-3 roots at p = 1.
pub fn check_ic_sign_agreement(q: &QuadratureSpec) -> Result<PropertyCheck> {
    let cases: [(usize, f64, &[f64]); 2] = [(2, 0.05, &LADDER_K2), (3, 0.05, &LADDER_K3)];
    let points_k2 = [0.45, 0.53, 0.58, 0.63, 0.75, 1.1];
    let points_k3 = [0.45, 0.55, 0.64, 0.72, 0.85, 1.2];
    let mut all_match = true;
    let mut min_margin = f64::INFINITY;
    let mut detail = String::new();
    for (k, delta, ladder) in cases {
        let points = if k == 2 { &points_k2 } else { &points_k3 };
        for &a in points {
            let params = ICParams::new(a, 1.0)?;
            let closed = f_k(&params, k)?;
            let limit = sum_rate_limit(&params, k, delta, ladder, q)?;
            let matches = (limit > 0.0) == (closed > 0.0);
            all_match &= matches;
            min_margin = min_margin.min(limit.abs());
            if !matches {
                detail.push_str(&format!(
                    "MISMATCH k={k} a={a}: limit {limit:.3e} vs F_k {closed:.3e}; "
                ));
            }
        }
    }
    Ok(PropertyCheck::new(
        "ic-oracle-sign",
        all_match,
        min_margin,
        0.0,
        format!("12 points straddling the k=2/k=3 roots at p=1; {detail}smallest |limit| shown as residual"),
    ))
}

/// Numeric mutual-information deficit against the closed-form gap: sign
/// agreement at 8 points straddling the zero set, magnitude agreement within
/// 15% at the headline counter-example point, and insensitivity to the tilde
/// correction for an even degree (delta = 0 vs 0.05 at k = 4).
pub fn check_sl_numeric(q: &QuadratureSpec) -> Result<PropertyCheck> {
    // (h, u, k, delta, ladder); p = 1 so v = u
    let ladder_k3: &[f64] = &[0.012, 0.008, 0.005];
    let ladder_k4: &[f64] = &[0.006, 0.004, 0.002];
    let ladder_k5: &[f64] = &[2.0e-4, 1.4e-4, 1.0e-4];
    let points: [(f64, f64, usize, f64, &[f64]); 8] = [
        (0.5, 2.0, 3, 0.05, ladder_k3),
        (1.0, 0.1, 3, 0.05, ladder_k3),
        (0.3, 1.0, 3, 0.05, ladder_k3),
        (1.5, 1.0, 3, 0.05, ladder_k3),
        (0.4, 0.3, 3, 0.05, ladder_k3),
        (0.6, 3.0, 4, 0.05, ladder_k4),
        (1.2, 0.5, 4, 0.05, ladder_k4),
        (0.7, 4.0, 5, 0.01, ladder_k5),
    ];
    let mut signs_ok = true;
    let mut detail = String::new();
    for (h, u, k, delta, ladder) in points {
        let gap = sl_gap(&SLPoint::new(h, u, k)?)?;
        let limit = sl_numeric_limit(h, 1.0, u, k, delta, ladder, q)?;
        let ok = (limit < 0.0) == (gap > 0.0);
        signs_ok &= ok;
        if !ok {
            detail.push_str(&format!(
                "SIGN MISMATCH at (h,u,k)=({h},{u},{k}): limit {limit:.3e}, gap {gap:.3e}; "
            ));
        }
    }
    // magnitude at the headline counter-example point
    let gap = sl_gap(&SLPoint::new(0.5, 2.0, 3)?)?;
    let limit = sl_numeric_limit(0.5, 1.0, 2.0, 3, 0.05, ladder_k3, q)?;
    let rel = (limit + gap).abs() / gap.abs();
    // even degree needs no correction: delta = 0 and delta = 0.05 agree
    let with_delta = sl_numeric_limit(0.7, 1.0, 1.5, 4, 0.05, ladder_k4, q)?;
    let without_delta = sl_numeric_limit(0.7, 1.0, 1.5, 4, 0.0, ladder_k4, q)?;
    let delta_free = (with_delta - without_delta).abs() < 1e-5;
    Ok(PropertyCheck::new(
        "sl-oracle",
        signs_ok && rel <= SL_MAGNITUDE_REL_TOL && delta_free,
        rel,
        SL_MAGNITUDE_REL_TOL,
        format!(
            "{detail}8-point sign agreement {signs_ok}; limit {limit:.6e} vs -gap {:.6e}; \
             k=4 delta-0 shift {:.1e}",
            -gap,
            (with_delta - without_delta).abs()
        ),
    ))
}

pub fn reference_binary_law() -> FadingLaw {
    FadingLaw::new(vec![
        FadingAtom { h: 1.0, w: 0.5 },
        FadingAtom { h: 10.0, w: 0.5 },
    ])
    .expect("valid law")
}

/// End-to-end fading counter-example: positive numeric limit at degree 8,
/// negative at degree 3, both matching the closed-form gain signs, plus a
/// two-point delta-halving insensitivity check at degree 8.
pub fn check_fading_counterexample(q: &QuadratureSpec) -> Result<PropertyCheck> {
    let law = reference_binary_law();
    let (v, mu) = (0.25, 1.25);
    let r = optimal_r(1.24086308, v, mu, &law)?.best_r;
    let params = BCParams::new(2.0 * r, v, mu, r)?;

    let gain8 = hermite_gain(8, r, &params, &law)?;
    let lim8 = counterexample_limit(&params, &law, 8, 1e-6, &LADDER_K8, q)?;
    let lim8_half_delta = counterexample_limit(&params, &law, 8, 5e-7, &LADDER_K8, q)?;
    let gain3 = hermite_gain(3, r, &params, &law)?;
    let lim3 = counterexample_limit(&params, &law, 3, 0.05, &LADDER_K3, q)?;

    let signs_ok = lim8 > 0.0 && gain8 > 0.0 && lim3 < 0.0 && gain3 < 0.0;
    let delta_insensitive = (lim8 - lim8_half_delta).abs() < 1e-6;
    // the expansion predicts the limit equals gain/2
    let rel = (lim8 - 0.5 * gain8).abs() / (0.5 * gain8);
    Ok(PropertyCheck::new(
        "fading-counterexample",
        signs_ok && delta_insensitive && rel < 0.05,
        rel,
        0.05,
        format!(
            "k=8 limit {lim8:.6e} vs gain/2 {:.6e}; k=3 limit {lim3:.4e} (gain {gain3:.4e}); delta-halving shift {:.1e}",
            0.5 * gain8,
            (lim8 - lim8_half_delta).abs()
        ),
    ))
}
