//! Symmetric two-user Gaussian interference channel under treating
//! interference as noise: closed-form second-order gain functions, the four
//! decision thresholds, Gaussian baseline rates, and a numeric sum-rate
//! oracle built on the coordinate algebra.
//!
//! Unit noise variance throughout; `a` is the interference coefficient and
//! `p` the per-user average power. All rates in nats.

use crate::algebra::{tilde_coeffs, PerturbedDensity};
use crate::entropy::{entropy_gap_numeric, entropy_numeric};
use crate::error::{Error, Result};
use crate::quad::{extrapolate_to_zero, QuadratureSpec};
use crate::roots::find_root_geometric;

/// Interference coefficient and per-user power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ICParams {
    pub a: f64,
    pub p: f64,
}

impl ICParams {
    pub fn new(a: f64, p: f64) -> Result<Self> {
        if a < 0.0 || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interference coefficient must be >= 0, got {a}"
            )));
        }
        if p <= 0.0 || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power must be positive, got {p}"
            )));
        }
        Ok(Self { a, p })
    }
}

/// Second-order sum-rate gain of opposite degree-k perturbations over iid
/// Gaussian inputs:
///
/// ```text
/// F_k(a, p) = [a^2 / (p a^2 + 1)]^k - (a^k - 1)^2 / (p a^2 + p + 1)^k
/// ```
///
/// Positive means the non-Gaussian pair beats the Gaussian baseline. Only the
/// sign and the root location are calibrated; the numeric oracle
/// [`sum_rate_numeric`] carries the absolute scale.
pub fn f_k(params: &ICParams, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::UnsupportedDegree(k));
    }
    let (a, p) = (params.a, params.p);
    let first = (a * a / (p * a * a + 1.0)).powi(k as i32);
    let diff = a.powi(k as i32) - 1.0;
    Ok(first - diff * diff / (p * a * a + p + 1.0).powi(k as i32))
}

/// The k = 1 substitution into the `F_k` closed form:
/// `a^2/(p a^2 + 1) - (a - 1)^2/(p a^2 + p + 1)`.
///
/// This is not a rate gain (degree-1 directions only move the mean), but its
/// positive root coincides with the root of `p a^3 + a - 1/2`, the boundary
/// of the regime where Gaussian inputs with interference treated as noise
/// are sum-capacity optimal.
pub fn k1_condition(params: &ICParams) -> f64 {
    let (a, p) = (params.a, params.p);
    a * a / (p * a * a + 1.0) - (a - 1.0) * (a - 1.0) / (p * a * a + p + 1.0)
}

/// Positive root in `a` of [`k1_condition`].
pub fn k1_root(p: f64) -> Result<f64> {
    let params_at = move |a: f64| ICParams { a, p };
    find_root_geometric(
        move |a| k1_condition(&params_at(a)),
        BRACKET_LO,
        BRACKET_HI,
        BRACKET_POINTS,
        ROOT_TOL,
        "k1_condition",
    )
}

/// Blind time-sharing sum rate minus the Gaussian TIN sum rate:
///
/// ```text
/// B_2(a, p) = 1/4 (ln(1 + 2p) + ln(1 + 2p / (1 + 2 a^2 p))) - ln(1 + p / (1 + a^2 p))
/// ```
pub fn b2(params: &ICParams) -> f64 {
    blind_ts_sum_rate(params) - gaussian_tin_sum_rate(params)
}

/// Sum rate of both users treating interference as noise with iid Gaussian
/// inputs: `ln(1 + p / (1 + a^2 p))`.
pub fn gaussian_tin_sum_rate(params: &ICParams) -> f64 {
    let (a, p) = (params.a, params.p);
    (1.0 + p / (1.0 + a * a * p)).ln()
}

/// Sum rate of blind time sharing (each user active on half the slots at
/// power `2p`, overlapping on a quarter of them), receivers aware of the
/// asynchronization delay.
pub fn blind_ts_sum_rate(params: &ICParams) -> f64 {
    let (a, p) = (params.a, params.p);
    0.25 * ((1.0 + 2.0 * p).ln() + (1.0 + 2.0 * p / (1.0 + 2.0 * a * a * p)).ln())
}

/// The four interference-coefficient thresholds, in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// Root of `p a^3 + a - 1/2`: below it, Gaussian TIN is sum-capacity optimal.
    T1,
    /// Root of `F_2`: above it, time sharing beats Gaussian TIN (synchronized).
    T2,
    /// Root of `F_3`: above it, opposite degree-3 perturbations beat Gaussian TIN.
    T3,
    /// Root of `B_2`: above it, blind time sharing beats Gaussian TIN
    /// (asynchronous, delay known at the receivers).
    T4,
}

impl Threshold {
    pub const ALL: [Threshold; 4] = [Threshold::T1, Threshold::T2, Threshold::T3, Threshold::T4];

    pub fn name(&self) -> &'static str {
        match self {
            Threshold::T1 => "T1",
            Threshold::T2 => "T2",
            Threshold::T3 => "T3",
            Threshold::T4 => "T4",
        }
    }
}

const BRACKET_LO: f64 = 1e-4;
const BRACKET_HI: f64 = 64.0;
const BRACKET_POINTS: usize = 512;
const ROOT_TOL: f64 = 1e-10;

/// Unique positive root in `a` of the function selected by `which`, found by
/// a geometric bracket scan over `(1e-4, 64]` plus bisection.
pub fn threshold(p: f64, which: Threshold) -> Result<f64> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "power must be positive, got {p}"
        )));
    }
    let f: Box<dyn Fn(f64) -> f64> = match which {
        Threshold::T1 => Box::new(move |a| p * a * a * a + a - 0.5),
        Threshold::T2 => Box::new(move |a| f_k(&ICParams { a, p }, 2).expect("k = 2 is valid")),
        Threshold::T3 => Box::new(move |a| f_k(&ICParams { a, p }, 3).expect("k = 3 is valid")),
        Threshold::T4 => Box::new(move |a| b2(&ICParams { a, p })),
    };
    find_root_geometric(
        f,
        BRACKET_LO,
        BRACKET_HI,
        BRACKET_POINTS,
        ROOT_TOL,
        which.name(),
    )
}

/// All four thresholds at power `p`.
pub fn threshold_ladder(p: f64) -> Result<[f64; 4]> {
    Ok([
        threshold(p, Threshold::T1)?,
        threshold(p, Threshold::T2)?,
        threshold(p, Threshold::T3)?,
        threshold(p, Threshold::T4)?,
    ])
}

/// Exact sum rate `I_1 + I_2` of the interference channel for the given pair
/// of input densities, by quadrature.
pub fn pair_sum_rate(
    params: &ICParams,
    x1: &PerturbedDensity,
    x2: &PerturbedDensity,
    q: &QuadratureSpec,
) -> Result<f64> {
    let (d1, n1) = user_channel(x1, x2, params.a)?;
    let (d2, n2) = user_channel(x2, x1, params.a)?;
    Ok((entropy_numeric(&d1, q)? - entropy_numeric(&n1, q)?)
        + (entropy_numeric(&d2, q)? - entropy_numeric(&n2, q)?))
}

/// Signal-plus-interference-plus-noise and interference-plus-noise densities
/// seen by the user with input `own`.
fn user_channel(
    own: &PerturbedDensity,
    other: &PerturbedDensity,
    a: f64,
) -> Result<(PerturbedDensity, PerturbedDensity)> {
    if a == 0.0 {
        Ok((own.add_noise(1.0)?, PerturbedDensity::gaussian(0.0, 1.0)?))
    } else {
        let interference = other.scale(a)?;
        Ok((
            own.convolve(&interference)?.add_noise(1.0)?,
            interference.add_noise(1.0)?,
        ))
    }
}

/// Numeric second-order sum-rate gain: `(2 / eps^2) [S(eps) - S_Gaussian]`
/// with `X_1 ~ g_p(1 + eps H~_k)` and `X_2 ~ g_p(1 - eps H~_k)`.
///
/// Both users' mutual informations are computed; for `k = 2` the degree-2
/// coefficient shifts each user's variance at order eps in opposite
/// directions, so the per-user terms differ and only their sum is even in
/// eps. Entropy differences against the Gaussian baseline are integrated
/// pointwise, so the Gaussian closed-form parts cancel exactly.
pub fn sum_rate_numeric(
    params: &ICParams,
    k: usize,
    eps: f64,
    delta: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    if k < 2 {
        return Err(Error::UnsupportedDegree(k));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let x1 = PerturbedDensity::new(0.0, params.p, tilde_coeffs(k, eps, delta)?)?;
    let x2 = PerturbedDensity::new(0.0, params.p, tilde_coeffs(k, -eps, delta)?)?;
    let (d1, n1) = user_channel(&x1, &x2, params.a)?;
    let (d2, n2) = user_channel(&x2, &x1, params.a)?;
    for d in [&x1, &x2, &d1, &n1, &d2, &n2] {
        if !d.positivity_check(q.radius_sigmas, q.nodes) {
            return Err(Error::PerturbationTooLarge);
        }
    }
    let s_minus_gaussian = (entropy_gap_numeric(&d1, q)? - entropy_gap_numeric(&n1, q)?)
        + (entropy_gap_numeric(&d2, q)? - entropy_gap_numeric(&n2, q)?);
    Ok(2.0 / (eps * eps) * s_minus_gaussian)
}

/// Extrapolated limit of [`sum_rate_numeric`] along an epsilon ladder.
///
/// The sum rate is even in eps (swapping the sign swaps the two users), so
/// the extrapolation runs in eps^2.
pub fn sum_rate_limit(
    params: &ICParams,
    k: usize,
    delta: f64,
    eps_ladder: &[f64],
    q: &QuadratureSpec,
) -> Result<f64> {
    crate::quad::validate_ladder(eps_ladder)?;
    let mut pts = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        pts.push((eps * eps, sum_rate_numeric(params, k, eps, delta, q)?));
    }
    Ok(extrapolate_to_zero(&pts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_k_closed_form_examples() {
        // a = 1 kills the second term
        for &p in &[0.5, 1.0, 2.0] {
            let v = f_k(&ICParams { a: 1.0, p }, 3).unwrap();
            assert!((v - (1.0 / (p + 1.0)).powi(3)).abs() < 1e-15);
            assert!(v > 0.0);
        }
        // a = 0 kills the first term, leaving -1/(p+1)^k
        let v = f_k(&ICParams { a: 0.0, p: 1.0 }, 3).unwrap();
        assert!((v + 0.125).abs() < 1e-15);

        assert!(matches!(
            f_k(&ICParams { a: 0.5, p: 1.0 }, 1),
            Err(Error::UnsupportedDegree(1))
        ));
    }

    #[test]
    fn unique_sign_change_of_f_k() {
        for k in 2..=8usize {
            for &p in &[0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
                let mut changes = 0;
                let mut prev = f_k(&ICParams { a: 1e-3, p }, k).unwrap();
                let mut a = 1e-3;
                while a < 16.0 {
                    a += 1e-3;
                    let cur = f_k(&ICParams { a, p }, k).unwrap();
                    if prev != 0.0 && cur != 0.0 && (cur < 0.0) != (prev < 0.0) {
                        changes += 1;
                    }
                    prev = cur;
                }
                assert_eq!(changes, 1, "k={k} p={p}");
            }
        }
    }

    #[test]
    fn threshold_ladder_at_unit_power() {
        let [t1, t2, t3, t4] = threshold_ladder(1.0).unwrap();
        assert!((t1 - 0.4238537991).abs() < 1e-9, "T1 {t1}");
        assert!((t2 - 0.6050003338).abs() < 1e-9, "T2 {t2}");
        assert!((t3 - 0.6796410239).abs() < 1e-9, "T3 {t3}");
        // unique positive root of the stated B_2 closed form
        assert!((t4 - 1.0155722984).abs() < 1e-9, "T4 {t4}");
        // defining equation of T1 to full root-finder precision
        assert!((t1.powi(3) + t1 - 0.5).abs() < 1e-10);
    }

    #[test]
    fn threshold_rejects_bad_power() {
        assert!(threshold(0.0, Threshold::T1).is_err());
        assert!(threshold(-1.0, Threshold::T2).is_err());
    }

    #[test]
    fn k1_condition_examples() {
        // near-zero at the quoted first ladder entry
        let v = k1_condition(&ICParams { a: 0.424, p: 1.0 });
        assert!(v.abs() < 1e-3, "got {v}");
        // a = 1 collapses to 1 / (p + 1)
        for &p in &[0.5, 1.0, 3.0] {
            let v = k1_condition(&ICParams { a: 1.0, p });
            assert!((v - 1.0 / (p + 1.0)).abs() < 1e-15);
        }
        // root agreement with T1 from two independent root finders
        for &p in &[0.5, 1.0, 2.0, 5.0] {
            let r1 = k1_root(p).unwrap();
            let rt = threshold(p, Threshold::T1).unwrap();
            assert!((r1 - rt).abs() < 1e-9, "p={p}: {r1} vs {rt}");
        }
    }

    #[test]
    fn b2_examples() {
        // no interference: blind time sharing wastes slots
        for &p in &[0.5, 1.0, 4.0] {
            assert!(b2(&ICParams { a: 0.0, p }) < 0.0);
        }
        // large-a limit approaches ln(3)/4 at p = 1
        let v = b2(&ICParams { a: 1e6, p: 1.0 });
        assert!((v - 0.25 * 3.0f64.ln()).abs() < 1e-10);
        // rates meet at the T4 crossing
        let t4 = threshold(1.0, Threshold::T4).unwrap();
        let at_root = ICParams { a: t4, p: 1.0 };
        assert!((blind_ts_sum_rate(&at_root) - gaussian_tin_sum_rate(&at_root)).abs() < 1e-9);
    }

    #[test]
    fn b2_is_the_rate_difference() {
        // identity at a deterministic sweep of (a, p) pairs
        for i in 0..100 {
            let a = 0.05 + 0.07 * i as f64;
            let p = 0.2 + 0.113 * ((i * 37) % 100) as f64;
            let params = ICParams { a, p };
            let lhs = b2(&params);
            let rhs = blind_ts_sum_rate(&params) - gaussian_tin_sum_rate(&params);
            assert!((lhs - rhs).abs() < 1e-15);
        }
    }

    #[test]
    fn tin_examples() {
        assert!((gaussian_tin_sum_rate(&ICParams { a: 0.0, p: 3.0 }) - 4.0f64.ln()).abs() < 1e-15);
        assert!((gaussian_tin_sum_rate(&ICParams { a: 1.0, p: 1.0 }) - 1.5f64.ln()).abs() < 1e-15);
        assert!(
            (blind_ts_sum_rate(&ICParams { a: 0.0, p: 1.0 }) - 0.5 * 3.0f64.ln()).abs() < 1e-15
        );
    }

    #[test]
    fn sum_rate_numeric_trivial_and_errors() {
        let q = QuadratureSpec::default();
        let params = ICParams { a: 0.8, p: 1.0 };
        assert_eq!(sum_rate_numeric(&params, 3, 0.0, 0.05, &q).unwrap(), 0.0);
        assert!(matches!(
            sum_rate_numeric(&params, 1, 0.01, 0.05, &q),
            Err(Error::UnsupportedDegree(1))
        ));
        // far too large a perturbation fails the positivity gate
        assert!(matches!(
            sum_rate_numeric(&params, 3, 0.5, 0.05, &q),
            Err(Error::PerturbationTooLarge)
        ));
    }

    #[test]
    fn gaussian_inputs_reproduce_tin_closed_form() {
        let q = QuadratureSpec::default();
        let params = ICParams { a: 0.8, p: 1.0 };
        let g = PerturbedDensity::gaussian(0.0, params.p).unwrap();
        let s = pair_sum_rate(&params, &g, &g, &q).unwrap();
        assert!((s - gaussian_tin_sum_rate(&params)).abs() < 2e-6, "got {s}");
    }
}
