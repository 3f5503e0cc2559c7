//! Disproof machinery for the strong version of the Shamai-Laroia conjecture
//! on the Gaussian ISI channel.
//!
//! The conjecture claims Gaussian interference minimizes
//! `I(X; X + h X_1 + Z)` over iid laws for `(X, X_1)` with fixed variance.
//! The closed-form gap
//!
//! ```text
//! G(h, u, k) = (1 + h^k)^2 / (1 + h^2 + u)^k - 1 / (1 + h^2 + u)^k - (h^2 / (h^2 + u))^k
//! ```
//!
//! with `u = v / p = 1/SNR` is the second-order mutual-information deficit of
//! the degree-k perturbed pair relative to Gaussian interference; `G > 0`
//! certifies a counter-example. The numeric check recomputes the deficit from
//! entropies of exact coordinate-algebra densities.

use crate::algebra::{tilde_coeffs, PerturbedDensity};
use crate::entropy::entropy_gap_numeric;
use crate::error::{Error, Result};
use crate::quad::{extrapolate_to_zero, QuadratureSpec};

/// Evaluation point: interference tap `h`, inverse SNR `u = v/p`, degree `k`.
///
/// Counter-example certification uses `k >= 3` (the tilde construction);
/// `k = 2` is still a valid gap evaluation and appears in the no-noise
/// boundary checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SLPoint {
    pub h: f64,
    pub u: f64,
    pub k: usize,
}

impl SLPoint {
    pub fn new(h: f64, u: f64, k: usize) -> Result<Self> {
        if h < 0.0 || !h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interference tap must be >= 0, got {h}"
            )));
        }
        if u < 0.0 || !u.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "inverse SNR must be >= 0, got {u}"
            )));
        }
        if k < 2 {
            return Err(Error::UnsupportedDegree(k));
        }
        Ok(Self { h, u, k })
    }
}

/// Closed-form gap `G(h, u, k)`; positive values are counter-examples.
///
/// At `u = 0` the third term is the `h > 0` limit, equal to 1; the origin
/// `h = u = 0` is indeterminate.
pub fn sl_gap(pt: &SLPoint) -> Result<f64> {
    let SLPoint { h, u, k } = *pt;
    if h == 0.0 && u == 0.0 {
        return Err(Error::IndeterminatePoint);
    }
    let k_i = k as i32;
    let denom = 1.0 + h * h + u;
    let hk = h.powi(k_i);
    let third = if u == 0.0 {
        1.0
    } else {
        (h * h / (h * h + u)).powi(k_i)
    };
    Ok((1.0 + hk) * (1.0 + hk) / denom.powi(k_i) - 1.0 / denom.powi(k_i) - third)
}

/// All grid points with a strictly positive gap, in row order `(h, u, k)`.
///
/// The indeterminate origin is skipped; an empty result is valid.
pub fn sl_scan(h_grid: &[f64], u_grid: &[f64], k_set: &[usize]) -> Vec<(SLPoint, f64)> {
    let mut out = Vec::new();
    for &h in h_grid {
        for &u in u_grid {
            for &k in k_set {
                if h == 0.0 && u == 0.0 {
                    continue;
                }
                let pt = SLPoint { h, u, k };
                if let Ok(gap) = sl_gap(&pt) {
                    if gap > 0.0 {
                        out.push((pt, gap));
                    }
                }
            }
        }
    }
    out
}

/// Lebesgue measure (count times grid step) of the positive-gap `h` values,
/// per `(u, k)` slice. Emitted as data; no monotonicity in `u` is asserted.
pub fn sl_region_measure(
    h_grid: &[f64],
    h_step: f64,
    u_grid: &[f64],
    k_set: &[usize],
) -> Vec<(f64, usize, f64)> {
    let mut rows = Vec::new();
    for &u in u_grid {
        for &k in k_set {
            let count = h_grid
                .iter()
                .filter(|&&h| {
                    !(h == 0.0 && u == 0.0)
                        && sl_gap(&SLPoint { h, u, k })
                            .map(|g| g > 0.0)
                            .unwrap_or(false)
                })
                .count();
            rows.push((u, k, count as f64 * h_step));
        }
    }
    rows
}

/// Numeric mutual-information deficit
/// `(2 / eps^2) [I(X; X + h X_1 + Z) - I(X; X + h X_1^G + Z)]`
/// for `X, X_1` iid `g_p (1 + eps H~_k)` and `Z ~ N(0, v)`.
///
/// The limit along an epsilon ladder equals `-G(h, v/p, k)`: a negative
/// limit where the gap is positive confirms that the perturbed interference
/// yields strictly smaller mutual information than Gaussian interference.
pub fn sl_numeric_check(
    h: f64,
    p: f64,
    v: f64,
    k: usize,
    eps: f64,
    delta: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    crate::hermite::check_variance(p)?;
    crate::hermite::check_variance(v)?;
    if h < 0.0 || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "interference tap must be >= 0, got {h}"
        )));
    }
    if eps == 0.0 || h == 0.0 {
        // with no interference path the two mutual informations coincide
        return Ok(0.0);
    }
    let x = PerturbedDensity::new(0.0, p, tilde_coeffs(k, eps, delta)?)?;
    if !x.positivity_check(q.radius_sigmas, q.nodes) {
        return Err(Error::PerturbationTooLarge);
    }
    let interference = x.scale(h)?;
    let signal_and_interference = x.convolve(&interference)?.add_noise(v)?; // X + h X_1 + Z
    let interference_only = interference.add_noise(v)?; // h X_1 + Z
    let gaussian_interference = x.add_noise(h * h * p + v)?; // X + h X_1^G + Z
    for d in [
        &signal_and_interference,
        &interference_only,
        &gaussian_interference,
    ] {
        if !d.positivity_check(q.radius_sigmas, q.nodes) {
            return Err(Error::PerturbationTooLarge);
        }
    }
    // the Gaussian entropy baselines cancel pairwise: h X_1^G + Z is exactly
    // Gaussian with the variance of interference_only's base
    let deficit = (entropy_gap_numeric(&signal_and_interference, q)?
        - entropy_gap_numeric(&interference_only, q)?)
        - entropy_gap_numeric(&gaussian_interference, q)?;
    Ok(2.0 / (eps * eps) * deficit)
}

/// Extrapolated limit of [`sl_numeric_check`] along an epsilon ladder.
pub fn sl_numeric_limit(
    h: f64,
    p: f64,
    v: f64,
    k: usize,
    delta: f64,
    eps_ladder: &[f64],
    q: &QuadratureSpec,
) -> Result<f64> {
    crate::quad::validate_ladder(eps_ladder)?;
    let mut pts = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        pts.push((eps, sl_numeric_check(h, p, v, k, eps, delta, q)?));
    }
    Ok(extrapolate_to_zero(&pts))
}

/// Uniform grid `start, start + step, ..., <= stop` (inclusive up to rounding).
pub fn grid_range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && stop >= start);
    let n = ((stop - start) / step + 1.0 + 1e-9).floor() as usize;
    (0..n).map(|i| start + i as f64 * step).collect()
}
