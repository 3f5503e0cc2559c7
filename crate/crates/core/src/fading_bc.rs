//! Degraded broadcast channel with coherent fading known at the receivers:
//! Gaussian mu-rate and power split, the degree-k gain conditions, and an
//! end-to-end numeric counter-example verifier.
//!
//! Channel: `Y_1 = H X + Z_1`, `Y_2 = H X + Z_2` with `Z_1 ~ N(0, v)`,
//! `0 < v < 1`, `Z_2 ~ N(0, 1)`, input power `p`, and the weighted objective
//! `I(X; Y_1 | U, H) + mu I(U; Y_2 | H)` over superposition codes `X = U + V`.

use serde::{Deserialize, Serialize};

use crate::algebra::{tilde_coeffs, PerturbedDensity};
use crate::entropy::entropy_gap_numeric;
use crate::error::{Error, Result};
use crate::hermite::gaussian_density;
use crate::quad::{extrapolate_to_zero, integrate, QuadratureSpec};
use crate::roots::scan_roots_linear;

/// One fading value with its probability weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingAtom {
    pub h: f64,
    pub w: f64,
}

/// Finite discrete law of the fading gain `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FadingLawRepr", into = "FadingLawRepr")]
pub struct FadingLaw {
    atoms: Vec<FadingAtom>,
}

#[derive(Serialize, Deserialize)]
struct FadingLawRepr {
    atoms: Vec<FadingAtom>,
}

impl TryFrom<FadingLawRepr> for FadingLaw {
    type Error = Error;
    fn try_from(repr: FadingLawRepr) -> Result<Self> {
        FadingLaw::new(repr.atoms)
    }
}

impl From<FadingLaw> for FadingLawRepr {
    fn from(law: FadingLaw) -> Self {
        FadingLawRepr { atoms: law.atoms }
    }
}

impl FadingLaw {
    /// Validated law: at least one atom, gains nonnegative, weights positive
    /// and summing to one within 1e-12.
    pub fn new(atoms: Vec<FadingAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidFadingLaw("no atoms".into()));
        }
        let mut total = 0.0;
        for atom in &atoms {
            if atom.h < 0.0 || !atom.h.is_finite() {
                return Err(Error::InvalidFadingLaw(format!(
                    "fading gain must be >= 0, got {}",
                    atom.h
                )));
            }
            if atom.w <= 0.0 || !atom.w.is_finite() {
                return Err(Error::InvalidFadingLaw(format!(
                    "weight must be positive, got {}",
                    atom.w
                )));
            }
            total += atom.w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidFadingLaw(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { atoms })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn atoms(&self) -> &[FadingAtom] {
        &self.atoms
    }

    /// Expectation of `f(H)` under the law.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.atoms.iter().map(|a| a.w * f(a.h)).sum()
    }
}

/// Broadcast parameters: total power `p`, strong-user noise variance `v`,
/// objective weight `mu`, and the power `r` allocated to the fine message `V`
/// (the coarse message `U` gets `p - r`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BCParams {
    pub p: f64,
    pub v: f64,
    pub mu: f64,
    pub r: f64,
}

impl BCParams {
    pub fn new(p: f64, v: f64, mu: f64, r: f64) -> Result<Self> {
        if p <= 0.0 || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power must be positive, got {p}"
            )));
        }
        if v <= 0.0 || v >= 1.0 || v.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "strong-user noise variance must lie in (0, 1), got {v}"
            )));
        }
        if mu <= 0.0 || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive, got {mu}"
            )));
        }
        if !(0.0..=p).contains(&r) {
            return Err(Error::InvalidParameter(format!(
                "r must lie in [0, p], got {r}"
            )));
        }
        Ok(Self { p, v, mu, r })
    }
}

/// Mu-rate of the best jointly Gaussian code with split `r`:
/// `1/2 E ln(1 + R H^2 / v) + mu/2 E ln((1 + P H^2) / (1 + R H^2))`.
pub fn mu_rate_gaussian(params: &BCParams, fading: &FadingLaw) -> f64 {
    let BCParams { p, v, mu, r } = *params;
    fading.expect(|h| {
        let h2 = h * h;
        0.5 * (1.0 + r * h2 / v).ln() + mu * 0.5 * ((1.0 + p * h2) / (1.0 + r * h2)).ln()
    })
}

/// Result of the power-split search: stationary points of the Gaussian
/// mu-rate in `r` and the global maximizer over `[0, p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RSearch {
    pub stationary: Vec<f64>,
    pub best_r: f64,
    pub best_value: f64,
}

/// Stationarity condition for the Gaussian power split:
/// `E H^2 / (v + R H^2) = mu E H^2 / (1 + R H^2)`; note it does not involve
/// the total power, so an interior maximizer is independent of `p`.
fn stationarity(r: f64, v: f64, mu: f64, fading: &FadingLaw) -> f64 {
    fading.expect(|h| {
        let h2 = h * h;
        h2 / (v + r * h2) - mu * h2 / (1.0 + r * h2)
    })
}

/// All stationary points of the Gaussian mu-rate on `[0, p]` plus the
/// boundary candidates, ranked by [`mu_rate_gaussian`].
pub fn optimal_r(p: f64, v: f64, mu: f64, fading: &FadingLaw) -> Result<RSearch> {
    // validate everything except r, which is being searched
    BCParams::new(p, v, mu, 0.0)?;
    let stationary = scan_roots_linear(|r| stationarity(r, v, mu, fading), 0.0, p, 4001, 1e-13);
    let mut best_r = 0.0;
    let mut best_value = f64::NEG_INFINITY;
    for &r in stationary.iter().chain([0.0, p].iter()) {
        let params = BCParams { p, v, mu, r };
        let value = mu_rate_gaussian(&params, fading);
        if value > best_value {
            best_value = value;
            best_r = r;
        }
    }
    Ok(RSearch {
        stationary,
        best_r,
        best_value,
    })
}

/// Left-hand side of the degree-k gain condition
/// `mu E (R H^2 / (1 + R H^2))^k - E (R H^2 / (v + R H^2))^k`.
///
/// Positive at the optimal split means degree-k perturbations of the
/// superposition code strictly beat every Gaussian code.
pub fn hermite_gain(k: usize, r: f64, params: &BCParams, fading: &FadingLaw) -> Result<f64> {
    if k < 3 {
        return Err(Error::UnsupportedDegree(k));
    }
    if r <= 0.0 || r.is_nan() || r > params.p {
        return Err(Error::InvalidParameter(format!(
            "r must lie in (0, p], got {r}"
        )));
    }
    let (v, mu) = (params.v, params.mu);
    let t1 = fading.expect(|h| {
        let rh2 = r * h * h;
        (rh2 / (1.0 + rh2)).powi(k as i32)
    });
    let tv = fading.expect(|h| {
        let rh2 = r * h * h;
        (rh2 / (v + rh2)).powi(k as i32)
    });
    Ok(mu * t1 - tv)
}

/// Gain condition for codes with Gaussian `U` and non-Gaussian `V`:
/// `mu [E T(1)^k - (R/P)^k E (P H^2 / (1 + P H^2))^k] - E T(v)^k`
/// (the value returned is RHS minus LHS of the underlying inequality).
pub fn weak_condition(k: usize, r: f64, params: &BCParams, fading: &FadingLaw) -> Result<f64> {
    let gain = hermite_gain(k, r, params, fading)?;
    let (p, mu) = (params.p, params.mu);
    let tp = fading.expect(|h| {
        let ph2 = p * h * h;
        (ph2 / (1.0 + ph2)).powi(k as i32)
    });
    Ok(gain - mu * (r / p).powi(k as i32) * tp)
}

/// End-to-end numeric counter-example check at `P = 2R`.
///
/// Builds `U ~ g_Q (1 + eps H~_k)` and `V ~ g_R (1 - eps H~_k)` with
/// `Q = R = P/2` (the degree-k components of `X = U + V` cancel exactly, so
/// the weak user sees an almost-Gaussian input), evaluates the mu-rate
/// numerically per fading atom, and returns
/// `(mu-rate - mu_rate_gaussian) / eps^2`. A positive limit along an epsilon
/// ladder certifies that the perturbed code beats the best Gaussian one.
///
/// Given `U = u` and `H = h`, the strong user observes `h u + h V + Z_1`, so
/// the conditional densities are shifts of `scale(V, h) + Z` and their
/// entropies do not depend on `u`; the integral over `u` reduces to the mass
/// of the `U` density on the quadrature window, which multiplies each
/// conditional entropy.
pub fn counterexample_verify(
    params: &BCParams,
    fading: &FadingLaw,
    k: usize,
    eps: f64,
    delta: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    let BCParams { p, v, mu, r } = *params;
    if (p - 2.0 * r).abs() > 1e-9 * p.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "counter-example construction requires P = 2R, got P = {p}, R = {r}"
        )));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let q_var = p - r;
    let u_density = PerturbedDensity::new(0.0, q_var, tilde_coeffs(k, eps, delta)?)?;
    let v_density = PerturbedDensity::new(0.0, r, tilde_coeffs(k, -eps, delta)?)?;
    for d in [&u_density, &v_density] {
        if !d.positivity_check(q.radius_sigmas, q.nodes) {
            return Err(Error::PerturbationTooLarge);
        }
    }
    let x_density = u_density.convolve(&v_density)?;

    // mass of the U density on its quadrature window: exactly 1 for the
    // Gaussian part, plus the (zero up to truncation) perturbation mass
    let sigma_u = q_var.sqrt();
    let w_mass = 1.0
        + integrate(
            |t| {
                gaussian_density(0.0, q_var, t).expect("validated variance")
                    * u_density.perturbation(t)
            },
            -q.radius_sigmas * sigma_u,
            q.radius_sigmas * sigma_u,
            q.nodes,
        );

    let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    let mut diff = 0.0;
    let mut base = 0.0;
    for atom in fading.atoms() {
        let (h, w) = (atom.h, atom.w);
        // entropy gaps of Y_1 | U, H; Y_2 | U, H; Y_2 | H relative to their
        // base Gaussians; the Gaussian parts cancel against mu_rate_gaussian
        let (gap1, gap2, gapx) = if h == 0.0 {
            (0.0, 0.0, 0.0)
        } else {
            let y1_given_u = v_density.scale(h)?.add_noise(v)?;
            let y2_given_u = v_density.scale(h)?.add_noise(1.0)?;
            let y2_given_h = x_density.scale(h)?.add_noise(1.0)?;
            for d in [&y1_given_u, &y2_given_u, &y2_given_h] {
                if !d.positivity_check(q.radius_sigmas, q.nodes) {
                    return Err(Error::PerturbationTooLarge);
                }
            }
            (
                entropy_gap_numeric(&y1_given_u, q)?,
                entropy_gap_numeric(&y2_given_u, q)?,
                entropy_gap_numeric(&y2_given_h, q)?,
            )
        };
        diff += w * (w_mass * gap1 + mu * gapx - mu * w_mass * gap2);
        let h2 = h * h;
        base += w
            * (0.5 * (two_pi_e * (v + r * h2)).ln() - mu * 0.5 * (two_pi_e * (1.0 + r * h2)).ln());
    }
    diff += (w_mass - 1.0) * base;
    Ok(diff / (eps * eps))
}

/// Extrapolated limit of [`counterexample_verify`] along an epsilon ladder.
pub fn counterexample_limit(
    params: &BCParams,
    fading: &FadingLaw,
    k: usize,
    delta: f64,
    eps_ladder: &[f64],
    q: &QuadratureSpec,
) -> Result<f64> {
    crate::quad::validate_ladder(eps_ladder)?;
    let mut pts = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        pts.push((
            eps,
            counterexample_verify(params, fading, k, eps, delta, q)?,
        ));
    }
    Ok(extrapolate_to_zero(&pts))
}
