//! Closed-form algebra on perturbed Gaussian densities.
//!
//! A perturbed density is `f(x) = g_{m,p}(x) (1 + sum_k c_k H_k^[p](x - m))`,
//! a Gaussian of mean `m` and variance `p` multiplied by a finite Hermite
//! expansion. The operations here are exact on this representation:
//!
//! - `add_noise`: convolution with a centered Gaussian multiplies each
//!   coefficient by `(p / (p + v))^(k/2)` and reinterprets it at variance
//!   `p + v` (the Hermite directions are eigenfunctions of the channel map),
//! - `smooth`: the adjoint map, same degreewise factor, back to variance `p`,
//! - `convolve`: the sum of two independent perturbed variables stays in the
//!   family, with cross terms `c_j c_k C(j,k,a,b)` at degree `j + k`,
//! - `scale`, the positivity correction `tilde_coeffs`, a windowed positivity
//!   check and pointwise evaluation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hermite::{check_variance, weighted_hermite_sum, MAX_DEGREE};

/// A grid value of `1 + sum_k c_k H_k` below this is treated as a positivity
/// violation.
pub const POSITIVITY_TOL: f64 = -1e-12;

/// Sparse map from Hermite degree (>= 1) to coefficient.
///
/// Degree 0 is excluded: a constant component would break the unit mass of
/// the perturbed density. Zero coefficients are dropped on construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PerturbationCoeffs {
    entries: BTreeMap<usize, f64>,
}

impl PerturbationCoeffs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, f64)>>(pairs: I) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (k, c) in pairs {
            if k == 0 {
                return Err(Error::ConstantDirection);
            }
            if k > MAX_DEGREE {
                return Err(Error::DegreeOverflow(k));
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite coefficient {c} at degree {k}"
                )));
            }
            if c != 0.0 {
                let slot = entries.entry(k).or_insert(0.0);
                *slot += c;
                if *slot == 0.0 {
                    entries.remove(&k);
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, k: usize) -> f64 {
        self.entries.get(&k).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// Euclidean norm of the coefficient vector; equals the weighted L2 norm
    /// of the direction by orthonormality of the basis.
    pub fn norm(&self) -> f64 {
        self.sum_squares().sqrt()
    }

    pub fn sum_squares(&self) -> f64 {
        self.entries.values().map(|c| c * c).sum()
    }

    /// New coefficients with each entry multiplied by `factor(k)`.
    fn map_degreewise<F: Fn(usize) -> f64>(&self, factor: F) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(&k, &c)| (k, c * factor(k)))
            .filter(|&(_, c)| c != 0.0)
            .collect();
        Self { entries }
    }

    /// `sum_k c_k H_k(y) / sqrt(k!)` for an already standardized argument.
    pub(crate) fn weighted_sum(&self, y: f64) -> f64 {
        if self.entries.is_empty() {
            return 0.0;
        }
        weighted_hermite_sum(self.entries.iter(), y)
    }
}

/// The adjoint channel map applied degreewise: coefficients at variance
/// `p + v` become coefficients at variance `p`, each multiplied by
/// `(p / (p + v))^(k/2)`.
pub fn smooth(coeffs: &PerturbationCoeffs, p: f64, v: f64) -> Result<PerturbationCoeffs> {
    check_variance(p)?;
    check_variance(v)?;
    let ratio = p / (p + v);
    Ok(coeffs.map_degreewise(|k| ratio.powf(k as f64 / 2.0)))
}

/// Positivity-corrected coefficients `{k: b, 4k: |b| * delta}`.
///
/// The even-degree term at `4k` dominates in the tails, so the sign of the
/// correction follows `|b|` and the perturbed density stays nonnegative for
/// small enough `b`. `delta = 0` omits the correction.
pub fn tilde_coeffs(k: usize, b: f64, delta: f64) -> Result<PerturbationCoeffs> {
    if k == 0 {
        return Err(Error::ConstantDirection);
    }
    if delta < 0.0 || delta.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "tilde correction delta must be nonnegative, got {delta}"
        )));
    }
    if b == 0.0 {
        return Ok(PerturbationCoeffs::new());
    }
    if 4 * k > MAX_DEGREE {
        return Err(Error::DegreeOverflow(4 * k));
    }
    PerturbationCoeffs::from_pairs([(k, b), (4 * k, b.abs() * delta)])
}

/// Cross-convolution constant: `g_a H_j^[a] * g_b H_k^[b] = C g_{a+b} H_{j+k}^[a+b]`
/// with `C = sqrt(binom(j+k, j)) a^(j/2) b^(k/2) / (a+b)^((j+k)/2)`.
///
/// Follows from writing `g_a H_j^[a]` as a scaled j-th derivative of `g_a`;
/// convolution then adds derivative orders. The `j = k = 1` case reduces to
/// `sqrt(2ab) / (a + b)`.
pub fn cross_coefficient(j: usize, k: usize, a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    let mut binom = 1.0f64;
    for i in 0..j.min(k) {
        binom *= (j + k - i) as f64 / (i + 1) as f64;
    }
    binom.sqrt() * a.powf(j as f64 / 2.0) * b.powf(k as f64 / 2.0)
        / (a + b).powf((j + k) as f64 / 2.0)
}

/// Gaussian times a finite Hermite expansion; the coordinate representation
/// of a near-Gaussian law.
///
/// If the coefficients are restricted to degrees >= 3 the density has mean
/// `mean` and variance `variance` exactly; degree 1 and 2 entries shift the
/// first two moments.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedDensity {
    mean: f64,
    variance: f64,
    coeffs: PerturbationCoeffs,
}

impl PerturbedDensity {
    pub fn new(mean: f64, variance: f64, coeffs: PerturbationCoeffs) -> Result<Self> {
        check_variance(variance)?;
        if !mean.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite mean {mean}")));
        }
        Ok(Self {
            mean,
            variance,
            coeffs,
        })
    }

    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        Self::new(mean, variance, PerturbationCoeffs::new())
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn coeffs(&self) -> &PerturbationCoeffs {
        &self.coeffs
    }

    /// Density of `X + Z` for independent centered Gaussian noise of variance
    /// `v`: same mean, variance `p + v`, coefficients contracted degreewise by
    /// `(p / (p + v))^(k/2)`.
    pub fn add_noise(&self, v: f64) -> Result<Self> {
        check_variance(v)?;
        let ratio = self.variance / (self.variance + v);
        Self::new(
            self.mean,
            self.variance + v,
            self.coeffs.map_degreewise(|k| ratio.powf(k as f64 / 2.0)),
        )
    }

    /// Density of `s X` for `s != 0`.
    ///
    /// `g_p(x/s)/|s| = g_{s^2 p}(x)` and `H_k^[p](x/s) = H_k^[s^2 p](x)` for
    /// `s > 0`, so coefficients carry over unchanged; a negative `s` flips the
    /// sign of the odd-degree coefficients (`H_k` has the parity of `k`).
    pub fn scale(&self, s: f64) -> Result<Self> {
        if s == 0.0 || !s.is_finite() {
            return Err(Error::DegenerateScale);
        }
        let coeffs = if s > 0.0 {
            self.coeffs.clone()
        } else {
            self.coeffs
                .map_degreewise(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
        };
        Self::new(s * self.mean, s * s * self.variance, coeffs)
    }

    /// Exact density of the sum of two independent perturbed variables.
    ///
    /// Means and variances add; every coefficient pair `(c_j, c_k)` lands at
    /// degree `j + k` weighted by the cross constant, with the implicit unit
    /// coefficient at degree 0 covering the first-order channel terms.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        let (a, b) = (self.variance, other.variance);
        let mut pairs: Vec<(usize, f64)> = Vec::new();
        let lhs: Vec<(usize, f64)> = std::iter::once((0usize, 1.0))
            .chain(self.coeffs.iter())
            .collect();
        let rhs: Vec<(usize, f64)> = std::iter::once((0usize, 1.0))
            .chain(other.coeffs.iter())
            .collect();
        for &(j, cj) in &lhs {
            for &(k, ck) in &rhs {
                if j + k == 0 {
                    continue;
                }
                if j + k > MAX_DEGREE {
                    return Err(Error::DegreeOverflow(j + k));
                }
                pairs.push((j + k, cj * ck * cross_coefficient(j, k, a, b)));
            }
        }
        Self::new(
            self.mean + other.mean,
            a + b,
            PerturbationCoeffs::from_pairs(pairs)?,
        )
    }

    /// The Hermite expansion `sum_k c_k H_k^[p](x - mean)` (without the 1).
    pub fn perturbation(&self, x: f64) -> f64 {
        let y = (x - self.mean) / self.variance.sqrt();
        self.coeffs.weighted_sum(y)
    }

    /// Pointwise density value `g_{mean,p}(x) (1 + perturbation(x))`.
    pub fn eval(&self, x: f64) -> f64 {
        let z = x - self.mean;
        let g = (-z * z / (2.0 * self.variance)).exp()
            / (2.0 * std::f64::consts::PI * self.variance).sqrt();
        g * (1.0 + self.perturbation(x))
    }

    /// Check `1 + sum_k c_k H_k^[p] >= -1e-12` on a uniform grid over
    /// `[mean - r sigma, mean + r sigma]`.
    ///
    /// `radius_sigmas` is clamped to >= 8 and `grid_points` to >= 1000; tail
    /// behavior beyond the window is governed by the top-degree term.
    pub fn positivity_check(&self, radius_sigmas: f64, grid_points: usize) -> bool {
        let r = radius_sigmas.max(8.0);
        let n = grid_points.max(1000);
        let sigma = self.variance.sqrt();
        let lo = self.mean - r * sigma;
        let step = 2.0 * r * sigma / (n - 1) as f64;
        for i in 0..n {
            let x = lo + i as f64 * step;
            if 1.0 + self.perturbation(x) < POSITIVITY_TOL {
                return false;
            }
        }
        true
    }
}
