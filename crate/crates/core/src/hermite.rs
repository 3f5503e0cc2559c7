//! Probabilists' Hermite polynomials and Gaussian densities.
//!
//! `H_k` is the probabilists' family, orthogonal under the standard normal
//! weight. The normalized, variance-scaled variant
//!
//! ```text
//! H_k^[p](x) = H_k(x / sqrt(p)) / sqrt(k!)
//! ```
//!
//! is orthonormal in the inner product weighted by the centered Gaussian of
//! variance `p`, and is the coordinate basis used throughout this crate.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported polynomial degree.
///
/// The channel analyses use degrees up to 8 with an even correction at 4k,
/// and convolution cross terms double that; 64 leaves headroom.
pub const MAX_DEGREE: usize = 64;

fn inv_sqrt_factorial(k: usize) -> f64 {
    static TABLE: OnceLock<[f64; MAX_DEGREE + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; MAX_DEGREE + 1];
        let mut fact = 1.0f64;
        for (k, slot) in t.iter_mut().enumerate().skip(1) {
            fact *= k as f64;
            *slot = 1.0 / fact.sqrt();
        }
        t
    })[k]
}

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_DEGREE {
        return Err(Error::DegreeOverflow(k));
    }
    Ok(())
}

pub(crate) fn check_variance(p: f64) -> Result<()> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::InvalidVariance(p));
    }
    Ok(())
}

/// Unnormalized probabilists' Hermite polynomial `H_k(x)`, evaluated by the
/// three-term recurrence `H_{k+1}(x) = x H_k(x) - k H_{k-1}(x)`.
pub fn hermite(k: usize, x: f64) -> Result<f64> {
    check_degree(k)?;
    Ok(hermite_unchecked(k, x))
}

pub(crate) fn hermite_unchecked(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0; // H_0
    let mut cur = x; // H_1
    for j in 1..k {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized scaled Hermite polynomial `H_k^[p](x) = H_k(x / sqrt(p)) / sqrt(k!)`.
///
/// The family `{H_k^[p]}_k` is orthonormal under the Gaussian weight of
/// variance `p`.
pub fn hermite_normalized(k: usize, p: f64, x: f64) -> Result<f64> {
    check_degree(k)?;
    check_variance(p)?;
    Ok(hermite_unchecked(k, x / p.sqrt()) * inv_sqrt_factorial(k))
}

/// Evaluate `sum_k coeffs[k] * H_k(y) / sqrt(k!)` in a single recurrence sweep.
///
/// `y` is the already-standardized argument. Degrees must be sorted ascending
/// and within [`MAX_DEGREE`], which the coefficient container guarantees.
pub(crate) fn weighted_hermite_sum<'a, I>(pairs: I, y: f64) -> f64
where
    I: IntoIterator<Item = (&'a usize, &'a f64)>,
{
    let mut acc = 0.0;
    let mut prev = 1.0; // H_0
    let mut cur = y; // H_1
    let mut deg = 1usize;
    for (&k, &c) in pairs {
        debug_assert!((1..=MAX_DEGREE).contains(&k));
        while deg < k {
            let next = y * cur - deg as f64 * prev;
            prev = cur;
            cur = next;
            deg += 1;
        }
        acc += c * cur * inv_sqrt_factorial(k);
    }
    acc
}

/// Gaussian density with the given mean and variance.
pub fn gaussian_density(mean: f64, p: f64, x: f64) -> Result<f64> {
    check_variance(p)?;
    let z = x - mean;
    Ok((-z * z / (2.0 * p)).exp() / (2.0 * std::f64::consts::PI * p).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    const SQRT_2PI: f64 = 2.5066282746310002;

    #[test]
    fn hermite_low_degrees() {
        assert_eq!(hermite(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite(1, 2.0).unwrap(), 2.0);
        // H_3(x) = x^3 - 3x, so H_3(2) = 8 - 6 = 2
        assert!((hermite(3, 2.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_degree_overflow() {
        assert!(hermite(MAX_DEGREE, 0.5).is_ok());
        assert!(matches!(
            hermite(MAX_DEGREE + 1, 0.5),
            Err(Error::DegreeOverflow(_))
        ));
    }

    #[test]
    fn normalized_values() {
        // H_2(x) = x^2 - 1 vanishes at x = 1 regardless of normalization
        assert_eq!(hermite_normalized(2, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(hermite_normalized(0, 5.0, -4.2).unwrap(), 1.0);
        // H_3(2 / sqrt(4)) / sqrt(3!) = H_3(1) / sqrt(6) = -2 / sqrt(6)
        let v = hermite_normalized(3, 4.0, 2.0).unwrap();
        assert!((v - (-2.0 / 6.0f64.sqrt())).abs() < 1e-14);
        assert!((v - (-0.816496580927726)).abs() < 1e-12);
    }

    #[test]
    fn normalized_rejects_bad_variance() {
        assert!(matches!(
            hermite_normalized(2, 0.0, 1.0),
            Err(Error::InvalidVariance(_))
        ));
        assert!(matches!(
            hermite_normalized(2, -1.0, 1.0),
            Err(Error::InvalidVariance(_))
        ));
    }

    #[test]
    fn gaussian_density_values() {
        assert!((gaussian_density(0.0, 1.0, 0.0).unwrap() - 1.0 / SQRT_2PI).abs() < 1e-15);
        assert!(
            (gaussian_density(0.0, 4.0, 0.0).unwrap() - 1.0 / (8.0 * std::f64::consts::PI).sqrt())
                .abs()
                < 1e-15
        );
        // shift invariance at the mode
        assert_eq!(
            gaussian_density(2.0, 1.0, 2.0).unwrap(),
            gaussian_density(0.0, 1.0, 0.0).unwrap()
        );
        assert!(gaussian_density(0.0, -2.0, 0.0).is_err());
    }

    #[test]
    fn orthonormality_under_gaussian_weight() {
        for &p in &[0.5f64, 1.0, 3.0] {
            let s = p.sqrt();
            for j in 0..=12usize {
                for k in j..=12usize {
                    let integral = integrate(
                        |x| {
                            gaussian_density(0.0, p, x).unwrap()
                                * hermite_normalized(j, p, x).unwrap()
                                * hermite_normalized(k, p, x).unwrap()
                        },
                        -12.0 * s,
                        12.0 * s,
                        2000,
                    );
                    let expect = if j == k { 1.0 } else { 0.0 };
                    assert!(
                        (integral - expect).abs() < 1e-9,
                        "orthonormality failed: j={j} k={k} p={p} got {integral}"
                    );
                }
            }
        }
    }

    #[test]
    fn appell_derivative_property() {
        // d/dx H_{k+1}^[p](x) = sqrt((k+1)/p) H_k^[p](x)
        let h = 1e-5;
        for &p in &[0.5, 1.0, 2.0] {
            for k in 0..=10usize {
                for &x in &[-2.3, -0.7, 0.4, 1.9] {
                    let fd = (hermite_normalized(k + 1, p, x + h).unwrap()
                        - hermite_normalized(k + 1, p, x - h).unwrap())
                        / (2.0 * h);
                    let exact = ((k + 1) as f64 / p).sqrt() * hermite_normalized(k, p, x).unwrap();
                    assert!(
                        (fd - exact).abs() < 1e-6 * exact.abs().max(1.0),
                        "Appell failed at k={k} p={p} x={x}: fd={fd} exact={exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn weighted_derivative_recurrence() {
        // d/dx (g_p H_k^[p]) = -sqrt((k+1)/p) g_p H_{k+1}^[p]
        let h = 1e-5;
        let weighted = |k: usize, p: f64, x: f64| {
            gaussian_density(0.0, p, x).unwrap() * hermite_normalized(k, p, x).unwrap()
        };
        for &p in &[0.5, 1.0, 2.0] {
            for k in 0..=10usize {
                for &x in &[-1.8, 0.3, 1.2] {
                    let fd = (weighted(k, p, x + h) - weighted(k, p, x - h)) / (2.0 * h);
                    let exact = -(((k + 1) as f64) / p).sqrt() * weighted(k + 1, p, x);
                    assert!(
                        (fd - exact).abs() < 1e-6 * exact.abs().max(1.0),
                        "recurrence failed at k={k} p={p} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn first_and_second_moment_roles() {
        // int x H_1^[p] g_p dx = sqrt(p); int x^2 H_2^[p] g_p dx = sqrt(2) p
        for &p in &[0.5f64, 1.0, 3.0] {
            let s = p.sqrt();
            let m1 = integrate(
                |x| x * hermite_normalized(1, p, x).unwrap() * gaussian_density(0.0, p, x).unwrap(),
                -12.0 * s,
                12.0 * s,
                2000,
            );
            assert!((m1 - s).abs() < 1e-9, "m1 off at p={p}: {m1}");
            let m2 = integrate(
                |x| {
                    x * x
                        * hermite_normalized(2, p, x).unwrap()
                        * gaussian_density(0.0, p, x).unwrap()
                },
                -12.0 * s,
                12.0 * s,
                2000,
            );
            assert!(
                (m2 - std::f64::consts::SQRT_2 * p).abs() < 1e-9,
                "m2 off at p={p}: {m2}"
            );
        }
    }
}
