//! Bracket-scan plus bisection root finding. Every function handed to these
//! routines is cheap and smooth.

use crate::error::{Error, Result};

/// Bisect a sign change on `[lo, hi]` down to an interval of width `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < tol {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// First root of `f` on a geometric grid over `(lo, hi]`, refined by bisection.
pub fn find_root_geometric<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    scan_points: usize,
    tol: f64,
    name: &str,
) -> Result<f64> {
    assert!(lo > 0.0 && hi > lo && scan_points >= 2);
    let ratio = (hi / lo).powf(1.0 / (scan_points - 1) as f64);
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    if f_prev == 0.0 {
        return Ok(lo);
    }
    for i in 1..scan_points {
        let x = lo * ratio.powi(i as i32);
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) != (f_prev < 0.0) {
            return Ok(bisect(&f, x_prev, x, tol));
        }
        x_prev = x;
        f_prev = fx;
    }
    Err(Error::NoRoot {
        name: name.to_string(),
        lo,
        hi,
    })
}

/// All roots of `f` found by a uniform scan over `[lo, hi]`.
pub fn scan_roots_linear<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    scan_points: usize,
    tol: f64,
) -> Vec<f64> {
    assert!(hi > lo && scan_points >= 2);
    let step = (hi - lo) / (scan_points - 1) as f64;
    let mut roots = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..scan_points {
        let x = lo + i as f64 * step;
        let fx = f(x);
        if f_prev == 0.0 {
            roots.push(x_prev);
        } else if fx != 0.0 && (fx < 0.0) != (f_prev < 0.0) {
            roots.push(bisect(&f, x_prev, x, tol));
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        roots.push(x_prev);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_cubic() {
        // root of x^3 + x - 1/2 is near 0.4239
        let r = bisect(|x| x * x * x + x - 0.5, 0.1, 1.0, 1e-13);
        assert!((r * r * r + r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn geometric_scan_finds_root() {
        let r = find_root_geometric(|x| x.ln(), 1e-4, 64.0, 512, 1e-12, "ln").unwrap();
        assert!((r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn geometric_scan_reports_missing_root() {
        let e = find_root_geometric(|x| 1.0 + x, 1e-4, 64.0, 512, 1e-12, "affine");
        assert!(matches!(e, Err(Error::NoRoot { .. })));
    }

    #[test]
    fn linear_scan_finds_all_roots() {
        let roots = scan_roots_linear(
            |x| (x - 0.25) * (x - 0.5) * (x - 0.75),
            0.0,
            1.0,
            1001,
            1e-13,
        );
        assert_eq!(roots.len(), 3);
        for (r, expect) in roots.iter().zip([0.25, 0.5, 0.75]) {
            assert!((r - expect).abs() < 1e-10);
        }
    }
}
