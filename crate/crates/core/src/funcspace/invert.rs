use super::FuncError;

/// Relative tolerance of [`invert_monotone`]: `|f(x) − y| ≤ 1e−10·max(1, y)`.
pub const INVERT_TOL: f64 = 1e-10;

/// Solves `f(x) = y` for a strictly increasing `f` on `[0, ∞)` by bisection.
///
/// The upper bracket is found by doubling from 1, giving up after the bracket
/// has grown by 2⁶⁰.
pub fn invert_monotone(f: impl Fn(f64) -> f64, y: f64) -> Result<f64, FuncError> {
    let f0 = f(0.0);
    if y.is_nan() || y < f0 {
        return Err(FuncError::Range(format!("target {y} below f(0) = {f0}")));
    }
    let tol = INVERT_TOL * y.abs().max(1.0);
    if (f0 - y).abs() <= tol {
        return Ok(0.0);
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while f(hi) < y {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(FuncError::Divergence(format!(
                "no upper bracket for target {y} below 2^60"
            )));
        }
    }

    // Bisect until the residual meets the tolerance or the bracket collapses
    // to adjacent floats.
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm - y).abs() <= tol {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if fm < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (f(lo), f(hi));
    Ok(if (flo - y).abs() <= (fhi - y).abs() {
        lo
    } else {
        hi
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_root() {
        let x = invert_monotone(|s| s * s, 4.0).unwrap();
        assert!((x * x - 4.0).abs() <= 1e-10 * 4.0);
    }

    #[test]
    fn identity_at_origin() {
        assert_eq!(invert_monotone(|s| s, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn below_range_is_error() {
        assert!(matches!(
            invert_monotone(|s| s + 1.0, 0.5),
            Err(FuncError::Range(_))
        ));
    }

    #[test]
    fn bounded_function_diverges() {
        assert!(matches!(
            invert_monotone(|s| s / (1.0 + s), 2.0),
            Err(FuncError::Divergence(_))
        ));
    }

    proptest! {
        #[test]
        fn residual_within_tolerance(y in 0.0f64..1e6, c in 0.1f64..10.0, p in 0.5f64..3.0) {
            let f = |s: f64| c * s.powf(p) + s;
            let x = invert_monotone(f, y).unwrap();
            prop_assert!((f(x) - y).abs() <= 1e-10 * y.max(1.0));
        }
    }
}
