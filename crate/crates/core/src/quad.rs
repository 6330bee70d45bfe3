//! Composite Simpson quadrature.

/// Composite Simpson rule on `[a, b]` with `n` subintervals (rounded up to even).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    if b == a {
        return 0.0;
    }
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Number of Simpson subintervals so that the step does not exceed `h`.
pub fn intervals_for_step(a: f64, b: f64, h: f64) -> usize {
    (((b - a) / h).ceil() as usize).max(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        assert!((v - (4.0 - 4.0 + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn odd_counts_are_rounded_up() {
        let v = simpson(f64::sin, 0.0, std::f64::consts::PI, 101);
        assert!((v - 2.0).abs() < 1e-7);
    }
}
