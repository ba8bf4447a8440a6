//! Composite Simpson quadrature on uniformly spaced samples.

use crate::error::{Error, Result};

/// Integrates uniformly spaced `values` with spacing `h`.
///
/// Needs an odd number of samples (an even number of intervals), at least 3.
pub fn simpson(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 {
        return Err(Error::GridTooCoarse { samples: n });
    }
    if n.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "Simpson needs an even interval count, got {}",
            n - 1
        )));
    }
    let mut odd = 0.0;
    let mut even = 0.0;
    for (k, v) in values.iter().enumerate().take(n - 1).skip(1) {
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    Ok(h / 3.0 * (values[0] + values[n - 1] + 4.0 * odd + 2.0 * even))
}

/// Integrates a function over `[a, b]` with `intervals` (even) subintervals.
pub fn simpson_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> Result<f64> {
    if intervals < 2 || !intervals.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "Simpson needs an even interval count >= 2, got {intervals}"
        )));
    }
    let h = (b - a) / intervals as f64;
    let values: Vec<f64> = (0..=intervals).map(|k| f(a + k as f64 * h)).collect();
    simpson(&values, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        // ∫₀² (x³ − 2x + 1) dx = 4 − 4 + 2 = 2
        let v = simpson_fn(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fourth_order_convergence() {
        let exact = 1.0 - (-1.0f64).exp();
        let e1 = (simpson_fn(|x| (-x).exp(), 0.0, 1.0, 8).unwrap() - exact).abs();
        let e2 = (simpson_fn(|x| (-x).exp(), 0.0, 1.0, 16).unwrap() - exact).abs();
        let order = (e1 / e2).log2();
        assert!((3.8..4.2).contains(&order), "order {order}");
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(
            simpson(&[1.0, 2.0], 0.1),
            Err(Error::GridTooCoarse { samples: 2 })
        );
        assert!(matches!(
            simpson(&[1.0, 2.0, 3.0, 4.0], 0.1),
            Err(Error::InvalidGrid(_))
        ));
    }
}
