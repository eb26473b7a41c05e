//! Gauss–Legendre quadrature on panels.

use std::ops::{Add, Mul};

/// Positive nodes and weights of the 8-point rule on [−1, 1].
const NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// 8-point Gauss–Legendre integral of `f` over `[a, b]`.
pub fn gauss8<T, F>(f: F, a: f64, b: f64, zero: T) -> T
where
    T: Add<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = zero;
    for k in 0..4 {
        let dx = half * NODES[k];
        acc = acc + (f(mid - dx) + f(mid + dx)) * (WEIGHTS[k] * half);
    }
    acc
}

/// Composite 8-point rule on `panels` equal panels.
pub fn composite_gauss8<T, F>(f: F, a: f64, b: f64, panels: usize, zero: T) -> T
where
    T: Add<Output = T> + Mul<f64, Output = T> + Copy,
    F: Fn(f64) -> T,
{
    let n = panels.max(1);
    let width = (b - a) / n as f64;
    (0..n).fold(zero, |acc, k| {
        let lo = a + width * k as f64;
        acc + gauss8(&f, lo, lo + width, zero)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_degree_fifteen() {
        let f = |x: f64| x.powi(15) + 3.0 * x.powi(14) - x;
        let exact = |x: f64| x.powi(16) / 16.0 + 3.0 * x.powi(15) / 15.0 - x * x / 2.0;
        let got = gauss8(f, -0.3, 1.7, 0.0);
        assert!((got - (exact(1.7) - exact(-0.3))).abs() < 1e-12 * exact(1.7).abs());
    }

    #[test]
    fn weights_sum_to_interval_length() {
        assert!((gauss8(|_| 1.0, 2.0, 5.0, 0.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn composite_oscillatory() {
        let got = composite_gauss8(f64::cos, 0.0, 40.0, 64, 0.0);
        assert!((got - 40f64.sin()).abs() < 1e-13);
    }
}
