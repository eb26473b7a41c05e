//! Phase equation `φ̇ = a + b sin φ` solved through its integrated form.

use std::f64::consts::PI;

use super::ZitterError;

const MAX_ITERATIONS: usize = 100;

/// Proper time needed to advance the phase from 0 to `phase` at rate `a + b sin φ`, `a > |b|`.
fn elapsed(a: f64, b: f64, w: f64, phase: f64) -> f64 {
    let turns = (phase / (2.0 * PI)).round();
    let reduced = phase - turns * 2.0 * PI;
    let half = 0.5 * reduced;
    let (s, c) = half.sin_cos();
    turns * 2.0 * PI / w + (2.0 / w) * (a * s + b * c).atan2(w * c) - (2.0 / w) * b.atan2(w)
}

/// Solves `φ̇ = (omega_e − b_term) + e_amplitude · sin φ`, `φ(0) = phase0`.
///
/// Newton iteration on the integrated form; the residual in proper time
/// is below `1e-12 · max(1, |τ|)` on return.
pub fn kepler_phase(
    omega_e: f64,
    b_term: f64,
    e_amplitude: f64,
    phase0: f64,
    tau: f64,
) -> Result<f64, ZitterError> {
    let rate = omega_e - b_term;
    if e_amplitude == 0.0 {
        return Ok(phase0 + rate * tau);
    }
    if e_amplitude.abs() >= rate.abs() {
        return Err(ZitterError::KeplerRegime { rate, amplitude: e_amplitude });
    }
    // a negative rate maps to a positive one under φ → −φ
    let (a, b, start, sign) = if rate > 0.0 {
        (rate, e_amplitude, phase0, 1.0)
    } else {
        (-rate, e_amplitude, -phase0, -1.0)
    };
    let w = (a * a - b * b).sqrt();
    let target = elapsed(a, b, w, start) + tau;
    let tolerance = 1e-12 * tau.abs().max(1.0);
    let mut phase = start + w * tau;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        residual = elapsed(a, b, w, phase) - target;
        if residual.abs() < tolerance {
            return Ok(sign * phase);
        }
        let step = residual * (a + b * phase.sin());
        // the rate never leaves [a − |b|, a + |b|], so a step of the residual
        // times the largest rate cannot overshoot by more than one period
        phase -= step.clamp(-PI, PI);
    }
    Err(ZitterError::KeplerNoConvergence { residual })
}

/// Zeroth plus first order of the small-amplitude series:
/// `φ ≈ φ0 + aτ − (b/a)(cos(φ0 + aτ) − cos φ0)`.
pub fn kepler_first_order(omega_e: f64, b_term: f64, e_amplitude: f64, phase0: f64, tau: f64) -> f64 {
    let a = omega_e - b_term;
    let zeroth = phase0 + a * tau;
    zeroth - (e_amplitude / a) * (zeroth.cos() - phase0.cos())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rk4_phase(a: f64, b: f64, phase0: f64, tau: f64, steps: usize) -> f64 {
        let f = |p: f64| a + b * p.sin();
        let h = tau / steps as f64;
        let mut p = phase0;
        for _ in 0..steps {
            let k1 = f(p);
            let k2 = f(p + 0.5 * h * k1);
            let k3 = f(p + 0.5 * h * k2);
            let k4 = f(p + h * k3);
            p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        p
    }

    #[test]
    fn zero_amplitude_is_linear() {
        assert_eq!(kepler_phase(2.0, 0.5, 0.0, 0.1, 3.0).unwrap(), 0.1 + 1.5 * 3.0);
    }

    #[test]
    fn matches_fine_runge_kutta() {
        for &(a, b, p0) in &[(2.0, 0.1, 0.0), (2.0, -0.3, 1.0), (1.5, 0.7, -2.0), (-2.0, 0.4, 0.5)] {
            for &tau in &[0.3, 5.0, 40.0] {
                let exact = kepler_phase(a, 0.0, b, p0, tau).unwrap();
                let numeric = rk4_phase(a, b, p0, tau, 200_000);
                assert!((exact - numeric).abs() < 1e-10 * tau.max(1.0), "{a} {b} {tau}: {exact} {numeric}");
            }
        }
    }

    #[test]
    fn first_order_amplitude() {
        let (a, p0) = (2.0, 0.3);
        let tau = 2.0 * PI / a;
        let mut previous = None;
        for &b in &[1e-2, 5e-3] {
            let err = (0..64)
                .map(|k| {
                    let t = tau * k as f64 / 64.0;
                    (kepler_phase(a, 0.0, b, p0, t).unwrap() - kepler_first_order(a, 0.0, b, p0, t)).abs()
                })
                .fold(0.0, f64::max);
            // the remainder is second order in b/a
            assert!(err < 2.0 * (b / a).powi(2) * a * tau);
            if let Some(prev) = previous {
                let ratio: f64 = prev / err;
                assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
            }
            previous = Some(err);
        }
    }

    #[test]
    fn regime_errors() {
        assert!(matches!(kepler_phase(1.0, 0.0, 1.0, 0.0, 1.0), Err(ZitterError::KeplerRegime { .. })));
    }
}
