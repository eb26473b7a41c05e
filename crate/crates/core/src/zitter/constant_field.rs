//! Closed-form history in a uniform field.
//!
//! The rotor factors as `R = L U` with `L = e^{qFτ/2} L0` a field-driven Lorentz
//! rotation and `U = U0 e^{½γ2γ1ϑ}` a spatial rotation about the spin axis.
//! The angle obeys `ϑ̇ = a + b sin(ϑ + δ)`, solved by [`kepler_phase`].
//!
//! The factorization ties the frame vector e0 to `ė0 = qF·e0`. The full equations
//! of motion keep that only when the rest-frame E and B are both along the spin
//! axis and the initial state has `m1 = m_e`; then the history is exact. Field
//! components in the zitter plane make e0 wobble at the zitter frequency and the
//! factorized history drifts from the true one at first order in `qF/m_e`.

use std::f64::consts::PI;

use super::{frame, kepler_phase, FieldModel, ParticleState, ZitterError};
use crate::quad::composite_gauss8;
use crate::sta::{boost_from_velocity, exp_bivector, Bivec, Multivector, Rotor, Vec4};
use crate::units::NATURAL_OMEGA_E;

/// Largest advance of the zitter angle per quadrature panel.
const PANEL_PHASE: f64 = PI / 8.0;

#[derive(Debug, Clone, Copy)]
pub struct ConstantFieldSolution {
    pub state0: ParticleState,
    pub field: Bivec,
    pub charge: f64,
    boost0: Rotor,
    spatial0: Rotor,
    /// a in ϑ̇ = a + b sin(ϑ + δ).
    pub rate: f64,
    /// b ≥ 0.
    pub modulation: f64,
    /// δ.
    pub offset: f64,
    /// Size of the rest-frame E and B components orthogonal to the spin axis.
    pub in_plane_field: f64,
}

impl ConstantFieldSolution {
    pub fn new(state0: &ParticleState, field: &dyn FieldModel, charge: f64) -> Result<Self, ZitterError> {
        if !field.is_uniform() {
            return Err(ZitterError::NonUniformField);
        }
        let f = field.field(&state0.z);
        let e0 = frame(&state0.rotor)[0];
        let boost0 = boost_from_velocity(&e0)?;
        let spatial0 = boost0.reverse() * state0.rotor;
        let rest_field = boost0.reverse() * f * boost0;
        let (e_rest, b_rest) = rest_field.electric_magnetic();
        let e_rest = Multivector::from_electric_magnetic(e_rest, [0.0; 3]);
        let b_rest = Multivector::from_electric_magnetic(b_rest, [0.0; 3]);
        let axis = |k: usize| spatial0 * Multivector::sigma(k) * spatial0.reverse();
        let c1 = axis(1).dot(&e_rest);
        let c2 = axis(2).dot(&e_rest);
        let rate = NATURAL_OMEGA_E - charge * axis(3).dot(&b_rest);
        let b1 = axis(1).dot(&b_rest);
        let b2 = axis(2).dot(&b_rest);
        let in_plane_field = c1.hypot(c2).max(b1.hypot(b2));
        let modulation = (charge * c1).hypot(charge * c2);
        let offset = (-charge * c1).atan2(charge * c2);
        if modulation >= rate.abs() {
            return Err(ZitterError::KeplerRegime { rate, amplitude: modulation });
        }
        Ok(Self { state0: *state0, field: f, charge, boost0, spatial0, rate, modulation, offset, in_plane_field })
    }

    /// Zitter angle ϑ(τ) with ϑ(0) = 0.
    pub fn angle(&self, tau: f64) -> Result<f64, ZitterError> {
        Ok(kepler_phase(self.rate, 0.0, self.modulation, self.offset, tau)? - self.offset)
    }

    fn rotor_with_angle(&self, tau: f64, angle: f64) -> Rotor {
        let drive = exp_bivector(&(self.field * (0.5 * self.charge * tau)));
        let spin = exp_bivector(&(Multivector::gamma(2) * Multivector::gamma(1) * (0.5 * angle)));
        drive * self.boost0 * self.spatial0 * spin
    }

    pub fn rotor(&self, tau: f64) -> Result<Rotor, ZitterError> {
        Ok(self.rotor_with_angle(tau, self.angle(tau)?))
    }

    fn velocity(&self, tau: f64) -> Vec4 {
        // quadrature nodes stay in the monotone regime checked in `new`
        let angle = self.angle(tau).unwrap_or(f64::NAN);
        let e = frame(&self.rotor_with_angle(tau, angle));
        e[0] + e[2]
    }

    fn panels(&self, span: f64) -> usize {
        let fastest = self.rate.abs() + self.modulation + self.charge.abs() * self.field.max_abs();
        ((span.abs() * fastest / PANEL_PHASE).ceil() as usize).max(1)
    }

    /// States at the given proper-time offsets, which must be sorted ascending.
    pub fn states(&self, taus: &[f64]) -> Result<Vec<ParticleState>, ZitterError> {
        let mut out = Vec::with_capacity(taus.len());
        let mut z = self.state0.z;
        let mut last = 0.0;
        for &tau in taus {
            let span = tau - last;
            let dz = composite_gauss8(|t| self.velocity(t), last, tau, self.panels(span), Multivector::zero());
            if dz.coeffs().iter().any(|c| !c.is_finite()) {
                return Err(ZitterError::KeplerNoConvergence { residual: f64::NAN });
            }
            z = z + dz;
            last = tau;
            let angle = self.angle(tau)?;
            out.push(ParticleState {
                tau: self.state0.tau + tau,
                phi: self.state0.phi + angle,
                z,
                rotor: self.rotor_with_angle(tau, angle),
                p: self.state0.p + self.field.inner(&(z - self.state0.z)) * self.charge,
            });
        }
        Ok(out)
    }
}

/// State after proper time `tau` in the uniform field `field`.
pub fn constant_field_solution(
    state0: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
    tau: f64,
) -> Result<ParticleState, ZitterError> {
    let solution = ConstantFieldSolution::new(state0, field, charge)?;
    let mut states = solution.states(&[tau])?;
    Ok(states.remove(0))
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    /// Random frame with uniform E and B along its spin axis, started with m1 = m_e.
    fn aligned_setup(seed: u64) -> (UniformField, ParticleState) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let generator = Multivector::blade(5) * rng.gen_range(-0.3..0.3)
            + Multivector::blade(7) * rng.gen_range(-0.3..0.3)
            + Multivector::blade(8) * rng.gen_range(-1.0..1.0)
            + Multivector::blade(10) * rng.gen_range(-1.0..1.0);
        let rotor = exp_bivector(&generator);
        // the electric part boosts steadily, so keep the rapidity gained over fifty periods modest
        let along = rng.gen_range(-0.005..0.005);
        let twist = rng.gen_range(-0.1..0.1);
        let rest_field = Multivector::from_electric_magnetic([0.0, 0.0, along], [0.0, 0.0, twist]);
        let field = UniformField(rotor * rest_field * rotor.reverse());
        (field, ParticleState::centered(rotor, Multivector::vector([0.0, 0.1, -0.2, 0.3]), &field, -1.0))
    }

    fn max_velocity_error(field: &UniformField, state: &ParticleState, periods: usize) -> f64 {
        let q = -1.0;
        let steps_per_period = 1000;
        let traj = integrate(
            state,
            field,
            q,
            zitter_period() / steps_per_period as f64,
            steps_per_period * periods,
            &IntegrateOptions { record_every: steps_per_period, ..Default::default() },
        )
        .unwrap();
        let taus: Vec<f64> = traj.samples.iter().map(|s| s.state.tau).collect();
        let closed = ConstantFieldSolution::new(state, field, q).unwrap().states(&taus).unwrap();
        traj.samples
            .iter()
            .zip(&closed)
            .map(|(num, exact)| {
                let a = observables_unchecked(&num.state, field, q);
                let b = observables_unchecked(exact, field, q);
                (a.u - b.u).max_abs() / b.u.max_abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_field_reduces_to_free_solution() {
        let state = ParticleState::at_rest();
        let spin = (Multivector::gamma(0) + Multivector::gamma(2)) * Multivector::gamma(1) * 0.5;
        for k in 0..20 {
            let tau = 0.41 * k as f64;
            let closed = constant_field_solution(&state, &NoField, -1.0, tau).unwrap();
            let free = free_solution(&state.p, &spin, &state.z, FreeMode::Lightlike, tau).unwrap();
            assert!((closed.z - free.z).max_abs() < 1e-12);
            assert!((closed.rotor - free.rotor).max_abs() < 1e-12);
            assert!((closed.phi - free.phi).abs() < 1e-12);
        }
    }

    #[test]
    fn magnetic_field_shifts_phase_rate() {
        let q = -1.0;
        let field = UniformField::from_electric_magnetic([0.0; 3], [0.0, 0.0, 0.2]);
        let state = ParticleState::consistent(Multivector::scalar(1.0), Multivector::zero(), &field, q, 0.0);
        let solution = ConstantFieldSolution::new(&state, &field, q).unwrap();
        // the frame starts unrotated, so B·e3 is the field's third component
        assert!((solution.rate - (2.0 - q * 0.2)).abs() < 1e-14);
        assert!((solution.rate - 2.2).abs() < 1e-14);
        assert_eq!(solution.modulation, 0.0);
    }

    #[test]
    fn rejects_non_uniform_field() {
        let field = LinearField { constant: Multivector::zero(), slopes: [Multivector::blade(5); 4] };
        assert!(matches!(
            ConstantFieldSolution::new(&ParticleState::at_rest(), &field, -1.0),
            Err(ZitterError::NonUniformField)
        ));
    }

    #[test]
    fn aligned_field_matches_numeric_integration_over_fifty_periods() {
        for seed in 0..3 {
            let (field, state) = aligned_setup(60 + seed);
            let q = -1.0;
            let steps_per_period = 1000;
            let periods = 50;
            let traj = integrate(
                &state,
                &field,
                q,
                zitter_period() / steps_per_period as f64,
                steps_per_period * periods,
                &IntegrateOptions { record_every: steps_per_period, ..Default::default() },
            )
            .unwrap();
            let taus: Vec<f64> = traj.samples.iter().map(|s| s.state.tau).collect();
            let solution = ConstantFieldSolution::new(&state, &field, q).unwrap();
            let closed = solution.states(&taus).unwrap();
            let pi_sq = |s: &ParticleState| {
                let o = observables_unchecked(s, &field, q);
                s.p.dot(&s.p) - 2.0 * o.m
            };
            let pi0 = pi_sq(&state);
            for (num, exact) in traj.samples.iter().zip(&closed) {
                let a = observables_unchecked(&num.state, &field, q);
                let b = observables_unchecked(exact, &field, q);
                let scale = exact.z.max_abs().max(1.0);
                assert!((a.u - b.u).max_abs() < 1e-8 * b.u.max_abs(), "u {:e}", (a.u - b.u).max_abs());
                assert!((a.e[1] - b.e[1]).max_abs() < 1e-8 * b.e[1].max_abs());
                assert!((a.spin - b.spin).max_abs() < 1e-8 * b.spin.max_abs());
                assert!((num.state.z - exact.z).max_abs() < 1e-8 * scale, "z {:e}", (num.state.z - exact.z).max_abs());
                assert!((num.state.p - exact.p).max_abs() < 1e-8 * exact.p.max_abs());
                assert!((num.state.phi - exact.phi).abs() < 1e-8 * exact.phi.abs().max(1.0));
                assert!((a.m - b.m).abs() < 1e-8);
                assert!((pi_sq(exact) - pi0).abs() < 1e-9 * pi0.abs().max(1.0));
                assert!((pi_sq(&num.state) - pi0).abs() < 1e-9 * pi0.abs().max(1.0));
            }
        }
    }

    #[test]
    fn in_plane_field_drifts_at_first_order() {
        let q = -1.0;
        let errors: Vec<f64> = [0.02, 0.01]
            .iter()
            .map(|&strength| {
                let field = UniformField::from_electric_magnetic([strength, 0.0, 0.0], [0.0, strength, 0.0]);
                let state = ParticleState::centered(Multivector::scalar(1.0), Multivector::zero(), &field, q);
                assert!(ConstantFieldSolution::new(&state, &field, q).unwrap().in_plane_field > 0.0);
                max_velocity_error(&field, &state, 2)
            })
            .collect();
        let ratio = errors[0] / errors[1];
        assert!(errors[1] > 1e-4 && (ratio - 2.0).abs() < 0.5, "{errors:?}");
    }

    #[test]
    fn aligned_field_velocity_error_is_at_integrator_level() {
        let (field, state) = aligned_setup(71);
        assert!(max_velocity_error(&field, &state, 5) < 1e-9);
    }

    #[test]
    fn relative_momentum_rotates_with_the_frame() {
        let (field, state) = aligned_setup(70);
        let q = -1.0;
        let solution = ConstantFieldSolution::new(&state, &field, q).unwrap();
        let h = 1e-4;
        let tau = 1.3;
        let s = solution.states(&[tau - h, tau, tau + h]).unwrap();
        let relative = |s: &ParticleState| s.p - observables_unchecked(s, &field, q).u;
        let rate = (relative(&s[2]) - relative(&s[0])) / (2.0 * h);
        let o = observables_unchecked(&s[1], &field, q);
        let omega = rotational_velocity(&s[1], &field, q).unwrap();
        assert!((rate - omega.inner(&relative(&s[1]))).max_abs() < 1e-7);
        assert!((rate + o.e[1] * (2.0 * o.m)).max_abs() < 1e-7);
    }
}
