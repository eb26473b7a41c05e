//! Minimal model: the zitter center `x` with unit velocity `v` and a comoving
//! frame driven by the mean rotational velocity.

use super::{frame, spin_potential, FieldModel, ZitterError};
use crate::sta::{normalize_rotor, Bivec, Multivector, Rotor, Vec4};
use crate::units::{NATURAL_ELECTRON_MASS, NATURAL_OMEGA_E};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalState {
    pub tau: f64,
    pub x: Vec4,
    pub v: Vec4,
    pub rotor: Rotor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalSample {
    pub state: MinimalState,
    /// Mean spin bivector S̄ = i s v.
    pub spin_mean: Bivec,
    /// Mean mass shift Φ̄.
    pub phi_mean: f64,
    /// |v·v − 1| after the step, before renormalization.
    pub velocity_drift: f64,
}

struct Rates {
    x: Vec4,
    v: Vec4,
    rotor: Rotor,
}

fn mean_spin(rotor: &Rotor, v: &Vec4) -> Bivec {
    let s = frame(rotor)[3] * 0.5;
    Multivector::pseudoscalar() * s * *v
}

fn rates(state: &MinimalState, field: &dyn FieldModel, charge: f64) -> Rates {
    let qm = charge / NATURAL_ELECTRON_MASS;
    let e = frame(&state.rotor);
    let v = state.v;
    let f = field.field(&state.x);
    let spin_mean = mean_spin(&state.rotor, &v);
    let phi_mean = spin_potential(&spin_mean, &f, charge);
    let grad = field.gradient_of_product(&state.x, &spin_mean) * qm;
    let v_dot = (f.inner(&v) * charge + grad - v * grad.dot(&v)) / NATURAL_ELECTRON_MASS;
    // every term but the last leaves e3 in place or turns it; the last lies in e0∧e2 and does not touch e3
    let without_mass_rate = e[2] * e[1] * NATURAL_OMEGA_E - e[0] * e[1] * (2.0 * phi_mean)
        - v.outer(&grad) / NATURAL_ELECTRON_MASS
        + f * qm;
    let s_dot = without_mass_rate.inner(&e[3]) * 0.5;
    let i = Multivector::pseudoscalar();
    let spin_mean_dot = i * s_dot * v + i * e[3] * 0.5 * v_dot;
    let phi_dot = qm * (spin_mean_dot.dot(&f) + spin_mean.dot(&field.directional(&state.x, &v)));
    let mass_mean = NATURAL_ELECTRON_MASS + phi_mean;
    let omega = without_mass_rate - e[0] * e[2] * (phi_dot / mass_mean);
    Rates { x: v, v: v_dot, rotor: omega * state.rotor * 0.5 }
}

fn shifted(state: &MinimalState, r: &Rates, h: f64) -> MinimalState {
    MinimalState {
        tau: state.tau + h,
        x: state.x + r.x * h,
        v: state.v + r.v * h,
        rotor: state.rotor + r.rotor * h,
    }
}

/// RK4 for the minimal model; `v` and the rotor are renormalized after each step.
pub fn minimal_model_integrate(
    state0: &MinimalState,
    field: &dyn FieldModel,
    charge: f64,
    dtau: f64,
    n_steps: usize,
    record_every: usize,
) -> Result<Vec<MinimalSample>, ZitterError> {
    if !(dtau > 0.0) {
        return Err(ZitterError::NonPositiveStep(dtau));
    }
    let v2 = state0.v.dot(&state0.v);
    if (v2 - 1.0).abs() > crate::sta::UNIT_TOLERANCE {
        return Err(crate::sta::StaError::NotUnitTimelike(v2).into());
    }
    let sample = |s: MinimalState, drift: f64| {
        let spin_mean = mean_spin(&s.rotor, &s.v);
        MinimalSample {
            state: s,
            spin_mean,
            phi_mean: spin_potential(&spin_mean, &field.field(&s.x), charge),
            velocity_drift: drift,
        }
    };
    let stride = record_every.max(1);
    let mut state = *state0;
    let mut out = vec![sample(state, 0.0)];
    for step in 1..=n_steps {
        let h = dtau;
        let k1 = rates(&state, field, charge);
        let k2 = rates(&shifted(&state, &k1, 0.5 * h), field, charge);
        let k3 = rates(&shifted(&state, &k2, 0.5 * h), field, charge);
        let k4 = rates(&shifted(&state, &k3, h), field, charge);
        let w = h / 6.0;
        let v = state.v + (k1.v + (k2.v + k3.v) * 2.0 + k4.v) * w;
        let v2 = v.dot(&v);
        let rotor = state.rotor + (k1.rotor + (k2.rotor + k3.rotor) * 2.0 + k4.rotor) * w;
        state = MinimalState {
            tau: state.tau + h,
            x: state.x + (k1.x + (k2.x + k3.x) * 2.0 + k4.x) * w,
            v: v / v2.sqrt(),
            rotor: normalize_rotor(&rotor)?,
        };
        if step % stride == 0 || step == n_steps {
            out.push(sample(state, (v2 - 1.0).abs()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    fn rest() -> MinimalState {
        MinimalState { tau: 0.0, x: Multivector::zero(), v: Multivector::gamma(0), rotor: Multivector::scalar(1.0) }
    }

    #[test]
    fn free_center_moves_straight_and_frame_turns_at_zitter_rate() {
        let samples = minimal_model_integrate(&rest(), &NoField, -1.0, zitter_period() / 400.0, 4000, 100).unwrap();
        for s in &samples {
            let tau = s.state.tau;
            assert!((s.state.x - Multivector::gamma(0) * tau).max_abs() < 1e-12);
            assert_eq!(s.state.v, Multivector::gamma(0));
            let e = frame(&s.state.rotor);
            let e1 = e[1].vector_components();
            // RK4 phase error accumulates as (ω dτ)^4 per unit time
            assert!((e1[1] - (2.0 * tau).cos()).abs() < 1e-7);
            assert!((e1[2] + (2.0 * tau).sin()).abs() < 1e-7);
            assert!((e[3] - Multivector::gamma(3)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_magnetic_field_gives_larmor_precession() {
        let q = -1.0;
        let b = 0.05;
        let field = UniformField::from_electric_magnetic([0.0; 3], [b, 0.0, 0.0]);
        let samples = minimal_model_integrate(&rest(), &field, q, 0.01, 2000, 100).unwrap();
        for s in &samples {
            let tau = s.state.tau;
            // ė3 = qF·e3 turns the spin axis about B at rate |qB|
            let e3 = frame(&s.state.rotor)[3];
            let expected = sandwich_free_rotation(q * b, tau);
            assert!((e3 - expected).max_abs() < 1e-9, "{tau}: {:?}", e3);
            assert!(s.velocity_drift < 1e-10);
        }
    }

    fn sandwich_free_rotation(rate: f64, tau: f64) -> Vec4 {
        let rotor = crate::sta::exp_bivector(&(Multivector::pseudoscalar() * Multivector::sigma(1) * (rate * tau * 0.5)));
        crate::sta::sandwich_unchecked(&rotor, &Multivector::gamma(3))
    }

    #[test]
    fn cyclotron_motion_keeps_unit_velocity() {
        let q = -1.0;
        let field = UniformField::from_electric_magnetic([0.01, 0.0, 0.0], [0.0, 0.0, 0.1]);
        let mut start = rest();
        start.v = Multivector::vector([1.25, 0.75, 0.0, 0.0]);
        let samples = minimal_model_integrate(&start, &field, q, 0.02, 5000, 50).unwrap();
        for s in &samples {
            assert!((s.state.v.dot(&s.state.v) - 1.0).abs() < 1e-10);
            assert!(s.velocity_drift < 1e-10);
        }
    }

    #[test]
    fn rejects_non_unit_velocity() {
        let mut start = rest();
        start.v = Multivector::gamma(0) * 2.0;
        assert!(minimal_model_integrate(&start, &NoField, -1.0, 0.1, 1, 1).is_err());
    }
}
