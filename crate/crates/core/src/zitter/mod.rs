//! Lightlike zitter particle in natural units (`c = ħ = m_e = 1`).
//!
//! The state is a rotor `R`, momentum `p`, event `z` and zitter phase `φ`,
//! all functions of proper time `τ`. The comoving frame is
//! `e_μ = R γ_μ R~`, the particle velocity is the null vector `u = e0 + e2`
//! and the spin bivector is `S = ½ u e1`.

mod constant_field;
pub mod field;
mod free;
mod integrate;
mod kepler;
mod minimal;
mod rest_frame;

pub use constant_field::{constant_field_solution, ConstantFieldSolution};
pub use field::{FieldModel, LinearField, NoField, Potential, StaticPotentialField, UniformField};
pub use free::{free_solution, FreeMode};
pub use integrate::{
    integrate, rhs, DriftBounds, IntegrateOptions, Monitor, Monitors, Trajectory, TrajectorySample,
};
pub use kepler::{kepler_first_order, kepler_phase};
pub use minimal::{minimal_model_integrate, MinimalSample, MinimalState};
pub use rest_frame::{
    deboost_field, rest_frame_drive, rest_frame_rhs, rest_frame_split, static_potential_spin_potential,
    thomas_omega, RestFrameRates, RestFrameState, ThomasRotation,
};

use thiserror::Error;

use crate::sta::{normalize_rotor, sandwich_unchecked, Bivec, Multivector, Rotor, StaError, Vec4};
use crate::units::{NATURAL_ELECTRON_MASS, NATURAL_LAMBDA_E, NATURAL_OMEGA_E};

/// Default bound on the gauge-constraint magnitude |p∧u∧e0|.
pub const GAUGE_BOUND: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ZitterError {
    #[error(transparent)]
    Algebra(#[from] StaError),
    #[error("momentum is not timelike (p.p = {0})")]
    SpacelikeMomentum(f64),
    #[error("mass p.u = {0} is not positive")]
    DegenerateMass(f64),
    #[error("gauge constraint p^u^e0 violated by {0:e}")]
    GaugeViolation(f64),
    #[error("initial data inconsistent with the requested mode: {0}")]
    InconsistentMode(&'static str),
    #[error("field is not uniform")]
    NonUniformField,
    #[error("phase equation has no monotone solution: |modulation| {amplitude} >= |rate| {rate}")]
    KeplerRegime { rate: f64, amplitude: f64 },
    #[error("phase iteration did not converge (residual {residual:e})")]
    KeplerNoConvergence { residual: f64 },
    #[error("step size must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("{monitor:?} drift {value:e} exceeded its bound at step {step}")]
    Drift {
        step: usize,
        monitor: Monitor,
        value: f64,
        prefix: Box<Trajectory>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub tau: f64,
    pub phi: f64,
    pub z: Vec4,
    pub rotor: Rotor,
    pub p: Vec4,
}

impl ParticleState {
    /// Free electron at rest at the origin with an unrotated frame.
    pub fn at_rest() -> Self {
        Self {
            tau: 0.0,
            phi: 0.0,
            z: Multivector::zero(),
            rotor: Multivector::scalar(1.0),
            p: Multivector::gamma(0),
        }
    }

    /// State obeying the gauge constraint and the mass integral `m = 1 + Φ`.
    /// `m2` is the share of the mass carried along `−e2`.
    pub fn consistent(rotor: Rotor, z: Vec4, field: &dyn FieldModel, charge: f64, m2: f64) -> Self {
        let e = frame(&rotor);
        let u = e[0] + e[2];
        let spin = u * e[1] * 0.5;
        let phi_potential = spin_potential(&spin, &field.field(&z), charge);
        let m1 = NATURAL_ELECTRON_MASS + phi_potential - m2;
        Self { tau: 0.0, phi: 0.0, z, rotor, p: e[0] * m1 - e[2] * m2 }
    }

    /// Consistent state with `m1 = m_e`, so the whole mass shift Φ is carried by `m2`.
    pub fn centered(rotor: Rotor, z: Vec4, field: &dyn FieldModel, charge: f64) -> Self {
        let e = frame(&rotor);
        let spin = (e[0] + e[2]) * e[1] * 0.5;
        let phi_potential = spin_potential(&spin, &field.field(&z), charge);
        Self::consistent(rotor, z, field, charge, phi_potential)
    }
}

/// Comoving frame e_μ = R γ_μ R~.
pub fn frame(rotor: &Rotor) -> [Vec4; 4] {
    [0, 1, 2, 3].map(|mu| sandwich_unchecked(rotor, &Multivector::gamma(mu)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub u: Vec4,
    pub e: [Vec4; 4],
    /// Null spin bivector S = ½ u e1.
    pub spin: Bivec,
    /// Spin vector s = ½ e3.
    pub spin_vector: Vec4,
    pub m: f64,
    pub m1: f64,
    pub m2: f64,
    /// Spin potential Φ = q S·F.
    pub phi_potential: f64,
    /// Zitter frequency ω = 2m.
    pub omega: f64,
    /// Zitter radius λ = 1/ω.
    pub lambda: f64,
}

/// Observables without the gauge check, for use inside integrators.
pub fn observables_unchecked(state: &ParticleState, field: &dyn FieldModel, charge: f64) -> Observables {
    let e = frame(&state.rotor);
    let u = e[0] + e[2];
    let spin = u * e[1] * 0.5;
    let m1 = state.p.dot(&e[0]);
    let m2 = state.p.dot(&e[2]);
    let m = state.p.dot(&u);
    let omega = 2.0 * m;
    Observables {
        u,
        e,
        spin,
        spin_vector: e[3] * 0.5,
        m,
        m1,
        m2,
        phi_potential: spin_potential(&spin, &field.field(&state.z), charge),
        omega,
        lambda: 1.0 / omega,
    }
}

/// |p∧u∧e0| relative to the size of p.
pub fn gauge_violation(state: &ParticleState) -> f64 {
    let e = frame(&state.rotor);
    let u = e[0] + e[2];
    state.p.outer(&u).outer(&e[0]).max_abs() / state.p.max_abs().max(1.0)
}

pub fn observables(
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
) -> Result<Observables, ZitterError> {
    let violation = gauge_violation(state);
    if violation > GAUGE_BOUND {
        return Err(ZitterError::GaugeViolation(violation));
    }
    Ok(observables_unchecked(state, field, charge))
}

/// Φ = (q/m_e) S·F.
pub fn spin_potential(spin: &Bivec, f: &Bivec, charge: f64) -> f64 {
    charge / NATURAL_ELECTRON_MASS * spin.dot(f)
}

/// Spin potential in its three equivalent forms: `q S·F`, `q λ_e F·(u e1)`
/// and the rest-frame dipole form `d_v·E_v − μ_v·B_v` with `v = e0`.
pub fn spin_potential_forms(
    obs: &Observables,
    f: &Bivec,
    charge: f64,
) -> Result<[f64; 3], ZitterError> {
    let direct = spin_potential(&obs.spin, f, charge);
    let radius_form = charge * NATURAL_LAMBDA_E * f.dot(&(obs.u * obs.e[1]));
    let moment = crate::sta::split_bivector(&(obs.spin * (charge / NATURAL_ELECTRON_MASS)), &obs.e[0])?;
    let fields = crate::sta::split_bivector(f, &obs.e[0])?;
    let dipole_form =
        moment.electric.dot(&fields.electric) - moment.magnetic.dot(&fields.magnetic);
    Ok([direct, radius_form, dipole_form])
}

/// Ṡ = u∧p + (q/m_e) F×S.
pub fn spin_rate(obs: &Observables, p: &Vec4, f: &Bivec, charge: f64) -> Bivec {
    obs.u.outer(p) + f.commutator(&obs.spin) * (charge / NATURAL_ELECTRON_MASS)
}

/// ṁ = (q/m_e)(Ṡ·F + S·(u·∇)F).
pub fn mass_rate(state: &ParticleState, field: &dyn FieldModel, charge: f64) -> f64 {
    let obs = observables_unchecked(state, field, charge);
    mass_rate_with(&obs, state, field, charge)
}

fn mass_rate_with(obs: &Observables, state: &ParticleState, field: &dyn FieldModel, charge: f64) -> f64 {
    let f = field.field(&state.z);
    let spin_dot = spin_rate(obs, &state.p, &f, charge);
    let along = field.directional(&state.z, &obs.u);
    charge / NATURAL_ELECTRON_MASS * (spin_dot.dot(&f) + obs.spin.dot(&along))
}

/// Ω = 2 p e0e2e1 + (q/m_e)F + (1/m)(∇Φ − (q/m_e)F·π)∧u + (ṁ/m) e2e0, π = p − m_e u.
pub fn rotational_velocity(
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
) -> Result<Bivec, ZitterError> {
    let obs = observables_unchecked(state, field, charge);
    rotational_velocity_with(&obs, state, field, charge)
}

pub(crate) fn rotational_velocity_with(
    obs: &Observables,
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
) -> Result<Bivec, ZitterError> {
    if obs.m <= 0.0 {
        return Err(ZitterError::DegenerateMass(obs.m));
    }
    let e = &obs.e;
    let f = field.field(&state.z);
    let qm = charge / NATURAL_ELECTRON_MASS;
    let kinetic = (state.p * e[0] * e[2] * e[1]).part(2) * 2.0;
    let grad_phi = field.gradient_of_product(&state.z, &obs.spin) * qm;
    let relative_momentum = state.p - obs.u * NATURAL_ELECTRON_MASS;
    let transverse = (grad_phi - f.inner(&relative_momentum) * qm).outer(&obs.u) / obs.m;
    let m_dot = mass_rate_with(obs, state, field, charge);
    Ok(kinetic + f * qm + transverse + e[2] * e[0] * (m_dot / obs.m))
}

/// First curvature κ1 = −u̇·e1 with u̇ = Ω·u; equals ω_e on valid trajectories.
pub fn first_curvature(omega: &Bivec, obs: &Observables) -> f64 {
    -omega.inner(&obs.u).dot(&obs.e[1])
}

/// Total angular momentum J = p∧z + S.
pub fn total_angular_momentum(state: &ParticleState, obs: &Observables) -> Bivec {
    state.p.outer(&state.z) + obs.spin
}

/// Rotor renormalization used after each integrator step.
pub(crate) fn renormalize(rotor: &Rotor) -> Result<(Rotor, f64), ZitterError> {
    let drift = (*rotor * rotor.reverse() - Multivector::scalar(1.0)).max_abs();
    Ok((normalize_rotor(rotor)?, drift))
}

/// Which history stands in for the zitter center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterStrategy {
    /// x = z + λ_e e1, radius of fixed length.
    #[default]
    FixedRadius,
    /// x = z − S·p⁻¹.
    MomentumProjection,
}

pub fn zitter_center(state: &ParticleState, obs: &Observables, strategy: CenterStrategy) -> Vec4 {
    match strategy {
        CenterStrategy::FixedRadius => state.z + obs.e[1] * NATURAL_LAMBDA_E,
        CenterStrategy::MomentumProjection => {
            state.z - obs.spin.inner(&state.p.vector_inverse())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZitterAverage {
    pub v: Vec4,
    pub spin_mean: Bivec,
    pub m_mean: f64,
    pub p_mean: Vec4,
    pub center: Vec4,
}

/// Zitter means: v = e0, S̄ = i s v, m̄ = m_e + q S̄·F, p̄ = m_e v.
pub fn zitter_average(
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
    strategy: CenterStrategy,
) -> ZitterAverage {
    let obs = observables_unchecked(state, field, charge);
    let v = obs.e[0];
    let spin_mean = Multivector::pseudoscalar() * obs.spin_vector * v;
    let center = zitter_center(state, &obs, strategy);
    ZitterAverage {
        v,
        spin_mean,
        m_mean: NATURAL_ELECTRON_MASS + spin_potential(&spin_mean, &field.field(&center), charge),
        p_mean: v * NATURAL_ELECTRON_MASS,
        center,
    }
}

/// Rest-frame zitter period 2π/ω_e.
pub fn zitter_period() -> f64 {
    2.0 * std::f64::consts::PI / NATURAL_OMEGA_E
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use crate::sta::testing::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn free_rest_state_masses() {
        let s = ParticleState::at_rest();
        let o = observables(&s, &NoField, -1.0).unwrap();
        assert_eq!((o.m, o.m1, o.m2), (1.0, 1.0, 0.0));
        assert_eq!(o.phi_potential, 0.0);
        assert_eq!(o.omega * o.lambda, 1.0);
    }

    #[test]
    fn observables_identities_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let field = random_field(&mut rng, 0.3);
            let s = random_state(&mut rng, &field, -1.0);
            let o = observables(&s, &field, -1.0).unwrap();
            let tol = 1e-12 * s.p.max_abs().max(1.0) * o.e[0].max_abs().powi(2) * 10.0;
            assert!((o.u.outer(&s.p) - o.e[2] * o.e[0] * o.m).max_abs() < tol);
            assert!(o.spin.dot(&o.spin).abs() < 1e-12 * o.u.max_abs().powi(4));
            assert!((o.spin * o.spin).max_abs() < 1e-11 * o.u.max_abs().powi(4));
            assert!(o.spin_vector.dot(&o.u).abs() < 1e-12 * o.u.max_abs().powi(2));
            assert!((o.m - o.m1 - o.m2).abs() < 1e-12 * o.m.abs().max(1.0) * 10.0);
            // p·S = (m/2) e1 and m s = p·(iS)
            let ps = s.p.inner(&o.spin);
            assert!((ps - o.e[1] * (o.m / 2.0)).max_abs() < tol);
            let pis = s.p.inner(&(Multivector::pseudoscalar() * o.spin));
            assert!((pis - o.spin_vector * o.m).max_abs() < tol);
        }
    }

    #[test]
    fn gauge_violation_is_reported() {
        let mut s = ParticleState::at_rest();
        s.p = Multivector::vector([1.0, 0.1, 0.0, 0.0]);
        assert!(matches!(observables(&s, &NoField, -1.0), Err(ZitterError::GaugeViolation(_))));
    }

    #[test]
    fn spin_potential_forms_agree() {
        assert_eq!(spin_potential(&Multivector::blade(5), &Multivector::zero(), 1.0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..200 {
            let field = random_field(&mut rng, 1.0);
            let s = random_state(&mut rng, &field, -1.0);
            let o = observables_unchecked(&s, &field, -1.0);
            let f = field.field(&s.z);
            let [a, b, c] = spin_potential_forms(&o, &f, -1.0).unwrap();
            let scale = f.max_abs() * o.e[0].max_abs().powi(4);
            assert!((a - b).abs() < 1e-12 * scale);
            assert!((a - c).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn zeeman_form_for_magnetic_field_along_spin() {
        let s = ParticleState::at_rest();
        let o = observables_unchecked(&s, &NoField, -1.0);
        let f = Multivector::from_electric_magnetic([0.0; 3], [0.0, 0.0, 0.3]);
        let moment = crate::sta::split_bivector(&(o.spin * -1.0), &o.e[0]).unwrap();
        let b = crate::sta::split_bivector(&f, &o.e[0]).unwrap().magnetic;
        let zeeman = -moment.magnetic.dot(&b);
        assert!((spin_potential(&o.spin, &f, -1.0) - zeeman).abs() < 1e-15);
        assert!((zeeman - 0.15).abs() < 1e-15);
    }

    #[test]
    fn kinetic_rotational_velocity() {
        let s = ParticleState::at_rest();
        let o = observables_unchecked(&s, &NoField, -1.0);
        let omega = rotational_velocity(&s, &NoField, -1.0).unwrap();
        let expected = Multivector::gamma(2) * Multivector::gamma(1) * 2.0;
        assert_eq!(omega, expected);
        assert_eq!(omega.inner(&o.u), o.e[1] * o.omega);
        assert_eq!(first_curvature(&omega, &o), 2.0);
    }

    #[test]
    fn rotational_velocity_spin_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let field = random_field(&mut rng, 0.5);
            let q = -1.0;
            let s = random_state(&mut rng, &field, q);
            let o = observables_unchecked(&s, &field, q);
            let omega = rotational_velocity(&s, &field, q).unwrap();
            let scale = omega.max_abs() * o.spin.max_abs();
            assert!((omega.dot(&o.spin) + 1.0).abs() < 1e-12 * scale.max(1.0) * 10.0);
            let f = field.field(&s.z);
            let lhs = omega.outer(&o.spin);
            let rhs = f.outer(&o.spin) * q;
            assert!((lhs - rhs).max_abs() < 1e-12 * scale.max(1.0) * 10.0);
            assert!((first_curvature(&omega, &o) - 2.0).abs() < 1e-11 * scale.max(1.0));
        }
    }

    #[test]
    fn degenerate_mass_rejected() {
        let mut s = ParticleState::at_rest();
        s.p = Multivector::gamma(0) * -1.0;
        assert!(matches!(rotational_velocity(&s, &NoField, -1.0), Err(ZitterError::DegenerateMass(_))));
    }

    #[test]
    fn mass_rate_vanishes_without_field_and_reduces_for_uniform_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let s = random_state(&mut rng, &NoField, -1.0);
        assert_eq!(mass_rate(&s, &NoField, -1.0), 0.0);
        let uniform = UniformField(random_bivector(&mut rng, 0.3));
        let s = random_state(&mut rng, &uniform, -1.0);
        let o = observables_unchecked(&s, &uniform, -1.0);
        let spin_dot = spin_rate(&o, &s.p, &uniform.0, -1.0);
        assert!((mass_rate(&s, &uniform, -1.0) + spin_dot.dot(&uniform.0)).abs() < 1e-14);
    }

    #[test]
    fn zitter_mean_spin_is_spacelike() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..100 {
            let s = random_state(&mut rng, &NoField, -1.0);
            let avg = zitter_average(&s, &NoField, -1.0, CenterStrategy::FixedRadius);
            let sq = avg.spin_mean * avg.spin_mean;
            assert!((sq.scalar_part() + 0.25).abs() < 1e-11 * avg.v.max_abs().powi(4));
            assert!(sq.part(4).max_abs() < 1e-11 * avg.v.max_abs().powi(4));
        }
    }

    #[test]
    fn center_strategies_agree_for_free_rest_state() {
        let s = ParticleState::at_rest();
        let o = observables_unchecked(&s, &NoField, -1.0);
        let a = zitter_center(&s, &o, CenterStrategy::FixedRadius);
        let b = zitter_center(&s, &o, CenterStrategy::MomentumProjection);
        assert!((a - b).max_abs() < 1e-15);
        assert!((a - Multivector::gamma(1) * 0.5).max_abs() < 1e-15);
    }

    #[test]
    fn random_rotor_helper_is_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let r = random_rotor(&mut rng);
        assert!((r * r.reverse() - Multivector::scalar(1.0)).max_abs() < 1e-12);
    }
}
