//! Fourth-order Runge–Kutta for `(R, p, z, φ)` with per-step rotor renormalization.

use super::{
    first_curvature, observables_unchecked, renormalize, rotational_velocity_with, FieldModel,
    ParticleState, ZitterError,
};
use crate::sta::{Multivector, Rotor, Vec4};
use crate::units::NATURAL_ELECTRON_MASS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monitor {
    FirstCurvature,
    MassIntegral,
    RotorNorm,
    NullVelocity,
    SpinSquare,
    Gauge,
}

/// Invariant drifts at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Monitors {
    /// |κ1/ω_e − 1|.
    pub kappa1_drift: f64,
    /// |m − Φ − m_e| / m_e.
    pub mass_integral_drift: f64,
    /// |R R~ − 1| before renormalization.
    pub rotor_norm_drift: f64,
    /// |u·u| / |u|², with |u| the largest component.
    pub null_drift: f64,
    /// Largest coefficient of S² over |S|², covering S·S and S∧S.
    pub spin_square: f64,
    /// |p∧u∧e0|.
    pub gauge_drift: f64,
    /// p0 + V when the field derives from a static potential.
    pub energy: Option<f64>,
}

impl Monitors {
    fn get(&self, which: Monitor) -> f64 {
        match which {
            Monitor::FirstCurvature => self.kappa1_drift,
            Monitor::MassIntegral => self.mass_integral_drift,
            Monitor::RotorNorm => self.rotor_norm_drift,
            Monitor::NullVelocity => self.null_drift,
            Monitor::SpinSquare => self.spin_square,
            Monitor::Gauge => self.gauge_drift,
        }
    }
}

/// Abort thresholds for the monitored drifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftBounds {
    pub invariant: f64,
    pub gauge: f64,
}

impl Default for DriftBounds {
    fn default() -> Self {
        Self { invariant: 1e-6, gauge: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    /// Keep every n-th step (the first and last steps are always kept).
    pub record_every: usize,
    pub bounds: DriftBounds,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { record_every: 1, bounds: DriftBounds::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub state: ParticleState,
    pub monitors: Monitors,
}

#[derive(Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl std::fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Trajectory")
            .field("len", &self.samples.len())
            .field("last", &self.samples.last())
            .finish()
    }
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    pub fn max_monitor(&self, which: Monitor) -> f64 {
        self.samples.iter().map(|s| s.monitors.get(which)).fold(0.0, f64::max)
    }

    /// Largest |E − E(0)| / |E(0)| of the static-potential energy.
    pub fn max_energy_drift(&self) -> Option<f64> {
        let first = self.samples.first()?.monitors.energy?;
        let mut worst = 0.0f64;
        for s in &self.samples {
            let e = s.monitors.energy?;
            worst = worst.max((e - first).abs() / first.abs().max(f64::MIN_POSITIVE));
        }
        Some(worst)
    }
}

#[derive(Debug, Clone, Copy)]
struct Derivative {
    rotor: Rotor,
    p: Vec4,
    z: Vec4,
    phi: f64,
}

/// Right-hand side `(Ṙ, ṗ, ż, φ̇) = (½ΩR, qF·u + ∇Φ, u, 2m)`.
pub fn rhs(
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
) -> Result<(Rotor, Vec4, Vec4, f64), ZitterError> {
    let d = derivative(state, field, charge)?;
    Ok((d.rotor, d.p, d.z, d.phi))
}

fn derivative(state: &ParticleState, field: &dyn FieldModel, charge: f64) -> Result<Derivative, ZitterError> {
    let obs = observables_unchecked(state, field, charge);
    let omega = rotational_velocity_with(&obs, state, field, charge)?;
    let f = field.field(&state.z);
    let qm = charge / NATURAL_ELECTRON_MASS;
    let grad_phi = field.gradient_of_product(&state.z, &obs.spin) * qm;
    Ok(Derivative {
        rotor: omega * state.rotor * 0.5,
        p: f.inner(&obs.u) * charge + grad_phi,
        z: obs.u,
        phi: 2.0 * obs.m,
    })
}

fn advance(state: &ParticleState, d: &Derivative, h: f64) -> ParticleState {
    let rotor = state.rotor + d.rotor * h;
    // intermediate stages use a unit rotor so the frame stays orthonormal
    let norm = (rotor * rotor.reverse()).scalar_part().sqrt();
    ParticleState {
        tau: state.tau + h,
        phi: state.phi + d.phi * h,
        z: state.z + d.z * h,
        rotor: rotor / norm,
        p: state.p + d.p * h,
    }
}

pub(crate) fn monitors(
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
    rotor_norm_drift: f64,
) -> Result<Monitors, ZitterError> {
    let obs = observables_unchecked(state, field, charge);
    let omega = rotational_velocity_with(&obs, state, field, charge)?;
    let kappa1 = first_curvature(&omega, &obs);
    let scale = state.p.max_abs().max(1.0);
    Ok(Monitors {
        kappa1_drift: (kappa1 / 2.0 - 1.0).abs(),
        mass_integral_drift: (obs.m - obs.phi_potential - NATURAL_ELECTRON_MASS).abs(),
        rotor_norm_drift,
        // Boosts scale u and S by γ, so both nullity checks are relative.
        null_drift: obs.u.dot(&obs.u).abs() / obs.u.max_abs().powi(2),
        spin_square: (obs.spin * obs.spin).max_abs() / obs.spin.max_abs().powi(2),
        gauge_drift: state.p.outer(&obs.u).outer(&obs.e[0]).max_abs() / scale,
        energy: field
            .potential_energy(&state.z)
            .map(|v| state.p.vector_components()[0] + v),
    })
}

fn rk4_step(
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
    h: f64,
) -> Result<(ParticleState, f64), ZitterError> {
    let k1 = derivative(state, field, charge)?;
    let k2 = derivative(&advance(state, &k1, 0.5 * h), field, charge)?;
    let k3 = derivative(&advance(state, &k2, 0.5 * h), field, charge)?;
    let k4 = derivative(&advance(state, &k3, h), field, charge)?;
    let combine = |a: Multivector, b: Multivector, c: Multivector, d: Multivector| {
        (a + (b + c) * 2.0 + d) * (h / 6.0)
    };
    let raw_rotor = state.rotor + combine(k1.rotor, k2.rotor, k3.rotor, k4.rotor);
    let (rotor, drift) = renormalize(&raw_rotor)?;
    let next = ParticleState {
        tau: state.tau + h,
        phi: state.phi + h / 6.0 * (k1.phi + 2.0 * (k2.phi + k3.phi) + k4.phi),
        z: state.z + combine(k1.z, k2.z, k3.z, k4.z),
        rotor,
        p: state.p + combine(k1.p, k2.p, k3.p, k4.p),
    };
    Ok((next, drift))
}

/// Advances `state0` by `n_steps` of size `dtau`, recording invariant monitors.
///
/// A drift beyond `options.bounds` aborts with the trajectory recorded so far.
pub fn integrate(
    state0: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
    dtau: f64,
    n_steps: usize,
    options: &IntegrateOptions,
) -> Result<Trajectory, ZitterError> {
    if !(dtau > 0.0) {
        return Err(ZitterError::NonPositiveStep(dtau));
    }
    let stride = options.record_every.max(1);
    let mut trajectory = Trajectory::default();
    let mut state = *state0;
    trajectory.samples.push(TrajectorySample {
        state,
        monitors: monitors(&state, field, charge, 0.0)?,
    });
    let invariants = [
        Monitor::FirstCurvature,
        Monitor::MassIntegral,
        Monitor::RotorNorm,
        Monitor::NullVelocity,
        Monitor::SpinSquare,
    ];
    for step in 1..=n_steps {
        let (next, drift) = match rk4_step(&state, field, charge, dtau) {
            Ok(v) => v,
            Err(ZitterError::Algebra(crate::sta::StaError::RotorDrift(value))) => {
                return Err(ZitterError::Drift {
                    step,
                    monitor: Monitor::RotorNorm,
                    value,
                    prefix: Box::new(trajectory),
                })
            }
            Err(e) => return Err(e),
        };
        state = next;
        let m = monitors(&state, field, charge, drift)?;
        let exceeded = invariants
            .iter()
            .map(|&w| (w, m.get(w), options.bounds.invariant))
            .chain(std::iter::once((Monitor::Gauge, m.gauge_drift, options.bounds.gauge)))
            .find(|(_, value, bound)| !(value <= bound));
        if step % stride == 0 || step == n_steps || exceeded.is_some() {
            trajectory.samples.push(TrajectorySample { state, monitors: m });
        }
        if let Some((monitor, value, _)) = exceeded {
            return Err(ZitterError::Drift { step, monitor, value, prefix: Box::new(trajectory) });
        }
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::super::*;
    use super::*;
    use crate::sta::Multivector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rest_spin() -> Multivector {
        (Multivector::gamma(0) + Multivector::gamma(2)) * Multivector::gamma(1) * 0.5
    }

    #[test]
    fn free_particle_conserves_momentum_and_angular_momentum() {
        let state = ParticleState::at_rest();
        let period = zitter_period();
        let traj = integrate(&state, &NoField, -1.0, period / 400.0, 400 * 100, &IntegrateOptions::default()).unwrap();
        let o0 = observables_unchecked(&state, &NoField, -1.0);
        let j0 = total_angular_momentum(&state, &o0);
        for s in &traj.samples {
            assert_eq!(s.state.p, state.p);
            let o = observables_unchecked(&s.state, &NoField, -1.0);
            let j = total_angular_momentum(&s.state, &o);
            assert!((j - j0).max_abs() < 1e-10, "{:e}", (j - j0).max_abs());
        }
        assert!(traj.max_monitor(Monitor::FirstCurvature) < 1e-8);
    }

    #[test]
    fn matches_free_closed_form_at_fine_step() {
        let state = ParticleState::at_rest();
        let period = zitter_period();
        let steps_per_period = 1000;
        let traj = integrate(
            &state,
            &NoField,
            -1.0,
            period / steps_per_period as f64,
            steps_per_period * 100,
            &IntegrateOptions { record_every: steps_per_period, ..Default::default() },
        )
        .unwrap();
        for s in &traj.samples {
            let exact = free_solution(&state.p, &rest_spin(), &state.z, FreeMode::Lightlike, s.state.tau).unwrap();
            let scale = exact.z.max_abs().max(1.0);
            assert!((s.state.z - exact.z).max_abs() / scale < 1e-9);
        }
    }

    #[test]
    fn spin_rate_and_mass_rate_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let field = random_field(&mut rng, 0.2);
        let q = -1.0;
        let state = random_state(&mut rng, &field, q);
        let errors: Vec<(f64, f64)> = [2e-3, 1e-3]
            .iter()
            .map(|&h| {
                let fwd = integrate(&state, &field, q, h, 1, &IntegrateOptions::default()).unwrap();
                let back = integrate(&state, &field, q, -h, 1, &IntegrateOptions::default());
                assert!(back.is_err());
                let plus = fwd.last().unwrap().state;
                // second point for a central difference: integrate two steps and difference around the middle
                let two = integrate(&state, &field, q, h, 2, &IntegrateOptions::default()).unwrap();
                let end = two.last().unwrap().state;
                let mid = plus;
                let o_mid = observables_unchecked(&mid, &field, q);
                let o_a = observables_unchecked(&state, &field, q);
                let o_b = observables_unchecked(&end, &field, q);
                let spin_fd = (o_b.spin - o_a.spin) / (2.0 * h);
                let spin_dot = spin_rate(&o_mid, &mid.p, &field.field(&mid.z), q);
                let m_fd = (o_b.m - o_a.m) / (2.0 * h);
                let m_dot = mass_rate(&mid, &field, q);
                ((spin_fd - spin_dot).max_abs(), (m_fd - m_dot).abs())
            })
            .collect();
        for k in 0..2 {
            let (coarse, fine) = if k == 0 { (errors[0].0, errors[1].0) } else { (errors[0].1, errors[1].1) };
            assert!(fine < 1e-4);
            assert!(coarse / fine > 3.0, "order check {coarse:e} {fine:e}");
        }
    }

    #[test]
    fn driven_invariants_in_uniform_field() {
        let field = UniformField::from_electric_magnetic([0.02, 0.0, 0.01], [0.0, 0.03, 0.05]);
        let q = -1.0;
        let rotor = crate::sta::exp_bivector(&(Multivector::blade(6) * 0.2 + Multivector::blade(9) * 0.4));
        let state = ParticleState::consistent(rotor, Multivector::zero(), &field, q, 0.0);
        let traj = integrate(&state, &field, q, zitter_period() / 200.0, 200 * 50, &IntegrateOptions::default()).unwrap();
        for w in [Monitor::FirstCurvature, Monitor::MassIntegral, Monitor::RotorNorm, Monitor::NullVelocity, Monitor::SpinSquare] {
            assert!(traj.max_monitor(w) < 1e-8, "{w:?} {:e}", traj.max_monitor(w));
        }
        assert!(traj.max_monitor(Monitor::Gauge) < 1e-6);
    }

    #[test]
    fn drift_bound_aborts_with_prefix() {
        let field = UniformField::from_electric_magnetic([0.5, 0.0, 0.0], [0.0, 0.0, 0.5]);
        let state = ParticleState::consistent(Multivector::scalar(1.0), Multivector::zero(), &field, -1.0, 0.0);
        let options = IntegrateOptions { record_every: 1, bounds: DriftBounds { invariant: 1e-16, gauge: 1.0 } };
        match integrate(&state, &field, -1.0, 0.05, 100, &options) {
            Err(ZitterError::Drift { prefix, step, .. }) => assert_eq!(prefix.samples.len(), step + 1),
            other => panic!("expected drift abort, got {other:?}"),
        }
    }
}
