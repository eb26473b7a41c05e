//! Closed-form free-particle histories.

use super::{ParticleState, ZitterError};
use crate::sta::{exp_bivector, rotor_from_frame, sandwich_unchecked, Bivec, Multivector, Vec4};

/// Tolerance on the consistency conditions of the initial data.
const DATA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeMode {
    /// Null velocity circulating at ω_e around a straight center line.
    Lightlike,
    /// Timelike velocity p/m_p with an internally rotating frame.
    Timelike,
}

/// State at proper time `tau` of the free history fixed by momentum `p`,
/// initial spin bivector `spin0` and initial event `z0`.
///
/// Both modes share `z(τ) = ⟨(S(τ) − S0) p⁻¹⟩_1 + m_e p⁻¹ τ + z0`,
/// `S(τ) = e^{Ωτ/2} S0 e^{−Ωτ/2}`.
pub fn free_solution(
    p: &Vec4,
    spin0: &Bivec,
    z0: &Vec4,
    mode: FreeMode,
    tau: f64,
) -> Result<ParticleState, ZitterError> {
    let pp = p.dot(p);
    if pp <= 0.0 {
        return Err(ZitterError::SpacelikeMomentum(pp));
    }
    let mass = pp.sqrt();
    let e0 = *p / mass;
    let i = Multivector::pseudoscalar();
    let (rotor0, omega) = match mode {
        FreeMode::Lightlike => {
            if (mass - 1.0).abs() > DATA_TOLERANCE {
                return Err(ZitterError::InconsistentMode("lightlike history needs p.p = m_e^2"));
            }
            let e1 = p.inner(spin0) * (2.0 / mass);
            let e3 = p.inner(&(i * *spin0)) * (2.0 / mass);
            let e2 = (e1 * e0 * i * e3).part(1);
            let rebuilt = (e0 + e2) * e1 * 0.5;
            if (rebuilt - *spin0).max_abs() > DATA_TOLERANCE {
                return Err(ZitterError::InconsistentMode("spin bivector is not ½(e0+e2)e1"));
            }
            let rotor0 = rotor_from_frame(&[e0, e1, e2, e3])?;
            (rotor0, (*p * e0 * e2 * e1).part(2) * 2.0)
        }
        FreeMode::Timelike => {
            if p.inner(spin0).max_abs() > DATA_TOLERANCE * spin0.max_abs().max(1.0) {
                return Err(ZitterError::InconsistentMode("timelike history needs S0.p = 0"));
            }
            let magnitude = (-spin0.dot(spin0)).sqrt();
            if !(magnitude > 0.0) {
                return Err(ZitterError::InconsistentMode("timelike history needs a spacelike S0"));
            }
            let plane = *spin0 / magnitude;
            // plane = e2 e1, so e3 = −i·plane·e0 completes the frame
            let e3 = (i * plane * e0).part(1) * -1.0;
            let e1 = orthogonal_unit(&[e0, e3]);
            let e2 = (e1 * e0 * i * e3).part(1);
            let rotor0 = rotor_from_frame(&[e0, e1, e2, e3])?;
            (rotor0, plane * (2.0 * mass))
        }
    };
    let spin_rotor = exp_bivector(&(omega * (0.5 * tau)));
    let rotor = spin_rotor * rotor0;
    let spin = sandwich_unchecked(&spin_rotor, spin0);
    let p_inv = p.vector_inverse();
    let z = ((spin - *spin0) * p_inv).part(1) + p_inv * tau + *z0;
    let phase = match mode {
        FreeMode::Lightlike => 2.0 * tau,
        FreeMode::Timelike => 2.0 * mass * tau,
    };
    Ok(ParticleState { tau, phi: phase, z, rotor, p: *p })
}

/// Unit spacelike vector orthogonal to the given vectors, built from the γ_k.
fn orthogonal_unit(against: &[Vec4]) -> Vec4 {
    let mut best = Multivector::zero();
    let mut best_norm = 0.0;
    for k in 1..4 {
        let mut w = Multivector::gamma(k);
        for a in against {
            w = w - *a * (w.dot(a) / a.dot(a));
        }
        let n = -w.dot(&w);
        if n > best_norm {
            best_norm = n;
            best = w;
        }
    }
    best / best_norm.sqrt()
}

#[cfg(test)]
mod tests {
    use super::super::{frame, observables_unchecked, NoField};
    use super::*;
    use crate::sta::testing::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rest_spin() -> Bivec {
        (Multivector::gamma(0) + Multivector::gamma(2)) * Multivector::gamma(1) * 0.5
    }

    #[test]
    fn starts_at_initial_event() {
        let z0 = Multivector::vector([0.0, 1.0, 2.0, 3.0]);
        let s = free_solution(&Multivector::gamma(0), &rest_spin(), &z0, FreeMode::Lightlike, 0.0).unwrap();
        assert!((s.z - z0).max_abs() < 1e-15);
        assert!((s.rotor - Multivector::scalar(1.0)).max_abs() < 1e-15);
    }

    #[test]
    fn rest_frame_helix_radius_and_rate() {
        let p = Multivector::gamma(0);
        let z0 = Multivector::zero();
        for k in 0..50 {
            let tau = 0.37 * k as f64;
            let s = free_solution(&p, &rest_spin(), &z0, FreeMode::Lightlike, tau).unwrap();
            let o = observables_unchecked(&s, &NoField, -1.0);
            let radius = o.spin.inner(&p.vector_inverse());
            assert!(((-radius.dot(&radius)).sqrt() - 0.5).abs() < 1e-12, "{tau} {radius:?}");
            // e1 turns at rate ω_e = 2 in the rest frame
            let e1 = frame(&s.rotor)[1].vector_components();
            assert!((e1[1] - (2.0 * tau).cos()).abs() < 1e-12);
            assert!((e1[2] + (2.0 * tau).sin()).abs() < 1e-12);
            // the center line z + λ_e e1 moves uniformly along γ0
            let center = s.z + o.e[1] * 0.5 - Multivector::gamma(1) * 0.5;
            assert!((center - p * tau).max_abs() < 1e-12);
        }
    }

    #[test]
    fn boosted_lightlike_history_has_null_velocity() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let r = random_rotor(&mut rng);
            let e = frame(&r);
            let spin = (e[0] + e[2]) * e[1] * 0.5;
            let p = e[0];
            let s = free_solution(&p, &spin, &Multivector::zero(), FreeMode::Lightlike, 1.3).unwrap();
            let o = observables_unchecked(&s, &NoField, -1.0);
            assert!(o.u.dot(&o.u).abs() < 1e-10 * o.u.max_abs().powi(2));
            assert!((o.m - 1.0).abs() < 1e-10 * p.max_abs().powi(2));
            let h = 1e-5;
            let ahead = free_solution(&p, &spin, &Multivector::zero(), FreeMode::Lightlike, 1.3 + h).unwrap();
            let behind = free_solution(&p, &spin, &Multivector::zero(), FreeMode::Lightlike, 1.3 - h).unwrap();
            let velocity = (ahead.z - behind.z) / (2.0 * h);
            assert!((velocity - o.u).max_abs() < 1e-7 * o.u.max_abs());
        }
    }

    #[test]
    fn timelike_history_moves_along_momentum() {
        let p = Multivector::vector([2.0, 0.0, 0.0, 3.0_f64.sqrt()]);
        let spin = Multivector::blade(8) * 0.5;
        let s = free_solution(&p, &spin, &Multivector::zero(), FreeMode::Timelike, 2.0).unwrap();
        assert!((s.z - p * 2.0).max_abs() < 1e-12);
        let e = frame(&s.rotor);
        assert!((e[0] - p).max_abs() < 1e-12);
    }

    #[test]
    fn invalid_data_rejected() {
        let space = Multivector::gamma(1);
        assert!(matches!(
            free_solution(&space, &rest_spin(), &Multivector::zero(), FreeMode::Lightlike, 0.0),
            Err(ZitterError::SpacelikeMomentum(_))
        ));
        let heavy = Multivector::gamma(0) * 2.0;
        assert!(free_solution(&heavy, &rest_spin(), &Multivector::zero(), FreeMode::Lightlike, 0.0).is_err());
        let boost_spin = Multivector::blade(5);
        assert!(free_solution(&Multivector::gamma(0), &boost_spin, &Multivector::zero(), FreeMode::Timelike, 0.0).is_err());
    }
}
