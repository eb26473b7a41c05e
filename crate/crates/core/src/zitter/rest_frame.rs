//! Rest-frame split of zitter and spin: the boost `L` with `L γ0 L~ = e0`
//! carries the null spin to `S0 = −m_e r + i s`.

use super::{frame, observables_unchecked, rotational_velocity_with, FieldModel, ParticleState, ZitterError};
use crate::sta::{boost_from_velocity, Bivec, Multivector, Rotor, Vec4, UNIT_TOLERANCE};
use crate::units::{NATURAL_ELECTRON_MASS, NATURAL_LAMBDA_E};

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: Vec3, k: f64) -> Vec3 {
    a.map(|x| x * k)
}

fn spatial(v: &Vec4) -> Vec3 {
    let c = v.vector_components();
    [c[1], c[2], c[3]]
}

/// Quantities in the instantaneous rest frame of the zitter center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestFrameState {
    /// Zitter radius vector, λ_e times the unit zitter direction.
    pub r: Vec3,
    pub s: Vec3,
    /// Electric dipole −q r.
    pub d: Vec3,
    /// Magnetic moment (q/m_e) s.
    pub mu: Vec3,
    /// Rest-frame zitter velocity, a unit vector.
    pub u: Vec3,
    /// Rest-frame triad 𝐞_k = L~ e_k L γ0.
    pub triad: [Vec3; 3],
    pub e0_field: Vec3,
    pub b0_field: Vec3,
    pub boost: Rotor,
}

pub fn rest_frame_split(
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
) -> Result<RestFrameState, ZitterError> {
    let e = frame(&state.rotor);
    let boost = boost_from_velocity(&e[0])?;
    let deboost = |x: &Multivector| boost.reverse() * *x * boost;
    let triad = [1, 2, 3].map(|k| (deboost(&e[k]) * Multivector::gamma(0)).relative());
    let spin = (e[0] + e[2]) * e[1] * 0.5;
    let (electric, magnetic) = deboost(&spin).electric_magnetic();
    let r = scale(electric, -1.0 / NATURAL_ELECTRON_MASS);
    let s = magnetic;
    let (e0_field, b0_field) = deboost(&field.field(&state.z)).electric_magnetic();
    Ok(RestFrameState {
        r,
        s,
        d: scale(r, -charge),
        mu: scale(s, charge / NATURAL_ELECTRON_MASS),
        u: triad[1],
        triad,
        e0_field,
        b0_field,
        boost,
    })
}

/// Lab fields (E, B) seen by an observer of velocity `v`:
/// `E0 = E∥ + v0 E⊥ + v0 𝐯×B`, `B0 = B∥ + v0 B⊥ − v0 𝐯×E`, with 𝐯 = dx/dt.
pub fn deboost_field(f: &Bivec, v: &Vec4) -> Result<(Vec3, Vec3), ZitterError> {
    boost_from_velocity(v)?;
    let v0 = v.vector_components()[0];
    let velocity = scale(spatial(v), 1.0 / v0);
    let (e, b) = f.electric_magnetic();
    let speed2 = dot(velocity, velocity);
    let transform = |x: Vec3, twist: Vec3| {
        let parallel = if speed2 > 0.0 { scale(velocity, dot(x, velocity) / speed2) } else { [0.0; 3] };
        let perpendicular = add(x, scale(parallel, -1.0));
        add(add(parallel, scale(perpendicular, v0)), scale(twist, v0))
    };
    let e0 = transform(e, cross(velocity, b));
    let b0 = transform(b, scale(cross(velocity, e), -1.0));
    Ok((e0, b0))
}

/// Rotational velocity of the boost, `Ω_v = 2 L̇ L~ = v̇∧(v + γ0)/(1 + v0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThomasRotation {
    pub generator: Bivec,
    /// Electric-like part relative to γ0.
    pub boost_rate: Vec3,
    /// Angular velocity of the frame rotation; the generator's i-dual part is `−i` times it.
    pub rotation_rate: Vec3,
}

pub fn thomas_omega(v: &Vec4, v_dot: &Vec4) -> Result<ThomasRotation, ZitterError> {
    boost_from_velocity(v)?;
    let overlap = v.dot(v_dot);
    if overlap.abs() > UNIT_TOLERANCE * v_dot.max_abs().max(1.0) {
        return Err(ZitterError::InconsistentMode("acceleration must be orthogonal to the velocity"));
    }
    let v0 = v.vector_components()[0];
    let generator = v_dot.outer(&(*v + Multivector::gamma(0))) / (1.0 + v0);
    let (boost_rate, magnetic) = generator.electric_magnetic();
    Ok(ThomasRotation { generator, boost_rate, rotation_rate: scale(magnetic, -1.0) })
}

/// Rest-frame drive `a + i b = L~(F − (m_e/q) Ω_v) L` for the zitter center velocity `v = e0`.
pub fn rest_frame_drive(
    state: &ParticleState,
    field: &dyn FieldModel,
    charge: f64,
) -> Result<(Vec3, Vec3), ZitterError> {
    let obs = observables_unchecked(state, field, charge);
    let omega = rotational_velocity_with(&obs, state, field, charge)?;
    let v = obs.e[0];
    let thomas = thomas_omega(&v, &omega.inner(&v))?;
    let boost = boost_from_velocity(&v)?;
    let effective = field.field(&state.z) - thomas.generator * (NATURAL_ELECTRON_MASS / charge);
    Ok((boost.reverse() * effective * boost).electric_magnetic())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestFrameRates {
    pub r_dot: Vec3,
    pub s_dot: Vec3,
    /// 𝐞2·a, zero on physical trajectories.
    pub drive_along_velocity: f64,
}

/// Coupled zitter and spin rates in the rest frame:
/// `−m_e ṙ = m 𝐞2 + μ×a + d×b` and `ṡ = a×d + μ×b`.
pub fn rest_frame_rhs(rest: &RestFrameState, m: f64, a: Vec3, b: Vec3) -> RestFrameRates {
    let zitter = add(add(scale(rest.u, m), cross(rest.mu, a)), cross(rest.d, b));
    RestFrameRates {
        r_dot: scale(zitter, -1.0 / NATURAL_ELECTRON_MASS),
        s_dot: add(cross(a, rest.d), cross(rest.mu, b)),
        drive_along_velocity: dot(rest.u, a),
    }
}

/// Spin potential for a static potential with lab field `q E = −∇V`:
/// `Φ = q λ_e [𝐞·(E∥ + v0 E⊥) + ŝ·(v0 𝐯×E)]`, 𝐞 the unit electric-dipole direction.
pub fn static_potential_spin_potential(
    state: &ParticleState,
    electric: Vec3,
    charge: f64,
) -> Result<f64, ZitterError> {
    let f = Multivector::from_electric_magnetic(electric, [0.0; 3]);
    let rest = rest_frame_split(state, &super::UniformField(f), charge)?;
    let v = frame(&state.rotor)[0];
    let v0 = v.vector_components()[0];
    let velocity = scale(spatial(&v), 1.0 / v0);
    let zitter_direction = scale(rest.d, 1.0 / (charge * NATURAL_LAMBDA_E));
    let spin_direction = scale(rest.s, 1.0 / NATURAL_LAMBDA_E);
    let (boosted_electric, _) = deboost_field(&f, &v)?;
    // the v0 𝐯×B twist vanishes for a purely electric lab field
    Ok(charge
        * NATURAL_LAMBDA_E
        * (dot(zitter_direction, boosted_electric)
            + dot(spin_direction, scale(cross(velocity, electric), v0))))
}
