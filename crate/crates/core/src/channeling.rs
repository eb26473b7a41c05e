//! Electron channeling along a crystal atomic string.
//!
//! Lab units throughout: eV, Å, s, MeV/c. The string potential has the
//! Lindhard form; the zitter clock modulates the radial restoring force and
//! drives a Mathieu-type parametric resonance when the clock period matches
//! the atomic spacing.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::par::{self, Execution};
use crate::quad::gauss8;
use crate::units::Constants;
use crate::zitter::Potential;

/// e²/(4πε₀) in eV·Å.
pub const COULOMB_EV_ANGSTROM: f64 = 14.399_645;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("{name} must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("string average did not converge: last increment {residual:e} at cutoff {cutoff:e} Å")]
    NonConvergence { residual: f64, cutoff: f64 },
    #[error("circular orbit at r0 = {r0} Å is unstable (W0'' = {curvature:e} eV/Å²)")]
    UnstableOrbit { r0: f64, curvature: f64 },
    #[error("envelope fit needs at least 3 extrema, found {0}")]
    EnvelopeFit(usize),
    #[error("radial integration unstable after {refinements} step refinements (t = {t:e})")]
    StepInstability { refinements: u32, t: f64 },
}

pub type Result<T> = std::result::Result<T, ChannelError>;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ChannelError::InvalidParameter { name, value })
    }
}

/// Crystal string parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Interatomic spacing along the string (Å).
    pub d: f64,
    pub atomic_number: f64,
    /// String coupling Z e²/d (eV).
    pub k: f64,
    /// Thomas–Fermi screening radius (Å).
    pub a: f64,
    /// Screening constant C².
    pub c2: f64,
    /// Crystal thickness along the beam (Å).
    pub crystal_length: f64,
}

impl Default for ChannelParams {
    /// Silicon ⟨110⟩ string.
    fn default() -> Self {
        Self {
            d: 3.84,
            atomic_number: 14.0,
            k: 52.5,
            a: 0.190,
            c2: 3.0,
            crystal_length: 1.0e4,
        }
    }
}

impl ChannelParams {
    /// Builds the coupling from the atomic number: k = Z e²/d.
    pub fn from_atomic_number(atomic_number: f64, d: f64, a: f64, c2: f64, crystal_length: f64) -> Self {
        Self {
            d,
            atomic_number,
            k: atomic_number * COULOMB_EV_ANGSTROM / d,
            a,
            c2,
            crystal_length,
        }
    }

    /// Screening length C·a.
    pub fn screening_length(&self) -> f64 {
        self.c2.sqrt() * self.a
    }

    pub fn atoms_in_crystal(&self) -> f64 {
        self.crystal_length / self.d
    }

    pub fn validate(&self) -> Result<()> {
        positive("d", self.d)?;
        positive("atomic_number", self.atomic_number)?;
        positive("k", self.k)?;
        positive("a", self.a)?;
        positive("c2", self.c2)?;
        positive("crystal_length", self.crystal_length)?;
        Ok(())
    }
}

/// String potential and its first two radial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lindhard {
    /// U (eV).
    pub u: f64,
    /// dU/dr (eV/Å).
    pub u1: f64,
    /// d²U/dr² (eV/Å²).
    pub u2: f64,
}

pub fn lindhard(r: f64, params: &ChannelParams) -> Result<Lindhard> {
    if !(r > 0.0) {
        return Err(ChannelError::NonPositiveRadius(r));
    }
    let x = (params.screening_length() / r).powi(2);
    let u = -params.k * x.ln_1p();
    let u1 = 2.0 * params.k / r * x / (1.0 + x);
    let u2 = -(u1 / r) * (3.0 + x) / (1.0 + x);
    Ok(Lindhard { u, u1, u2 })
}

/// Screened radius R = −U′/U″ that sets the zitter modulation depth λ_e/R.
pub fn effective_radius(r: f64, params: &ChannelParams) -> Result<f64> {
    if !(r > 0.0) {
        return Err(ChannelError::NonPositiveRadius(r));
    }
    let x = (params.screening_length() / r).powi(2);
    Ok(r * (1.0 + x) / (3.0 + x))
}

/// Screened single-atom potential energy whose string average is the
/// Lindhard form: V(R) = −(Z e²/R)[1 − (1 + (Ca/R)²)^{−1/2}].
pub fn lindhard_atom(params: &ChannelParams) -> impl Fn(f64) -> f64 {
    let charge = params.k * params.d;
    let ca2 = params.screening_length().powi(2);
    move |radius: f64| -charge / radius * (1.0 - 1.0 / (1.0 + ca2 / (radius * radius)).sqrt())
}

/// Bare Coulomb atom −Z e²/R; its string average diverges.
pub fn coulomb_atom(params: &ChannelParams) -> impl Fn(f64) -> f64 {
    let charge = params.k * params.d;
    move |radius: f64| -charge / radius
}

const STRING_RELATIVE_TOL: f64 = 1e-11;
const STRING_MAX_DOUBLINGS: u32 = 60;

fn adaptive_gauss8(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gauss8(f, a, mid, 0.0);
    let right = gauss8(f, mid, b, 0.0);
    if depth == 0 || (left + right - whole).abs() <= tol {
        return left + right;
    }
    adaptive_gauss8(f, a, mid, left, 0.5 * tol, depth - 1)
        + adaptive_gauss8(f, mid, b, right, 0.5 * tol, depth - 1)
}

/// Average of an atomic potential along the string at transverse distance
/// `r`: (1/d)∫V(√(r²+z²))dz over the whole line.
///
/// The half line is integrated on doubling shells [L, 2L] until a shell adds
/// less than a relative 1e−11 of the running total.
pub fn string_average<F: Fn(f64) -> f64>(v_atom: F, d: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(ChannelError::NonPositiveRadius(r));
    }
    positive("d", d)?;
    let integrand = |z: f64| v_atom((r * r + z * z).sqrt());
    let shell = |lo: f64, hi: f64, scale: f64| {
        let whole = gauss8(&integrand, lo, hi, 0.0);
        adaptive_gauss8(&integrand, lo, hi, whole, 1e-15 * scale.max(whole.abs()), 30)
    };
    let mut cutoff = r;
    let mut total = shell(0.0, cutoff, 0.0);
    let mut last = f64::INFINITY;
    for _ in 0..STRING_MAX_DOUBLINGS {
        let increment = shell(cutoff, 2.0 * cutoff, total.abs());
        total += increment;
        cutoff *= 2.0;
        // Shells shrink geometrically for an integrable tail; require two in a row.
        if increment.abs() <= STRING_RELATIVE_TOL * total.abs() && last.abs() <= 10.0 * STRING_RELATIVE_TOL * total.abs() {
            return Ok(2.0 * total / d);
        }
        last = increment;
    }
    Err(ChannelError::NonConvergence { residual: last.abs(), cutoff })
}

/// Lindhard string as a static potential energy in natural units, for the
/// full zitter dynamics. The string runs along x3; with `longitudinal` the
/// atomic periodicity P = 1 + cos(2πz/d) multiplies the transverse form.
#[derive(Debug, Clone, Copy)]
pub struct LindhardStringPotential {
    pub params: ChannelParams,
    pub constants: Constants,
    pub longitudinal: bool,
}

impl LindhardStringPotential {
    fn parts(&self, x: [f64; 3]) -> (f64, [f64; 3], [[f64; 3]; 3]) {
        let length = self.constants.natural_length();
        let energy = self.constants.electron_mass_ev;
        let (px, py) = (x[0] * length, x[1] * length);
        let r = px.hypot(py);
        let lh = lindhard(r, &self.params).expect("string axis is singular");
        // Transverse value, gradient, hessian in natural units.
        let u = lh.u / energy;
        let u1 = lh.u1 * length / energy;
        let u2 = lh.u2 * length * length / energy;
        let rn = r / length;
        let n = [x[0] / rn, x[1] / rn];
        let grad_t = [u1 * n[0], u1 * n[1]];
        let mut hess_t = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                hess_t[i][j] = u2 * n[i] * n[j] + u1 * (delta - n[i] * n[j]) / rn;
            }
        }
        let (p, dp, ddp) = if self.longitudinal {
            let wave = 2.0 * PI * length / self.params.d;
            let phase = wave * x[2];
            (1.0 + phase.cos(), -wave * phase.sin(), -wave * wave * phase.cos())
        } else {
            (1.0, 0.0, 0.0)
        };
        let value = u * p;
        let grad = [grad_t[0] * p, grad_t[1] * p, u * dp];
        let mut hess = [[0.0; 3]; 3];
        for i in 0..2 {
            for j in 0..2 {
                hess[i][j] = hess_t[i][j] * p;
            }
            hess[i][2] = grad_t[i] * dp;
            hess[2][i] = grad_t[i] * dp;
        }
        hess[2][2] = u * ddp;
        (value, grad, hess)
    }
}

impl Potential for LindhardStringPotential {
    fn value(&self, x: [f64; 3]) -> f64 {
        self.parts(x).0
    }
    fn gradient(&self, x: [f64; 3]) -> [f64; 3] {
        self.parts(x).1
    }
    fn hessian(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        self.parts(x).2
    }
}

/// Beam kinematics at a given momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    /// Momentum (MeV/c).
    pub p: f64,
    pub gamma: f64,
    pub beta: f64,
    /// Relativistic mass γ m_e c² (eV).
    pub mass_ev: f64,
    /// Atom-crossing angular frequency 2π ż/d (s⁻¹).
    pub omega0: f64,
    /// Longitudinal speed (Å/s).
    pub zdot: f64,
}

impl BeamParams {
    pub fn from_momentum(p_mev: f64, d: f64, constants: &Constants) -> Result<Self> {
        positive("p", p_mev)?;
        positive("d", d)?;
        let rest_mev = constants.electron_mass_ev * 1e-6;
        let gamma = (1.0 + (p_mev / rest_mev).powi(2)).sqrt();
        let beta = p_mev / (gamma * rest_mev);
        let zdot = beta * constants.c_angstrom_per_s;
        Ok(Self {
            p: p_mev,
            gamma,
            beta,
            mass_ev: gamma * constants.electron_mass_ev,
            omega0: 2.0 * PI * zdot / d,
            zdot,
        })
    }

    /// Zitter clock frequency seen in the lab, ω_e/γ.
    pub fn drive_frequency(&self, constants: &Constants) -> f64 {
        constants.omega_e() / self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantBeam {
    pub beam: BeamParams,
    /// Momentum where the clock fires once every two atoms.
    pub second_order_p: f64,
}

/// Beam whose clock advances one period per atomic spacing:
/// p = d (m_e c²)²/(hc).
pub fn beam_kinematics(d: f64, constants: &Constants) -> Result<ResonantBeam> {
    positive("d", d)?;
    let p_ev = d * constants.electron_mass_ev.powi(2) / constants.hc_ev_angstrom;
    let p = p_ev * 1e-6;
    Ok(ResonantBeam {
        beam: BeamParams::from_momentum(p, d, constants)?,
        second_order_p: 2.0 * p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularOrbit {
    /// Orbital angular speed (s⁻¹).
    pub theta_dot0: f64,
    /// M r0² θ̇0 (eV·s).
    pub angular_momentum: f64,
    /// Small radial oscillation frequency about the circle (s⁻¹).
    pub radial_frequency: f64,
    pub revolutions_per_micron: f64,
}

pub fn circular_orbit(r0: f64, beam: &BeamParams, params: &ChannelParams, constants: &Constants) -> Result<CircularOrbit> {
    let lh = lindhard(r0, params)?;
    let curvature = lh.u2 + 3.0 * lh.u1 / r0;
    if !(curvature > 0.0) || !(lh.u1 > 0.0) {
        return Err(ChannelError::UnstableOrbit { r0, curvature });
    }
    let c2 = constants.c_angstrom_per_s.powi(2);
    let theta_dot0 = (lh.u1 * c2 / (beam.mass_ev * r0)).sqrt();
    let radial_frequency = (curvature * c2 / beam.mass_ev).sqrt();
    Ok(CircularOrbit {
        theta_dot0,
        angular_momentum: beam.mass_ev / c2 * r0 * r0 * theta_dot0,
        radial_frequency,
        revolutions_per_micron: theta_dot0 * (1.0e4 / beam.zdot) / (2.0 * PI),
    })
}

/// Fundamental-mode amplitude modulated by a slow radial oscillation.
pub fn modulated_orbit(amplitude: f64, big_omega: f64, omega0: f64, t: f64) -> f64 {
    amplitude * (big_omega * t).cos() * (omega0 * t).cos()
}

/// The two spectral lines (ω0 − Ω, ω0 + Ω) of [`modulated_orbit`].
pub fn split_frequencies(big_omega: f64, omega0: f64) -> (f64, f64) {
    (omega0 - big_omega, omega0 + big_omega)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZitterPerturbation {
    /// Radial force term λ_e U″ P cos(ω_e t/γ + δ) (eV/Å).
    pub force_r: f64,
    /// Instantaneous zitter frequency (s⁻¹).
    pub freq_shift: f64,
    /// Amplitude γ U′ c/(m_e c²) of the frequency shift (s⁻¹).
    pub shift_modulus: f64,
    /// Modulation depth λ_e/R.
    pub depth: f64,
}

pub fn zitter_perturbation(
    r: f64,
    beam: &BeamParams,
    params: &ChannelParams,
    constants: &Constants,
    t: f64,
    delta: f64,
) -> Result<ZitterPerturbation> {
    let lh = lindhard(r, params)?;
    let omega_e = constants.omega_e();
    let clock = (omega_e * t / beam.gamma + delta).cos();
    let periodic = 1.0 + (beam.omega0 * t).cos();
    let shift_modulus = beam.gamma * lh.u1 * constants.c_angstrom_per_s / constants.electron_mass_ev;
    Ok(ZitterPerturbation {
        force_r: constants.lambda_e() * lh.u2 * periodic * clock,
        freq_shift: omega_e - shift_modulus * clock,
        shift_modulus,
        depth: constants.lambda_e() / effective_radius(r, params)?,
    })
}

/// First-order parametric resonance of x″ + ω0²(1 + h cos ωt)x = 0 near
/// ω = 2ω0 + ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricResonance {
    pub s_squared: f64,
    /// Amplitude growth rate Re s (s⁻¹), zero outside the band.
    pub growth: f64,
    pub stable: bool,
    /// Full band width hω0 in drive frequency (s⁻¹).
    pub width: f64,
    /// Growth exponent per atomic spacing, s·2π/ω0.
    pub per_atom_exponent: f64,
    pub atoms_to_double: f64,
}

pub fn parametric_resonance(h: f64, omega0: f64, epsilon: f64) -> ParametricResonance {
    let s_squared = 0.25 * ((0.5 * h * omega0).powi(2) - epsilon * epsilon);
    let growth = s_squared.max(0.0).sqrt();
    let per_atom_exponent = growth * 2.0 * PI / omega0;
    ParametricResonance {
        s_squared,
        growth,
        stable: s_squared <= 0.0,
        width: h * omega0,
        per_atom_exponent,
        atoms_to_double: if per_atom_exponent > 0.0 {
            std::f64::consts::LN_2 / per_atom_exponent
        } else {
            f64::INFINITY
        },
    }
}

/// Momentum band Δp = h p obtained by reading the frequency band hω0 as a
/// relative momentum band Δp/p = Δω/ω0.
pub fn momentum_band_estimate(h: f64, p: f64) -> f64 {
    h * p
}

fn rk4_step<const N: usize>(f: &impl Fn(f64, &[f64; N]) -> [f64; N], t: f64, y: &[f64; N], dt: f64) -> [f64; N] {
    let shift = |y: &[f64; N], k: &[f64; N], c: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += c * k[i];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * dt, &shift(y, &k1, 0.5 * dt));
    let k3 = f(t + 0.5 * dt, &shift(y, &k2, 0.5 * dt));
    let k4 = f(t + dt, &shift(y, &k3, dt));
    let mut out = *y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloquetAgreement {
    Agree,
    /// Both routes converged but differ by more than 1% in the half trace.
    Disagree,
    /// The Hill determinant hits a pole (4q/ω² = 4n²); only the monodromy value exists.
    HillUnavailable,
}

/// Floquet analysis of x″ + q(1 + h cos ωt)x = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetResult {
    /// Floquet exponent from the monodromy map (s⁻¹), branch chosen nearest i√q.
    pub s: Complex64,
    /// Exponent from the Hill determinant, same branch rule.
    pub hill_s: Option<Complex64>,
    /// cosh(sT) from each route.
    pub monodromy_half_trace: f64,
    pub hill_half_trace: Option<f64>,
    pub agreement: FloquetAgreement,
    /// |det M − 1| of the period map.
    pub wronskian_error: f64,
    /// a_n/a_{n−1} for n = 1, 2, …
    pub coeff_ratios: Vec<Complex64>,
    /// a_{−n}/a_{−n+1} for n = 1, 2, …
    pub coeff_ratios_negative: Vec<Complex64>,
    pub stable: bool,
    /// First-order band width h√q (s⁻¹).
    pub width: f64,
}

impl FloquetResult {
    pub fn growth(&self) -> f64 {
        self.s.re.max(0.0)
    }
}

const HILL_MODES: i32 = 80;
const RATIO_COUNT: usize = 6;
const RATIO_DEPTH: i32 = 60;

/// Hill determinant half trace in scaled time (ω = 1).
fn hill_half_trace(q_hat: f64, h: f64) -> Option<f64> {
    let theta0 = 4.0 * q_hat;
    let theta1 = 2.0 * q_hat * h;
    let mut xi = Vec::with_capacity((2 * HILL_MODES + 1) as usize);
    for n in -HILL_MODES..=HILL_MODES {
        let gap = theta0 - 4.0 * (n * n) as f64;
        if gap.abs() < 1e-12 * theta0.max(1.0) {
            return None;
        }
        xi.push(theta1 / gap);
    }
    // Tridiagonal recurrence D_k = D_{k−1} − ξ_k ξ_{k−1} D_{k−2}.
    let (mut prev, mut cur) = (1.0, 1.0);
    for k in 1..xi.len() {
        let next = cur - xi[k] * xi[k - 1] * prev;
        prev = cur;
        cur = next;
    }
    let sine = (0.5 * PI * theta0.sqrt()).sin();
    Some(1.0 - 2.0 * cur * sine * sine)
}

/// Period map of the fundamental system in scaled time; returns (half trace, det).
fn monodromy(q_hat: f64, h: f64) -> (f64, f64) {
    let fastest = (q_hat * (1.0 + h.abs())).sqrt().max(1.0);
    let steps = ((2000.0 * fastest).ceil() as usize).max(2000);
    let dt = 2.0 * PI / steps as f64;
    let rhs = |t: f64, y: &[f64; 4]| {
        let stiffness = q_hat * (1.0 + h * t.cos());
        [y[1], -stiffness * y[0], y[3], -stiffness * y[2]]
    };
    let mut y = [1.0, 0.0, 0.0, 1.0];
    for i in 0..steps {
        y = rk4_step(&rhs, i as f64 * dt, &y, dt);
    }
    (0.5 * (y[0] + y[3]), y[0] * y[3] - y[2] * y[1])
}

/// Scaled exponent from cosh(2π ŝ) = c, branch nearest i√q̂.
fn exponent_from_half_trace(c: f64, q_hat: f64) -> Complex64 {
    let target = q_hat.sqrt();
    let nearest = |base: f64| {
        // Candidates ±base + k for integer k.
        let mut best = base;
        for sign in [1.0, -1.0] {
            let k = (target - sign * base).round();
            let cand = sign * base + k;
            if (cand - target).abs() < (best - target).abs() {
                best = cand;
            }
        }
        best
    };
    let two_pi = 2.0 * PI;
    if c.abs() <= 1.0 {
        Complex64::new(0.0, nearest(c.acos() / two_pi))
    } else if c > 1.0 {
        Complex64::new(c.acosh() / two_pi, nearest(0.0))
    } else {
        Complex64::new((-c).acosh() / two_pi, nearest(0.5))
    }
}

/// Continued-fraction ratios a_{±n}/a_{±(n−1)} in scaled time.
fn coefficient_ratios(s_hat: Complex64, q_hat: f64, h: f64, direction: f64) -> Vec<Complex64> {
    let coupling = 0.5 * q_hat * h;
    let mut ratios = vec![Complex64::new(0.0, 0.0); RATIO_DEPTH as usize + 2];
    for n in (1..=RATIO_DEPTH).rev() {
        let shifted = s_hat + Complex64::new(0.0, direction * n as f64);
        let deeper = ratios[n as usize + 1];
        ratios[n as usize] = -coupling / (shifted * shifted + q_hat + coupling * deeper);
    }
    ratios[1..=RATIO_COUNT].to_vec()
}

pub fn floquet_exponent(q: f64, h: f64, omega: f64) -> Result<FloquetResult> {
    positive("q", q)?;
    positive("omega", omega)?;
    if !h.is_finite() {
        return Err(ChannelError::InvalidParameter { name: "h", value: h });
    }
    let q_hat = q / (omega * omega);
    let (mono_c, det) = monodromy(q_hat, h);
    let s_hat = exponent_from_half_trace(mono_c, q_hat);
    let hill_c = hill_half_trace(q_hat, h);
    let agreement = match hill_c {
        None => FloquetAgreement::HillUnavailable,
        Some(c) if (c - mono_c).abs() <= 0.01 * mono_c.abs().max(1.0) => FloquetAgreement::Agree,
        Some(_) => FloquetAgreement::Disagree,
    };
    Ok(FloquetResult {
        s: s_hat * omega,
        hill_s: hill_c.map(|c| exponent_from_half_trace(c, q_hat) * omega),
        monodromy_half_trace: mono_c,
        hill_half_trace: hill_c,
        agreement,
        wronskian_error: (det - 1.0).abs(),
        coeff_ratios: coefficient_ratios(s_hat, q_hat, h, 1.0),
        coeff_ratios_negative: coefficient_ratios(s_hat, q_hat, h, -1.0),
        stable: mono_c.abs() <= 1.0,
        width: h * q.sqrt(),
    })
}

/// Slow radial modulation of an orbit whose stiffness carries the atomic
/// periodicity: x″ + Ω0²(1 + cos ω0 t)x = 0 with Ω0 ≪ ω0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationCheck {
    pub radial_frequency: f64,
    pub omega0: f64,
    /// Modulation frequency Im s from the monodromy oracle.
    pub monodromy: f64,
    /// Candidate Ω = √(3/2) Ω0.
    pub three_halves: f64,
    /// Candidate Ω = Ω0.
    pub unshifted: f64,
}

impl ModulationCheck {
    pub fn monodromy_over_omega0(&self) -> f64 {
        self.monodromy / self.omega0
    }
}

pub fn modulation_check(radial_frequency: f64, omega0: f64) -> Result<ModulationCheck> {
    let result = floquet_exponent(radial_frequency * radial_frequency, 1.0, omega0)?;
    Ok(ModulationCheck {
        radial_frequency,
        omega0,
        monodromy: result.s.im.abs(),
        three_halves: 1.5f64.sqrt() * radial_frequency,
        unshifted: radial_frequency,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RadialModel {
    /// x″ + q(1 + h cos ωt)x = 0.
    #[default]
    Mathieu,
    /// x″ + q(1 + cos ω0 t)(1 + h cos ωt)x = 0, keeping the atomic periodicity.
    WithLongitudinal { omega0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialRun {
    pub x0: f64,
    pub v0: f64,
    pub q: f64,
    pub h: f64,
    pub omega: f64,
    pub t_end: f64,
    pub model: RadialModel,
    pub steps_per_period: usize,
    /// Extrema before this time are left out of the envelope fit.
    pub fit_from: f64,
    pub record_every: usize,
}

impl RadialRun {
    pub fn new(q: f64, h: f64, omega: f64, t_end: f64) -> Self {
        Self {
            x0: 1.0,
            v0: 0.0,
            q,
            h,
            omega,
            t_end,
            model: RadialModel::Mathieu,
            steps_per_period: 200,
            fit_from: 0.0,
            record_every: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    pub t: f64,
    pub x: f64,
    /// Oscillator amplitude √(x² + ẋ²/q).
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialResult {
    pub samples: Vec<RadialSample>,
    /// (time, |x|) at turning points.
    pub extrema: Vec<(f64, f64)>,
    /// Fitted growth rate of ln|x| at turning points (s⁻¹).
    pub exponent: f64,
    pub exponent_stderr: f64,
    /// Largest relative change of ½ẋ² + ½qx² over the run.
    pub energy_drift: f64,
    pub steps_per_period: usize,
}

const MAX_REFINEMENTS: u32 = 4;

pub fn integrate_radial(run: &RadialRun) -> Result<RadialResult> {
    positive("q", run.q)?;
    positive("t_end", run.t_end)?;
    if run.h != 0.0 {
        positive("omega", run.omega)?;
    }
    let mut steps = run.steps_per_period.max(16);
    for refinement in 0..=MAX_REFINEMENTS {
        if let Some(result) = radial_attempt(run, steps)? {
            return Ok(result);
        }
        if refinement == MAX_REFINEMENTS {
            break;
        }
        steps *= 2;
    }
    Err(ChannelError::StepInstability { refinements: MAX_REFINEMENTS, t: run.t_end })
}

fn radial_attempt(run: &RadialRun, steps_per_period: usize) -> Result<Option<RadialResult>> {
    let q = run.q;
    let (omega0, peak_factor) = match run.model {
        RadialModel::Mathieu => (0.0, 1.0 + run.h.abs()),
        RadialModel::WithLongitudinal { omega0 } => {
            positive("omega0", omega0)?;
            (omega0, 2.0 * (1.0 + run.h.abs()))
        }
    };
    let stiffness = |t: f64| {
        let drive = 1.0 + run.h * (run.omega * t).cos();
        match run.model {
            RadialModel::Mathieu => q * drive,
            RadialModel::WithLongitudinal { .. } => q * (1.0 + (omega0 * t).cos()) * drive,
        }
    };
    let fastest = (q * peak_factor).sqrt().max(run.omega).max(omega0);
    let dt0 = 2.0 * PI / (fastest * steps_per_period as f64);
    let n_steps = (run.t_end / dt0).ceil() as usize;
    let dt = run.t_end / n_steps as f64;
    // d ln E/dt ≤ √q·max|k(t)/q − 1|, so any faster growth is step error.
    let growth_bound = q.sqrt() * (peak_factor - 1.0).max(1.0);

    let rhs = |t: f64, y: &[f64; 2]| [y[1], -stiffness(t) * y[0]];
    let energy = |y: &[f64; 2]| 0.5 * y[1] * y[1] + 0.5 * q * y[0] * y[0];
    let envelope = |y: &[f64; 2]| (y[0] * y[0] + y[1] * y[1] / q).sqrt();

    let mut y = [run.x0, run.v0];
    let e0 = energy(&y);
    let ln_e0 = e0.ln();
    let mut energy_drift: f64 = 0.0;
    let record_every = run.record_every.max(1);
    let mut samples = vec![RadialSample { t: 0.0, x: y[0], envelope: envelope(&y) }];
    let mut extrema = Vec::new();
    for i in 0..n_steps {
        let t = i as f64 * dt;
        let next = rk4_step(&rhs, t, &y, dt);
        let t_next = t + dt;
        let e = energy(&next);
        if !e.is_finite() || (e.ln() - ln_e0) > 1.2 * growth_bound * t_next + 1e-6 {
            return Ok(None);
        }
        energy_drift = energy_drift.max(((e - e0) / e0).abs());
        if y[1] * next[1] < 0.0 || (next[1] == 0.0 && y[1] != 0.0) {
            // Quadratic turning-point estimate from the nearer endpoint.
            let (tk, yk) = if y[1].abs() < next[1].abs() { (t, y) } else { (t_next, next) };
            let acc = -stiffness(tk) * yk[0];
            let x_ext = if acc != 0.0 { yk[0] - yk[1] * yk[1] / (2.0 * acc) } else { yk[0] };
            let t_ext = if acc != 0.0 { tk - yk[1] / acc } else { tk };
            extrema.push((t_ext, x_ext.abs()));
        }
        y = next;
        if (i + 1) % record_every == 0 || i + 1 == n_steps {
            samples.push(RadialSample { t: t_next, x: y[0], envelope: envelope(&y) });
        }
    }
    let fit: Vec<(f64, f64)> = extrema
        .iter()
        .filter(|(t, a)| *t >= run.fit_from && *a > 0.0)
        .map(|&(t, a)| (t, a.ln()))
        .collect();
    if fit.len() < 3 {
        return Err(ChannelError::EnvelopeFit(fit.len()));
    }
    let (exponent, exponent_stderr) = linear_fit(&fit);
    Ok(Some(RadialResult {
        samples,
        extrema,
        exponent,
        exponent_stderr,
        energy_drift,
        steps_per_period,
    }))
}

/// Least-squares slope and its standard error.
fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mean_t = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = points.iter().map(|p| (p.0 - mean_t).powi(2)).sum();
    let sty: f64 = points.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_y)).sum();
    let slope = sty / stt;
    let intercept = mean_y - slope * mean_t;
    let residual: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = if points.len() > 2 { (residual / (n - 2.0) / stt).sqrt() } else { f64::INFINITY };
    (slope, stderr)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    /// M r² θ̇ (eV·s).
    pub angular_momentum: f64,
    /// ½M v² + U (eV).
    pub energy: f64,
}

/// Transverse orbit in the string potential without atomic periodicity,
/// started on the x axis with radial speed `vr` and angular speed `theta_dot`.
pub fn integrate_orbit_2d(
    r0: f64,
    vr: f64,
    theta_dot: f64,
    beam: &BeamParams,
    params: &ChannelParams,
    constants: &Constants,
    t_end: f64,
    steps: usize,
) -> Result<Vec<OrbitSample>> {
    lindhard(r0, params)?;
    positive("t_end", t_end)?;
    let mass = beam.mass_ev / constants.c_angstrom_per_s.powi(2);
    let rhs = |_t: f64, s: &[f64; 4]| {
        let r = s[0].hypot(s[1]);
        let pull = lindhard(r, params).map(|l| l.u1).unwrap_or(f64::NAN) / (mass * r);
        [s[2], s[3], -pull * s[0], -pull * s[1]]
    };
    let sample = |t: f64, s: &[f64; 4]| {
        let r = s[0].hypot(s[1]);
        let u = lindhard(r, params).map(|l| l.u).unwrap_or(f64::NAN);
        OrbitSample {
            t,
            x: s[0],
            y: s[1],
            angular_momentum: mass * (s[0] * s[3] - s[1] * s[2]),
            energy: 0.5 * mass * (s[2] * s[2] + s[3] * s[3]) + u,
        }
    };
    let steps = steps.max(1);
    let dt = t_end / steps as f64;
    let mut state = [r0, 0.0, vr, r0 * theta_dot];
    let mut out = Vec::with_capacity(steps + 1);
    out.push(sample(0.0, &state));
    for i in 0..steps {
        state = rk4_step(&rhs, i as f64 * dt, &state, dt);
        out.push(sample((i + 1) as f64 * dt, &state));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    /// Orbit radii are the midpoints of `r0_samples` equal cells on [r0_min, r0_max].
    pub r0_min: f64,
    pub r0_max: f64,
    pub r0_samples: usize,
    /// Amplitude growth factor within the crystal that counts as ejection.
    pub ejection_factor: f64,
    pub params: ChannelParams,
    pub constants: Constants,
    pub execution: Execution,
}

impl ScanConfig {
    pub fn new(p_min: f64, p_max: f64, steps: usize) -> Self {
        Self {
            p_min,
            p_max,
            steps,
            r0_min: 0.15,
            r0_max: 0.9,
            r0_samples: 32,
            ejection_factor: 8.0,
            params: ChannelParams::default(),
            constants: Constants::default(),
            execution: Execution::Parallel,
        }
    }

    pub fn radii(&self) -> Vec<f64> {
        let n = self.r0_samples.max(1);
        let width = (self.r0_max - self.r0_min) / n as f64;
        (0..n).map(|i| self.r0_min + (i as f64 + 0.5) * width).collect()
    }

    pub fn momenta(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![0.5 * (self.p_min + self.p_max)];
        }
        let step = (self.p_max - self.p_min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.p_min + i as f64 * step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    /// Momentum (MeV/c).
    pub p: f64,
    /// Mean over orbit radii of the amplitude growth exponent per atom.
    pub growth_exponent_per_atom: f64,
    /// ln 2 over the mean per-atom exponent.
    pub atoms_to_double: f64,
    /// Fraction of orbit radii whose amplitude grows past the ejection factor.
    pub ejected_fraction: f64,
    pub ejection_flag: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub center: f64,
    /// Full width at half maximum; `None` when a half-maximum crossing lies
    /// outside the scanned range.
    pub fwhm: Option<f64>,
    pub peak_value: f64,
    /// Number of separate runs above half maximum.
    pub regions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// Peak of the ejected-fraction curve.
    pub ejection_peak: Option<Peak>,
    /// Peak of the mean growth-exponent curve.
    pub growth_peak: Option<Peak>,
    /// Orbit evaluations where the two Floquet routes disagreed.
    pub route_disagreements: usize,
}

pub fn momentum_scan(config: &ScanConfig) -> Result<ScanResult> {
    config.params.validate()?;
    positive("p_min", config.p_min)?;
    positive("p_max", config.p_max)?;
    positive("r0_min", config.r0_min)?;
    positive("ejection_factor", config.ejection_factor)?;
    let radii = config.radii();
    let momenta = config.momenta();
    let depths: Vec<f64> = radii
        .iter()
        .map(|&r| effective_radius(r, &config.params).map(|big_r| config.constants.lambda_e() / big_r))
        .collect::<Result<_>>()?;
    let tasks: Vec<(usize, f64)> = momenta
        .iter()
        .enumerate()
        .flat_map(|(i, _)| depths.iter().map(move |&h| (i, h)))
        .collect();
    let evaluate = |&(i, h): &(usize, f64)| -> Result<(f64, bool)> {
        let beam = BeamParams::from_momentum(momenta[i], config.params.d, &config.constants)?;
        let result = floquet_exponent(beam.omega0.powi(2), h, beam.drive_frequency(&config.constants))?;
        Ok((result.growth() * 2.0 * PI / beam.omega0, result.agreement == FloquetAgreement::Disagree))
    };
    let outcomes = par::map(&tasks, config.execution, evaluate);
    let atoms = config.params.atoms_in_crystal();
    let threshold = config.ejection_factor.ln();
    let mut rows = Vec::with_capacity(momenta.len());
    let mut disagreements = 0;
    for (i, &p) in momenta.iter().enumerate() {
        let block = &outcomes[i * depths.len()..(i + 1) * depths.len()];
        let mut sum = 0.0;
        let mut ejected = 0usize;
        for outcome in block {
            let (growth, disagree) = outcome.clone()?;
            sum += growth;
            if growth * atoms >= threshold {
                ejected += 1;
            }
            if disagree {
                disagreements += 1;
            }
        }
        let mean = sum / depths.len() as f64;
        let ejected_fraction = ejected as f64 / depths.len() as f64;
        rows.push(ScanRow {
            p,
            growth_exponent_per_atom: mean,
            atoms_to_double: if mean > 0.0 { std::f64::consts::LN_2 / mean } else { f64::INFINITY },
            ejected_fraction,
            ejection_flag: ejected_fraction >= 0.5,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.p).collect();
    let ejection: Vec<f64> = rows.iter().map(|r| r.ejected_fraction).collect();
    let growth: Vec<f64> = rows.iter().map(|r| r.growth_exponent_per_atom).collect();
    Ok(ScanResult {
        ejection_peak: find_peak(&xs, &ejection),
        growth_peak: find_peak(&xs, &growth),
        rows,
        route_disagreements: disagreements,
    })
}

/// Half-maximum crossings around the global maximum, linearly interpolated.
pub fn find_peak(xs: &[f64], ys: &[f64]) -> Option<Peak> {
    let (imax, &peak_value) = ys
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))?;
    if !(peak_value > 0.0) {
        return None;
    }
    let half = 0.5 * peak_value;
    let mut regions = 0;
    let mut above = false;
    for &y in ys {
        if y >= half && !above {
            regions += 1;
        }
        above = y >= half;
    }
    let cross = |i: usize, j: usize| xs[i] + (half - ys[i]) * (xs[j] - xs[i]) / (ys[j] - ys[i]);
    let left = (0..imax).rev().find(|&i| ys[i] < half).map(|i| cross(i, i + 1));
    let right = (imax + 1..ys.len()).find(|&i| ys[i] < half).map(|i| cross(i - 1, i));
    let (center, fwhm) = match (left, right) {
        (Some(l), Some(r)) => (0.5 * (l + r), Some(r - l)),
        _ => (xs[imax], None),
    };
    Some(Peak { center, fwhm, peak_value, regions })
}
