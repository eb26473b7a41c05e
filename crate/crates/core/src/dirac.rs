//! Real Dirac equation checks in natural units (ħ = m_e = 1).
//!
//! Spinors are even multivectors ψ = (ρ e^{iβ})^{1/2} R. The Dirac operator
//! is ∇ψ iσ3 − qAψ − ψγ0 with ∇ = γ^μ ∂_μ; its zitter projection acts on
//! ψ₊ = ψ ½(1 + σ2).

use thiserror::Error;

use crate::sta::{canonical_decompose, duality_factor, split_bivector, Bivec, Multivector, Spinor, StaError, Vec4};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiracError {
    #[error(transparent)]
    Algebra(#[from] StaError),
    #[error("amplitude and potential admit no plane wave: wave vector has non-vector part {0:e}")]
    NoPlaneWave(f64),
}

/// iσ3 = γ2γ1.
pub fn i_sigma3() -> Multivector {
    Multivector::pseudoscalar() * Multivector::sigma(3)
}

/// ½(1 + σ2), the electron projector.
pub fn electron_projector() -> Multivector {
    (Multivector::scalar(1.0) + Multivector::sigma(2)) * 0.5
}

/// ½(1 − σ2), the complementary projector.
pub fn neutrino_projector() -> Multivector {
    (Multivector::scalar(1.0) - Multivector::sigma(2)) * 0.5
}

/// ψ⁻¹ = ψ~ (ψψ~)⁻¹ with ψψ~ = ρ e^{iβ}.
pub fn spinor_inverse(psi: &Spinor) -> Result<Spinor, DiracError> {
    let c = canonical_decompose(psi)?;
    Ok(psi.reverse() * duality_factor(-c.beta) / c.rho)
}

/// Spinor field with analytic derivatives.
pub trait SpinorField {
    fn value(&self, x: &Vec4) -> Spinor;
    /// ∂_μ ψ = ∂ψ/∂x^μ.
    fn derivative(&self, x: &Vec4, mu: usize) -> Spinor;
}

/// ψ(x) = ψ0 exp(−iσ3 k·x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub amplitude: Spinor,
    pub wave_vector: Vec4,
}

fn require_vector(m: &Multivector) -> Result<Vec4, DiracError> {
    let vector = m.part(1);
    let stray = (*m - vector).max_abs();
    if stray > 1e-12 * vector.max_abs().max(1.0) {
        return Err(DiracError::NoPlaneWave(stray));
    }
    Ok(vector)
}

impl PlaneWave {
    /// Solution of the Dirac equation in a constant potential: k = ψ0γ0ψ0⁻¹ + qA.
    /// Exists only for β ∈ {0, π}, where ψ0γ0ψ0⁻¹ = ±v.
    pub fn dirac_solution(amplitude: Spinor, potential: Vec4, charge: f64) -> Result<Self, DiracError> {
        let momentum = require_vector(&(amplitude * Multivector::gamma(0) * spinor_inverse(&amplitude)?))?;
        Ok(Self { amplitude, wave_vector: momentum + potential * charge })
    }

    /// Solution of the zitter Dirac equation in a constant potential:
    /// k = ψ0γ0ψ0⁻¹ + q A ψ0σ3ψ0⁻¹. Exists for β ∈ {0, π} and A in the e0–e3 plane.
    pub fn zitter_solution(amplitude: Spinor, potential: Vec4, charge: f64) -> Result<Self, DiracError> {
        let inverse = spinor_inverse(&amplitude)?;
        let momentum = amplitude * Multivector::gamma(0) * inverse;
        let coupling = potential * amplitude * Multivector::sigma(3) * inverse;
        let k = require_vector(&(momentum + coupling * charge))?;
        Ok(Self { amplitude, wave_vector: k })
    }

    fn phase(&self, x: &Vec4) -> Multivector {
        let angle = self.wave_vector.dot(x);
        Multivector::scalar(angle.cos()) - i_sigma3() * angle.sin()
    }
}

impl SpinorField for PlaneWave {
    fn value(&self, x: &Vec4) -> Spinor {
        self.amplitude * self.phase(x)
    }

    fn derivative(&self, x: &Vec4, mu: usize) -> Spinor {
        // ∂_μ(k·x) = k_μ, the lower-index component.
        let k_lower = self.wave_vector.dot(&Multivector::gamma(mu));
        -(self.value(x) * i_sigma3()) * k_lower
    }
}

/// Spinor field times a constant scalar.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<F> {
    pub field: F,
    pub factor: f64,
}

impl<F: SpinorField> SpinorField for Scaled<F> {
    fn value(&self, x: &Vec4) -> Spinor {
        self.field.value(x) * self.factor
    }
    fn derivative(&self, x: &Vec4, mu: usize) -> Spinor {
        self.field.derivative(x, mu) * self.factor
    }
}

/// γ^μ, the reciprocal frame.
fn reciprocal(mu: usize) -> Vec4 {
    if mu == 0 {
        Multivector::gamma(0)
    } else {
        -Multivector::gamma(mu)
    }
}

fn nabla_with(derivative: impl Fn(usize) -> Spinor) -> Multivector {
    (0..4).fold(Multivector::zero(), |acc, mu| acc + reciprocal(mu) * derivative(mu))
}

/// ∇ψ iσ3 − qAψ − ψγ0.
pub fn dirac_residual(field: &dyn SpinorField, potential: &dyn Fn(&Vec4) -> Vec4, charge: f64, x: &Vec4) -> Multivector {
    let psi = field.value(x);
    let nabla = nabla_with(|mu| field.derivative(x, mu));
    nabla * i_sigma3() - potential(x) * psi * charge - psi * Multivector::gamma(0)
}

/// ∇ψ₊ iσ3 − qAψ₊σ3 − ψ₊γ0 with ψ₊ = ψ ½(1 + σ2).
pub fn zitter_dirac_residual(field: &dyn SpinorField, potential: &dyn Fn(&Vec4) -> Vec4, charge: f64, x: &Vec4) -> Multivector {
    let projector = electron_projector();
    let psi = field.value(x) * projector;
    let nabla = nabla_with(|mu| field.derivative(x, mu) * projector);
    nabla * i_sigma3() - potential(x) * psi * Multivector::sigma(3) * charge - psi * Multivector::gamma(0)
}

/// Spinor field seen through a fixed right factor, ψ ↦ ψ M.
#[derive(Debug, Clone, Copy)]
pub struct RightMultiplied<F> {
    pub field: F,
    pub factor: Multivector,
}

impl<F: SpinorField> SpinorField for RightMultiplied<F> {
    fn value(&self, x: &Vec4) -> Spinor {
        self.field.value(x) * self.factor
    }
    fn derivative(&self, x: &Vec4, mu: usize) -> Spinor {
        self.field.derivative(x, mu) * self.factor
    }
}

/// Default step for finite-difference oracles.
pub const FD_STEP: f64 = 1e-5;

/// ∂_μψ by central differences with one Richardson extrapolation (error O(h⁴)).
pub fn finite_difference_derivative(field: &dyn SpinorField, x: &Vec4, mu: usize, step: f64) -> Spinor {
    let direction = Multivector::gamma(mu);
    let central = |h: f64| (field.value(&(*x + direction * h)) - field.value(&(*x - direction * h))) / (2.0 * h);
    let coarse = central(step);
    let fine = central(0.5 * step);
    (fine * 4.0 - coarse) / 3.0
}

/// Dirac residual with the derivatives replaced by [`finite_difference_derivative`].
pub fn dirac_residual_fd(field: &dyn SpinorField, potential: &dyn Fn(&Vec4) -> Vec4, charge: f64, x: &Vec4, step: f64) -> Multivector {
    let psi = field.value(x);
    let nabla = nabla_with(|mu| finite_difference_derivative(field, x, mu, step));
    nabla * i_sigma3() - potential(x) * psi * charge - psi * Multivector::gamma(0)
}

/// Bilinear observables of a spinor at one event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalObservables {
    pub rho: f64,
    pub beta: f64,
    /// e_μ = R γ_μ R~.
    pub frame: [Vec4; 4],
    /// Dirac velocity e0.
    pub v: Vec4,
    /// Null velocity e0 + e2.
    pub u: Vec4,
    /// Spin vector ½ e3.
    pub s: Vec4,
    /// ½ R iσ3 R~.
    pub s_bar: Bivec,
    /// ψ₊γ₊ψ₊~ = ρu, null.
    pub projected_current: Vec4,
    /// ψ₊ iσ3 ψ₊~, the projected spin density.
    pub projected_spin: Bivec,
}

impl LocalObservables {
    /// ½⟨F ψ iσ3 ψ~⟩.
    pub fn interaction_density(&self, psi: &Spinor, f: &Bivec) -> f64 {
        0.5 * (*f * *psi * i_sigma3() * psi.reverse()).scalar_part()
    }

    /// −ρ(B·s cosβ + E·s sinβ) with E, B relative to v.
    pub fn interaction_density_split(&self, f: &Bivec) -> Result<f64, DiracError> {
        let split = split_bivector(f, &self.v)?;
        let spin = self.s * self.v;
        let e_s = split.electric.dot(&spin);
        let b_s = split.magnetic.dot(&spin);
        Ok(-self.rho * (b_s * self.beta.cos() + e_s * self.beta.sin()))
    }

    /// ½⟨F ψ₊ iσ3 ψ₊~⟩.
    pub fn projected_interaction_density(&self, f: &Bivec) -> f64 {
        0.5 * f.dot(&self.projected_spin)
    }

    /// Null charge current J = qρu.
    pub fn current(&self, charge: f64) -> Vec4 {
        self.projected_current * charge
    }
}

pub fn local_observables(psi: &Spinor) -> Result<LocalObservables, DiracError> {
    let c = canonical_decompose(psi)?;
    let frame = crate::zitter::frame(&c.rotor);
    let projected = *psi * electron_projector();
    let gamma_plus = Multivector::gamma(0) + Multivector::gamma(2);
    Ok(LocalObservables {
        rho: c.rho,
        beta: c.beta,
        frame,
        v: frame[0],
        u: frame[0] + frame[2],
        s: frame[3] * 0.5,
        s_bar: c.rotor * i_sigma3() * c.rotor.reverse() * 0.5,
        projected_current: projected * gamma_plus * projected.reverse(),
        projected_spin: projected * i_sigma3() * projected.reverse(),
    })
}

/// Outcome of the electroweak gauge-element checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeReport {
    pub element: Multivector,
    /// max |U~γ0U − γ0|.
    pub mass_term_residual: f64,
    /// Largest non-even coefficient.
    pub odd_part: f64,
    /// |ρ − 1| for UU~ = ρ e^{iβ}.
    pub modulus_error: f64,
    /// max |(ψU)₊ − ψ₊U| over the unit spinor ψ = 1, i.e. the commutator with the electron projector.
    pub split_mixing: f64,
}

impl GaugeReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.mass_term_residual < tolerance && self.odd_part < tolerance && self.modulus_error < tolerance
    }
}

/// U~γ0U − γ0 and friends for an arbitrary right factor.
pub fn gauge_report(element: &Multivector) -> GaugeReport {
    let g0 = Multivector::gamma(0);
    let uu = *element * element.reverse();
    let projector = electron_projector();
    GaugeReport {
        element: *element,
        mass_term_residual: (element.reverse() * g0 * *element - g0).max_abs(),
        odd_part: (*element - element.even()).max_abs(),
        modulus_error: (uu.scalar_part().hypot(uu.pseudoscalar_part()) - 1.0).abs(),
        split_mixing: (*element * projector - projector * *element).max_abs(),
    }
}

/// U = exp(½ i θ) exp(½ i χ) with θ = θ_k σ_k and i the pseudoscalar.
pub fn electroweak_element(theta: [f64; 3], chi: f64) -> Multivector {
    let i = Multivector::pseudoscalar();
    let generator = (0..3).fold(Multivector::zero(), |acc, k| acc + i * Multivector::sigma(k + 1) * theta[k]);
    crate::sta::exp_bivector(&(generator * 0.5)) * duality_factor(0.5 * chi)
}

pub fn electroweak_gauge_check(theta: [f64; 3], chi: f64) -> GaugeReport {
    gauge_report(&electroweak_element(theta, chi))
}
