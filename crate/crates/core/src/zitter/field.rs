//! Electromagnetic field models evaluated at spacetime events.

use crate::sta::{Bivec, Multivector, Vec4};

/// Metric signs g^{μμ}.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// A field F(x) with coordinate partials ∂_μ F. Evaluators must be pure.
pub trait FieldModel: Sync {
    fn field(&self, x: &Vec4) -> Bivec;

    /// `[∂_0 F, ∂_1 F, ∂_2 F, ∂_3 F]` at `x`.
    fn partials(&self, x: &Vec4) -> [Bivec; 4];

    /// True when F does not depend on position.
    fn is_uniform(&self) -> bool {
        false
    }

    /// Potential energy V(x) of the particle when the field derives from a static potential.
    fn potential_energy(&self, _x: &Vec4) -> Option<f64> {
        None
    }

    /// (a·∇)F = Σ a^μ ∂_μ F.
    fn directional(&self, x: &Vec4, a: &Vec4) -> Bivec {
        let d = self.partials(x);
        let c = a.vector_components();
        (0..4).fold(Multivector::zero(), |acc, mu| acc + d[mu] * c[mu])
    }

    /// ∇(B·F) = Σ γ^μ ⟨B ∂_μ F⟩ for a fixed bivector B.
    fn gradient_of_product(&self, x: &Vec4, b: &Bivec) -> Vec4 {
        let d = self.partials(x);
        let mut comps = [0.0; 4];
        for mu in 0..4 {
            comps[mu] = METRIC[mu] * b.dot(&d[mu]);
        }
        Multivector::vector(comps)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoField;

impl FieldModel for NoField {
    fn field(&self, _x: &Vec4) -> Bivec {
        Multivector::zero()
    }
    fn partials(&self, _x: &Vec4) -> [Bivec; 4] {
        [Multivector::zero(); 4]
    }
    fn is_uniform(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UniformField(pub Bivec);

impl UniformField {
    /// Field with lab electric and magnetic components relative to γ0.
    pub fn from_electric_magnetic(e: [f64; 3], b: [f64; 3]) -> Self {
        Self(Multivector::from_electric_magnetic(e, b))
    }
}

impl FieldModel for UniformField {
    fn field(&self, _x: &Vec4) -> Bivec {
        self.0
    }
    fn partials(&self, _x: &Vec4) -> [Bivec; 4] {
        [Multivector::zero(); 4]
    }
    fn is_uniform(&self) -> bool {
        true
    }
}

/// F(x) = F_c + Σ x^μ G_μ, a field with constant gradient.
#[derive(Debug, Clone, Copy)]
pub struct LinearField {
    pub constant: Bivec,
    pub slopes: [Bivec; 4],
}

impl FieldModel for LinearField {
    fn field(&self, x: &Vec4) -> Bivec {
        let c = x.vector_components();
        (0..4).fold(self.constant, |acc, mu| acc + self.slopes[mu] * c[mu])
    }
    fn partials(&self, _x: &Vec4) -> [Bivec; 4] {
        self.slopes
    }
}

/// A static scalar potential energy V(**x**) in the γ0 frame.
pub trait Potential: Sync {
    fn value(&self, x: [f64; 3]) -> f64;
    fn gradient(&self, x: [f64; 3]) -> [f64; 3];
    fn hessian(&self, x: [f64; 3]) -> [[f64; 3]; 3];
}

/// Field of the four-potential `qA = V γ0`, so that `qF = ∇V∧γ0` and `q**E** = −∇V`.
#[derive(Debug, Clone, Copy)]
pub struct StaticPotentialField<P> {
    pub potential: P,
    pub charge: f64,
}

fn spatial(x: &Vec4) -> [f64; 3] {
    let c = x.vector_components();
    [c[1], c[2], c[3]]
}

impl<P: Potential> StaticPotentialField<P> {
    /// Lab electric field E = −∇V/q.
    pub fn electric(&self, x: &Vec4) -> [f64; 3] {
        self.potential.gradient(spatial(x)).map(|g| -g / self.charge)
    }
}

impl<P: Potential> FieldModel for StaticPotentialField<P> {
    fn field(&self, x: &Vec4) -> Bivec {
        Multivector::from_electric_magnetic(self.electric(x), [0.0; 3])
    }
    fn partials(&self, x: &Vec4) -> [Bivec; 4] {
        let h = self.potential.hessian(spatial(x));
        let mut out = [Multivector::zero(); 4];
        for j in 0..3 {
            let column = [0, 1, 2].map(|k| -h[j][k] / self.charge);
            out[j + 1] = Multivector::from_electric_magnetic(column, [0.0; 3]);
        }
        out
    }
    fn potential_energy(&self, x: &Vec4) -> Option<f64> {
        Some(self.potential.value(spatial(x)))
    }
}
