//! Real Clifford algebra of Minkowski space, signature (+,−,−,−).
//!
//! A [`Multivector`] stores 16 coefficients in the fixed blade order
//! `1, γ0, γ1, γ2, γ3, γ01, γ02, γ03, γ12, γ13, γ23, γ012, γ013, γ023, γ123, γ0123`.
//! Vectors, bivectors, rotors and spinors are all plain multivectors; the
//! constructors and checks below enforce their grade structure.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

pub type Vec4 = Multivector;
pub type Bivec = Multivector;
pub type Rotor = Multivector;
pub type Spinor = Multivector;

/// Largest tolerated `|R R~ − 1|` before a rotor is rejected instead of renormalized.
pub const ROTOR_DRIFT_LIMIT: f64 = 1e-9;
/// Tolerance on `v·v = 1` for observer velocities.
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StaError {
    #[error("grade {0} is outside 0..=4")]
    GradeOutOfRange(usize),
    #[error("spinor is singular: psi psi~ has vanishing scalar and pseudoscalar parts")]
    SingularSpinor,
    #[error("velocity is not unit timelike (v.v = {0})")]
    NotUnitTimelike(f64),
    #[error("velocity is not future pointing (v.g0 = {0})")]
    PastPointing(f64),
    #[error("rotor drift |R R~ - 1| = {0:e} exceeds the renormalization limit")]
    RotorDrift(f64),
    #[error("frame vectors do not determine a rotor")]
    DegenerateFrame,
}

/// Bitmask (bit μ set when γ_μ is a factor) of each canonical blade.
pub const BLADE_MASKS: [u8; 16] = [0, 1, 2, 4, 8, 3, 5, 9, 6, 10, 12, 7, 11, 13, 14, 15];

const fn mask_to_index(mask: u8) -> usize {
    let mut i = 0;
    while i < 16 {
        if BLADE_MASKS[i] == mask {
            return i;
        }
        i += 1;
    }
    panic!("mask outside the algebra");
}

const fn blade_grade(mask: u8) -> usize {
    mask.count_ones() as usize
}

/// Sign of the product of two canonical blades.
const fn blade_sign(a: u8, b: u8) -> f64 {
    // reordering: every generator of b must hop over the higher generators of a
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    let mut sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
    // γ1², γ2², γ3² = −1
    let common = a & b & 0b1110;
    if common.count_ones() % 2 == 1 {
        sign = -sign;
    }
    sign
}

const fn build_table() -> [[(u8, f64); 16]; 16] {
    let mut table = [[(0u8, 0.0f64); 16]; 16];
    let mut i = 0;
    while i < 16 {
        let mut j = 0;
        while j < 16 {
            let (a, b) = (BLADE_MASKS[i], BLADE_MASKS[j]);
            table[i][j] = (mask_to_index(a ^ b) as u8, blade_sign(a, b));
            j += 1;
        }
        i += 1;
    }
    table
}

/// `PRODUCT[i][j] = (k, sign)` with `blade_i blade_j = sign · blade_k`.
pub static PRODUCT: [[(u8, f64); 16]; 16] = build_table();

const fn build_grades() -> [usize; 16] {
    let mut g = [0; 16];
    let mut i = 0;
    while i < 16 {
        g[i] = blade_grade(BLADE_MASKS[i]);
        i += 1;
    }
    g
}

pub static GRADE_OF: [usize; 16] = build_grades();

#[derive(Clone, Copy, PartialEq, Default)]
pub struct Multivector(pub [f64; 16]);

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 16] = [
            "1", "g0", "g1", "g2", "g3", "g01", "g02", "g03", "g12", "g13", "g23", "g012",
            "g013", "g023", "g123", "g0123",
        ];
        let mut first = true;
        for (c, name) in self.0.iter().zip(NAMES) {
            if *c != 0.0 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{c:e}*{name}")?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Multivector {
    pub const fn zero() -> Self {
        Self([0.0; 16])
    }

    pub const fn from_coeffs(coeffs: [f64; 16]) -> Self {
        Self(coeffs)
    }

    pub fn scalar(s: f64) -> Self {
        let mut m = Self::zero();
        m.0[0] = s;
        m
    }

    pub fn blade(index: usize) -> Self {
        let mut m = Self::zero();
        m.0[index] = 1.0;
        m
    }

    /// γ_μ for μ ∈ 0..4.
    pub fn gamma(mu: usize) -> Self {
        Self::blade(1 + mu)
    }

    /// Vector with contravariant components x^μ.
    pub fn vector(x: [f64; 4]) -> Self {
        let mut m = Self::zero();
        m.0[1..5].copy_from_slice(&x);
        m
    }

    /// Relative vector σ_k = γ_k γ_0, k ∈ 1..=3.
    pub fn sigma(k: usize) -> Self {
        Self::gamma(k) * Self::gamma(0)
    }

    /// Unit pseudoscalar i = γ0γ1γ2γ3.
    pub fn pseudoscalar() -> Self {
        Self::blade(15)
    }

    /// Bivector `Σ E_k σ_k + i Σ B_k σ_k`.
    pub fn from_electric_magnetic(e: [f64; 3], b: [f64; 3]) -> Self {
        let i = Self::pseudoscalar();
        let mut f = Self::zero();
        for k in 0..3 {
            let s = Self::sigma(k + 1);
            f += s * e[k] + i * s * b[k];
        }
        f
    }

    /// Inverse of [`Multivector::from_electric_magnetic`] relative to γ0.
    pub fn electric_magnetic(&self) -> ([f64; 3], [f64; 3]) {
        let i = Self::pseudoscalar();
        let mut e = [0.0; 3];
        let mut b = [0.0; 3];
        for k in 0..3 {
            let s = Self::sigma(k + 1);
            e[k] = (*self * s).scalar_part();
            b[k] = -(*self * i * s).scalar_part();
        }
        (e, b)
    }

    /// Relative 3-vector of a bivector that lies in the σ_k span.
    pub fn relative(&self) -> [f64; 3] {
        self.electric_magnetic().0
    }

    pub fn coeffs(&self) -> &[f64; 16] {
        &self.0
    }

    pub fn vector_components(&self) -> [f64; 4] {
        [self.0[1], self.0[2], self.0[3], self.0[4]]
    }

    pub fn scalar_part(&self) -> f64 {
        self.0[0]
    }

    pub fn pseudoscalar_part(&self) -> f64 {
        self.0[15]
    }

    /// ⟨M⟩_k, rejecting k > 4.
    pub fn grade(&self, k: usize) -> Result<Self, StaError> {
        if k > 4 {
            return Err(StaError::GradeOutOfRange(k));
        }
        Ok(self.part(k))
    }

    /// ⟨M⟩_k for k known to be in range; any other k yields zero.
    pub fn part(&self, k: usize) -> Self {
        let mut m = Self::zero();
        for i in 0..16 {
            if GRADE_OF[i] == k {
                m.0[i] = self.0[i];
            }
        }
        m
    }

    pub fn even(&self) -> Self {
        self.part(0) + self.part(2) + self.part(4)
    }

    pub fn reverse(&self) -> Self {
        let mut m = *self;
        for i in 0..16 {
            if matches!(GRADE_OF[i], 2 | 3) {
                m.0[i] = -m.0[i];
            }
        }
        m
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    /// Euclidean norm of the coefficient array.
    pub fn coeff_norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// True when every coefficient outside grade `k` is below `tol`.
    pub fn is_grade(&self, k: usize, tol: f64) -> bool {
        (0..16).all(|i| GRADE_OF[i] == k || self.0[i].abs() <= tol)
    }

    /// Graded inner product: ⟨A_r B_s⟩_{|r−s|}, zero when either factor is scalar.
    pub fn inner(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 1..=4 {
            let a = self.part(r);
            if a.is_zero() {
                continue;
            }
            for s in 1..=4 {
                let b = other.part(s);
                if b.is_zero() {
                    continue;
                }
                out += (a * b).part(r.abs_diff(s));
            }
        }
        out
    }

    /// Graded outer product: ⟨A_r B_s⟩_{r+s}.
    pub fn outer(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..=4 {
            let a = self.part(r);
            if a.is_zero() {
                continue;
            }
            for s in 0..=(4 - r) {
                let b = other.part(s);
                if b.is_zero() {
                    continue;
                }
                out += (a * b).part(r + s);
            }
        }
        out
    }

    /// Commutator product (AB − BA)/2.
    pub fn commutator(&self, other: &Self) -> Self {
        (*self * *other - *other * *self) * 0.5
    }

    /// Scalar product ⟨AB⟩_0, used for vector·vector and bivector·bivector.
    pub fn dot(&self, other: &Self) -> f64 {
        (*self * *other).scalar_part()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0.0)
    }

    /// Inverse of a vector with nonzero square.
    pub fn vector_inverse(&self) -> Self {
        *self / self.dot(self)
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        geometric_product(&self, &rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for c in self.0.iter_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

impl Div<f64> for Multivector {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

pub fn geometric_product(a: &Multivector, b: &Multivector) -> Multivector {
    let mut out = [0.0; 16];
    for (i, &x) in a.0.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let row = &PRODUCT[i];
        for (j, &y) in b.0.iter().enumerate() {
            if y == 0.0 {
                continue;
            }
            let (k, sign) = row[j];
            out[k as usize] += sign * x * y;
        }
    }
    Multivector(out)
}

/// exp(B) for a bivector by scaling, a truncated series and repeated squaring.
pub fn exp_bivector(b: &Bivec) -> Rotor {
    let norm = b.coeff_norm();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale >= 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = *b * scale;
    let mut term = Multivector::scalar(1.0);
    let mut sum = term;
    for n in 1..=20 {
        term = term * x / n as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Accepts a rotor with small drift and rescales it to unit norm.
pub fn normalize_rotor(r: &Rotor) -> Result<Rotor, StaError> {
    let rr = *r * r.reverse();
    let drift = (rr - Multivector::scalar(1.0)).max_abs();
    if drift > ROTOR_DRIFT_LIMIT {
        return Err(StaError::RotorDrift(drift));
    }
    Ok(r.even() / rr.scalar_part().sqrt())
}

/// R M R~ after renormalizing R.
pub fn sandwich(r: &Rotor, m: &Multivector) -> Result<Multivector, StaError> {
    let r = normalize_rotor(r)?;
    Ok(r * *m * r.reverse())
}

/// R M R~ with no normalization check.
pub fn sandwich_unchecked(r: &Rotor, m: &Multivector) -> Multivector {
    *r * *m * r.reverse()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalSpinor {
    pub rho: f64,
    pub beta: f64,
    pub rotor: Rotor,
}

/// Factor ψ = (ρ e^{iβ})^{1/2} R with β ∈ (−π, π].
pub fn canonical_decompose(psi: &Spinor) -> Result<CanonicalSpinor, StaError> {
    let pp = *psi * psi.reverse();
    let (alpha, dual) = (pp.scalar_part(), pp.pseudoscalar_part());
    let rho = alpha.hypot(dual);
    if rho == 0.0 || !rho.is_finite() {
        return Err(StaError::SingularSpinor);
    }
    let mut beta = dual.atan2(alpha);
    if beta <= -PI {
        beta = PI;
    }
    let rotor = duality_factor(-beta / 2.0) * *psi / rho.sqrt();
    Ok(CanonicalSpinor { rho, beta, rotor })
}

/// (ρ e^{iβ})^{1/2} R.
pub fn compose_spinor(rho: f64, beta: f64, rotor: &Rotor) -> Spinor {
    duality_factor(beta / 2.0) * *rotor * rho.sqrt()
}

/// e^{iθ} = cos θ + i sin θ.
pub fn duality_factor(theta: f64) -> Multivector {
    Multivector::scalar(theta.cos()) + Multivector::pseudoscalar() * theta.sin()
}

fn require_unit_timelike(v: &Vec4) -> Result<(), StaError> {
    let vv = v.dot(v);
    if (vv - 1.0).abs() > UNIT_TOLERANCE {
        return Err(StaError::NotUnitTimelike(vv));
    }
    Ok(())
}

/// Split of a bivector relative to observer v: F = E_v + i B_v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSplit {
    pub electric: Bivec,
    pub magnetic: Bivec,
}

pub fn split_bivector(f: &Bivec, v: &Vec4) -> Result<FieldSplit, StaError> {
    require_unit_timelike(v)?;
    let vfv = *v * *f * *v;
    let electric = (*f - vfv) * 0.5;
    let dual_magnetic = (*f + vfv) * 0.5;
    let magnetic = -(Multivector::pseudoscalar() * dual_magnetic);
    Ok(FieldSplit { electric, magnetic })
}

/// Rotor L with L γ0 L~ = v, the pure boost from γ0 to v.
pub fn boost_from_velocity(v: &Vec4) -> Result<Rotor, StaError> {
    require_unit_timelike(v)?;
    let v0 = v.vector_components()[0];
    if v0 <= 0.0 {
        return Err(StaError::PastPointing(v0));
    }
    let numerator = Multivector::scalar(1.0) + *v * Multivector::gamma(0);
    Ok(numerator / (2.0 * (1.0 + v0)).sqrt())
}

/// Rotor R with R γ_μ R~ = e_μ for a right-handed orthonormal frame.
pub fn rotor_from_frame(frame: &[Vec4; 4]) -> Result<Rotor, StaError> {
    // R ∝ Σ e_μ X γ^μ for any even X with nonzero result
    let reciprocal = [
        Multivector::gamma(0),
        -Multivector::gamma(1),
        -Multivector::gamma(2),
        -Multivector::gamma(3),
    ];
    let mut best = Multivector::zero();
    let mut best_norm = 0.0;
    for index in [0usize, 5, 6, 7, 8, 9, 10, 15] {
        let x = Multivector::blade(index);
        let mut candidate = Multivector::zero();
        for mu in 0..4 {
            candidate += frame[mu] * x * reciprocal[mu];
        }
        let n = candidate.coeff_norm();
        if n > best_norm {
            best_norm = n;
            best = candidate;
        }
    }
    if best_norm < 1e-12 {
        return Err(StaError::DegenerateFrame);
    }
    // the candidate is R(a − b i); the duality factor drops out of the canonical rotor
    let rotor = canonical_decompose(&best.even())?.rotor;
    for mu in 0..4 {
        let rebuilt = sandwich_unchecked(&rotor, &Multivector::gamma(mu));
        if (rebuilt - frame[mu]).max_abs() > 1e-8 * frame[mu].max_abs().max(1.0) {
            return Err(StaError::DegenerateFrame);
        }
    }
    Ok(rotor)
}

/// Independent reference product built from generator index lists, for
/// cross-checking the multiplication table.
pub mod oracle {
    use super::{Multivector, BLADE_MASKS};

    /// Generator indices of each canonical blade, in ascending order.
    fn generators(index: usize) -> Vec<usize> {
        let mask = BLADE_MASKS[index];
        (0..4).filter(|mu| mask & (1 << mu) != 0).collect()
    }

    /// Brute force: concatenate index lists, bubble sort counting swaps,
    /// contract equal neighbours with the metric.
    pub fn blade_product(i: usize, j: usize) -> (usize, f64) {
        let mut list = generators(i);
        list.extend(generators(j));
        let mut sign = 1.0;
        loop {
            let mut changed = false;
            let mut k = 0;
            while k + 1 < list.len() {
                if list[k] > list[k + 1] {
                    list.swap(k, k + 1);
                    sign = -sign;
                    changed = true;
                } else if list[k] == list[k + 1] {
                    if list[k] != 0 {
                        sign = -sign;
                    }
                    list.drain(k..k + 2);
                    changed = true;
                    continue;
                }
                k += 1;
            }
            if !changed {
                break;
            }
        }
        let index = (0..16).find(|&b| generators(b) == list).unwrap();
        (index, sign)
    }

    pub fn product(a: &Multivector, b: &Multivector) -> Multivector {
        let mut out = Multivector::zero();
        for i in 0..16 {
            for j in 0..16 {
                let (k, s) = blade_product(i, j);
                out.0[k] += s * a.0[i] * b.0[j];
            }
        }
        out
    }
}
