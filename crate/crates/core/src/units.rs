//! Physical constants and the conversion between natural and lab units.
//!
//! Dynamics run in natural units `c = ħ = m_e = 1`, where the zitter
//! frequency is 2 and the zitter radius is 1/2. Channeling runs in
//! eV, Å, s and MeV/c.

use std::f64::consts::PI;

/// Zitter angular frequency `2 m_e c²/ħ` in natural units.
pub const NATURAL_OMEGA_E: f64 = 2.0;
/// Zitter radius `ħ/(2 m_e c)` in natural units.
pub const NATURAL_LAMBDA_E: f64 = 0.5;
pub const NATURAL_ELECTRON_MASS: f64 = 1.0;

/// Constant set for lab-unit arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Electron rest energy (eV).
    pub electron_mass_ev: f64,
    /// Speed of light (Å/s).
    pub c_angstrom_per_s: f64,
    /// Planck constant times c (eV·Å).
    pub hc_ev_angstrom: f64,
}

impl Constants {
    /// Rounded values `m_e c² = 0.511 MeV`, `c = 3×10¹⁸ Å/s`.
    pub const ROUNDED: Constants = Constants {
        electron_mass_ev: 0.511e6,
        c_angstrom_per_s: 3.0e18,
        hc_ev_angstrom: 12_398.42,
    };

    /// CODATA 2018 values.
    pub const PRECISE: Constants = Constants {
        electron_mass_ev: 0.510_998_950_00e6,
        c_angstrom_per_s: 2.997_924_58e18,
        hc_ev_angstrom: 12_398.419_843_320_026,
    };

    /// ħc (eV·Å).
    pub fn hbar_c(&self) -> f64 {
        self.hc_ev_angstrom / (2.0 * PI)
    }

    /// Zitter radius ħ/(2 m_e c) in Å.
    pub fn lambda_e(&self) -> f64 {
        self.hbar_c() / (2.0 * self.electron_mass_ev)
    }

    /// Zitter angular frequency c/λ_e in s⁻¹ (the lightlike constraint ω λ = c).
    pub fn omega_e(&self) -> f64 {
        self.c_angstrom_per_s / self.lambda_e()
    }

    /// Length of one natural unit ħ/(m_e c) in Å.
    pub fn natural_length(&self) -> f64 {
        2.0 * self.lambda_e()
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::ROUNDED
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zitter_radius_and_frequency() {
        let k = Constants::ROUNDED;
        assert_relative_eq!(k.lambda_e(), 1.9308e-3, max_relative = 1e-4);
        assert_relative_eq!(k.omega_e() * k.lambda_e(), k.c_angstrom_per_s, max_relative = 1e-15);
        let precise = Constants::PRECISE;
        assert_relative_eq!(precise.omega_e(), 1.5527e21, max_relative = 1e-4);
        assert_relative_eq!(
            NATURAL_OMEGA_E * NATURAL_LAMBDA_E,
            1.0,
            max_relative = 1e-15
        );
    }
}
