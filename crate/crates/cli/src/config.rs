//! Run configuration: a flat JSON object whose every key is optional.
//!
//! Missing keys take the silicon ⟨110⟩ defaults; unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use zitter::channeling::ChannelParams;
use zitter::units::Constants;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config key `{key}` = {value}: {requirement}")]
    Range { key: &'static str, value: String, requirement: &'static str },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// c = ħ = m_e = 1.
    #[default]
    Natural,
    /// Seconds, ångström, MeV.
    Lab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ConstantSet {
    /// m_e c² = 0.511 MeV, c = 3e18 Å/s.
    #[default]
    Rounded,
    /// CODATA 2018.
    Precise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    #[default]
    Uniform,
    /// Screened string potential centred on the x3 axis.
    Lindhard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FreeModeChoice {
    #[default]
    Lightlike,
    Timelike,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RadialModelChoice {
    #[default]
    Mathieu,
    /// Keep the (1 + cos ω0 t) atomic factor in the stiffness.
    Longitudinal,
}

/// Every parameter of every subcommand. Lengths in Å, energies in eV,
/// momenta in MeV/c; dynamics parameters in natural units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub d_angstrom: f64,
    pub atomic_number: f64,
    /// String coupling Z e²/d; derived from the atomic number when absent.
    pub k_ev: Option<f64>,
    pub a_angstrom: f64,
    pub c2: f64,
    pub crystal_length_angstrom: f64,
    pub constants: ConstantSet,
    pub units: Units,

    pub p_min_mev: f64,
    pub p_max_mev: f64,
    pub scan_steps: usize,
    pub r0_min_angstrom: f64,
    pub r0_max_angstrom: f64,
    pub r0_samples: usize,
    pub ejection_factor: f64,

    /// Orbit radius for channel-orbit and the string field in simulate.
    pub r0_angstrom: f64,
    /// Beam momentum for channel-orbit; the resonant momentum when absent.
    pub p_mev: Option<f64>,
    /// Atomic spacings traversed by channel-orbit; the whole crystal when absent.
    pub orbit_atoms: Option<f64>,
    pub radial_model: RadialModelChoice,
    pub radial_steps_per_period: usize,

    pub mode: FreeModeChoice,
    pub field: FieldKind,
    pub field_e: [f64; 3],
    pub field_b: [f64; 3],
    /// Atomic periodicity along the string in the Lindhard field.
    pub longitudinal: bool,
    /// Initial velocity (units of c) for free runs.
    pub velocity: [f64; 3],
    /// Coefficients of γ0γ1, γ0γ2, γ0γ3, γ1γ2, γ1γ3, γ2γ3 in the initial rotor's generator.
    pub rotor_generator: [f64; 6],
    pub charge: f64,
    /// Zitter periods to integrate.
    pub periods: usize,
    pub steps_per_period: usize,
    pub record_every: usize,

    pub floquet_q_min: f64,
    pub floquet_q_max: f64,
    pub floquet_q_steps: usize,
    pub floquet_h_min: f64,
    pub floquet_h_max: f64,
    pub floquet_h_steps: usize,
    pub floquet_omega: f64,

    pub gauge_samples: usize,
    /// Scan worker threads; 0 uses every available core.
    pub workers: usize,
    /// Pass threshold for invariant drifts.
    pub tolerance: f64,
    pub seed: u64,
    /// CSV/JSON destination; standard output when absent.
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d_angstrom: 3.84,
            atomic_number: 14.0,
            k_ev: Some(52.5),
            a_angstrom: 0.19,
            c2: 3.0,
            crystal_length_angstrom: 1.0e4,
            constants: ConstantSet::Rounded,
            units: Units::Natural,
            p_min_mev: 79.0,
            p_max_mev: 83.0,
            scan_steps: 97,
            r0_min_angstrom: 0.15,
            r0_max_angstrom: 0.9,
            r0_samples: 64,
            ejection_factor: 8.0,
            r0_angstrom: 0.5,
            p_mev: None,
            orbit_atoms: None,
            radial_model: RadialModelChoice::Mathieu,
            radial_steps_per_period: 200,
            mode: FreeModeChoice::Lightlike,
            field: FieldKind::Uniform,
            field_e: [0.0, 0.0, 0.005],
            field_b: [0.0, 0.0, 0.1],
            longitudinal: false,
            velocity: [0.0; 3],
            rotor_generator: [0.0; 6],
            charge: -1.0,
            periods: 100,
            steps_per_period: 1000,
            record_every: 100,
            floquet_q_min: 0.5,
            floquet_q_max: 1.5,
            floquet_q_steps: 41,
            floquet_h_min: 0.0,
            floquet_h_max: 0.4,
            floquet_h_steps: 5,
            floquet_omega: 2.0,
            gauge_samples: 1000,
            workers: 0,
            tolerance: 1e-8,
            seed: 1,
            output: None,
        }
    }
}

fn positive(key: &'static str, value: f64) -> Result<(), ConfigError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Range { key, value: value.to_string(), requirement: "must be positive and finite" })
    }
}

fn finite(key: &'static str, values: &[f64]) -> Result<(), ConfigError> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(ConfigError::Range { key, value: v.to_string(), requirement: "must be finite" }),
        None => Ok(()),
    }
}

fn nonzero(key: &'static str, value: usize) -> Result<(), ConfigError> {
    if value > 0 {
        Ok(())
    } else {
        Err(ConfigError::Range { key, value: value.to_string(), requirement: "must be at least 1" })
    }
}

fn ordered(key: &'static str, low: f64, high: f64) -> Result<(), ConfigError> {
    if low <= high {
        Ok(())
    } else {
        Err(ConfigError::Range { key, value: high.to_string(), requirement: "must not be below the matching minimum" })
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        positive("d_angstrom", self.d_angstrom)?;
        positive("atomic_number", self.atomic_number)?;
        if let Some(k) = self.k_ev {
            positive("k_ev", k)?;
        }
        positive("a_angstrom", self.a_angstrom)?;
        positive("c2", self.c2)?;
        positive("crystal_length_angstrom", self.crystal_length_angstrom)?;
        positive("p_min_mev", self.p_min_mev)?;
        positive("p_max_mev", self.p_max_mev)?;
        ordered("p_max_mev", self.p_min_mev, self.p_max_mev)?;
        nonzero("scan_steps", self.scan_steps)?;
        positive("r0_min_angstrom", self.r0_min_angstrom)?;
        positive("r0_max_angstrom", self.r0_max_angstrom)?;
        ordered("r0_max_angstrom", self.r0_min_angstrom, self.r0_max_angstrom)?;
        nonzero("r0_samples", self.r0_samples)?;
        if !(self.ejection_factor > 1.0 && self.ejection_factor.is_finite()) {
            return Err(ConfigError::Range {
                key: "ejection_factor",
                value: self.ejection_factor.to_string(),
                requirement: "must exceed 1",
            });
        }
        positive("r0_angstrom", self.r0_angstrom)?;
        if let Some(p) = self.p_mev {
            positive("p_mev", p)?;
        }
        if let Some(n) = self.orbit_atoms {
            positive("orbit_atoms", n)?;
        }
        nonzero("radial_steps_per_period", self.radial_steps_per_period)?;
        finite("field_e", &self.field_e)?;
        finite("field_b", &self.field_b)?;
        finite("velocity", &self.velocity)?;
        if self.velocity.iter().map(|v| v * v).sum::<f64>() >= 1.0 {
            return Err(ConfigError::Range {
                key: "velocity",
                value: format!("{:?}", self.velocity),
                requirement: "speed must be below 1",
            });
        }
        finite("rotor_generator", &self.rotor_generator)?;
        finite("charge", &[self.charge])?;
        nonzero("periods", self.periods)?;
        nonzero("steps_per_period", self.steps_per_period)?;
        nonzero("record_every", self.record_every)?;
        positive("floquet_q_min", self.floquet_q_min)?;
        positive("floquet_q_max", self.floquet_q_max)?;
        ordered("floquet_q_max", self.floquet_q_min, self.floquet_q_max)?;
        nonzero("floquet_q_steps", self.floquet_q_steps)?;
        if !(self.floquet_h_min >= 0.0 && self.floquet_h_min.is_finite()) {
            return Err(ConfigError::Range {
                key: "floquet_h_min",
                value: self.floquet_h_min.to_string(),
                requirement: "must be non-negative",
            });
        }
        finite("floquet_h_max", &[self.floquet_h_max])?;
        ordered("floquet_h_max", self.floquet_h_min, self.floquet_h_max)?;
        nonzero("floquet_h_steps", self.floquet_h_steps)?;
        positive("floquet_omega", self.floquet_omega)?;
        nonzero("gauge_samples", self.gauge_samples)?;
        positive("tolerance", self.tolerance)?;
        Ok(())
    }

    pub fn channel_params(&self) -> ChannelParams {
        let mut params = ChannelParams::from_atomic_number(
            self.atomic_number,
            self.d_angstrom,
            self.a_angstrom,
            self.c2,
            self.crystal_length_angstrom,
        );
        if let Some(k) = self.k_ev {
            params.k = k;
        }
        params
    }

    pub fn physical_constants(&self) -> Constants {
        match self.constants {
            ConstantSet::Rounded => Constants::ROUNDED,
            ConstantSet::Precise => Constants::PRECISE,
        }
    }

    /// SHA-256 of the canonical JSON form, salted with the subcommand name.
    /// The output path is left out: it names a destination, not a computation.
    pub fn hash(&self, command: &str) -> String {
        let computation = RunConfig { output: None, ..self.clone() };
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        hasher.update([0u8]);
        hasher.update(computation.to_json().as_bytes());
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &str) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_string(), source })?;
    parse_config(&text)
}
