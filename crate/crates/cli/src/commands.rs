//! Subcommand bodies. Each writes a header, its table (to the configured
//! output file or inline) and a `#`-prefixed summary, and reports whether
//! every invariant held.

use std::f64::consts::PI;
use std::io::Write;

use zitter::channeling::{
    beam_kinematics, effective_radius, floquet_exponent, integrate_radial, momentum_band_estimate,
    momentum_scan, parametric_resonance, BeamParams, FloquetAgreement, RadialModel, RadialRun, ScanConfig,
};
use zitter::par::{self, Execution};
use zitter::sta::Multivector;
use zitter::units::Constants;
use zitter::zitter::{
    free_solution, integrate, observables_unchecked, zitter_period, FieldModel, FreeMode, IntegrateOptions,
    Monitors, NoField, ParticleState, Trajectory, UniformField, ZitterError,
};

use crate::checks::{self, Check};
use crate::config::{FieldKind, FreeModeChoice, RadialModelChoice, RunConfig, Units};
use crate::output::{header, num, Table};
use crate::CliError;

/// Where the table goes and what the run concluded.
pub struct Emit<'a> {
    pub out: &'a mut dyn Write,
    pub command: &'static str,
    pub hash: String,
    pub output: Option<String>,
}

impl Emit<'_> {
    fn begin(&mut self) -> Result<(), CliError> {
        header(self.out, self.command, &self.hash)?;
        Ok(())
    }

    fn table(&mut self, table: &Table) -> Result<(), CliError> {
        match &self.output {
            Some(path) => {
                let file = std::fs::File::create(path).map_err(|e| CliError::Output(path.clone(), e))?;
                let mut writer = std::io::BufWriter::new(file);
                header(&mut writer, self.command, &self.hash)?;
                table.write(&mut writer)?;
                writer.flush()?;
                writeln!(self.out, "# table: {path} ({} rows)", table.rows.len())?;
            }
            None => table.write(self.out)?,
        }
        Ok(())
    }

    fn note(&mut self, line: impl AsRef<str>) -> Result<(), CliError> {
        writeln!(self.out, "# {}", line.as_ref())?;
        Ok(())
    }
}

pub const TRAJECTORY_COLUMNS: [&str; 30] = [
    "tau", "phi", "z0", "z1", "z2", "z3", "p0", "p1", "p2", "p3", "m", "m1", "m2", "Phi", "kappa1_drift",
    "mass_integral_drift", "rotor_norm_drift", "null_drift", "spin_square", "gauge_drift", "energy", "s1", "s2",
    "s3", "r1", "r2", "r3", "max_drift", "closed_form_error", "energy_drift",
];

/// Scale factors (time, length, energy) from natural units to the chosen units.
fn unit_scales(units: Units, constants: &Constants) -> (f64, f64, f64) {
    match units {
        Units::Natural => (1.0, 1.0, 1.0),
        Units::Lab => {
            let length = constants.natural_length();
            (length / constants.c_angstrom_per_s, length, constants.electron_mass_ev * 1e-6)
        }
    }
}

struct RowContext<'a> {
    field: &'a dyn FieldModel,
    charge: f64,
    scales: (f64, f64, f64),
    energy0: Option<f64>,
}

fn trajectory_row(ctx: &RowContext, state: &ParticleState, monitors: Option<&Monitors>, closed_error: f64) -> Vec<f64> {
    let (time, length, energy) = ctx.scales;
    let obs = observables_unchecked(state, ctx.field, ctx.charge);
    let z = state.z.vector_components();
    let p = state.p.vector_components();
    let s = obs.spin_vector.vector_components();
    let r = obs.spin.inner(&state.p.vector_inverse()).vector_components();
    let nan = f64::NAN;
    let (drifts, max_drift, e, e_drift) = match monitors {
        Some(m) => {
            let drifts = [m.kappa1_drift, m.mass_integral_drift, m.rotor_norm_drift, m.null_drift, m.spin_square, m.gauge_drift];
            let max_drift = drifts[..5].iter().fold(0.0f64, |a, &b| a.max(b));
            let e_drift = match (m.energy, ctx.energy0) {
                (Some(e), Some(e0)) => (e - e0).abs() / e0.abs().max(1.0),
                _ => nan,
            };
            (drifts, max_drift, m.energy.map_or(nan, |v| v * energy), e_drift)
        }
        None => ([nan; 6], nan, nan, nan),
    };
    let mut row = vec![state.tau * time, state.phi];
    row.extend(z.iter().map(|v| v * length));
    row.extend(p.iter().map(|v| v * energy));
    row.extend([obs.m * energy, obs.m1 * energy, obs.m2 * energy, obs.phi_potential * energy]);
    row.extend(drifts);
    row.push(e);
    row.extend(&s[1..]);
    row.extend(r[1..].iter().map(|v| v * length));
    row.extend([max_drift, closed_error, e_drift]);
    row
}

fn trajectory_table(ctx: &RowContext, trajectory: &Trajectory, closed_errors: &[f64]) -> Table {
    let mut table = Table::new(&TRAJECTORY_COLUMNS);
    for (i, sample) in trajectory.samples.iter().enumerate() {
        let closed = closed_errors.get(i).copied().unwrap_or(f64::NAN);
        table.push(trajectory_row(ctx, &sample.state, Some(&sample.monitors), closed));
    }
    table
}

fn summarize_drifts(emit: &mut Emit, trajectory: &Trajectory, tolerance: f64) -> Result<bool, CliError> {
    let worst = checks::max_invariant_drift(trajectory);
    for (name, which) in ["kappa1", "mass_integral", "rotor_norm", "null_velocity", "spin_square"]
        .iter()
        .zip(checks::INVARIANTS)
    {
        emit.note(format!("max {name}_drift = {}", num(trajectory.max_monitor(which))))?;
    }
    emit.note(format!("max_drift = {} (tolerance {})", num(worst), num(tolerance)))?;
    Ok(worst <= tolerance)
}

pub fn free(emit: &mut Emit, cfg: &RunConfig) -> Result<bool, CliError> {
    emit.begin()?;
    let constants = cfg.physical_constants();
    let rotor = checks::initial_rotor(&cfg.velocity, &cfg.rotor_generator)?;
    let ctx = RowContext { field: &NoField, charge: cfg.charge, scales: unit_scales(cfg.units, &constants), energy0: None };
    match cfg.mode {
        FreeModeChoice::Lightlike => {
            let run = checks::free_comparison(rotor, cfg.charge, cfg.periods, cfg.steps_per_period, cfg.record_every)?;
            let errors: Vec<f64> = run
                .trajectory
                .samples
                .iter()
                .zip(&run.closed)
                .map(|(s, c)| (s.state.z - c.z).max_abs() / c.z.max_abs().max(1.0))
                .collect();
            emit.table(&trajectory_table(&ctx, &run.trajectory, &errors))?;
            emit.note(format!("mode = lightlike, periods = {}, steps_per_period = {}", cfg.periods, cfg.steps_per_period))?;
            let held = summarize_drifts(emit, &run.trajectory, cfg.tolerance)?;
            emit.note(format!("closed_form_error = {}", num(run.z_error)))?;
            emit.note(format!("helix_radius_error = {}", num(run.radius_error)))?;
            let matched = run.z_error <= cfg.tolerance;
            emit.note(format!("status = {}", if held && matched { "ok" } else { "FAIL" }))?;
            Ok(held && matched)
        }
        FreeModeChoice::Timelike => {
            // Timelike histories have no integrator counterpart: closed form only.
            let e = zitter::zitter::frame(&rotor);
            let spin0 = e[2] * e[1] * 0.5;
            let z0 = Multivector::zero();
            let dtau = zitter_period() / cfg.steps_per_period as f64;
            let mut table = Table::new(&TRAJECTORY_COLUMNS);
            let n = cfg.periods * cfg.steps_per_period;
            let mut step = 0;
            while step <= n {
                let state = free_solution(&e[0], &spin0, &z0, FreeMode::Timelike, step as f64 * dtau)?;
                table.push(trajectory_row(&ctx, &state, None, f64::NAN));
                step += cfg.record_every;
            }
            emit.table(&table)?;
            emit.note("mode = timelike, closed form only; drift columns are NaN")?;
            emit.note("status = ok")?;
            Ok(true)
        }
    }
}

pub fn simulate(emit: &mut Emit, cfg: &RunConfig) -> Result<bool, CliError> {
    emit.begin()?;
    let constants = cfg.physical_constants();
    let rotor = checks::initial_rotor(&cfg.velocity, &cfg.rotor_generator)?;
    let uniform = UniformField::from_electric_magnetic(cfg.field_e, cfg.field_b);
    let string = checks::lindhard_field(constants, cfg.channel_params(), cfg.longitudinal);
    let (field, z): (&dyn FieldModel, _) = match cfg.field {
        FieldKind::Uniform => (&uniform, Multivector::zero()),
        FieldKind::Lindhard => {
            let r0 = cfg.r0_angstrom / constants.natural_length();
            (&string, Multivector::vector([0.0, r0, 0.0, 0.0]))
        }
    };
    let state = ParticleState::consistent(rotor, z, field, cfg.charge, 0.0);
    let dtau = zitter_period() / cfg.steps_per_period as f64;
    let options = IntegrateOptions { record_every: cfg.record_every, ..Default::default() };
    let (trajectory, aborted) = match integrate(&state, field, cfg.charge, dtau, cfg.periods * cfg.steps_per_period, &options) {
        Ok(t) => (t, None),
        Err(ZitterError::Drift { step, monitor, value, prefix }) => (*prefix, Some(format!("{monitor:?} = {value:e} at step {step}"))),
        Err(e) => return Err(e.into()),
    };
    let energy0 = trajectory.samples.first().and_then(|s| s.monitors.energy);
    let ctx = RowContext { field, charge: cfg.charge, scales: unit_scales(cfg.units, &constants), energy0 };
    emit.table(&trajectory_table(&ctx, &trajectory, &[]))?;
    emit.note(format!("field = {:?}, periods = {}, steps_per_period = {}", cfg.field, cfg.periods, cfg.steps_per_period).to_lowercase())?;
    let mut held = summarize_drifts(emit, &trajectory, cfg.tolerance)?;
    if let Some(drift) = trajectory.max_energy_drift() {
        emit.note(format!("energy_drift = {}", num(drift)))?;
        held &= drift <= cfg.tolerance;
    }
    if let Some(reason) = aborted {
        emit.note(format!("aborted: {reason}"))?;
        held = false;
    }
    emit.note(format!("status = {}", if held { "ok" } else { "FAIL" }))?;
    Ok(held)
}

fn beam_for(cfg: &RunConfig, constants: &Constants) -> Result<BeamParams, CliError> {
    Ok(match cfg.p_mev {
        Some(p) => BeamParams::from_momentum(p, cfg.d_angstrom, constants)?,
        None => beam_kinematics(cfg.d_angstrom, constants)?.beam,
    })
}

pub fn channel_orbit(emit: &mut Emit, cfg: &RunConfig) -> Result<bool, CliError> {
    emit.begin()?;
    let constants = cfg.physical_constants();
    let params = cfg.channel_params();
    let beam = beam_for(cfg, &constants)?;
    let h = constants.lambda_e() / effective_radius(cfg.r0_angstrom, &params)?;
    let omega = beam.drive_frequency(&constants);
    let atoms = cfg.orbit_atoms.unwrap_or_else(|| params.atoms_in_crystal());
    let mut run = RadialRun::new(beam.omega0.powi(2), h, omega, atoms * 2.0 * PI / beam.omega0);
    run.model = match cfg.radial_model {
        RadialModelChoice::Mathieu => RadialModel::Mathieu,
        RadialModelChoice::Longitudinal => RadialModel::WithLongitudinal { omega0: beam.omega0 },
    };
    run.steps_per_period = cfg.radial_steps_per_period;
    run.record_every = cfg.record_every;
    let result = integrate_radial(&run)?;
    let time = match cfg.units {
        Units::Natural => beam.omega0,
        Units::Lab => 1.0,
    };
    let mut table = Table::new(&["t", "x", "envelope"]);
    for s in &result.samples {
        table.push(vec![s.t * time, s.x, s.envelope]);
    }
    emit.table(&table)?;
    let analytic = parametric_resonance(h, beam.omega0, omega - 2.0 * beam.omega0);
    let floquet = floquet_exponent(run.q, h, omega)?;
    emit.note(format!("p_MeV = {}", num(beam.p)))?;
    emit.note(format!("r0_angstrom = {}", num(cfg.r0_angstrom)))?;
    emit.note(format!("h = {}", num(h)))?;
    emit.note(format!("omega0 = {}", num(beam.omega0)))?;
    emit.note(format!("detuning = {}", num(omega - 2.0 * beam.omega0)))?;
    emit.note(format!("fitted_exponent = {} +- {}", num(result.exponent), num(result.exponent_stderr)))?;
    emit.note(format!("first_order_growth = {}", num(analytic.growth)))?;
    emit.note(format!("floquet_growth = {} ({:?})", num(floquet.growth()), floquet.agreement))?;
    emit.note(format!("growth_per_atom = {}", num(result.exponent * 2.0 * PI / beam.omega0)))?;
    emit.note(format!("steps_per_period = {}", result.steps_per_period))?;
    emit.note(format!("max_energy_change = {}", num(result.energy_drift)))?;
    let held = floquet.agreement != FloquetAgreement::Disagree;
    emit.note(format!("status = {}", if held { "ok" } else { "FAIL" }))?;
    Ok(held)
}

pub fn channel_scan(emit: &mut Emit, cfg: &RunConfig, execution: Execution) -> Result<bool, CliError> {
    emit.begin()?;
    let constants = cfg.physical_constants();
    let params = cfg.channel_params();
    let mut scan = ScanConfig::new(cfg.p_min_mev, cfg.p_max_mev, cfg.scan_steps);
    scan.r0_min = cfg.r0_min_angstrom;
    scan.r0_max = cfg.r0_max_angstrom;
    scan.r0_samples = cfg.r0_samples;
    scan.ejection_factor = cfg.ejection_factor;
    scan.params = params;
    scan.constants = constants;
    scan.execution = execution;
    let result = par::with_workers(cfg.workers, || momentum_scan(&scan))?;
    let mut table = Table::new(&["p_MeV", "growth_per_atom", "atoms_to_double", "ejected_fraction"]);
    for r in &result.rows {
        table.push(vec![r.p, r.growth_exponent_per_atom, r.atoms_to_double, r.ejected_fraction]);
    }
    emit.table(&table)?;
    let resonant = beam_kinematics(params.d, &constants)?.beam;
    let h = constants.lambda_e() / effective_radius(cfg.r0_angstrom, &params)?;
    emit.note(format!("predicted_center = {}", num(resonant.p)))?;
    emit.note(format!("band_estimate_hp = {} (h = {} at r0 = {})", num(momentum_band_estimate(h, resonant.p)), num(h), num(cfg.r0_angstrom)))?;
    for (name, peak) in [("ejection", result.ejection_peak), ("growth", result.growth_peak)] {
        match peak {
            Some(p) => emit.note(format!(
                "{name}_peak: center = {}, fwhm = {}, peak = {}, regions = {}",
                num(p.center),
                p.fwhm.map_or("unresolved".to_string(), num),
                num(p.peak_value),
                p.regions
            ))?,
            None => emit.note(format!("{name}_peak: none"))?,
        }
    }
    emit.note(format!("route_disagreements = {}", result.route_disagreements))?;
    let held = result.route_disagreements == 0;
    emit.note(format!("status = {}", if held { "ok" } else { "FAIL" }))?;
    Ok(held)
}

fn grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![min];
    }
    (0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect()
}

pub fn floquet(emit: &mut Emit, cfg: &RunConfig) -> Result<bool, CliError> {
    emit.begin()?;
    let points: Vec<(f64, f64)> = grid(cfg.floquet_h_min, cfg.floquet_h_max, cfg.floquet_h_steps)
        .into_iter()
        .flat_map(|h| grid(cfg.floquet_q_min, cfg.floquet_q_max, cfg.floquet_q_steps).into_iter().map(move |q| (q, h)))
        .collect();
    let omega = cfg.floquet_omega;
    let results = par::with_workers(cfg.workers, || {
        par::map(&points, Execution::Parallel, |&(q, h)| floquet_exponent(q, h, omega))
    });
    let mut table = Table::new(&["q", "h", "omega", "Re_s", "Im_s"]);
    let mut notes = Vec::new();
    let mut unavailable = 0;
    for (&(q, h), result) in points.iter().zip(results) {
        let r = result?;
        table.push(vec![q, h, omega, r.s.re, r.s.im]);
        match r.agreement {
            FloquetAgreement::Agree => {}
            FloquetAgreement::HillUnavailable => unavailable += 1,
            FloquetAgreement::Disagree => notes.push(format!(
                "route-disagreement: q = {}, h = {}, monodromy_half_trace = {}, hill_half_trace = {}",
                num(q),
                num(h),
                num(r.monodromy_half_trace),
                r.hill_half_trace.map_or("none".to_string(), num)
            )),
        }
    }
    emit.table(&table)?;
    for line in &notes {
        emit.note(line)?;
    }
    emit.note(format!("points = {}, route_disagreements = {}, hill_unavailable = {}", points.len(), notes.len(), unavailable))?;
    emit.note(format!("status = {}", if notes.is_empty() { "ok" } else { "FAIL" }))?;
    Ok(notes.is_empty())
}

fn check_table(emit: &mut Emit, checks: &[Check]) -> Result<bool, CliError> {
    writeln!(emit.out, "check,max_residual,tolerance,status")?;
    for c in checks {
        writeln!(emit.out, "{},{},{},{}", c.name, num(c.max_residual), num(c.tolerance), if c.pass { "pass" } else { "FAIL" })?;
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    emit.note(format!("passed {passed}/{}", checks.len()))?;
    Ok(passed == checks.len())
}

/// Periods of the zitter runs inside `selftest`.
pub const SELFTEST_PERIODS: usize = 20;

pub fn selftest(emit: &mut Emit, cfg: &RunConfig) -> Result<bool, CliError> {
    emit.begin()?;
    let mut suite = checks::algebra_checks(cfg.seed, 1000);
    suite.extend(checks::dynamics_checks(SELFTEST_PERIODS, cfg.steps_per_period)?);
    suite.extend(checks::floquet_checks());
    suite.extend(checks::dirac_checks(cfg.seed, cfg.gauge_samples));
    let discrepancy = checks::modulation_discrepancy(&cfg.channel_params(), &cfg.physical_constants(), cfg.r0_angstrom)?;
    suite.push(Check::below(
        "modulation_monodromy_vs_unshifted",
        (discrepancy.computed_monodromy_over_radial - 1.0).abs(),
        1e-3,
    ));
    let held = check_table(emit, &suite)?;
    for line in discrepancy.report_lines() {
        emit.note(line)?;
    }
    emit.note(format!("status = {}", if held { "ok" } else { "FAIL" }))?;
    Ok(held)
}

pub fn dirac_check(emit: &mut Emit, cfg: &RunConfig, json: bool) -> Result<bool, CliError> {
    let suite = checks::dirac_checks(cfg.seed, cfg.gauge_samples);
    let held = suite.iter().all(|c| c.pass);
    if json {
        let passed = suite.iter().filter(|c| c.pass).count();
        let document = serde_json::json!({
            "tool": format!("zitter {}", crate::output::VERSION),
            "command": emit.command,
            "config_hash": emit.hash,
            "checks": suite,
            "passed": passed,
            "total": suite.len(),
        });
        let text = serde_json::to_string_pretty(&document).expect("report serializes");
        match emit.output.clone() {
            Some(path) => {
                std::fs::write(&path, format!("{text}\n")).map_err(|e| CliError::Output(path.clone(), e))?;
                emit.begin()?;
                emit.note(format!("report: {path}"))?;
                emit.note(format!("passed {passed}/{}", suite.len()))?;
            }
            None => writeln!(emit.out, "{text}")?,
        }
        return Ok(held);
    }
    emit.begin()?;
    check_table(emit, &suite)
}
