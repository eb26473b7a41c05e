//! End-to-end invocations of the command-line front end, run in-process.

use std::path::PathBuf;

use zitter_cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zitter").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zitter-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    let index = header.split(',').position(|c| c == name).unwrap();
    data_rows(text).iter().map(|r| r[index]).collect()
}

#[test]
fn every_output_starts_with_version_and_hash() {
    for args in [
        vec!["free", "--periods", "2"],
        vec!["floquet", "--q-steps", "3", "--h-steps", "2"],
        vec!["dirac-check", "--samples", "20"],
        vec!["channel-orbit", "--atoms", "40"],
    ] {
        let (code, out, _) = invoke(&args);
        assert_eq!(code, EXIT_OK, "{args:?}");
        let mut lines = out.lines();
        assert!(lines.next().unwrap().starts_with("# zitter "));
        assert!(lines.next().unwrap().starts_with("# command: "));
        let hash = lines.next().unwrap().strip_prefix("# config-hash: ").unwrap();
        assert_eq!(hash.len(), 64);
    }
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let args = ["channel-scan", "--p-min", "80.5", "--p-max", "81.2", "--steps", "15", "--r0-samples", "8"];
    let (a, b) = (invoke(&args), invoke(&args));
    assert_eq!(a.1, b.1);
    let sequential: Vec<&str> = args.iter().copied().chain(["--sequential"]).collect();
    assert_eq!(invoke(&sequential).1, a.1);

    let first = scratch("free-a.csv");
    let second = scratch("free-b.csv");
    for path in [&first, &second] {
        let (code, _, _) = invoke(&["free", "--periods", "3", "--output", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
    }
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    assert!(std::fs::read_to_string(&first).unwrap().starts_with("# zitter "));
}

#[test]
fn usage_and_config_errors_exit_two() {
    let (code, _, err) = invoke(&["no-such-command"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
    let (code, _, err) = invoke(&["free", "--periods", "0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("periods"), "{err}");

    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"d_angstrom": -1}"#).unwrap();
    let (code, _, err) = invoke(&["channel-scan", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("d_angstrom"), "{err}");
    std::fs::write(&path, r#"{"stepz": 3}"#).unwrap();
    let (code, _, err) = invoke(&["selftest", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("stepz"), "{err}");
}

#[test]
fn flags_override_config_file() {
    let path = scratch("scan.json");
    std::fs::write(&path, r#"{"p_min_mev": 80, "p_max_mev": 82, "scan_steps": 5, "r0_samples": 4}"#).unwrap();
    let (_, from_file, _) = invoke(&["channel-scan", "--config", path.to_str().unwrap()]);
    assert_eq!(data_rows(&from_file).len(), 5);
    let (_, overridden, _) = invoke(&["channel-scan", "--config", path.to_str().unwrap(), "--steps", "7"]);
    assert_eq!(data_rows(&overridden).len(), 7);
    assert_eq!(column(&overridden, "p_MeV")[0], 80.0);
}

#[test]
fn invariant_failure_exits_one() {
    // A tolerance no integrator meets.
    let (code, out, _) = invoke(&["free", "--periods", "2", "--tolerance", "1e-300"]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.contains("status = FAIL"));
}

#[test]
fn scan_of_97_momenta_reports_center_and_width() {
    let (code, out, _) = invoke(&["channel-scan", "--p-min", "79", "--p-max", "83", "--steps", "97"]);
    assert_eq!(code, EXIT_OK);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 97);
    assert!(rows.iter().all(|r| r.len() == 4));
    assert!(out.contains("# ejection_peak: center = "));
    assert!(out.contains("fwhm = "));
    assert!(out.contains("# route_disagreements = 0"));
}

#[test]
fn lightlike_free_run_keeps_drift_below_threshold() {
    let (code, out, _) = invoke(&["free", "--mode", "lightlike", "--periods", "100"]);
    assert_eq!(code, EXIT_OK);
    let drift = column(&out, "max_drift");
    assert_eq!(drift.len(), 1001);
    assert!(drift.iter().all(|d| *d < 1e-8));
    assert!(column(&out, "closed_form_error").iter().all(|e| *e < 1e-9));
}

#[test]
fn timelike_free_run_is_closed_form_only() {
    let (code, out, _) = invoke(&["free", "--mode", "timelike", "--periods", "1", "--record-every", "100"]);
    assert_eq!(code, EXIT_OK);
    assert!(column(&out, "kappa1_drift").iter().all(|d| d.is_nan()));
    // Rest-frame timelike history: the event moves along γ0 only.
    let z0 = column(&out, "z0");
    let tau = column(&out, "tau");
    assert!(z0.iter().zip(&tau).all(|(z, t)| (z - t).abs() < 1e-12));
}

#[test]
fn lab_units_rescale_time_and_length() {
    let (_, natural, _) = invoke(&["free", "--periods", "1", "--record-every", "500"]);
    let (_, lab, _) = invoke(&["free", "--periods", "1", "--record-every", "500", "--units", "lab"]);
    let (tn, tl) = (column(&natural, "tau"), column(&lab, "tau"));
    let constants = zitter::units::Constants::ROUNDED;
    let seconds = constants.natural_length() / constants.c_angstrom_per_s;
    assert!((tl[1] / tn[1] - seconds).abs() < 1e-12 * seconds);
    let (rn, rl) = (column(&natural, "r1"), column(&lab, "r1"));
    assert!((rl[1] - rn[1] * constants.natural_length()).abs() < 1e-15);
}

#[test]
fn string_field_simulation_conserves_energy() {
    let (code, out, _) = invoke(&["simulate", "--field", "lindhard", "--r0", "0.4", "--periods", "10", "--steps-per-period", "200"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(column(&out, "energy_drift").iter().all(|d| *d < 1e-8));
}

#[test]
fn floquet_map_has_fixed_columns() {
    let (code, out, _) = invoke(&["floquet", "--q-min", "0.9", "--q-max", "1.1", "--q-steps", "5", "--h-min", "0.1", "--h-max", "0.1", "--h-steps", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("q,h,omega,Re_s,Im_s"));
    let growth = column(&out, "Re_s");
    // q = 1 at ω = 2 sits at the centre of the first instability band.
    assert!(growth[2] > 0.02 && growth[2] >= growth[0] && growth[2] >= growth[4]);
}

#[test]
fn dirac_check_json_report() {
    let path = scratch("dirac.json");
    let (code, out, _) = invoke(&["dirac-check", "--json", "--samples", "50", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("# zitter "));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["passed"], report["total"]);
    assert_eq!(report["config_hash"].as_str().unwrap().len(), 64);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"electroweak_mass_term"));
}
