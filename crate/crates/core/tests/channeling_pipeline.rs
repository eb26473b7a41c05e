//! End-to-end channeling checks across modules: string averaging, kinematics,
//! Floquet analysis, radial integration and the momentum scan.

use std::f64::consts::PI;

use zitter::channeling::*;
use zitter::par::Execution;
use zitter::units::Constants;

#[test]
fn string_average_tracks_closed_form_on_grid() {
    let params = ChannelParams::default();
    let atom = lindhard_atom(&params);
    for i in 0..27 {
        let r = 0.2 + 0.05 * i as f64;
        let numeric = string_average(&atom, params.d, r).unwrap();
        let closed = lindhard(r, &params).unwrap().u;
        assert!((numeric / closed - 1.0).abs() < 5e-3);
    }
}

#[test]
fn radial_growth_at_channeling_scale() {
    let k = Constants::ROUNDED;
    let params = ChannelParams::default();
    let beam = beam_kinematics(params.d, &k).unwrap().beam;
    let h = k.lambda_e() / effective_radius(0.5, &params).unwrap();
    let omega0 = beam.omega0;
    let period = 2.0 * PI / omega0;
    let mut run = RadialRun::new(omega0 * omega0, h, 2.0 * omega0, 600.0 * period);
    run.fit_from = 100.0 * period;
    run.record_every = 1000;
    let result = integrate_radial(&run).unwrap();
    let predicted = parametric_resonance(h, omega0, 0.0).growth;
    assert!((result.exponent / predicted - 1.0).abs() < 0.05);
    // Floquet at the actual drive frequency ω_e/γ, which equals 2ω0.
    let floquet = floquet_exponent(omega0 * omega0, h, beam.drive_frequency(&k)).unwrap();
    assert_eq!(floquet.agreement, FloquetAgreement::Agree);
    assert!((floquet.s.re / result.exponent - 1.0).abs() < 1e-2);
}

#[test]
fn sequential_fallback_matches_parallel_scan() {
    let mut config = ScanConfig::new(80.6, 81.2, 13);
    config.r0_samples = 6;
    let parallel = momentum_scan(&config).unwrap();
    config.execution = Execution::Sequential;
    let sequential = momentum_scan(&config).unwrap();
    assert_eq!(parallel.rows, sequential.rows);
    let pooled = zitter::par::with_workers(2, || {
        config.execution = Execution::Parallel;
        momentum_scan(&config).unwrap()
    });
    assert_eq!(pooled.rows, sequential.rows);
}

#[test]
fn precise_constants_shift_resonance_slightly() {
    let rounded = beam_kinematics(3.84, &Constants::ROUNDED).unwrap().beam.p;
    let precise = beam_kinematics(3.84, &Constants::PRECISE).unwrap().beam.p;
    assert!((rounded - precise).abs() / rounded < 1e-3);
}
