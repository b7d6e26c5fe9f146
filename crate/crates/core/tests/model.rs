use std::f64::consts::TAU;

use dualrail::model::*;
use dualrail::units::thermal_speed;

#[test]
fn rms_speed_at_10_uk() {
    let rb = AtomSpecies::rubidium87();
    assert!((rb.thermal_speed(10.0) - 0.031).abs() < 5e-4);
    assert!((thermal_speed(10.0, rb.mass) - rb.thermal_speed(10.0)).abs() < 1e-15);
}

#[test]
fn ladder_wavevectors() {
    // 2π(1/474 − 1/795) nm⁻¹ in rad/µm
    let k = TAU * (1.0 / 474.0 - 1.0 / 795.0) * 1e3;
    assert!((k_minus() - k).abs() < 1e-12);
    assert!((k_minus() - 5.35).abs() < 5e-3);
    assert!((k_plus() - TAU * (1.0 / 474.0 + 1.0 / 795.0) * 1e3).abs() < 1e-12);
}

#[test]
fn preset_mismatches() {
    let all = builtin_configs();
    let m = |name: &str| find_preset(&all, name).unwrap().wavevectors.mismatch();
    let rb = find_preset(&all, "rb87-5p12").unwrap();
    assert!((rb.wavevectors.k_wait - 5.53).abs() < 5e-3);
    assert!((m("rb87-5p12") - 0.033).abs() < 1e-3);
    assert!((m("rb87-5p32") - 0.098).abs() < 1e-3);
    assert!((m("cs133-6p12") - 0.021).abs() < 1e-3);
    assert!((m("rb87-6p12-4f52") - 0.0018).abs() < 1e-12);
    assert!((m("cs133-7p12") - 0.063).abs() < 1e-12);
}

#[test]
fn interaction_table_and_shifts() {
    let t = InteractionTable::rubidium_default();
    let want = [
        ((95, 95), -14.0),
        ((95, 97), -21.0),
        ((95, 99), 29.0),
        ((97, 97), -18.0),
        ((97, 99), -26.0),
    ];
    for ((a, b), c6) in want {
        assert_eq!(t.c6(a, b).unwrap(), c6);
        assert_eq!(t.c6(b, a).unwrap(), c6);
    }
    // −14 THz µm⁶ / 7⁶ µm⁶ in MHz
    let v11 = interaction_shift(-14.0, 7.0);
    assert!((v11 / TAU - (-14e6 / 7f64.powi(6))).abs() < 1e-9);
    assert!((v11.abs() / TAU - 119.0).abs() < 0.1);
    let floor = blockade_floor(TAU * 2.0, v11);
    assert!((floor - (2f64.sqrt() * TAU * 2.0 / v11).powi(2) / 8.0).abs() < 1e-18);
    assert!(floor > 5e-5 && floor < 2e-4);
    let s = GateShifts::<f64>::from_table(&t).unwrap();
    assert_eq!(s.pair(1, 1), s.v11);
    assert_eq!(s.pair(2, 1), s.v12);
    assert_eq!(s.pair(3, 2), s.v23);
}

#[test]
fn custom_preset_file() {
    let text = r#"
[[preset]]
name = "test-atom"
species = "X"
mass_kg = 1.0e-25
tau_us = 100.0
lambda_lower_nm = 800.0
lambda_upper_nm = 480.0
counterpropagating = true
reported_mismatch = 0.01
"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.toml");
    std::fs::write(&path, text).unwrap();
    let all = load_presets(&path).unwrap();
    let c = find_preset(&all, "test-atom").unwrap();
    assert!((c.wavevectors.k_wait / c.wavevectors.k_excite - 1.01).abs() < 1e-12);
    assert!(c.interactions().is_err());
    assert!(load_presets(&dir.path().join("missing.toml")).is_err());
}

#[test]
fn params_reject_bad_input() {
    assert!(SimulationParams::<f64>::from_mhz(-1.0, 2.0, 2.0, 0).is_err());
    assert!(SimulationParams::<f64>::from_mhz(2.0, 0.0, 2.0, 0).is_err());
    let mut p = SimulationParams::<f64>::from_mhz(2.0, -2.0, 2.0, 1).unwrap();
    assert!((p.t_wait - 2f64.sqrt() / 2.0).abs() < 1e-12);
    p.t_wait *= 1.01;
    assert!(p.validate().is_err());
    assert!(maxwell_weight(0.1, 0.0, &AtomSpecies::rubidium87()).is_err());
}
