use dualrail::gate::*;
use dualrail::model::*;
use dualrail::C;

fn cfg() -> AtomLaserConfig {
    builtin_configs().into_iter().next().unwrap()
}

#[test]
fn trivial_inputs() {
    let p = GateParams::<f64>::reference(&cfg(), 1).unwrap();
    for m in [GateMethod::DualRail, GateMethod::Traditional] {
        let r = simulate_gate_input(GateInput::I00, &p, m, 0.3, -0.2).unwrap();
        assert_eq!(r.amplitude, C::new(1.0, 0.0));
        assert_eq!(r.rydberg_time, 0.0);
        let a = simulate_gate_input(GateInput::I01, &p, m, 0.0, 0.0).unwrap();
        assert!((a.amplitude - C::new(-1.0, 0.0)).norm() < 1e-10, "{m:?} {}", a.amplitude);
    }
}

#[test]
fn blockade_floor_at_rest() {
    let p = GateParams::<f64>::reference(&cfg(), 1).unwrap();
    let r = simulate_gate(&p, GateMethod::DualRail, 0.0, 0.0).unwrap();
    let floor = blockade_floor(p.omega, p.shifts.v11);
    let ratio = r.e_ro / floor;
    assert!((1.0..4.0).contains(&ratio), "{ratio}");
}

#[test]
fn blocked_target_barely_adds_rydberg_time() {
    let p = GateParams::<f64>::reference(&cfg(), 1).unwrap();
    for (vc, vt) in [(0.0, 0.0), (0.1, -0.05), (-0.3, 0.2)] {
        let r = simulate_gate(&p, GateMethod::DualRail, vc, vt).unwrap();
        assert!((r.t_r[2] / r.t_r[1] - 1.0).abs() < 0.05, "{:?}", r.t_r);
    }
}

#[test]
fn split_evolution_matches_two_atom_simulation() {
    let p = GateParams::<f64>::reference(&cfg(), 1).unwrap();
    for (vc, vt) in [(0.0, 0.0), (0.05, 0.02), (-0.2, 0.1)] {
        let split = simulate_gate_input(GateInput::I11, &p, GateMethod::DualRail, vc, vt)
            .unwrap()
            .amplitude;
        let full = simulate_full_two_atom(&p, vc, vt).unwrap();
        assert!((split - full).norm() < 1e-5, "{split} vs {full}");
    }
}

#[test]
fn decay_error_for_two_cycles() {
    let p = GateParams::<f64>::reference(&cfg(), 2).unwrap();
    let r = simulate_gate(&p, GateMethod::DualRail, 0.0, 0.0).unwrap();
    assert!((r.e_decay - 1.24e-3).abs() < 0.05 * 1.24e-3, "{}", r.e_decay);
    let p = GateParams::<f64>::reference(&cfg(), 1).unwrap();
    let r = simulate_gate(&p, GateMethod::DualRail, 0.0, 0.0).unwrap();
    assert!((r.e_decay - r.e_decay_analytic).abs() < 0.01 * r.e_decay_analytic);
}

#[test]
fn dual_rail_suppresses_rotation_error() {
    let rb = AtomSpecies::rubidium87();
    let v = GateGrid::uniform_velocities(0.5, 15);
    for n in [1, 2] {
        let p = GateParams::<f64>::reference(&cfg(), n).unwrap();
        let ours = GateGrid::compute(&p, GateMethod::DualRail, &v).unwrap();
        let trad = GateGrid::compute(&p, GateMethod::Traditional, &v).unwrap();
        for &t in &[10.0, 200.0] {
            let (a, b) = (ours.average(t, &rb).unwrap(), trad.average(t, &rb).unwrap());
            assert!(b > 10.0 * a, "n={n} T={t}: {a} vs {b}");
        }
        for e in ours.e_ro.iter().chain(&trad.e_ro) {
            assert!((0.0..=1.0).contains(e));
        }
    }
}

#[test]
fn traditional_velocity_reversal() {
    // Single-atom amplitudes conjugate under v → −v; the blocked |11⟩ branch
    // does so only up to O(Ω/V).
    let asym = |scale: f64| {
        let mut p = GateParams::<f64>::reference(&cfg(), 1).unwrap();
        for s in [
            &mut p.shifts.v11,
            &mut p.shifts.v12,
            &mut p.shifts.v13,
            &mut p.shifts.v22,
            &mut p.shifts.v23,
        ] {
            *s *= scale;
        }
        let mut worst: f64 = 0.0;
        for (vc, vt) in [(0.5, 0.0), (0.25, -0.5), (0.5, 0.5), (-0.1, 0.3)] {
            let f = simulate_gate(&p, GateMethod::Traditional, vc, vt).unwrap();
            let r = simulate_gate(&p, GateMethod::Traditional, -vc, -vt).unwrap();
            assert!((f.a - r.a.conj()).norm() < 1e-9);
            assert!((f.b - r.b.conj()).norm() < 1e-9);
            worst = worst.max((f.e_ro - r.e_ro).abs());
        }
        worst
    };
    let (physical, strong) = (asym(1.0), asym(1000.0));
    assert!(strong < 1e-4 && strong < 2e-3 * physical, "{physical} {strong}");
}

#[test]
fn fidelity_combines_both_errors() {
    let rb = AtomSpecies::rubidium87();
    let p = GateParams::<f64>::reference(&cfg(), 1).unwrap();
    let g = GateGrid::compute(&p, GateMethod::DualRail, &GateGrid::uniform_velocities(0.5, 11)).unwrap();
    let f = fidelity(&p, &g, 10.0, &rb).unwrap();
    assert!((f.fidelity - (1.0 - f.e_ro_bar - f.e_decay)).abs() < 1e-15);
    assert!((f.fidelity - 0.999).abs() < 1e-3, "{}", f.fidelity);
}

#[test]
fn single_precision_path_runs() {
    let p = GateParams::<f32>::reference(&cfg(), 1).unwrap();
    let r = simulate_gate(&p, GateMethod::DualRail, 0.0f32, 0.0f32).unwrap();
    assert!(r.e_ro >= 0.0 && r.e_ro < 1e-3, "{}", r.e_ro);
}

#[test]
fn traditional_needs_room_for_the_target() {
    let mut p = GateParams::<f64>::reference(&cfg(), 1).unwrap();
    p.omega_if *= 10.0;
    assert!(simulate_gate(&p, GateMethod::Traditional, 0.0, 0.0).is_err());
}
