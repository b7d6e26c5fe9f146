use std::f64::consts::{PI, SQRT_2, TAU};

use dualrail::gate::rotation_error;
use dualrail::hamiltonian::*;
use dualrail::linalg::vec_max_diff;
use dualrail::model::*;
use dualrail::propagator::*;
use dualrail::protocols::*;
use dualrail::scalar::wrap_phase;
use dualrail::state::{ComplexState, LevelBasis};
use dualrail::C;
use proptest::prelude::*;

fn ground3() -> ComplexState<f64> {
    ComplexState::basis_state(LevelBasis::dual_rail(), "1").unwrap()
}

fn unit_disk() -> impl Strategy<Value = C<f64>> {
    (0.0..=1.0f64, -PI..PI).prop_map(|(r, t)| C::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn builders_are_hermitian(t in 0.0..3.0f64, om in 0.1..20.0f64, z0 in -5.0..5.0f64, v in -0.6..0.6f64) {
        let k = k_minus();
        prop_assert_eq!(h_single_rail(t, om, k, z0, v).hermiticity_defect(), 0.0);
        prop_assert_eq!(h_dual_rail(t, om, k, z0, v).hermiticity_defect(), 0.0);
        prop_assert_eq!(h_four_field(t, om, k, z0, v).hermiticity_defect(), 0.0);
    }

    #[test]
    fn evolution_preserves_norm(om in 1.0..15.0f64, z0 in -5.0..5.0f64, v in -0.6..0.6f64, t in 0.05..2.0f64) {
        let r = evolve(&ground3(), &four_field(om, k_minus(), z0, v), 0.0, t, &Tolerance::default()).unwrap();
        prop_assert!((r.norm() - 1.0).abs() < 1e-10 * t.max(1.0));
    }

    #[test]
    fn exact_and_adaptive_agree(om in 1.0..15.0f64, z0 in -5.0..5.0f64, v in -0.6..0.6f64, t in 0.05..1.5f64) {
        let h = dual_rail(om, k_minus(), z0, v);
        let a = evolve(&ground3(), &h, 0.0, t, &Tolerance::default()).unwrap();
        let e = evolve_exact(&ground3(), &h, 0.0, t).unwrap();
        prop_assert!(vec_max_diff(&a.amps, &e.amps) < 1e-8);
    }

    #[test]
    fn four_field_is_rotated_dual_rail(om in 1.0..10.0f64, z0 in -5.0..5.0f64, v in -0.6..0.6f64, t in 0.05..1.5f64) {
        let f = evolve(&ground3(), &four_field(om, k_minus(), z0, v), 0.0, t, &Tolerance::default()).unwrap();
        let d = evolve_exact(&ground3(), &dual_rail(SQRT_2 * om, k_minus(), z0, v), 0.0, t).unwrap();
        let rotated = rail_rotation::<f64>().mul_vec(&f.amps);
        prop_assert!(vec_max_diff(&rotated, &d.amps) < 1e-8);
    }

    #[test]
    fn restoration_ignores_trap_position(z0 in -10.0..10.0f64, v in -0.5..0.5f64) {
        let p = SimulationParams::from_mhz(2.0, -2.0399, 2.0, 0).unwrap();
        let opts = SequenceOptions::quiet(Solver::Exact);
        let a = run_excite_restore(&p.with_motion(0.0, v), k_minus(), &opts).unwrap();
        let b = run_excite_restore(&p.with_motion(z0, v), k_minus(), &opts).unwrap();
        prop_assert!((a.ground_population - b.ground_population).abs() < 1e-10);
        prop_assert!(wrap_phase(a.ground_phase - b.ground_phase).abs() < 1e-9);
    }

    #[test]
    fn gap_error_is_mirror_symmetric(z0 in -10.0..10.0f64, v in -0.5..0.5f64) {
        let cfg = &builtin_configs()[0];
        let p = SimulationParams::from_mhz(2.0, -2.0339, 2.0, 1).unwrap();
        let opts = SequenceOptions::quiet(Solver::Exact);
        let e = |z: f64, u: f64| run_gap_protocol(&p.with_motion(z, u), &cfg.wavevectors, &opts).unwrap().population_error;
        prop_assert!((e(z0, v) - e(-z0, -v)).abs() < 1e-9);
    }

    #[test]
    fn rotation_error_is_bounded(a in unit_disk(), b in unit_disk(), c in unit_disk()) {
        let e = rotation_error(a, b, c);
        prop_assert!((-1e-15..=1.0 + 1e-15).contains(&e), "{}", e);
    }

    #[test]
    fn maxwell_weights_normalize(t in 1.0..500.0f64) {
        let rb = AtomSpecies::rubidium87();
        let sigma = rb.thermal_speed(t);
        let n = 2001;
        let h = 16.0 * sigma / (n - 1) as f64;
        let s: f64 = (0..n)
            .map(|i| {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                w * maxwell_weight(-8.0 * sigma + h * i as f64, t, &rb).unwrap()
            })
            .sum::<f64>() * h / (sigma * TAU.sqrt());
        prop_assert!((s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn wrapped_phase_is_principal(phi in -1e3..1e3f64) {
        let w = wrap_phase(phi);
        prop_assert!(w > -PI - 1e-12 && w <= PI + 1e-12);
        let turns = (phi - w) / TAU;
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }
}
