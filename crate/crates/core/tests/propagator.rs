use std::f64::consts::{PI, SQRT_2, TAU};

use dualrail::hamiltonian::*;
use dualrail::linalg::{vec_max_diff, CMatrix};
use dualrail::model::k_minus;
use dualrail::propagator::*;
use dualrail::state::{ComplexState, LevelBasis};
use dualrail::C;

fn ground3() -> ComplexState<f64> {
    ComplexState::basis_state(LevelBasis::dual_rail(), "1").unwrap()
}

#[test]
fn dual_rail_spectrum() {
    // Eigenvalues {0, ±Ω/√2} ⇔ H³ = (Ω²/2) H with H ≠ 0.
    let om = 3.7;
    let h = h_dual_rail(0.42, om, k_minus(), 1.1, 0.2);
    let h3 = h.matmul(&h).matmul(&h);
    let rhs = h.scale(C::new(om * om / 2.0, 0.0));
    assert!(h3.max_abs_diff(&rhs) < 1e-13);
    assert!(h.trace().norm() < 1e-15);
}

#[test]
fn four_field_matches_rotated_dual_rail_matrix() {
    let r: CMatrix<f64> = rail_rotation();
    for &(t, z0, v) in &[(0.0, 0.0, 0.0), (0.3, 1.2, 0.05), (1.7, -2.0, -0.3)] {
        let om = 2.3;
        let h4 = h_four_field(t, om, k_minus(), z0, v);
        let hd = h_dual_rail(t, SQRT_2 * om, k_minus(), z0, v);
        let rotated = r.matmul(&h4).matmul(&r.adjoint());
        assert!(rotated.max_abs_diff(&hd) < 1e-14);
    }
}

#[test]
fn oracle_converges_to_adaptive() {
    // Four-field drive at Ω/2π = 0.5 MHz, v = 0.031 m/s, 0.5 µs.
    let h = four_field(TAU * 0.5, k_minus(), 0.0, 0.031);
    let a = evolve(&ground3(), &h, 0.0, 0.5, &Tolerance::default()).unwrap();
    let o = evolve_oracle(&ground3(), &h, 0.0, 0.5, 100_000).unwrap();
    assert!(vec_max_diff(&a.amps, &o.amps) < 1e-8);
}

#[test]
fn exact_matches_adaptive_on_moving_atoms() {
    let h = dual_rail(TAU * 2.0, k_minus(), 0.7, 0.3);
    let a = evolve(&ground3(), &h, 0.2, 1.4, &Tolerance::default()).unwrap();
    let e = evolve_exact(&ground3(), &h, 0.2, 1.4).unwrap();
    assert!(vec_max_diff(&a.amps, &e.amps) < 1e-9);
}

#[test]
fn rydberg_time_of_a_pi_pulse() {
    // ∫₀^T sin²(Ωt/√2) dt = T/2 with T = π/(√2 Ω).
    let om = TAU * 2.0;
    let t = PI / (SQRT_2 * om);
    for solver in [Solver::default(), Solver::Exact] {
        let seg = Segment {
            hamiltonian: dual_rail(om, k_minus(), 0.0, 0.0),
            duration: t,
        };
        let opts = SequenceOptions {
            solver,
            samples_per_segment: 0,
            track_rydberg: true,
            t_start: 0.0,
        };
        let r = run_segments(&ground3(), &[seg], &opts).unwrap();
        assert!((r.rydberg_time - t / 2.0).abs() < 1e-7 * t);
        assert!(r.final_state.population("1").unwrap() < 1e-20);
    }
}

#[test]
fn trajectory_csv_layout() {
    let seg = Segment {
        hamiltonian: single_rail(TAU, k_minus(), 0.0, 0.031),
        duration: 0.5,
    };
    let opts = SequenceOptions {
        samples_per_segment: 10,
        ..SequenceOptions::default()
    };
    let r = run_segments(&ComplexState::basis_state(LevelBasis::single_rail(), "1").unwrap(), &[seg], &opts).unwrap();
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &r).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t_us,pop_1,pop_r1,phase_1,phase_r1");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 5);
    assert_eq!(first[0], "0.00000000000e0");
    assert!(text.ends_with('\n'));
}

#[test]
fn dimension_mismatch_is_reported() {
    let h = single_rail(1.0, 1.0, 0.0, 0.0);
    let err = evolve(&ground3(), &h, 0.0, 1.0, &Tolerance::default()).unwrap_err();
    assert!(matches!(err, dualrail::Error::Consistency(_)));
}
