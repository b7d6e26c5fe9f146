use num_traits::Zero;

use super::{decay_error, decay_error_analytic, gate_duration, rotation_error, GateInput, GateMethod, GateParams, GateReport};
use crate::error::{Error, Result};
use crate::hamiltonian::{dual_rail, gap_stage, gate_nine, single_rail, two_atom_single_rail, DriveHamiltonian, GateNineDrive, StageKind};
use crate::model::SimulationParams;
use crate::propagator::{run_segments, Segment, SequenceOptions, TrajectoryResult};
use crate::scalar::{lit, Real, C};
use crate::state::{ComplexState, LevelBasis};

/// Amplitude `⟨input|ψ_final⟩` and single-Rydberg residence time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputResult<T> {
    pub amplitude: C<T>,
    /// µs
    pub rydberg_time: T,
}

type Segs<T> = Vec<Segment<T, DriveHamiltonian<T>>>;

fn opts<T: Real>(p: &GateParams<T>, t_start: T, track: bool) -> SequenceOptions<T> {
    SequenceOptions {
        solver: p.solver,
        samples_per_segment: 0,
        track_rydberg: track,
        t_start,
    }
}

fn seg<T: Real>(h: DriveHamiltonian<T>, duration: T) -> Segment<T, DriveHamiltonian<T>> {
    Segment { hamiltonian: h, duration }
}

/// Target pulse train `(signed Rabi, duration)` filling the wait from its start;
/// any remainder is undriven.
fn target_train<T: Real>(p: &GateParams<T>) -> Vec<(T, T)> {
    let (t1, t3) = p.target_times();
    let mut out = vec![(p.omega_t, t1), (p.omega_t_dp, t3)];
    let rest = p.t_wait() - t1 - t3;
    if rest > p.t_wait() * lit(1e-12) {
        out.push((T::zero(), rest));
    }
    out
}

/// Control gap-protocol parameters for a control atom moving at `vc`.
fn control_params<T: Real>(p: &GateParams<T>, vc: T) -> SimulationParams<T> {
    let mut sp = SimulationParams {
        omega: p.omega,
        omega_dp: p.omega_dp,
        omega_if: p.omega_if,
        omega_t: p.omega_t,
        z0: p.z0c,
        v: vc,
        t_wait: T::zero(),
        n_gap_cycles: p.n_gap_cycles,
        temperature: T::zero(),
    };
    sp.t_wait = sp.gap_time();
    sp
}

fn control_segment<T: Real>(p: &GateParams<T>, kind: StageKind, vc: T) -> Result<Segment<T, DriveHamiltonian<T>>> {
    let sp = control_params(p, vc);
    let dur = match kind {
        StageKind::Excite => p.excite_time(),
        StageKind::Deexcite => p.deexcite_time(),
        _ => p.t_wait(),
    };
    let st = gap_stage(kind, dur, &sp, &p.wavevectors);
    Ok(seg(st.hamiltonian(&LevelBasis::gap(), p.z0c, vc)?, dur))
}

fn ground<T: Real>(r: &TrajectoryResult<T>) -> Result<C<T>> {
    r.final_state.amplitude("1")
}

/// Dual-rail target train during the wait, starting from `|1⟩`.
fn ours_target<T: Real>(p: &GateParams<T>, vt: T, track: bool) -> Result<TrajectoryResult<T>> {
    let segs: Segs<T> = target_train(p)
        .into_iter()
        .map(|(om, d)| seg(dual_rail(om, p.k(), p.z0t, vt), d))
        .collect();
    let g = ComplexState::basis_state(LevelBasis::dual_rail(), "1")?;
    run_segments(&g, &segs, &opts(p, p.excite_time(), track))
}

/// Control gap protocol from `|1⟩`.
fn ours_control<T: Real>(p: &GateParams<T>, vc: T, track: bool) -> Result<TrajectoryResult<T>> {
    let segs = vec![
        control_segment(p, StageKind::Excite, vc)?,
        control_segment(p, StageKind::WaitWithInfrared, vc)?,
        control_segment(p, StageKind::Deexcite, vc)?,
    ];
    let g = ComplexState::basis_state(LevelBasis::gap(), "1")?;
    run_segments(&g, &segs, &opts(p, T::zero(), track))
}

/// `|11⟩` for the dual-rail gate. The control is excited alone; during the
/// wait the `|r_α 1⟩` components evolve under the nine-level Hamiltonian while
/// the residual `|11⟩` component follows the isolated target (`× a`); the
/// pieces are reassembled for the control deexcitation.
fn ours_both<T: Real>(p: &GateParams<T>, vc: T, vt: T, target: &TrajectoryResult<T>, track: bool) -> Result<InputResult<T>> {
    let t1 = p.excite_time();
    let t_dp = t1 + p.t_wait();

    let g4 = ComplexState::basis_state(LevelBasis::gap(), "1")?;
    let ex = run_segments(&g4, &[control_segment(p, StageKind::Excite, vc)?], &opts(p, T::zero(), track))?;
    let s = &ex.final_state.amps; // {1, r1, r2, r3}

    let basis9 = LevelBasis::gate_nine();
    let mut init9 = vec![C::zero(); 9];
    init9[8] = s[1];
    init9[5] = s[2];
    init9[2] = s[3];
    let psi9 = ComplexState::new(basis9, init9)?;
    let segs9: Segs<T> = target_train(p)
        .into_iter()
        .map(|(om, d)| {
            let drive = GateNineDrive {
                omega_t: om,
                omega_if: p.omega_if,
                k: p.k(),
                k_wait: p.k_wait(),
                z0c: p.z0c,
                vc,
                z0t: p.z0t,
                vt,
            };
            seg(gate_nine(&drive, &p.shifts), d)
        })
        .collect();
    let wait = run_segments(&psi9, &segs9, &opts(p, t1, track))?;
    let w = &wait.final_state.amps;

    let a_wait = ground(target)?;
    let residual = s[0] * a_wait;
    let start = ComplexState::new(LevelBasis::gap(), vec![residual, w[8], w[5], w[2]])?;
    let de = run_segments(&start, &[control_segment(p, StageKind::Deexcite, vc)?], &opts(p, t_dp, track))?;

    let rydberg_time = ex.rydberg_time + s[0].norm_sqr() * target.rydberg_time + wait.rydberg_time + de.rydberg_time;
    Ok(InputResult {
        amplitude: ground(&de)?,
        rydberg_time,
    })
}

fn trad_segments<T: Real>(p: &GateParams<T>, vc: T, vt: T) -> Segs<T> {
    let om = p.omega_traditional;
    let t = T::PI() / om;
    let k = p.k();
    let pair = |c_on: bool, t_on: bool| {
        let hc = single_rail(if c_on { om } else { T::zero() }, k, p.z0c, vc);
        let ht = single_rail(if t_on { om } else { T::zero() }, k, p.z0t, vt);
        two_atom_single_rail(&hc, &ht, p.shifts.v11)
    };
    let mut segs = vec![seg(pair(true, false), t), seg(pair(false, true), t + t)];
    let idle = p.t_wait() - t - t;
    if idle > T::zero() {
        segs.push(seg(pair(false, false), idle));
    }
    segs.push(seg(pair(true, false), t));
    segs
}

fn trad_all<T: Real>(p: &GateParams<T>, vc: T, vt: T, track: bool) -> Result<[InputResult<T>; 3]> {
    let om = p.omega_traditional;
    let t = T::PI() / om;
    let k = p.k();
    if p.t_wait() < t + t {
        return Err(Error::Domain("the wait must hold the target 2π pulse".into()));
    }
    let g2 = ComplexState::basis_state(LevelBasis::single_rail(), "1")?;

    let a = run_segments(&g2, &[seg(single_rail(om, k, p.z0t, vt), t + t)], &opts(p, t, track))?;
    let hc = single_rail(om, k, p.z0c, vc);
    let b = run_segments(
        &g2,
        &[
            seg(hc.clone(), t),
            seg(single_rail(T::zero(), k, p.z0c, vc), p.t_wait()),
            seg(hc, t),
        ],
        &opts(p, T::zero(), track),
    )?;
    let g4 = ComplexState::basis_state(LevelBasis::two_atom_single_rail(), "11")?;
    let c = run_segments(&g4, &trad_segments(p, vc, vt), &opts(p, T::zero(), track))?;
    Ok([
        InputResult {
            amplitude: ground(&a)?,
            rydberg_time: a.rydberg_time,
        },
        InputResult {
            amplitude: ground(&b)?,
            rydberg_time: b.rydberg_time,
        },
        InputResult {
            amplitude: c.final_state.amplitude("11")?,
            rydberg_time: c.rydberg_time,
        },
    ])
}

/// Results for inputs 01, 10 and 11.
pub(crate) fn simulate_inputs<T: Real>(p: &GateParams<T>, method: GateMethod, vc: T, vt: T, track: bool) -> Result<[InputResult<T>; 3]> {
    match method {
        GateMethod::DualRail => {
            let target = ours_target(p, vt, track)?;
            let control = ours_control(p, vc, track)?;
            let both = ours_both(p, vc, vt, &target, track)?;
            Ok([
                InputResult {
                    amplitude: ground(&target)?,
                    rydberg_time: target.rydberg_time,
                },
                InputResult {
                    amplitude: ground(&control)?,
                    rydberg_time: control.rydberg_time,
                },
                both,
            ])
        }
        GateMethod::Traditional => trad_all(p, vc, vt, track),
    }
}

/// Amplitude and Rydberg time for one computational input.
pub fn simulate_gate_input<T: Real>(input: GateInput, p: &GateParams<T>, method: GateMethod, vc: T, vt: T) -> Result<InputResult<T>> {
    p.validate()?;
    if input == GateInput::I00 {
        return Ok(InputResult {
            amplitude: C::new(T::one(), T::zero()),
            rydberg_time: T::zero(),
        });
    }
    let [a, b, c] = simulate_inputs(p, method, vc, vt, true)?;
    Ok(match input {
        GateInput::I01 => a,
        GateInput::I10 => b,
        _ => c,
    })
}

/// Full gate report at one velocity pair.
pub fn simulate_gate<T: Real>(p: &GateParams<T>, method: GateMethod, vc: T, vt: T) -> Result<GateReport<T>> {
    p.validate()?;
    let [a, b, c] = simulate_inputs(p, method, vc, vt, true)?;
    let t_r = [a.rydberg_time, b.rydberg_time, c.rydberg_time];
    let omega_ref = match method {
        GateMethod::DualRail => p.omega,
        GateMethod::Traditional => p.omega_traditional / T::SQRT_2(),
    };
    Ok(GateReport {
        method,
        vc,
        vt,
        a: a.amplitude,
        b: b.amplitude,
        c: c.amplitude,
        e_ro: rotation_error(a.amplitude, b.amplitude, c.amplitude),
        e_decay: decay_error(t_r[0], t_r[1], t_r[2], p.tau)?,
        e_decay_analytic: decay_error_analytic(omega_ref, p.tau),
        duration: gate_duration(p, method),
        t_r,
    })
}

/// `⟨11|ψ⟩` from a direct simulation over `{1, r1, r2, r3} ⊗ {r2, r1, 1}`
/// without the piecewise split of the `|11⟩` input.
pub fn simulate_full_two_atom<T: Real>(p: &GateParams<T>, vc: T, vt: T) -> Result<C<T>> {
    p.validate()?;
    let t1 = p.excite_time();
    let tw = p.t_wait();
    let t_end = t1 + tw + p.deexcite_time();

    // Control timeline: (start, end, segment)
    let ctrl = [
        (T::zero(), t1, control_segment(p, StageKind::Excite, vc)?.hamiltonian),
        (t1, t1 + tw, control_segment(p, StageKind::WaitWithInfrared, vc)?.hamiltonian),
        (t1 + tw, t_end, control_segment(p, StageKind::Deexcite, vc)?.hamiltonian),
    ];
    let mut targ = Vec::new();
    let mut t = t1;
    for (om, d) in target_train(p) {
        targ.push((t, t + d, dual_rail(om, p.k(), p.z0t, vt)));
        t += d;
    }
    let idle_t = dual_rail(T::zero(), p.k(), p.z0t, vt);

    let mut cuts: Vec<T> = ctrl
        .iter()
        .flat_map(|c| [c.0, c.1])
        .chain(targ.iter().flat_map(|c| [c.0, c.1]))
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < lit(1e-12));

    // Rydberg index: gap {1, r1, r2, r3} → (0, 1, 2, 3); target {r2, r1, 1} → (2, 1, 0).
    let rc = [0usize, 1, 2, 3];
    let rt = [2usize, 1, 0];
    let shifts = p.shifts;
    let shift = move |i: usize, j: usize| {
        if rc[i] > 0 && rt[j] > 0 {
            shifts.pair(rc[i], rt[j])
        } else {
            T::zero()
        }
    };

    let mut segs = Vec::new();
    for w in cuts.windows(2) {
        let mid = (w[0] + w[1]) * lit(0.5);
        let hc = &ctrl.iter().find(|c| c.0 <= mid && mid < c.1).expect("control covers the gate").2;
        let ht = targ.iter().find(|c| c.0 <= mid && mid < c.1).map(|c| &c.2).unwrap_or(&idle_t);
        segs.push(seg(DriveHamiltonian::product(hc, ht, shift), w[1] - w[0]));
    }
    let basis = segs[0].hamiltonian.basis().clone();
    let psi = ComplexState::basis_state(basis, "1|1")?;
    let r = run_segments(&psi, &segs, &opts(p, T::zero(), false))?;
    r.final_state.amplitude("1|1")
}

use crate::hamiltonian::Hamiltonian;
