use std::f64::consts::{PI, SQRT_2, TAU};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use dualrail::benchmarks::{compute_gate_rows, compute_restore_row, RestoreMethod as TableMethod, GATE_TABLE, RESTORE_TABLE};
use dualrail::gate::{fidelity, simulate_gate, GateGrid, GateMethod, GateParams};
use dualrail::model::{builtin_configs, find_preset, k_minus, k_plus, load_presets, AtomLaserConfig, SimulationParams};
use dualrail::propagator::{write_trajectory_csv, SequenceOptions, Solver, TrajectoryResult};
use dualrail::protocols::{
    extract_phase_phi, gap_trajectory, maxwell_average, optimize_deexcitation, restore_trajectory, run_excite, traditional_trajectory,
    AveragedOutcome, ExciteModel, ProtocolOutcome, VelocityGrid,
};

use crate::args::*;
use crate::emit::{record, table, Cell};
use crate::UsageError;

const SOLVER: Solver<f64> = Solver::Exact;

/// The four-field drive has two terms per matrix element and no diagonal
/// rotating frame, so it goes through the adaptive integrator.
fn solver_for(model: ExciteModel) -> Solver<f64> {
    match model {
        ExciteModel::FourField => Solver::default(),
        _ => SOLVER,
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    let cfg = load_config(g)?;
    let started = Instant::now();
    match &cli.command {
        Command::Excite(a) => cmd_excite(g, &cfg, a, started),
        Command::Restore(a) => cmd_restore(g, &cfg, a, started),
        Command::Gap(a) => cmd_gap(g, &cfg, a, started),
        Command::Optimize(a) => cmd_optimize(g, &cfg, a, started),
        Command::Gate(a) => cmd_gate(g, &cfg, a, started),
        Command::Sweep(a) => cmd_sweep(g, &cfg, a, started),
        Command::Table(a) => cmd_table(g, &cfg, a, started),
    }
}

fn load_config(g: &Global) -> Result<AtomLaserConfig> {
    let all = match &g.config {
        Some(path) => load_presets(path)?,
        None => builtin_configs(),
    };
    let mut cfg = find_preset(&all, &g.preset)?.clone();
    if let Some(l) = g.l_um {
        cfg.interactions = Some(cfg.interactions()?.with_separation(l)?);
    }
    Ok(cfg)
}

fn wavevector(cfg: &AtomLaserConfig, w: Wavevector) -> f64 {
    match w {
        Wavevector::Preset => cfg.wavevectors.k_excite,
        Wavevector::Minus => k_minus(),
        Wavevector::Plus => k_plus(),
    }
}

fn excite_model(m: Model) -> ExciteModel {
    match m {
        Model::SingleRail => ExciteModel::SingleRail,
        Model::DualRail => ExciteModel::DualRail,
        Model::FourField => ExciteModel::FourField,
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("{name} must be positive, got {x}")))
    }
}

fn opts(samples: usize, with_trajectory: bool) -> SequenceOptions<f64> {
    SequenceOptions {
        solver: SOLVER,
        samples_per_segment: if with_trajectory { samples } else { 0 },
        track_rydberg: true,
        t_start: 0.0,
    }
}

fn write_trajectory(path: &Path, traj: &TrajectoryResult<f64>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(dualrail::Error::Io)?);
    write_trajectory_csv(&mut f, traj)?;
    Ok(())
}

fn outcome_fields(o: &ProtocolOutcome<f64>) -> Vec<(&'static str, Cell)> {
    let mut f = vec![
        ("ground_population", o.ground_population.into()),
        ("population_error", o.population_error.into()),
        ("ground_phase", o.ground_phase.into()),
        ("rydberg_time_us", o.rydberg_time.into()),
    ];
    if let Some(l) = o.r3_leak {
        f.push(("r3_leak", l.into()));
    }
    f
}

fn average_fields(a: &AveragedOutcome<f64>) -> Vec<(&'static str, Cell)> {
    let mut f = vec![
        ("mean_population", a.mean_population.into()),
        ("mean_error", a.mean_error.into()),
        ("mean_abs_phase", a.mean_abs_phase.into()),
        ("max_phase_offset", a.max_phase_offset.into()),
        ("mean_rydberg_time_us", a.mean_rydberg_time.into()),
        ("weight_mass", a.weight_mass.into()),
        ("points", a.points.into()),
    ];
    if let Some(l) = a.mean_r3_leak {
        f.push(("mean_r3_leak", l.into()));
    }
    f
}

fn thermal_grid(points: usize) -> Result<VelocityGrid> {
    if points < 2 {
        return Err(usage("--grid-points must be at least 2"));
    }
    Ok(VelocityGrid::Thermal { points, half_width: 5.0 })
}

/// Runs `single` at `motion.v` or averages `outcome` over a thermal grid.
#[allow(clippy::too_many_arguments)]
fn single_or_average<F>(
    g: &Global,
    cfg: &AtomLaserConfig,
    kind: &str,
    mut params: Value,
    motion: &Motion,
    trajectory: Option<&Path>,
    single: F,
    started: Instant,
) -> Result<()>
where
    F: Fn(f64, bool) -> dualrail::Result<(TrajectoryResult<f64>, ProtocolOutcome<f64>)> + Sync,
{
    params["z0_um"] = json!(motion.z0);
    match motion.temp_uk {
        Some(t) => {
            if motion.v.is_some() {
                return Err(usage("--v and --temp-uk are exclusive"));
            }
            if trajectory.is_some() {
                return Err(usage("--trajectory needs a single velocity"));
            }
            positive("--temp-uk", t)?;
            params["temp_uk"] = json!(t);
            let (avg, _) = maxwell_average(
                |v| single(v, false).map(|x| x.1),
                t,
                &cfg.species,
                &thermal_grid(motion.grid_points)?,
            )?;
            record(g, &format!("{kind}-average"), params, &average_fields(&avg), started)
        }
        None => {
            let v = motion.v.unwrap_or(0.0);
            params["v_mps"] = json!(v);
            let (traj, o) = single(v, trajectory.is_some())?;
            if let Some(p) = trajectory {
                write_trajectory(p, &traj)?;
            }
            record(g, kind, params, &outcome_fields(&o), started)
        }
    }
}

fn cmd_excite(g: &Global, cfg: &AtomLaserConfig, a: &ExciteArgs, started: Instant) -> Result<()> {
    positive("--omega-mhz", a.omega_mhz)?;
    positive("--t", a.t)?;
    let k = wavevector(cfg, a.wavevector);
    let model = excite_model(a.model);
    let om = TAU * a.omega_mhz;
    let z0 = a.motion.z0;
    let run = |v: f64, traj: bool| {
        let o = SequenceOptions {
            solver: solver_for(model),
            ..opts(a.samples, traj)
        };
        let r = run_excite(model, om, k, z0, v, a.t, &o)?;
        let o = ProtocolOutcome::from_trajectory(&r, None)?;
        Ok((r, o))
    };
    let params = json!({"preset": cfg.name, "model": model, "omega_mhz": a.omega_mhz, "t_us": a.t, "k_per_um": k});
    single_or_average(g, cfg, "excite", params, &a.motion, a.trajectory.as_deref(), run, started)
}

fn cmd_restore(g: &Global, cfg: &AtomLaserConfig, a: &RestoreArgs, started: Instant) -> Result<()> {
    let k = wavevector(cfg, a.wavevector);
    let p = SimulationParams::from_mhz(a.omega_mhz, a.omega_dp_mhz, 1.0, 0)?;
    let z0 = a.motion.z0;
    let run = |v: f64, traj: bool| {
        let r = restore_trajectory(&p.with_motion(z0, v), k, &opts(a.samples, traj))?;
        let o = ProtocolOutcome::from_trajectory(&r, None)?;
        Ok((r, o))
    };
    let params = json!({"preset": cfg.name, "omega_mhz": a.omega_mhz, "omega_dp_mhz": a.omega_dp_mhz, "k_per_um": k});
    single_or_average(g, cfg, "restore", params, &a.motion, a.trajectory.as_deref(), run, started)
}

/// Parameters of the gap method or of the single-rail baseline with the
/// same wait.
fn gap_params(method: RestoreMethod, om: f64, dp: f64, ir: f64, n: u32, t_wait: Option<f64>) -> Result<SimulationParams<f64>> {
    let mut gap = SimulationParams::from_mhz(om, dp, ir, n)?;
    if let Some(t) = t_wait {
        gap.t_wait = t;
    }
    match method {
        RestoreMethod::Gap => {
            gap.validate()?;
            Ok(gap)
        }
        RestoreMethod::Traditional => {
            let mut p = SimulationParams::from_mhz(om * SQRT_2, om * SQRT_2, ir, 0)?;
            p.t_wait = gap.t_wait;
            p.validate()?;
            Ok(p)
        }
    }
}

fn gap_run(
    method: RestoreMethod,
    p: &SimulationParams<f64>,
    cfg: &AtomLaserConfig,
    opts: &SequenceOptions<f64>,
) -> dualrail::Result<(TrajectoryResult<f64>, ProtocolOutcome<f64>)> {
    match method {
        RestoreMethod::Gap => {
            let r = gap_trajectory(p, &cfg.wavevectors, opts)?;
            let leak = r.segment_ends.get(1).map(|s| s.population("r3")).transpose()?;
            let o = ProtocolOutcome::from_trajectory(&r, leak)?;
            Ok((r, o))
        }
        RestoreMethod::Traditional => {
            let r = traditional_trajectory(p, cfg.wavevectors.k_excite, opts)?;
            let o = ProtocolOutcome::from_trajectory(&r, None)?;
            Ok((r, o))
        }
    }
}

fn cmd_gap(g: &Global, cfg: &AtomLaserConfig, a: &GapArgs, started: Instant) -> Result<()> {
    let p = gap_params(a.method, a.omega_mhz, a.omega_dp_mhz, a.omega_if_mhz, a.n_cycles, a.t_wait_us)?;
    let z0 = a.motion.z0;
    let run = |v: f64, traj: bool| gap_run(a.method, &p.with_motion(z0, v), cfg, &opts(a.samples, traj));
    let params = json!({
        "preset": cfg.name,
        "method": format!("{:?}", a.method).to_lowercase(),
        "omega_mhz": p.omega / TAU,
        "omega_dp_mhz": p.omega_dp / TAU,
        "omega_if_mhz": a.omega_if_mhz,
        "n_cycles": a.n_cycles,
        "t_wait_us": p.t_wait,
        "k_per_um": cfg.wavevectors.k_excite,
        "k_wait_per_um": cfg.wavevectors.k_wait,
    });
    single_or_average(g, cfg, "gap", params, &a.motion, a.trajectory.as_deref(), run, started)
}

fn cmd_optimize(g: &Global, cfg: &AtomLaserConfig, a: &OptimizeArgs, started: Instant) -> Result<()> {
    positive("--omega-mhz", a.omega_mhz)?;
    if a.sign == 0 {
        return Err(usage("--sign must be +1 or -1"));
    }
    let k = wavevector(cfg, a.wavevector);
    let m = optimize_deexcitation(TAU * a.omega_mhz, k, a.v_ref, a.sign, a.bracket, &SOLVER)?;
    let params =
        json!({"preset": cfg.name, "omega_mhz": a.omega_mhz, "sign": a.sign, "v_ref_mps": a.v_ref, "bracket": a.bracket, "k_per_um": k});
    let fields = [
        ("omega_dp_mhz", m.omega_dp_mhz.into()),
        ("ratio", m.ratio.into()),
        ("error", m.error.into()),
        ("evaluations", m.evaluations.into()),
    ];
    record(g, "optimize", params, &fields, started)
}

fn gate_params(cfg: &AtomLaserConfig, a: &GateParamsArgs) -> Result<GateParams<f64>> {
    let mut p = GateParams::from_mhz(cfg, a.omega_mhz, a.omega_dp_mhz, a.omega_t_mhz, a.omega_if_mhz, a.n_cycles)?;
    if let Some(x) = a.omega_t_dp_mhz {
        p.omega_t_dp = TAU * x;
    }
    p.z0c = a.z0c;
    p.z0t = a.z0t;
    p.validate()?;
    Ok(p)
}

fn methods(c: GateChoice) -> Vec<GateMethod> {
    match c {
        GateChoice::DualRail => vec![GateMethod::DualRail],
        GateChoice::Traditional => vec![GateMethod::Traditional],
        GateChoice::Both => vec![GateMethod::DualRail, GateMethod::Traditional],
    }
}

fn method_name(m: GateMethod) -> &'static str {
    match m {
        GateMethod::DualRail => "dual-rail",
        GateMethod::Traditional => "traditional",
    }
}

fn cmd_gate(g: &Global, cfg: &AtomLaserConfig, a: &GateArgs, started: Instant) -> Result<()> {
    let p = gate_params(cfg, &a.params)?;
    for &t in &a.temp_uk {
        positive("--temp-uk", t)?;
    }
    if a.grid_points < 2 {
        return Err(usage("--grid-points must be at least 2"));
    }
    positive("--v-max", a.v_max)?;
    if a.grid_csv.is_some() && a.temp_uk.is_empty() {
        return Err(usage("--grid-csv needs --temp-uk"));
    }
    let velocities = GateGrid::uniform_velocities(a.v_max, a.grid_points);

    let mut reports = Vec::new();
    let mut grid_rows = String::from("method,v_c,v_t,e_ro\n");
    for m in methods(a.method) {
        let r = simulate_gate(&p, m, a.vc, a.vt)?;
        let mut fid = Vec::new();
        if !a.temp_uk.is_empty() {
            let grid = GateGrid::compute(&p, m, &velocities)?;
            for &t in &a.temp_uk {
                fid.push(fidelity(&p, &grid, t, &cfg.species)?);
            }
            for (i, &vc) in velocities.iter().enumerate() {
                for (j, &vt) in velocities.iter().enumerate() {
                    let row = dualrail::output::csv_row(&[vc, vt, grid.at(i, j)]);
                    grid_rows.push_str(&format!("{},{row}\n", method_name(m)));
                }
            }
        }
        reports.push((m, r, fid));
    }
    if let Some(path) = &a.grid_csv {
        std::fs::write(path, &grid_rows).map_err(dualrail::Error::Io)?;
    }

    let params = json!({
        "preset": cfg.name,
        "omega_mhz": a.params.omega_mhz,
        "omega_dp_mhz": a.params.omega_dp_mhz,
        "omega_t_mhz": a.params.omega_t_mhz,
        "omega_t_dp_mhz": p.omega_t_dp / TAU,
        "omega_if_mhz": a.params.omega_if_mhz,
        "omega_traditional_mhz": p.omega_traditional / TAU,
        "n_cycles": a.params.n_cycles,
        "t_wait_us": p.t_wait(),
        "tau_us": p.tau,
        "separation_um": cfg.interactions()?.separation,
        "v11_rad_per_us": p.shifts.v11,
        "z0c_um": p.z0c,
        "z0t_um": p.z0t,
        "vc_mps": a.vc,
        "vt_mps": a.vt,
        "grid_points": a.grid_points,
        "v_max_mps": a.v_max,
    });

    let wall = g.timing.then(|| started.elapsed().as_secs_f64());
    match g.format.unwrap_or(Format::Text) {
        Format::Json => {
            let methods: Vec<Value> = reports
                .iter()
                .map(|(m, r, fid)| {
                    json!({
                        "method": method_name(*m),
                        "duration_us": r.duration,
                        "amplitudes": {
                            "00": dualrail::output::complex_json(dualrail::C::new(1.0, 0.0)),
                            "01": dualrail::output::complex_json(r.a),
                            "10": dualrail::output::complex_json(r.b),
                            "11": dualrail::output::complex_json(r.c),
                        },
                        "rydberg_time_us": {"00": 0.0, "01": r.t_r[0], "10": r.t_r[1], "11": r.t_r[2]},
                        "e_ro": r.e_ro,
                        "e_decay": r.e_decay,
                        "e_decay_analytic": r.e_decay_analytic,
                        "averages": fid,
                    })
                })
                .collect();
            let mut body = json!({"parameters": params, "methods": methods});
            if let Some(t) = wall {
                body["wall_time_s"] = json!(t);
            }
            crate::emit::write(g, &crate::emit::pretty(&dualrail::output::with_schema("gate", body))?)
        }
        Format::Csv => {
            let header = ["method", "temp_uk", "e_ro_bar", "e_decay", "fidelity", "duration_us"];
            let rows: Vec<Vec<Cell>> = reports
                .iter()
                .flat_map(|(m, _, fid)| {
                    fid.iter().map(move |f| {
                        vec![
                            method_name(*m).into(),
                            f.temperature_uk.into(),
                            f.e_ro_bar.into(),
                            f.e_decay.into(),
                            f.fidelity.into(),
                            f.duration_us.into(),
                        ]
                    })
                })
                .collect();
            table(g, "gate", params, &header, &rows, Format::Csv, started)
        }
        Format::Text => {
            use crate::emit::human_num as h;
            let mut s = format!(
                "# gate: preset={} t_wait={} µs v_c={} v_t={} m/s\n",
                cfg.name,
                h(p.t_wait()),
                a.vc,
                a.vt
            );
            for (m, r, fid) in &reports {
                s.push_str(&format!("{}\n", method_name(*m)));
                s.push_str(&format!("  duration_us       {}\n", h(r.duration)));
                for (name, z) in [("01", r.a), ("10", r.b), ("11", r.c)] {
                    let sign = if z.im < 0.0 { '-' } else { '+' };
                    s.push_str(&format!("  amplitude {name}     {} {sign} {}i\n", h(z.re), h(z.im.abs())));
                }
                s.push_str(&format!("  e_ro              {}\n", h(r.e_ro)));
                s.push_str(&format!(
                    "  e_decay           {}  (analytic {})\n",
                    h(r.e_decay),
                    h(r.e_decay_analytic)
                ));
                for f in fid {
                    s.push_str(&format!(
                        "  T = {} µK: e_ro_bar {}  fidelity {}\n",
                        f.temperature_uk,
                        h(f.e_ro_bar),
                        h(f.fidelity)
                    ));
                }
            }
            if let Some(t) = wall {
                s.push_str(&format!("# wall_time_s {t:.3}\n"));
            }
            crate::emit::write(g, &s)
        }
    }
}

fn axis_nodes(a: &SweepArgs) -> Result<Vec<f64>> {
    if a.points < 2 || a.to.partial_cmp(&a.from) != Some(std::cmp::Ordering::Greater) {
        return Err(usage("sweep range is empty: need --to > --from and --points >= 2"));
    }
    Ok((0..a.points)
        .map(|i| a.from + (a.to - a.from) * i as f64 / (a.points - 1) as f64)
        .collect())
}

fn cmd_sweep(g: &Global, cfg: &AtomLaserConfig, a: &SweepArgs, started: Instant) -> Result<()> {
    let nodes = axis_nodes(a)?;
    let axis_name = match a.axis {
        Axis::V => "v_mps",
        Axis::Z0 => "z0_um",
        Axis::Omega => "omega_mhz",
        Axis::Temp => "temp_uk",
    };
    let k = wavevector(cfg, a.wavevector);
    let model = excite_model(a.model);
    let dp_ratio = a.omega_dp_mhz / a.omega_mhz;
    let quiet = SequenceOptions {
        track_rydberg: true,
        ..SequenceOptions::quiet(SOLVER)
    };

    // (v, z0, Ω/2π) at an axis node.
    let point = |x: f64| match a.axis {
        Axis::V => (x, a.z0, a.omega_mhz),
        Axis::Z0 => (a.v, x, a.omega_mhz),
        Axis::Omega => (a.v, a.z0, x),
        Axis::Temp => (a.v, a.z0, a.omega_mhz),
    };
    let single = |v: f64, z0: f64, om: f64| -> dualrail::Result<ProtocolOutcome<f64>> {
        match a.protocol {
            SweepProtocol::Excite => {
                let o = SequenceOptions {
                    solver: solver_for(model),
                    ..quiet
                };
                let r = run_excite(model, TAU * om, k, z0, v, a.t, &o)?;
                ProtocolOutcome::from_trajectory(&r, None)
            }
            SweepProtocol::Restore => {
                let p = SimulationParams::from_mhz(om, om * dp_ratio, a.omega_if_mhz, 0)?;
                let r = restore_trajectory(&p.with_motion(z0, v), k, &quiet)?;
                ProtocolOutcome::from_trajectory(&r, None)
            }
            SweepProtocol::Gap | SweepProtocol::Traditional => {
                let m = if a.protocol == SweepProtocol::Gap {
                    RestoreMethod::Gap
                } else {
                    RestoreMethod::Traditional
                };
                let p = gap_params(m, om, om * dp_ratio, a.omega_if_mhz, a.n_cycles, None)
                    .map_err(|e| dualrail::Error::Domain(format!("{e:#}")))?;
                Ok(gap_run(m, &p.with_motion(z0, v), cfg, &quiet)?.1)
            }
            SweepProtocol::Phase | SweepProtocol::Gate => unreachable!("handled separately"),
        }
    };

    let params = json!({
        "preset": cfg.name,
        "axis": axis_name,
        "protocol": format!("{:?}", a.protocol).to_lowercase(),
        "omega_mhz": a.omega_mhz,
        "omega_dp_mhz": a.omega_dp_mhz,
        "omega_if_mhz": a.omega_if_mhz,
        "n_cycles": a.n_cycles,
        "v_mps": a.v,
        "z0_um": a.z0,
        "t_us": a.t,
        "k_per_um": k,
    });

    let (header, rows): (Vec<&str>, Vec<Vec<Cell>>) = match (a.protocol, a.axis) {
        (SweepProtocol::Gate, Axis::Temp) => {
            for &t in &nodes {
                positive("temperature", t)?;
            }
            let p = GateParams::<f64>::reference(cfg, a.n_cycles)?;
            let velocities = GateGrid::uniform_velocities(0.5, a.gate_grid_points);
            let ms = methods(a.gate_method);
            let grids: Vec<GateGrid> = ms
                .iter()
                .map(|&m| GateGrid::compute(&p, m, &velocities))
                .collect::<dualrail::Result<_>>()?;
            let mut header = vec![axis_name];
            header.extend(ms.iter().map(|m| match m {
                GateMethod::DualRail => "e_ro_bar_dual_rail",
                GateMethod::Traditional => "e_ro_bar_traditional",
            }));
            let mut rows = Vec::new();
            for &t in &nodes {
                let mut r: Vec<Cell> = vec![t.into()];
                for grid in &grids {
                    r.push(grid.average(t, &cfg.species)?.into());
                }
                rows.push(r);
            }
            (header, rows)
        }
        (SweepProtocol::Gate, _) => return Err(usage("--protocol gate sweeps only the temp axis")),
        (SweepProtocol::Phase, Axis::V | Axis::Omega) => {
            let rows: Vec<Vec<Cell>> = nodes
                .par_iter()
                .map(|&x| {
                    let (v, _, om) = point(x);
                    let omega = TAU * om;
                    let phi = extract_phase_phi(omega, k, v, &SOLVER)?;
                    let ratio = phi / (TAU * k * v / omega);
                    Ok(vec![x.into(), phi.into(), ratio.into()])
                })
                .collect::<dualrail::Result<_>>()?;
            (vec![axis_name, "phi_rad", "ratio"], rows)
        }
        (SweepProtocol::Phase, _) => return Err(usage("--protocol phase sweeps v or omega")),
        (_, Axis::Temp) => {
            let grid = thermal_grid(a.grid_points)?;
            let mut rows = Vec::new();
            for &t in &nodes {
                positive("temperature", t)?;
                let (avg, _) = maxwell_average(|v| single(v, a.z0, a.omega_mhz), t, &cfg.species, &grid)?;
                rows.push(vec![
                    t.into(),
                    avg.mean_population.into(),
                    avg.mean_error.into(),
                    avg.mean_abs_phase.into(),
                    avg.max_phase_offset.into(),
                ]);
            }
            (
                vec![axis_name, "mean_population", "mean_error", "mean_abs_phase", "max_phase_offset"],
                rows,
            )
        }
        _ => {
            if a.axis == Axis::Omega && nodes[0] <= 0.0 {
                return Err(usage("omega sweep must stay positive"));
            }
            let outs: Vec<ProtocolOutcome<f64>> = nodes
                .par_iter()
                .map(|&x| {
                    let (v, z0, om) = point(x);
                    single(v, z0, om)
                })
                .collect::<dualrail::Result<_>>()?;
            let leak = a.protocol == SweepProtocol::Gap;
            let mut header = vec![
                axis_name,
                "ground_population",
                "population_error",
                "ground_phase",
                "rydberg_time_us",
            ];
            if leak {
                header.push("r3_leak");
            }
            let rows = nodes
                .iter()
                .zip(&outs)
                .map(|(&x, o)| {
                    let mut r: Vec<Cell> = vec![
                        x.into(),
                        o.ground_population.into(),
                        o.population_error.into(),
                        o.ground_phase.into(),
                        o.rydberg_time.into(),
                    ];
                    if leak {
                        r.push(o.r3_leak.unwrap_or(0.0).into());
                    }
                    r
                })
                .collect();
            (header, rows)
        }
    };
    table(g, "sweep", params, &header, &rows, Format::Csv, started)
}

fn rel_dev(computed: f64, expected: f64) -> f64 {
    (computed - expected) / expected
}

fn cmd_table(g: &Global, cfg: &AtomLaserConfig, a: &TableArgs, started: Instant) -> Result<()> {
    let header = [
        "row",
        "method",
        "temp_uk",
        "t_wait_us",
        "quantity",
        "computed",
        "expected",
        "rel_deviation",
    ];
    let keep = |r: usize| a.rows.is_empty() || a.rows.contains(&r);
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    match a.id {
        1 => {
            let grid = thermal_grid(a.grid_points.unwrap_or(201))?;
            for row in RESTORE_TABLE.iter().filter(|r| keep(r.row)) {
                let avg = compute_restore_row(row, cfg, &grid)?;
                let method = match row.method {
                    TableMethod::Gap => "dual-rail gap",
                    TableMethod::Traditional => "traditional",
                };
                let t_w = row.n_gap_cycles as f64 * SQRT_2 / 2.0;
                let base = |q: &str, c: f64, e: f64| -> Vec<Cell> {
                    vec![
                        row.row.into(),
                        method.into(),
                        row.temperature_uk.into(),
                        t_w.into(),
                        q.into(),
                        c.into(),
                        e.into(),
                        rel_dev(c, e).into(),
                    ]
                };
                rows.push(base("mean_population", avg.mean_population, row.expected_population));
                rows.push(base("mean_abs_phase", avg.mean_abs_phase, row.expected_abs_phase.unwrap_or(PI)));
            }
        }
        _ => {
            let n = a.grid_points.unwrap_or(100);
            if n < 2 {
                return Err(usage("--grid-points must be at least 2"));
            }
            let selected: Vec<_> = GATE_TABLE.iter().copied().filter(|r| keep(r.row)).collect();
            for r in compute_gate_rows(&selected, cfg, &GateGrid::uniform_velocities(0.5, n))? {
                let t_w = r.row.n_gap_cycles as f64 * SQRT_2 / 2.0;
                let base = |q: &str, c: f64, e: f64| -> Vec<Cell> {
                    vec![
                        r.row.row.into(),
                        method_name(r.row.method).into(),
                        r.row.temperature_uk.into(),
                        t_w.into(),
                        q.into(),
                        c.into(),
                        e.into(),
                        rel_dev(c, e).into(),
                    ]
                };
                rows.push(base("duration_us", r.duration, r.row.expected_duration));
                rows.push(base("e_ro_bar", r.e_ro_bar, r.row.expected_e_ro));
            }
        }
    }
    if rows.is_empty() {
        bail!(usage("no rows selected"));
    }
    let params = json!({"preset": cfg.name, "table": a.id, "grid_points": a.grid_points});
    table(g, &format!("table{}", a.id), params, &header, &rows, Format::Text, started)
}
