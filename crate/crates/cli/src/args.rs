use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dualrail",
    version,
    about = "Doppler-resilient Rydberg excitation, restoration and blockade-gate simulator"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Atom/laser preset name.
    #[arg(long, global = true, default_value = "rb87-5p12")]
    pub preset: String,
    /// Preset file replacing the built-in presets.
    #[arg(long, global = true, env = "DUALRAIL_CONFIG")]
    pub config: Option<PathBuf>,
    /// Atom separation override for the interaction table, µm.
    #[arg(long = "l-um", visible_alias = "L-um", global = true)]
    pub l_um: Option<f64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Run on a single thread.
    #[arg(long, global = true, conflicts_with = "threads")]
    pub serial: bool,
    /// Output file; standard output if omitted.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Add wall-clock time to reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

impl Global {
    pub fn init_threads(&self) -> anyhow::Result<()> {
        let n = if self.serial { Some(1) } else { self.threads };
        if let Some(n) = n {
            if n == 0 {
                anyhow::bail!(crate::UsageError("--threads must be at least 1".into()));
            }
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    SingleRail,
    DualRail,
    FourField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Wavevector {
    /// The preset's excitation wavevector.
    Preset,
    /// Counter-propagating Rb 5S–5P₁/₂–nD pair.
    Minus,
    /// Co-propagating Rb 5S–5P₁/₂–nD pair.
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RestoreMethod {
    /// Dual-rail pulses with infrared cycling in the wait.
    Gap,
    /// Single-rail π, idle wait, π at √2 Ω.
    Traditional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GateChoice {
    DualRail,
    Traditional,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    V,
    Z0,
    Omega,
    Temp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepProtocol {
    /// Continuous drive for `--t`; see `--model`.
    Excite,
    /// π excite then 3π deexcite at Ω_dp.
    Restore,
    /// Gap protocol with infrared cycling.
    Gap,
    /// Single-rail π – wait – π.
    Traditional,
    /// Phase φ at the end of a dual-rail π pulse and φ/(2πkv/Ω).
    Phase,
    /// Averaged gate rotation error (temperature axis only).
    Gate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Drive |1⟩ continuously and report the ground-state population and phase.
    Excite(ExciteArgs),
    /// π excitation followed by 3π deexcitation without a wait.
    Restore(RestoreArgs),
    /// State restoration across a wait with infrared cycling, or the single-rail baseline.
    Gap(GapArgs),
    /// Optimize the deexcitation Rabi frequency.
    Optimize(OptimizeArgs),
    /// Simulate the controlled-Z blockade gate.
    Gate(GateArgs),
    /// Sweep one parameter and write an ordered table.
    Sweep(SweepArgs),
    /// Recompute the restoration (1) or gate (2) comparison table.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct Motion {
    /// Atomic velocity along the beams, m/s.
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Initial position along the beams, µm.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub z0: f64,
    /// Maxwell-average over this temperature (µK) instead of a single velocity.
    #[arg(long)]
    pub temp_uk: Option<f64>,
    /// Velocity nodes for Maxwell averages, spanning ±5 thermal speeds.
    #[arg(long, default_value_t = 201)]
    pub grid_points: usize,
}

#[derive(Debug, Args)]
pub struct ExciteArgs {
    #[arg(long, value_enum, default_value = "four-field")]
    pub model: Model,
    /// Ω/2π, MHz.
    #[arg(long, default_value_t = 0.5)]
    pub omega_mhz: f64,
    /// Drive duration, µs.
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, value_enum, default_value = "preset")]
    pub wavevector: Wavevector,
    #[command(flatten)]
    pub motion: Motion,
    /// Write the sampled trajectory as CSV.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Trajectory samples per segment.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct RestoreArgs {
    /// Ω/2π, MHz.
    #[arg(long, default_value_t = 2.0)]
    pub omega_mhz: f64,
    /// Signed Ω_dp/2π, MHz.
    #[arg(long, allow_negative_numbers = true, default_value_t = -2.0399)]
    pub omega_dp_mhz: f64,
    #[arg(long, value_enum, default_value = "preset")]
    pub wavevector: Wavevector,
    #[command(flatten)]
    pub motion: Motion,
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[arg(long, value_enum, default_value = "gap")]
    pub method: RestoreMethod,
    /// Ω/2π, MHz; the single-rail baseline runs at √2 times this value.
    #[arg(long, default_value_t = 2.0)]
    pub omega_mhz: f64,
    /// Signed Ω_dp/2π, MHz.
    #[arg(long, allow_negative_numbers = true, default_value_t = -2.0339)]
    pub omega_dp_mhz: f64,
    /// Ω_IF/2π, MHz.
    #[arg(long, default_value_t = 2.0)]
    pub omega_if_mhz: f64,
    /// Infrared 4π cycles during the wait.
    #[arg(long, default_value_t = 1)]
    pub n_cycles: u32,
    /// Wait time, µs; must equal 4nπ/(√2 Ω_IF) for the gap method.
    #[arg(long)]
    pub t_wait_us: Option<f64>,
    #[command(flatten)]
    pub motion: Motion,
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Ω/2π, MHz.
    #[arg(long, default_value_t = 2.0)]
    pub omega_mhz: f64,
    /// Sign of Ω_dp.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1, value_parser = clap::value_parser!(i32).range(-1..=1))]
    pub sign: i32,
    /// Reference velocity, m/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.05)]
    pub v_ref: f64,
    /// Relative half-width of the search bracket around |Ω|.
    #[arg(long, default_value_t = 0.1)]
    pub bracket: f64,
    #[arg(long, value_enum, default_value = "preset")]
    pub wavevector: Wavevector,
}

#[derive(Debug, Args)]
pub struct GateParamsArgs {
    /// Control Ω/2π, MHz; the baseline gate runs at √2 times this value.
    #[arg(long, default_value_t = 2.0)]
    pub omega_mhz: f64,
    /// Control Ω_dp/2π, MHz.
    #[arg(long, allow_negative_numbers = true, default_value_t = -2.0339)]
    pub omega_dp_mhz: f64,
    /// Target Ω_t/2π, MHz.
    #[arg(long, default_value_t = 2.0)]
    pub omega_t_mhz: f64,
    /// Target 3π Rabi frequency /2π, MHz; defaults to −Ω_t.
    #[arg(long, allow_negative_numbers = true)]
    pub omega_t_dp_mhz: Option<f64>,
    /// Ω_IF/2π, MHz.
    #[arg(long, default_value_t = 2.0)]
    pub omega_if_mhz: f64,
    #[arg(long, default_value_t = 1)]
    pub n_cycles: u32,
    /// Control initial position, µm.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub z0c: f64,
    /// Target initial position, µm.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub z0t: f64,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub method: GateChoice,
    #[command(flatten)]
    pub params: GateParamsArgs,
    /// Control velocity for the single-point report, m/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub vc: f64,
    /// Target velocity for the single-point report, m/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub vt: f64,
    /// Temperatures (µK) for the velocity-grid average; none skips the grid.
    #[arg(long, value_delimiter = ',')]
    pub temp_uk: Vec<f64>,
    /// Velocities per atom on [−v_max, v_max].
    #[arg(long, default_value_t = 100)]
    pub grid_points: usize,
    /// Grid half-width, m/s.
    #[arg(long, default_value_t = 0.5)]
    pub v_max: f64,
    /// Write the rotation-error grid (v_c, v_t, E_ro) as CSV.
    #[arg(long)]
    pub grid_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub axis: Axis,
    #[arg(long, value_enum, default_value = "restore")]
    pub protocol: SweepProtocol,
    /// First axis value (m/s, µm, MHz or µK).
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    /// Last axis value.
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    /// Number of points, endpoints included.
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "dual-rail")]
    pub model: Model,
    #[arg(long, value_enum, default_value = "preset")]
    pub wavevector: Wavevector,
    /// Ω/2π, MHz (the axis value when sweeping omega).
    #[arg(long, default_value_t = 2.0)]
    pub omega_mhz: f64,
    /// Signed Ω_dp/2π, MHz; an omega sweep keeps Ω_dp/Ω fixed.
    #[arg(long, allow_negative_numbers = true, default_value_t = -2.0339)]
    pub omega_dp_mhz: f64,
    /// Ω_IF/2π, MHz.
    #[arg(long, default_value_t = 2.0)]
    pub omega_if_mhz: f64,
    #[arg(long, default_value_t = 1)]
    pub n_cycles: u32,
    /// Drive duration for the excite protocol, µs.
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    /// Velocity when it is not the axis, m/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.05)]
    pub v: f64,
    /// Initial position when it is not the axis, µm.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub z0: f64,
    /// Velocity nodes for temperature sweeps.
    #[arg(long, default_value_t = 201)]
    pub grid_points: usize,
    /// Gate method for `--protocol gate`.
    #[arg(long, value_enum, default_value = "dual-rail")]
    pub gate_method: GateChoice,
    /// Velocities per atom for `--protocol gate`.
    #[arg(long, default_value_t = 100)]
    pub gate_grid_points: usize,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// 1: restoration table; 2: gate table.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    pub id: u8,
    /// Restrict to these rows.
    #[arg(long, value_delimiter = ',')]
    pub rows: Vec<usize>,
    /// Velocity nodes (table 1: thermal grid; table 2: per atom).
    #[arg(long)]
    pub grid_points: Option<usize>,
}
