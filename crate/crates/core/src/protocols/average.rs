//! Maxwell averaging of single-atom outcomes over a velocity grid.

use rayon::prelude::*;
use serde::Serialize;

use super::ProtocolOutcome;
use crate::error::{domain, Error, Result};
use crate::model::{maxwell_weight, AtomSpecies};
use crate::scalar::{lit, to_f64, Real};

/// Velocity nodes to average over.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VelocityGrid {
    /// `points` uniform nodes on `±half_width` thermal speeds.
    Thermal { points: usize, half_width: f64 },
    /// `points` uniform nodes on `[min, max]` m/s, endpoints included.
    Uniform { min: f64, max: f64, points: usize },
    /// A single velocity; weight-mass checks are skipped.
    Delta(f64),
}

impl Default for VelocityGrid {
    fn default() -> Self {
        VelocityGrid::Thermal {
            points: 201,
            half_width: 5.0,
        }
    }
}

impl VelocityGrid {
    /// Nodes in m/s for a thermal speed `sigma`.
    pub fn nodes(&self, sigma: f64) -> Result<Vec<f64>> {
        let uniform = |lo: f64, hi: f64, n: usize| -> Result<Vec<f64>> {
            if n < 2 || !(hi > lo) {
                return Err(domain("velocity grid needs at least two points and max > min"));
            }
            Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
        };
        match *self {
            VelocityGrid::Thermal { points, half_width } => uniform(-half_width * sigma, half_width * sigma, points),
            VelocityGrid::Uniform { min, max, points } => uniform(min, max, points),
            VelocityGrid::Delta(v) => Ok(vec![v]),
        }
    }
}

/// Weighted means over a velocity grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AveragedOutcome<T> {
    pub mean_population: T,
    pub mean_error: T,
    pub mean_abs_phase: T,
    /// Largest `||arg⟨1|ψ⟩| − π|` over the grid.
    pub max_phase_offset: T,
    pub mean_r3_leak: Option<T>,
    pub mean_rydberg_time: T,
    /// Fraction of the continuum distribution the grid represents.
    pub weight_mass: f64,
    pub points: usize,
    pub temperature_uk: f64,
}

/// `(v, outcome)` at every grid node.
pub type PerVelocity<T> = Vec<(f64, ProtocolOutcome<T>)>;

/// Runs `runner` on every grid velocity in parallel and reduces in grid order
/// with normalized Maxwell weights.
pub fn maxwell_average<T, F>(
    runner: F,
    temperature_uk: f64,
    species: &AtomSpecies,
    grid: &VelocityGrid,
) -> Result<(AveragedOutcome<T>, PerVelocity<T>)>
where
    T: Real,
    F: Fn(T) -> Result<ProtocolOutcome<T>> + Sync,
{
    let sigma = species.thermal_speed(temperature_uk.max(0.0));
    if !matches!(grid, VelocityGrid::Delta(_)) && !(temperature_uk > 0.0) {
        return Err(domain(format!("temperature must be positive, got {temperature_uk} µK")));
    }
    let nodes = grid.nodes(sigma)?;
    let weights: Vec<f64> = match grid {
        VelocityGrid::Delta(_) => vec![1.0],
        _ => nodes
            .iter()
            .map(|&v| maxwell_weight(v, temperature_uk, species))
            .collect::<Result<_>>()?,
    };
    let weight_mass = match grid {
        VelocityGrid::Delta(_) => 1.0,
        _ => {
            let dv = nodes[1] - nodes[0];
            weights.iter().sum::<f64>() * dv / (sigma * (std::f64::consts::TAU).sqrt())
        }
    };
    if weight_mass < 0.999 {
        return Err(Error::Convergence {
            mass: weight_mass,
            required: 0.999,
        });
    }

    let outcomes: Vec<ProtocolOutcome<T>> = nodes.par_iter().map(|&v| runner(lit(v))).collect::<Result<_>>()?;
    let wsum: f64 = weights.iter().sum();
    let mut acc = [0.0f64; 5];
    let mut max_off = T::zero();
    let mut any_leak = false;
    for (o, &w) in outcomes.iter().zip(&weights) {
        let w = w / wsum;
        acc[0] += w * to_f64(o.ground_population);
        acc[1] += w * to_f64(o.population_error);
        acc[2] += w * to_f64(o.ground_phase.abs());
        acc[3] += w * to_f64(o.rydberg_time);
        if let Some(l) = o.r3_leak {
            any_leak = true;
            acc[4] += w * to_f64(l);
        }
        max_off = max_off.max(o.phase_offset_from_pi().abs());
    }
    let avg = AveragedOutcome {
        mean_population: lit(acc[0]),
        mean_error: lit(acc[1]),
        mean_abs_phase: lit(acc[2]),
        max_phase_offset: max_off,
        mean_r3_leak: any_leak.then(|| lit(acc[4])),
        mean_rydberg_time: lit(acc[3]),
        weight_mass,
        points: nodes.len(),
        temperature_uk,
    };
    Ok((avg, nodes.into_iter().zip(outcomes).collect()))
}
