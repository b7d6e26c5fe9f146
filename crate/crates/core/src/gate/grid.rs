use rayon::prelude::*;
use serde::Serialize;

use super::sim::simulate_inputs;
use super::{rotation_error, simulate_gate, GateMethod, GateParams};
use crate::error::Result;
use crate::model::{maxwell_weight, AtomSpecies};
use crate::scalar::{lit, to_f64, Real};

/// Rotation error on a square `(v_c, v_t)` grid, row-major in `v_c`.
#[derive(Clone, Debug, Serialize)]
pub struct GateGrid {
    pub method: GateMethod,
    pub velocities: Vec<f64>,
    pub e_ro: Vec<f64>,
}

impl GateGrid {
    /// `points` velocities uniform on `[−v_max, v_max]`, endpoints included.
    pub fn uniform_velocities(v_max: f64, points: usize) -> Vec<f64> {
        (0..points).map(|i| -v_max + 2.0 * v_max * i as f64 / (points - 1) as f64).collect()
    }

    /// The 100 × 100 grid on ±0.5 m/s.
    pub fn default_velocities() -> Vec<f64> {
        Self::uniform_velocities(0.5, 100)
    }

    pub fn compute<T: Real>(p: &GateParams<T>, method: GateMethod, velocities: &[f64]) -> Result<Self> {
        p.validate()?;
        let rows: Vec<Vec<f64>> = velocities
            .par_iter()
            .map(|&vc| {
                velocities
                    .iter()
                    .map(|&vt| {
                        let [a, b, c] = simulate_inputs(p, method, lit(vc), lit(vt), false)?;
                        Ok(to_f64(rotation_error(a.amplitude, b.amplitude, c.amplitude)))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            method,
            velocities: velocities.to_vec(),
            e_ro: rows.concat(),
        })
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.e_ro[i * self.velocities.len() + j]
    }

    /// `Σ G(v_c) G(v_t) E_ro / Σ G(v_c) G(v_t)`.
    pub fn average(&self, temperature_uk: f64, species: &AtomSpecies) -> Result<f64> {
        let g: Vec<f64> = self
            .velocities
            .iter()
            .map(|&v| maxwell_weight(v, temperature_uk, species))
            .collect::<Result<_>>()?;
        let n = self.velocities.len();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let w = g[i] * g[j];
                num += w * self.e_ro[i * n + j];
                den += w;
            }
        }
        Ok(num / den)
    }
}

/// `Ē_ro` on the default 100 × 100 grid.
pub fn averaged_rotation_error<T: Real>(p: &GateParams<T>, temperature_uk: f64, species: &AtomSpecies, method: GateMethod) -> Result<f64> {
    GateGrid::compute(p, method, &GateGrid::default_velocities())?.average(temperature_uk, species)
}

#[derive(Clone, Debug, Serialize)]
pub struct FidelityReport {
    pub method: GateMethod,
    pub temperature_uk: f64,
    pub e_ro_bar: f64,
    /// From numerically integrated Rydberg times at `v_c = v_t = 0`.
    pub e_decay: f64,
    pub e_decay_analytic: f64,
    pub fidelity: f64,
    pub duration_us: f64,
}

/// `F = 1 − Ē_ro − E_decay`, reusing a precomputed grid.
pub fn fidelity<T: Real>(p: &GateParams<T>, grid: &GateGrid, temperature_uk: f64, species: &AtomSpecies) -> Result<FidelityReport> {
    let e_ro_bar = grid.average(temperature_uk, species)?;
    let rest = simulate_gate(p, grid.method, T::zero(), T::zero())?;
    let e_decay = to_f64(rest.e_decay);
    Ok(FidelityReport {
        method: grid.method,
        temperature_uk,
        e_ro_bar,
        e_decay,
        e_decay_analytic: to_f64(rest.e_decay_analytic),
        fidelity: 1.0 - e_ro_bar - e_decay,
        duration_us: to_f64(rest.duration),
    })
}
