//! Atom/laser presets loaded from TOML. The schema is documented at the top of
//! `presets.toml`, which also supplies the built-in set.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use serde::Deserialize;

use super::{two_photon_wavevector, AtomLaserConfig, AtomSpecies, InteractionTable, WavevectorSet};
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../presets.toml");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSpec {
    pub name: String,
    pub species: String,
    pub mass_kg: f64,
    pub tau_us: f64,
    pub lambda_lower_nm: f64,
    pub lambda_upper_nm: f64,
    pub counterpropagating: bool,
    pub lambda_ir_nm: Option<f64>,
    #[serde(default = "default_true")]
    pub ir_counterpropagating: bool,
    pub reported_mismatch: Option<f64>,
    #[serde(rename = "L_um")]
    pub l_um: Option<f64>,
    pub rydberg_levels: Option<[u32; 3]>,
    pub c6: Option<BTreeMap<String, f64>>,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetFile {
    #[serde(rename = "preset")]
    pub presets: Vec<PresetSpec>,
}

impl PresetSpec {
    pub fn build(&self) -> Result<AtomLaserConfig> {
        let cfg = |m: String| Error::Config(format!("preset {}: {m}", self.name));
        let species = AtomSpecies::new(&self.species, self.mass_kg, self.tau_us)?;
        for l in [Some(self.lambda_lower_nm), Some(self.lambda_upper_nm), self.lambda_ir_nm]
            .into_iter()
            .flatten()
        {
            if !(l > 0.0 && l.is_finite()) {
                return Err(cfg(format!("wavelength {l} nm must be positive")));
            }
        }
        let k = two_photon_wavevector(self.lambda_lower_nm, self.lambda_upper_nm, self.counterpropagating);
        let k_wait = match (self.lambda_ir_nm, self.reported_mismatch) {
            (Some(l), _) => {
                if self.ir_counterpropagating {
                    2.0 * TAU * 1e3 / l
                } else {
                    0.0
                }
            }
            (None, Some(m)) => k * (1.0 + m),
            (None, None) => return Err(cfg("needs lambda_ir_nm or reported_mismatch".into())),
        };
        let wavevectors = WavevectorSet::new(&self.name, k, k_wait)?;

        let interactions = match (&self.c6, self.l_um, self.rydberg_levels) {
            (None, _, _) => None,
            (Some(c6), Some(l), Some(levels)) => {
                let mut t = InteractionTable::new(l, levels)?;
                for (key, &val) in c6 {
                    let (a, b) = parse_pair(key).ok_or_else(|| cfg(format!("bad c6 key {key:?}")))?;
                    t.insert(a, b, val);
                }
                Some(t)
            }
            _ => return Err(cfg("c6 requires L_um and rydberg_levels".into())),
        };

        Ok(AtomLaserConfig {
            name: self.name.clone(),
            species,
            wavevectors,
            reported_mismatch: self.reported_mismatch,
            interactions,
        })
    }
}

fn parse_pair(s: &str) -> Option<(u32, u32)> {
    let (a, b) = s.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

pub fn parse_presets(text: &str) -> Result<Vec<AtomLaserConfig>> {
    let file: PresetFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    file.presets.iter().map(PresetSpec::build).collect()
}

pub fn load_presets(path: &Path) -> Result<Vec<AtomLaserConfig>> {
    parse_presets(&std::fs::read_to_string(path)?)
}

/// Built-in presets; the first one is the default configuration.
pub fn builtin_configs() -> Vec<AtomLaserConfig> {
    parse_presets(BUILTIN).expect("built-in presets parse")
}

pub fn find_preset<'a>(configs: &'a [AtomLaserConfig], name: &str) -> Result<&'a AtomLaserConfig> {
    configs.iter().find(|c| c.name == name).ok_or_else(|| {
        let names: Vec<_> = configs.iter().map(|c| c.name.as_str()).collect();
        Error::Lookup(format!("unknown preset {name:?}; available: {}", names.join(", ")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_set() {
        let all = builtin_configs();
        assert_eq!(all.len(), 5);
        let rb = find_preset(&all, "rb87-5p12").unwrap();
        assert!((rb.wavevectors.k_excite - 5.3523).abs() < 1e-3);
        assert!((rb.wavevectors.k_wait - 5.5315).abs() < 1e-3);
        assert_eq!(rb.interactions().unwrap(), &InteractionTable::rubidium_default());
        assert!(find_preset(&all, "cs133-6p12").unwrap().interactions().is_err());
        assert!(find_preset(&all, "nope").is_err());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_presets("[[preset]]\nname = 'x'").is_err());
        let text = BUILTIN.replace("lambda_ir_nm = 2271.8", "lambda_ir_nm = -1.0");
        assert!(parse_presets(&text).is_err());
        let text = BUILTIN.replace("L_um = 7.0\n", "");
        assert!(parse_presets(&text).is_err());
        let text = BUILTIN.replace("mass_kg = 1.443161e-25", "mass = 1.0");
        assert!(parse_presets(&text).is_err());
    }
}
