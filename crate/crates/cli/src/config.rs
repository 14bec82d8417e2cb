//! Scenario configuration: a flat text file of `[section]` headers and
//! `key = value` lines, or `section.key = value` lines. `#` starts a
//! comment. Every key has a default; unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamDirection {
    HeadOn,
    CoPropagating,
}

impl BeamDirection {
    fn parse(key: &str, v: &str) -> Result<Self, ConfigError> {
        match v {
            "head_on" => Ok(BeamDirection::HeadOn),
            "co_propagating" => Ok(BeamDirection::CoPropagating),
            _ => Err(ConfigError::invalid(key, v, "expected `head_on` or `co_propagating`")),
        }
    }

    fn name(self) -> &'static str {
        match self {
            BeamDirection::HeadOn => "head_on",
            BeamDirection::CoPropagating => "co_propagating",
        }
    }

    pub fn to_core(self) -> wiggler_core::Direction {
        match self {
            BeamDirection::HeadOn => wiggler_core::Direction::HeadOn,
            BeamDirection::CoPropagating => wiggler_core::Direction::CoPropagating,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaserSection {
    pub wavelength_nm: f64,
    pub intensity_w_m2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamSection {
    pub energy_mev: f64,
    pub direction: BeamDirection,
    /// +1 or -1.
    pub spin: i32,
    pub density_m3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub theta_points: usize,
    pub energy_min_mev: f64,
    pub energy_max_mev: f64,
    pub energy_points: usize,
    pub harmonic_max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeSection {
    pub section_length_m: f64,
    pub sections: usize,
    /// Photon density entering the first section, m^-3.
    pub seed_density: f64,
    pub reflection_efficiency: f64,
    pub cycles: usize,
    pub profile_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceSection {
    pub probe_energy_mev: f64,
    pub probe_direction: BeamDirection,
    pub radiation_energy_kev: f64,
    pub radiation_intensity_w_m2: f64,
    pub theta_over_pi: f64,
    pub measured_shift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub path: Option<String>,
    pub format: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub laser: LaserSection,
    pub beam: BeamSection,
    pub sweep: SweepSection,
    pub tube: TubeSection,
    pub coherence: CoherenceSection,
    pub output: OutputSection,
}

impl Default for ScenarioConfig {
    /// 307 MeV electrons against a 785 nm, 10^19 W/m^2 laser.
    fn default() -> Self {
        Self {
            laser: LaserSection { wavelength_nm: 785.0, intensity_w_m2: 1e19 },
            beam: BeamSection {
                energy_mev: 307.0,
                direction: BeamDirection::HeadOn,
                spin: 1,
                density_m3: 1e18,
            },
            sweep: SweepSection {
                theta_points: 2000,
                energy_min_mev: 100.0,
                energy_max_mev: 1000.0,
                energy_points: 181,
                harmonic_max: 8,
            },
            tube: TubeSection {
                section_length_m: 0.01,
                sections: 1,
                seed_density: 0.0,
                reflection_efficiency: 1.0,
                cycles: 1,
                profile_points: 101,
            },
            coherence: CoherenceSection {
                probe_energy_mev: 5.135,
                probe_direction: BeamDirection::CoPropagating,
                radiation_energy_kev: 1.424,
                radiation_intensity_w_m2: 1e26,
                theta_over_pi: 1.0,
                measured_shift: None,
            },
            output: OutputSection { path: None, format: "csv".into() },
        }
    }
}

fn real(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v.parse().map_err(|_| ConfigError::invalid(key, v, "not a number"))?;
    if !x.is_finite() {
        return Err(ConfigError::invalid(key, v, "must be finite"));
    }
    Ok(x)
}

fn non_negative(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x = real(key, v)?;
    if x < 0.0 {
        return Err(ConfigError::invalid(key, v, "must be non-negative"));
    }
    Ok(x)
}

fn positive(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x = real(key, v)?;
    if x <= 0.0 {
        return Err(ConfigError::invalid(key, v, "must be positive"));
    }
    Ok(x)
}

fn count(key: &str, v: &str) -> Result<usize, ConfigError> {
    let n: usize = v.parse().map_err(|_| ConfigError::invalid(key, v, "not a non-negative integer"))?;
    if n == 0 {
        return Err(ConfigError::invalid(key, v, "must be at least 1"));
    }
    Ok(n)
}

fn fmt(x: f64) -> String {
    format!("{x:e}")
}

impl ScenarioConfig {
    /// Sets one `section.key` from its text value.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        match key {
            "laser.wavelength_nm" => self.laser.wavelength_nm = positive(key, v)?,
            "laser.intensity_W_m2" => self.laser.intensity_w_m2 = non_negative(key, v)?,
            "beam.energy_MeV" => {
                let e = real(key, v)?;
                if e < 0.510_998_95 {
                    return Err(ConfigError::invalid(key, v, "below the electron rest energy 0.51099895 MeV"));
                }
                self.beam.energy_mev = e;
            }
            "beam.direction" => self.beam.direction = BeamDirection::parse(key, v)?,
            "beam.spin" => {
                self.beam.spin = match v {
                    "1" | "+1" | "up" => 1,
                    "-1" | "down" => -1,
                    _ => return Err(ConfigError::invalid(key, v, "expected +1 or -1")),
                }
            }
            "beam.density_m3" => self.beam.density_m3 = non_negative(key, v)?,
            "sweep.theta_points" => self.sweep.theta_points = count(key, v)?,
            "sweep.energy_min_MeV" => self.sweep.energy_min_mev = positive(key, v)?,
            "sweep.energy_max_MeV" => self.sweep.energy_max_mev = positive(key, v)?,
            "sweep.energy_points" => self.sweep.energy_points = count(key, v)?,
            "sweep.harmonic_max" => {
                let n = count(key, v)?;
                self.sweep.harmonic_max =
                    u32::try_from(n).map_err(|_| ConfigError::invalid(key, v, "too large"))?;
            }
            "tube.section_length_m" => self.tube.section_length_m = non_negative(key, v)?,
            "tube.sections" => self.tube.sections = count(key, v)?,
            "tube.seed_density" => self.tube.seed_density = non_negative(key, v)?,
            "tube.reflection_efficiency" => {
                let eta = real(key, v)?;
                if !(0.0..=1.0).contains(&eta) {
                    return Err(ConfigError::invalid(key, v, "must lie in [0, 1]"));
                }
                self.tube.reflection_efficiency = eta;
            }
            "tube.cycles" => self.tube.cycles = count(key, v)?,
            "tube.profile_points" => {
                let n = count(key, v)?;
                if n < 2 {
                    return Err(ConfigError::invalid(key, v, "must be at least 2"));
                }
                self.tube.profile_points = n;
            }
            "coherence.probe_energy_MeV" => {
                let e = real(key, v)?;
                if e < 0.510_998_95 {
                    return Err(ConfigError::invalid(key, v, "below the electron rest energy 0.51099895 MeV"));
                }
                self.coherence.probe_energy_mev = e;
            }
            "coherence.probe_direction" => self.coherence.probe_direction = BeamDirection::parse(key, v)?,
            "coherence.radiation_energy_keV" => self.coherence.radiation_energy_kev = positive(key, v)?,
            "coherence.radiation_intensity_W_m2" => {
                self.coherence.radiation_intensity_w_m2 = non_negative(key, v)?
            }
            "coherence.theta_over_pi" => {
                let t = real(key, v)?;
                if !(0.0..=1.0).contains(&t) {
                    return Err(ConfigError::invalid(key, v, "must lie in [0, 1]"));
                }
                self.coherence.theta_over_pi = t;
            }
            "coherence.measured_shift" => {
                self.coherence.measured_shift = match v {
                    "" | "none" => None,
                    _ => Some(non_negative(key, v)?),
                }
            }
            "output.path" => self.output.path = if v.is_empty() { None } else { Some(v.to_string()) },
            "output.format" => {
                if v != "csv" {
                    return Err(ConfigError::invalid(key, v, "only `csv` is supported"));
                }
                self.output.format = v.to_string();
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Checks relations between keys.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.sweep;
        if s.energy_min_mev > s.energy_max_mev {
            return Err(ConfigError::invalid(
                "sweep.energy_min_MeV",
                &fmt(s.energy_min_mev),
                format!("exceeds sweep.energy_max_MeV = {}", fmt(s.energy_max_mev)),
            ));
        }
        if s.energy_min_mev < 0.510_998_95 {
            return Err(ConfigError::invalid(
                "sweep.energy_min_MeV",
                &fmt(s.energy_min_mev),
                "below the electron rest energy 0.51099895 MeV",
            ));
        }
        Ok(())
    }

    /// Effective configuration as `section.key = value` lines in a fixed
    /// order.
    pub fn echo(&self) -> Vec<(String, String)> {
        let c = self;
        let mut out = vec![
            ("laser.wavelength_nm", fmt(c.laser.wavelength_nm)),
            ("laser.intensity_W_m2", fmt(c.laser.intensity_w_m2)),
            ("beam.energy_MeV", fmt(c.beam.energy_mev)),
            ("beam.direction", c.beam.direction.name().into()),
            ("beam.spin", format!("{:+}", c.beam.spin)),
            ("beam.density_m3", fmt(c.beam.density_m3)),
            ("sweep.theta_points", c.sweep.theta_points.to_string()),
            ("sweep.energy_min_MeV", fmt(c.sweep.energy_min_mev)),
            ("sweep.energy_max_MeV", fmt(c.sweep.energy_max_mev)),
            ("sweep.energy_points", c.sweep.energy_points.to_string()),
            ("sweep.harmonic_max", c.sweep.harmonic_max.to_string()),
            ("tube.section_length_m", fmt(c.tube.section_length_m)),
            ("tube.sections", c.tube.sections.to_string()),
            ("tube.seed_density", fmt(c.tube.seed_density)),
            ("tube.reflection_efficiency", fmt(c.tube.reflection_efficiency)),
            ("tube.cycles", c.tube.cycles.to_string()),
            ("tube.profile_points", c.tube.profile_points.to_string()),
            ("coherence.probe_energy_MeV", fmt(c.coherence.probe_energy_mev)),
            ("coherence.probe_direction", c.coherence.probe_direction.name().into()),
            ("coherence.radiation_energy_keV", fmt(c.coherence.radiation_energy_kev)),
            ("coherence.radiation_intensity_W_m2", fmt(c.coherence.radiation_intensity_w_m2)),
            ("coherence.theta_over_pi", fmt(c.coherence.theta_over_pi)),
            (
                "coherence.measured_shift",
                c.coherence.measured_shift.map(fmt).unwrap_or_else(|| "none".into()),
            ),
            ("output.format", c.output.format.clone()),
        ];
        // the output path does not change results and stays out of the echo
        out.sort_by(|a, b| a.0.cmp(b.0));
        out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// SHA-256 of the echo, hex encoded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.echo() {
            h.update(k.as_bytes());
            h.update(b" = ");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

/// Applies the lines of a configuration document on top of `cfg`.
pub fn apply_document(cfg: &mut ScenarioConfig, text: &str, origin: &str) -> Result<(), ConfigError> {
    let mut section: Option<String> = None;
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = || ConfigError::Syntax { origin: origin.into(), line: i + 1, text: raw.trim().into() };
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(syntax)?.trim();
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '.') {
                return Err(syntax());
            }
            section = Some(name.to_string());
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(syntax)?;
        let (k, v) = (k.trim(), v.trim().trim_matches('"'));
        if k.is_empty() {
            return Err(syntax());
        }
        let key = match (&section, k.contains('.')) {
            (_, true) => k.to_string(),
            (Some(s), false) => format!("{s}.{k}"),
            (None, false) => return Err(ConfigError::UnknownKey(k.to_string())),
        };
        if !seen.insert(key.clone()) {
            return Err(ConfigError::Duplicate { origin: origin.into(), line: i + 1, key });
        }
        cfg.set(&key, v)?;
    }
    Ok(())
}

/// Parses `section.key=value` overrides such as those given on the command
/// line.
pub fn apply_overrides<S: AsRef<str>>(cfg: &mut ScenarioConfig, overrides: &[S]) -> Result<(), ConfigError> {
    for o in overrides {
        let o = o.as_ref();
        let (k, v) = o.split_once('=').ok_or_else(|| ConfigError::Syntax {
            origin: "--set".into(),
            line: 0,
            text: o.into(),
        })?;
        cfg.set(k.trim(), v.trim())?;
    }
    Ok(())
}

/// Defaults, then the optional file, then the overrides.
pub fn parse_config<S: AsRef<str>>(path: Option<&Path>, overrides: &[S]) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = ScenarioConfig::default();
    if let Some(p) = path {
        let text = std::fs::read_to_string(p)
            .map_err(|source| ConfigError::Read { path: p.display().to_string(), source })?;
        apply_document(&mut cfg, &text, &p.display().to_string())?;
    }
    apply_overrides(&mut cfg, overrides)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parses a configuration document held in memory.
pub fn parse_config_str<S: AsRef<str>>(text: &str, overrides: &[S]) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = ScenarioConfig::default();
    apply_document(&mut cfg, text, "<string>")?;
    apply_overrides(&mut cfg, overrides)?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NONE: [&str; 0] = [];

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(parse_config_str("", &NONE).unwrap(), ScenarioConfig::default());
        assert_eq!(parse_config_str("# nothing\n\n", &NONE).unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn sections_and_dotted_keys() {
        let c = parse_config_str(
            "[beam]\nenergy_MeV = 7.68  # soft\nspin = -1\n\nlaser.intensity_W_m2 = 2e19\n[tube]\nsections=100\n",
            &NONE,
        )
        .unwrap();
        assert_eq!(c.beam.energy_mev, 7.68);
        assert_eq!(c.beam.spin, -1);
        assert_eq!(c.laser.intensity_w_m2, 2e19);
        assert_eq!(c.tube.sections, 100);
    }

    #[test]
    fn overrides_win() {
        let c = parse_config_str("beam.energy_MeV = 100", &["beam.energy_MeV=7.68"]).unwrap();
        assert_eq!(c.beam.energy_mev, 7.68);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let e = parse_config_str("[beam]\nenergy_mev = 7", &NONE).unwrap_err();
        assert!(matches!(e, ConfigError::UnknownKey(ref k) if k == "beam.energy_mev"));
        assert!(parse_config_str("energy_MeV = 7", &NONE).is_err());
        assert!(parse_config_str("", &["nope.key=1"]).is_err());
    }

    #[test]
    fn bad_values_name_the_key() {
        let e = parse_config_str("laser.wavelength_nm = abc", &NONE).unwrap_err();
        assert!(e.to_string().contains("laser.wavelength_nm"), "{e}");
        let e = parse_config_str("", &["tube.reflection_efficiency=1.5"]).unwrap_err();
        assert!(e.to_string().contains("tube.reflection_efficiency"));
        let e = parse_config_str("", &["sweep.energy_min_MeV=2000"]).unwrap_err();
        assert!(e.to_string().contains("sweep.energy_min_MeV"));
        assert!(parse_config_str("[beam\n", &NONE).is_err());
        assert!(parse_config_str("beam.spin = 1\nbeam.spin = -1", &NONE).is_err());
    }

    #[test]
    fn hash_tracks_effective_values() {
        let a = ScenarioConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.set("beam.energy_MeV", "7.68").unwrap();
        assert_ne!(a.hash(), b.hash());
        let mut c = a.clone();
        c.set("output.path", "x.csv").unwrap();
        assert_eq!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
