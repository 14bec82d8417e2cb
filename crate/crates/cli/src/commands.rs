use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex;
use rayon::prelude::*;
use wiggler_core::amplitudes::{normalize_phase, PolarizationBasis};
use wiggler_core::emission::{angular_spectrum, theta_grid, Truncation};
use wiggler_core::kinematics::{emitted_photon_energy, wiggling_radius, CoherenceProbe};
use wiggler_core::physcore::units;
use wiggler_core::tube::{run_cyclic, run_multi_section, TubeScenario};
use wiggler_core::{critical_density, make_beam, ElectronBeam, LaserField, Spin};

use crate::config::ScenarioConfig;
use crate::csv::CsvTable;
use crate::error::CliError;
use crate::report::RunReport;

pub const FORWARD_ENERGY: &str =
    "k' = N k (E - p_z) / (E + N k + (eA)^2/(2(E - p_z)) - (p_z + N k + (eA)^2/(2(E - p_z))) cos(theta)), theta = pi, N = 1";
pub const GAIN_LENGTH: &str =
    "lambda_c / a, a = spin-averaged dSigma/dOmega at theta = pi and zero occupation, per unit solid angle";
pub const AVERAGED: &str = "(1/2) sum over photon polarizations, beam spins and final spins of dSigma/dOmega";
pub const AMPLITUDE: &str = "eA = sqrt(alpha lambda_c lambda^2 I / (pi m c^3))";
pub const CRITICAL: &str = "n_c = (eA k / alpha)^(3/2) / lambda_c^3";
pub const RADIUS: &str = "R = eA / (k (E - p_z))";
pub const INTENSITY: &str = "I = N hbar omega' c";
pub const ASYMPTOTE: &str = "N_inf = N0 + n0 - n*, n* the smaller root of 2 n^2 - (2 N0 + 3 n0 + 1) n + n0 (n0 + N0)";
pub const HALF_RULE: &str = "N = N0 + kappa n0 / 2, dense-beam limit of the section asymptote";
pub const SHIFT: &str = "(eA sin(theta/2))^2 / ((E - p_z)(E + k - (p_z + k) cos(theta)))";
pub const COMPTON: &str = "k0' = k (E - p_z) / (E + k - (p_z + k) cos(theta))";
pub const INVERSION: &str = "I_coherent = measured shift / (shift per unit intensity)";

/// CSV table (when the command produces one) and report of a command run.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub table: Option<CsvTable>,
    pub report: RunReport,
}

pub fn laser_of(cfg: &ScenarioConfig) -> Result<LaserField<f64>, CliError> {
    Ok(LaserField::new(cfg.laser.wavelength_nm * 1e-9, cfg.laser.intensity_w_m2)?)
}

pub fn beam_of(cfg: &ScenarioConfig) -> Result<ElectronBeam<f64>, CliError> {
    let spin = Spin::from_sign(cfg.beam.spin).unwrap_or_default();
    Ok(make_beam(cfg.beam.energy_mev, cfg.beam.direction.to_core(), spin, cfg.beam.density_m3)?)
}

fn truncation(cfg: &ScenarioConfig) -> Truncation<f64> {
    Truncation { max_harmonic: cfg.sweep.harmonic_max, ..Truncation::default() }
}

fn mev(k: f64) -> f64 {
    k * units::<f64>().electron_mass_mev
}

/// Forward photon energy over the beam-energy sweep.
pub fn cmd_kinematics(cfg: &ScenarioConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    let laser = laser_of(cfg)?;
    let base = beam_of(cfg)?;
    let s = &cfg.sweep;
    let energies: Vec<f64> = if s.energy_points == 1 {
        vec![s.energy_min_mev]
    } else {
        theta_grid(s.energy_min_mev, s.energy_max_mev, s.energy_points)
    };
    let rows = energies
        .par_iter()
        .map(|&e| {
            let beam = make_beam(e, base.direction(), base.spin(), base.density_m3())?;
            Ok(vec![e, mev(emitted_photon_energy(PI, 1, &beam, &laser)?)])
        })
        .collect::<Result<Vec<_>, wiggler_core::PhysicsError>>()?;
    let mut table = CsvTable::new("kinematics", cfg, &["E_MeV", "k_prime_MeV"]);
    rows.into_iter().for_each(|r| table.push(r));

    let mut report = RunReport::new("kinematics", cfg);
    report.add("k_prime_forward", mev(emitted_photon_energy(PI, 1, &base, &laser)?), "MeV", FORWARD_ENERGY);
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(CommandOutput { table: Some(table), report })
}

/// Cartesian `(x, y)` components of the dominant polarization, phase fixed
/// on the full three-vector.
fn cartesian_polarization(theta: f64, c: [Complex<f64>; 2]) -> Result<[Complex<f64>; 3], CliError> {
    Ok(normalize_phase(PolarizationBasis::new(theta, 0.0).combine(c))?)
}

/// Spin-averaged angular spectrum over `theta / pi` in `[0, 1]`.
pub fn cmd_angular(cfg: &ScenarioConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    let laser = laser_of(cfg)?;
    let beam = beam_of(cfg)?;
    let grid = theta_grid(0.0, PI, cfg.sweep.theta_points);
    let spectrum = angular_spectrum(&beam, &laser, &grid, 0, &truncation(cfg))?;
    let mut table = CsvTable::new(
        "angular",
        cfg,
        &["theta_over_pi", "k_prime_MeV", "y_avg_xsec_times_1e6", "pol_x_re", "pol_x_im", "pol_y_re", "pol_y_im"],
    );
    for (i, r) in spectrum.rows.iter().enumerate() {
        let pol = match &r.polarization {
            Some(p) => cartesian_polarization(r.theta, p.components)?,
            None => [Complex::new(0.0, 0.0); 3],
        };
        let x = if i + 1 == grid.len() && grid.len() > 1 { 1.0 } else { r.theta / PI };
        table.push(vec![x, mev(r.k_prime), r.cross_section * 1e6, pol[0].re, pol[0].im, pol[1].re, pol[1].im]);
    }
    let mut report = RunReport::new("angular", cfg);
    if let Some(peak) = spectrum.peak() {
        report.add("peak_theta_over_pi", peak.theta / PI, "1", "argmax of the spin-averaged cross section");
        report.add("peak_avg_xsec", peak.cross_section, "m^-2 sr^-1", AVERAGED);
        report.add("peak_k_prime", mev(peak.k_prime), "MeV", FORWARD_ENERGY);
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(CommandOutput { table: Some(table), report })
}

/// Tube profiles for a chain of sections, or the cyclic intensifier when
/// more than one cycle or lossy reflection is configured.
pub fn cmd_tube(cfg: &ScenarioConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    let laser = laser_of(cfg)?;
    let beam = beam_of(cfg)?;
    let t = &cfg.tube;
    let scenario = TubeScenario::new(&beam, &laser, t.section_length_m, t.seed_density)?;
    let u = units::<f64>();
    let mut report = RunReport::new("tube", cfg);
    report.add("gain_coefficient", scenario.gain.a, "1", GAIN_LENGTH);
    report.add("gain_length", scenario.gain.gain_length_m * 1e9, "nm", GAIN_LENGTH);
    report.add("photon_energy", scenario.photon_energy_mev, "MeV", FORWARD_ENERGY);
    if let Some(w) = beam.density_warning(&laser) {
        report.warn(w);
    }

    let table = if t.cycles == 1 && t.reflection_efficiency == 1.0 {
        let r = run_multi_section(&scenario, t.sections, t.profile_points)?;
        let mut table = CsvTable::new(
            "tube",
            cfg,
            &["section", "l_m", "n", "n_prime", "N", "n_m3", "n_prime_m3", "N_m3"],
        );
        for (j, p) in r.profiles.iter().enumerate() {
            let offset = j as f64 * t.section_length_m;
            for s in &p.samples {
                table.push(vec![
                    (j + 1) as f64,
                    offset + s.l_m,
                    s.electrons,
                    s.emitted,
                    s.photons,
                    u.density_to_m3(s.electrons),
                    u.density_to_m3(s.emitted),
                    u.density_to_m3(s.photons),
                ]);
            }
        }
        let first = &r.profiles[0];
        report.add("section_asymptote", u.density_to_m3(first.asymptote), "m^-3", ASYMPTOTE);
        report.add("final_photon_density", r.final_density_m3, "m^-3", ASYMPTOTE);
        report.add("output_intensity_exact", r.final_intensity_w_m2, "W/m^2", INTENSITY);
        report.add("half_rule_photon_density", r.half_rule_density_m3, "m^-3", HALF_RULE);
        report.add("output_intensity", r.half_rule_intensity_w_m2, "W/m^2", INTENSITY);
        report.add("exact_to_half_rule_ratio", r.half_rule_ratio(), "1", "ratio of the two photon densities");
        tension(&mut report, r.half_rule_ratio(), u.density_from_m3(scenario.electrons_m3));
        table
    } else {
        let r = run_cyclic(&scenario, t.sections, t.cycles, t.reflection_efficiency)?;
        let mut table = CsvTable::new("tube", cfg, &["cycle", "N_m3", "intensity_W_m2"]);
        for (c, &n) in r.cycle_outputs_m3.iter().enumerate() {
            table.push(vec![(c + 1) as f64, n, wiggler_core::tube::output_intensity(n, scenario.photon_energy_mev)?]);
        }
        report.add("final_photon_density", r.final_density_m3, "m^-3", ASYMPTOTE);
        report.add("output_intensity_exact", r.final_intensity_w_m2, "W/m^2", INTENSITY);
        report.add("half_rule_photon_density", r.half_rule_density_m3, "m^-3", HALF_RULE);
        report.add("output_intensity", r.half_rule_intensity_w_m2, "W/m^2", INTENSITY);
        if let Some(fp) = r.fixed_point_m3 {
            report.add("reinjected_fixed_point", fp, "m^-3", "N* = eta N_chain(N*)");
        }
        let ratio = r.final_density_m3 / r.half_rule_density_m3;
        tension(&mut report, ratio, u.density_from_m3(scenario.electrons_m3));
        if let Some(w) = r.warning {
            report.warn(w);
        }
        table
    };
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(CommandOutput { table: Some(table), report })
}

fn tension(report: &mut RunReport, ratio: f64, n0: f64) {
    if (ratio - 1.0).abs() > 0.1 {
        report.warn(format!(
            "the headline output_intensity uses the half-conversion rule; the exact evolution in \
             Compton-volume units (n0 = {n0:e} per lambda_c^3) gives {ratio:.4} times that density, \
             because a dilute beam converts nearly all of its electrons"
        ));
    }
}

/// Wavelength shift of light scattered by a probe beam off the radiation.
pub fn cmd_coherence(cfg: &ScenarioConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    let c = &cfg.coherence;
    let probe = make_beam(c.probe_energy_mev, c.probe_direction.to_core(), Spin::Up, 0.0)?;
    let radiation = LaserField::from_photon_energy_mev(c.radiation_energy_kev * 1e-3, c.radiation_intensity_w_m2)?;
    let p = CoherenceProbe::new(probe, radiation, c.theta_over_pi * PI);
    let mut report = RunReport::new("coherence", cfg);
    report.add("radiation_wavelength", radiation.wavelength_m() * 1e9, "nm", "lambda = 2 pi hbar c / E");
    report.add("radiation_amplitude", radiation.amplitude(), "m_e", AMPLITUDE);
    report.add("lambda0_prime", p.compton_wavelength_m() * 1e9, "nm", COMPTON);
    report.add("lambda_prime", p.shifted_wavelength_m() * 1e9, "nm", SHIFT);
    report.add("wavelength_shift", p.shift, "1", SHIFT);
    if let Some(m) = c.measured_shift {
        report.add("coherent_intensity", p.coherent_intensity(m)?, "W/m^2", INVERSION);
        if c.radiation_intensity_w_m2 > 0.0 {
            report.add("coherent_fraction", p.coherent_fraction(m)?, "1", INVERSION);
        } else {
            report.warn("radiation intensity is zero; no coherent fraction");
        }
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(CommandOutput { table: None, report })
}

/// Scale parameters of the scenario.
pub fn cmd_limits(cfg: &ScenarioConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    let laser = laser_of(cfg)?;
    let beam = beam_of(cfg)?;
    let mut report = RunReport::new("limits", cfg);
    report.add("coherence_amplitude", laser.amplitude(), "m_e", AMPLITUDE);
    report.add("laser_photon_energy", laser.photon_energy_mev() * 1e6, "eV", "k = 2 pi hbar c / lambda");
    report.add("wiggling_radius", wiggling_radius(beam.energy(), beam.p_z(), &laser)?, "lambda_c", RADIUS);
    report.add("k_prime_forward", mev(emitted_photon_energy(PI, 1, &beam, &laser)?), "MeV", FORWARD_ENERGY);
    match critical_density(&laser) {
        Ok(n) => report.add("critical_density", n, "m^-3", CRITICAL),
        Err(e) => report.warn(e.to_string()),
    }
    match wiggler_core::tube::gain_coefficient(&beam, &laser) {
        Ok(g) => report.add("gain_length", g.gain_length_m * 1e9, "nm", GAIN_LENGTH),
        Err(e) => report.warn(e.to_string()),
    }
    if let Some(w) = beam.density_warning(&laser) {
        report.warn(w);
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(CommandOutput { table: None, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Kinematics,
    Angular,
    Tube,
    Coherence,
    Limits,
}

pub fn run(command: Command, cfg: &ScenarioConfig) -> Result<CommandOutput, CliError> {
    match command {
        Command::Kinematics => cmd_kinematics(cfg),
        Command::Angular => cmd_angular(cfg),
        Command::Tube => cmd_tube(cfg),
        Command::Coherence => cmd_coherence(cfg),
        Command::Limits => cmd_limits(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;

    fn cfg(overrides: &[&str]) -> ScenarioConfig {
        parse_config_str("", overrides).unwrap()
    }

    #[test]
    fn kinematics_rows() {
        let out = cmd_kinematics(&cfg(&["sweep.energy_min_MeV=7.68", "sweep.energy_max_MeV=7.68", "sweep.energy_points=1"]))
            .unwrap();
        let t = out.table.unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!((t.rows[0][1] / 0.001424 - 1.0).abs() < 5e-3);
        let t = cmd_kinematics(&cfg(&[])).unwrap().table.unwrap();
        assert_eq!(t.rows.len(), 181);
        let row = t.rows.iter().find(|r| r[0] == 305.0).unwrap();
        assert!((row[1] - 2.3).abs() < 0.1);
    }

    #[test]
    fn angular_single_point() {
        let t = cmd_angular(&cfg(&["sweep.theta_points=1"])).unwrap().table.unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0][0], 0.0);
        let k = LaserField::new(785e-9, 1e19).unwrap().photon_energy_mev();
        assert!((t.rows[0][1] / k - 1.0).abs() < 1e-12);
    }

    #[test]
    fn angular_forward_polarization() {
        let t = cmd_angular(&cfg(&["sweep.theta_points=11"])).unwrap().table.unwrap();
        let last = t.rows.last().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((last[3] - r).abs() < 1e-9 && last[4].abs() < 1e-9);
        assert!(last[5].abs() < 1e-9 && (last[6] + r).abs() < 1e-9);
    }

    #[test]
    fn zero_length_tube() {
        let out = cmd_tube(&cfg(&["tube.section_length_m=0"])).unwrap();
        let t = out.table.unwrap();
        let n = t.column("N").unwrap();
        assert!(t.rows.iter().all(|r| r[n] == 0.0));
    }

    #[test]
    fn tube_flags_the_dilute_beam() {
        let out = cmd_tube(&cfg(&[])).unwrap();
        assert!(!out.report.warnings.is_empty());
        let i = out.report.get("output_intensity").unwrap();
        assert!(i > 2.5e13 && i < 1e14, "{i:e}");
    }

    #[test]
    fn coherence_report() {
        let r = cmd_coherence(&cfg(&["coherence.measured_shift=2.77e-4"])).unwrap().report;
        assert!((r.get("lambda0_prime").unwrap() / 351.0 - 1.0).abs() < 0.01);
        let f = r.get("coherent_fraction").unwrap();
        assert!((f - 0.1).abs() < 0.01, "{f}");
        let dark = cmd_coherence(&cfg(&["coherence.radiation_intensity_W_m2=0"])).unwrap().report;
        assert_eq!(dark.get("wavelength_shift").unwrap(), 0.0);
    }

    #[test]
    fn limits_report() {
        let r = cmd_limits(&cfg(&[])).unwrap().report;
        let n = r.get("critical_density").unwrap();
        assert!((3e28..=3e29).contains(&n));
        assert!((r.get("wiggling_radius").unwrap() - 4.04).abs() < 0.01);
    }
}
