//! Electron and photon populations along the active tube.
//!
//! Along the tube axis `l` the free-electron density `n`, the density `n'`
//! of electrons that have emitted, and the photon density `N` obey
//! `lambda_c dn/dl = a (2 n^2 - (2 N0 + 3 n0 + 1) n + n0 (n0 + N0))` with
//! `n + N = n0 + N0` and `n + n' = n0`. Densities are per Compton volume
//! `lambda_c^3` internally and in m^-3 at the boundary.
//!
//! Three symbols are easy to confuse: the harmonic order of the emission,
//! the photon occupation `N` of the emitted mode, and the photon density
//! `N(l)` in the tube. Here they are `harmonic`, `photon_occupation` and
//! `photons`.

use crate::beamfield::{ElectronBeam, LaserField};
use crate::emission::{averaged_cross_section, Truncation};
use crate::error::{domain, Result};
use crate::kinematics::emitted_photon_energy;
use crate::physcore::{find_root, integrate_ode, units, RootBracket};
use crate::scalar::{lit, Real};

/// Evolution coefficient `a` and the gain length `lambda_c / a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCoefficient<T> {
    pub a: T,
    pub gain_length_m: T,
}

/// Spin-averaged forward cross section at zero occupation per unit solid
/// angle, used as the evolution coefficient.
pub fn gain_coefficient<T: Real>(beam: &ElectronBeam<T>, laser: &LaserField<T>) -> Result<GainCoefficient<T>> {
    let a = averaged_cross_section(T::PI(), T::zero(), beam, laser, 0, &Truncation::default())?.value;
    if !(a > T::zero()) {
        return domain("forward cross section vanishes; the tube has no gain");
    }
    Ok(GainCoefficient { a, gain_length_m: units::<T>().compton_wavelength_m / a })
}

/// One tube section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeConfig<T> {
    pub length_m: T,
    pub gain: T,
    /// Electron density at the entrance, per Compton volume.
    pub electrons: T,
    /// Photon density at the entrance, per Compton volume.
    pub seed: T,
}

impl<T: Real> TubeConfig<T> {
    pub fn new(length_m: T, gain: T, electrons: T, seed: T) -> Result<Self> {
        if !(length_m >= T::zero()) || !length_m.is_finite() {
            return domain(format!("tube length must be non-negative, got {length_m} m"));
        }
        if !(gain > T::zero()) || !gain.is_finite() {
            return domain(format!("gain coefficient must be positive, got {gain}"));
        }
        if !(electrons >= T::zero()) || !(seed >= T::zero()) {
            return domain("densities must be non-negative");
        }
        Ok(Self { length_m, gain, electrons, seed })
    }

    /// Same section with densities given in m^-3.
    pub fn from_si(length_m: T, gain: T, electrons_m3: T, seed_m3: T) -> Result<Self> {
        let u = units::<T>();
        Self::new(length_m, gain, u.density_from_m3(electrons_m3), u.density_from_m3(seed_m3))
    }

    /// Optical depth `a l / lambda_c` at position `l`.
    pub fn depth(&self, l_m: T) -> T {
        self.gain * l_m / units::<T>().compton_wavelength_m
    }

    fn quadratic(&self) -> Quadratic<T> {
        Quadratic::new(self.electrons, self.seed)
    }
}

/// `2 n^2 - b n + c` with its roots `small <= large`.
#[derive(Debug, Clone, Copy)]
struct Quadratic<T> {
    c: T,
    small: T,
    large: T,
    root_gap: T,
}

impl<T: Real> Quadratic<T> {
    fn new(n0: T, seed: T) -> Self {
        let two = lit::<T>(2.0);
        let b = two * seed + lit::<T>(3.0) * n0 + T::one();
        let c = n0 * (n0 + seed);
        let u = two * seed + n0 + T::one();
        let disc = u * u + lit::<T>(4.0) * n0;
        assert!(disc > T::zero(), "discriminant {disc} is not positive");
        let root = disc.sqrt();
        Self { c, small: two * c / (b + root), large: (b + root) / lit(4.0), root_gap: root }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileSource {
    Analytic,
    Numeric,
}

/// Densities at one position; all per Compton volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeSample<T> {
    pub l_m: T,
    pub electrons: T,
    pub emitted: T,
    pub photons: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeProfile<T> {
    pub config: TubeConfig<T>,
    pub samples: Vec<TubeSample<T>>,
    /// Photon density far down an unbounded tube.
    pub asymptote: T,
    pub source: ProfileSource,
}

impl<T: Real> TubeProfile<T> {
    pub fn final_sample(&self) -> TubeSample<T> {
        *self.samples.last().expect("profiles carry at least one sample")
    }

    /// Largest `|n + N - n0 - N0|` and `|n + n' - n0|` over the samples.
    pub fn conservation_residual(&self) -> T {
        let c = &self.config;
        self.samples
            .iter()
            .map(|s| {
                let a = (s.electrons + s.photons - c.electrons - c.seed).abs();
                let b = (s.electrons + s.emitted - c.electrons).abs();
                a.max(b)
            })
            .fold(T::zero(), T::max)
    }
}

fn positions<T: Real>(length: T, points: usize) -> Result<Vec<T>> {
    if points < 2 {
        return domain("a profile needs at least two sample points");
    }
    let step = length / T::from_usize(points - 1).unwrap();
    Ok((0..points)
        .map(|i| if i + 1 == points { length } else { step * T::from_usize(i).unwrap() })
        .collect())
}

fn sample<T: Real>(cfg: &TubeConfig<T>, l_m: T, gained: T) -> TubeSample<T> {
    TubeSample {
        l_m,
        electrons: cfg.electrons - gained,
        emitted: gained,
        photons: cfg.seed + gained,
    }
}

/// Closed-form profile of an unseeded tube, `N0 = 0`.
pub fn evolve_analytic<T: Real>(cfg: &TubeConfig<T>, points: usize) -> Result<TubeProfile<T>> {
    if cfg.seed != T::zero() {
        return domain("the unseeded solution requires zero seed photon density");
    }
    let n0 = cfg.electrons;
    let s = (n0 * n0 + lit::<T>(6.0) * n0 + T::one()).sqrt();
    // s - n0 without cancellation for dense beams
    let s_minus = (lit::<T>(6.0) * n0 + T::one()) / (s + n0);
    let asymptote = lit::<T>(2.0) * n0 / (s_minus + T::one());
    let g = lit::<T>(8.0) * n0 / ((s_minus + T::one()) * (s_minus + T::one()));
    let samples = positions(cfg.length_m, points)?
        .into_iter()
        .map(|l| {
            let x = s * cfg.depth(l);
            let e = (-x).exp();
            let gained = asymptote * -(-x).exp_m1() / (T::one() + g * e);
            sample(cfg, l, gained)
        })
        .collect();
    Ok(TubeProfile { config: *cfg, samples, asymptote, source: ProfileSource::Analytic })
}

/// Photons gained over depth `x` by a seeded section.
fn seeded_gain<T: Real>(q: &Quadratic<T>, n0: T, x: T) -> T {
    let above = n0 - q.small;
    let below = q.large - n0;
    let e = (-q.root_gap * x).exp();
    above * below * -(-q.root_gap * x).exp_m1() / (above * e + below)
}

/// Closed-form profile of a section entered by `seed` photons.
pub fn evolve_seeded<T: Real>(cfg: &TubeConfig<T>, points: usize) -> Result<TubeProfile<T>> {
    let q = cfg.quadratic();
    let samples = positions(cfg.length_m, points)?
        .into_iter()
        .map(|l| sample(cfg, l, seeded_gain(&q, cfg.electrons, cfg.depth(l))))
        .collect();
    Ok(TubeProfile {
        config: *cfg,
        samples,
        asymptote: cfg.seed + cfg.electrons - q.small,
        source: ProfileSource::Analytic,
    })
}

/// Photon density at the exit of a section.
pub fn section_exit<T: Real>(cfg: &TubeConfig<T>) -> T {
    let q = cfg.quadratic();
    cfg.seed + seeded_gain(&q, cfg.electrons, cfg.depth(cfg.length_m))
}

/// Electron density at which emission and reabsorption balance.
pub fn equilibrium_density<T: Real>(n0: T, seed: T) -> T {
    Quadratic::new(n0, seed).small
}

/// `lambda_c dn/dl / a` at electron density `n`.
pub fn evolution_rate<T: Real>(n0: T, seed: T, n: T) -> T {
    let two = lit::<T>(2.0);
    let q = Quadratic::new(n0, seed);
    let b = two * seed + lit::<T>(3.0) * n0 + T::one();
    two * n * n - b * n + q.c
}

/// Profile by fourth-order Runge-Kutta integration of the rate equation.
pub fn evolve_numeric<T: Real>(cfg: &TubeConfig<T>, points: usize, steps_per_sample: usize) -> Result<TubeProfile<T>> {
    let ls = positions(cfg.length_m, points)?;
    let (n0, seed) = (cfg.electrons, cfg.seed);
    let mut n = n0;
    let mut samples = vec![sample(cfg, T::zero(), T::zero())];
    for w in ls.windows(2) {
        let span = (cfg.depth(w[0]), cfg.depth(w[1]));
        let traj = integrate_ode(|_, y| evolution_rate(n0, seed, y), n, span, steps_per_sample)?;
        n = traj.final_value();
        samples.push(TubeSample { l_m: w[1], electrons: n, emitted: n0 - n, photons: seed + n0 - n });
    }
    Ok(TubeProfile {
        config: *cfg,
        samples,
        asymptote: seed + n0 - equilibrium_density(n0, seed),
        source: ProfileSource::Numeric,
    })
}

/// Intensity (W/m^2) of a photon gas of density `photons_m3` (m^-3) and
/// photon energy `photon_energy_mev` moving at the speed of light.
pub fn output_intensity<T: Real>(photons_m3: T, photon_energy_mev: T) -> Result<T> {
    if !(photons_m3 >= T::zero()) || !(photon_energy_mev >= T::zero()) {
        return domain("photon density and energy must be non-negative");
    }
    let u = units::<T>();
    Ok(photons_m3 * u.mev_to_joule(photon_energy_mev) * u.speed_of_light_m_s)
}

/// Beam, laser and section geometry shared by the chained runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeScenario<T> {
    pub gain: GainCoefficient<T>,
    /// Forward first-harmonic photon energy.
    pub photon_energy_mev: T,
    pub electrons_m3: T,
    pub seed_m3: T,
    pub section_length_m: T,
}

impl<T: Real> TubeScenario<T> {
    pub fn new(beam: &ElectronBeam<T>, laser: &LaserField<T>, section_length_m: T, seed_m3: T) -> Result<Self> {
        let gain = gain_coefficient(beam, laser)?;
        let k = emitted_photon_energy(T::PI(), 1, beam, laser)?;
        let s = Self {
            gain,
            photon_energy_mev: k * units::<T>().electron_mass_mev,
            electrons_m3: beam.density_m3(),
            seed_m3,
            section_length_m,
        };
        s.section(T::zero())?;
        Ok(s)
    }

    fn electrons(&self) -> T {
        units::<T>().density_from_m3(self.electrons_m3)
    }

    fn section(&self, seed: T) -> Result<TubeConfig<T>> {
        TubeConfig::new(self.section_length_m, self.gain.a, self.electrons(), seed)
    }

    pub fn photon_wavelength_m(&self) -> T {
        let u = units::<T>();
        T::TAU() * u.hbar_c_mev_m() / self.photon_energy_mev
    }

    /// Warning when the photons are outside the soft range where Bragg
    /// reflection by crystals is available.
    pub fn reflection_warning(&self) -> Option<String> {
        let nm = self.photon_wavelength_m() * lit(1e9);
        if nm < lit(0.05) || nm > T::one() {
            Some(format!(
                "photon wavelength {nm} nm lies outside 0.05-1 nm; crystal reflection is not available"
            ))
        } else {
            None
        }
    }

    /// Photon density per Compton volume after `sections` fresh sections
    /// entered with `seed`.
    fn chain(&self, seed: T, sections: usize, exits: &mut Vec<T>) -> Result<T> {
        let mut photons = seed;
        for _ in 0..sections {
            photons = section_exit(&self.section(photons)?);
            exits.push(photons);
        }
        Ok(photons)
    }
}

/// Result of a chain of tube sections.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSectionResult<T> {
    pub profiles: Vec<TubeProfile<T>>,
    /// Exit photon density of each section, m^-3.
    pub section_exits_m3: Vec<T>,
    pub final_density_m3: T,
    pub final_intensity_w_m2: T,
    /// Dense-beam estimate in which each section converts half of its
    /// electrons into photons.
    pub half_rule_density_m3: T,
    pub half_rule_intensity_w_m2: T,
}

impl<T: Real> MultiSectionResult<T> {
    /// Ratio of the exact photon density to the half-conversion estimate.
    pub fn half_rule_ratio(&self) -> T {
        self.final_density_m3 / self.half_rule_density_m3
    }
}

/// Chains `sections` sections; each starts with fresh electrons and the
/// photons leaving the previous one.
pub fn run_multi_section<T: Real>(
    scenario: &TubeScenario<T>,
    sections: usize,
    points_per_section: usize,
) -> Result<MultiSectionResult<T>> {
    if sections == 0 {
        return domain("at least one tube section is required");
    }
    let u = units::<T>();
    let mut photons = u.density_from_m3(scenario.seed_m3);
    let mut profiles = Vec::with_capacity(sections);
    let mut exits = Vec::with_capacity(sections);
    for _ in 0..sections {
        let cfg = scenario.section(photons)?;
        if points_per_section >= 2 {
            profiles.push(evolve_seeded(&cfg, points_per_section)?);
        }
        photons = section_exit(&cfg);
        exits.push(u.density_to_m3(photons));
    }
    let final_density_m3 = u.density_to_m3(photons);
    let half_rule_density_m3 =
        scenario.seed_m3 + T::from_usize(sections).unwrap() * scenario.electrons_m3 * lit(0.5);
    Ok(MultiSectionResult {
        profiles,
        section_exits_m3: exits,
        final_density_m3,
        final_intensity_w_m2: output_intensity(final_density_m3, scenario.photon_energy_mev)?,
        half_rule_density_m3,
        half_rule_intensity_w_m2: output_intensity(half_rule_density_m3, scenario.photon_energy_mev)?,
    })
}

/// Result of the cyclic intensifier.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicResult<T> {
    /// Photon density leaving the chain in each cycle, m^-3.
    pub cycle_outputs_m3: Vec<T>,
    pub final_density_m3: T,
    pub final_intensity_w_m2: T,
    pub half_rule_density_m3: T,
    pub half_rule_intensity_w_m2: T,
    /// Photon density re-entering the chain in steady state, m^-3; absent
    /// for lossless reflection.
    pub fixed_point_m3: Option<T>,
    pub warning: Option<String>,
}

/// Runs `cycles` passes through a chain of `sections_per_cycle` sections,
/// reflecting the output back into the entrance with efficiency
/// `reflection_efficiency` between passes.
pub fn run_cyclic<T: Real>(
    scenario: &TubeScenario<T>,
    sections_per_cycle: usize,
    cycles: usize,
    reflection_efficiency: T,
) -> Result<CyclicResult<T>> {
    let eta = reflection_efficiency;
    if !(eta >= T::zero() && eta <= T::one()) {
        return domain(format!("reflection efficiency must lie in [0, 1], got {eta}"));
    }
    if sections_per_cycle == 0 || cycles == 0 {
        return domain("the intensifier needs at least one section and one cycle");
    }
    let u = units::<T>();
    let mut scratch = Vec::new();
    let mut entering = u.density_from_m3(scenario.seed_m3);
    let mut half_entering = scenario.seed_m3;
    let per_pass = T::from_usize(sections_per_cycle).unwrap() * scenario.electrons_m3 * lit(0.5);
    let mut outputs = Vec::with_capacity(cycles);
    let mut half_out = half_entering;
    for cycle in 0..cycles {
        let out = scenario.chain(entering, sections_per_cycle, &mut scratch)?;
        outputs.push(u.density_to_m3(out));
        half_out = half_entering + per_pass;
        if cycle + 1 < cycles {
            entering = eta * out;
            half_entering = eta * half_out;
        }
    }
    let final_density_m3 = *outputs.last().unwrap();

    let fixed_point_m3 = if eta < T::one() {
        // eta * chain(N) - N changes sign on [0, eta * (chain(0) + gain bound) / (1 - eta)]
        let map = |n: T| -> T {
            let mut sink = Vec::new();
            eta * scenario.chain(n, sections_per_cycle, &mut sink).unwrap_or_else(|_| T::nan()) - n
        };
        let top = eta * T::from_usize(sections_per_cycle).unwrap() * scenario.electrons() / (T::one() - eta);
        if top > T::zero() {
            let hi = top * lit(1.5) + T::min_positive_value();
            let bracket = RootBracket::with_tolerance(T::zero(), hi, lit::<T>(1e-13))?;
            Some(u.density_to_m3(find_root(map, &bracket)?))
        } else {
            Some(T::zero())
        }
    } else {
        None
    };

    Ok(CyclicResult {
        final_intensity_w_m2: output_intensity(final_density_m3, scenario.photon_energy_mev)?,
        final_density_m3,
        half_rule_density_m3: half_out,
        half_rule_intensity_w_m2: output_intensity(half_out, scenario.photon_energy_mev)?,
        cycle_outputs_m3: outputs,
        fixed_point_m3,
        warning: scenario.reflection_warning(),
    })
}
