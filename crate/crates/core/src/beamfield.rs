//! Background laser and incident electron beam.
//!
//! The laser is a circularly polarized plane wave travelling along `+z`,
//! `A = A (x cos k(z - t) + y sin k(z - t))`. Electrons arrive collinear with
//! the z axis (`p_perp = 0`) and carry positive-energy solutions only.

use crate::error::{domain, PhysicsError, Result};
use crate::physcore::{to_natural_energy, units};
use crate::scalar::{lit, Real};

/// Beam spin projection `sigma` on the z axis, in units of 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Spin {
    #[default]
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn sign(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn value<T: Real>(self) -> T {
        T::from_i32(self.sign()).unwrap()
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn from_sign(sign: i32) -> Option<Spin> {
        match sign {
            1 => Some(Spin::Up),
            -1 => Some(Spin::Down),
            _ => None,
        }
    }
}

/// Direction of the electron beam relative to the laser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Electrons travel along `-z`, against the laser.
    HeadOn,
    /// Electrons travel along `+z`, with the laser.
    CoPropagating,
}

/// Coherence amplitude `eA` in units of `m_e` for a fully coherent wave of
/// the given wavelength (m) and intensity (W/m^2):
/// `eA / m c = sqrt(alpha lambda_c lambda^2 I / (pi m c^3))`.
pub fn coherence_amplitude<T: Real>(wavelength_m: T, intensity_w_m2: T) -> Result<T> {
    if !(wavelength_m > T::zero()) {
        return domain(format!("wavelength must be positive, got {wavelength_m} m"));
    }
    if !(intensity_w_m2 >= T::zero()) {
        return domain(format!("intensity must be non-negative, got {intensity_w_m2} W/m^2"));
    }
    Ok((amplitude_squared_per_intensity(wavelength_m) * intensity_w_m2).sqrt())
}

/// `(eA)^2 / I` in m^2/W; the coherence amplitude squared is linear in the
/// coherent intensity.
pub(crate) fn amplitude_squared_per_intensity<T: Real>(wavelength_m: T) -> T {
    let u = units::<T>();
    // m c^3 = (m c^2) c
    let mc3 = u.electron_rest_energy_j() * u.speed_of_light_m_s;
    u.fine_structure * u.compton_wavelength_m * wavelength_m * wavelength_m / (T::PI() * mc3)
}

/// Classical circularly polarized background wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserField<T> {
    wavelength_m: T,
    intensity_w_m2: T,
    wave_number: T,
    amplitude: T,
}

impl<T: Real> LaserField<T> {
    pub fn new(wavelength_m: T, intensity_w_m2: T) -> Result<Self> {
        let amplitude = coherence_amplitude(wavelength_m, intensity_w_m2)?;
        Ok(Self {
            wavelength_m,
            intensity_w_m2,
            wave_number: units::<T>().wave_number_from_wavelength(wavelength_m),
            amplitude,
        })
    }

    /// Wave built from its photon energy (MeV) instead of its wavelength.
    pub fn from_photon_energy_mev(energy_mev: T, intensity_w_m2: T) -> Result<Self> {
        if !(energy_mev > T::zero()) {
            return domain(format!("photon energy must be positive, got {energy_mev} MeV"));
        }
        let k = to_natural_energy(energy_mev)?;
        Self::new(units::<T>().wavelength_from_wave_number(k), intensity_w_m2)
    }

    pub fn wavelength_m(&self) -> T {
        self.wavelength_m
    }

    pub fn intensity_w_m2(&self) -> T {
        self.intensity_w_m2
    }

    /// `k`, equal to the photon energy in units of `m_e`.
    pub fn wave_number(&self) -> T {
        self.wave_number
    }

    /// `eA` in units of `m_e`.
    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn photon_energy_mev(&self) -> T {
        self.wave_number * units::<T>().electron_mass_mev
    }

    /// Same wavelength at a different intensity.
    pub fn with_intensity(&self, intensity_w_m2: T) -> Result<Self> {
        Self::new(self.wavelength_m, intensity_w_m2)
    }

    /// Photon number density of the wave in photons per Compton volume,
    /// `n = (eA)^2 k / (4 pi alpha)`.
    pub fn photon_density(&self) -> T {
        let alpha = units::<T>().fine_structure;
        self.amplitude * self.amplitude * self.wave_number / (lit::<T>(4.0) * T::PI() * alpha)
    }
}

/// Mono-energetic electron beam moving along the z axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronBeam<T> {
    energy: T,
    p_z: T,
    // E - p_z and E + p_z kept separately: one of them is tiny for a
    // relativistic beam and cannot be recovered from E and p_z.
    minus: T,
    plus: T,
    spin: Spin,
    density_m3: T,
    direction: Direction,
}

/// Builds a beam from its total energy in MeV.
pub fn make_beam<T: Real>(
    energy_mev: T,
    direction: Direction,
    spin: Spin,
    density_m3: T,
) -> Result<ElectronBeam<T>> {
    let u = units::<T>();
    if !(energy_mev >= u.electron_mass_mev) {
        return domain(format!(
            "beam energy {energy_mev} MeV is below the electron rest energy {} MeV",
            u.electron_mass_mev
        ));
    }
    ElectronBeam::from_natural(energy_mev / u.electron_mass_mev, direction, spin, density_m3)
}

impl<T: Real> ElectronBeam<T> {
    /// Beam with total energy `energy` in units of `m_e`.
    pub fn from_natural(energy: T, direction: Direction, spin: Spin, density_m3: T) -> Result<Self> {
        // tolerate the rounding of a MeV -> m_e conversion at rest
        let energy = if energy < T::one() && energy > T::one() - lit::<T>(8.0) * T::epsilon() {
            T::one()
        } else {
            energy
        };
        if !(energy >= T::one()) {
            return domain(format!("beam energy {energy} m_e is below rest mass"));
        }
        if !(density_m3 >= T::zero()) {
            return domain(format!("beam density must be non-negative, got {density_m3}"));
        }
        let momentum = ((energy - T::one()) * (energy + T::one())).sqrt();
        let big = energy + momentum;
        let small = T::one() / big;
        let (p_z, minus, plus) = match direction {
            Direction::HeadOn => (-momentum, big, small),
            Direction::CoPropagating => (momentum, small, big),
        };
        Ok(Self { energy, p_z, minus, plus, spin, density_m3, direction })
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    pub fn energy_mev(&self) -> T {
        self.energy * units::<T>().electron_mass_mev
    }

    pub fn p_z(&self) -> T {
        self.p_z
    }

    /// `E - p_z`.
    pub fn light_cone_minus(&self) -> T {
        self.minus
    }

    /// `E + p_z`.
    pub fn light_cone_plus(&self) -> T {
        self.plus
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn with_spin(&self, spin: Spin) -> Self {
        Self { spin, ..*self }
    }

    pub fn density_m3(&self) -> T {
        self.density_m3
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Speed `|p_z| / E`.
    pub fn speed(&self) -> T {
        self.p_z.abs() / self.energy
    }

    /// `E^2 - p_z^2 - 1`, evaluated on the light cone.
    pub fn mass_shell_residual(&self) -> T {
        self.minus * self.plus - T::one()
    }

    /// Warning text when the beam density leaves less than six orders of
    /// magnitude of headroom below the critical density of `laser`.
    pub fn density_warning(&self, laser: &LaserField<T>) -> Option<String> {
        let n_c = critical_density(laser).ok()?;
        if self.density_m3 > n_c * lit(1e-6) {
            Some(format!(
                "beam density {:e} m^-3 exceeds 1e-6 of the critical density {:e} m^-3; \
                 Coulomb interaction between electrons is no longer negligible",
                self.density_m3, n_c
            ))
        } else {
            None
        }
    }
}

/// Density (m^-3) above which Coulomb repulsion between neighbouring
/// electrons competes with the laser force: `n_c = r_c^-3`,
/// `r_c = sqrt(alpha / (eA k))`.
pub fn critical_density<T: Real>(laser: &LaserField<T>) -> Result<T> {
    let force = laser.amplitude() * laser.wave_number();
    if !(force > T::zero()) {
        return Err(PhysicsError::Domain(
            "critical density undefined for a zero-amplitude laser".into(),
        ));
    }
    let u = units::<T>();
    let r_c = u.length_to_m((u.fine_structure / force).sqrt());
    Ok(T::one() / (r_c * r_c * r_c))
}
