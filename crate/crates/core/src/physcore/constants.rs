use crate::error::{domain, Result};
use crate::scalar::{lit, Real};

/// Physical constants (CODATA 2018) and the conversions between SI and the
/// natural units used internally (`m_e = c = hbar = 1`).
///
/// Energies are measured in electron masses, lengths in reduced Compton
/// wavelengths and densities in particles per cubic Compton wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem<T> {
    pub electron_mass_mev: T,
    pub compton_wavelength_m: T,
    pub fine_structure: T,
    pub hbar_c_mev_nm: T,
    pub speed_of_light_m_s: T,
    pub elementary_charge_c: T,
}

const ELECTRON_MASS_MEV: f64 = 0.510_998_950_00;
const HBAR_C_MEV_FM: f64 = 197.326_980_4;
const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
const SPEED_OF_LIGHT: f64 = 299_792_458.0;
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

impl<T: Real> UnitSystem<T> {
    pub fn codata2018() -> Self {
        let hbar_c_mev_nm = lit::<T>(HBAR_C_MEV_FM * 1e-6);
        let electron_mass_mev = lit::<T>(ELECTRON_MASS_MEV);
        Self {
            electron_mass_mev,
            compton_wavelength_m: hbar_c_mev_nm / electron_mass_mev * lit(1e-9),
            fine_structure: lit(FINE_STRUCTURE),
            hbar_c_mev_nm,
            speed_of_light_m_s: lit(SPEED_OF_LIGHT),
            elementary_charge_c: lit(ELEMENTARY_CHARGE),
        }
    }

    pub fn hbar_c_mev_m(&self) -> T {
        self.hbar_c_mev_nm * lit(1e-9)
    }

    pub fn mev_to_joule(&self, e_mev: T) -> T {
        e_mev * lit(1e6) * self.elementary_charge_c
    }

    /// Electron rest energy `m c^2` in joules.
    pub fn electron_rest_energy_j(&self) -> T {
        self.mev_to_joule(self.electron_mass_mev)
    }

    /// Natural length (Compton wavelengths) to metres.
    pub fn length_to_m(&self, l: T) -> T {
        l * self.compton_wavelength_m
    }

    pub fn length_from_m(&self, l_m: T) -> T {
        l_m / self.compton_wavelength_m
    }

    /// Number density in m^-3 to particles per Compton volume.
    pub fn density_from_m3(&self, n_m3: T) -> T {
        let lc = self.compton_wavelength_m;
        n_m3 * lc * lc * lc
    }

    pub fn density_to_m3(&self, n: T) -> T {
        let lc = self.compton_wavelength_m;
        n / (lc * lc * lc)
    }

    /// Photon energy (natural units) of radiation with the given wavelength.
    pub fn wave_number_from_wavelength(&self, wavelength_m: T) -> T {
        T::TAU() * self.compton_wavelength_m / wavelength_m
    }

    pub fn wavelength_from_wave_number(&self, k: T) -> T {
        T::TAU() * self.compton_wavelength_m / k
    }
}

/// Shorthand for [`UnitSystem::codata2018`].
pub fn units<T: Real>() -> UnitSystem<T> {
    UnitSystem::codata2018()
}

/// Energy in MeV to electron masses.
pub fn to_natural_energy<T: Real>(e_mev: T) -> Result<T> {
    if !(e_mev >= T::zero()) {
        return domain(format!("energy must be non-negative, got {e_mev} MeV"));
    }
    Ok(e_mev / units::<T>().electron_mass_mev)
}

pub fn from_natural_energy<T: Real>(e: T) -> Result<T> {
    if !(e >= T::zero()) {
        return domain(format!("energy must be non-negative, got {e} m_e"));
    }
    Ok(e * units::<T>().electron_mass_mev)
}

/// Photon energy in MeV, `2 pi hbar c / lambda`.
pub fn photon_energy_from_wavelength<T: Real>(wavelength_m: T) -> Result<T> {
    if !(wavelength_m > T::zero()) {
        return domain(format!("wavelength must be positive, got {wavelength_m} m"));
    }
    let u = units::<T>();
    Ok(T::TAU() * u.hbar_c_mev_m() / wavelength_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compton_wavelength_matches_rounded_value() {
        let u = units::<f64>();
        assert!((u.compton_wavelength_m - 0.386e-12).abs() / 0.386e-12 < 1e-3);
        // hbar / (m c) built from the SI constants agrees with hbar c / m c^2
        let hbar = 1.054_571_817e-34;
        let m_kg = 9.109_383_701_5e-31;
        let from_si = hbar / (m_kg * u.speed_of_light_m_s);
        assert!((from_si - u.compton_wavelength_m).abs() / from_si < 1e-3);
    }

    #[test]
    fn constants_are_positive() {
        let u = units::<f64>();
        for c in [
            u.electron_mass_mev,
            u.compton_wavelength_m,
            u.fine_structure,
            u.hbar_c_mev_nm,
            u.speed_of_light_m_s,
            u.elementary_charge_c,
        ] {
            assert!(c > 0.0);
        }
    }

    #[test]
    fn natural_energy_examples() {
        assert!((to_natural_energy(0.510_998_95_f64).unwrap() - 1.0).abs() < 1e-15);
        assert!((to_natural_energy(307.0_f64).unwrap() - 600.784_01).abs() < 1e-4);
        assert_eq!(to_natural_energy(0.0).unwrap(), 0.0);
        assert!(matches!(
            to_natural_energy(-1.0),
            Err(crate::PhysicsError::Domain(_))
        ));
    }

    #[test]
    fn photon_energy_examples() {
        let e785 = photon_energy_from_wavelength(785e-9_f64).unwrap() * 1e6;
        assert!((e785 - 1.5795).abs() / 1.5795 < 1e-4, "{e785}");
        let e1240 = photon_energy_from_wavelength(1240e-9_f64).unwrap() * 1e6;
        assert!((e1240 - 1239.841_98 / 1240.0).abs() < 1e-6);
        assert!(photon_energy_from_wavelength(1.0).unwrap() < photon_energy_from_wavelength(1e-3).unwrap());
        assert!(photon_energy_from_wavelength(0.0).is_err());
        assert!(photon_energy_from_wavelength(-5.0).is_err());
    }

    #[test]
    fn natural_energy_round_trip() {
        for &e in &[1e-6_f64, 0.511, 7.68, 307.0, 1e4] {
            let back = from_natural_energy(to_natural_energy(e).unwrap()).unwrap();
            assert!((back - e).abs() / e < 1e-14);
        }
    }
}
