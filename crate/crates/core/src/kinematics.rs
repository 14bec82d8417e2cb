//! One-photon emission kinematics in the background laser.
//!
//! Quantities are in natural units. Angles are polar angles of the emitted
//! photon measured from `+z`, the laser direction, so the forward direction
//! of a head-on beam is `theta = pi`. Light-cone combinations `E - p_z` and
//! `E + p_z` are used wherever a difference of two large numbers would
//! otherwise appear.

use crate::beamfield::{amplitude_squared_per_intensity, ElectronBeam, LaserField};
use crate::error::{domain, PhysicsError, Result};
use crate::physcore::{find_root, units, RootBracket};
use crate::scalar::{lit, Real};

/// Quasi-energy of a positive-energy electron state in the rotating frame:
/// `E + (eA)^2 / (2 (E - p_z)) + (sigma/2 - n) k`.
pub fn quasi_energy<T: Real>(
    n: i64,
    spin: crate::Spin,
    p_z: T,
    p_perp: T,
    laser: &LaserField<T>,
) -> Result<T> {
    let transverse = T::one() + p_perp * p_perp;
    let energy = (p_z * p_z + transverse).sqrt();
    let minus = if p_z > T::zero() { transverse / (energy + p_z) } else { energy - p_z };
    if !(minus > T::zero()) || !minus.is_finite() {
        return Err(PhysicsError::LightCone);
    }
    let ea = laser.amplitude();
    let ladder = spin.value::<T>() * lit(0.5) - T::from_i64(n).unwrap();
    Ok(energy + ea * ea / (lit::<T>(2.0) * minus) + ladder * laser.wave_number())
}

/// Wiggling radius `R = eA / (k (E - p_z))` in Compton wavelengths.
pub fn wiggling_radius<T: Real>(energy: T, p_z: T, laser: &LaserField<T>) -> Result<T> {
    let minus = energy - p_z;
    if minus == T::zero() || !minus.is_finite() {
        return Err(PhysicsError::LightCone);
    }
    Ok(laser.amplitude() / (laser.wave_number() * minus))
}

/// `E - p_z cos(theta) + extra (1 - cos(theta))`, on the light cone.
fn emission_denominator<T: Real>(theta: T, beam: &ElectronBeam<T>, extra: T) -> T {
    let (s, c) = (theta * lit(0.5)).sin_cos();
    let (s2, c2) = (s * s, c * c);
    beam.light_cone_plus() * s2 + beam.light_cone_minus() * c2 + lit::<T>(2.0) * s2 * extra
}

fn check_harmonic(harmonic: i32) -> Result<u32> {
    if harmonic < 1 {
        return Err(PhysicsError::ClosedChannel(format!(
            "harmonic order {harmonic} does not emit (requires order >= 1)"
        )));
    }
    Ok(harmonic as u32)
}

/// Energy of the photon emitted at polar angle `theta` through harmonic
/// `harmonic`:
/// `k' = N k (E - p_z) / (E + N k + eA R k / 2 - (p_z + N k + eA R k / 2) cos theta)`.
pub fn emitted_photon_energy<T: Real>(
    theta: T,
    harmonic: i32,
    beam: &ElectronBeam<T>,
    laser: &LaserField<T>,
) -> Result<T> {
    let order = T::from_u32(check_harmonic(harmonic)?).unwrap();
    let k = laser.wave_number();
    let ea = laser.amplitude();
    let minus = beam.light_cone_minus();
    let denominator = emission_denominator(theta, beam, order * k + ea * ea / (lit::<T>(2.0) * minus));
    if !(denominator > T::zero()) {
        return Err(PhysicsError::Kinematic(format!(
            "emission denominator {denominator} is not positive at theta = {theta}"
        )));
    }
    Ok(order * k * minus / denominator)
}

/// Compton formula `k0' = k (E - p_z) / (E + k - (p_z + k) cos theta)`.
pub fn compton_energy<T: Real>(theta: T, beam: &ElectronBeam<T>, k: T) -> T {
    k * beam.light_cone_minus() / emission_denominator(theta, beam, k)
}

/// Final state of the emitting electron and photon for one harmonic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionKinematics<T> {
    pub theta: T,
    /// Azimuth of the photon; observables do not depend on it.
    pub phi_k: T,
    pub harmonic: u32,
    pub k_prime: T,
    pub energy_prime: T,
    pub p_z_prime: T,
    pub p_perp_prime: T,
    pub radius: T,
    pub radius_prime: T,
    /// `E' - p'_z`.
    pub minus_prime: T,
    /// `E' + p'_z`.
    pub plus_prime: T,
    pub wave_number: T,
    pub amplitude: T,
    /// Relative difference between the root-solved photon energy and the
    /// closed form; zero for bundles built from the closed form.
    pub closed_form_discrepancy: T,
}

impl<T: Real> EmissionKinematics<T> {
    /// Final state built from the closed-form photon energy.
    pub fn from_closed_form(
        theta: T,
        harmonic: i32,
        beam: &ElectronBeam<T>,
        laser: &LaserField<T>,
    ) -> Result<Self> {
        let k_prime = emitted_photon_energy(theta, harmonic, beam, laser)?;
        Self::assemble(theta, harmonic as u32, k_prime, beam, laser, T::zero())
    }

    fn assemble(
        theta: T,
        harmonic: u32,
        k_prime: T,
        beam: &ElectronBeam<T>,
        laser: &LaserField<T>,
        closed_form_discrepancy: T,
    ) -> Result<Self> {
        let k = laser.wave_number();
        let ea = laser.amplitude();
        let s2 = (theta * lit(0.5)).sin().powi(2);
        let minus = beam.light_cone_minus();
        let minus_prime = minus - lit::<T>(2.0) * s2 * k_prime;
        if !(minus_prime > T::zero()) {
            return Err(PhysicsError::Kinematic(format!(
                "final electron off the light cone (E' - p'_z = {minus_prime})"
            )));
        }
        let p_perp_prime = k_prime * theta.sin();
        let plus_prime = (T::one() + p_perp_prime * p_perp_prime) / minus_prime;
        Ok(Self {
            theta,
            phi_k: T::zero(),
            harmonic,
            k_prime,
            energy_prime: (plus_prime + minus_prime) * lit(0.5),
            p_z_prime: (plus_prime - minus_prime) * lit(0.5),
            p_perp_prime,
            radius: ea / (k * minus),
            radius_prime: ea / (k * minus_prime),
            minus_prime,
            plus_prime,
            wave_number: k,
            amplitude: ea,
            closed_form_discrepancy,
        })
    }

    pub fn with_azimuth(mut self, phi_k: T) -> Self {
        self.phi_k = phi_k;
        self
    }

    /// `E'^2 - p'_z^2 - p'_perp^2 - 1`.
    pub fn mass_shell_residual(&self) -> T {
        self.minus_prime * self.plus_prime - self.p_perp_prime * self.p_perp_prime - T::one()
    }

    /// `(E' - p'_z) + k'(1 - cos theta) - (E - p_z)`.
    pub fn light_cone_residual(&self, beam: &ElectronBeam<T>) -> T {
        self.minus_prime + self.k_prime * (T::one() - self.theta.cos()) - beam.light_cone_minus()
    }

    /// Residuals of the z-momentum and quasi-energy selection rules,
    /// relative to the initial energy.
    pub fn selection_rule_residuals(&self, beam: &ElectronBeam<T>) -> (T, T) {
        let order = T::from_u32(self.harmonic).unwrap();
        let ea = self.amplitude;
        let shift = ea * lit(0.5) * (self.radius_prime - self.radius) * self.wave_number;
        let nk = order * self.wave_number;
        let momentum =
            self.p_z_prime + self.k_prime * self.theta.cos() - beam.p_z() - nk + shift;
        let energy = self.energy_prime + self.k_prime - beam.energy() - nk + shift;
        (momentum / beam.energy(), energy / beam.energy())
    }
}

/// Solves the selection rules for `k'` by bracketed root finding on the
/// final mass-shell condition, independently of the closed form, and
/// returns the full final state.
pub fn solve_final_state<T: Real>(
    theta: T,
    harmonic: i32,
    beam: &ElectronBeam<T>,
    laser: &LaserField<T>,
) -> Result<EmissionKinematics<T>> {
    let order_u = check_harmonic(harmonic)?;
    let order = T::from_u32(order_u).unwrap();
    let k = laser.wave_number();
    let ea2 = laser.amplitude() * laser.amplitude();
    let minus = beam.light_cone_minus();
    let plus = beam.light_cone_plus();
    let two = lit::<T>(2.0);
    let (s, c) = (theta * lit(0.5)).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let sin_theta = theta.sin();

    // (E' - p'_z)(E' + p'_z) - 1 - p'_perp^2 with E' + p'_z taken from the
    // quasi-energy and momentum rules, multiplied through by E' - p'_z
    let residual = |kp: T| {
        let minus_prime = minus - two * s2 * kp;
        minus_prime * (plus + two * order * k - two * c2 * kp + ea2 / minus)
            - ea2
            - T::one()
            - kp * kp * sin_theta * sin_theta
    };

    let energy_cap = beam.energy() - T::one() + order * k;
    let light_cone_cap = if s2 > T::zero() { minus / (two * s2) } else { T::infinity() };
    let hi = energy_cap.min(light_cone_cap);
    let lo = lit::<T>(1e-18).min(hi * lit(0.5));
    let bracket = RootBracket::with_tolerance(lo, hi, lit::<T>(4.0) * T::epsilon())?;
    let k_prime = match find_root(residual, &bracket) {
        Ok(v) => v,
        Err(PhysicsError::Bracket { .. }) => {
            return Err(PhysicsError::ClosedChannel(format!(
                "no photon energy in (0, {hi}] satisfies the selection rules at theta = {theta}"
            )))
        }
        Err(e) => return Err(e),
    };

    let closed = emitted_photon_energy(theta, harmonic, beam, laser)?;
    let discrepancy = (k_prime - closed).abs() / closed;
    EmissionKinematics::assemble(theta, order_u, k_prime, beam, laser, discrepancy)
}

/// Relative wavelength shift `(lambda' - lambda0') / lambda0'` caused by a
/// non-zero coherence amplitude of `radiation`:
/// `(eA sin(theta/2))^2 / ((E - p_z) (E + k - (p_z + k) cos theta))`.
pub fn wavelength_shift<T: Real>(theta: T, beam: &ElectronBeam<T>, radiation: &LaserField<T>) -> T {
    let ea = radiation.amplitude();
    let s2 = (theta * lit(0.5)).sin().powi(2);
    ea * ea * s2
        / (beam.light_cone_minus() * emission_denominator(theta, beam, radiation.wave_number()))
}

/// Coherent intensity (W/m^2) implied by a measured wavelength shift; the
/// shift is linear in the coherent intensity.
pub fn coherent_intensity_from_shift<T: Real>(
    measured_shift: T,
    theta: T,
    beam: &ElectronBeam<T>,
    radiation_wavelength_m: T,
) -> Result<T> {
    if !(measured_shift >= T::zero()) {
        return domain(format!("wavelength shift must be non-negative, got {measured_shift}"));
    }
    if !(radiation_wavelength_m > T::zero()) {
        return domain(format!("wavelength must be positive, got {radiation_wavelength_m}"));
    }
    if measured_shift == T::zero() {
        return Ok(T::zero());
    }
    let k = units::<T>().wave_number_from_wavelength(radiation_wavelength_m);
    let s2 = (theta * lit(0.5)).sin().powi(2);
    let per_amplitude2 = s2 / (beam.light_cone_minus() * emission_denominator(theta, beam, k));
    let per_intensity = per_amplitude2 * amplitude_squared_per_intensity(radiation_wavelength_m);
    if !(per_intensity > T::zero()) {
        return domain(format!("no wavelength shift is produced at theta = {theta}"));
    }
    Ok(measured_shift / per_intensity)
}

/// Electron beam probing a radiation field through the wavelength shift of
/// the light it scatters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceProbe<T> {
    pub probe_beam: ElectronBeam<T>,
    pub radiation: LaserField<T>,
    pub theta: T,
    pub shift: T,
}

impl<T: Real> CoherenceProbe<T> {
    pub fn new(probe_beam: ElectronBeam<T>, radiation: LaserField<T>, theta: T) -> Self {
        let shift = wavelength_shift(theta, &probe_beam, &radiation);
        Self { probe_beam, radiation, theta, shift }
    }

    /// Wavelength (m) of the scattered light for an incoherent field.
    pub fn compton_wavelength_m(&self) -> T {
        let k0 = compton_energy(self.theta, &self.probe_beam, self.radiation.wave_number());
        units::<T>().wavelength_from_wave_number(k0)
    }

    /// Wavelength (m) of the scattered light including the coherent shift.
    pub fn shifted_wavelength_m(&self) -> T {
        self.compton_wavelength_m() * (T::one() + self.shift)
    }

    /// Coherent intensity implied by `measured_shift` in this geometry.
    pub fn coherent_intensity(&self, measured_shift: T) -> Result<T> {
        coherent_intensity_from_shift(
            measured_shift,
            self.theta,
            &self.probe_beam,
            self.radiation.wavelength_m(),
        )
    }

    /// Fraction of the radiation intensity that is coherent.
    pub fn coherent_fraction(&self, measured_shift: T) -> Result<T> {
        Ok(self.coherent_intensity(measured_shift)? / self.radiation.intensity_w_m2())
    }
}
