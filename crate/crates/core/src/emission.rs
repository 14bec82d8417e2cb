//! Emission rates and differential cross sections summed over harmonics.
//!
//! Cross sections are in units of `m^-2` per steradian for a piece of laser
//! of volume `m^-3`, so they carry one power of `(eA)^2` relative to a
//! per-photon cross section.

use num_complex::Complex;
use rayon::prelude::*;

use crate::amplitudes::{fg_coefficients, harmonic_components, normalize_phase};
use crate::beamfield::{ElectronBeam, LaserField, Spin};
use crate::error::{domain, Result};
use crate::kinematics::{compton_energy, emitted_photon_energy, EmissionKinematics};
use crate::physcore::units;
use crate::scalar::{lit, Real};

pub use crate::amplitudes::SpinChannel;

/// Which photon polarization a cross section refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarizationSelector<T> {
    /// Basis vector `e_i`, `i` in {1, 2}.
    Basis(usize),
    /// `e' = c1 e1 + c2 e2` with `|c1|^2 + |c2|^2 = 1`.
    Arbitrary(Complex<T>, Complex<T>),
    /// Summed over both polarizations.
    Summed,
}

impl<T: Real> PolarizationSelector<T> {
    fn validate(&self) -> Result<()> {
        match *self {
            PolarizationSelector::Basis(i) if i != 1 && i != 2 => {
                domain(format!("polarization index must be 1 or 2, got {i}"))
            }
            PolarizationSelector::Arbitrary(c1, c2) => {
                let n = c1.norm_sqr() + c2.norm_sqr();
                if (n - T::one()).abs() > lit(1e-10) {
                    return domain(format!("polarization coefficients have norm^2 {n}, expected 1"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn project(&self, c: [Complex<T>; 2]) -> T {
        match *self {
            PolarizationSelector::Basis(i) => c[i - 1].norm_sqr(),
            PolarizationSelector::Arbitrary(c1, c2) => (c1.conj() * c[0] + c2.conj() * c[1]).norm_sqr(),
            PolarizationSelector::Summed => c[0].norm_sqr() + c[1].norm_sqr(),
        }
    }
}

/// Bounds of the harmonic sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation<T> {
    pub max_harmonic: u32,
    /// The sum stops once a term falls below this fraction of the running
    /// total.
    pub cutoff: T,
}

impl<T: Real> Default for Truncation<T> {
    fn default() -> Self {
        Self { max_harmonic: 8, cutoff: lit(1e-14) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossSectionChannel {
    Polarized { initial: Spin, channel: SpinChannel },
    SpinAveraged,
}

/// Differential cross section at one emission angle.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionPoint<T> {
    pub theta: T,
    pub channel: CrossSectionChannel,
    pub photon_occupation: u32,
    /// Contribution of each harmonic, starting at 1.
    pub terms: Vec<T>,
    pub value: T,
}

impl<T> CrossSectionPoint<T> {
    /// Highest harmonic that entered the sum.
    pub fn harmonic(&self) -> usize {
        self.terms.len()
    }
}

fn occupation_factor<T: Real>(occupation: u32) -> T {
    T::from_u32(occupation).unwrap() + T::one()
}

fn check_flux<T: Real>(beam: &ElectronBeam<T>) -> Result<()> {
    if beam.p_z() == T::zero() {
        return domain("an electron at rest carries no flux through the laser");
    }
    Ok(())
}

/// Transition probability per unit time, volume and solid angle for one
/// harmonic, photon polarization `e_i` and spin channel.
pub fn transition_rate_density<T: Real>(
    kin: &EmissionKinematics<T>,
    beam: &ElectronBeam<T>,
    channel: SpinChannel,
    i: usize,
    photon_occupation: u32,
) -> Result<T> {
    PolarizationSelector::<T>::Basis(i).validate()?;
    let c = harmonic_components(kin, &fg_coefficients(kin, beam), channel)?;
    let one = T::one();
    let order = T::from_u32(kin.harmonic).unwrap();
    let pi3 = T::PI() * T::PI() * T::PI();
    let prefactor = units::<T>().fine_structure * kin.k_prime * kin.k_prime
        * occupation_factor::<T>(photon_occupation)
        / (lit::<T>(32.0) * pi3 * order * kin.wave_number * beam.energy() * beam.light_cone_minus()
            * (beam.energy() + one)
            * (kin.energy_prime + one));
    Ok(prefactor * c[i - 1].norm_sqr())
}

/// Cross section of one harmonic in one spin channel.
pub fn harmonic_cross_section<T: Real>(
    kin: &EmissionKinematics<T>,
    beam: &ElectronBeam<T>,
    channel: SpinChannel,
    polarization: PolarizationSelector<T>,
    photon_occupation: u32,
) -> Result<T> {
    polarization.validate()?;
    check_flux(beam)?;
    let c = harmonic_components(kin, &fg_coefficients(kin, beam), channel)?;
    Ok(cross_section_prefactor(kin, beam, photon_occupation) * polarization.project(c))
}

fn cross_section_prefactor<T: Real>(kin: &EmissionKinematics<T>, beam: &ElectronBeam<T>, occupation: u32) -> T {
    let one = T::one();
    let order = T::from_u32(kin.harmonic).unwrap();
    units::<T>().fine_structure * kin.k_prime * kin.k_prime * occupation_factor::<T>(occupation)
        / (lit::<T>(8.0) * T::PI() * order * kin.wave_number * beam.p_z().abs()
            * beam.light_cone_minus()
            * (beam.energy() + one)
            * (kin.energy_prime + one))
}

fn harmonic_sum<T, F>(truncation: &Truncation<T>, mut term: F) -> Result<Vec<T>>
where
    T: Real,
    F: FnMut(i32) -> Result<T>,
{
    let mut terms = Vec::new();
    let mut total = T::zero();
    for n in 1..=truncation.max_harmonic.max(1) as i32 {
        let t = term(n)?;
        terms.push(t);
        total = total + t;
        if n > 1 && t < truncation.cutoff * total {
            break;
        }
    }
    Ok(terms)
}

/// Differential cross section for the beam spin, one spin channel and one
/// photon polarization, summed over harmonics.
pub fn diff_cross_section<T: Real>(
    theta: T,
    phi_k: T,
    beam: &ElectronBeam<T>,
    laser: &LaserField<T>,
    channel: SpinChannel,
    polarization: PolarizationSelector<T>,
    photon_occupation: u32,
    truncation: &Truncation<T>,
) -> Result<CrossSectionPoint<T>> {
    polarization.validate()?;
    check_flux(beam)?;
    let terms = harmonic_sum(truncation, |n| {
        let kin = EmissionKinematics::from_closed_form(theta, n, beam, laser)?.with_azimuth(phi_k);
        harmonic_cross_section(&kin, beam, channel, polarization, photon_occupation)
    })?;
    Ok(CrossSectionPoint {
        theta,
        channel: CrossSectionChannel::Polarized { initial: beam.spin(), channel },
        photon_occupation,
        value: terms.iter().copied().sum(),
        terms,
    })
}

/// Spin-averaged cross section `(1/2) sum_i sum_sigma sum_sigma'`.
pub fn averaged_cross_section<T: Real>(
    theta: T,
    phi_k: T,
    beam: &ElectronBeam<T>,
    laser: &LaserField<T>,
    photon_occupation: u32,
    truncation: &Truncation<T>,
) -> Result<CrossSectionPoint<T>> {
    if !(theta >= T::zero() && theta <= T::PI()) {
        return domain(format!("emission angle {theta} outside [0, pi]"));
    }
    check_flux(beam)?;
    let half = lit::<T>(0.5);
    let terms = harmonic_sum(truncation, |n| {
        let kin = EmissionKinematics::from_closed_form(theta, n, beam, laser)?.with_azimuth(phi_k);
        let mut sum = T::zero();
        for spin in Spin::BOTH {
            let b = beam.with_spin(spin);
            for channel in SpinChannel::BOTH {
                sum = sum + harmonic_cross_section(&kin, &b, channel, PolarizationSelector::Summed, photon_occupation)?;
            }
        }
        Ok(sum * half)
    })?;
    Ok(CrossSectionPoint {
        theta,
        channel: CrossSectionChannel::SpinAveraged,
        photon_occupation,
        value: terms.iter().copied().sum(),
        terms,
    })
}

/// Dominant polarization of the spin-averaged first-harmonic emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState<T> {
    /// Components along `(e1, e2)`, normalized, first largest entry real.
    pub components: [Complex<T>; 2],
    /// `(l1 - l2) / (l1 + l2)` of the 2x2 polarization density matrix.
    pub degree: T,
}

/// Polarization density matrix of the spin-averaged first harmonic and its
/// dominant eigenvector. `None` when no light is emitted at this angle.
pub fn averaged_polarization<T: Real>(
    theta: T,
    beam: &ElectronBeam<T>,
    laser: &LaserField<T>,
) -> Result<Option<PolarizationState<T>>> {
    let kin = EmissionKinematics::from_closed_form(theta, 1, beam, laser)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut rho = [[zero; 2]; 2];
    for spin in Spin::BOTH {
        let b = beam.with_spin(spin);
        let table = fg_coefficients(&kin, &b);
        for channel in SpinChannel::BOTH {
            let c = harmonic_components(&kin, &table, channel)?;
            for i in 0..2 {
                for j in 0..2 {
                    rho[i][j] = rho[i][j] + c[i] * c[j].conj();
                }
            }
        }
    }
    let a = rho[0][0].re;
    let d = rho[1][1].re;
    let b = rho[0][1];
    let trace = a + d;
    if !(trace > T::zero()) {
        return Ok(None);
    }
    let half = lit::<T>(0.5);
    let gap = (((a - d) * half).powi(2) + b.norm_sqr()).sqrt();
    let top = trace * half + gap;
    let v = if b.norm() <= T::epsilon() * trace {
        if a >= d {
            [Complex::new(T::one(), T::zero()), zero]
        } else {
            [zero, Complex::new(T::one(), T::zero())]
        }
    } else if a >= d {
        [Complex::new(top - d, T::zero()), b.conj()]
    } else {
        [b, Complex::new(top - a, T::zero())]
    };
    Ok(Some(PolarizationState { components: normalize_phase(v)?, degree: lit::<T>(2.0) * gap / trace }))
}

/// One row of an angular spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow<T> {
    pub theta: T,
    /// First-harmonic photon energy.
    pub k_prime: T,
    pub cross_section: T,
    pub polarization: Option<PolarizationState<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrum<T> {
    pub rows: Vec<SpectrumRow<T>>,
    pub beam: ElectronBeam<T>,
    pub laser: LaserField<T>,
    pub photon_occupation: u32,
    pub truncation: Truncation<T>,
}

impl<T: Real> AngularSpectrum<T> {
    /// Row with the largest cross section; the first one on ties.
    pub fn peak(&self) -> Option<&SpectrumRow<T>> {
        self.rows.iter().fold(None, |best: Option<&SpectrumRow<T>>, r| match best {
            Some(b) if b.cross_section >= r.cross_section => Some(b),
            _ => Some(r),
        })
    }
}

/// `n` evenly spaced angles covering `[lo, hi]`; a single point gives `lo`.
pub fn theta_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::from_usize(n - 1).unwrap();
            (0..n).map(|i| if i + 1 == n { hi } else { lo + step * T::from_usize(i).unwrap() }).collect()
        }
    }
}

/// Spin-averaged cross section and first-harmonic photon energy on a grid
/// of emission angles. Rows are computed in parallel and assembled in grid
/// order.
pub fn angular_spectrum<T: Real>(
    beam: &ElectronBeam<T>,
    laser: &LaserField<T>,
    theta_grid: &[T],
    photon_occupation: u32,
    truncation: &Truncation<T>,
) -> Result<AngularSpectrum<T>> {
    for w in theta_grid.windows(2) {
        if !(w[1] > w[0]) {
            return domain("emission angles must be strictly increasing");
        }
    }
    if let (Some(&first), Some(&last)) = (theta_grid.first(), theta_grid.last()) {
        if !(first >= T::zero() && last <= T::PI()) {
            return domain(format!("emission angles must lie in [0, pi], got [{first}, {last}]"));
        }
    }
    let rows = theta_grid
        .par_iter()
        .map(|&theta| {
            Ok(SpectrumRow {
                theta,
                k_prime: emitted_photon_energy(theta, 1, beam, laser)?,
                cross_section: averaged_cross_section(theta, T::zero(), beam, laser, photon_occupation, truncation)?.value,
                polarization: averaged_polarization(theta, beam, laser)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AngularSpectrum { rows, beam: *beam, laser: *laser, photon_occupation, truncation: *truncation })
}

/// Klein-Nishina cross section in the electron rest frame for an incident
/// photon of energy `omega` scattered by `cos_theta_star`.
pub fn klein_nishina_rest<T: Real>(omega: T, cos_theta_star: T) -> T {
    let alpha = units::<T>().fine_structure;
    let ratio = T::one() / (T::one() + omega * (T::one() - cos_theta_star));
    let sin2 = T::one() - cos_theta_star * cos_theta_star;
    alpha * alpha * lit(0.5) * ratio * ratio * (ratio + T::one() / ratio - sin2)
}

/// Rest-frame view of a lab scattering geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestFrameGeometry<T> {
    pub omega: T,
    pub omega_prime: T,
    pub cos_theta_star: T,
    /// Lab energy of the scattered photon.
    pub k_prime: T,
}

/// Maps a lab scattering angle to the electron rest frame for a photon of
/// energy `k` moving along `+z`.
pub fn rest_frame_geometry<T: Real>(theta: T, beam: &ElectronBeam<T>, k: T) -> RestFrameGeometry<T> {
    let k_prime = compton_energy(theta, beam, k);
    let omega = k * beam.light_cone_minus();
    let (s, c) = (theta * lit(0.5)).sin_cos();
    let omega_prime = k_prime * (beam.light_cone_plus() * s * s + beam.light_cone_minus() * c * c);
    let cos_theta_star = T::one() - lit::<T>(2.0) * s * s * k * k_prime / (omega * omega_prime);
    RestFrameGeometry { omega, omega_prime, cos_theta_star, k_prime }
}

/// Lab angle and photon energy of a rest-frame scattering angle.
pub fn lab_geometry<T: Real>(cos_theta_star: T, beam: &ElectronBeam<T>, k: T) -> (T, T) {
    let omega = k * beam.light_cone_minus();
    let omega_prime = omega / (T::one() + omega * (T::one() - cos_theta_star));
    let k_prime = omega_prime * (beam.energy() + beam.p_z() * cos_theta_star);
    let k_z = omega_prime * (beam.energy() * cos_theta_star + beam.p_z());
    let sin_star = (T::one() - cos_theta_star * cos_theta_star).max(T::zero()).sqrt();
    (sin_star.atan2(k_z / omega_prime), k_prime)
}

/// Klein-Nishina `d sigma / d Omega` in the lab frame, from the rest-frame
/// formula and the Jacobian `(k' / omega')^2` of the photon solid angle.
pub fn klein_nishina_reference<T: Real>(theta: T, beam: &ElectronBeam<T>, k: T) -> T {
    let g = rest_frame_geometry(theta, beam, k);
    let jacobian = g.k_prime / g.omega_prime;
    klein_nishina_rest(g.omega, g.cos_theta_star) * jacobian * jacobian
}
