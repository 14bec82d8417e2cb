//! Emission amplitudes in the transverse polarization basis of the photon.
//!
//! For a photon along `k = (sin t cos p, sin t sin p, cos t)` the basis is
//! `e1 = cos t (cos p, sin p, 0) - sin t z`, `e2 = (-sin p, cos p, 0)`, with
//! `e1 x e2 = k`. The amplitude for harmonic `N` and basis vector `e_i` is
//! `sum_nu J_{N-nu}(p'_perp R') X_i^(nu)` where `X = F` when the spin is kept
//! and `X = G exp(i sigma phi)` when it flips.

use num_complex::Complex;

use crate::beamfield::{ElectronBeam, Spin};
use crate::error::{PhysicsError, Result};
use crate::kinematics::EmissionKinematics;
use crate::physcore::bessel_jn;
use crate::scalar::{lit, Real};

/// Final electron spin relative to the initial one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinChannel {
    Keep,
    Flip,
}

impl SpinChannel {
    pub const BOTH: [SpinChannel; 2] = [SpinChannel::Keep, SpinChannel::Flip];

    pub fn final_spin(self, initial: Spin) -> Spin {
        match self {
            SpinChannel::Keep => initial,
            SpinChannel::Flip => initial.flipped(),
        }
    }

    pub fn between(initial: Spin, fin: Spin) -> Self {
        if initial == fin {
            SpinChannel::Keep
        } else {
            SpinChannel::Flip
        }
    }
}

/// Label `nu` of the three Bessel terms, relative to the initial spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NuLabel {
    /// `nu = 0`
    Zero,
    /// `nu = sigma`
    Same,
    /// `nu = -sigma`
    Opposite,
}

impl NuLabel {
    pub const ALL: [NuLabel; 3] = [NuLabel::Zero, NuLabel::Same, NuLabel::Opposite];

    pub fn value(self, spin: Spin) -> i32 {
        match self {
            NuLabel::Zero => 0,
            NuLabel::Same => spin.sign(),
            NuLabel::Opposite => -spin.sign(),
        }
    }

    /// Order `N - nu` of the accompanying Bessel function.
    pub fn bessel_order(self, harmonic: u32, spin: Spin) -> i32 {
        harmonic as i32 - self.value(spin)
    }

    fn index(self) -> usize {
        match self {
            NuLabel::Zero => 0,
            NuLabel::Same => 1,
            NuLabel::Opposite => 2,
        }
    }
}

/// Transverse polarization basis of a photon emitted along `(theta, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationBasis<T> {
    pub e1: [T; 3],
    pub e2: [T; 3],
    pub k_hat: [T; 3],
}

impl<T: Real> PolarizationBasis<T> {
    pub fn new(theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            e1: [ct * cp, ct * sp, -st],
            e2: [-sp, cp, T::zero()],
            k_hat: [st * cp, st * sp, ct],
        }
    }

    /// Cartesian vector `c1 e1 + c2 e2`.
    pub fn combine(&self, c: [Complex<T>; 2]) -> [Complex<T>; 3] {
        let mut v = [Complex::new(T::zero(), T::zero()); 3];
        for (j, out) in v.iter_mut().enumerate() {
            *out = c[0] * self.e1[j] + c[1] * self.e2[j];
        }
        v
    }
}

/// The `F_i^(nu)` and `G_i^(nu)` coefficients for one final state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgTable<T> {
    pub spin: Spin,
    f: [[Complex<T>; 3]; 2],
    g: [[Complex<T>; 3]; 2],
}

impl<T: Real> FgTable<T> {
    /// `F_i^(nu)` with `i` in {1, 2}.
    pub fn f(&self, i: usize, nu: NuLabel) -> Complex<T> {
        self.f[i - 1][nu.index()]
    }

    /// `G_i^(nu)` with `i` in {1, 2}.
    pub fn g(&self, i: usize, nu: NuLabel) -> Complex<T> {
        self.g[i - 1][nu.index()]
    }
}

/// Evaluates the `F` and `G` coefficient tables for the beam spin.
pub fn fg_coefficients<T: Real>(kin: &EmissionKinematics<T>, beam: &ElectronBeam<T>) -> FgTable<T> {
    let s = beam.spin().value::<T>();
    let one = T::one();
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);
    let (st, ct) = kin.theta.sin_cos();
    let k = kin.wave_number;
    let (r, rp) = (kin.radius, kin.radius_prime);
    let (e, pz) = (beam.energy(), beam.p_z());
    let (ep, pzp, pp) = (kin.energy_prime, kin.p_z_prime, kin.p_perp_prime);
    let (d, dp) = (beam.light_cone_minus(), kin.minus_prime);
    let (plus, plus_p) = (beam.light_cone_plus(), kin.plus_prime);
    let a = -(d + one);
    let b = -(dp + one);

    // p_z (E' + 1) - p'_z (E + 1) through light-cone components; the direct
    // form cancels between two products of order E^2
    let s2 = (kin.theta * half).sin().powi(2);
    let d_gap = two * s2 * kin.k_prime;
    let cross = (-(d_gap * (d + dp)) / d - d * pp * pp) / dp;
    let mixed = cross * half + (plus - plus_p - d_gap) * half;

    let hk = k * half;
    let re = |x: T| Complex::new(x, T::zero());
    let im = |x: T| Complex::new(T::zero(), x);

    let f1 = [
        re(-ct * pp * (e + one)
            - st * ((ep + one) * pz + (e + one) * pzp + hk * k * r * rp * a * b)),
        re(hk * (ct * r * a * b + st * pp * ((r + rp) * (e + one) - (r - rp) * pz))),
        re(hk * ct * rp * a * b),
    ];
    let g1 = [
        re(s * (ct * mixed + st * pp * (hk * k * r * rp * a + e + one))),
        re(-s * hk * (ct * r * pp * a + st * (r * a * (plus_p + one) - rp * (plus + one) * b))),
        re(-s * hk * ct * rp * pp * a),
    ];
    let f2 = [
        im(-s * pp * (e + one)),
        im(-s * hk * r * a * b),
        im(s * hk * rp * a * b),
    ];
    let g2 = [im(mixed), im(hk * r * pp * a), im(-hk * rp * pp * a)];

    FgTable { spin: beam.spin(), f: [f1, f2], g: [g1, g2] }
}

/// Components `(c1, c2)` of the amplitude vector along `(e1, e2)` for one
/// harmonic and spin channel.
pub fn harmonic_components<T: Real>(
    kin: &EmissionKinematics<T>,
    table: &FgTable<T>,
    channel: SpinChannel,
) -> Result<[Complex<T>; 2]> {
    let argument = kin.p_perp_prime * kin.radius_prime;
    let mut bessel = [T::zero(); 3];
    for nu in NuLabel::ALL {
        bessel[nu.index()] = bessel_jn(nu.bessel_order(kin.harmonic, table.spin), argument)?;
    }
    let phase = match channel {
        SpinChannel::Keep => Complex::new(T::one(), T::zero()),
        SpinChannel::Flip => Complex::from_polar(T::one(), table.spin.value::<T>() * kin.phi_k),
    };
    let mut out = [Complex::new(T::zero(), T::zero()); 2];
    for (i, c) in out.iter_mut().enumerate() {
        for nu in NuLabel::ALL {
            let x = match channel {
                SpinChannel::Keep => table.f(i + 1, nu),
                SpinChannel::Flip => table.g(i + 1, nu) * phase,
            };
            *c = *c + x * bessel[nu.index()];
        }
    }
    Ok(out)
}

/// Amplitude vector in Cartesian components together with its basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicVectors<T> {
    pub basis: PolarizationBasis<T>,
    pub components: [Complex<T>; 2],
    pub cartesian: [Complex<T>; 3],
}

pub fn harmonic_vectors<T: Real>(
    kin: &EmissionKinematics<T>,
    beam: &ElectronBeam<T>,
    channel: SpinChannel,
) -> Result<HarmonicVectors<T>> {
    let table = fg_coefficients(kin, beam);
    let components = harmonic_components(kin, &table, channel)?;
    let basis = PolarizationBasis::new(kin.theta, kin.phi_k);
    Ok(HarmonicVectors { basis, components, cartesian: basis.combine(components) })
}

/// Normalizes a complex vector and fixes its overall phase so that its
/// first largest component is real and positive. Fails when the vector
/// vanishes to rounding.
pub fn normalize_phase<T: Real, const D: usize>(v: [Complex<T>; D]) -> Result<[Complex<T>; D]> {
    let largest = v.iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(PhysicsError::ClosedPolarization);
    }
    let threshold = largest * (T::one() - lit::<T>(1e-9));
    let pivot = v.iter().find(|c| c.norm() >= threshold).copied().unwrap();
    let rotate = pivot.conj() / (pivot.norm() * norm);
    Ok(v.map(|c| c * rotate))
}

/// Polarization vector of the photon emitted in the given spin channel at
/// the harmonic of `kin`, normalized, in Cartesian components.
pub fn outgoing_polarization<T: Real>(
    kin: &EmissionKinematics<T>,
    beam: &ElectronBeam<T>,
    channel: SpinChannel,
) -> Result<[Complex<T>; 3]> {
    let hv = harmonic_vectors(kin, beam, channel)?;
    let scale = table_scale(&fg_coefficients(kin, beam));
    let norm = hv.components.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    if !(norm > lit::<T>(64.0) * T::epsilon() * scale) {
        return Err(PhysicsError::ClosedPolarization);
    }
    normalize_phase(hv.cartesian)
}

fn table_scale<T: Real>(t: &FgTable<T>) -> T {
    t.f.iter()
        .chain(t.g.iter())
        .flat_map(|row| row.iter())
        .map(|c| c.norm())
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamfield::{make_beam, Direction, LaserField};
    use std::f64::consts::PI;

    fn setup(theta: f64, spin: Spin) -> (EmissionKinematics<f64>, ElectronBeam<f64>) {
        let laser = LaserField::new(785e-9, 1e19).unwrap();
        let beam = make_beam(307.0, Direction::HeadOn, spin, 0.0).unwrap();
        let kin = EmissionKinematics::from_closed_form(theta, 1, &beam, &laser).unwrap();
        (kin, beam)
    }

    fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn basis_is_orthonormal_and_right_handed() {
        for (t, p) in [(0.3, 0.0), (1.2, 2.0), (PI, 0.7), (0.0, 0.0)] {
            let b = PolarizationBasis::new(t, p);
            assert!((dot(&b.e1, &b.e1) - 1.0).abs() < 1e-15);
            assert!((dot(&b.e2, &b.e2) - 1.0).abs() < 1e-15);
            assert!(dot(&b.e1, &b.e2).abs() < 1e-15);
            assert!(dot(&b.e1, &b.k_hat).abs() < 1e-15);
            let cross = [
                b.e1[1] * b.e2[2] - b.e1[2] * b.e2[1],
                b.e1[2] * b.e2[0] - b.e1[0] * b.e2[2],
                b.e1[0] * b.e2[1] - b.e1[1] * b.e2[0],
            ];
            for j in 0..3 {
                assert!((cross[j] - b.k_hat[j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mixed_term_matches_direct_form() {
        // moderate energy keeps the direct form accurate enough to compare
        let laser = LaserField::new(785e-9, 1e22).unwrap();
        let beam = make_beam(2.0, Direction::HeadOn, Spin::Up, 0.0).unwrap();
        for t in [0.4, 1.3, 2.5] {
            let kin = EmissionKinematics::from_closed_form(t, 1, &beam, &laser).unwrap();
            let tab = fg_coefficients(&kin, &beam);
            let direct: f64 = beam.p_z() * (kin.energy_prime + 1.0)
                - kin.p_z_prime * (beam.energy() + 1.0);
            assert!((tab.g(2, NuLabel::Zero).im - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn coefficient_parity_under_spin() {
        let (kin, up) = setup(2.0, Spin::Up);
        let down = up.with_spin(Spin::Down);
        let tu = fg_coefficients(&kin, &up);
        let td = fg_coefficients(&kin, &down);
        for nu in NuLabel::ALL {
            assert_eq!(tu.f(1, nu), td.f(1, nu));
            assert_eq!(tu.f(2, nu), -td.f(2, nu));
            assert_eq!(tu.g(1, nu), -td.g(1, nu));
            assert_eq!(tu.g(2, nu), td.g(2, nu));
        }
    }

    #[test]
    fn bessel_orders() {
        assert_eq!(NuLabel::Same.bessel_order(1, Spin::Up), 0);
        assert_eq!(NuLabel::Opposite.bessel_order(1, Spin::Up), 2);
        assert_eq!(NuLabel::Same.bessel_order(3, Spin::Down), 4);
        assert_eq!(NuLabel::Zero.bessel_order(2, Spin::Down), 2);
    }

    #[test]
    fn flip_phase_has_unit_modulus() {
        let (kin, beam) = setup(1.0, Spin::Down);
        let a = harmonic_components(&kin, &fg_coefficients(&kin, &beam), SpinChannel::Flip).unwrap();
        let rotated = kin.with_azimuth(1.1);
        let b = harmonic_components(&rotated, &fg_coefficients(&rotated, &beam), SpinChannel::Flip)
            .unwrap();
        for i in 0..2 {
            assert!((a[i].norm() - b[i].norm()).abs() < 1e-15 * a[i].norm().max(1e-300));
        }
    }

    #[test]
    fn polarization_is_transverse_and_unit() {
        for spin in Spin::BOTH {
            for ch in SpinChannel::BOTH {
                let (kin, beam) = setup(2.5, spin);
                let v = outgoing_polarization(&kin, &beam, ch).unwrap();
                let n: f64 = v.iter().map(|c| c.norm_sqr()).sum();
                assert!((n - 1.0).abs() < 1e-14);
                let k = PolarizationBasis::new(2.5, 0.0).k_hat;
                let long: Complex<f64> = (0..3).map(|j| v[j] * k[j]).sum();
                assert!(long.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn forward_spin_kept_polarization_is_circular() {
        let target = [Complex::new(1.0, 0.0), Complex::new(0.0, -1.0), Complex::new(0.0, 0.0)];
        for spin in Spin::BOTH {
            let (kin, beam) = setup(PI, spin);
            let v = outgoing_polarization(&kin, &beam, SpinChannel::Keep).unwrap();
            let overlap: Complex<f64> = (0..3).map(|j| target[j].conj() * v[j]).sum();
            assert!((overlap.norm() / 2f64.sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_flip_channel_is_closed() {
        for spin in Spin::BOTH {
            let (kin, beam) = setup(PI, spin);
            assert!(matches!(
                outgoing_polarization(&kin, &beam, SpinChannel::Flip),
                Err(PhysicsError::ClosedPolarization)
            ));
        }
    }

    #[test]
    fn phase_convention() {
        let v = [Complex::new(0.0, 2.0), Complex::new(0.0, 0.0)];
        let n = normalize_phase(v).unwrap();
        assert_eq!(n[0], Complex::new(1.0, 0.0));
        assert!(normalize_phase([Complex::new(0.0f64, 0.0); 2]).is_err());
    }
}
