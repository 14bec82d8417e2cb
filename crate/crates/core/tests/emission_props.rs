use num_complex::Complex;
use proptest::prelude::*;
use std::f64::consts::PI;
use wiggler_core::amplitudes::{
    fg_coefficients, harmonic_components, harmonic_vectors, NuLabel, PolarizationBasis,
};
use wiggler_core::physcore::bessel_jn;
use wiggler_core::emission::{
    averaged_cross_section, diff_cross_section, transition_rate_density, PolarizationSelector,
    SpinChannel, Truncation,
};
use wiggler_core::{make_beam, Direction, ElectronBeam, EmissionKinematics, LaserField, Spin};

fn fig2() -> (ElectronBeam<f64>, LaserField<f64>) {
    (
        make_beam(307.0, Direction::HeadOn, Spin::Up, 0.0).unwrap(),
        LaserField::new(785e-9, 1e19).unwrap(),
    )
}

fn spin(up: bool) -> Spin {
    if up { Spin::Up } else { Spin::Down }
}

fn channel(keep: bool) -> SpinChannel {
    if keep { SpinChannel::Keep } else { SpinChannel::Flip }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn cross_sections_are_non_negative(
        e in 0.6f64..2000.0,
        theta in 0.0f64..=PI,
        i in 1e12f64..1e22,
        up in any::<bool>(),
        keep in any::<bool>(),
        basis in 1usize..=2,
        head_on in any::<bool>(),
    ) {
        let dir = if head_on { Direction::HeadOn } else { Direction::CoPropagating };
        let b = make_beam(e, dir, spin(up), 0.0).unwrap();
        let l = LaserField::new(785e-9, i).unwrap();
        let p = diff_cross_section(theta, 0.0, &b, &l, channel(keep), PolarizationSelector::Basis(basis), 0, &Truncation::default()).unwrap();
        prop_assert!(p.value >= 0.0 && p.value.is_finite());
        prop_assert!(p.terms.iter().all(|t| *t >= 0.0));
    }
}

proptest! {
    #[test]
    fn occupation_is_linear(theta in 0.0f64..=PI, occ in 0u32..50, up in any::<bool>(), keep in any::<bool>()) {
        let (b, l) = fig2();
        let b = b.with_spin(spin(up));
        let t = Truncation::default();
        let base = averaged_cross_section(theta, 0.0, &b, &l, 0, &t).unwrap().value;
        let v = averaged_cross_section(theta, 0.0, &b, &l, occ, &t).unwrap().value;
        prop_assert!((v - (occ as f64 + 1.0) * base).abs() <= 1e-14 * v);
        let kin = EmissionKinematics::from_closed_form(theta, 1, &b, &l).unwrap();
        let r0 = transition_rate_density(&kin, &b, channel(keep), 1, 0).unwrap();
        let r = transition_rate_density(&kin, &b, channel(keep), 1, occ).unwrap();
        prop_assert!((r - (occ as f64 + 1.0) * r0).abs() <= 1e-14 * r);
    }

    #[test]
    fn scalars_ignore_azimuth(theta in 0.0f64..=PI) {
        let (b, l) = fig2();
        let t = Truncation::default();
        let base = averaged_cross_section(theta, 0.0, &b, &l, 0, &t).unwrap().value;
        for phi in [1.0, 2.0, 3.0] {
            let v = averaged_cross_section(theta, phi, &b, &l, 0, &t).unwrap().value;
            prop_assert!((v - base).abs() <= 1e-12 * base);
            for ch in SpinChannel::BOTH {
                let a = diff_cross_section(theta, 0.0, &b, &l, ch, PolarizationSelector::Summed, 0, &t).unwrap().value;
                let c = diff_cross_section(theta, phi, &b, &l, ch, PolarizationSelector::Summed, 0, &t).unwrap().value;
                prop_assert!((a - c).abs() <= 1e-12 * a.max(1e-300));
            }
        }
    }

    #[test]
    fn truncation_is_stable(theta in 0.0f64..=PI) {
        let (b, l) = fig2();
        let d = Truncation::default();
        let wide = Truncation { max_harmonic: d.max_harmonic + 3, ..d };
        let a = averaged_cross_section(theta, 0.0, &b, &l, 0, &d).unwrap().value;
        let c = averaged_cross_section(theta, 0.0, &b, &l, 0, &wide).unwrap().value;
        prop_assert!((a - c).abs() <= 1e-10 * a);
    }

    #[test]
    fn basis_captures_transverse_vectors(theta in 0.0f64..=PI, phi in 0.0f64..6.0, up in any::<bool>(), keep in any::<bool>()) {
        let (b, l) = fig2();
        let b = b.with_spin(spin(up));
        let kin = EmissionKinematics::from_closed_form(theta, 1, &b, &l).unwrap().with_azimuth(phi);
        let hv = harmonic_vectors(&kin, &b, channel(keep)).unwrap();
        let basis = PolarizationBasis::new(theta, phi);
        let project = |e: &[f64; 3]| -> Complex<f64> { (0..3).map(|j| hv.cartesian[j] * e[j]).sum() };
        let full: f64 = hv.cartesian.iter().map(|c| c.norm_sqr()).sum();
        let split = project(&basis.e1).norm_sqr() + project(&basis.e2).norm_sqr();
        prop_assert!((split - full).abs() <= 1e-12 * full.max(1e-300));
        prop_assert!(project(&basis.k_hat).norm() <= 1e-12 * full.sqrt().max(1e-300));
    }
}

#[test]
fn dark_laser_closes_higher_harmonics() {
    let b = fig2().0;
    let dark = LaserField::new(785e-9, 0.0).unwrap();
    for n in 2..6 {
        for theta in [0.0, 1.0, 2.5, PI] {
            let kin = EmissionKinematics::from_closed_form(theta, n, &b, &dark).unwrap();
            for s in Spin::BOTH {
                let bs = b.with_spin(s);
                for ch in SpinChannel::BOTH {
                    let c = harmonic_components(&kin, &fg_coefficients(&kin, &bs), ch).unwrap();
                    assert!(c.iter().all(|x| x.norm() == 0.0));
                }
            }
        }
    }
}

#[test]
fn channels_are_exclusive() {
    // keeping the spin draws only on F, flipping it only on G
    let (b, l) = fig2();
    for s in Spin::BOTH {
        let bs = b.with_spin(s);
        let kin = EmissionKinematics::from_closed_form(2.0, 1, &bs, &l).unwrap().with_azimuth(0.4);
        let t = fg_coefficients(&kin, &bs);
        let x = kin.p_perp_prime * kin.radius_prime;
        let phase = Complex::from_polar(1.0, s.sign() as f64 * 0.4);
        for (ch, pick) in [(SpinChannel::Keep, true), (SpinChannel::Flip, false)] {
            let c = harmonic_components(&kin, &t, ch).unwrap();
            for i in 1..=2 {
                let mut manual = Complex::new(0.0, 0.0);
                for nu in NuLabel::ALL {
                    let j = bessel_jn(nu.bessel_order(1, s), x).unwrap();
                    manual += j * if pick { t.f(i, nu) } else { t.g(i, nu) * phase };
                }
                assert!((manual - c[i - 1]).norm() <= 1e-15 * manual.norm().max(1e-300));
            }
        }
    }
}
