use proptest::prelude::*;
use wiggler_core::physcore::{bessel_jn, from_natural_energy, integrate_ode, to_natural_energy};
use wiggler_core::{coherence_amplitude, critical_density, make_beam, Direction, LaserField, Spin};

proptest! {
    #[test]
    fn bessel_recurrence(n in 1i32..=10, x in 1e-3f64..20.0) {
        let lhs = bessel_jn(n - 1, x).unwrap() + bessel_jn(n + 1, x).unwrap();
        let rhs = 2.0 * n as f64 / x * bessel_jn(n, x).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn bessel_normalization(x in 0.0f64..10.0) {
        let mut s = bessel_jn(0, x).unwrap().powi(2);
        for n in 1..=40 {
            s += 2.0 * bessel_jn(n, x).unwrap().powi(2);
        }
        prop_assert!((s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn energy_round_trip(e in 1e-6f64..1e5) {
        let back = from_natural_energy(to_natural_energy(e).unwrap()).unwrap();
        prop_assert!((back - e).abs() <= 1e-14 * e);
    }

    #[test]
    fn beams_sit_on_mass_shell(e in 0.511f64..5e4, head_on in any::<bool>()) {
        let dir = if head_on { Direction::HeadOn } else { Direction::CoPropagating };
        let b = make_beam(e, dir, Spin::Up, 0.0).unwrap();
        prop_assert!(b.mass_shell_residual().abs() < 1e-12);
        let direct = b.energy() * b.energy() - b.p_z() * b.p_z() - 1.0;
        prop_assert!(direct.abs() < 1e-12 * b.energy() * b.energy());
    }

    #[test]
    fn amplitude_quadruples_intensity(lambda in 1e-11f64..1e-5, i in 1e10f64..1e26) {
        let a = coherence_amplitude(lambda, i).unwrap();
        let b = coherence_amplitude(lambda, 4.0 * i).unwrap();
        prop_assert!((b - 2.0 * a).abs() <= 4.0 * f64::EPSILON * b);
    }

    #[test]
    fn critical_density_depends_on_force(lambda in 1e-8f64..1e-5, i in 1e15f64..1e22, c in 0.2f64..5.0) {
        // eA ∝ lambda sqrt(I) and k ∝ 1/lambda
        let a = critical_density(&LaserField::new(lambda, i).unwrap()).unwrap();
        let b = critical_density(&LaserField::new(lambda / c, i).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}

#[test]
fn rk4_is_fourth_order() {
    let exact = (-10.0f64).exp();
    let err = |steps| {
        (integrate_ode(|_, y: f64| -y, 1.0, (0.0, 10.0), steps).unwrap().final_value() - exact).abs()
    };
    let order = (err(1000) / err(2000)).log2();
    assert!((order - 4.0).abs() < 0.2, "{order}");
}
