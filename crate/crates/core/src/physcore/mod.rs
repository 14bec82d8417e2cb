//! Constants, natural-unit conversions, integer-order Bessel functions and
//! the small numerical toolkit (bracketed roots, fixed-step RK4) used by the
//! physics modules.

mod bessel;
mod constants;
mod ode;
mod roots;

pub use bessel::{bessel_jn, BESSEL_MAX_ARGUMENT};
pub use constants::{
    from_natural_energy, photon_energy_from_wavelength, to_natural_energy, units, UnitSystem,
};
pub use ode::{integrate_ode, Trajectory};
pub use roots::{find_root, RootBracket};
