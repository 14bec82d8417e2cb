//! Photon emission by relativistic electrons wiggling in a circularly
//! polarized laser, and the population dynamics of a tube built from such
//! collisions.
//!
//! Everything inside the library works in natural units with
//! `m_e = c = hbar = 1`: energies in electron masses, lengths in reduced
//! Compton wavelengths. SI values appear only at constructors and in
//! explicitly suffixed getters (`_m`, `_mev`, `_w_m2`, `_m3`).
//!
//! The code is generic over the floating-point type; the `*64` aliases fix
//! it to `f64`.

// `!(x > 0)` is used on purpose so NaN falls into the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitudes;
pub mod beamfield;
pub mod emission;
pub mod error;
pub mod kinematics;
pub mod physcore;
pub mod scalar;
pub mod tube;

pub use beamfield::{
    coherence_amplitude, critical_density, make_beam, Direction, ElectronBeam, LaserField, Spin,
};
pub use error::{PhysicsError, Result};
pub use kinematics::{EmissionKinematics, CoherenceProbe};
pub use scalar::Real;

pub type LaserField64 = beamfield::LaserField<f64>;
pub type ElectronBeam64 = beamfield::ElectronBeam<f64>;
pub type EmissionKinematics64 = kinematics::EmissionKinematics<f64>;
pub type CoherenceProbe64 = kinematics::CoherenceProbe<f64>;
pub type CrossSectionPoint64 = emission::CrossSectionPoint<f64>;
pub type AngularSpectrum64 = emission::AngularSpectrum<f64>;
pub type TubeConfig64 = tube::TubeConfig<f64>;
pub type TubeProfile64 = tube::TubeProfile<f64>;
pub type TubeScenario64 = tube::TubeScenario<f64>;
pub type UnitSystem64 = physcore::UnitSystem<f64>;
