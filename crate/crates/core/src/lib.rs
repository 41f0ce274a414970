//! Root systems, Weyl groups and the square-integrability threshold
//! `k > 1 + n/|Φ|` for powers of the Fourier transform of a regular orbital
//! measure on a compact simple Lie algebra.

pub mod chamber_geometry;
pub mod error;
pub mod l2_analyzer;
pub mod numerics;
pub mod orbital_fourier;
pub mod quadrature;
pub mod rational;
pub mod root_systems;
pub mod subroot_systems;
pub mod weyl_groups;

pub use error::{Error, Result};
