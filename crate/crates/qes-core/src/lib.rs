//! Spectra of the quartic PT-symmetric oscillator family
//! y'' - (z^4 - 2bz^2 + 2Jz) y = lambda y at the quasi-exactly-solvable
//! points J = n + 1.
//!
//! The crate builds the polynomial families exactly over the rationals,
//! verifies the product-differential certificate behind the spectral
//! locus, traces the real locus branches, locates level crossings through
//! Airy-function reductions, and cross-checks everything against a direct
//! complex shooting solver.

mod dd;
pub mod error;
pub mod rational;
pub mod unipoly;
pub mod bipoly;
pub mod roots;
pub mod isolate;
pub mod family;
pub mod equilibrium;
pub mod quad;
pub mod certificate;
pub mod airy;
pub mod crossing;
pub mod locus;
pub mod ode;
pub mod shooting;

pub use error::{QesError, Result};
pub use rational::Rational;
pub use unipoly::{UniPoly, Var};
pub use bipoly::BiPoly;
pub use family::{Family, SpectralPoint, MAX_FAMILY_N};
