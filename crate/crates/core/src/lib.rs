//! Exact and asymptotic statistics of geodesics in random planar
//! quadrangulations.
//!
//! The crate has six layers:
//!
//! - [`map`] — rotation-system planar maps, quadrangulation validation,
//!   distance labelings, and canonical forms / automorphism orders;
//! - [`tree`] — well-labeled plane trees and spine trees, exhaustive
//!   enumeration, and the text serialization used by the CLI;
//! - [`bijection`] — the quadrangulation ↔ tree correspondence and its
//!   marked-geodesic extension (unzip / zip, boundary quadrangulations,
//!   irreducible decomposition);
//! - [`series`] — truncated power series over exact rationals for every
//!   counting family (`R_i`, `Z_i`, `U_i`, confluent tuples, pinch points,
//!   two-point function);
//! - [`asym`] — exact coefficient tables of the large-`n` expansions and the
//!   asymptotic laws built from them;
//! - [`continuum`] — numerical evaluation of the scaling functions
//!   (`Φ`, `ρ`, `σ`, `λ`, contact and area-correlation laws);
//! - [`sampler`] — exactly uniform random quadrangulations by rejection from
//!   labeled trees, with reweighted Monte Carlo estimators.

pub mod asym;
pub mod bijection;
pub mod continuum;
pub mod error;
pub mod geodesic;
pub mod map;
pub mod oracle;
pub mod sampler;
pub mod series;
pub mod tree;

pub use error::Error;
