//! Numerical toolbox for invasion fronts in one-dimensional reaction-diffusion
//! systems `U_t = D U_xx + F(U)`.
//!
//! The crate covers the full pipeline needed to study propagation into
//! unstable states and the selection of states in the wake of pulled fronts:
//!
//! - [`models`] — reaction kinetics: presets (Nagumo, FitzHugh-Nagumo,
//!   real/forced complex Ginzburg-Landau, skew-coupled systems) plus a
//!   multistable "terrace" builder, equilibria and Jacobians.
//! - [`dispersion`] — linear spreading theory: dispersion determinants
//!   `d_c(λ,ν) = det(Dν² + cν + F'(U) − λ)`, pinched double roots, spreading
//!   speeds, envelope/group velocities, weighted essential spectra.
//! - [`profiles`] — traveling waves: scalar phase-plane shooting with
//!   steepness classification, front boundary value problems with projection
//!   boundary conditions, pseudo-arclength continuation and fold detection.
//! - [`spectra`] — stability of fronts: weighted linearizations, symmetric
//!   tridiagonal point spectra (Sturm bisection), critical coupling curves,
//!   and the marginal-stability checklist for pulled fronts.
//! - [`evolve`] — semi-implicit time integration of invasion runs in lab or
//!   comoving frames, front tracking, speed fits, wake-state identification,
//!   front separations and the splice intervention.
//! - [`experiments`] — named, reproducible pipelines binding the modules
//!   into figure-level claims, each emitting a verdict record.
//! - [`harness`] — JSON configuration, deterministic CSV/JSON/Markdown
//!   output, and the sweep scheduler.

pub mod dispersion;
pub mod error;
pub mod evolve;
pub mod experiments;
pub mod harness;
pub mod linalg;
pub mod models;
pub mod polyroots;
pub mod profiles;
pub mod spectra;

pub use error::{Error, Result};
