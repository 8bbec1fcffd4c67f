//! Numerical toolkit for hypocoercive convergence estimates of degenerate
//! Ornstein-Uhlenbeck semigroups, non-local Jacobi multiplier bounds, and a
//! finite-dimensional sandbox for non-self-adjoint resolutions of identity.
//!
//! The library is organized around five pieces:
//!
//! * [`specmat`] - dense spectral linear algebra (matrix exponentials,
//!   Lyapunov solves, Gramians, hypoellipticity rank test),
//! * [`gaussalg`] - an exact Gaussian-Fourier function algebra of plane-wave
//!   combinations, closed under the Ornstein-Uhlenbeck semigroup and the
//!   Gaussian multiplier intertwiners,
//! * [`ouhypo`] - model assembly and verification of the intertwining,
//!   composition, and decay-envelope identities for hypoelliptic
//!   Ornstein-Uhlenbeck semigroups,
//! * [`jacobi`] - non-local Jacobi model validation, Bernstein functions,
//!   beta moments, and the hypocoercive multiplier bound,
//! * [`nsa`] - a matrix-scale laboratory for non-self-adjoint resolutions of
//!   identity F = Lambda E Lambda^dagger and the associated convergence
//!   envelopes, including the Laguerre multiplier truncation family.
//!
//! All computations are pure functions of immutable inputs. Grid sweeps and
//! Monte-Carlo loops run in parallel via rayon when the default `parallel`
//! feature is enabled.

pub mod error;
pub mod exec;
pub mod gaussalg;
pub mod jacobi;
pub mod nsa;
pub mod ouhypo;
pub mod quadrature;
pub mod specmat;

pub use error::{Error, Result};
