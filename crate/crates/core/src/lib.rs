//! Quartic oscillator toolkit.
//!
//! The classical and coherent-state quantum quartic oscillators share the
//! reduced equation `x'' + eps1 x + eps2 x^3 = 0`. This crate maps physical
//! parameters onto that form ([`model`]), runs an exact-rational
//! Poincaré–Lindstedt expansion of the rescaled Duffing equation
//! ([`lindstedt`], built on [`trigpoly`]), checks the results against
//! numerical integration and the elliptic-integral frequency ([`dynamics`]),
//! and evaluates period integrals and amplitude bounds near the separatrices
//! of the two double-well variants ([`separatrix`]).
//!
//! Grid evaluation ([`sweep`], [`par`]) runs on rayon when the `parallel`
//! feature is enabled (the default) and sequentially otherwise.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod lindstedt;
pub mod model;
pub mod output;
pub mod par;
pub mod quadrature;
pub mod separatrix;
pub mod sweep;
pub mod trigpoly;
pub mod validation;

pub use error::{Error, Result};
