//! Thermal entanglement in small periodic Heisenberg XX/XXZ rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`spin_model`] builds the XX and XXZ ring Hamiltonians.
//! * [`spectral`] diagonalises them and produces Gibbs states, including
//!   the zero-temperature ground-manifold state.
//! * [`entanglement`] takes partial traces and evaluates concurrence-based
//!   measures.
//! * [`analytic`] holds the closed-form four-site results used as
//!   independent oracles for the numeric path.
//! * [`sweep`] evaluates parameter grids and extracts critical temperatures.
//! * [`table_io`] reads and writes sweep tables (CSV / JSON lines).
//! * [`validate`] runs the self-consistency suite behind `xxring validate`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod spectral;
pub mod spin_model;
pub mod sweep;
pub mod table_io;
pub mod validate;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
