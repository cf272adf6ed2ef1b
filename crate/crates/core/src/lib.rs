//! Complex zeros of the characteristic function of a PT-symmetric
//! double-step waveguide: resonances, complex-conjugate eigenvalues and
//! self-dual spectral singularities, the large-distance ladder, the
//! forbidden gap, prescribed-wavenumber design and branch continuation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod continuation;
pub mod error;
pub mod kernels;
pub mod model;
pub mod singularities;
pub mod zerofinder;

pub use error::{Error, Module, Result};
pub use model::{FValue, ModelParams};
