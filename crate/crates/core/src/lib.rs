//! Husimi and Wigner quasiprobability functions of Kerr-evolved coherent
//! states at large photon number.
//!
//! Everything is generic over the scalar type through [`Real`]; the `*64`
//! aliases fix it to `f64`.

pub mod error;
pub mod grid;
pub mod husimi;
pub mod logdomain;
pub mod scalar;
pub mod specfun;
pub mod wigner;

pub use error::{Error, Result};
pub use grid::{FieldKind, FieldOptions, GridSpec, QpdField};
pub use husimi::{FEvalOptions, KerrState, RationalGamma};
pub use logdomain::{LogComplex, LogReal};
pub use scalar::Real;
pub use wigner::WignerOptions;

pub type Complex64 = num_complex::Complex<f64>;
pub type LogComplex64 = LogComplex<f64>;
pub type LogReal64 = LogReal<f64>;
pub type KerrState64 = KerrState<f64>;
pub type GridSpec64 = GridSpec<f64>;
pub type QpdField64 = QpdField<f64>;
