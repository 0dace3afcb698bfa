//! Exact computations for the Lie superalgebra gl(n|n).

pub mod borelcomb;
pub mod dsfunctor;
pub mod envmod;
pub mod error;
pub mod exactq;
pub mod harness;
pub mod superalg;
pub mod weightlat;

pub use borelcomb::BorelLabel;
pub use error::{Error, Result};
pub use exactq::{Rational, SparseRationalMatrix};
pub use superalg::{AlgebraElement, MatrixUnit, Parity, Root};
pub use weightlat::{Character, RhoTuple, Weight};
