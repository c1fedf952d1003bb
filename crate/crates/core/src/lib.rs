//! Structure theory of EPR states for finite-dimensional bipartite systems.

pub mod continuum;
pub mod epr;
pub mod error;
pub mod exec;
pub mod finite;
pub mod io;
pub mod measurement;
pub mod numerics;
pub mod quadrature;
pub mod sample;
pub mod tensor;

pub use error::{Error, Result};
pub use exec::Execution;
pub use numerics::{ComplexMatrix, Tolerances, C64};
pub use tensor::{HilbertSpace, Observable, PureState};
