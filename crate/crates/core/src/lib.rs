//! Exact-arithmetic computations with Lie algebra modules.
//!
//! Everything here is finite-dimensional graded linear algebra over the
//! rationals: graded vector spaces and maps with Koszul sign discipline,
//! the exterior algebra of a Lie algebra with its Chevalley-Eilenberg
//! differential, superconnections and free differential graded modules,
//! module operations (tensor, sum, dual, cohomology), the adjoint module
//! with its deformation theory, and Chern-Simons type transgression forms.
//! No floating point anywhere; all identities are checked on the nose.
//!
//! ```
//! use liemod::{lie::LieAlgebra, module::AModule, modops};
//!
//! let g = LieAlgebra::sl2();
//! let betti: Vec<usize> = modops::cohomology(&AModule::trivial(g))
//!     .unwrap()
//!     .into_iter()
//!     .map(|entry| entry.betti)
//!     .collect();
//! assert_eq!(betti, vec![1, 0, 0, 1]);
//! ```

pub mod adjoint;
pub mod charclass;
pub mod error;
pub mod form;
pub mod graded;
pub mod lie;
pub mod matrix;
pub mod metric;
pub mod modops;
pub mod module;
pub mod operator;
pub mod rational;
pub mod superconn;
#[doc(hidden)]
pub mod testkit;
pub mod tform;

pub use error::Error;
pub use form::{EForm, Form, MultiIndex};
pub use graded::{GradedMap, GradedVec, GradedVectorSpace};
pub use lie::LieAlgebra;
pub use matrix::Matrix;
pub use metric::Metric;
pub use module::{AModule, ModuleMorphism, Splitting};
pub use operator::EndValuedForm;
pub use rational::Rational;
pub use superconn::{GaugeTransformation, NonhomogeneousOperator, Superconnection};
pub use tform::TForm;
