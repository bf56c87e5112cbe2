//! Finite Boolean algebras and the machinery of tight filtrations.
//!
//! * [`algebra`], [`poly`], [`term`]: algebras as powersets of atoms and
//!   Boolean polynomials as truth tables.
//! * [`subalgebra`]: subalgebras as atom partitions, generation,
//!   intersection, canonical approximations, interpolation and commuting.
//! * [`elim`]: the interval form of a Boolean equation in one variable.
//! * [`pushout`]: amalgamated sums and the push-out conditions.
//! * [`filtration`]: finite tight filtrations, skeleton subalgebras,
//!   saturation and the bracket solver.
//! * [`symmetry`]: sunflowers, ideal-filter brackets and the dichotomy scan.
//! * [`norms`]: step functions on the finite Stone space, sup norms and
//!   chain norms, generic over the scalar type.

pub mod algebra;
pub mod combinatorics;
pub mod elim;
pub mod error;
pub mod filtration;
pub mod morphism;
pub mod norms;
pub mod poly;
pub mod pushout;
pub mod subalgebra;
pub mod symmetry;
pub mod term;

pub use algebra::{Element, FiniteAlgebra};
pub use elim::{all_signs_vanish, eliminate, Interval};
pub use error::{Error, Result};
pub use filtration::{Filtration, IndexSet, StepSpec};
pub use morphism::Morphism;
pub use norms::{Pairing, Scalar, StepFunction};
pub use poly::BoolPoly;
pub use pushout::{amalgamate, mediating_morphisms, verify_pushout, Amalgam, AmalgamInput, Diagram, PushoutCheck};
pub use subalgebra::SubalgebraPartition;
pub use term::Term;

/// Exact rationals of arbitrary size.
pub type Rational = num_rational::BigRational;
/// Step functions with exact rational values.
pub type RationalStepFunction = StepFunction<Rational>;
/// Step functions with floating-point values.
pub type FloatStepFunction = StepFunction<f64>;

/// Hard capacity of the element representation (one bit per atom).
pub const ATOM_CAPACITY: usize = 64;

/// Default bound on atom counts produced by builders.
pub const DEFAULT_MAX_ATOMS: usize = 24;
