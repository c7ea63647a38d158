//! Exact symbolic engine for graded Poisson field algebra checks.
//!
//! The crate builds the free graded-commutative algebra generated by
//! target coordinates, their odd conjugates, auxiliary graded fields
//! and symmetry ghosts, equips it with the relevant derivations and
//! verifies the defining operator identities by exact rational
//! computation on generators.

pub mod cartan;
pub mod derivation;
pub mod error;
pub mod gallery;
pub mod linalg;
pub mod model_file;
pub mod parser;
pub mod poisson;
pub mod polynomial;
pub mod rational;
pub mod report;
pub mod super_poly;
pub mod symmetry;
pub mod worldsheet;

pub use cartan::{build_operation_context, ElementKind, OperationContext};
pub use derivation::Derivation;
pub use error::{Error, Result};
pub use gallery::ModelBundle;
pub use poisson::{schouten_bracket_in, to_polynomial, Bivector, PoissonModel};
pub use symmetry::{build_kks_model, verify_action, verify_lie_algebra, ActionSpec, LieAlgebra};
pub use model_file::{load_model, load_model_str, serialize_model};
pub use parser::{parse_expression, parse_rational, parse_super_expression};
pub use polynomial::{Polynomial, VariableKind, VariableSet};
pub use rational::{rat, ratio, Rational};
pub use report::{CheckItem, CheckReport};
pub use super_poly::{GenKind, GeneratorDef, GeneratorTable, SuperPolynomial};
pub use worldsheet::{
    action_value, evaluate_configuration, integrate, pair_observable, stokes_check, superfield_d,
    worldsheet_vars, DeRhamSuperfield, FieldConfiguration, Superchain,
};
