//! Symbolic intersection-theory engine for stringy invariants of singular
//! elliptic fibrations.
//!
//! The crate evaluates characteristic classes of resolved hypersurfaces in
//! blown-up projective bundles and pushes them down to the base, entirely
//! in exact rational arithmetic:
//!
//! - [`chowring`]: the truncated graded polynomial algebra everything runs
//!   on, with canonical rendering for golden output.
//! - [`classes`]: Chern and Hirzebruch (chi_y) classes of line bundles,
//!   split projective-bundle ambients and hypersurfaces.
//! - [`pushforward`]: blowdown of exceptional-divisor powers in closed
//!   form, and the projective-bundle pushforward to the base.
//! - [`towers`]: blowup-tower data, the built-in resolution towers of the
//!   SU(5), SO(10) and E6 fibration models, and class transport through a
//!   tower.
//! - [`invariants`]: stringy Chern classes, Milnor classes and their W
//!   factorization, Euler-characteristic tables, stringy Hirzebruch
//!   prefactors and their P parts, chi_y polynomials, fourfold Hodge
//!   numbers and Hodge-Deligne polynomial operations.

pub mod chowring;
pub mod classes;
pub mod invariants;
pub mod pushforward;
pub mod towers;

pub use chowring::{rat, rat_int, ChowRing, ClassExpr, Error, Rat, Result, Role, SymbolEntry,
    SymbolTable};
pub use classes::{AmbientModel, LineClass};
pub use invariants::{BaseClassResult, HodgeInput, HodgeNumbers, UvPolynomial};
pub use pushforward::{Center, Sign};
pub use towers::{builtin_tower, builtin_tower_with_y_cutoff, Flavor, ModelKind, Tower};
