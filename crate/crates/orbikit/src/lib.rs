//! Exact homological algebra over orbit categories of finite groups.
//!
//! The stack runs bottom-up: exact scalars and sparse matrices, permutation groups,
//! the skeletal orbit category `Or_F(G)`, contravariant module functors over it, chain
//! complexes, resolutions, and chain-level constructions from equivariant simplicial
//! complexes.

pub mod category;
pub mod complex;
pub mod error;
pub mod field;
pub mod functors;
pub mod group;
pub mod io;
pub mod matrix;
pub mod module;
pub mod projective;
pub mod random;
pub mod resolution;
pub mod scalar;
pub mod simplicial;
pub mod smith;
pub mod surgery;

pub use category::{MorphismId, ObjectId, OrbitCat};
pub use error::{ComplexError, GroupError, IoError, LinalgError, ModuleError};
pub use group::{Family, Perm, PermGroup, Subgroup};
pub use matrix::Matrix;
pub use module::{FGAbGroup, LeftModule, ModuleHom, RGammaModule};
pub use scalar::{CoefRing, Field, Fp, Integer, Rational, Scalar, F2, F3, F5, F7};
