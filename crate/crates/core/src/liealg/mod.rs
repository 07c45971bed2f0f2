//! The algebras `LE_n`, their modules `L_n` and `R_n`, and invariant tensors.

pub mod algebra;
pub mod cocycle;
pub mod e8;
pub mod forms;
pub mod module;

pub use algebra::{Element, LieAlgebra};
pub use cocycle::SignCocycle;
pub use e8::{E8ViaD8, SplitElement};
pub use forms::{InvariantForm, MomentMap, WeightProduct};
pub use module::{ActionKind, ModuleVector, WeightModule};
