//! Chevalley bases, the split determined by a character, and the enveloping
//! algebra in PBW normal form.

mod chevalley;
mod split;
mod uea;

pub use chevalley::{chevalley_constants, BasisKind, ChevalleyAlgebra, Combo};
pub use split::{centralizer_split, normalize_root_vectors, LeviSplit};
pub use uea::{Monomial, RewriteOrder, Uea, UeaElement};
