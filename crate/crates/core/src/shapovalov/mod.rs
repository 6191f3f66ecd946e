//! Shapovalov pairing blocks, their inverses, and the element `B` assembled
//! from the inverse pairing at `lambda / t`.

mod block;
mod cache;
mod tensor;

pub use block::{determinant_mpoly, invert, is_identity, matmul, Mode, Shapovalov, ShapovalovBlock};
pub use cache::{normalization_fingerprint, serialize_block, BlockCache};
pub use tensor::{compute_b, BBlock, BSeries, LeadingOrder, MomentumRecord, SeriesOrder, TwoTensor};
