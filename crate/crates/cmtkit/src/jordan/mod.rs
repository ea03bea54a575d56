//! Two-projector geometry: block decomposition, Bloch vectors, and the
//! reduction of a two-state problem to independent qubit blocks.

mod bloch;
mod decompose;
mod symmetrize;

pub use bloch::{
    bloch_compose, bloch_decompose, dot, norm3, perpendicular, reflect_bloch, BlochState, Vec3,
};
pub use decompose::{
    block_projectors, jordan_decompose, reconstruct, BlockKind, BlockReport, JordanBlock,
};
pub use symmetrize::{
    block_stats, extend_blocks, reduce_pair, symmetrize_pair, BlockStats, ExtendedPair, QubitBlock,
    Reduction,
};
