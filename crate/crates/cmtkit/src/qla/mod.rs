//! Dense complex linear algebra, quantum-state primitives and seeded sampling.

mod eig;
mod matrix;
mod sample;
mod states;

pub use eig::{hermitian_eig, hermitian_eig_with, SpectralDecomposition};
pub use matrix::{inner, norm, orthonormalize, ComplexMatrix, MatrixSnapshot, C64};
pub use sample::{sample, unitary_exp, RngStream, SampleKind, Sampled};
pub use states::{
    fidelity, partial_trace, partial_trace_matrix, pinch, purify, trace_distance, trace_norm,
    DensityMatrix, Operand, ProjectorMatrix, PureVector,
};
