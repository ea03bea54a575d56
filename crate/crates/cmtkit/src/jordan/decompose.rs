use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qla::{
    hermitian_eig, inner, norm, orthonormalize, ComplexMatrix, DensityMatrix, ProjectorMatrix, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    OneDim,
    TwoDim,
}

/// Common invariant subspace of two projectors, of dimension one or two.
#[derive(Debug, Clone)]
pub struct JordanBlock {
    pub kind: BlockKind,
    /// Orthonormal basis of the block inside the ambient space.
    pub basis: Vec<Vec<C64>>,
    pub p0_restricted: ProjectorMatrix,
    pub p1_restricted: ProjectorMatrix,
    /// Angle with `cos θ = |⟨u₀|u₁⟩|` for the unit vectors spanning the two
    /// restricted ranges; zero for one-dimensional blocks.
    pub principal_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub kind: BlockKind,
    pub principal_angle: f64,
    pub p0_rank: usize,
    pub p1_rank: usize,
    pub weight: f64,
}

impl JordanBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Projector onto the block in the ambient space.
    pub fn projector(&self) -> ProjectorMatrix {
        ProjectorMatrix::from_orthonormal(&self.basis, self.basis[0].len())
    }

    /// `B† X B` for the basis matrix `B`.
    pub fn restrict(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let b = ComplexMatrix::from_columns(&self.basis);
        &(&b.adjoint() * op) * &b
    }

    /// `B X B†`, embedding a block operator back into the ambient space.
    pub fn embed(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let b = ComplexMatrix::from_columns(&self.basis);
        &(&b * op) * &b.adjoint()
    }

    /// Trace of `state` inside the block.
    pub fn weight(&self, state: &DensityMatrix) -> f64 {
        self.restrict(state.matrix()).trace().re
    }

    pub fn report(&self, weight: f64) -> BlockReport {
        BlockReport {
            kind: self.kind,
            principal_angle: self.principal_angle,
            p0_rank: self.p0_restricted.rank(),
            p1_rank: self.p1_restricted.rank(),
            weight,
        }
    }
}

/// Splits the space into blocks on which both projectors act as at most
/// rank-one operators of dimension one or two.
pub fn jordan_decompose(p0: &ProjectorMatrix, p1: &ProjectorMatrix) -> Result<Vec<JordanBlock>> {
    let d = p0.dim();
    if p1.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p1.dim(),
        });
    }
    let tol = Tolerances::DEFAULT;
    let m0 = p0.matrix();
    let m1 = p1.matrix();

    let sd0 = hermitian_eig(m0)?;
    let r0 = sd0.eigenvalues.iter().filter(|&&l| l > 0.5).count();
    let range0: Vec<Vec<C64>> = (0..r0).map(|k| sd0.vector(k)).collect();

    let mut groups: Vec<Vec<Vec<C64>>> = Vec::new();
    if r0 > 0 {
        let a = ComplexMatrix::from_columns(&range0);
        let compressed = (&(&a.adjoint() * m1) * &a).hermitian_part();
        let sd = hermitian_eig(&compressed)?;
        for k in 0..r0 {
            let u = a.mul_vec(&sd.vector(k));
            let c2 = sd.eigenvalues[k];
            if c2 >= 1.0 - tol.jordan_class || c2 <= tol.jordan_class {
                groups.push(vec![u]);
                continue;
            }
            let p1u = m1.mul_vec(&u);
            let overlap = inner(&u, &p1u);
            let w: Vec<C64> = p1u.iter().zip(&u).map(|(x, y)| x - overlap * y).collect();
            let n = norm(&w);
            groups.push(vec![u, w.into_iter().map(|z| z / n).collect()]);
        }
    }

    // Whatever is left lies in ker(P0) and is invariant under P1.
    let used: Vec<Vec<C64>> = groups.iter().flatten().cloned().collect();
    if used.len() < d {
        let mut rest = ComplexMatrix::identity(d);
        for v in &used {
            rest = &rest - &ComplexMatrix::outer(v, v);
        }
        let sd = hermitian_eig(&rest.hermitian_part())?;
        let remaining = d - used.len();
        let basis: Vec<Vec<C64>> = (0..remaining).map(|k| sd.vector(k)).collect();
        let b = ComplexMatrix::from_columns(&basis);
        let compressed = (&(&b.adjoint() * m1) * &b).hermitian_part();
        let sd = hermitian_eig(&compressed)?;
        for k in 0..remaining {
            groups.push(vec![b.mul_vec(&sd.vector(k))]);
        }
    }

    // One re-orthogonalization pass over the assembled basis.
    let flat: Vec<Vec<C64>> = groups.iter().flatten().cloned().collect();
    let ortho = orthonormalize(&flat, 1e-6);
    if ortho.len() != d || flat.len() != d {
        return Err(Error::DecompositionFailure(format!(
            "assembled {} of {d} basis vectors",
            ortho.len()
        )));
    }
    let mut blocks = Vec::with_capacity(groups.len());
    let mut next = 0;
    for g in &groups {
        let basis: Vec<Vec<C64>> = ortho[next..next + g.len()].to_vec();
        next += g.len();
        blocks.push(make_block(basis, m0, m1)?);
    }

    check_leakage(&blocks, m0, m1, tol.jordan_leak)?;
    Ok(blocks)
}

fn make_block(basis: Vec<Vec<C64>>, m0: &ComplexMatrix, m1: &ComplexMatrix) -> Result<JordanBlock> {
    let b = ComplexMatrix::from_columns(&basis);
    let restrict = |m: &ComplexMatrix| (&(&b.adjoint() * m) * &b).hermitian_part();
    let (q0, q1) = (restrict(m0), restrict(m1));
    let kind = if basis.len() == 1 {
        BlockKind::OneDim
    } else {
        BlockKind::TwoDim
    };
    let rank = |q: &ComplexMatrix| q.trace().re.round().max(0.0) as usize;
    let (k0, k1) = (rank(&q0), rank(&q1));
    if kind == BlockKind::TwoDim && (k0 != 1 || k1 != 1) {
        return Err(Error::DecompositionFailure(format!(
            "two-dimensional block with ranks ({k0}, {k1})"
        )));
    }
    let principal_angle = match kind {
        BlockKind::OneDim => 0.0,
        // q0 = |0⟩⟨0| in this basis, so ⟨0|q1|0⟩ = cos²θ.
        BlockKind::TwoDim => q1[(0, 0)].re.clamp(0.0, 1.0).sqrt().acos(),
    };
    let p0_restricted =
        ProjectorMatrix::new(q0).map_err(|e| Error::DecompositionFailure(e.to_string()))?;
    let p1_restricted =
        ProjectorMatrix::new(q1).map_err(|e| Error::DecompositionFailure(e.to_string()))?;
    Ok(JordanBlock {
        kind,
        basis,
        p0_restricted,
        p1_restricted,
        principal_angle,
    })
}

fn check_leakage(
    blocks: &[JordanBlock],
    m0: &ComplexMatrix,
    m1: &ComplexMatrix,
    tol: f64,
) -> Result<()> {
    let cols: Vec<Vec<C64>> = blocks
        .iter()
        .flat_map(|b| b.basis.iter().cloned())
        .collect();
    let u = ComplexMatrix::from_columns(&cols);
    let owner: Vec<usize> = blocks
        .iter()
        .enumerate()
        .flat_map(|(j, b)| std::iter::repeat_n(j, b.dim()))
        .collect();
    for m in [m0, m1] {
        let t = &(&u.adjoint() * m) * &u;
        for i in 0..owner.len() {
            for k in 0..owner.len() {
                if owner[i] != owner[k] && t[(i, k)].norm() > tol {
                    return Err(Error::DecompositionFailure(format!(
                        "off-block leakage {:.3e} exceeds {tol:.0e}",
                        t[(i, k)].norm()
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `Σ_j B_j P_j B_j†` for the chosen projector (`which` = 0 or 1).
pub fn reconstruct(blocks: &[JordanBlock], which: usize) -> ComplexMatrix {
    let d = blocks.first().map_or(0, |b| b.basis[0].len());
    let mut out = ComplexMatrix::zeros(d, d);
    for b in blocks {
        let p = if which == 0 {
            &b.p0_restricted
        } else {
            &b.p1_restricted
        };
        out = &out + &b.embed(p.matrix());
    }
    out
}

/// Block projectors, usable with [`crate::qla::pinch`].
pub fn block_projectors(blocks: &[JordanBlock]) -> Vec<ProjectorMatrix> {
    blocks.iter().map(JordanBlock::projector).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::{PureVector, RngStream};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn assert_valid(p0: &ProjectorMatrix, p1: &ProjectorMatrix, blocks: &[JordanBlock]) {
        let d = p0.dim();
        assert_eq!(blocks.iter().map(JordanBlock::dim).sum::<usize>(), d);
        let cols: Vec<Vec<C64>> = blocks
            .iter()
            .flat_map(|b| b.basis.iter().cloned())
            .collect();
        let u = ComplexMatrix::from_columns(&cols);
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-9);
        assert!(reconstruct(blocks, 0).max_abs_diff(p0.matrix()) < 1e-8);
        assert!(reconstruct(blocks, 1).max_abs_diff(p1.matrix()) < 1e-8);
    }

    #[test]
    fn textbook_pair() {
        let p0 = ProjectorMatrix::rank_one(&PureVector::basis(2, 0));
        let p1 = ProjectorMatrix::rank_one(
            &PureVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap(),
        );
        let blocks = jordan_decompose(&p0, &p1).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].kind, BlockKind::TwoDim);
        assert!((blocks[0].principal_angle - FRAC_PI_4).abs() < 1e-12);
        assert_valid(&p0, &p1, &blocks);
    }

    #[test]
    fn equal_projectors_give_one_dim_blocks() {
        let mut rng = RngStream::new(12);
        let p = rng.projector(6, 2).unwrap();
        let blocks = jordan_decompose(&p, &p).unwrap();
        assert!(blocks
            .iter()
            .all(|b| b.kind == BlockKind::OneDim && b.principal_angle == 0.0));
        assert_valid(&p, &p, &blocks);
    }

    #[test]
    fn random_twelve_dims() {
        let mut rng = RngStream::new(13);
        let p0 = rng.projector(12, 5).unwrap();
        let p1 = rng.projector(12, 7).unwrap();
        let blocks = jordan_decompose(&p0, &p1).unwrap();
        assert_valid(&p0, &p1, &blocks);
        let two = blocks
            .iter()
            .filter(|b| b.kind == BlockKind::TwoDim)
            .count();
        assert_eq!(two, 5);
    }

    #[test]
    fn zero_and_identity() {
        let z = ProjectorMatrix::zero(3);
        let i = ProjectorMatrix::identity(3);
        let blocks = jordan_decompose(&z, &i).unwrap();
        assert_valid(&z, &i, &blocks);
        assert!(blocks
            .iter()
            .all(|b| b.p0_restricted.rank() == 0 && b.p1_restricted.rank() == 1));
    }

    #[test]
    fn report_serializes() {
        let p0 = ProjectorMatrix::rank_one(&PureVector::basis(2, 0));
        let blocks = jordan_decompose(&p0, &p0).unwrap();
        let json = serde_json::to_value(blocks[0].report(0.5)).unwrap();
        assert_eq!(json["kind"], "one_dim");
        assert_eq!(json["weight"], 0.5);
    }
}
