use serde::Serialize;

use crate::cmt::Scenario;
use crate::error::{Error, Result};
use crate::qla::{pinch, trace_norm, ComplexMatrix, DensityMatrix, ProjectorMatrix};

use super::bloch::{
    bloch_compose, bloch_decompose, norm3, perpendicular, rotate_half_turn, BlochState, Vec3,
};
use super::decompose::{block_projectors, jordan_decompose, BlockKind, JordanBlock};

/// One two-dimensional block: rank-one projectors and the unnormalized
/// restrictions of the two states.
#[derive(Debug, Clone)]
pub struct QubitBlock {
    pub p0: ComplexMatrix,
    pub p1: ComplexMatrix,
    pub sigma0: ComplexMatrix,
    pub sigma1: ComplexMatrix,
}

/// Direct sum of qubit blocks.
#[derive(Debug, Clone)]
pub struct ExtendedPair {
    pub blocks: Vec<QubitBlock>,
}

impl ExtendedPair {
    pub fn dim(&self) -> usize {
        2 * self.blocks.len()
    }

    /// The pair as a two-measurement scenario on the direct sum.
    pub fn assemble(&self) -> Result<Scenario> {
        let sum = |f: fn(&QubitBlock) -> &ComplexMatrix| {
            ComplexMatrix::direct_sum(&self.blocks.iter().map(|b| f(b).clone()).collect::<Vec<_>>())
        };
        let p0 = ProjectorMatrix::new(sum(|b| &b.p0))?;
        let p1 = ProjectorMatrix::new(sum(|b| &b.p1))?;
        let s0 = DensityMatrix::new(sum(|b| &b.sigma0).hermitian_part())?;
        let s1 = DensityMatrix::new(sum(|b| &b.sigma1).hermitian_part())?;
        Scenario::multi_state(vec![p0, p1], vec![s0, s1])
    }
}

fn scalar_block(value: f64) -> ComplexMatrix {
    if value > 0.5 {
        ComplexMatrix::diag(&[1.0, 0.0])
    } else {
        ComplexMatrix::diag(&[0.0, 1.0])
    }
}

/// Restricts both states to the blocks (which pinches them) and pads every
/// one-dimensional block to two dimensions. A padded projector is `1 ⊕ 0`
/// where it acted as 1 and `0 ⊕ 1` where it acted as 0; states get a zero
/// in the new slot.
pub fn extend_blocks(
    blocks: &[JordanBlock],
    sigma0: &DensityMatrix,
    sigma1: &DensityMatrix,
) -> Result<ExtendedPair> {
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let r0 = b.restrict(sigma0.matrix()).hermitian_part();
        let r1 = b.restrict(sigma1.matrix()).hermitian_part();
        let q = match b.kind {
            BlockKind::TwoDim => QubitBlock {
                p0: b.p0_restricted.matrix().clone(),
                p1: b.p1_restricted.matrix().clone(),
                sigma0: r0,
                sigma1: r1,
            },
            BlockKind::OneDim => {
                let pad = |m: &ComplexMatrix| {
                    ComplexMatrix::direct_sum(&[m.clone(), ComplexMatrix::zeros(1, 1)])
                };
                QubitBlock {
                    p0: scalar_block(b.p0_restricted.matrix()[(0, 0)].re),
                    p1: scalar_block(b.p1_restricted.matrix()[(0, 0)].re),
                    sigma0: pad(&r0),
                    sigma1: pad(&r1),
                }
            }
        };
        out.push(q);
    }
    Ok(ExtendedPair { blocks: out })
}

fn unit_axis(m: &ComplexMatrix) -> Result<Vec3> {
    let r = bloch_decompose(m)?.s;
    let n = norm3(r);
    if n < 0.5 {
        return Err(Error::InvalidProjector(
            "block projector is not rank one".into(),
        ));
    }
    Ok([r[0] / n, r[1] / n, r[2] / n])
}

/// Equalizes the per-block traces of the two states while keeping `V` and
/// `E` fixed and not increasing their trace distance.
///
/// Each block uses a half-turn about `r0 + r1`. When the two projector axes
/// are antipodal that sum vanishes; any axis perpendicular to `r0` then
/// satisfies the same dot-product identities and is used instead.
pub fn symmetrize_pair(pair: &ExtendedPair) -> Result<ExtendedPair> {
    let mut out = Vec::with_capacity(pair.blocks.len());
    for b in &pair.blocks {
        let r0 = unit_axis(&b.p0)?;
        let r1 = unit_axis(&b.p1)?;
        let b0 = bloch_decompose(&b.sigma0)?;
        let b1 = bloch_decompose(&b.sigma1)?;
        let total = b0.p + b1.p;
        if total <= 0.0 {
            out.push(b.clone());
            continue;
        }
        let mut axis = [r0[0] + r1[0], r0[1] + r1[1], r0[2] + r1[2]];
        if norm3(axis) <= 1e-9 {
            axis = perpendicular(r0);
        }
        let h0 = rotate_half_turn(b0.s, axis);
        let h1 = rotate_half_turn(b1.s, axis);
        let mix = |a: Vec3, wa: f64, c: Vec3, wc: f64| -> Vec3 {
            [
                (wa * a[0] + wc * c[0]) / total,
                (wa * a[1] + wc * c[1]) / total,
                (wa * a[2] + wc * c[2]) / total,
            ]
        };
        let p = 0.5 * total;
        let s0 = BlochState {
            p,
            s: mix(b0.s, b0.p, h1, b1.p),
        };
        let s1 = BlochState {
            p,
            s: mix(h0, b0.p, b1.s, b1.p),
        };
        out.push(QubitBlock {
            p0: b.p0.clone(),
            p1: b.p1.clone(),
            sigma0: bloch_compose(&s0),
            sigma1: bloch_compose(&s1),
        });
    }
    Ok(ExtendedPair { blocks: out })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockStats {
    pub v: f64,
    pub e: f64,
    pub delta: f64,
    /// Mean of the two block traces.
    pub p: f64,
}

/// Per-block statistics of the normalized block states. For symmetrized
/// input the `p`-weighted sums equal the global `V`, `E` and `½‖σ₀−σ₁‖₁`.
pub fn block_stats(pair: &ExtendedPair) -> Result<Vec<BlockStats>> {
    pair.blocks
        .iter()
        .map(|b| {
            let (t0, t1) = (b.sigma0.trace().re, b.sigma1.trace().re);
            let p = 0.5 * (t0 + t1);
            if t0 <= 0.0 || t1 <= 0.0 {
                return Ok(BlockStats {
                    v: 0.0,
                    e: 0.0,
                    delta: 0.0,
                    p,
                });
            }
            let rho0 = b.sigma0.scale_re(1.0 / t0);
            let rho1 = b.sigma1.scale_re(1.0 / t1);
            let v = 0.5 * (b.p0.trace_product(&rho0).re + b.p1.trace_product(&rho1).re);
            let e = 0.5
                * (b.p1.trace_product(&rho0.conjugate_by(&b.p0)).re
                    + b.p0.trace_product(&rho1.conjugate_by(&b.p1)).re);
            let delta = 0.5 * trace_norm(&(&rho0 - &rho1))?;
            Ok(BlockStats { v, e, delta, p })
        })
        .collect()
}

/// Every stage of the two-projector reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub blocks: Vec<JordanBlock>,
    pub pinched: (DensityMatrix, DensityMatrix),
    pub extended: ExtendedPair,
    pub symmetrized: ExtendedPair,
}

pub fn reduce_pair(
    p0: &ProjectorMatrix,
    p1: &ProjectorMatrix,
    sigma0: &DensityMatrix,
    sigma1: &DensityMatrix,
) -> Result<Reduction> {
    let blocks = jordan_decompose(p0, p1)?;
    let projs = block_projectors(&blocks);
    let pinched = (pinch(sigma0, &projs)?, pinch(sigma1, &projs)?);
    let extended = extend_blocks(&blocks, &pinched.0, &pinched.1)?;
    let symmetrized = symmetrize_pair(&extended)?;
    Ok(Reduction {
        blocks,
        pinched,
        extended,
        symmetrized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmt::tradeoff_stats;
    use crate::qla::{PureVector, RngStream};

    #[test]
    fn scalar_toy_block() {
        let p0 = ProjectorMatrix::identity(1);
        let p1 = ProjectorMatrix::zero(1);
        let s = DensityMatrix::maximally_mixed(1);
        let blocks = jordan_decompose(&p0, &p1).unwrap();
        let ext = extend_blocks(&blocks, &s, &s).unwrap();
        assert_eq!(ext.dim(), 2);
        let st = tradeoff_stats(&ext.assemble().unwrap()).unwrap();
        // V = ½(1 + 0), E = 0, Δ = 0, matching the scalar problem.
        assert!((st.v - 0.5).abs() < 1e-15 && st.e == 0.0 && st.delta == 0.0);
        assert!(ext.blocks[0].p0.trace_product(&ext.blocks[0].p1).norm() == 0.0);
    }

    #[test]
    fn mirror_pair_is_fixed() {
        let mut rng = RngStream::new(40);
        let p0 = rng.projector(2, 1).unwrap();
        let p1 = rng.projector(2, 1).unwrap();
        let r0 = bloch_decompose(p0.matrix()).unwrap().s;
        let r1 = bloch_decompose(p1.matrix()).unwrap().s;
        let b0 = bloch_decompose(&rng.density(2).matrix().scale_re(0.5)).unwrap();
        let b1 = BlochState {
            p: b0.p,
            s: crate::jordan::reflect_bloch(b0.s, r0, r1).unwrap(),
        };
        let pair = ExtendedPair {
            blocks: vec![QubitBlock {
                p0: p0.matrix().clone(),
                p1: p1.matrix().clone(),
                sigma0: bloch_compose(&b0),
                sigma1: bloch_compose(&b1),
            }],
        };
        let sym = symmetrize_pair(&pair).unwrap();
        assert!(sym.blocks[0].sigma0.max_abs_diff(&pair.blocks[0].sigma0) < 1e-12);
        assert!(sym.blocks[0].sigma1.max_abs_diff(&pair.blocks[0].sigma1) < 1e-12);
    }

    #[test]
    fn equal_states_stay_equal() {
        let mut rng = RngStream::new(44);
        let p0 = rng.projector(5, 2).unwrap();
        let p1 = rng.projector(5, 3).unwrap();
        let s = rng.density(5);
        let red = reduce_pair(&p0, &p1, &s, &s).unwrap();
        let before = tradeoff_stats(&red.extended.assemble().unwrap()).unwrap();
        let after = tradeoff_stats(&red.symmetrized.assemble().unwrap()).unwrap();
        assert!(after.delta < 1e-12);
        assert!((before.v - after.v).abs() < 1e-12 && (before.e - after.e).abs() < 1e-12);
    }

    #[test]
    fn single_block_traces_equalize() {
        let p0 = ProjectorMatrix::rank_one(&PureVector::basis(2, 0));
        let p1 = ProjectorMatrix::rank_one(&PureVector::from_real(&[0.6, 0.8]).unwrap());
        let pair = ExtendedPair {
            blocks: vec![QubitBlock {
                p0: p0.matrix().clone(),
                p1: p1.matrix().clone(),
                sigma0: ComplexMatrix::diag(&[0.3, 0.1]),
                sigma1: ComplexMatrix::diag(&[0.05, 0.05]),
            }],
        };
        let sym = symmetrize_pair(&pair).unwrap();
        assert!((sym.blocks[0].sigma0.trace().re - 0.25).abs() < 1e-15);
        assert!((sym.blocks[0].sigma1.trace().re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn antipodal_block_keeps_v_and_e() {
        let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag(&[0.0, 1.0]);
        let mut rng = RngStream::new(41);
        let pair = ExtendedPair {
            blocks: vec![QubitBlock {
                p0,
                p1,
                sigma0: rng.density(2).matrix().clone(),
                sigma1: rng.density(2).matrix().clone(),
            }],
        };
        let before = tradeoff_stats(&pair.assemble().unwrap()).unwrap();
        let after = tradeoff_stats(&symmetrize_pair(&pair).unwrap().assemble().unwrap()).unwrap();
        assert!((before.v - after.v).abs() < 1e-12);
        assert!((before.e - after.e).abs() < 1e-12);
        assert!(after.delta <= before.delta + 1e-12);
    }
}
