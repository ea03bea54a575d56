use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

use super::matrix::{orthonormalize, ComplexMatrix, C64};
use super::states::{DensityMatrix, ProjectorMatrix, PureVector};

/// Deterministic random stream. Child streams for parallel work are derived
/// from `(seed, index)` and never share state with the parent.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for task `index`.
    pub fn split(&self, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index.wrapping_add(1));
        Self {
            seed: self.seed,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.normal() * s, self.normal() * s)
    }

    pub fn gaussian_vector(&mut self, d: usize) -> Vec<C64> {
        (0..d).map(|_| self.complex_normal()).collect()
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn pure(&mut self, d: usize) -> PureVector {
        loop {
            let v = self.gaussian_vector(d);
            if let Ok(p) = PureVector::normalized(v) {
                return p;
            }
        }
    }

    pub fn density(&mut self, d: usize) -> DensityMatrix {
        self.density_of_rank(d, d)
    }

    /// `GG†/Tr(GG†)` with `G` of shape `d × k`.
    pub fn density_of_rank(&mut self, d: usize, k: usize) -> DensityMatrix {
        let g = self.gaussian_matrix(d, k.max(1));
        let m = &g * &g.adjoint();
        let t = m.trace().re;
        DensityMatrix::new_unchecked(m.scale_re(1.0 / t).hermitian_part())
    }

    pub fn projector(&mut self, d: usize, rank: usize) -> Result<ProjectorMatrix> {
        if rank > d || d == 0 {
            return Err(Error::RankOutOfRange { rank, dim: d });
        }
        loop {
            let cols: Vec<Vec<C64>> = (0..rank).map(|_| self.gaussian_vector(d)).collect();
            let basis = orthonormalize(&cols, 1e-8);
            if basis.len() == rank {
                return Ok(ProjectorMatrix::from_orthonormal(&basis, d));
            }
        }
    }

    /// Haar-random unitary via Gram-Schmidt on a Gaussian matrix.
    pub fn unitary(&mut self, d: usize) -> ComplexMatrix {
        loop {
            let cols: Vec<Vec<C64>> = (0..d).map(|_| self.gaussian_vector(d)).collect();
            let basis = orthonormalize(&cols, 1e-8);
            if basis.len() == d {
                return ComplexMatrix::from_columns(&basis);
            }
        }
    }

    /// `exp(iH)` for a Hermitian `H` with Gaussian entries of standard deviation `scale`.
    pub fn near_identity_unitary(&mut self, d: usize, scale: f64) -> ComplexMatrix {
        let h = self.gaussian_matrix(d, d).hermitian_part().scale_re(scale);
        unitary_exp(&h)
    }

    /// `exp(iH)` with `H` rescaled so its spectral norm equals `angle`.
    pub fn small_rotation(&mut self, d: usize, angle: f64) -> ComplexMatrix {
        let h = self.gaussian_matrix(d, d).hermitian_part();
        let sd = super::eig::hermitian_eig(&h).expect("Hermitian by construction");
        let spread = sd.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        if spread == 0.0 {
            return ComplexMatrix::identity(d);
        }
        unitary_exp(&h.scale_re(angle / spread))
    }
}

/// `exp(iH)` for Hermitian `H`.
pub fn unitary_exp(h: &ComplexMatrix) -> ComplexMatrix {
    let sd = super::eig::hermitian_eig(h).expect("Hermitian by construction");
    let d = sd.dim();
    let u = &sd.eigenvectors;
    let phases: Vec<C64> = sd
        .eigenvalues
        .iter()
        .map(|&l| C64::from_polar(1.0, l))
        .collect();
    ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|k| u[(i, k)] * phases[k] * u[(j, k)].conj())
            .sum()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Pure,
    Density,
    Projector { rank: usize },
    Unitary,
}

#[derive(Debug, Clone)]
pub enum Sampled {
    Pure(PureVector),
    Density(DensityMatrix),
    Projector(ProjectorMatrix),
    Unitary(ComplexMatrix),
}

pub fn sample(kind: SampleKind, dim: usize, rng: &mut RngStream) -> Result<Sampled> {
    if dim == 0 {
        return Err(Error::RankOutOfRange { rank: 0, dim });
    }
    Ok(match kind {
        SampleKind::Pure => Sampled::Pure(rng.pure(dim)),
        SampleKind::Density => Sampled::Density(rng.density(dim)),
        SampleKind::Projector { rank } => {
            if rank == 0 {
                return Err(Error::RankOutOfRange { rank, dim });
            }
            Sampled::Projector(rng.projector(dim, rank)?)
        }
        SampleKind::Unitary => Sampled::Unitary(rng.unitary(dim)),
    })
}
