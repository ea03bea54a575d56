use crate::config::Tolerances;
use crate::error::{Error, Result};

use super::eig::hermitian_eig;
use super::matrix::{norm, ComplexMatrix, C64, ZERO};

/// Positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::new_with(mat, &Tolerances::DEFAULT)
    }

    pub fn new_with(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let dev = mat.hermitian_deviation();
        if dev > tol.herm {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eig(&mat)?
            .eigenvalues
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Hermitizes and rescales a PSD operator to unit trace.
    pub fn from_psd(mat: &ComplexMatrix) -> Result<Self> {
        let h = mat.hermitian_part();
        let tr = h.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState("operator has no positive trace".into()));
        }
        Self::new(h.scale_re(1.0 / tr))
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn from_pure(v: &PureVector) -> Self {
        Self {
            mat: ComplexMatrix::outer(v.amps(), v.amps()),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(d).scale_re(1.0 / d as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `U ρ U†` for a unitary `U`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Self {
        Self {
            mat: self.mat.conjugate_by(u).hermitian_part(),
        }
    }

    pub fn kron(&self, other: &DensityMatrix) -> Self {
        Self {
            mat: self.mat.kron(&other.mat),
        }
    }

    /// `Tr(P ρ)` for any operator `P`.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        op.trace_product(&self.mat).re
    }
}

/// Hermitian idempotent operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorMatrix {
    mat: ComplexMatrix,
    rank: usize,
}

impl ProjectorMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::new_with(mat, &Tolerances::DEFAULT)
    }

    pub fn new_with(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let dev = mat.hermitian_deviation();
        if dev > tol.herm {
            return Err(Error::InvalidProjector(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let idem = (&mat * &mat).max_abs_diff(&mat);
        if idem > tol.idempotent {
            return Err(Error::InvalidProjector(format!(
                "not idempotent (deviation {idem:.3e})"
            )));
        }
        let tr = mat.trace().re;
        let rank = tr.round().max(0.0) as usize;
        if (tr - rank as f64).abs() > tol.rank_trace {
            return Err(Error::InvalidProjector(format!(
                "trace {tr} is not an integer rank"
            )));
        }
        Ok(Self { mat, rank })
    }

    /// `Σ_k |u_k⟩⟨u_k|` for orthonormal `u_k` in dimension `d`.
    pub fn from_orthonormal(basis: &[Vec<C64>], d: usize) -> Self {
        let mut mat = ComplexMatrix::zeros(d, d);
        for u in basis {
            mat = &mat + &ComplexMatrix::outer(u, u);
        }
        Self {
            mat: mat.hermitian_part(),
            rank: basis.len(),
        }
    }

    pub fn rank_one(v: &PureVector) -> Self {
        Self::from_orthonormal(&[v.amps().to_vec()], v.dim())
    }

    pub fn zero(d: usize) -> Self {
        Self {
            mat: ComplexMatrix::zeros(d, d),
            rank: 0,
        }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(d),
            rank: d,
        }
    }

    /// `U P U†` for a unitary `U`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Self {
        Self {
            mat: self.mat.conjugate_by(u).hermitian_part(),
            rank: self.rank,
        }
    }

    pub fn kron(&self, other: &ProjectorMatrix) -> Self {
        Self {
            mat: self.mat.kron(&other.mat),
            rank: self.rank * other.rank,
        }
    }

    pub fn complement(&self) -> Self {
        let d = self.dim();
        Self {
            mat: &ComplexMatrix::identity(d) - &self.mat,
            rank: d - self.rank,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

/// Unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureVector {
    amps: Vec<C64>,
}

impl PureVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n = norm(&amps);
        if (n - 1.0).abs() > Tolerances::DEFAULT.unit_norm {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amps })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let n = norm(&amps);
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self {
            amps: amps.into_iter().map(|z| z / n).collect(),
        })
    }

    pub fn basis(d: usize, k: usize) -> Self {
        let mut amps = vec![ZERO; d];
        amps[k] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn from_real(v: &[f64]) -> Result<Self> {
        Self::new(v.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn tensor(&self, other: &PureVector) -> PureVector {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        PureVector { amps }
    }
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let scale = m.max_abs().max(1.0);
    if m.hermitian_deviation() <= Tolerances::DEFAULT.herm * scale {
        let sd = hermitian_eig(&m.hermitian_part())?;
        return Ok(sd.eigenvalues.iter().map(|l| l.abs()).sum());
    }
    let gram = (&m.adjoint() * m).hermitian_part();
    let sd = hermitian_eig(&gram)?;
    Ok(sd.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum())
}

/// `½‖a − b‖₁`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(0.5 * trace_norm(&(a.matrix() - b.matrix()))?)
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn clamp_eig(l: f64) -> f64 {
    if l < Tolerances::DEFAULT.clamp {
        0.0
    } else {
        l
    }
}

/// `‖√a √b‖₁`, via the spectrum of `√a · b · √a`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let sqrt_a = hermitian_eig(a.matrix())?.map(|l| clamp_eig(l).sqrt());
    let inner = (&(&sqrt_a * b.matrix()) * &sqrt_a).hermitian_part();
    let sd = hermitian_eig(&inner)?;
    let f: f64 = sd.eigenvalues.iter().map(|&l| clamp_eig(l).sqrt()).sum();
    Ok(f.min(1.0))
}

/// Purification `Σ_i √λ_i |e_i⟩ ⊗ |i⟩` with the system as the first tensor factor.
pub fn purify(rho: &DensityMatrix) -> Result<PureVector> {
    let d = rho.dim();
    let sd = hermitian_eig(rho.matrix())?;
    let mut amps = vec![ZERO; d * d];
    for (k, &l) in sd.eigenvalues.iter().enumerate() {
        let w = clamp_eig(l).sqrt();
        if w == 0.0 {
            continue;
        }
        for s in 0..d {
            amps[s * d + k] = sd.eigenvectors[(s, k)] * w;
        }
    }
    PureVector::normalized(amps)
}

/// Operand accepted by [`partial_trace`].
#[derive(Debug, Clone, Copy)]
pub enum Operand<'a> {
    Vector(&'a [C64]),
    Matrix(&'a ComplexMatrix),
}

impl<'a> From<&'a PureVector> for Operand<'a> {
    fn from(v: &'a PureVector) -> Self {
        Operand::Vector(v.amps())
    }
}

impl<'a> From<&'a DensityMatrix> for Operand<'a> {
    fn from(m: &'a DensityMatrix) -> Self {
        Operand::Matrix(m.matrix())
    }
}

impl<'a> From<&'a ComplexMatrix> for Operand<'a> {
    fn from(m: &'a ComplexMatrix) -> Self {
        Operand::Matrix(m)
    }
}

/// Reduced operator on subsystem `keep` of a multipartite operand.
pub fn partial_trace_matrix<'a>(
    op: impl Into<Operand<'a>>,
    dims: &[usize],
    keep: usize,
) -> Result<ComplexMatrix> {
    let op = op.into();
    let total: usize = dims.iter().product();
    let found = match op {
        Operand::Vector(v) => v.len(),
        Operand::Matrix(m) => {
            if !m.is_square() {
                return Err(Error::NotSquare {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            m.dim()
        }
    };
    check_dims(total, found)?;
    if keep >= dims.len() {
        return Err(Error::ParamOutOfRange(format!(
            "subsystem index {keep} with {} subsystems",
            dims.len()
        )));
    }
    let dk = dims[keep];
    let stride: usize = dims[keep + 1..].iter().product();
    let rest = total / dk;
    // Index of (kept value a, rest index r) in the full space.
    let index = |a: usize, r: usize| {
        let hi = r / stride;
        let lo = r % stride;
        hi * dk * stride + a * stride + lo
    };
    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = ZERO;
            for r in 0..rest {
                let (i, j) = (index(a, r), index(b, r));
                acc += match op {
                    Operand::Vector(v) => v[i] * v[j].conj(),
                    Operand::Matrix(m) => m[(i, j)],
                };
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

pub fn partial_trace<'a>(
    op: impl Into<Operand<'a>>,
    dims: &[usize],
    keep: usize,
) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_matrix(op, dims, keep)?.hermitian_part())
}

/// `Σ_j Π_j ρ Π_j` for a resolution of the identity `{Π_j}`.
pub fn pinch(rho: &DensityMatrix, blocks: &[ProjectorMatrix]) -> Result<DensityMatrix> {
    let d = rho.dim();
    let tol = Tolerances::DEFAULT.resolution;
    let mut sum = ComplexMatrix::zeros(d, d);
    for (i, b) in blocks.iter().enumerate() {
        check_dims(d, b.dim())?;
        sum = &sum + b.matrix();
        for c in &blocks[i + 1..] {
            let overlap = (b.matrix() * c.matrix()).max_abs();
            if overlap > tol {
                return Err(Error::NotAResolution(format!(
                    "blocks overlap ({overlap:.3e})"
                )));
            }
        }
    }
    let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
    if dev > tol {
        return Err(Error::NotAResolution(format!(
            "blocks sum to identity only within {dev:.3e}"
        )));
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for b in blocks {
        out = &out + &rho.matrix().conjugate_by(b.matrix());
    }
    Ok(DensityMatrix::new_unchecked(out.hermitian_part()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::sample::RngStream;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket0() -> PureVector {
        PureVector::basis(2, 0)
    }

    fn ket_plus() -> PureVector {
        PureVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::diag(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        let diff = DensityMatrix::from_pure(&ket0()).matrix()
            - DensityMatrix::from_pure(&ket_plus()).matrix();
        // Pure states: ‖ψ−φ‖₁ = 2√(1−|⟨ψ|φ⟩|²).
        assert!((trace_norm(&diff).unwrap() - 2.0 * (0.5f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_non_hermitian() {
        let m = ComplexMatrix::from_vec(2, 2, vec![ZERO, C64::new(3.0, 0.0), ZERO, ZERO]).unwrap();
        assert!((trace_norm(&m).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let mut rng = RngStream::new(11);
        let rho = rng.density(4);
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
        let zero = DensityMatrix::from_pure(&ket0());
        let one = DensityMatrix::from_pure(&PureVector::basis(2, 1));
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-12);
        let plus = DensityMatrix::from_pure(&ket_plus());
        assert!((fidelity(&zero, &plus).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(matches!(
            fidelity(&zero, &DensityMatrix::maximally_mixed(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn purification_round_trips() {
        let zero = DensityMatrix::from_pure(&ket0());
        let v = purify(&zero).unwrap();
        let back = partial_trace(&v, &[2, 2], 0).unwrap();
        assert!(back.matrix().max_abs_diff(zero.matrix()) < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(2);
        let v = purify(&mixed).unwrap();
        assert!(
            partial_trace(&v, &[2, 2], 0)
                .unwrap()
                .matrix()
                .max_abs_diff(mixed.matrix())
                < 1e-10
        );

        let mut rng = RngStream::new(4);
        for d in [2, 4, 7] {
            let rho = rng.density(d);
            let v = purify(&rho).unwrap();
            let back = partial_trace(&v, &[d, d], 0).unwrap();
            assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-9);
        }
    }

    #[test]
    fn partial_trace_examples() {
        let s = FRAC_1_SQRT_2;
        let bell = PureVector::from_real(&[s, 0.0, 0.0, s]).unwrap();
        let r = partial_trace(&bell, &[2, 2], 0).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(&DensityMatrix::maximally_mixed(2).matrix().clone())
                < 1e-14
        );

        let prod = ket0().tensor(&ket_plus());
        let r = partial_trace(&prod, &[2, 2], 1).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(DensityMatrix::from_pure(&ket_plus()).matrix())
                < 1e-14
        );

        let rho = DensityMatrix::from_pure(&prod);
        let r = partial_trace(&rho, &[2, 2], 0).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(DensityMatrix::from_pure(&ket0()).matrix())
                < 1e-14
        );

        assert!(partial_trace(&prod, &[3, 2], 0).is_err());
    }

    #[test]
    fn tripartite_middle_factor() {
        let a = PureVector::basis(2, 1);
        let b = PureVector::from_real(&[0.6, 0.8, 0.0]).unwrap();
        let c = ket_plus();
        let v = a.tensor(&b).tensor(&c);
        let r = partial_trace(&v, &[2, 3, 2], 1).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(DensityMatrix::from_pure(&b).matrix())
                < 1e-14
        );
    }

    #[test]
    fn pinch_examples() {
        let plus = DensityMatrix::from_pure(&ket_plus());
        let same = pinch(&plus, &[ProjectorMatrix::identity(2)]).unwrap();
        assert_eq!(same.matrix(), plus.matrix());
        let blocks = [
            ProjectorMatrix::rank_one(&ket0()),
            ProjectorMatrix::rank_one(&PureVector::basis(2, 1)),
        ];
        let deph = pinch(&plus, &blocks).unwrap();
        assert!(
            deph.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
                < 1e-14
        );
        assert!(matches!(
            pinch(&plus, &blocks[..1]),
            Err(Error::NotAResolution(_))
        ));
    }

    #[test]
    fn projector_validation() {
        assert!(ProjectorMatrix::new(ComplexMatrix::diag(&[1.0, 0.5])).is_err());
        let p = ProjectorMatrix::new(ComplexMatrix::diag(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.complement().rank(), 1);
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[0.5, 0.4])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[0.5, 0.5])).is_ok());
    }
}
