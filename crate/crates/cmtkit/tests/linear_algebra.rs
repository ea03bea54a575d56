use cmtkit::qla::{
    fidelity, hermitian_eig, partial_trace, purify, trace_distance, ComplexMatrix, DensityMatrix,
    RngStream,
};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<nalgebra::Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(to_nalgebra(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn random_hermitian(rng: &mut RngStream, d: usize) -> ComplexMatrix {
    rng.gaussian_matrix(d, d).hermitian_part()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_nalgebra(seed in any::<u64>(), d in 1usize..=12) {
        let mut rng = RngStream::new(seed);
        let h = random_hermitian(&mut rng, d);
        let sd = hermitian_eig(&h).unwrap();
        let oracle = oracle_eigenvalues(&h);
        for (a, b) in sd.eigenvalues.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-10 * h.frobenius().max(1.0), "{a} vs {b}");
        }
        prop_assert!(sd.reconstruct().max_abs_diff(&h) <= 1e-10 * h.frobenius().max(1.0));
    }

    #[test]
    fn fuchs_van_de_graaf(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = RngStream::new(seed);
        let (a, b) = (rng.density(d), rng.density(d));
        let f = fidelity(&a, &b).unwrap();
        let t = trace_distance(&a, &b).unwrap();
        prop_assert!(1.0 - f <= t + 1e-9);
        prop_assert!(t <= (1.0 - f * f).max(0.0).sqrt() + 1e-9);
    }

    #[test]
    fn purification_reduces_back(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = RngStream::new(seed);
        let rho = rng.density(d);
        let psi = purify(&rho).unwrap();
        let back = partial_trace(&psi, &[d, d], 0).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) <= 1e-9);
    }
}

#[test]
fn trace_distance_of_orthogonal_pure_states_is_one() {
    let a = DensityMatrix::new(ComplexMatrix::diag(&[1.0, 0.0])).unwrap();
    let b = DensityMatrix::new(ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
    assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    assert!(fidelity(&a, &b).unwrap() < 1e-9);
}
