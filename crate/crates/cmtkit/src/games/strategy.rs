use std::f64::consts::PI;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qla::{hermitian_eig, ComplexMatrix, DensityMatrix, PureVector, C64};

use super::spec::GameSpec;

/// Measurement family: `ops[input][output]`.
pub type Measurements = Vec<Vec<ComplexMatrix>>;

/// Shared state on `d_A ⊗ d_B` with a measurement per input on each side.
#[derive(Debug, Clone)]
pub struct Strategy {
    state: DensityMatrix,
    dims: (usize, usize),
    alice: Measurements,
    bob: Measurements,
}

fn check_family(ops: &Measurements, d: usize, who: &str) -> Result<()> {
    let tol = Tolerances::DEFAULT;
    for (x, family) in ops.iter().enumerate() {
        let mut sum = ComplexMatrix::zeros(d, d);
        for op in family {
            if !op.is_square() || op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: op.rows(),
                });
            }
            let dev = op.hermitian_deviation();
            if dev > tol.herm {
                return Err(Error::NonHermitian(dev));
            }
            let min = hermitian_eig(op)?
                .eigenvalues
                .last()
                .copied()
                .unwrap_or(0.0);
            if min < -tol.psd {
                return Err(Error::NotPsd(min));
            }
            sum = &sum + op;
        }
        let gap = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if gap > 1e-9 {
            return Err(Error::IncompleteMeasurement(format!(
                "{who} input {x}: elements miss identity by {gap:.3e}"
            )));
        }
    }
    Ok(())
}

impl Strategy {
    pub fn new(
        state: DensityMatrix,
        dims: (usize, usize),
        alice: Measurements,
        bob: Measurements,
    ) -> Result<Self> {
        let (da, db) = dims;
        if da * db != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: da * db,
                found: state.dim(),
            });
        }
        check_family(&alice, da, "Alice")?;
        check_family(&bob, db, "Bob")?;
        Ok(Self {
            state,
            dims,
            alice,
            bob,
        })
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn alice(&self) -> &Measurements {
        &self.alice
    }

    pub fn bob(&self) -> &Measurements {
        &self.bob
    }

    /// `Tr_A((Q_x^a ⊗ I) ρ)` for every `(x, a)`, unnormalized.
    fn bob_conditionals(&self) -> Vec<Vec<ComplexMatrix>> {
        let (da, db) = self.dims;
        let rho = self.state.matrix();
        self.alice
            .iter()
            .map(|family| {
                family
                    .iter()
                    .map(|q| {
                        ComplexMatrix::from_fn(db, db, |b1, b2| {
                            let mut acc = C64::new(0.0, 0.0);
                            for a1 in 0..da {
                                for a2 in 0..da {
                                    acc += q[(a1, a2)] * rho[(a2 * db + b1, a1 * db + b2)];
                                }
                            }
                            acc
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn check_shape(&self, game: &GameSpec) -> Result<()> {
        let (ia, ib) = game.input_sizes;
        let (oa, ob) = game.output_sizes;
        if self.alice.len() != ia {
            return Err(Error::DimensionMismatch {
                expected: ia,
                found: self.alice.len(),
            });
        }
        if self.bob.len() != ib {
            return Err(Error::DimensionMismatch {
                expected: ib,
                found: self.bob.len(),
            });
        }
        for f in &self.alice {
            if f.len() != oa {
                return Err(Error::DimensionMismatch {
                    expected: oa,
                    found: f.len(),
                });
            }
        }
        for f in &self.bob {
            if f.len() != ob {
                return Err(Error::DimensionMismatch {
                    expected: ob,
                    found: f.len(),
                });
            }
        }
        Ok(())
    }
}

/// Winning probability under the uniform input distribution.
pub fn evaluate_strategy(game: &GameSpec, s: &Strategy) -> Result<f64> {
    game.require_uniform()?;
    s.check_shape(game)?;
    let (ia, ib) = game.input_sizes;
    let cond = s.bob_conditionals();
    let mut total = 0.0;
    for (x, by_a) in cond.iter().enumerate() {
        for (a, rho_b) in by_a.iter().enumerate() {
            for (y, family) in s.bob.iter().enumerate() {
                for (b, p) in family.iter().enumerate() {
                    if game.wins(x, y, a, b) {
                        total += p.trace_product(rho_b).re;
                    }
                }
            }
        }
    }
    Ok(total / (ia * ib) as f64)
}

/// Strategy for the coupled game: Alice unchanged, Bob answers an ordered pair
/// `y ≠ y'` with `P_y^b P_{y'}^{b'} P_y^b`.
#[derive(Debug, Clone)]
pub struct CoupledStrategy {
    base: Strategy,
    /// `pairs[y][y'][b][b']`; empty when `y = y'`.
    pairs: Vec<Vec<Vec<Vec<ComplexMatrix>>>>,
}

impl CoupledStrategy {
    pub fn base(&self) -> &Strategy {
        &self.base
    }

    pub fn element(&self, y: usize, y2: usize, b: usize, b2: usize) -> Option<&ComplexMatrix> {
        self.pairs.get(y)?.get(y2)?.get(b)?.get(b2)
    }
}

pub fn induce_coupled(s: &Strategy) -> Result<CoupledStrategy> {
    let tol = Tolerances::DEFAULT;
    for (y, family) in s.bob.iter().enumerate() {
        for p in family {
            if (p * p).max_abs_diff(p) > tol.idempotent {
                return Err(Error::NonProjectiveBob(y));
            }
        }
    }
    let nb = s.bob.len();
    let pairs = (0..nb)
        .map(|y| {
            (0..nb)
                .map(|y2| {
                    if y == y2 {
                        return Vec::new();
                    }
                    s.bob[y]
                        .iter()
                        .map(|p| s.bob[y2].iter().map(|p2| p2.conjugate_by(p)).collect())
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(CoupledStrategy {
        base: s.clone(),
        pairs,
    })
}

/// Winning probability of the coupled game: uniform over `x` and ordered
/// `y ≠ y'`, won when both `(x, y, a, b)` and `(x, y', a, b')` win.
pub fn evaluate_coupled(game: &GameSpec, s: &CoupledStrategy) -> Result<f64> {
    game.require_uniform()?;
    s.base.check_shape(game)?;
    let (ia, ib) = game.input_sizes;
    if ib < 2 {
        return Err(Error::ParamOutOfRange(
            "coupled game needs at least two Bob inputs".into(),
        ));
    }
    let cond = s.base.bob_conditionals();
    let mut total = 0.0;
    for (x, by_a) in cond.iter().enumerate() {
        for (a, rho_b) in by_a.iter().enumerate() {
            for y in 0..ib {
                for y2 in (0..ib).filter(|&y2| y2 != y) {
                    for (b, row) in s.pairs[y][y2].iter().enumerate() {
                        if !game.wins(x, y, a, b) {
                            continue;
                        }
                        for (b2, op) in row.iter().enumerate() {
                            if game.wins(x, y2, a, b2) {
                                total += op.trace_product(rho_b).re;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(total / (ia * ib * (ib - 1)) as f64)
}

fn real_projector(angle: f64) -> ComplexMatrix {
    let v = PureVector::from_real(&[angle.cos(), angle.sin()]).expect("unit vector");
    ComplexMatrix::outer(v.amps(), v.amps())
}

fn basis_at(angle: f64) -> Vec<ComplexMatrix> {
    vec![real_projector(angle), real_projector(angle + PI / 2.0)]
}

/// Bell state `|Φ+⟩`, Alice measuring Z then X, Bob measuring along
/// `(Z ± X)/√2`. Wins CHSH_2(2) with probability `cos²(π/8)`.
pub fn optimal_chsh22_strategy() -> Strategy {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phi = PureVector::from_real(&[h, 0.0, 0.0, h]).expect("unit vector");
    let alice = vec![basis_at(0.0), basis_at(PI / 4.0)];
    let bob = vec![basis_at(PI / 8.0), basis_at(-PI / 8.0)];
    Strategy::new(DensityMatrix::from_pure(&phi), (2, 2), alice, bob)
        .expect("valid by construction")
}

/// Deterministic classical strategy on a one-dimensional space.
pub fn deterministic_strategy(game: &GameSpec, alice: &[usize], bob: &[usize]) -> Result<Strategy> {
    let (oa, ob) = game.output_sizes;
    let family = |choices: &[usize], outs: usize| -> Measurements {
        choices
            .iter()
            .map(|&c| {
                (0..outs)
                    .map(|o| ComplexMatrix::diag(&[if o == c { 1.0 } else { 0.0 }]))
                    .collect()
            })
            .collect()
    };
    if alice.iter().any(|&a| a >= oa) || bob.iter().any(|&b| b >= ob) {
        return Err(Error::ParamOutOfRange(
            "deterministic answer outside the output set".into(),
        ));
    }
    Strategy::new(
        DensityMatrix::maximally_mixed(1),
        (1, 1),
        family(alice, oa),
        family(bob, ob),
    )
}
