use std::fmt;
use std::sync::Arc;

use crate::error::{out_of_range, Error, Result};

use super::field::FiniteField;

type Predicate = Arc<dyn Fn(usize, usize, usize, usize) -> bool + Send + Sync>;

/// Two-player nonlocal game. Inputs and outputs are indices; the predicate
/// takes `(x, y, a, b)`.
#[derive(Clone)]
pub struct GameSpec {
    pub name: String,
    pub input_sizes: (usize, usize),
    pub output_sizes: (usize, usize),
    predicate: Predicate,
    uniform: bool,
}

impl fmt::Debug for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameSpec")
            .field("name", &self.name)
            .field("input_sizes", &self.input_sizes)
            .field("output_sizes", &self.output_sizes)
            .field("uniform", &self.uniform)
            .finish()
    }
}

impl GameSpec {
    pub fn new<F>(
        name: &str,
        input_sizes: (usize, usize),
        output_sizes: (usize, usize),
        predicate: F,
    ) -> Self
    where
        F: Fn(usize, usize, usize, usize) -> bool + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            input_sizes,
            output_sizes,
            predicate: Arc::new(predicate),
            uniform: true,
        }
    }

    /// Marks the input distribution as non-uniform. Such games are rejected
    /// by the evaluators.
    pub fn non_uniform(mut self) -> Self {
        self.uniform = false;
        self
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn wins(&self, x: usize, y: usize, a: usize, b: usize) -> bool {
        (self.predicate)(x, y, a, b)
    }

    /// Exactly one winning `b` for every `(x, a, y)`.
    pub fn is_projective(&self) -> bool {
        let (ia, ib) = self.input_sizes;
        let (oa, ob) = self.output_sizes;
        (0..ia).all(|x| {
            (0..oa)
                .all(|a| (0..ib).all(|y| (0..ob).filter(|&b| self.wins(x, y, a, b)).count() == 1))
        })
    }

    pub(crate) fn require_uniform(&self) -> Result<()> {
        if self.uniform {
            Ok(())
        } else {
            Err(Error::NonUniformDistribution)
        }
    }

    /// CHSH_q(p): `x, a, b ∈ F_q`, `y` ranges over `p` fixed field elements,
    /// and the players win when `a + b = x·y`.
    pub fn chsh(p: usize, q: usize) -> Result<Self> {
        Self::chsh_parallel(p, q, 1)
    }

    /// m-fold parallel repetition of CHSH_q(p). Tuples are packed little-endian
    /// in base `q` (Alice's input and both outputs) or base `p` (Bob's input).
    pub fn chsh_parallel(p: usize, q: usize, m: u32) -> Result<Self> {
        if p < 2 || q < p || m < 1 {
            return Err(out_of_range(format!(
                "need 2 <= p <= q and m >= 1, got p={p} q={q} m={m}"
            )));
        }
        let q32 = u32::try_from(q).map_err(|_| out_of_range(format!("q={q} too large")))?;
        let field = FiniteField::of_order(q32)?;
        let (qm, pm) = (q.checked_pow(m), p.checked_pow(m));
        let (Some(qm), Some(pm)) = (qm, pm) else {
            return Err(Error::Overflow(format!(
                "CHSH_{q}({p})^{m} is too large to enumerate"
            )));
        };
        let predicate = move |x: usize, y: usize, a: usize, b: usize| {
            let (mut x, mut y, mut a, mut b) = (x, y, a, b);
            for _ in 0..m {
                if field.add(a % q, b % q) != field.mul(x % q, y % p) {
                    return false;
                }
                x /= q;
                a /= q;
                b /= q;
                y /= p;
            }
            true
        };
        let name = if m == 1 {
            format!("CHSH_{q}({p})")
        } else {
            format!("CHSH_{q}({p})^{m}")
        };
        Ok(Self::new(&name, (qm, pm), (qm, qm), predicate))
    }
}
