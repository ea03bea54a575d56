use crate::error::{out_of_range, Result};

/// Irreducible polynomials over GF(2) used as moduli for GF(2^l), l = 1..=8.
const BINARY_MODULI: [u32; 8] = [
    0b11,
    0b111,
    0b1011,
    0b1_0011,
    0b10_0101,
    0b100_0011,
    0b1000_0011,
    0b1_0001_1011,
];

/// Finite field with elements encoded as integers `0..size`.
/// Binary-field elements are polynomials over GF(2) written as bit patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteField {
    Prime(u32),
    Binary { l: u32 },
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u32;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) || p > 65_521 {
            return Err(out_of_range(format!("{p} is not a supported prime")));
        }
        Ok(FiniteField::Prime(p))
    }

    pub fn binary(l: u32) -> Result<Self> {
        if !(1..=8).contains(&l) {
            return Err(out_of_range(format!(
                "GF(2^{l}) unsupported; need 1 <= l <= 8"
            )));
        }
        Ok(FiniteField::Binary { l })
    }

    /// Field of order `q`: a prime, or a power of two up to 256.
    pub fn of_order(q: u32) -> Result<Self> {
        if q.is_power_of_two() && q >= 4 {
            Self::binary(q.trailing_zeros())
        } else {
            Self::prime(q)
        }
    }

    pub fn size(self) -> usize {
        match self {
            FiniteField::Prime(p) => p as usize,
            FiniteField::Binary { l } => 1 << l,
        }
    }

    pub fn add(self, a: usize, b: usize) -> usize {
        match self {
            FiniteField::Prime(p) => (a + b) % p as usize,
            FiniteField::Binary { .. } => a ^ b,
        }
    }

    pub fn neg(self, a: usize) -> usize {
        match self {
            FiniteField::Prime(p) => (p as usize - a % p as usize) % p as usize,
            FiniteField::Binary { .. } => a,
        }
    }

    pub fn sub(self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(self, a: usize, b: usize) -> usize {
        match self {
            FiniteField::Prime(p) => (a as u64 * b as u64 % p as u64) as usize,
            FiniteField::Binary { l } => {
                let modulus = BINARY_MODULI[l as usize - 1] as usize;
                let (mut a, mut b, mut acc) = (a, b, 0usize);
                while b != 0 {
                    if b & 1 == 1 {
                        acc ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                    if a >> l & 1 == 1 {
                        a ^= modulus;
                    }
                }
                acc
            }
        }
    }

    pub fn inv(self, a: usize) -> Option<usize> {
        if a == 0 {
            return None;
        }
        // a^(q−2) by square-and-multiply.
        let mut e = self.size() - 2;
        let (mut base, mut acc) = (a, 1usize);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: FiniteField) {
        let q = f.size();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "{f:?} a={a}");
            }
            for b in 0..q {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert!(f.mul(a, b) < q);
                let c = (a * 7 + b * 3 + 1) % q;
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            }
        }
    }

    #[test]
    fn binary_fields_satisfy_axioms() {
        for l in 1..=8 {
            check_axioms(FiniteField::binary(l).unwrap());
        }
    }

    #[test]
    fn prime_fields_satisfy_axioms() {
        for p in [2, 3, 5, 7, 13] {
            check_axioms(FiniteField::prime(p).unwrap());
        }
    }

    #[test]
    fn rejects_unsupported() {
        assert!(FiniteField::prime(9).is_err());
        assert!(FiniteField::binary(9).is_err());
        assert!(FiniteField::of_order(6).is_err());
        assert_eq!(
            FiniteField::of_order(32).unwrap(),
            FiniteField::Binary { l: 5 }
        );
        assert_eq!(FiniteField::of_order(2).unwrap(), FiniteField::Prime(2));
        assert_eq!(FiniteField::of_order(7).unwrap(), FiniteField::Prime(7));
    }
}
