use crate::error::{Error, Result};

/// Arithmetic in the prime field `F_q`. Elements are `u32` values in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u32,
}

/// Largest modulus accepted; keeps products inside `u64` with room to spare.
pub const MAX_MODULUS: u32 = 1 << 16;

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Invalid(format!("field size {q} is not prime")));
        }
        if q > MAX_MODULUS {
            return Err(Error::Invalid(format!(
                "field size {q} exceeds the supported maximum {MAX_MODULUS}"
            )));
        }
        Ok(PrimeField { q })
    }

    pub const BINARY: PrimeField = PrimeField { q: 2 };

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.q == 2
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u32 {
        (v % self.q as u64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a != 0, "inverse of zero");
        self.pow(a, self.q as u64 - 2)
    }

    pub fn elements(self) -> std::ops::Range<u32> {
        0..self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u32> = (0..30).filter(|&q| is_prime(q)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn inverses() {
        for q in [2, 3, 5, 7, 13] {
            let f = PrimeField::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.sub(f.add(a, 1), 1), a);
            }
        }
    }
}
