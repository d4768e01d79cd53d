use super::field::PrimeField;

/// Incrementally maintained reduced basis of a column span.
///
/// Columns are pushed one at a time; each push reports whether the rank grew.
/// Over `F_2` with at most 64 rows vectors are packed into a single word and
/// reduced with XOR; every other case goes through the generic modular path.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    rows: usize,
    rank: usize,
    repr: Repr,
}

#[derive(Debug, Clone)]
enum Repr {
    /// `by_pivot[p]` holds the basis word whose lowest set bit is `p`, or 0.
    Binary { by_pivot: Vec<u64> },
    /// Basis vectors keyed by their leading (first nonzero, normalized to 1) index.
    Prime {
        field: PrimeField,
        by_pivot: Vec<Option<Vec<u32>>>,
    },
}

fn pack_bits(v: &[u32]) -> u64 {
    v.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| acc | (((x & 1) as u64) << i))
}

impl SpanBasis {
    pub fn new(field: PrimeField, rows: usize) -> Self {
        let repr = if field.is_binary() && rows <= 64 {
            Repr::Binary {
                by_pivot: vec![0; rows],
            }
        } else {
            Repr::Prime {
                field,
                by_pivot: vec![None; rows],
            }
        };
        SpanBasis { rows, rank: 0, repr }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Whether the packed fast path is in use.
    pub fn is_packed(&self) -> bool {
        matches!(self.repr, Repr::Binary { .. })
    }

    /// Adds a column; returns `true` when it was independent of the span so far.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.rows);
        match &mut self.repr {
            Repr::Binary { by_pivot } => {
                let grew = insert_bits(by_pivot, pack_bits(v));
                self.rank += grew as usize;
                grew
            }
            Repr::Prime { field, by_pivot } => {
                let mut w = v.to_vec();
                reduce_prime(*field, by_pivot, &mut w);
                match w.iter().position(|&x| x != 0) {
                    None => false,
                    Some(p) => {
                        let scale = field.inv(w[p]);
                        for x in w.iter_mut() {
                            *x = field.mul(*x, scale);
                        }
                        by_pivot[p] = Some(w);
                        self.rank += 1;
                        true
                    }
                }
            }
        }
    }

    /// Packed insert for the binary path. `bits` has bit `i` set for row `i`.
    ///
    /// Panics if the basis is not packed.
    pub fn insert_bits(&mut self, bits: u64) -> bool {
        match &mut self.repr {
            Repr::Binary { by_pivot } => {
                let grew = insert_bits(by_pivot, bits);
                self.rank += grew as usize;
                grew
            }
            Repr::Prime { .. } => panic!("insert_bits on a non-packed basis"),
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.rows);
        match &self.repr {
            Repr::Binary { by_pivot } => reduce_bits(by_pivot, pack_bits(v)) == 0,
            Repr::Prime { field, by_pivot } => {
                let mut w = v.to_vec();
                reduce_prime(*field, by_pivot, &mut w);
                w.iter().all(|&x| x == 0)
            }
        }
    }

    pub fn contains_bits(&self, bits: u64) -> bool {
        match &self.repr {
            Repr::Binary { by_pivot } => reduce_bits(by_pivot, bits) == 0,
            Repr::Prime { .. } => panic!("contains_bits on a non-packed basis"),
        }
    }

    /// Whether the `i`-th standard basis vector lies in the span.
    pub fn contains_unit(&self, i: usize) -> bool {
        match &self.repr {
            Repr::Binary { by_pivot } => reduce_bits(by_pivot, 1u64 << i) == 0,
            Repr::Prime { .. } => {
                let mut e = vec![0; self.rows];
                e[i] = 1;
                self.contains(&e)
            }
        }
    }

    pub fn insert_unit(&mut self, i: usize) -> bool {
        match &mut self.repr {
            Repr::Binary { by_pivot } => {
                let grew = insert_bits(by_pivot, 1u64 << i);
                self.rank += grew as usize;
                grew
            }
            Repr::Prime { .. } => {
                let mut e = vec![0; self.rows];
                e[i] = 1;
                self.insert(&e)
            }
        }
    }
}

fn reduce_bits(by_pivot: &[u64], mut v: u64) -> u64 {
    while v != 0 {
        let p = v.trailing_zeros() as usize;
        let b = by_pivot[p];
        if b == 0 {
            return v;
        }
        v ^= b;
    }
    0
}

fn insert_bits(by_pivot: &mut [u64], v: u64) -> bool {
    let r = reduce_bits(by_pivot, v);
    if r == 0 {
        return false;
    }
    by_pivot[r.trailing_zeros() as usize] = r;
    true
}

fn reduce_prime(field: PrimeField, by_pivot: &[Option<Vec<u32>>], w: &mut [u32]) {
    for p in 0..w.len() {
        if w[p] == 0 {
            continue;
        }
        if let Some(b) = &by_pivot[p] {
            let c = w[p];
            for (x, &y) in w[p..].iter_mut().zip(&b[p..]) {
                *x = field.sub(*x, field.mul(c, y));
            }
        }
    }
}
