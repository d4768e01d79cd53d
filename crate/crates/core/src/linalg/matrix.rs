use std::fmt;

use super::basis::SpanBasis;
use super::field::PrimeField;
use crate::error::{Error, Result};

/// Dense matrix over a prime field, stored column by column.
///
/// Columns are the natural unit here: they are code vectors indexed by
/// message, and every query (rank, span, independence) is about columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from column vectors of length `rows`. Entries are reduced mod q.
    pub fn from_columns<C: AsRef<[u32]>>(field: PrimeField, rows: usize, columns: &[C]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            let c = c.as_ref();
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    actual: c.len(),
                });
            }
            data.extend(c.iter().map(|&x| field.reduce(x as u64)));
        }
        Ok(FieldMatrix {
            field,
            rows,
            cols: columns.len(),
            data,
        })
    }

    /// Row-major convenience constructor, mostly for tests.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.data[col * self.rows + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u32) {
        self.data[col * self.rows + row] = self.field.reduce(value as u64);
    }

    pub fn column(&self, col: usize) -> &[u32] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.cols).map(move |j| self.column(j))
    }

    pub fn push_column(&mut self, column: &[u32]) -> Result<()> {
        if column.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: column.len(),
            });
        }
        self.data
            .extend(column.iter().map(|&x| self.field.reduce(x as u64)));
        self.cols += 1;
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: other.rows,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    pub fn select_columns(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.rows);
        for &j in indices {
            data.extend_from_slice(self.column(j));
        }
        FieldMatrix {
            field: self.field,
            rows: self.rows,
            cols: indices.len(),
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Reduced basis of the column span.
    pub fn span_basis(&self) -> SpanBasis {
        let mut b = SpanBasis::new(self.field, self.rows);
        for c in self.columns() {
            b.insert(c);
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.span_basis().rank()
    }

    /// Leftmost-greedy maximal independent set of column indices.
    pub fn independent_columns(&self) -> Vec<usize> {
        let mut b = SpanBasis::new(self.field, self.rows);
        (0..self.cols).filter(|&j| b.insert(self.column(j))).collect()
    }

    /// Whether `v` is a linear combination of this matrix's columns.
    pub fn in_span(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: v.len(),
            });
        }
        let v: Vec<u32> = v.iter().map(|&x| self.field.reduce(x as u64)).collect();
        Ok(self.span_basis().contains(&v))
    }
}

pub fn rank(mat: &FieldMatrix) -> usize {
    mat.rank()
}

pub fn in_span(v: &[u32], basis_cols: &FieldMatrix) -> Result<bool> {
    basis_cols.in_span(v)
}

pub fn independent_columns(mat: &FieldMatrix) -> Vec<usize> {
    mat.independent_columns()
}

/// Dimensions of three column spaces `V1, V2, V3` and their sums/intersections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SubspaceDims {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    /// `dim(V1 + V2)`
    pub d12: usize,
    /// `dim(V1 + V2 + V3)`
    pub d123: usize,
    /// `dim(V1 ∩ V2)`
    pub dint12: usize,
    /// `dim(V3 ∩ (V1 + V2))`
    pub dint3_12: usize,
}

impl SubspaceDims {
    /// Builds the derived dimensions from the five ranks.
    pub fn from_ranks(d1: usize, d2: usize, d3: usize, d12: usize, d123: usize) -> Self {
        debug_assert!(d12 <= d1 + d2 && d123 <= d12 + d3);
        SubspaceDims {
            d1,
            d2,
            d3,
            d12,
            d123,
            dint12: d1 + d2 - d12,
            dint3_12: d3 + d12 - d123,
        }
    }

    /// Cellular codelength `dim(V1+V2+V3) + dim(V1 ∩ V2)`.
    pub fn cellular_objective(&self) -> usize {
        self.d123 + self.dint12
    }

    /// The same quantity via `d1 + d2 + d3 - dim(V3 ∩ (V1+V2))`.
    pub fn cellular_objective_alt(&self) -> usize {
        self.d1 + self.d2 + self.d3 - self.dint3_12
    }
}

pub fn subspace_dims(c1: &FieldMatrix, c2: &FieldMatrix, c3: &FieldMatrix) -> Result<SubspaceDims> {
    for c in [c2, c3] {
        if c.rows != c1.rows {
            return Err(Error::DimensionMismatch {
                expected: c1.rows,
                actual: c.rows,
            });
        }
    }
    let mut acc = c1.span_basis();
    let d1 = acc.rank();
    for c in c2.columns() {
        acc.insert(c);
    }
    let d12 = acc.rank();
    for c in c3.columns() {
        acc.insert(c);
    }
    let d123 = acc.rank();
    Ok(SubspaceDims::from_ranks(d1, c2.rank(), c3.rank(), d12, d123))
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix(q={}, {}x{})", self.field.q(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}
