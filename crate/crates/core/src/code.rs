//! Generator matrices split by sender, their text format, and encoding.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::linalg::{FieldMatrix, PrimeField};

/// A linear index code: for each sender, the columns it transmits.
///
/// Columns are full-length (`n`) vectors; a column of sender `i` must be
/// zero outside that sender's message set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    field: PrimeField,
    n: usize,
    per_sender: Vec<Vec<Vec<u32>>>,
}

impl Generator {
    pub fn new(field: PrimeField, n: usize, senders: usize) -> Self {
        Generator {
            field,
            n,
            per_sender: vec![Vec::new(); senders],
        }
    }

    /// Sends every message uncoded from the lowest-indexed sender holding it.
    pub fn uncoded(inst: &Instance) -> Self {
        let mut g = Generator::new(inst.field(), inst.n(), inst.sender_count());
        for i in 0..inst.n() {
            let j = inst.holders(i).first().expect("every message has a holder");
            g.push(j, unit(inst.n(), i));
        }
        g
    }

    pub fn push(&mut self, sender: usize, column: Vec<u32>) {
        assert_eq!(column.len(), self.n, "column length");
        let column = column.into_iter().map(|x| self.field.reduce(x as u64)).collect();
        self.per_sender[sender].push(column);
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sender_count(&self) -> usize {
        self.per_sender.len()
    }

    /// Total codelength `N = N_1 + .. + N_|S|`.
    pub fn len(&self) -> usize {
        self.per_sender.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sender_columns(&self, sender: usize) -> &[Vec<u32>] {
        &self.per_sender[sender]
    }

    /// `(sender, column)` pairs in sender-major order.
    pub fn columns(&self) -> impl Iterator<Item = (usize, &[u32])> {
        self.per_sender
            .iter()
            .enumerate()
            .flat_map(|(j, cols)| cols.iter().map(move |c| (j, c.as_slice())))
    }

    pub fn to_matrix(&self) -> FieldMatrix {
        let cols: Vec<&[u32]> = self.columns().map(|(_, c)| c).collect();
        FieldMatrix::from_columns(self.field, self.n, &cols).expect("columns have length n")
    }

    /// Checks that every column is supported on its sender's message set.
    pub fn check_support(&self, inst: &Instance) -> Result<()> {
        if self.n != inst.n() || self.sender_count() != inst.sender_count() {
            return Err(Error::DimensionMismatch {
                expected: inst.n(),
                actual: self.n,
            });
        }
        for (j, cols) in self.per_sender.iter().enumerate() {
            let held = inst.sender(j);
            for (c, col) in cols.iter().enumerate() {
                if let Some(i) = (0..self.n).find(|&i| col[i] != 0 && !held.contains(i)) {
                    return Err(Error::SupportViolation {
                        sender: j + 1,
                        column: c + 1,
                        message: i + 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// Sub-codeword of each sender: `x_{M_i} G^(i)`.
    pub fn encode(&self, x: &[u32]) -> Result<Vec<Vec<u32>>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        let f = self.field;
        Ok(self
            .per_sender
            .iter()
            .map(|cols| {
                cols.iter()
                    .map(|c| {
                        c.iter()
                            .zip(x)
                            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, f.reduce(b as u64))))
                    })
                    .collect()
            })
            .collect())
    }
}

pub fn encode(gen: &Generator, x: &[u32]) -> Result<Vec<Vec<u32>>> {
    gen.encode(x)
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Renders one column as `x1+2*x3`, or `0` for the zero column.
pub fn format_column(col: &[u32]) -> String {
    let terms: Vec<String> = col
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            if c == 1 {
                format!("x{}", i + 1)
            } else {
                format!("{c}*x{}", i + 1)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// One `s<i>: <column>` line per column.
impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, col) in self.columns() {
            writeln!(f, "s{}: {}", j + 1, format_column(col))?;
        }
        Ok(())
    }
}

/// Parses the `s<i>: x<a>+<c>*x<b>` format. Blank lines and `#` comments are skipped.
pub fn parse_generator(text: &str, n: usize, q: u32, senders: usize) -> Result<Generator> {
    let field = PrimeField::new(q)?;
    let mut g = Generator::new(field, n, senders);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body
            .split_once(':')
            .ok_or_else(|| Error::parse(line, "expected `s<i>: <terms>`"))?;
        let sender = head
            .trim()
            .strip_prefix('s')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&s| s >= 1 && s <= senders)
            .ok_or_else(|| Error::parse(line, format!("bad sender `{}` (1..={senders})", head.trim())))?;
        let mut col = vec![0u32; n];
        let rest: String = rest.split_whitespace().collect();
        if rest != "0" {
            for term in rest.split('+') {
                let (coef, var) = match term.split_once('*') {
                    Some((c, v)) => {
                        let c = c
                            .parse::<u64>()
                            .map_err(|_| Error::parse(line, format!("bad coefficient in `{term}`")))?;
                        (field.reduce(c), v)
                    }
                    None => (1, term),
                };
                let i = var
                    .strip_prefix('x')
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= n)
                    .ok_or_else(|| Error::parse(line, format!("bad term `{term}`")))?;
                col[i - 1] = field.add(col[i - 1], coef);
            }
        }
        g.push(sender - 1, col);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn text_format_roundtrip() {
        let g = fixtures::code_b();
        assert_eq!(g.len(), 3);
        assert_eq!(g.to_string(), "s1: x1+x4\ns2: x2+x4\ns2: x2+x3\n");
        let f3 = PrimeField::new(3).unwrap();
        let mut h = Generator::new(f3, 3, 2);
        h.push(1, vec![2, 0, 1]);
        h.push(0, vec![0, 0, 0]);
        let text = h.to_string();
        assert_eq!(text, "s1: 0\ns2: 2*x1+x3\n");
        assert_eq!(parse_generator(&text, 3, 3, 2).unwrap(), h);
    }

    #[test]
    fn parse_errors_carry_lines() {
        for (text, line) in [("s1: x1\ns3: x2\n", 2), ("s1 x1\n", 1), ("s1: x9\n", 1), ("s1: a*x1\n", 1)] {
            match parse_generator(text, 4, 2, 2) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn encode_examples() {
        let g = fixtures::code_b();
        assert_eq!(g.encode(&[0, 0, 0, 0]).unwrap(), vec![vec![0], vec![0, 0]]);
        // x = (1,0,1,1): s1 sends x1+x4 = 0; s2 sends (x2+x4, x2+x3) = (1,1).
        assert_eq!(g.encode(&[1, 0, 1, 1]).unwrap(), vec![vec![0], vec![1, 1]]);
        assert!(g.encode(&[1, 0]).is_err());
        let single = crate::instance::Instance::unicast(
            2,
            vec![crate::MsgSet::EMPTY; 3],
            vec![crate::MsgSet::full(3)],
            None,
        )
        .unwrap();
        let id = Generator::uncoded(&single);
        assert_eq!(id.encode(&[1, 0, 1]).unwrap(), vec![vec![1, 0, 1]]);
    }

    #[test]
    fn support_check() {
        let b = fixtures::instance_b();
        assert!(fixtures::code_b().check_support(&b).is_ok());
        let bad = parse_generator("s1: x1+x2\n", 4, 2, 2).unwrap();
        assert!(matches!(bad.check_support(&b), Err(Error::SupportViolation { sender: 1, message: 2, .. })));
    }
}
