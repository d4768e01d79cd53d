//! Symbolic matrices with structural zeros, fixed entries, free entries and
//! split groups whose members must sum to a fixed target.
//!
//! Both the multi-sender fitting matrix and the cellular fitting matrix are
//! instances of [`SymbolicMatrix`]. Columns are grouped into *units* (the
//! columns of one receiver); the search assigns variables unit by unit, so a
//! unit's columns are complete as soon as its last variable is set.

use crate::linalg::{FieldMatrix, PrimeField};

pub type VarId = usize;

/// Entry description used to build a template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntrySpec {
    /// The column's sender does not hold this message.
    StructZero,
    Fixed(u32),
    /// Any field element.
    Free,
    /// Member of the split group for this row within the column's unit.
    /// All members of a group sum to `target`.
    Share { target: u32 },
}

/// Resolved entry of a built template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryKind {
    StructZero,
    Fixed(u32),
    Free(VarId),
    /// `var` is `None` for the group's dependent member, whose value is the
    /// target minus the other members.
    SplitShare { group: usize, var: Option<VarId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitGroup {
    pub row: usize,
    pub target: u32,
    /// Member columns; the first one carries the dependent entry.
    pub members: Vec<usize>,
}

/// Column metadata: owning sender, receiver, and block (caller-defined tag).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColumnTag {
    pub sender: usize,
    pub receiver: usize,
    pub block: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    field: PrimeField,
    rows: usize,
    tags: Vec<ColumnTag>,
    specs: Vec<Vec<EntrySpec>>,
    entries: Vec<Vec<EntryKind>>,
    groups: Vec<SplitGroup>,
    units: Vec<Vec<usize>>,
    unit_var_end: Vec<usize>,
    var_sites: Vec<(usize, usize)>,
}

impl SymbolicMatrix {
    /// Builds a template. `units` lists column indices; every column must
    /// appear in exactly one unit. Variables are numbered by unit, then by
    /// position of the column inside the unit, then by row.
    pub fn new(
        field: PrimeField,
        rows: usize,
        tags: Vec<ColumnTag>,
        specs: Vec<Vec<EntrySpec>>,
        units: Vec<Vec<usize>>,
    ) -> Self {
        assert_eq!(tags.len(), specs.len());
        debug_assert_eq!(units.iter().map(Vec::len).sum::<usize>(), specs.len());
        let mut entries: Vec<Vec<EntryKind>> = specs
            .iter()
            .map(|col| {
                assert_eq!(col.len(), rows);
                vec![EntryKind::StructZero; rows]
            })
            .collect();
        let mut groups = Vec::new();
        let mut var_sites = Vec::new();
        let mut unit_var_end = Vec::with_capacity(units.len());

        for unit in &units {
            // Split groups of this unit, keyed by row.
            let mut group_of_row: Vec<Option<usize>> = vec![None; rows];
            for row in 0..rows {
                let members: Vec<usize> = unit
                    .iter()
                    .copied()
                    .filter(|&c| matches!(specs[c][row], EntrySpec::Share { .. }))
                    .collect();
                if members.len() >= 2 {
                    let EntrySpec::Share { target } = specs[members[0]][row] else {
                        unreachable!()
                    };
                    debug_assert!(members
                        .iter()
                        .all(|&c| specs[c][row] == EntrySpec::Share { target }));
                    group_of_row[row] = Some(groups.len());
                    groups.push(SplitGroup { row, target, members });
                }
            }
            for &c in unit {
                for row in 0..rows {
                    entries[c][row] = match specs[c][row] {
                        EntrySpec::StructZero => EntryKind::StructZero,
                        EntrySpec::Fixed(v) => EntryKind::Fixed(field.reduce(v as u64)),
                        EntrySpec::Free => {
                            var_sites.push((c, row));
                            EntryKind::Free(var_sites.len() - 1)
                        }
                        EntrySpec::Share { target } => match group_of_row[row] {
                            None => EntryKind::Fixed(field.reduce(target as u64)),
                            Some(g) if groups[g].members[0] == c => EntryKind::SplitShare { group: g, var: None },
                            Some(g) => {
                                var_sites.push((c, row));
                                EntryKind::SplitShare {
                                    group: g,
                                    var: Some(var_sites.len() - 1),
                                }
                            }
                        },
                    };
                }
            }
            unit_var_end.push(var_sites.len());
        }

        SymbolicMatrix {
            field,
            rows,
            tags,
            specs,
            entries,
            groups,
            units,
            unit_var_end,
            var_sites,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.entries.len()
    }

    pub fn tag(&self, col: usize) -> ColumnTag {
        self.tags[col]
    }

    pub fn tags(&self) -> &[ColumnTag] {
        &self.tags
    }

    pub fn entry(&self, row: usize, col: usize) -> EntryKind {
        self.entries[col][row]
    }

    pub fn spec(&self, row: usize, col: usize) -> EntrySpec {
        self.specs[col][row]
    }

    pub fn specs(&self) -> &[Vec<EntrySpec>] {
        &self.specs
    }

    pub fn groups(&self) -> &[SplitGroup] {
        &self.groups
    }

    pub fn units(&self) -> &[Vec<usize>] {
        &self.units
    }

    /// Exclusive end of each unit's variable range.
    pub fn unit_var_end(&self) -> &[usize] {
        &self.unit_var_end
    }

    /// Degrees of freedom: number of variables in an assignment.
    pub fn dof(&self) -> usize {
        self.var_sites.len()
    }

    /// `(column, row)` of each variable.
    pub fn var_sites(&self) -> &[(usize, usize)] {
        &self.var_sites
    }

    pub fn var_at(&self, row: usize, col: usize) -> Option<VarId> {
        match self.entries[col][row] {
            EntryKind::Free(v) => Some(v),
            EntryKind::SplitShare { var, .. } => var,
            _ => None,
        }
    }

    pub fn free_count(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter(|e| matches!(e, EntryKind::Free(_)))
            .count()
    }

    /// Writes column `col` under assignment `asg` into `out`.
    pub fn fill_column(&self, col: usize, asg: &[u32], out: &mut [u32]) {
        let f = self.field;
        for (row, e) in self.entries[col].iter().enumerate() {
            out[row] = match *e {
                EntryKind::StructZero => 0,
                EntryKind::Fixed(v) => v,
                EntryKind::Free(v) => asg[v],
                EntryKind::SplitShare { var: Some(v), .. } => asg[v],
                EntryKind::SplitShare { group, var: None } => {
                    let g = &self.groups[group];
                    g.members[1..].iter().fold(g.target, |acc, &m| match self.entries[m][g.row] {
                        EntryKind::SplitShare { var: Some(v), .. } => f.sub(acc, asg[v]),
                        _ => unreachable!("non-dependent members carry a variable"),
                    })
                }
            };
        }
    }

    pub fn column_values(&self, col: usize, asg: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.rows];
        self.fill_column(col, asg, &mut out);
        out
    }

    /// Fully instantiated matrix.
    pub fn instantiate(&self, asg: &[u32]) -> FieldMatrix {
        assert_eq!(asg.len(), self.dof(), "assignment length");
        let cols: Vec<Vec<u32>> = (0..self.cols()).map(|c| self.column_values(c, asg)).collect();
        FieldMatrix::from_columns(self.field, self.rows, &cols).expect("template columns have `rows` entries")
    }

    /// Instantiates a subset of columns, in the given order.
    pub fn instantiate_columns(&self, cols: &[usize], asg: &[u32]) -> FieldMatrix {
        let vals: Vec<Vec<u32>> = cols.iter().map(|&c| self.column_values(c, asg)).collect();
        FieldMatrix::from_columns(self.field, self.rows, &vals).expect("template columns have `rows` entries")
    }

    /// Assignment reproducing a concrete matrix whose columns fit this
    /// template, or `None` if some fixed entry or split sum disagrees.
    pub fn assignment_for(&self, mat: &FieldMatrix) -> Option<Vec<u32>> {
        if mat.rows() != self.rows || mat.cols() != self.cols() {
            return None;
        }
        let asg: Vec<u32> = self.var_sites.iter().map(|&(c, r)| mat.get(r, c)).collect();
        (self.instantiate(&asg) == *mat).then_some(asg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_group_dependent_is_first_member() {
        let f = PrimeField::new(3).unwrap();
        let tags = vec![
            ColumnTag { sender: 0, receiver: 0, block: 0 },
            ColumnTag { sender: 1, receiver: 0, block: 1 },
        ];
        let specs = vec![
            vec![EntrySpec::Share { target: 1 }, EntrySpec::Free],
            vec![EntrySpec::Share { target: 1 }, EntrySpec::StructZero],
        ];
        let t = SymbolicMatrix::new(f, 2, tags, specs, vec![vec![0, 1]]);
        assert_eq!(t.dof(), 2);
        assert_eq!(t.entry(0, 0), EntryKind::SplitShare { group: 0, var: None });
        // Variable order: column 0 first (row 1 free), then column 1 (row 0 share).
        assert_eq!(t.var_sites(), &[(0, 1), (1, 0)]);
        let m = t.instantiate(&[2, 2]);
        // dependent = 1 - 2 = 2 mod 3
        assert_eq!(m.column(0), &[2, 2]);
        assert_eq!(m.column(1), &[2, 0]);
        assert_eq!(t.assignment_for(&m), Some(vec![2, 2]));
    }

    #[test]
    fn lone_share_becomes_fixed() {
        let f = PrimeField::BINARY;
        let tags = vec![ColumnTag { sender: 0, receiver: 0, block: 0 }];
        let t = SymbolicMatrix::new(f, 1, tags, vec![vec![EntrySpec::Share { target: 1 }]], vec![vec![0]]);
        assert_eq!(t.entry(0, 0), EntryKind::Fixed(1));
        assert_eq!(t.dof(), 0);
    }
}
