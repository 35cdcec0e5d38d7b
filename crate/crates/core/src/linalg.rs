//! Exact row reduction over ℚ for rank and span membership checks.

use std::collections::BTreeMap;

use crate::coeffring::Rational;

/// Sparse row vector indexed by column.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Row echelon basis of a row space, keyed by leading column.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    pivots: BTreeMap<usize, SparseRow>,
}

impl RowSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Eliminates leading entries of `row` until its leading column is not a
    /// pivot; an empty result means `row` lies in the span.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut row: SparseRow = row.iter().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (*i, c.clone())).collect();
        while let Some((&col, c)) = row.iter().next() {
            let Some(pivot) = self.pivots.get(&col) else {
                break;
            };
            // pivot rows are normalized to a leading 1
            let c = c.clone();
            for (j, v) in pivot {
                let e = row.entry(*j).or_insert_with(Rational::zero);
                *e -= &(&c * v);
                if e.is_zero() {
                    row.remove(j);
                }
            }
        }
        row
    }

    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds `row`; returns false when it was already in the span.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let rem = self.reduce(row);
        let Some((&col, lead)) = rem.iter().next() else {
            return false;
        };
        let inv = lead.recip().expect("nonzero pivot");
        self.pivots.insert(col, rem.iter().map(|(j, v)| (*j, v * &inv)).collect());
        true
    }
}

/// Rank of a family of rows.
pub fn rank<'a>(rows: impl IntoIterator<Item = &'a SparseRow>) -> usize {
    let mut space = RowSpace::new();
    for r in rows {
        space.insert(r);
    }
    space.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> SparseRow {
        v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, Rational::from_int(*c))).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])]), 2);
        assert_eq!(rank(&[row(&[1, 0]), row(&[0, 1]), row(&[1, 1])]), 2);
        assert_eq!(rank(&[row(&[0, 0])]), 0);
    }

    #[test]
    fn membership() {
        let mut s = RowSpace::new();
        s.insert(&row(&[1, 1, 0]));
        s.insert(&row(&[0, 1, 1]));
        assert!(s.contains(&row(&[1, 0, -1])));
        assert!(!s.contains(&row(&[0, 0, 1])));
    }
}
