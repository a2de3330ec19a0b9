//! Sparse reduced row echelon form over Q(ζ_L).

use std::collections::BTreeMap;

use crate::cyclo::{CycloElt, Field};

pub type SparseRow = Vec<(usize, CycloElt)>;

/// Rows kept in reduced echelon form; the pivot of a row is its first nonzero
/// column and every pivot column is zero in all other rows.
pub struct Echelon {
    field: Field,
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &SparseRow, coef: &CycloElt, other: &SparseRow) -> SparseRow {
    // row − coef·other, both sorted by column
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_other = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_other {
            let v = -(coef * &other[j].1);
            if !v.is_zero() {
                out.push((other[j].0, v));
            }
            j += 1;
        } else {
            let v = &row[i].1 - &(coef * &other[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Echelon {
    pub fn new(field: &Field, ncols: usize) -> Self {
        Echelon { field: field.clone(), ncols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `row` against the current pivots.
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        let mut row: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        row.sort_by_key(|(c, _)| *c);
        let hits: Vec<(usize, CycloElt)> =
            row.iter().filter(|(c, _)| self.rows.contains_key(c)).cloned().collect();
        for (c, v) in hits {
            let prow = &self.rows[&c];
            row = axpy(&row, &v, prow);
        }
        row
    }

    /// Inserts a row; returns the new pivot column if the row was independent.
    pub fn insert(&mut self, row: SparseRow) -> Option<usize> {
        let row = self.reduce(row);
        let (pc, pv) = row.first()?.clone();
        let inv = pv.inverse().expect("nonzero pivot");
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, if c == pc { CycloElt::one(&self.field) } else { &v * &inv })).collect();
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for k in keys {
            let r = &self.rows[&k];
            if let Ok(pos) = r.binary_search_by_key(&pc, |(c, _)| *c) {
                let coef = r[pos].1.clone();
                let updated = axpy(r, &coef, &row);
                self.rows.insert(k, updated);
            }
        }
        self.rows.insert(pc, row);
        Some(pc)
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (&usize, &SparseRow)> {
        self.rows.iter()
    }

    /// Basis of {x : row·x = 0 for every row}, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<CycloElt>> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.rows.contains_key(&f) {
                continue;
            }
            let mut x = vec![CycloElt::zero(&self.field); self.ncols];
            x[f] = CycloElt::one(&self.field);
            for (&pc, r) in &self.rows {
                if let Ok(pos) = r.binary_search_by_key(&f, |(c, _)| *c) {
                    x[pc] = -&r[pos].1;
                }
            }
            out.push(x);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::make_field;

    #[test]
    fn rank_and_nullspace() {
        let f = make_field(3);
        let c = |v: i64| CycloElt::from_int(&f, v);
        let mut e = Echelon::new(&f, 3);
        assert_eq!(e.insert(vec![(0, c(1)), (1, c(2)), (2, c(3))]), Some(0));
        assert_eq!(e.insert(vec![(0, c(2)), (1, c(4)), (2, c(6))]), None);
        assert_eq!(e.insert(vec![(1, c(1)), (2, c(1))]), Some(1));
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![c(-1), c(-1), c(1)]);
    }
}
