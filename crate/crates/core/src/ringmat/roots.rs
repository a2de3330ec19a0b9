//! Structured matrices whose entries are 0 or powers of one root of unity ξ of
//! order m, and group-ring matrices with entries in Z[Z/m].
//!
//! Products of root matrices land in Z[Z/m]; only at the end are entries
//! pushed into Q(ζ_L) through ξ = ζ_L^{step}. This keeps word evaluation
//! linear in m instead of quadratic in φ(L).

use crate::cyclo::{CycloElt, Field};
use crate::ringmat::RingMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootMatrix {
    rows: usize,
    cols: usize,
    order: u32,
    data: Vec<Option<u32>>,
}

impl RootMatrix {
    pub fn from_fn(rows: usize, cols: usize, order: u32, mut f: impl FnMut(usize, usize) -> Option<i64>) -> Self {
        let m = order as i64;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).map(|e| e.rem_euclid(m) as u32));
            }
        }
        RootMatrix { rows, cols, order, data }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        Self::from_fn(n, n, order, |i, j| (i == j).then_some(0))
    }

    pub fn diagonal(order: u32, exps: &[i64]) -> Self {
        Self::from_fn(exps.len(), exps.len(), order, |i, j| (i == j).then(|| exps[i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.data[i * self.cols + j]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_none()))
    }

    /// Column index and exponent of the single nonzero entry of each row, if
    /// the matrix is monomial.
    pub fn monomial_rows(&self) -> Option<Vec<(usize, u32)>> {
        let mut out = Vec::with_capacity(self.rows);
        let mut seen = vec![false; self.cols];
        for i in 0..self.rows {
            let mut hit = None;
            for j in 0..self.cols {
                if let Some(e) = self.get(i, j) {
                    if hit.is_some() || seen[j] {
                        return None;
                    }
                    hit = Some((j, e));
                    seen[j] = true;
                }
            }
            out.push(hit?);
        }
        Some(out)
    }

    /// Transpose with every exponent negated.
    pub fn conj_transpose(&self) -> Self {
        let m = self.order;
        Self::from_fn(self.cols, self.rows, m, |i, j| self.get(j, i).map(|e| -(e as i64)))
    }

    pub fn kron(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "root orders differ");
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, self.order, |i, j| {
            let a = self.get(i / other.rows, j / other.cols)?;
            let b = other.get(i % other.rows, j % other.cols)?;
            Some(a as i64 + b as i64)
        })
    }

    /// Product of two monomial matrices, again monomial.
    pub fn mul_monomial(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows || self.order != other.order {
            return None;
        }
        let a = self.monomial_rows()?;
        let b = other.monomial_rows()?;
        let mut out = RootMatrix { rows: self.rows, cols: other.cols, order: self.order, data: vec![None; self.rows * other.cols] };
        for (i, &(k, e)) in a.iter().enumerate() {
            let (j, f) = b[k];
            out.data[i * other.cols + j] = Some((e + f) % self.order);
        }
        Some(out)
    }

    pub fn to_sum(&self) -> SumMatrix {
        let m = self.order as usize;
        let mut out = SumMatrix::zeros(self.rows, self.cols, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if let Some(e) = self.get(i, j) {
                    out.data[(i * self.cols + j) * m + e as usize] = 1;
                }
            }
        }
        out
    }

    /// Entries in Q(ζ_L) with ξ = ζ_L^{step}.
    pub fn to_ring(&self, field: &Field, step: u32) -> RingMatrix {
        RingMatrix::from_fn(field, self.rows, self.cols, |i, j| match self.get(i, j) {
            Some(e) => CycloElt::root_of_unity(field, e as i64 * step as i64),
            None => CycloElt::zero(field),
        })
    }
}

/// Matrix over the group ring Z[Z/m]; entry (i,j) is the count vector data[(i·cols+j)·m ..][..m].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumMatrix {
    rows: usize,
    cols: usize,
    order: u32,
    data: Vec<i128>,
}

impl SumMatrix {
    pub fn zeros(rows: usize, cols: usize, order: u32) -> Self {
        SumMatrix { rows, cols, order, data: vec![0; rows * cols * order as usize] }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        RootMatrix::identity(n, order).to_sum()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> &[i128] {
        let m = self.order as usize;
        let s = (i * self.cols + j) * m;
        &self.data[s..s + m]
    }

    /// self += r.
    pub fn add_root(&mut self, r: &RootMatrix) {
        assert_eq!((self.rows, self.cols, self.order), (r.rows, r.cols, r.order), "shape");
        let m = self.order as usize;
        for (k, e) in r.data.iter().enumerate() {
            if let Some(e) = e {
                self.data[k * m + *e as usize] += 1;
            }
        }
    }

    /// self · r.
    pub fn mul_root(&self, r: &RootMatrix) -> SumMatrix {
        assert_eq!(self.cols, r.rows, "shape");
        assert_eq!(self.order, r.order, "root order");
        let m = self.order as usize;
        let mut out = SumMatrix::zeros(self.rows, r.cols, self.order);
        if r.is_diagonal() {
            for i in 0..self.rows {
                for j in 0..r.cols {
                    if let Some(e) = r.get(j, j) {
                        rotate_add(&mut out.data[(i * r.cols + j) * m..][..m], self.entry(i, j), e as usize);
                    }
                }
            }
            return out;
        }
        // rows of r as (col, exp) lists
        let rrows: Vec<Vec<(usize, usize)>> = (0..r.rows)
            .map(|k| (0..r.cols).filter_map(|j| r.get(k, j).map(|e| (j, e as usize))).collect())
            .collect();
        for i in 0..self.rows {
            for (k, rk) in rrows.iter().enumerate() {
                let a = self.entry(i, k);
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for &(j, e) in rk {
                    let s = (i * r.cols + j) * m;
                    rotate_add(&mut out.data[s..s + m], a, e);
                }
            }
        }
        out
    }

    /// r · self.
    pub fn root_mul(r: &RootMatrix, s: &SumMatrix) -> SumMatrix {
        assert_eq!(r.cols, s.rows, "shape");
        assert_eq!(r.order, s.order, "root order");
        let m = s.order as usize;
        let mut out = SumMatrix::zeros(r.rows, s.cols, s.order);
        for i in 0..r.rows {
            for k in 0..r.cols {
                let Some(e) = r.get(i, k) else { continue };
                for j in 0..s.cols {
                    let a = s.entry(k, j);
                    let o = (i * s.cols + j) * m;
                    rotate_add(&mut out.data[o..o + m], a, e as usize);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Vec<i128> {
        let m = self.order as usize;
        let mut t = vec![0i128; m];
        for i in 0..self.rows.min(self.cols) {
            for (a, b) in t.iter_mut().zip(self.entry(i, i)) {
                *a += b;
            }
        }
        t
    }

    /// Pushes the entry (i,j) into Q(ζ_L) through ξ = ζ_L^{step}.
    pub fn entry_cyclo(&self, field: &Field, step: u32, i: usize, j: usize) -> CycloElt {
        counts_to_cyclo(field, step, self.entry(i, j))
    }

    pub fn to_ring(&self, field: &Field, step: u32) -> RingMatrix {
        RingMatrix::from_fn(field, self.rows, self.cols, |i, j| self.entry_cyclo(field, step, i, j))
    }
}

/// Σ_k counts[k]·ζ_L^{k·step}.
pub fn counts_to_cyclo(field: &Field, step: u32, counts: &[i128]) -> CycloElt {
    let l = field.order() as usize;
    let mut wide = vec![0i128; l];
    for (k, &c) in counts.iter().enumerate() {
        if c != 0 {
            wide[(k * step as usize) % l] += c;
        }
    }
    CycloElt::from_root_sum(field, &wide)
}

fn rotate_add(dst: &mut [i128], src: &[i128], e: usize) {
    let m = dst.len();
    let e = e % m;
    let (lo, hi) = src.split_at(m - e);
    for (d, s) in dst[e..].iter_mut().zip(lo) {
        *d += s;
    }
    for (d, s) in dst[..e].iter_mut().zip(hi) {
        *d += s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::make_field;

    #[test]
    fn matches_ring_product() {
        let f = make_field(12);
        let a = RootMatrix::from_fn(3, 3, 6, |i, j| if (i + j) % 2 == 0 { Some((i * j) as i64) } else { None });
        let b = RootMatrix::from_fn(3, 3, 6, |i, j| Some((2 * i + j) as i64));
        let s = a.to_sum().mul_root(&b);
        let ring = a.to_ring(&f, 2).matmul(&b.to_ring(&f, 2)).unwrap();
        assert_eq!(s.to_ring(&f, 2), ring);
        let t = SumMatrix::root_mul(&b, &a.to_sum());
        assert_eq!(t.to_ring(&f, 2), b.to_ring(&f, 2).matmul(&a.to_ring(&f, 2)).unwrap());
    }

    #[test]
    fn diagonal_and_monomial() {
        let f = make_field(8);
        let d = RootMatrix::diagonal(8, &[1, 3, 5]);
        let p = RootMatrix::from_fn(3, 3, 8, |i, j| ((i + 1) % 3 == j).then_some(i as i64));
        let s = p.to_sum().mul_root(&d);
        assert_eq!(s.to_ring(&f, 1), p.to_ring(&f, 1).matmul(&d.to_ring(&f, 1)).unwrap());
        let mm = p.mul_monomial(&d).unwrap();
        assert_eq!(mm.to_sum(), s);
        assert!(p.conj_transpose().mul_monomial(&p).unwrap() == RootMatrix::identity(3, 8));
    }

    #[test]
    fn trace_in_field() {
        let f = make_field(3);
        let d = RootMatrix::diagonal(3, &[0, 1, 2]);
        let t = counts_to_cyclo(&f, 1, &d.to_sum().trace());
        assert!(t.is_zero());
    }
}
