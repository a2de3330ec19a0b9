//! Dense matrices over Q(ζ_L) and the exact linear algebra built on them.

mod elim;
mod roots;

pub use elim::{Echelon, SparseRow};
pub use roots::{counts_to_cyclo, RootMatrix, SumMatrix};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cyclo::{CycloElt, CycloError, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingMatError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("span vectors are linearly dependent")]
    DependentSpan,
    #[error("empty input")]
    EmptyInput,
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

#[derive(Clone)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<CycloElt>,
}

impl PartialEq for RingMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.field.order() == other.field.order() && self.data == other.data
    }
}

impl Eq for RingMatrix {}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingMatrix {}x{} over Q(zeta_{})", self.rows, self.cols, self.field.order())?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Witness λ of M = λ·N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarWitness {
    pub lambda: CycloElt,
    pub unit_norm: bool,
}

/// Joint commutant of a family of square matrices.
#[derive(Debug, Clone)]
pub struct Commutant {
    pub dimension: usize,
    pub basis: Vec<RingMatrix>,
}

impl RingMatrix {
    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycloElt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RingMatrix { rows, cols, field: field.clone(), data }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self::from_fn(field, rows, cols, |_, _| CycloElt::zero(field))
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { CycloElt::one(field) } else { CycloElt::zero(field) })
    }

    pub fn diagonal(field: &Field, diag: &[CycloElt]) -> Self {
        let n = diag.len();
        Self::from_fn(field, n, n, |i, j| if i == j { diag[i].clone() } else { CycloElt::zero(field) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloElt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloElt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[CycloElt] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<CycloElt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), RingMatError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(RingMatError::Shape(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, RingMatError> {
        if self.cols != other.rows {
            return Err(RingMatError::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].try_add(&a.try_mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[CycloElt]) -> Result<Vec<CycloElt>, RingMatError> {
        if v.len() != self.cols {
            return Err(RingMatError::Shape(format!("{}x{} times vector of length {}", self.rows, self.cols, v.len())));
        }
        let mut out = vec![CycloElt::zero(&self.field); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = o.try_add(&a.try_mul(x)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingMatError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.try_add(b)).collect::<Result<_, _>>()?;
        Ok(RingMatrix { rows: self.rows, cols: self.cols, field: self.field.clone(), data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingMatError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.try_sub(b)).collect::<Result<_, _>>()?;
        Ok(RingMatrix { rows: self.rows, cols: self.cols, field: self.field.clone(), data })
    }

    pub fn scalar_mul(&self, s: &CycloElt) -> Result<Self, RingMatError> {
        let data = self.data.iter().map(|a| a.try_mul(s)).collect::<Result<_, _>>()?;
        Ok(RingMatrix { rows: self.rows, cols: self.cols, field: self.field.clone(), data })
    }

    pub fn trace(&self) -> Result<CycloElt, RingMatError> {
        if !self.is_square() {
            return Err(RingMatError::Shape("trace of a non-square matrix".into()));
        }
        let mut t = CycloElt::zero(&self.field);
        for i in 0..self.rows {
            t = t.try_add(self.get(i, i))?;
        }
        Ok(t)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose under ζ ↦ ζ^{−1}.
    pub fn dagger(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Kronecker product; row (i_M, i_N) maps to i_M·rows(N) + i_N.
    pub fn kron(&self, other: &Self) -> Result<Self, RingMatError> {
        if self.field.order() != other.field.order() {
            return Err(CycloError::FieldMismatch(self.field.order(), other.field.order()).into());
        }
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                let a = self.get(i / other.rows, j / other.cols);
                let b = other.get(i % other.rows, j % other.cols);
                data.push(if a.is_zero() || b.is_zero() { CycloElt::zero(&self.field) } else { a * b });
            }
        }
        Ok(RingMatrix { rows: r, cols: c, field: self.field.clone(), data })
    }

    /// λ with self = λ·other, if one exists.
    pub fn equal_up_to_scalar(&self, other: &Self) -> Option<ScalarWitness> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        let pos = other.data.iter().position(|e| !e.is_zero());
        let Some(pos) = pos else {
            return if self.is_zero() {
                Some(ScalarWitness { lambda: CycloElt::one(&self.field), unit_norm: true })
            } else {
                None
            };
        };
        let lambda = self.data[pos].try_div(&other.data[pos]).ok()?;
        if lambda.is_zero() {
            return None;
        }
        for (a, b) in self.data.iter().zip(&other.data) {
            if b.is_zero() {
                if !a.is_zero() {
                    return None;
                }
            } else if *a != &lambda * b {
                return None;
            }
        }
        let unit_norm = lambda.norm_sq().is_one();
        Some(ScalarWitness { lambda, unit_norm })
    }

    pub fn is_unitary(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        match self.dagger().matmul(self) {
            Ok(p) => p == Self::identity(&self.field, self.rows),
            Err(_) => false,
        }
    }

    /// Inverse by Gauss–Jordan elimination on [M | 𝟙].
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut ech = Echelon::new(&self.field, 2 * n);
        for i in 0..n {
            let mut row: SparseRow = (0..n).filter(|&j| !self.get(i, j).is_zero()).map(|j| (j, self.get(i, j).clone())).collect();
            row.push((n + i, CycloElt::one(&self.field)));
            match ech.insert(row) {
                Some(pc) if pc < n => {}
                _ => return None,
            }
        }
        let mut inv = Self::zeros(&self.field, n, n);
        for (&pc, row) in ech.pivot_rows() {
            for (c, v) in row {
                if *c >= n {
                    inv.set(pc, c - n, v.clone());
                }
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(&self.field, self.cols);
        for i in 0..self.rows {
            ech.insert(self.sparse_row(i));
        }
        ech.rank()
    }

    fn sparse_row(&self, i: usize) -> SparseRow {
        (0..self.cols).filter(|&j| !self.get(i, j).is_zero()).map(|j| (j, self.get(i, j).clone())).collect()
    }

    /// Matrix of M on span(vectors) in that basis, or None when the span is not invariant.
    pub fn restrict_to_span(&self, span: &[Vec<CycloElt>]) -> Result<Option<Self>, RingMatError> {
        if !self.is_square() {
            return Err(RingMatError::Shape("restriction needs a square matrix".into()));
        }
        if span.is_empty() {
            return Err(RingMatError::EmptyInput);
        }
        let k = span.len();
        let n = self.rows;
        if span.iter().any(|v| v.len() != n) {
            return Err(RingMatError::Shape("span vector length".into()));
        }
        let images: Vec<Vec<CycloElt>> = span.iter().map(|v| self.mul_vec(v)).collect::<Result<_, _>>()?;
        // Rows of [V | MV]; pivots must stay inside the V block.
        let mut ech = Echelon::new(&self.field, 2 * k);
        let mut invariant = true;
        for j in 0..n {
            let mut row: SparseRow = Vec::new();
            for (c, v) in span.iter().enumerate() {
                if !v[j].is_zero() {
                    row.push((c, v[j].clone()));
                }
            }
            for (c, w) in images.iter().enumerate() {
                if !w[j].is_zero() {
                    row.push((k + c, w[j].clone()));
                }
            }
            if let Some(pc) = ech.insert(row) {
                if pc >= k {
                    invariant = false;
                }
            }
        }
        let vrank = ech.pivot_rows().filter(|(&pc, _)| pc < k).count();
        if vrank < k {
            return Err(RingMatError::DependentSpan);
        }
        if !invariant {
            return Ok(None);
        }
        let mut out = Self::zeros(&self.field, k, k);
        for (&pc, row) in ech.pivot_rows() {
            for (c, v) in row {
                if *c >= k {
                    out.set(pc, c - k, v.clone());
                }
            }
        }
        Ok(Some(out))
    }
}

/// Sparse n×n matrix as a list of ((row, col), value).
type SparseMat = Vec<((usize, usize), CycloElt)>;

/// Exact basis of {Θ : ΘM = MΘ for every M in ms}.
///
/// Diagonal inputs are handled first by grouping indices by joint eigenvalue;
/// each remaining input then cuts the current basis down by one elimination.
pub fn solve_commutant(ms: &[RingMatrix]) -> Result<Commutant, RingMatError> {
    let first = ms.first().ok_or(RingMatError::EmptyInput)?;
    let n = first.rows;
    let field = first.field.clone();
    for m in ms {
        if !m.is_square() || m.rows != n {
            return Err(RingMatError::Shape("commutant inputs must be square of equal size".into()));
        }
        if m.field.order() != field.order() {
            return Err(CycloError::FieldMismatch(m.field.order(), field.order()).into());
        }
    }
    let (diag, general): (Vec<&RingMatrix>, Vec<&RingMatrix>) = ms.iter().partition(|m| m.is_diagonal());

    let mut class_of: HashMap<Vec<CycloElt>, usize> = HashMap::new();
    let mut cls = vec![0usize; n];
    for (i, c) in cls.iter_mut().enumerate() {
        let key: Vec<CycloElt> = diag.iter().map(|m| m.get(i, i).clone()).collect();
        let next = class_of.len();
        *c = *class_of.entry(key).or_insert(next);
    }
    let mut basis: Vec<SparseMat> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if cls[a] == cls[b] {
                basis.push(vec![((a, b), CycloElt::one(&field))]);
            }
        }
    }

    for m in general {
        let mut row_nz: Vec<Vec<(usize, CycloElt)>> = vec![Vec::new(); n];
        let mut col_nz: Vec<Vec<(usize, CycloElt)>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if !v.is_zero() {
                    row_nz[i].push((j, v.clone()));
                    col_nz[j].push((i, v.clone()));
                }
            }
        }
        // equation (i,j) of BM − MB, as a sparse row over basis indices
        let mut eqs: HashMap<(usize, usize), Vec<(usize, CycloElt)>> = HashMap::new();
        for (s, b) in basis.iter().enumerate() {
            let mut contrib: HashMap<(usize, usize), CycloElt> = HashMap::new();
            for ((a, c), val) in b {
                for (j, mv) in &row_nz[*c] {
                    let t = if val.is_one() { mv.clone() } else { val * mv };
                    let e = contrib.entry((*a, *j)).or_insert_with(|| CycloElt::zero(&field));
                    *e = &*e + &t;
                }
                for (i, mv) in &col_nz[*a] {
                    let t = if val.is_one() { mv.clone() } else { val * mv };
                    let e = contrib.entry((*i, *c)).or_insert_with(|| CycloElt::zero(&field));
                    *e = &*e - &t;
                }
            }
            for (pos, v) in contrib {
                if !v.is_zero() {
                    eqs.entry(pos).or_default().push((s, v));
                }
            }
        }
        let mut keys: Vec<(usize, usize)> = eqs.keys().copied().collect();
        keys.sort_unstable();
        let mut ech = Echelon::new(&field, basis.len());
        for key in keys {
            if ech.rank() == basis.len() {
                break;
            }
            let row = eqs.remove(&key).unwrap_or_default();
            ech.insert(row);
        }
        let null = ech.nullspace();
        let mut next = Vec::with_capacity(null.len());
        for lam in null {
            let mut acc: HashMap<(usize, usize), CycloElt> = HashMap::new();
            for (s, l) in lam.iter().enumerate() {
                if l.is_zero() {
                    continue;
                }
                for (pos, v) in &basis[s] {
                    let e = acc.entry(*pos).or_insert_with(|| CycloElt::zero(&field));
                    *e = &*e + &(l * v);
                }
            }
            let mut sm: SparseMat = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            sm.sort_by_key(|(p, _)| *p);
            next.push(sm);
        }
        basis = next;
    }

    let mut out = Vec::with_capacity(basis.len());
    for b in &basis {
        let mut t = RingMatrix::zeros(&field, n, n);
        for ((i, j), v) in b {
            t.set(*i, *j, v.clone());
        }
        for m in ms {
            if t.matmul(m)? != m.matmul(&t)? {
                return Err(RingMatError::Shape("commutant basis element failed verification".into()));
            }
        }
        out.push(t);
    }
    Ok(Commutant { dimension: out.len(), basis: out })
}

/// True when the vectors are linearly independent.
pub fn independent(field: &Field, vectors: &[Vec<CycloElt>]) -> bool {
    let Some(len) = vectors.first().map(|v| v.len()) else {
        return true;
    };
    let mut ech = Echelon::new(field, len);
    for v in vectors {
        let row: SparseRow = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
        if ech.insert(row).is_none() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::make_field;

    fn int_matrix(f: &Field, rows: &[&[i64]]) -> RingMatrix {
        RingMatrix::from_fn(f, rows.len(), rows[0].len(), |i, j| CycloElt::from_int(f, rows[i][j]))
    }

    #[test]
    fn trace_dagger_kron() {
        let f = make_field(8);
        assert_eq!(RingMatrix::identity(&f, 4).trace().unwrap(), CycloElt::from_int(&f, 4));
        let z = CycloElt::root_of_unity(&f, 1);
        let m = RingMatrix::from_fn(&f, 2, 2, |i, j| z.pow((i + 2 * j) as u64));
        assert_eq!(m.dagger().dagger(), m);
        let k = m.kron(&RingMatrix::identity(&f, 3)).unwrap();
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.trace().unwrap(), &m.trace().unwrap() * &CycloElt::from_int(&f, 3));
    }

    #[test]
    fn inverse_witness() {
        let f = make_field(3);
        let m = int_matrix(&f, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), RingMatrix::identity(&f, 3));
        assert!(int_matrix(&f, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn scalar_witness() {
        let f = make_field(8);
        let m = int_matrix(&f, &[&[1, 2], &[3, 4]]);
        let w = m.equal_up_to_scalar(&m).unwrap();
        assert!(w.lambda.is_one() && w.unit_norm);
        let z = CycloElt::root_of_unity(&f, 1);
        let w = m.scalar_mul(&z).unwrap().equal_up_to_scalar(&m).unwrap();
        assert_eq!(w.lambda, z);
        assert!(w.unit_norm);
        let mut pert = m.clone();
        pert.set(1, 1, CycloElt::from_int(&f, 5));
        assert!(pert.equal_up_to_scalar(&m).is_none());
    }

    #[test]
    fn unitarity() {
        let f = make_field(8);
        assert!(RingMatrix::identity(&f, 3).is_unitary());
        let d = RingMatrix::diagonal(&f, &[CycloElt::root_of_unity(&f, 1), CycloElt::root_of_unity(&f, 3)]);
        assert!(d.is_unitary());
        let d2 = RingMatrix::diagonal(&f, &[CycloElt::from_int(&f, 2), CycloElt::one(&f)]);
        assert!(!d2.is_unitary());
    }

    #[test]
    fn commutants() {
        let f = make_field(3);
        assert_eq!(solve_commutant(&[RingMatrix::identity(&f, 3)]).unwrap().dimension, 9);
        let z = CycloElt::root_of_unity(&f, 1);
        let d = RingMatrix::diagonal(&f, &[CycloElt::one(&f), z.clone(), z.pow(2)]);
        assert_eq!(solve_commutant(&[d]).unwrap().dimension, 3);
        assert!(matches!(solve_commutant(&[]), Err(RingMatError::EmptyInput)));
        // a 3-cycle alone commutes with its 3 powers
        let cyc = int_matrix(&f, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(solve_commutant(&[cyc]).unwrap().dimension, 3);
    }

    #[test]
    fn restriction() {
        let f = make_field(4);
        let id = RingMatrix::identity(&f, 3);
        let span = vec![
            vec![CycloElt::one(&f), CycloElt::one(&f), CycloElt::zero(&f)],
            vec![CycloElt::zero(&f), CycloElt::zero(&f), CycloElt::one(&f)],
        ];
        assert_eq!(id.restrict_to_span(&span).unwrap().unwrap(), RingMatrix::identity(&f, 2));
        let d = int_matrix(&f, &[&[1, 0], &[0, 2]]);
        let e0 = vec![vec![CycloElt::one(&f), CycloElt::zero(&f)]];
        assert_eq!(d.restrict_to_span(&e0).unwrap().unwrap(), int_matrix(&f, &[&[1]]));
        let rot = int_matrix(&f, &[&[0, -1], &[1, 0]]);
        assert!(rot.restrict_to_span(&e0).unwrap().is_none());
        let dep = vec![e0[0].clone(), e0[0].clone()];
        assert_eq!(d.restrict_to_span(&dep), Err(RingMatError::DependentSpan));
    }
}
