//! Weil representation data at level p and genus g.
//!
//! Every operator is kept as scalar·body where the body's entries are 0 or
//! powers of A. With L = lcm(2p, 24) the field is Q(ζ_L), A = ζ_L^{L/p}
//! (p odd) or ζ_L^{L/2p} (p even), and β = ζ_L^{L/24}.

mod heisenberg;
mod lift;

pub use heisenberg::{egorov_map, schrodinger, schrodinger_commutant_dim, weyl, EgorovReport, HeisenbergElt};
pub use lift::{lemma_diag, lift_genus1, lift_genus1_word, trace_abs_sq, Genus1Lift};

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::cyclo::{make_field, CycloElt, Field};
use crate::error::{Error, Result};
use crate::ringmat::{RingMatrix, RootMatrix, SumMatrix};

/// Largest p^g for which a `WeilRep` is built.
pub const MAX_DIM: usize = 4096;

pub fn field_order(p: u64) -> u32 {
    let two_p = 2 * p;
    let g = gcd(two_p, 24);
    (two_p / g * 24) as u32
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Order of A: p for odd p, 2p for even p.
pub fn a_order(p: u64) -> u32 {
    if p % 2 == 1 {
        p as u32
    } else {
        2 * p as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    X(usize),
    Y(usize),
    Z(usize, usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(i) => write!(f, "X{}", i + 1),
            Generator::Y(i) => write!(f, "Y{}", i + 1),
            Generator::Z(i, j) => write!(f, "Z{}{}", i + 1, j + 1),
        }
    }
}

/// scalar · body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    pub scalar: CycloElt,
    pub body: RootMatrix,
}

impl Operator {
    pub fn dim(&self) -> usize {
        self.body.rows()
    }

    /// Inverse of a unitary operator: conj(scalar)·body†.
    pub fn adjoint(&self) -> Operator {
        Operator { scalar: self.scalar.conj(), body: self.body.conj_transpose() }
    }
}

#[derive(Debug, Clone)]
pub struct WeilRep {
    pub p: u64,
    pub g: usize,
    pub dim: usize,
    field: Field,
    a_order: u32,
    a_step: u32,
    gens: Vec<(Generator, Operator)>,
}

/// Σ_k A^{ak² + bk}, k over Z/pZ (p odd) or Z/2pZ (p even).
pub fn gauss_sum(a: i64, b: i64, p: u64) -> CycloElt {
    let field = make_field(field_order(p));
    let m = a_order(p) as i64;
    let step = (field.order() as i64) / m;
    let mut counts = vec![0i128; field.order() as usize];
    for k in 0..m {
        let e = (a * k * k + b * k).rem_euclid(m);
        counts[(e * step) as usize] += 1;
    }
    CycloElt::from_root_sum(&field, &counts)
}

impl WeilRep {
    pub fn new(p: u64, g: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::Argument(format!("level must be at least 2, got {}", p)));
        }
        if g < 1 {
            return Err(Error::Argument("genus must be at least 1".into()));
        }
        let dim = (p as u128).checked_pow(g as u32).filter(|&d| d <= MAX_DIM as u128).ok_or_else(|| {
            Error::Resource(format!("dimension {}^{} exceeds {}", p, g, MAX_DIM))
        })? as usize;
        let field = make_field(field_order(p));
        let a_order = a_order(p);
        let a_step = field.order() / a_order;
        let mut rep = WeilRep { p, g, dim, field, a_order, a_step, gens: Vec::new() };
        let mut gens = Vec::new();
        for i in 0..g {
            gens.push((Generator::X(i), rep.build(Generator::X(i))));
        }
        for i in 0..g {
            gens.push((Generator::Y(i), rep.build(Generator::Y(i))));
        }
        for i in 0..g {
            for j in i + 1..g {
                gens.push((Generator::Z(i, j), rep.build(Generator::Z(i, j))));
            }
        }
        rep.gens = gens;
        Ok(rep)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a_order(&self) -> u32 {
        self.a_order
    }

    /// A = ζ_L^{a_step}.
    pub fn a_step(&self) -> u32 {
        self.a_step
    }

    pub fn a(&self) -> CycloElt {
        CycloElt::root_of_unity(&self.field, self.a_step as i64)
    }

    pub fn beta(&self) -> CycloElt {
        CycloElt::root_of_unity(&self.field, (self.field.order() / 24) as i64)
    }

    /// Digits (a₁, …, a_g) of a basis index, first handle most significant.
    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let p = self.p as usize;
        let mut out = vec![0; self.g];
        for k in (0..self.g).rev() {
            out[k] = idx % p;
            idx /= p;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        let p = self.p as usize;
        digits.iter().fold(0, |acc, &d| acc * p + d % p)
    }

    /// c = G(1,0,p)/p (p odd) or G(1,0,2p)/2p (p even).
    pub fn y_scale(&self) -> CycloElt {
        let m = self.a_order as i64;
        gauss_sum(1, 0, self.p).scale(&BigRational::new(1.into(), m.into()))
    }

    fn build(&self, gen: Generator) -> Operator {
        let n = self.dim;
        let m = self.a_order;
        let one = CycloElt::one(&self.field);
        match gen {
            Generator::X(i) => {
                let exps: Vec<i64> = (0..n).map(|k| sq(self.digits(k)[i])).collect();
                Operator { scalar: one, body: RootMatrix::diagonal(m, &exps) }
            }
            Generator::Z(i, j) => {
                let exps: Vec<i64> = (0..n)
                    .map(|k| {
                        let d = self.digits(k);
                        let diff = d[i] as i64 - d[j] as i64;
                        diff * diff
                    })
                    .collect();
                Operator { scalar: one, body: RootMatrix::diagonal(m, &exps) }
            }
            Generator::Y(i) => {
                let body = RootMatrix::from_fn(n, n, m, |r, c| {
                    let (dr, dc) = (self.digits(r), self.digits(c));
                    let same = (0..self.g).all(|k| k == i || dr[k] == dc[k]);
                    same.then(|| {
                        let diff = dr[i] as i64 - dc[i] as i64;
                        -diff * diff
                    })
                });
                Operator { scalar: self.y_scale(), body }
            }
        }
    }

    pub fn generators(&self) -> &[(Generator, Operator)] {
        &self.gens
    }

    pub fn generator(&self, gen: Generator) -> Result<&Operator> {
        self.gens
            .iter()
            .find(|(g, _)| *g == gen)
            .map(|(_, op)| op)
            .ok_or_else(|| Error::Argument(format!("generator {} not defined at genus {}", gen, self.g)))
    }

    pub fn generator_matrix(&self, gen: Generator) -> Result<RingMatrix> {
        Ok(self.to_ring(self.generator(gen)?)?)
    }

    /// diag(A^{2a_i²}), the normalization printed for the X generator.
    pub fn x_literal(&self, i: usize) -> Result<Operator> {
        if i >= self.g {
            return Err(Error::Argument(format!("handle {} out of range", i + 1)));
        }
        let exps: Vec<i64> = (0..self.dim).map(|k| 2 * sq(self.digits(k)[i])).collect();
        Ok(Operator { scalar: CycloElt::one(&self.field), body: RootMatrix::diagonal(self.a_order, &exps) })
    }

    /// Hopf pairing (A^{−2Σ a_i b_i}) and its inverse (1/p^g)·conj.
    pub fn hopf(&self) -> (Operator, Operator) {
        let n = self.dim;
        let body = RootMatrix::from_fn(n, n, self.a_order, |r, c| {
            let (dr, dc) = (self.digits(r), self.digits(c));
            Some(-2 * dr.iter().zip(&dc).map(|(x, y)| (*x * *y) as i64).sum::<i64>())
        });
        let inv_scale = BigRational::new(BigRational::one().numer().clone(), (self.dim as i64).into());
        let inv = Operator { scalar: CycloElt::from_rational(&self.field, &inv_scale), body: body.conj_transpose() };
        (Operator { scalar: CycloElt::one(&self.field), body }, inv)
    }

    pub fn to_ring(&self, op: &Operator) -> Result<RingMatrix> {
        Ok(op.body.to_ring(&self.field, self.a_step).scalar_mul(&op.scalar)?)
    }

    /// Exact product of operators, left to right.
    pub fn product(&self, ops: &[&Operator]) -> Result<RingMatrix> {
        let first = ops.first().ok_or_else(|| Error::Argument("empty product".into()))?;
        let mut body: SumMatrix = first.body.to_sum();
        let mut scalar = first.scalar.clone();
        for op in &ops[1..] {
            body = body.mul_root(&op.body);
            scalar = &scalar * &op.scalar;
        }
        Ok(body.to_ring(&self.field, self.a_step).scalar_mul(&scalar)?)
    }

    pub fn is_unitary(&self, op: &Operator) -> Result<bool> {
        let prod = self.product(&[&op.adjoint(), op])?;
        Ok(prod == RingMatrix::identity(&self.field, op.dim()))
    }

    /// S·π(X_i)·S⁻¹ compared with π(Y_i), using the X operator given.
    pub fn hopf_dual(&self, x: &Operator, i: usize) -> Result<bool> {
        let (s, s_inv) = self.hopf();
        let lhs = self.product(&[&s, x, &s_inv])?;
        Ok(lhs == self.generator_matrix(Generator::Y(i))?)
    }
}

/// Generator matrices of level p and genus g written inside `field`, with A
/// replaced by ζ_L^{a_exp}. Level 1 gives the trivial 1×1 representation.
pub fn generators_at_root(p: u64, g: usize, field: &Field, a_exp: i64) -> Result<Vec<(Generator, RingMatrix)>> {
    if p == 0 || g == 0 {
        return Err(Error::Argument("level and genus must be positive".into()));
    }
    let dim = (p as u128).checked_pow(g as u32).filter(|&d| d <= MAX_DIM as u128).ok_or_else(|| {
        Error::Resource(format!("dimension {}^{} exceeds {}", p, g, MAX_DIM))
    })? as usize;
    let pu = p as usize;
    let digits = |mut idx: usize| {
        let mut out = vec![0usize; g];
        for k in (0..g).rev() {
            out[k] = idx % pu;
            idx /= pu;
        }
        out
    };
    let root = |e: i64| CycloElt::root_of_unity(field, a_exp * e);
    let zero = CycloElt::zero(field);
    let m = if p == 1 { 1 } else { a_order(p) as i64 };
    let gauss: Vec<i128> = {
        let mut counts = vec![0i128; field.order() as usize];
        for k in 0..m {
            counts[(a_exp * k * k).rem_euclid(field.order() as i64) as usize] += 1;
        }
        counts
    };
    let c = CycloElt::from_root_sum(field, &gauss).scale(&BigRational::new(1.into(), m.into()));
    let mut tags = Vec::new();
    tags.extend((0..g).map(Generator::X));
    tags.extend((0..g).map(Generator::Y));
    for i in 0..g {
        for j in i + 1..g {
            tags.push(Generator::Z(i, j));
        }
    }
    let out = tags
        .into_iter()
        .map(|tag| {
            let mat = match tag {
                Generator::X(i) => RingMatrix::diagonal(field, &(0..dim).map(|k| root(sq(digits(k)[i]))).collect::<Vec<_>>()),
                Generator::Z(i, j) => RingMatrix::diagonal(
                    field,
                    &(0..dim)
                        .map(|k| {
                            let d = digits(k);
                            let diff = d[i] as i64 - d[j] as i64;
                            root(diff * diff)
                        })
                        .collect::<Vec<_>>(),
                ),
                Generator::Y(i) => RingMatrix::from_fn(field, dim, dim, |r, col| {
                    let (dr, dc) = (digits(r), digits(col));
                    if (0..g).all(|k| k == i || dr[k] == dc[k]) {
                        let diff = dr[i] as i64 - dc[i] as i64;
                        &c * &root(-diff * diff)
                    } else {
                        zero.clone()
                    }
                }),
            };
            (tag, mat)
        })
        .collect();
    Ok(out)
}

fn sq(x: usize) -> i64 {
    (x * x) as i64
}
