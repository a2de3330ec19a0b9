//! Splitting U_p^{⊗g} into irreducible factors, and the checks
//! that certify each step.

mod crt;
mod omega;
mod parity;
mod tower;

pub use crt::{bezout, crt_check, CrtReport};
pub use omega::{omega_family, omega_projector, OmegaFamily, OmegaReport};
pub use parity::{parity_bases, parity_dims, parity_vectors, ParityReport};
pub use tower::{tower_check, tower_vectors, TowerReport};

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modgroup::{factorize, sigma0};
use crate::ringmat::solve_commutant;
use crate::weilrep::WeilRep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    U,
    W,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Plus,
    Minus,
    None,
}

impl Serialize for FactorKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            FactorKind::U => "U",
            FactorKind::W => "W",
            FactorKind::Trivial => "trivial",
        })
    }
}

impl Serialize for Parity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Parity::Plus => "+",
            Parity::Minus => "-",
            Parity::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorLabel {
    pub kind: FactorKind,
    pub prime_power: u64,
    pub parity: Parity,
    #[serde(skip)]
    pub genus: usize,
    pub dim: u64,
}

impl fmt::Display for FactorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.parity {
            Parity::Plus => "+",
            Parity::Minus => "-",
            Parity::None => "",
        };
        match self.kind {
            FactorKind::Trivial => write!(f, "1"),
            FactorKind::U => write!(f, "U_{}{}", self.prime_power, sign),
            FactorKind::W => write!(f, "W_{}{}", self.prime_power, sign),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorFactor {
    pub tensor: Vec<FactorLabel>,
}

impl TensorFactor {
    pub fn dim(&self) -> u64 {
        self.tensor.iter().map(|l| l.dim).product()
    }

    pub fn minus_count(&self) -> usize {
        self.tensor.iter().filter(|l| l.parity == Parity::Minus).count()
    }
}

impl fmt::Display for TensorFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tensor.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" (x) "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionTree {
    pub level: u64,
    pub genus: usize,
    pub factor_count: usize,
    pub factors: Vec<TensorFactor>,
}

impl DecompositionTree {
    pub fn total_dim(&self) -> u64 {
        self.factors.iter().map(|t| t.dim()).sum()
    }
}

/// σ(p) for odd p, σ(p/2) for even p.
pub fn expected_factor_count(p: u64) -> u64 {
    if p % 2 == 0 {
        sigma0(p / 2)
    } else {
        sigma0(p)
    }
}

fn checked_pow(q: u64, g: usize) -> Result<u64> {
    q.checked_pow(g as u32).ok_or_else(|| Error::Resource(format!("{}^{} overflows", q, g)))
}

fn u_label(q: u64, g: usize, parity: Parity) -> Result<FactorLabel> {
    let (plus, minus) = parity_dims(q, g)?;
    let dim = match parity {
        Parity::Plus => plus,
        Parity::Minus => minus,
        Parity::None => plus + minus,
    };
    Ok(FactorLabel { kind: FactorKind::U, prime_power: q, parity, genus: g, dim })
}

/// Irreducible pieces of U_{r^m}^{⊗g}, lowest level first.
fn prime_power_pieces(r: u64, m: u32, g: usize) -> Result<Vec<FactorLabel>> {
    let q = r.pow(m);
    if m == 0 {
        return Ok(vec![FactorLabel { kind: FactorKind::Trivial, prime_power: 1, parity: Parity::None, genus: g, dim: 1 }]);
    }
    if r == 2 && m == 1 {
        return Ok(vec![u_label(2, g, Parity::None)?]);
    }
    if m == 1 || (r == 2 && m == 2) {
        return Ok(vec![u_label(q, g, Parity::Plus)?, u_label(q, g, Parity::Minus)?]);
    }
    let mut out = prime_power_pieces(r, m - 2, g)?;
    let (hp, hm) = parity_dims(q, g)?;
    let (lp, lm) = if m == 2 { (1, 0) } else { parity_dims(q / (r * r), g)? };
    out.push(FactorLabel { kind: FactorKind::W, prime_power: q, parity: Parity::Plus, genus: g, dim: hp - lp });
    out.push(FactorLabel { kind: FactorKind::W, prime_power: q, parity: Parity::Minus, genus: g, dim: hm - lm });
    Ok(out)
}

/// Factors of U_p^{⊗g}: tensor products over the prime-power parts of p.
pub fn decomposition_tree(p: u64, g: usize) -> Result<DecompositionTree> {
    if p < 2 || g < 1 {
        return Err(Error::Argument(format!("need p >= 2 and g >= 1, got p = {}, g = {}", p, g)));
    }
    checked_pow(p, g)?;
    let mut factors = vec![TensorFactor { tensor: Vec::new() }];
    for (r, m) in factorize(p) {
        let pieces = prime_power_pieces(r, m, g)?;
        let mut next = Vec::with_capacity(factors.len() * pieces.len());
        for t in &factors {
            for piece in &pieces {
                let mut tensor = t.tensor.clone();
                tensor.push(piece.clone());
                next.push(TensorFactor { tensor });
            }
        }
        factors = next;
    }
    Ok(DecompositionTree { level: p, genus: g, factor_count: factors.len(), factors })
}

/// Largest p^{2g} handed to the commutant solver.
pub const COMMUTANT_BOUND: u64 = 256;

/// dim of the commutant of the generator matrices.
pub fn commutant_dimension(p: u64, g: usize) -> Result<usize> {
    let sq = checked_pow(p, 2 * g)?;
    if sq > COMMUTANT_BOUND {
        return Err(Error::Resource(format!("p^(2g) = {} exceeds the solver bound {}", sq, COMMUTANT_BOUND)));
    }
    let rep = WeilRep::new(p, g)?;
    let mats = rep.generators().iter().map(|(tag, _)| rep.generator_matrix(*tag)).collect::<Result<Vec<_>>>()?;
    Ok(solve_commutant(&mats)?.dimension)
}

#[derive(Debug, Clone, Serialize)]
pub struct Su2Labels {
    pub level: u64,
    /// Genus-one summands with an odd number of minus-parity factors.
    pub summands: Vec<TensorFactor>,
    pub total_dim: u64,
    /// dim U_p^{1,−}, counted from the parity basis.
    pub minus_dim: u64,
}

impl Su2Labels {
    pub fn passes(&self) -> bool {
        self.total_dim == self.minus_dim
    }
}

pub fn su2_so3_labels(p: u64) -> Result<Su2Labels> {
    let tree = decomposition_tree(p, 1)?;
    let summands: Vec<TensorFactor> = tree.factors.into_iter().filter(|t| t.minus_count() % 2 == 1).collect();
    let total_dim = summands.iter().map(|t| t.dim()).sum();
    let (_, minus) = parity_vectors(p, 1)?;
    Ok(Su2Labels { level: p, summands, total_dim, minus_dim: minus.len() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(t: &DecompositionTree) -> Vec<u64> {
        t.factors.iter().map(|f| f.dim()).collect()
    }

    #[test]
    fn tree_examples() {
        let t9 = decomposition_tree(9, 1).unwrap();
        assert_eq!(dims(&t9), vec![1, 4, 4]);
        let t8 = decomposition_tree(8, 1).unwrap();
        assert_eq!(t8.factor_count, 3);
        assert_eq!(t8.factors[0].to_string(), "U_2");
        let t2 = decomposition_tree(2, 1).unwrap();
        assert_eq!(t2.factor_count, 1);
        assert_eq!(dims(&t2), vec![2]);
    }

    #[test]
    fn counts_and_dims() {
        for p in 2..=40u64 {
            let t = decomposition_tree(p, 1).unwrap();
            assert_eq!(t.factor_count as u64, expected_factor_count(p), "p = {}", p);
            assert_eq!(t.total_dim(), p, "p = {}", p);
        }
        for p in 2..=6u64 {
            let t = decomposition_tree(p, 2).unwrap();
            assert_eq!(t.total_dim(), p * p);
            assert!(t.factors.iter().all(|f| f.dim() > 0));
        }
    }

    #[test]
    fn json_schema() {
        let v = serde_json::to_value(decomposition_tree(6, 1).unwrap()).unwrap();
        assert_eq!(v["factor_count"], 2);
        assert_eq!(v["factors"][0]["tensor"][0], serde_json::json!({"kind": "U", "prime_power": 2, "parity": "none", "dim": 2}));
    }

    #[test]
    fn commutants() {
        assert_eq!(commutant_dimension(5, 1).unwrap(), 2);
        assert_eq!(commutant_dimension(8, 1).unwrap(), 3);
        assert_eq!(commutant_dimension(3, 2).unwrap(), 2);
        assert!(commutant_dimension(17, 1).is_err());
    }

    #[test]
    fn su2_examples() {
        let l5 = su2_so3_labels(5).unwrap();
        assert_eq!((l5.summands.len(), l5.total_dim), (1, 2));
        let l6 = su2_so3_labels(6).unwrap();
        assert_eq!(l6.summands[0].to_string(), "U_2 (x) U_3-");
        assert_eq!(l6.total_dim, 2);
        let l9 = su2_so3_labels(9).unwrap();
        assert_eq!(l9.summands[0].to_string(), "W_9-");
        assert_eq!(l9.total_dim, 4);
    }
}
