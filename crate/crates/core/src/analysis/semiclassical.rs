use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclo::CycloElt;
use crate::error::{Error, Result};
use crate::weilrep::{schrodinger, HeisenbergElt, WeilRep};

/// x₁^{a₁} y₁^{b₁} ⋯ x_g^{a_g} y_g^{b_g}, stored as [a₁, b₁, …].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(genus: usize) -> Self {
        Monomial(vec![0; 2 * genus])
    }

    pub fn genus(&self) -> usize {
        self.0.len() / 2
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn x_degree(&self) -> u32 {
        self.0.iter().step_by(2).sum()
    }

    pub fn y_degree(&self) -> u32 {
        self.0.iter().skip(1).step_by(2).sum()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    /// Level p is past the monomial: some exponent of the lattice vector is
    /// a nonzero residue mod p, read off the y-degree (or the x-degree when
    /// there is no y).
    pub fn vanishes_beyond(&self, p: u64) -> bool {
        let d = if self.y_degree() > 0 { self.y_degree() } else { self.x_degree() };
        d > 0 && p > d as u64
    }

    /// Lattice vector: yᵢ shifts, xᵢ modulates.
    fn lattice(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.0.len()];
        for i in 0..self.genus() {
            v[2 * i] = self.0[2 * i + 1] as i64;
            v[2 * i + 1] = self.0[2 * i] as i64;
        }
        v
    }

    /// Every monomial of total degree ≤ d in genus g, ordered by degree then exponents.
    pub fn all_up_to(genus: usize, d: u32) -> Vec<Monomial> {
        let mut out = vec![Vec::new()];
        for _ in 0..2 * genus {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    let used: u32 = v.iter().sum();
                    (0..=d - used).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        let mut ms: Vec<Monomial> = out.into_iter().map(Monomial).collect();
        ms.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)));
        ms
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let var = format!("{}{}", if k % 2 == 0 { 'x' } else { 'y' }, k / 2 + 1);
            parts.push(if e == 1 { var } else { format!("{}^{}", var, e) });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses "1", "x1^2*y1", "y2^3" (genus inferred from the largest index, at least 1).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Argument(format!("cannot parse monomial '{}'", s));
        let mut terms: Vec<(usize, u32)> = Vec::new();
        if s != "1" {
            for t in s.split(['*', ' ']).filter(|t| !t.is_empty()) {
                let (var, exp) = match t.split_once('^') {
                    Some((v, e)) => (v, e.parse::<u32>().map_err(|_| bad())?),
                    None => (t, 1),
                };
                let kind = match var.chars().next() {
                    Some('x') => 0,
                    Some('y') => 1,
                    _ => return Err(bad()),
                };
                let idx: usize = var[1..].parse().map_err(|_| bad())?;
                if idx == 0 {
                    return Err(bad());
                }
                terms.push((2 * (idx - 1) + kind, exp));
            }
        }
        let genus = terms.iter().map(|(k, _)| k / 2 + 1).max().unwrap_or(1);
        let mut v = vec![0; 2 * genus];
        for (k, e) in terms {
            v[k] += e;
        }
        Ok(Monomial(v))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SemiclassicalReport {
    pub level: u64,
    pub genus: usize,
    pub monomial: String,
    pub exponents: Vec<u32>,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub value: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub target: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub gap: BigRational,
    /// The gap is predicted to be exactly 0.
    pub beyond_degree: bool,
}

impl SemiclassicalReport {
    pub fn passes(&self) -> bool {
        !self.beyond_degree || self.gap.is_zero()
    }
}

/// Tr_p(φ_p(x)) = p^{−g}·Tr Add(X, 0).
pub fn semiclassical_value(rep: &WeilRep, mono: &Monomial) -> Result<BigRational> {
    if mono.genus() != rep.g {
        return Err(Error::Argument(format!("monomial {} has genus {}, expected {}", mono, mono.genus(), rep.g)));
    }
    let op = schrodinger(rep, &HeisenbergElt::new(mono.lattice(), 0))?;
    let field = rep.field();
    let step = rep.a_step() as i64;
    let mut tr = CycloElt::zero(field);
    for i in 0..op.body.rows() {
        if let Some(e) = op.body.get(i, i) {
            tr = &tr + &CycloElt::root_of_unity(field, e as i64 * step);
        }
    }
    let tr = &tr * &op.scalar;
    let q = tr.to_rational().ok_or_else(|| Error::Defect(format!("trace of {} is not rational", mono)))?;
    Ok(q / BigRational::from_integer(rep.dim.into()))
}

/// One report per monomial at level p and genus g.
pub fn semiclassical_traces(p: u64, g: usize, monomials: &[Monomial]) -> Result<Vec<SemiclassicalReport>> {
    let rep = WeilRep::new(p, g)?;
    monomials
        .iter()
        .map(|m| {
            let value = semiclassical_value(&rep, m)?;
            let target = if m.is_one() { BigRational::one() } else { BigRational::zero() };
            let gap = (&value - &target).abs();
            Ok(SemiclassicalReport {
                level: p,
                genus: g,
                monomial: m.to_string(),
                exponents: m.0.clone(),
                value,
                target,
                gap,
                beyond_degree: m.is_one() || m.vanishes_beyond(p),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let m: Monomial = "x1^2*y1".parse().unwrap();
        assert_eq!(m.0, vec![2, 1]);
        assert_eq!(m.to_string(), "x1^2*y1");
        let m: Monomial = "y2^3".parse().unwrap();
        assert_eq!(m.0, vec![0, 0, 0, 3]);
        assert_eq!("1".parse::<Monomial>().unwrap(), Monomial::one(1));
        assert!("z1".parse::<Monomial>().is_err());
    }

    #[test]
    fn values() {
        let ms: Vec<Monomial> = ["1", "x1*y1", "y1^3", "x1^3", "x1^2"].iter().map(|s| s.parse().unwrap()).collect();
        let r = semiclassical_traces(3, 1, &ms).unwrap();
        let vals: Vec<String> = r.iter().map(|r| crate::rational::fmt_rational(&r.value)).collect();
        assert_eq!(vals, ["1/1", "0/1", "1/1", "1/1", "0/1"]);
        let r = semiclassical_traces(4, 1, &ms).unwrap();
        assert!(r[1..].iter().all(|r| r.value.is_zero()));
    }

    #[test]
    fn enumerate_monomials() {
        assert_eq!(Monomial::all_up_to(1, 2).len(), 6);
        assert_eq!(Monomial::all_up_to(2, 1).len(), 5);
    }
}
