use std::collections::HashSet;

use serde::Serialize;

use crate::cyclo::{CycloElt, Field};
use crate::error::{Error, Result};
use crate::modgroup::{divisors, factorize, sigma0, sp_generators};
use crate::ringmat::{independent, RingMatrix, SumMatrix};
use crate::weilrep::{weyl, WeilRep};

/// Largest p^g for which Ω operators are assembled.
pub const OMEGA_DIM_BOUND: u64 = 81;

#[derive(Debug, Clone, Serialize)]
pub struct OmegaReport {
    pub delta: u64,
    pub level: u64,
    pub genus: usize,
    pub orbit_size: usize,
    pub nonzero: bool,
    pub commutes: bool,
}

/// Orbit of (0, δ, …, 0, δ) under the symplectic generators mod p.
fn orbit(p: u64, g: usize, delta: u64) -> Result<Vec<Vec<u64>>> {
    let gens = sp_generators(g, p)?;
    let start: Vec<u64> = (0..2 * g).map(|i| if i % 2 == 1 { delta % p } else { 0 }).collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut out = vec![start];
    let mut k = 0;
    while k < out.len() {
        let v = out[k].clone();
        k += 1;
        for s in &gens {
            let w = s.apply(&v);
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn weyl_sum(rep: &WeilRep, vectors: &[Vec<u64>]) -> Result<RingMatrix> {
    let mut acc = SumMatrix::zeros(rep.dim, rep.dim, rep.a_order());
    for v in vectors {
        let x: Vec<i64> = v.iter().map(|&c| c as i64).collect();
        acc.add_root(&weyl(rep, &x)?.body);
    }
    Ok(acc.to_ring(rep.field(), rep.a_step()))
}

fn check_bounds(p: u64, g: usize) -> Result<()> {
    match p.checked_pow(g as u32) {
        Some(d) if d <= OMEGA_DIM_BOUND => Ok(()),
        _ => Err(Error::Resource(format!("{}^{} exceeds the bound {}", p, g, OMEGA_DIM_BOUND))),
    }
}

fn commutes_with_generators(rep: &WeilRep, m: &RingMatrix) -> Result<bool> {
    for (tag, _) in rep.generators() {
        let x = rep.generator_matrix(*tag)?;
        if m.matmul(&x)? != x.matmul(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ω_δ = Σ W(v) over the orbit of (0, δ, …, 0, δ), with W(m, n) = A^{Σmn}·Shift^m·Mod^n.
pub fn omega_projector(delta: u64, p: u64, g: usize) -> Result<(RingMatrix, OmegaReport)> {
    if delta == 0 || p % delta != 0 {
        return Err(Error::Argument(format!("{} does not divide {}", delta, p)));
    }
    check_bounds(p, g)?;
    let rep = WeilRep::new(p, g)?;
    let orb = orbit(p, g, delta)?;
    let m = weyl_sum(&rep, &orb)?;
    let commutes = commutes_with_generators(&rep, &m)?;
    let report = OmegaReport { delta, level: p, genus: g, orbit_size: orb.len(), nonzero: !m.is_zero(), commutes };
    Ok((m, report))
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddedCheck {
    /// δ = r^k.
    pub k: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaFamily {
    pub level: u64,
    pub genus: usize,
    pub members: Vec<OmegaReport>,
    pub expected: u64,
    pub independent: bool,
    /// Rank of the members that commute with every generator.
    pub commuting_rank: usize,
    /// Odd prime powers only: Σ_{j≥k} Ω_{r^j} is r^{kg} times the sum of
    /// G·Gᵀ over the embedded vectors of U_{r^{n−2k}}.
    pub embedded: Vec<EmbeddedCheck>,
}

impl OmegaFamily {
    pub fn passes(&self) -> bool {
        self.members.len() as u64 == self.expected
            && self.members.iter().all(|m| m.commutes && m.nonzero)
            && self.independent
            && self.embedded.iter().all(|e| e.pass)
    }
}

fn flatten(m: &RingMatrix) -> Vec<CycloElt> {
    m.entries().to_vec()
}

fn rank(field: &Field, ms: &[&RingMatrix]) -> usize {
    // greedy: count members that extend the independent set
    let mut kept: Vec<Vec<CycloElt>> = Vec::new();
    for m in ms {
        let mut trial = kept.clone();
        trial.push(flatten(m));
        if independent(field, &trial) {
            kept = trial;
        }
    }
    kept.len()
}

fn embedded_expected(rep: &WeilRep, r: u64, n: u32, k: u32) -> RingMatrix {
    let p = rep.p as usize;
    let step = r.pow(k) as usize;
    let inner = r.pow(n - 2 * k) as usize;
    let g = rep.g;
    // handle supports of the embedded vectors
    let supports: Vec<Vec<usize>> = (0..inner).map(|i| (0..step).map(|t| (step * (i + t * inner)) % p).collect()).collect();
    let mut counts = vec![0i64; rep.dim * rep.dim];
    let total = inner.pow(g as u32);
    for mut idx in 0..total {
        let mut pick = vec![0usize; g];
        for h in (0..g).rev() {
            pick[h] = idx % inner;
            idx /= inner;
        }
        let mut support = vec![0usize];
        for h in 0..g {
            support = support.iter().flat_map(|&s| supports[pick[h]].iter().map(move |&j| s * p + j)).collect();
        }
        for &a in &support {
            for &b in &support {
                counts[a * rep.dim + b] += 1;
            }
        }
    }
    let scale = r.pow(k * g as u32) as i64;
    RingMatrix::from_fn(rep.field(), rep.dim, rep.dim, |i, j| CycloElt::from_int(rep.field(), scale * counts[i * rep.dim + j]))
}

/// All Ω_δ for δ | p, with commutation, independence and embedding checks.
pub fn omega_family(p: u64, g: usize) -> Result<OmegaFamily> {
    check_bounds(p, g)?;
    let rep = WeilRep::new(p, g)?;
    let mut members = Vec::new();
    let mut mats = Vec::new();
    for delta in divisors(p) {
        let (m, report) = omega_projector(delta, p, g)?;
        members.push(report);
        mats.push(m);
    }
    let all: Vec<&RingMatrix> = mats.iter().collect();
    let independent = rank(rep.field(), &all) == mats.len();
    let commuting: Vec<&RingMatrix> = mats.iter().zip(&members).filter(|(_, r)| r.commutes && r.nonzero).map(|(m, _)| m).collect();
    let commuting_rank = rank(rep.field(), &commuting);
    let mut embedded = Vec::new();
    let f = factorize(p);
    if f.len() == 1 && f[0].0 % 2 == 1 {
        let (r, n) = f[0];
        for k in 1..=n / 2 {
            let mut sum = RingMatrix::zeros(rep.field(), rep.dim, rep.dim);
            for (m, rep_k) in mats.iter().zip(&members) {
                if rep_k.delta % r.pow(k) == 0 {
                    sum = sum.add(m)?;
                }
            }
            embedded.push(EmbeddedCheck { k, pass: sum == embedded_expected(&rep, r, n, k) });
        }
    }
    Ok(OmegaFamily { level: p, genus: g, members, expected: sigma0(p), independent, commuting_rank, embedded })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_orbit_is_identity() {
        let (m, r) = omega_projector(5, 5, 1).unwrap();
        assert_eq!(r.orbit_size, 1);
        assert_eq!(m, RingMatrix::identity(&m.field().clone(), 5));
    }

    #[test]
    fn odd_levels() {
        for p in [3u64, 5, 9] {
            let fam = omega_family(p, 1).unwrap();
            assert!(fam.passes(), "{:?}", fam);
        }
        let fam = omega_family(3, 2).unwrap();
        assert!(fam.passes());
    }

    #[test]
    fn even_level_four() {
        let fam = omega_family(4, 1).unwrap();
        assert_eq!(fam.members.len(), 3);
        assert!(!fam.members[0].commutes);
        assert_eq!(fam.commuting_rank, 2);
    }
}
