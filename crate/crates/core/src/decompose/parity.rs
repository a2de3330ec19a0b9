use serde::Serialize;

use crate::cyclo::{CycloElt, Field};
use crate::error::{Error, Result};
use crate::weilrep::{WeilRep, MAX_DIM};

/// (dim U^{g,+}, dim U^{g,−}) from the fixed points of a ↦ −a on (Z/qZ)^g.
pub fn parity_dims(q: u64, g: usize) -> Result<(u64, u64)> {
    let total = q.checked_pow(g as u32).ok_or_else(|| Error::Resource(format!("{}^{} overflows", q, g)))?;
    let fixed = if q % 2 == 0 { 1u64 << g } else { 1 };
    Ok(((total + fixed) / 2, (total - fixed) / 2))
}

/// Integer spanning vectors e_a ± e_{−a}, one per orbit of a ↦ −a.
pub fn parity_vectors(p: u64, g: usize) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let n = p.checked_pow(g as u32).filter(|&n| n as usize <= MAX_DIM * 16).ok_or_else(|| {
        Error::Resource(format!("{}^{} is too large", p, g))
    })? as usize;
    let pu = p as usize;
    let neg = |mut k: usize| {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..g {
            out += ((pu - k % pu) % pu) * scale;
            scale *= pu;
            k /= pu;
        }
        out
    };
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for a in 0..n {
        let b = neg(a);
        if b < a {
            continue;
        }
        let mut v = vec![0i64; n];
        v[a] += 1;
        v[b] += 1;
        plus.push(v);
        if b != a {
            let mut w = vec![0i64; n];
            w[a] = 1;
            w[b] = -1;
            minus.push(w);
        }
    }
    Ok((plus, minus))
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityReport {
    pub level: u64,
    pub genus: usize,
    pub plus_dim: usize,
    pub minus_dim: usize,
}

fn lift(field: &Field, vs: &[Vec<i64>]) -> Vec<Vec<CycloElt>> {
    vs.iter().map(|v| v.iter().map(|&x| CycloElt::from_int(field, x)).collect()).collect()
}

/// Parity bases, each checked to be stable under every generator.
pub fn parity_bases(p: u64, g: usize) -> Result<ParityReport> {
    let rep = WeilRep::new(p, g)?;
    let (plus, minus) = parity_vectors(p, g)?;
    for (name, span) in [("+", lift(rep.field(), &plus)), ("-", lift(rep.field(), &minus))] {
        if span.is_empty() {
            continue;
        }
        for (tag, _) in rep.generators() {
            let m = rep.generator_matrix(*tag)?;
            if m.restrict_to_span(&span)?.is_none() {
                return Err(Error::Defect(format!("U^{} is not stable under {}", name, tag)));
            }
        }
    }
    Ok(ParityReport { level: p, genus: g, plus_dim: plus.len(), minus_dim: minus.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = parity_bases(5, 1).unwrap();
        assert_eq!((r.plus_dim, r.minus_dim), (3, 2));
        let r = parity_bases(2, 1).unwrap();
        assert_eq!((r.plus_dim, r.minus_dim), (2, 0));
        let r = parity_bases(4, 1).unwrap();
        assert_eq!((r.plus_dim, r.minus_dim), (3, 1));
        let r = parity_bases(3, 2).unwrap();
        assert_eq!((r.plus_dim, r.minus_dim), (5, 4));
    }

    #[test]
    fn dims_agree_with_vectors() {
        for p in 2..=12 {
            for g in 1..=2 {
                let (a, b) = parity_vectors(p, g).unwrap();
                assert_eq!(parity_dims(p, g).unwrap(), (a.len() as u64, b.len() as u64));
            }
        }
    }
}
