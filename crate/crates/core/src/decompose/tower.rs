use serde::Serialize;

use super::crt::GeneratorCheck;
use crate::cyclo::{CycloElt, Field};
use crate::error::{Error, Result};
use crate::modgroup::factorize;
use crate::ringmat::RingMatrix;
use crate::weilrep::{field_order, generators_at_root, WeilRep};

/// Largest r^{(n+2)g} accepted.
pub const TOWER_BOUND: u64 = 128;

/// Per-handle vectors inside U_{r^{n+2}}: the g_i (as supports) and a basis
/// of their orthogonal complement W (as signed supports).
pub fn tower_vectors(r: u64, n: u32) -> (Vec<Vec<usize>>, Vec<Vec<(usize, i64)>>) {
    let big = r.pow(n + 2) as usize;
    let small = r.pow(n) as usize;
    let ru = r as usize;
    let gvecs: Vec<Vec<usize>> = (0..small).map(|i| (0..ru).map(|k| (ru * (i + k * small)) % big).collect()).collect();
    let mut w = Vec::new();
    for j in 0..big {
        if j % ru != 0 {
            w.push(vec![(j, 1)]);
        }
    }
    for g in &gvecs {
        for &other in &g[1..] {
            w.push(vec![(g[0], 1), (other, -1)]);
        }
    }
    (gvecs, w)
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    pub r: u64,
    pub n: u32,
    pub genus: usize,
    pub level: u64,
    pub gvec_count: usize,
    pub w_dim: usize,
    pub orthogonal: bool,
    /// span(g) stable, with the restriction equal to level rⁿ at A^{r²}.
    pub restriction: Vec<GeneratorCheck>,
    pub w_stable: Vec<GeneratorCheck>,
}

impl TowerReport {
    pub fn passes(&self) -> bool {
        self.orthogonal && self.restriction.iter().all(|c| c.pass) && self.w_stable.iter().all(|c| c.pass)
    }
}

fn tensor_vectors(field: &Field, per_handle: &[Vec<Vec<(usize, i64)>>], big: usize) -> Vec<Vec<CycloElt>> {
    // per_handle[h] lists the handle-h factors; indices are mixed over handles
    let g = per_handle.len();
    let mut out = Vec::new();
    let counts: Vec<usize> = per_handle.iter().map(|v| v.len()).collect();
    let total: usize = counts.iter().product();
    let dim = big.pow(g as u32);
    for mut k in 0..total {
        let mut pick = vec![0usize; g];
        for h in (0..g).rev() {
            pick[h] = k % counts[h];
            k /= counts[h];
        }
        let mut v = vec![0i64; dim];
        let mut stack: Vec<(usize, usize, i64)> = vec![(0, 0, 1)];
        while let Some((h, idx, coef)) = stack.pop() {
            if h == g {
                v[idx] += coef;
                continue;
            }
            for &(j, c) in &per_handle[h][pick[h]] {
                stack.push((h + 1, idx * big + j, coef * c));
            }
        }
        out.push(v.into_iter().map(|x| CycloElt::from_int(field, x)).collect());
    }
    out
}

/// Stability of the embedded U_{rⁿ}^{⊗g} and of its complement inside U_{r^{n+2}}^{⊗g}.
pub fn tower_check(r: u64, n: u32, g: usize) -> Result<TowerReport> {
    let f = factorize(r);
    if f.len() != 1 || f[0].1 != 1 {
        return Err(Error::Argument(format!("{} is not prime", r)));
    }
    if r == 2 && n == 0 {
        return Err(Error::Argument("r = 2 needs n >= 1".into()));
    }
    let level = r
        .checked_pow(n + 2)
        .filter(|l| l.checked_pow(g as u32).is_some_and(|d| d <= TOWER_BOUND))
        .ok_or_else(|| Error::Resource(format!("{}^(({}+2)*{}) exceeds {}", r, n, g, TOWER_BOUND)))?;
    let rep = WeilRep::new(level, g)?;
    let field = rep.field().clone();
    let big = level as usize;
    let (gv, wv) = tower_vectors(r, n);
    let g_handle: Vec<Vec<(usize, i64)>> = gv.iter().map(|s| s.iter().map(|&j| (j, 1)).collect()).collect();
    let gspan = tensor_vectors(&field, &vec![g_handle.clone(); g], big);
    // complement: product vectors with at least one W factor
    let mut handle_all = g_handle.clone();
    handle_all.extend(wv.iter().cloned());
    let all = tensor_vectors(&field, &vec![handle_all; g], big);
    let wspan: Vec<Vec<CycloElt>> = all
        .into_iter()
        .enumerate()
        .filter(|(k, _)| {
            let mut k = *k;
            let per = gv.len() + wv.len();
            (0..g).any(|_| {
                let hit = k % per >= gv.len();
                k /= per;
                hit
            })
        })
        .map(|(_, v)| v)
        .collect();
    let orthogonal = gspan.iter().all(|x| {
        wspan.iter().all(|y| x.iter().zip(y).fold(CycloElt::zero(&field), |acc, (a, b)| &acc + &(a * b)).is_zero())
    });

    let small = r.pow(n);
    let a_sq = rep.a_step() as i64 * (r * r) as i64;
    let expected: Vec<RingMatrix> = generators_at_root(small, g, &field, a_sq)?.into_iter().map(|(_, m)| m).collect();
    debug_assert_eq!(field.order(), field_order(level));
    let mut restriction = Vec::new();
    let mut w_stable = Vec::new();
    for ((tag, _), want) in rep.generators().iter().zip(&expected) {
        let m = rep.generator_matrix(*tag)?;
        let got = m.restrict_to_span(&gspan)?;
        restriction.push(GeneratorCheck { generator: tag.to_string(), pass: got.as_ref() == Some(want) });
        let w_ok = wspan.is_empty() || m.restrict_to_span(&wspan)?.is_some();
        w_stable.push(GeneratorCheck { generator: tag.to_string(), pass: w_ok });
    }
    Ok(TowerReport {
        r,
        n,
        genus: g,
        level,
        gvec_count: gspan.len(),
        w_dim: wspan.len(),
        orthogonal,
        restriction,
        w_stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_two_one() {
        let (g, w) = tower_vectors(2, 1);
        assert_eq!(g, vec![vec![0, 4], vec![2, 6]]);
        assert_eq!(w.len(), 8 - 2);
        let (g, w) = tower_vectors(3, 0);
        assert_eq!(g, vec![vec![0, 3, 6]]);
        assert_eq!(w.len(), 8);
    }

    #[test]
    fn checks_pass() {
        for (r, n) in [(2, 1), (3, 0), (2, 2)] {
            let rep = tower_check(r, n, 1).unwrap();
            assert!(rep.passes(), "{:?}", rep);
            assert_eq!(rep.w_dim as u64, r.pow(n + 2) - r.pow(n));
        }
        assert!(tower_check(4, 1, 1).is_err());
        assert!(tower_check(2, 0, 1).is_err());
    }
}
