use serde::Serialize;

use crate::cyclo::make_field;
use crate::error::{Error, Result};
use crate::modgroup::ext_gcd;
use crate::weilrep::{a_order, field_order, generators_at_root};

/// (u, v) with au + bv = 1 (a odd) or 2au + bv = 1 (a even).
pub fn bezout(a: u64, b: u64) -> Option<(i64, i64)> {
    let lead = if a % 2 == 0 { 2 * a } else { a };
    let (g, u, v) = ext_gcd(lead as i128, b as i128);
    (g == 1).then_some((u as i64, v as i64))
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrtReport {
    pub a: u64,
    pub b: u64,
    pub genus: usize,
    pub u: i64,
    pub v: i64,
    /// f(x, y) uses 2au instead of au.
    pub even_variant: bool,
    /// f(x, y) at index x·b + y.
    pub f: Vec<u64>,
    pub f_bijective: bool,
    pub f_reduces: bool,
    pub checks: Vec<GeneratorCheck>,
}

impl CrtReport {
    pub fn passes(&self) -> bool {
        self.f_bijective && self.f_reduces && self.checks.iter().all(|c| c.pass)
    }
}

/// Checks ψ∘(π_a ⊗ π_b)∘ψ⁻¹ = π_ab generator by generator, with π_a and π_b
/// written at the roots A^{vb} and A^{au} (or A^{2au}) of the level-ab field.
pub fn crt_check(a: u64, b: u64, g: usize) -> Result<CrtReport> {
    if a < 2 || b < 2 || b % 2 == 0 {
        return Err(Error::Argument(format!("need a, b >= 2 with b odd, got ({}, {})", a, b)));
    }
    let (u, v) = bezout(a, b).ok_or_else(|| Error::Argument(format!("{} and {} are not coprime", a, b)))?;
    let even = a % 2 == 0;
    let ab = a * b;
    let (ai, bi, abi) = (a as i64, b as i64, ab as i64);
    let ua = if even { 2 * ai * u } else { ai * u };
    let f: Vec<u64> = (0..a)
        .flat_map(|x| (0..b).map(move |y| (x as i64 * v * bi + y as i64 * ua).rem_euclid(abi) as u64))
        .collect();
    let mut seen = vec![false; ab as usize];
    for &t in &f {
        seen[t as usize] = true;
    }
    let f_bijective = seen.iter().all(|&s| s);
    let f_reduces = (0..a).all(|x| (0..b).all(|y| {
        let t = f[(x * b + y) as usize];
        t % a == x && t % b == y
    }));

    let field = make_field(field_order(ab));
    let step = (field.order() / a_order(ab)) as i64;
    let pa = generators_at_root(a, g, &field, step * v * bi)?;
    let pb = generators_at_root(b, g, &field, step * ua)?;
    let pab = generators_at_root(ab, g, &field, step)?;
    let (da, db) = (a.pow(g as u32) as usize, b.pow(g as u32) as usize);
    let (au, bu, abu) = (a as usize, b as usize, ab as usize);
    // ψ on a basis index of U_a^{⊗g} ⊗ U_b^{⊗g}
    let psi = |ia: usize, ib: usize| -> usize {
        let (mut ia, mut ib) = (ia, ib);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..g {
            let (x, y) = (ia % au, ib % bu);
            out += f[x * bu + y] as usize * scale;
            scale *= abu;
            ia /= au;
            ib /= bu;
        }
        out
    };
    let mut checks = Vec::new();
    for ((tag, ma), ((_, mb), (_, mab))) in pa.iter().zip(pb.iter().zip(&pab)) {
        let mut pass = true;
        'outer: for r in 0..da * db {
            let tr = psi(r / db, r % db);
            for c in 0..da * db {
                let tc = psi(c / db, c % db);
                let x = ma.get(r / db, c / db);
                let y = mb.get(r % db, c % db);
                let want = mab.get(tr, tc);
                let ok = if x.is_zero() || y.is_zero() { want.is_zero() } else { &(x * y) == want };
                if !ok {
                    pass = false;
                    break 'outer;
                }
            }
        }
        checks.push(GeneratorCheck { generator: tag.to_string(), pass });
    }
    Ok(CrtReport { a, b, genus: g, u, v, even_variant: even, f, f_bijective, f_reduces, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bezout_pairs() {
        for (a, b) in [(2u64, 3u64), (3, 5), (4, 3), (8, 3), (5, 9)] {
            let (u, v) = bezout(a, b).unwrap();
            let lead = if a % 2 == 0 { 2 * a as i64 } else { a as i64 };
            assert_eq!(lead * u + b as i64 * v, 1);
        }
        assert!(bezout(3, 9).is_none());
    }

    #[test]
    fn small_pairs() {
        for (a, b, g) in [(3, 5, 1), (2, 3, 1), (4, 3, 1), (2, 3, 2)] {
            let r = crt_check(a, b, g).unwrap();
            assert!(r.passes(), "{:?}", r.checks);
            assert_eq!(r.f[0], 0);
        }
        assert!(crt_check(4, 3, 1).unwrap().even_variant);
        assert!(crt_check(3, 4, 1).is_err());
    }
}
