use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{sl2_column, SL2Residue};
use crate::error::{Error, Result};

/// Invariants (l, x, τ, s) of an element of SL₂(Z/2ⁿZ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConjProfile {
    pub n: u32,
    pub l: u32,
    pub x: u64,
    pub tau: u64,
    pub s: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum XClass {
    One,
    MinusOne,
    HalfPlus,
    HalfMinus,
}

impl XClass {
    pub fn label(&self) -> &'static str {
        match self {
            XClass::One => "1",
            XClass::MinusOne => "-1",
            XClass::HalfPlus => "2^(l-1)+1",
            XClass::HalfMinus => "2^(l-1)-1",
        }
    }
}

fn v2(x: u64) -> u32 {
    x.trailing_zeros()
}

impl ConjProfile {
    pub fn x_class(&self) -> XClass {
        let l = self.l;
        if l <= 1 || self.x == 1 {
            return XClass::One;
        }
        let m = 1u64 << l;
        if self.x == m - 1 {
            XClass::MinusOne
        } else if self.x == (m >> 1) + 1 {
            XClass::HalfPlus
        } else {
            XClass::HalfMinus
        }
    }
}

/// Profile of M at modulus 2ⁿ.
pub fn conj_profile(m: &SL2Residue, n: u32) -> Result<ConjProfile> {
    if m.modulus != 1u64 << n {
        return Err(Error::Argument(format!("modulus {} is not 2^{}", m.modulus, n)));
    }
    let big = m.modulus;
    let mut l = 0;
    while l < n {
        let q = 1u64 << (l + 1);
        if m.b % q == 0 && m.c % q == 0 && (m.a + big - m.d) % q == 0 {
            l += 1;
        } else {
            break;
        }
    }
    let x = m.a % (1u64 << l);
    if l == 0 {
        let tau = m.trace();
        let t2 = (tau + big - 2) % big;
        let s = if t2 == 0 { n } else { v2(t2).min(n) };
        return Ok(ConjProfile { n, l, x, tau, s });
    }
    if l == n {
        return Ok(ConjProfile { n, l, x, tau: 0, s: 2 * n });
    }
    // U₁ = (M − x)/2^l mod 2^{n−l}
    let sub = 1u64 << (n - l);
    let u = |v: u64, diag: bool| -> u64 {
        let w = if diag { (v + big - x) % big } else { v };
        (w >> l) % sub
    };
    let (ua, ub, uc, ud) = (u(m.a, true), u(m.b, false), u(m.c, false), u(m.d, true));
    let tau = ((ua as u128 * ud as u128 + sub as u128 * sub as u128 - (ub as u128 * uc as u128) % sub as u128) % sub as u128) as u64;
    let s = if tau == 0 { l + n } else { 2 * l + v2(tau) };
    Ok(ConjProfile { n, l, x, tau, s })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: u32,
    pub l: u32,
    pub x_class: XClass,
    /// None for rows aggregated over s.
    pub s: Option<u32>,
    pub count: u64,
    pub expected: Option<u64>,
    pub class_sizes: Option<Vec<u64>>,
}

impl CensusRow {
    pub fn matches(&self) -> bool {
        self.expected.map_or(true, |e| e == self.count)
    }
}

type RowKey = (u32, XClass, Option<u32>, u64);

fn row_key(p: &ConjProfile) -> RowKey {
    let xc = p.x_class();
    if p.l == p.n {
        return (p.l, xc, None, p.x);
    }
    match xc {
        XClass::One => (p.l, xc, Some(p.s), 0),
        _ => (p.l, xc, None, 0),
    }
}

/// Closed-form row sizes.
pub fn expected_count(n: u32, l: u32, xc: XClass, s: Option<u32>) -> Option<u64> {
    let p2 = |e: i64| -> Option<u64> { (e >= 0).then(|| 1u64 << e) };
    let (n, l) = (n as i64, l as i64);
    if l == n {
        return Some(1);
    }
    match (xc, s) {
        (XClass::One, Some(s)) => {
            let s = s as i64;
            if l == 0 {
                if s == 0 {
                    p2(3 * n - 2)
                } else if s < n {
                    p2(3 * n - s - 3).map(|v| 3 * v)
                } else {
                    p2(2 * n - 2).map(|v| 3 * v)
                }
            } else if s == l + n {
                p2(2 * n - 2 * l - 2).map(|v| 3 * v)
            } else {
                p2(3 * n - l - s - 3).map(|v| 3 * v)
            }
        }
        (XClass::MinusOne, None) if l >= 2 => p2(3 * n - 3 * l - 2).map(|v| 3 * v),
        (XClass::HalfPlus | XClass::HalfMinus, None) if l >= 3 => p2(3 * n - 3 * l),
        _ => None,
    }
}

/// Groups SL₂(Z/2ⁿZ) by (l, x-class, s) and compares with the closed forms.
/// Class sizes per row are attached when n ≤ `class_size_n`.
pub fn census(n: u32, class_size_n: u32) -> Result<Vec<CensusRow>> {
    if !(1..=6).contains(&n) {
        return Err(Error::Resource(format!("census supports 1 <= n <= 6, got {}", n)));
    }
    let big = 1u64 << n;
    let counts: BTreeMap<RowKey, u64> = (0..big)
        .into_par_iter()
        .map(|a| {
            let mut local: BTreeMap<RowKey, u64> = BTreeMap::new();
            for c in 0..big {
                for m in sl2_column(big, a, c) {
                    let p = conj_profile(&m, n).expect("2-power modulus");
                    *local.entry(row_key(&p)).or_insert(0) += 1;
                }
            }
            local
        })
        .reduce(BTreeMap::new, |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_insert(0) += v;
            }
            x
        });
    let sizes: Option<BTreeMap<RowKey, Vec<u64>>> = if n <= class_size_n {
        let mut out: BTreeMap<RowKey, Vec<u64>> = BTreeMap::new();
        for cl in super::class_partition(big, big)? {
            let p = conj_profile(&cl.rep, n)?;
            out.entry(row_key(&p)).or_default().push(cl.size);
        }
        for v in out.values_mut() {
            v.sort_unstable();
        }
        Some(out)
    } else {
        None
    };
    Ok(counts
        .into_iter()
        .map(|(key, count)| {
            let (l, x_class, s, _) = key;
            CensusRow {
                n,
                l,
                x_class,
                s,
                count,
                expected: expected_count(n, l, x_class, s),
                class_sizes: sizes.as_ref().and_then(|m| m.get(&key).cloned()),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_profiles() {
        for n in 1..=4 {
            let big = 1u64 << n;
            let id = SL2Residue::identity(big);
            assert_eq!(conj_profile(&id, n).unwrap().l, n);
            assert_eq!(conj_profile(&id.neg(), n).unwrap().l, n);
        }
    }

    #[test]
    fn a1_profile() {
        // A₁(1, 1) mod 8
        let m = SL2Residue::new(8, 1, -2, 2, 1 - 4).unwrap();
        let p = conj_profile(&m, 3).unwrap();
        assert_eq!((p.l, p.x, p.tau), (1, 1, 1));
    }

    #[test]
    fn census_small() {
        for n in 2..=4 {
            let rows = census(n, 3).unwrap();
            let total: u64 = rows.iter().map(|r| r.count).sum();
            assert_eq!(total, 3 << (3 * n - 2));
            for r in &rows {
                assert!(r.expected.is_some(), "{:?}", r);
                assert!(r.matches(), "{:?}", r);
                if let Some(cs) = &r.class_sizes {
                    assert_eq!(cs.iter().sum::<u64>(), r.count);
                }
            }
        }
        let rows = census(2, 0).unwrap();
        let r = rows.iter().find(|r| r.l == 0 && r.s == Some(0)).unwrap();
        assert_eq!(r.count, 16);
    }
}
