use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::Serialize;

use super::{factorize, inv_mod, md, sl2_enumerate, sl2_order, SL2Residue};
use crate::error::{Error, Result};

/// A conjugacy class: its smallest element (or a CRT combination of those)
/// and its size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub rep: SL2Residue,
    pub size: u64,
}

fn conj_neighbours(m: &SL2Residue) -> [SL2Residue; 2] {
    let n = m.modulus;
    [m.conj_by(&SL2Residue::s(n)), m.conj_by(&SL2Residue::t(n, 1))]
}

fn orbit(m: &SL2Residue, seen: &mut HashSet<SL2Residue>) -> Vec<SL2Residue> {
    let mut out = vec![*m];
    let mut queue = VecDeque::from([*m]);
    seen.insert(*m);
    while let Some(x) = queue.pop_front() {
        for y in conj_neighbours(&x) {
            if seen.insert(y) {
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out
}

/// Size of the conjugacy class of M, by closure under conjugation with S and T.
pub fn class_size_bruteforce(m: &SL2Residue, bound: u64) -> Result<u64> {
    if m.modulus > bound {
        return Err(Error::Resource(format!("class closure at modulus {} exceeds the bound {}", m.modulus, bound)));
    }
    Ok(orbit(m, &mut HashSet::new()).len() as u64)
}

fn prime_power_partition(q: u64) -> Vec<ConjClass> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in sl2_enumerate(q, u64::MAX).expect("positive modulus") {
        if seen.contains(&m) {
            continue;
        }
        let orb = orbit(&m, &mut seen);
        let rep = *orb.iter().min().expect("nonempty orbit");
        out.push(ConjClass { rep, size: orb.len() as u64 });
    }
    out.sort_by_key(|c| c.rep);
    out
}

fn crt_pair(x1: u64, n1: u64, x2: u64, n2: u64) -> u64 {
    // x ≡ x1 (n1), x ≡ x2 (n2), gcd(n1, n2) = 1
    let inv = inv_mod(n1 as i128, n2).expect("coprime moduli");
    let k = md((x2 as i128 - x1 as i128) * inv as i128, n2);
    x1 + n1 * k
}

fn crt_combine(m1: &SL2Residue, m2: &SL2Residue) -> SL2Residue {
    let (n1, n2) = (m1.modulus, m2.modulus);
    SL2Residue {
        modulus: n1 * n2,
        a: crt_pair(m1.a, n1, m2.a, n2),
        b: crt_pair(m1.b, n1, m2.b, n2),
        c: crt_pair(m1.c, n1, m2.c, n2),
        d: crt_pair(m1.d, n1, m2.d, n2),
    }
}

/// Conjugacy classes of SL₂(Z/NZ). Prime-power factors are partitioned by
/// closure; classes of a composite modulus are products of those.
pub fn class_partition(n: u64, factor_bound: u64) -> Result<Vec<ConjClass>> {
    if n == 0 {
        return Err(Error::Argument("modulus must be positive".into()));
    }
    let mut acc = vec![ConjClass { rep: SL2Residue::identity(1), size: 1 }];
    for (q, e) in factorize(n) {
        let qe = q.pow(e);
        if qe > factor_bound {
            return Err(Error::Resource(format!("class partition at prime power {} exceeds the bound {}", qe, factor_bound)));
        }
        let part = prime_power_partition(qe);
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for x in &acc {
            for y in &part {
                next.push(ConjClass { rep: crt_combine(&x.rep, &y.rep), size: x.size * y.size });
            }
        }
        acc = next;
    }
    if n == 1 {
        return Ok(acc);
    }
    acc.sort_by_key(|c| c.rep);
    debug_assert_eq!(acc.iter().map(|c| c.size).sum::<u64>(), sl2_order(n));
    Ok(acc)
}

/// One row of the representative table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRep {
    pub label: String,
    pub l: u32,
    pub tau: u64,
    pub c1: u64,
    pub matrix: SL2Residue,
    /// Tabulated class size.
    pub m: u64,
}

fn a0(n: u32, tau: u64, c1: u64) -> SL2Residue {
    let big = 1u64 << n;
    let ci = inv_mod(c1 as i128, big).expect("odd c1") as i64;
    let t = tau as i64;
    SL2Residue::new(big, 1, ci * (t - 2), c1 as i64, t - 1).expect("det 1")
}

fn al(n: u32, l: u32, tau: u64, c1: u64) -> SL2Residue {
    let big = 1u64 << n;
    let ci = inv_mod(c1 as i128, big).expect("odd c1") as i128;
    let p = 1i128 << l;
    let t = tau as i128;
    let bb = md(-ci * p * t, big) as i64;
    let dd = md(1 - p * p * t, big) as i64;
    SL2Residue::new(big, 1, bb, md(c1 as i128 * p, big) as i64, dd).expect("det 1")
}

fn bl(n: u32, l: u32, tau: u64, c1: u64) -> SL2Residue {
    let big = 1u64 << n;
    let ci = inv_mod(c1 as i128, big).expect("odd c1") as i128;
    let p = 1i128 << l;
    let t = tau as i128;
    let u = 1 + (p >> 1);
    let ui = inv_mod(u, big).expect("odd") as i128;
    let d = u - ui * (p + (p * p >> 2) + p * p * t);
    SL2Residue::new(big, md(u, big) as i64, md(-ci * p * t, big) as i64, md(p * c1 as i128, big) as i64, md(d, big) as i64)
        .expect("det 1")
}

fn p2(e: u32) -> u64 {
    1u64 << e
}

/// c₁ choices and class size for A_l(τ, ·) in the x = 1 rows, l < n.
fn a_row(n: u32, l: u32, tau: u64) -> (Vec<u64>, u64) {
    if l == 0 {
        return if tau % 2 == 1 {
            (vec![1], p2(2 * n - 1))
        } else if tau % 4 == 2 {
            (vec![1, 3, 5, 7], 3 * p2(2 * n - 4))
        } else {
            (vec![1, 3], 3 * p2(2 * n - 3))
        };
    }
    if l == n - 1 {
        return (vec![1], 3);
    }
    if l == n - 2 {
        return if tau % 4 <= 1 { (vec![1, 3], 6) } else { (vec![1], 12) };
    }
    if l == 1 {
        let m5 = 3 * p2(2 * n - 5);
        return match tau % 8 {
            0 | 1 => (vec![1, 3, 5, 7], 3 * p2(2 * n - 6)),
            3 | 6 => (vec![1, 5], m5),
            _ => (vec![1, 3], m5),
        };
    }
    let e = 2 * n - 2 * l;
    match tau % 8 {
        0 => (vec![1, 3, 5, 7], 3 * p2(e - 4)),
        2 => (vec![1, 5], 3 * p2(e - 3)),
        3 | 7 => (vec![1], 3 * p2(e - 2)),
        _ => (vec![1, 3], 3 * p2(e - 3)),
    }
}

/// Representatives of every conjugacy class of SL₂(Z/2ⁿZ) with class sizes.
/// Coinciding matrices (only at n = 2) are merged and their sizes added.
pub fn class_representatives(n: u32) -> Result<Vec<ClassRep>> {
    if !(2..=20).contains(&n) {
        return Err(Error::Argument(format!("class table needs 2 <= n <= 20, got {}", n)));
    }
    let big = p2(n);
    let mut rows: Vec<ClassRep> = Vec::new();
    for l in 0..n {
        let taus = if l == 0 { big } else { p2(n - l) };
        for tau in 0..taus {
            let (c1s, m) = a_row(n, l, tau);
            for &c1 in &c1s {
                let mat = if l == 0 { a0(n, tau, c1) } else { al(n, l, tau, c1) };
                let name = if l == 0 { "A_0" } else { "A_l" };
                rows.push(ClassRep { label: format!("{}({},{})", name, tau, c1), l, tau, c1, matrix: mat, m });
                if l >= 2 {
                    rows.push(ClassRep { label: format!("-A_l({},{})", tau, c1), l, tau, c1, matrix: mat.neg(), m });
                }
            }
        }
        if l >= 3 {
            for tau in 0..p2(n - l) {
                let m = if tau % 2 == 1 { p2(2 * n - 2 * l - 1) } else { 3 * p2(2 * n - 2 * l - 1) };
                let mat = bl(n, l, tau, 1);
                rows.push(ClassRep { label: format!("B_l({},1)", tau), l, tau, c1: 1, matrix: mat, m });
                rows.push(ClassRep { label: format!("-B_l({},1)", tau), l, tau, c1: 1, matrix: mat.neg(), m });
            }
        }
    }
    let mut scalars = vec![1i64, -1, (big / 2) as i64 + 1, (big / 2) as i64 - 1];
    scalars.retain(|x| x.rem_euclid(2) == 1);
    let mut seen = HashSet::new();
    for x in scalars {
        let mat = SL2Residue::scalar(big, x)?;
        if seen.insert(mat) {
            rows.push(ClassRep { label: format!("{}*1", md(x as i128, big)), l: n, tau: 0, c1: 1, matrix: mat, m: 1 });
        }
    }
    // merge identical matrices, keeping the first label
    let mut index: BTreeMap<SL2Residue, usize> = BTreeMap::new();
    let mut merged: Vec<ClassRep> = Vec::new();
    for r in rows {
        if let Some(&i) = index.get(&r.matrix) {
            merged[i].m += r.m;
        } else {
            index.insert(r.matrix, merged.len());
            merged.push(r);
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgroup::conj_profile;

    #[test]
    fn table_sums_to_group_order() {
        for n in 2..=10 {
            let reps = class_representatives(n).unwrap();
            let total: u64 = reps.iter().map(|r| r.m).sum();
            assert_eq!(total, sl2_order(1 << n), "n = {}", n);
            for r in &reps {
                assert_eq!(r.matrix.det(), 1);
            }
        }
    }

    #[test]
    fn scalar_row() {
        let reps = class_representatives(3).unwrap();
        let scal: Vec<u64> = reps.iter().filter(|r| r.l == 3).map(|r| r.matrix.a).collect();
        assert_eq!(scal, vec![1, 7, 5, 3]);
    }

    #[test]
    fn table_matches_closure() {
        for n in 2..=4 {
            let big = 1u64 << n;
            let reps = class_representatives(n).unwrap();
            let mut seen = HashSet::new();
            for r in &reps {
                let size = class_size_bruteforce(&r.matrix, 16).unwrap();
                assert_eq!(size, r.m, "{} at n = {}", r.label, n);
                // distinct classes
                let orb = orbit(&r.matrix, &mut HashSet::new());
                for x in orb {
                    assert!(seen.insert(x), "{} overlaps an earlier class", r.label);
                }
            }
            assert_eq!(seen.len() as u64, sl2_order(big));
        }
    }

    #[test]
    fn representative_profiles() {
        let n = 5;
        for r in class_representatives(n).unwrap() {
            let p = conj_profile(&r.matrix, n).unwrap();
            assert_eq!(p.l, r.l, "{}", r.label);
            if r.l >= 1 && r.l < n && r.label.starts_with("A_l") {
                assert_eq!(p.tau, r.tau, "{}", r.label);
            }
        }
    }

    #[test]
    fn partition_composite() {
        let parts = class_partition(12, 64).unwrap();
        assert_eq!(parts.iter().map(|c| c.size).sum::<u64>(), sl2_order(12));
        let direct = prime_power_partition(12);
        assert_eq!(parts.len(), direct.len());
        let mut a: Vec<u64> = parts.iter().map(|c| c.size).collect();
        let mut b: Vec<u64> = direct.iter().map(|c| c.size).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }
}
