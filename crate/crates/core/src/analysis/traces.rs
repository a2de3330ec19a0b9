use std::collections::{BTreeMap, HashSet};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::CycloElt;
use crate::error::{Error, Result};
use crate::modgroup::{class_representatives, conj_profile, sl2_enumerate, word_decompose, XClass};
use crate::ringmat::RingMatrix;
use crate::weilrep::{lemma_diag, Genus1Lift};

/// |Tr|² at level 2^{n−1} for the profile (l, x-class, s), when the table covers it.
pub fn expected_trace(n: u32, l: u32, xc: XClass, s: u32) -> Option<u64> {
    let p2 = |e: u32| 1u64 << e;
    match xc {
        XClass::One => {
            if l == 0 {
                if s + 2 <= n {
                    Some(p2(s))
                } else if s + 1 == n {
                    Some(0)
                } else if s == n {
                    Some(p2(n - 1))
                } else {
                    None
                }
            } else if l + 2 <= n {
                if 2 * l <= s && s + 2 <= n + l {
                    Some(p2(s))
                } else if s + 1 == n + l {
                    Some(0)
                } else if s == n + l {
                    Some(p2(n + l - 1))
                } else {
                    None
                }
            } else if l + 1 == n {
                Some(0)
            } else {
                Some(p2(2 * n - 2))
            }
        }
        XClass::MinusOne if l >= 2 => Some(4),
        XClass::HalfPlus if l >= 3 => Some(p2(2 * l - 2)),
        XClass::HalfMinus if l >= 3 => Some(4),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceTableRow {
    pub n: u32,
    pub l: u32,
    pub x_class: XClass,
    pub x: u64,
    pub s: u32,
    pub label: String,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub measured: BigRational,
    #[serde(serialize_with = "crate::rational::serialize_opt_int")]
    pub expected: Option<u64>,
    #[serde(rename = "match")]
    pub matches: bool,
    /// No closed form for this profile.
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceTable {
    pub n: u32,
    pub level: u64,
    pub rows: Vec<TraceTableRow>,
    /// Representatives sharing (l, x, s) gave equal values.
    pub profile_consistent: bool,
    /// ρ(diag(a, a⁻¹)) is a unit scalar times a permutation for every unit a.
    pub diagonal_lemma: bool,
}

impl TraceTable {
    pub fn passes(&self) -> bool {
        self.profile_consistent && self.diagonal_lemma && self.rows.iter().all(|r| r.matches || r.flagged)
    }
}

/// |Tr ρ(A)|² on every class representative of SL₂(Z/2ⁿZ), lifted at level 2^{n−1}.
pub fn trace_table(n: u32) -> Result<TraceTable> {
    if !(2..=5).contains(&n) {
        return Err(Error::Resource(format!("trace table supports 2 <= n <= 5, got {}", n)));
    }
    let level = 1u64 << (n - 1);
    let lift = Genus1Lift::new(level)?;
    let reps = class_representatives(n)?;
    let measured: Vec<BigRational> = reps.par_iter().map(|r| lift.trace_abs_sq(&r.matrix)).collect::<Result<_>>()?;

    let mut by_profile: BTreeMap<(u32, u64, u32), (XClass, String, BigRational)> = BTreeMap::new();
    let mut profile_consistent = true;
    for (r, v) in reps.iter().zip(measured) {
        let prof = conj_profile(&r.matrix, n)?;
        let key = (prof.l, prof.x, prof.s);
        match by_profile.get(&key) {
            Some((_, _, w)) => profile_consistent &= *w == v,
            None => {
                by_profile.insert(key, (prof.x_class(), r.label.clone(), v));
            }
        }
    }
    let rows = by_profile
        .into_iter()
        .map(|((l, x, s), (xc, label, measured))| {
            let expected = expected_trace(n, l, xc, s);
            let matches = expected.is_some_and(|e| measured == BigRational::from_integer(e.into()));
            TraceTableRow { n, l, x_class: xc, x, s, label, measured, expected, matches, flagged: expected.is_none() }
        })
        .collect();

    let big = 1u64 << n;
    let mut diagonal_lemma = true;
    for a in (1..big).step_by(2) {
        diagonal_lemma &= lemma_diag(level, a)?.is_some();
    }
    Ok(TraceTable { n, level, rows, profile_consistent, diagonal_lemma })
}

#[derive(Debug, Clone, Serialize)]
pub struct FaithfulnessReport {
    pub level: u64,
    pub group_order: usize,
    /// Distinct projective classes among the images.
    pub distinct: usize,
    pub injective: bool,
    /// ρ(−1) is not a scalar.
    pub minus_one_nonscalar: bool,
}

/// Scale so the first nonzero entry is 1.
fn normalize(m: &RingMatrix) -> Result<Vec<CycloElt>> {
    let lead = m.entries().iter().find(|e| !e.is_zero()).ok_or_else(|| Error::Defect("zero lift".into()))?;
    let inv = lead.inverse().map_err(|e| Error::Defect(e.to_string()))?;
    Ok(m.entries().iter().map(|e| e * &inv).collect())
}

/// Projective injectivity of the genus-one lift on SL₂(Z/pZ), p odd.
pub fn kernel_check(p: u64) -> Result<FaithfulnessReport> {
    if p % 2 == 0 || !(3..=7).contains(&p) {
        return Err(Error::Resource(format!("kernel check supports odd 3 <= p <= 7, got {}", p)));
    }
    let lift = Genus1Lift::new(p)?;
    let elems: Vec<_> = sl2_enumerate(p, 7)?.collect();
    let normal: Vec<Vec<CycloElt>> =
        elems.par_iter().map(|m| lift.matrix(&word_decompose(m)).and_then(|r| normalize(&r))).collect::<Result<_>>()?;
    let distinct = normal.iter().collect::<HashSet<_>>().len();
    let id = normalize(&RingMatrix::identity(lift.field(), p as usize))?;
    let minus = crate::modgroup::SL2Residue::scalar(p, -1)?;
    let minus_one_nonscalar = normalize(&lift.matrix(&word_decompose(&minus))?)? != id;
    Ok(FaithfulnessReport {
        level: p,
        group_order: elems.len(),
        distinct,
        injective: distinct == elems.len(),
        minus_one_nonscalar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_small() {
        for n in 2..=3 {
            let t = trace_table(n).unwrap();
            assert!(t.passes(), "{:#?}", t.rows);
            assert!(t.rows.iter().all(|r| !r.flagged));
        }
    }

    #[test]
    fn identity_row() {
        assert_eq!(expected_trace(4, 4, XClass::One, 8), Some(64));
        assert_eq!(expected_trace(4, 3, XClass::One, 6), Some(0));
        assert_eq!(expected_trace(4, 0, XClass::One, 0), Some(1));
    }

    #[test]
    fn faithful_three() {
        let r = kernel_check(3).unwrap();
        assert_eq!(r.group_order, 24);
        assert!(r.injective && r.minus_one_nonscalar);
    }
}
