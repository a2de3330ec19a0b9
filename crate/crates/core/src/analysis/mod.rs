//! Character sums, trace tables, faithfulness and semiclassical traces.

pub mod modular;
mod semiclassical;
mod traces;

pub use semiclassical::{semiclassical_traces, semiclassical_value, Monomial, SemiclassicalReport};
pub use traces::{expected_trace, kernel_check, trace_table, FaithfulnessReport, TraceTable, TraceTableRow};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modgroup::{class_partition, class_representatives, sigma0, sl2_enumerate, sl2_order, word_decompose, SL2Residue};
use crate::weilrep::{field_order, Genus1Lift};
use modular::{abs_sq_integer, find_primes, ModLift};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FullEnumeration,
    CensusRepresentatives,
    ClassOrbits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Exact,
    Modular,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharSumReport {
    pub level: u64,
    pub modulus: u64,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub value: BigRational,
    #[serde(serialize_with = "crate::rational::serialize_int")]
    pub expected: u64,
    pub method: Method,
    pub engine: Engine,
    pub class_count: usize,
}

impl CharSumReport {
    pub fn passes(&self) -> bool {
        self.value == BigRational::from_integer(self.expected.into())
    }
}

/// Largest level for which the exact engine is chosen by default.
pub const EXACT_LEVEL_BOUND: u64 = 16;
/// Largest modulus for full enumeration.
pub const FULL_ENUM_BOUND: u64 = 32;
/// Largest lift modulus accepted by `char_sum`.
pub const CHAR_SUM_MODULUS_BOUND: u64 = 256;

/// σ(p) for odd p, σ(p/2) for even p.
pub fn expected_char_sum(p: u64) -> u64 {
    if p % 2 == 0 {
        sigma0(p / 2)
    } else {
        sigma0(p)
    }
}

fn lift_modulus(p: u64) -> u64 {
    if p % 2 == 0 {
        2 * p
    } else {
        p
    }
}

/// Weighted elements (M, multiplicity) covering SL₂(Z/NZ).
fn weighted_elements(p: u64, method: Method) -> Result<Vec<(SL2Residue, u64)>> {
    let n = lift_modulus(p);
    match method {
        Method::FullEnumeration => {
            if n > FULL_ENUM_BOUND {
                return Err(Error::Resource(format!("full enumeration at modulus {} exceeds {}", n, FULL_ENUM_BOUND)));
            }
            Ok(sl2_enumerate(n, FULL_ENUM_BOUND)?.map(|m| (m, 1)).collect())
        }
        Method::CensusRepresentatives => {
            if !n.is_power_of_two() || n < 4 {
                return Err(Error::Argument(format!("census mode needs a level 2^k with k >= 1, got {}", p)));
            }
            let e = n.trailing_zeros();
            if e > 6 {
                return Err(Error::Resource(format!("census mode supports moduli up to 64, got {}", n)));
            }
            Ok(class_representatives(e)?.into_iter().map(|r| (r.matrix, r.m)).collect())
        }
        Method::ClassOrbits => Ok(class_partition(n, 64)?.into_iter().map(|c| (c.rep, c.size)).collect()),
    }
}

fn default_method(p: u64) -> Method {
    let n = lift_modulus(p);
    if n <= 8 {
        Method::FullEnumeration
    } else if n.is_power_of_two() && n <= 64 {
        Method::CensusRepresentatives
    } else {
        Method::ClassOrbits
    }
}

fn default_engine(p: u64) -> Engine {
    if p <= EXACT_LEVEL_BOUND {
        Engine::Exact
    } else {
        Engine::Modular
    }
}

/// S_p = (1/|G|)·Σ_G |Tr ρ(M)|² with the default method and engine.
pub fn char_sum(p: u64) -> Result<CharSumReport> {
    char_sum_with(p, default_method(p), default_engine(p))
}

pub fn char_sum_with(p: u64, method: Method, engine: Engine) -> Result<CharSumReport> {
    if p < 2 {
        return Err(Error::Argument(format!("level must be at least 2, got {}", p)));
    }
    let n = lift_modulus(p);
    if n > CHAR_SUM_MODULUS_BOUND {
        return Err(Error::Resource(format!("modulus {} exceeds {}", n, CHAR_SUM_MODULUS_BOUND)));
    }
    let elems = weighted_elements(p, method)?;
    let values: Vec<BigRational> = match engine {
        Engine::Exact => {
            let lift = Genus1Lift::new(p)?;
            elems.par_iter().map(|(m, _)| lift.trace_abs_sq(m)).collect::<Result<Vec<_>>>()?
        }
        Engine::Modular => {
            let lifts = find_primes(field_order(p) as u64, 2)
                .into_iter()
                .map(|pr| ModLift::new(p, pr))
                .collect::<Result<Vec<_>>>()?;
            elems
                .par_iter()
                .map(|(m, _)| abs_sq_integer(&lifts, &word_decompose(m)).map(|v| BigRational::from_integer(v.into())))
                .collect::<Result<Vec<_>>>()?
        }
    };
    // fixed summation order
    let mut total = BigRational::zero();
    for ((_, w), v) in elems.iter().zip(&values) {
        total += v * BigRational::from_integer(BigInt::from(*w));
    }
    let order = sl2_order(n);
    let weight: u64 = elems.iter().map(|(_, w)| w).sum();
    if weight != order {
        return Err(Error::Defect(format!("class weights sum to {} instead of {}", weight, order)));
    }
    Ok(CharSumReport {
        level: p,
        modulus: n,
        value: total / BigRational::from_integer(order.into()),
        expected: expected_char_sum(p),
        method,
        engine,
        class_count: elems.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Multiplicativity {
    pub a: u64,
    pub b: u64,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub s_a: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub s_b: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub s_ab: BigRational,
    pub holds: bool,
}

/// S_ab = S_a·S_b at coprime levels (lift moduli 2a, 2ab when a is even).
pub fn char_sum_multiplicativity(a: u64, b: u64) -> Result<Multiplicativity> {
    if num_integer::gcd(a, b) != 1 {
        return Err(Error::Argument(format!("{} and {} are not coprime", a, b)));
    }
    let s_a = char_sum(a)?.value;
    let s_b = char_sum(b)?.value;
    let s_ab = char_sum(a * b)?.value;
    let holds = s_ab == &s_a * &s_b;
    Ok(Multiplicativity { a, b, s_a, s_b, s_ab, holds })
}

/// Value as u64 when integral.
pub fn as_u64(q: &BigRational) -> Option<u64> {
    q.is_integer().then(|| q.to_integer().to_u64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sums() {
        for (p, want) in [(2u64, 1u64), (3, 2), (4, 2), (5, 2)] {
            let r = char_sum(p).unwrap();
            assert_eq!(as_u64(&r.value), Some(want), "level {}", p);
            assert!(r.passes());
        }
    }

    #[test]
    fn methods_agree() {
        for p in [2u64, 3, 4] {
            let a = char_sum_with(p, Method::FullEnumeration, Engine::Exact).unwrap();
            let b = char_sum_with(p, Method::ClassOrbits, Engine::Exact).unwrap();
            let c = char_sum_with(p, Method::ClassOrbits, Engine::Modular).unwrap();
            assert_eq!(a.value, b.value);
            assert_eq!(a.value, c.value);
        }
        let a = char_sum_with(4, Method::CensusRepresentatives, Engine::Exact).unwrap();
        assert_eq!(as_u64(&a.value), Some(2));
    }

    #[test]
    fn multiplicative_small() {
        let m = char_sum_multiplicativity(2, 3).unwrap();
        assert!(m.holds);
        assert_eq!(as_u64(&m.s_ab), Some(2));
    }
}
