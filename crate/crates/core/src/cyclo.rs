//! Exact arithmetic in the cyclotomic field Q(ζ_L).
//!
//! Elements are stored on the power basis 1, ζ, …, ζ^{d−1} (d = φ(L)) as an
//! integer numerator vector over one positive common denominator, always
//! reduced modulo Φ_L and normalized, so equality is structural.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::fmt_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("incompatible fields: Q(zeta_{0}) and Q(zeta_{1})")]
    FieldMismatch(u32, u32),
}

/// Descriptor of Q(ζ_L): the order L, the degree φ(L), Φ_L, and a table of
/// ζ^k reduced to the power basis for every k mod L.
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    degree: usize,
    modulus: Vec<i64>,
    powers: Vec<Vec<i64>>,
}

pub type Field = Arc<CycloField>;

fn field_cache() -> &'static Mutex<HashMap<u32, Field>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the shared descriptor of Q(ζ_L). Fields are interned per order.
pub fn make_field(order: u32) -> Field {
    assert!(order >= 1, "cyclotomic order must be positive");
    let mut cache = field_cache().lock().expect("field cache poisoned");
    cache
        .entry(order)
        .or_insert_with(|| Arc::new(CycloField::build(order)))
        .clone()
}

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn poly_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    debug_assert!(lead == 1);
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

impl CycloField {
    fn build(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by ζ and reduce the overflowing top coefficient
            let top = cur[degree - 1];
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..degree {
                    cur[j] -= top * modulus[j];
                }
            }
        }
        CycloField { order, degree, modulus, powers }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Φ_L, lowest degree first (length degree + 1, monic).
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// ζ^k on the power basis.
    pub fn power_coeffs(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.order as i64) as usize]
    }
}

/// An element of Q(ζ_L).
#[derive(Clone)]
pub struct CycloElt {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloElt {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloElt {}

impl Hash for CycloElt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coef = BigRational::new(c.clone(), self.den.clone());
            let coef = if coef.is_integer() { coef.numer().to_string() } else { coef.to_string() };
            terms.push(match k {
                0 => coef,
                1 => format!("{}*z", coef),
                _ => format!("{}*z^{}", coef, k),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// JSON rendering: coefficient array of `num/den` strings plus the field order.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CycloJson {
    pub order: u32,
    pub coeffs: Vec<String>,
}

impl CycloElt {
    fn from_parts(field: Field, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = CycloElt { field, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for c in self.num.iter_mut() {
                if !c.is_zero() {
                    *c = &*c / &g;
                }
            }
        }
    }

    pub fn zero(field: &Field) -> Self {
        CycloElt { field: field.clone(), num: vec![BigInt::zero(); field.degree], den: BigInt::one() }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, v: i64) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = BigInt::from(v);
        CycloElt { field: field.clone(), num, den: BigInt::one() }
    }

    pub fn from_rational(field: &Field, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = q.numer().clone();
        Self::from_parts(field.clone(), num, q.denom().clone())
    }

    /// Builds an element from integer power-basis coefficients over a denominator.
    pub fn from_coeffs(field: &Field, coeffs: &[BigInt], den: BigInt) -> Self {
        assert_eq!(coeffs.len(), field.degree);
        assert!(!den.is_zero());
        Self::from_parts(field.clone(), coeffs.to_vec(), den)
    }

    /// ζ_L^k.
    pub fn root_of_unity(field: &Field, k: i64) -> Self {
        let num = field.power_coeffs(k).iter().map(|&c| BigInt::from(c)).collect();
        CycloElt { field: field.clone(), num, den: BigInt::one() }
    }

    /// Sum Σ c_k ζ^k of a group-ring vector indexed by k mod L.
    pub fn from_root_sum(field: &Field, counts: &[i128]) -> Self {
        assert_eq!(counts.len(), field.order as usize);
        let mut acc = vec![0i128; field.degree];
        for (k, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(&field.powers[k]) {
                if p != 0 {
                    *a += c * p as i128;
                }
            }
        }
        let num = acc.into_iter().map(BigInt::from).collect();
        CycloElt { field: field.clone(), num, den: BigInt::one() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        BigRational::new(self.num[k].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// Some(q) when the element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn to_json(&self) -> CycloJson {
        CycloJson { order: self.field.order, coeffs: (0..self.num.len()).map(|k| fmt_rational(&self.coeff(k))).collect() }
    }

    fn check_field(&self, other: &Self) -> Result<(), CycloError> {
        if self.field.order != other.field.order {
            Err(CycloError::FieldMismatch(self.field.order, other.field.order))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_field(other)?;
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            return Ok(Self::from_parts(self.field.clone(), num, self.den.clone()));
        }
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den + b * &self.den).collect();
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        CycloElt { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let d = self.field.degree;
        let mut wide = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce_wide(wide);
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against Φ_L.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero(self.field.order));
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(&self.field, &q.recip()));
        }
        let a: Vec<BigRational> = self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect();
        let m: Vec<BigRational> = self.field.modulus.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        let inv = poly::inverse_mod(&a, &m);
        let den = inv.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = (0..self.field.degree)
            .map(|k| inv.get(k).map(|c| c.numer() * (&den / c.denom())).unwrap_or_default())
            .collect();
        Ok(Self::from_parts(self.field.clone(), num, den))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.try_mul(&other.inverse()?)
    }

    /// Multiplies by ζ^k.
    pub fn mul_root(&self, k: i64) -> Self {
        let mut acc = vec![BigInt::zero(); self.field.degree];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(self.field.power_coeffs(j as i64 + k)) {
                if p != 0 {
                    *a += c * p;
                }
            }
        }
        CycloElt { field: self.field.clone(), num: acc, den: self.den.clone() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::from_parts(self.field.clone(), num, &self.den * q.denom())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> Result<Self, CycloError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Galois conjugation ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> Self {
        let l = self.field.order as i64;
        let mut acc = vec![BigInt::zero(); self.field.degree];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(self.field.power_coeffs(l - j as i64)) {
                if p != 0 {
                    *a += c * p;
                }
            }
        }
        CycloElt { field: self.field.clone(), num: acc, den: self.den.clone() }
    }

    /// z · conj(z).
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    /// Complex value at ζ = e^{2πi/L}. Evaluation is in f64, so at most about
    /// 50 correct bits are available regardless of `precision`.
    pub fn embed_complex(&self, _precision: u32) -> Complex64 {
        let l = self.field.order as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * k as f64 / l;
            let v = c.to_f64().unwrap_or(f64::NAN) / den;
            acc += Complex64::from_polar(v, theta);
        }
        acc
    }
}

impl CycloField {
    fn reduce_wide(&self, mut wide: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree;
        for k in (d..wide.len()).rev() {
            if wide[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut wide[k]);
            for j in 0..d {
                let m = self.modulus[j];
                if m != 0 {
                    wide[k - d + j] -= &c * m;
                }
            }
        }
        wide.truncate(d);
        wide
    }
}

impl<'a> Add<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn add(self, rhs: &'a CycloElt) -> CycloElt {
        self.try_add(rhs).expect("cyclotomic addition")
    }
}

impl<'a> Sub<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn sub(self, rhs: &'a CycloElt) -> CycloElt {
        self.try_sub(rhs).expect("cyclotomic subtraction")
    }
}

impl<'a> Mul<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn mul(self, rhs: &'a CycloElt) -> CycloElt {
        self.try_mul(rhs).expect("cyclotomic multiplication")
    }
}

impl Neg for &CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        self.neg_ref()
    }
}

impl Neg for CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        self.neg_ref()
    }
}

mod poly {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn trim(p: &mut Vec<BigRational>) {
        while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
            p.pop();
        }
    }

    fn deg(p: &[BigRational]) -> usize {
        p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    fn divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = deg(b);
        let lead = b[db].clone();
        if deg(&r) < db || (r.len() == 1 && r[0].is_zero()) {
            return (vec![BigRational::zero()], r);
        }
        let mut q = vec![BigRational::zero(); deg(&r) - db + 1];
        while !(r.len() == 1 && r[0].is_zero()) && deg(&r) >= db {
            let dr = deg(&r);
            let c = &r[dr] / &lead;
            let shift = dr - db;
            for j in 0..=db {
                if !b[j].is_zero() {
                    let t = &c * &b[j];
                    r[shift + j] -= t;
                }
            }
            q[shift] = c;
            r.truncate(dr);
            if r.is_empty() {
                r.push(BigRational::zero());
            }
            trim(&mut r);
        }
        (q, r)
    }

    fn sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        // a − q·b
        let mut out = a.to_vec();
        let len = q.len() + b.len() - 1;
        if out.len() < len {
            out.resize(len, BigRational::zero());
        }
        for (i, qi) in q.iter().enumerate() {
            if qi.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    out[i + j] -= qi * bj;
                }
            }
        }
        trim(&mut out);
        out
    }

    /// Inverse of a modulo m, assuming gcd(a, m) = 1.
    pub fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
        // Invariant: s_i · a ≡ r_i (mod m)
        let mut r0 = m.to_vec();
        let mut r1 = a.to_vec();
        trim(&mut r1);
        let mut s0 = vec![BigRational::zero()];
        let mut s1 = vec![BigRational::one()];
        while !(deg(&r1) == 0) {
            let (q, r) = divmod(&r0, &r1);
            let s = sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = r1[0].clone();
        assert!(!c.is_zero(), "element is not invertible modulo the cyclotomic polynomial");
        let (_, s) = divmod(&s1, m);
        s.into_iter().map(|x| x / &c).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(make_field(24).degree(), 8);
        assert_eq!(make_field(1).degree(), 1);
    }

    #[test]
    fn roots_and_relations() {
        let f = make_field(3);
        assert!(CycloElt::root_of_unity(&f, 0).is_one());
        let s = &CycloElt::root_of_unity(&f, 1) + &CycloElt::root_of_unity(&f, 2);
        assert_eq!(s, CycloElt::from_int(&f, -1));
        let f8 = make_field(8);
        assert_eq!(CycloElt::root_of_unity(&f8, 4), CycloElt::from_int(&f8, -1));
        assert_eq!(CycloElt::root_of_unity(&f8, 8), CycloElt::one(&f8));
    }

    #[test]
    fn inverses() {
        let f = make_field(3);
        let z = &CycloElt::from_int(&f, 2) + &CycloElt::root_of_unity(&f, 1);
        assert!((&z * &z.inverse().unwrap()).is_one());
        let half = CycloElt::from_rational(&f, &q(1, 2));
        assert!((&CycloElt::from_int(&f, 2) * &half).is_one());
        let f5 = make_field(5);
        assert!((&CycloElt::root_of_unity(&f5, 1) * &CycloElt::root_of_unity(&f5, 4)).is_one());
        assert_eq!(CycloElt::zero(&f).inverse(), Err(CycloError::DivisionByZero(3)));
    }

    #[test]
    fn conjugation_and_norm() {
        let f8 = make_field(8);
        assert_eq!(CycloElt::root_of_unity(&f8, 1).conj(), CycloElt::root_of_unity(&f8, 7));
        let f3 = make_field(3);
        let z = &CycloElt::one(&f3) + &CycloElt::root_of_unity(&f3, 1).scale(&q(2, 1));
        assert_eq!(z.norm_sq(), CycloElt::from_int(&f3, 3));
        assert!(CycloElt::zero(&f3).norm_sq().is_zero());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = CycloElt::one(&make_field(3));
        let b = CycloElt::one(&make_field(5));
        assert_eq!(a.try_add(&b), Err(CycloError::FieldMismatch(3, 5)));
    }

    #[test]
    fn complex_embedding() {
        let f4 = make_field(4);
        let i = CycloElt::root_of_unity(&f4, 1).embed_complex(40);
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((CycloElt::one(&f4).embed_complex(40) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn root_sum_matches_power_table() {
        let f = make_field(12);
        let mut counts = vec![0i128; 12];
        counts[5] = 3;
        counts[11] = -2;
        let expect = &CycloElt::root_of_unity(&f, 5).scale(&q(3, 1)) - &CycloElt::root_of_unity(&f, 11).scale(&q(2, 1));
        assert_eq!(CycloElt::from_root_sum(&f, &counts), expect);
        assert_eq!(CycloElt::root_of_unity(&f, 5).mul_root(7), CycloElt::one(&f));
    }
}
