//! SL₂ and Sp₂g over Z/NZ: elements, enumeration, generator words,
//! conjugacy invariants at 2-power moduli, and orbit counts.

mod classes;
mod lemmas;
mod profile;
mod symplectic;

pub use classes::{class_partition, class_representatives, class_size_bruteforce, ClassRep, ConjClass};
pub use lemmas::{count_quadratic_solutions, hensel_lift_count, QuadraticCount};
pub use profile::{census, conj_profile, CensusRow, ConjProfile, XClass};
pub use symplectic::{omega, orbit_census, sp_generators, symplectic_form_ok, OrbitCensus, SpMatrix};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on moduli for which SL₂(Z/NZ) is enumerated.
pub const DEFAULT_ENUM_BOUND: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SL2Residue {
    pub modulus: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl fmt::Display for SL2Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]] mod {}", self.a, self.b, self.c, self.d, self.modulus)
    }
}

pub(crate) fn md(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// Representative of x mod n in (−n/2, n/2].
pub(crate) fn sym(x: u64, n: u64) -> i64 {
    let x = x % n;
    if 2 * x > n {
        x as i64 - n as i64
    } else {
        x as i64
    }
}

pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with ax + by = g ≥ 0
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}


/// Inverse of a mod n, if a is a unit.
pub fn inv_mod(a: i128, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(n as i128), n as i128);
    (g == 1).then(|| md(x, n))
}

impl SL2Residue {
    pub fn new(modulus: u64, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Argument("modulus must be positive".into()));
        }
        let m = SL2Residue {
            modulus,
            a: md(a as i128, modulus),
            b: md(b as i128, modulus),
            c: md(c as i128, modulus),
            d: md(d as i128, modulus),
        };
        if m.det() != 1 % modulus {
            return Err(Error::Argument(format!("determinant of {} is not 1", m)));
        }
        Ok(m)
    }

    pub fn identity(modulus: u64) -> Self {
        SL2Residue { modulus, a: 1 % modulus, b: 0, c: 0, d: 1 % modulus }
    }

    pub fn s(modulus: u64) -> Self {
        Self::new(modulus, 0, 1, -1, 0).expect("det 1")
    }

    pub fn t(modulus: u64, k: i64) -> Self {
        Self::new(modulus, 1, k, 0, 1).expect("det 1")
    }

    pub fn scalar(modulus: u64, x: i64) -> Result<Self> {
        let inv = inv_mod(x as i128, modulus).ok_or_else(|| Error::Argument(format!("{} is not a unit mod {}", x, modulus)))?;
        Self::new(modulus, x, 0, 0, inv as i64)
    }

    pub fn det(&self) -> u64 {
        let n = self.modulus as i128;
        md(self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128, n as u64)
    }

    pub fn trace(&self) -> u64 {
        (self.a + self.d) % self.modulus
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.modulus, o.modulus, "moduli differ");
        let n = self.modulus;
        let f = |x: u64, y: u64, z: u64, w: u64| ((x as u128 * y as u128 + z as u128 * w as u128) % n as u128) as u64;
        SL2Residue {
            modulus: n,
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.modulus;
        SL2Residue { modulus: n, a: self.d, b: (n - self.b) % n, c: (n - self.c) % n, d: self.a }
    }

    pub fn neg(&self) -> Self {
        let n = self.modulus;
        SL2Residue { modulus: n, a: (n - self.a) % n, b: (n - self.b) % n, c: (n - self.c) % n, d: (n - self.d) % n }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// g·self·g⁻¹.
    pub fn conj_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    /// Reduction to a divisor of the modulus.
    pub fn reduce(&self, m: u64) -> Self {
        assert!(self.modulus % m == 0, "{} does not divide {}", m, self.modulus);
        SL2Residue { modulus: m, a: self.a % m, b: self.b % m, c: self.c % m, d: self.d % m }
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    /// Dense index in [0, N⁴), used by visited sets.
    pub fn index(&self) -> usize {
        let n = self.modulus as usize;
        ((self.a as usize * n + self.b as usize) * n + self.c as usize) * n + self.d as usize
    }
}

/// |SL₂(Z/NZ)| = N³·Π_{q | N}(1 − q⁻²).
pub fn sl2_order(n: u64) -> u64 {
    let mut order = n * n * n;
    for (q, _) in factorize(n) {
        order = order / (q * q) * (q * q - 1);
    }
    order
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of positive divisors.
pub fn sigma0(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Elements whose first column is (a, c), one coset of the column stabilizer.
pub fn sl2_column(n: u64, a: u64, c: u64) -> Vec<SL2Residue> {
    if n == 1 {
        return vec![SL2Residue::identity(1)];
    }
    let (g, x, y) = ext_gcd(a as i128, c as i128);
    if g == 0 {
        return Vec::new();
    }
    let Some(ginv) = inv_mod(g, n) else { return Vec::new() };
    // a·x + c·y = g, so d0 = x/g, b0 = −y/g gives a·d0 − b0·c = 1
    let d0 = md(x * ginv as i128, n);
    let b0 = md(-y * ginv as i128, n);
    (0..n)
        .map(|t| SL2Residue {
            modulus: n,
            a,
            b: ((b0 as u128 + t as u128 * a as u128) % n as u128) as u64,
            c,
            d: ((d0 as u128 + t as u128 * c as u128) % n as u128) as u64,
        })
        .collect()
}

/// Streams SL₂(Z/NZ), each element once, ordered by (a, c, coset index).
pub fn sl2_enumerate(n: u64, bound: u64) -> Result<impl Iterator<Item = SL2Residue>> {
    if n == 0 {
        return Err(Error::Argument("modulus must be positive".into()));
    }
    if n > bound {
        return Err(Error::Resource(format!("enumeration of SL2(Z/{}Z) exceeds the bound {}", n, bound)));
    }
    Ok((0..n).flat_map(move |a| (0..n).flat_map(move |c| sl2_column(n, a, c))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Token {
    S,
    SInv,
    T(i64),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::S => write!(f, "S"),
            Token::SInv => write!(f, "S^-1"),
            Token::T(k) => write!(f, "T^{}", k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GeneratorWord(pub Vec<Token>);

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl GeneratorWord {
    pub fn eval(&self, n: u64) -> SL2Residue {
        let s = SL2Residue::s(n);
        let si = s.inverse();
        self.0.iter().fold(SL2Residue::identity(n), |acc, t| match t {
            Token::S => acc.mul(&s),
            Token::SInv => acc.mul(&si),
            Token::T(k) => acc.mul(&SL2Residue::t(n, *k)),
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Merges T-runs (exponents reduced to (−N/2, N/2]) and S-runs (mod 4).
    fn normalize(tokens: Vec<Token>, n: u64) -> Self {
        enum Run {
            S(i64),
            T(i64),
        }
        let mut stack: Vec<Run> = Vec::new();
        for t in tokens {
            let (ds, dt) = match t {
                Token::S => (1, None),
                Token::SInv => (-1, None),
                Token::T(k) => (0, Some(k)),
            };
            match (dt, stack.last_mut()) {
                (None, Some(Run::S(r))) => {
                    *r = (*r + ds).rem_euclid(4);
                    if *r == 0 {
                        stack.pop();
                    }
                }
                (None, _) => stack.push(Run::S(ds.rem_euclid(4))),
                (Some(k), Some(Run::T(j))) => {
                    *j = sym(md((*j + k) as i128, n), n);
                    if *j == 0 {
                        stack.pop();
                    }
                }
                (Some(k), _) => {
                    let k = sym(md(k as i128, n), n);
                    if k != 0 {
                        stack.push(Run::T(k));
                    }
                }
            }
        }
        let mut out = Vec::new();
        for r in stack {
            match r {
                Run::S(1) => out.push(Token::S),
                Run::S(2) => out.extend([Token::S, Token::S]),
                Run::S(_) => out.push(Token::SInv),
                Run::T(k) => out.push(Token::T(k)),
            }
        }
        GeneratorWord(out)
    }
}

/// Word in S and T-powers evaluating to M.
pub fn word_decompose(m: &SL2Residue) -> GeneratorWord {
    word_decompose_with(m, 0)
}

/// As `word_decompose`, but starting from the integer lift M·T^{shift·N};
/// different shifts give different words for the same element.
pub fn word_decompose_with(m: &SL2Residue, shift: i64) -> GeneratorWord {
    let n = m.modulus;
    if n == 1 {
        return GeneratorWord::default();
    }
    let ni = n as i128;
    // integer lift [[a, b], [c, d]] with ad − bc = 1
    let c0 = sym(m.c, n) as i128;
    let d0 = sym(m.d, n) as i128;
    let c = if c0 == 0 && d0.abs() != 1 { ni } else { c0 };
    let mut d = d0;
    while ext_gcd(c, d).0 != 1 {
        d += ni;
    }
    let (_, u, v) = ext_gcd(c, d);
    // u·c + v·d = 1, so [[v, −u], [c, d]] has determinant 1
    let (a0, b0) = (v, -u);
    let k = (u * (sym(m.a, n) as i128 - a0) + v * (sym(m.b, n) as i128 - b0)).rem_euclid(ni);
    let (mut a, mut b) = (a0 + k * c, b0 + k * d);
    let (mut c, mut d) = (c, d);
    let t = shift as i128 * ni;
    b += a * t;
    d += c * t;
    debug_assert_eq!(a * d - b * c, 1);

    // left-multiply by T^{−q} and S until c = 0; record inverses
    let mut tokens = Vec::new();
    while c != 0 {
        let mut q = a.div_euclid(c);
        if 2 * (a - q * c) > c.abs() {
            q += c.signum();
        }
        if q != 0 {
            a -= q * c;
            b -= q * d;
            tokens.push(Token::T(q as i64));
        }
        // S·[[a,b],[c,d]] = [[c,d],[−a,−b]]
        let (na, nb, nc, nd) = (c, d, -a, -b);
        a = na;
        b = nb;
        c = nc;
        d = nd;
        tokens.push(Token::SInv);
    }
    // remaining [[e, b], [0, e]] with e = ±1
    if a == -1 {
        tokens.push(Token::S);
        tokens.push(Token::S);
        b = -b;
    }
    tokens.push(Token::T(b as i64));
    GeneratorWord::normalize(tokens, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(sl2_enumerate(2, 64).unwrap().count(), 6);
        assert_eq!(sl2_enumerate(4, 64).unwrap().count(), 48);
        assert_eq!(sl2_enumerate(3, 64).unwrap().count(), 24);
        assert_eq!(sl2_enumerate(12, 64).unwrap().count() as u64, sl2_order(12));
        assert!(matches!(sl2_enumerate(65, 64), Err(Error::Resource(_))));
    }

    #[test]
    fn brute_force_order_oracle() {
        for n in 2..=6u64 {
            let mut brute = 0;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            if (a * d + n * n - b * c % n) % n == 1 % n {
                                brute += 1;
                            }
                        }
                    }
                }
            }
            let mut seen = std::collections::HashSet::new();
            for m in sl2_enumerate(n, 64).unwrap() {
                assert_eq!(m.det(), 1);
                assert!(seen.insert(m));
            }
            assert_eq!(seen.len(), brute);
        }
    }

    #[test]
    fn words() {
        assert!(word_decompose(&SL2Residue::identity(8)).is_empty());
        assert_eq!(word_decompose(&SL2Residue::s(8)).to_string(), "S");
        for n in [2u64, 3, 5, 8, 12] {
            for m in sl2_enumerate(n, 64).unwrap() {
                assert_eq!(word_decompose(&m).eval(n), m, "{}", m);
                assert_eq!(word_decompose_with(&m, 3).eval(n), m, "{}", m);
            }
        }
    }

    #[test]
    fn factor_helpers() {
        assert_eq!(factorize(72), vec![(2, 3), (3, 2)]);
        assert_eq!(sigma0(12), 6);
        assert_eq!(sl2_order(8), 384);
        assert_eq!(inv_mod(3, 8), Some(3));
        assert_eq!(inv_mod(2, 8), None);
    }
}
