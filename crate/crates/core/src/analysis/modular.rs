//! Lift traces reduced modulo primes q ≡ 1 (mod L), where ζ_L becomes an
//! element w of order L in F_q. Used for |Tr|² at levels where the exact
//! group-ring path is too slow; every value is recovered as an integer and
//! must agree across two primes.

use crate::error::{Error, Result};
use crate::modgroup::{GeneratorWord, Token};
use crate::weilrep::{a_order, field_order};

/// Primes stay below 2^57 so that up to 2^12 products fit in a u128 sum.
const PRIME_CEILING: u64 = 1 << 57;

fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn powm(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, q);
        }
        b = mulm(b, b, q);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModPrime {
    pub q: u64,
    /// Element of exact order L.
    pub w: u64,
}

/// The `count` largest primes q < 2^57 with q ≡ 1 (mod l), with a root of order l.
pub fn find_primes(l: u64, count: usize) -> Vec<ModPrime> {
    let ls = prime_factors(l);
    let mut out = Vec::new();
    let mut k = (PRIME_CEILING - 1) / l;
    while out.len() < count && k > 0 {
        let q = k * l + 1;
        k -= 1;
        if !is_prime(q) {
            continue;
        }
        let w = (2..).map(|x| powm(x, (q - 1) / l, q)).find(|&w| ls.iter().all(|&r| powm(w, l / r, q) != 1));
        out.push(ModPrime { q, w: w.expect("a generator exists") });
    }
    out
}

/// The genus-one lift at level p with entries in F_q.
#[derive(Debug, Clone)]
pub struct ModLift {
    pub p: u64,
    pub prime: ModPrime,
    dim: usize,
    m: u64,
    a: u64,
    beta: u64,
    s_mat: Vec<u64>,
    s_inv_mat: Vec<u64>,
}

impl ModLift {
    pub fn new(p: u64, prime: ModPrime) -> Result<Self> {
        let l = field_order(p) as u64;
        if (prime.q - 1) % l != 0 || powm(prime.w, l, prime.q) != 1 {
            return Err(Error::Argument(format!("prime {} does not carry a root of order {}", prime.q, l)));
        }
        let q = prime.q;
        let m = a_order(p) as u64;
        let a = powm(prime.w, l / m, q);
        let a_inv = powm(a, m - 1, q);
        let beta = powm(prime.w, l / 24, q);
        let beta_inv = powm(beta, 23, q);
        let even = p % 2 == 0;
        // G(−1, 0, m)/m
        let mut gauss = 0u64;
        for k in 0..m {
            gauss = (gauss + powm(a_inv, (k * k) % m, q)) % q;
        }
        let m_inv = powm(m % q, q - 2, q);
        let mut c = mulm(gauss, m_inv, q);
        if even {
            c = mulm(c, powm(beta_inv, 3, q), q);
        }
        // conj(c) = c⁻¹/p since |c|² = 1/p
        let c_bar = mulm(powm(c, q - 2, q), powm(p % q, q - 2, q), q);
        let n = p as usize;
        let mut s_mat = vec![0u64; n * n];
        let mut s_inv_mat = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let e = (2 * i as u64 * j as u64) % m;
                s_mat[i * n + j] = mulm(c, powm(a_inv, e, q), q);
                s_inv_mat[i * n + j] = mulm(c_bar, powm(a, e, q), q);
            }
        }
        Ok(ModLift { p, prime, dim: n, m, a, beta, s_mat, s_inv_mat })
    }

    fn t_diag(&self, k: i64) -> Vec<u64> {
        let q = self.prime.q;
        let m = self.m as i64;
        let scale = if self.p % 2 == 0 { powm(self.beta, (-k).rem_euclid(24) as u64, q) } else { 1 };
        (0..self.dim as i64)
            .map(|i| mulm(scale, powm(self.a, (-k * i * i).rem_euclid(m) as u64, q), q))
            .collect()
    }

    fn matmul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let n = self.dim;
        let q = self.prime.q as u128;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            let row = &x[i * n..(i + 1) * n];
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc += row[k] as u128 * y[k * n + j] as u128;
                }
                out[i * n + j] = (acc % q) as u64;
            }
        }
        out
    }

    /// Image of Tr ρ(word) in F_q.
    pub fn trace(&self, word: &GeneratorWord) -> u64 {
        let n = self.dim;
        let q = self.prime.q;
        let mut cur: Option<Vec<u64>> = None;
        let mut pending_diag: Vec<u64> = vec![1; n];
        for tok in &word.0 {
            match *tok {
                Token::T(k) => {
                    let d = self.t_diag(k);
                    match cur.as_mut() {
                        Some(mat) => {
                            for i in 0..n {
                                for j in 0..n {
                                    mat[i * n + j] = mulm(mat[i * n + j], d[j], q);
                                }
                            }
                        }
                        None => {
                            for (a, b) in pending_diag.iter_mut().zip(&d) {
                                *a = mulm(*a, *b, q);
                            }
                        }
                    }
                }
                Token::S | Token::SInv => {
                    let s = if *tok == Token::S { &self.s_mat } else { &self.s_inv_mat };
                    cur = Some(match cur {
                        Some(mat) => self.matmul(&mat, s),
                        None => {
                            let mut mat = s.clone();
                            for i in 0..n {
                                for j in 0..n {
                                    mat[i * n + j] = mulm(mat[i * n + j], pending_diag[i], q);
                                }
                            }
                            mat
                        }
                    });
                }
            }
        }
        match cur {
            Some(mat) => (0..n).fold(0, |acc, i| (acc + mat[i * n + i]) % q),
            None => pending_diag.iter().fold(0, |acc, x| (acc + x) % q),
        }
    }

    /// Tr ρ(W)·Tr ρ(W⁻¹) in F_q; ρ(W⁻¹) = ρ(W)† makes this the image of |Tr|².
    pub fn abs_sq(&self, word: &GeneratorWord) -> u64 {
        let inv = GeneratorWord(
            word.0
                .iter()
                .rev()
                .map(|t| match *t {
                    Token::S => Token::SInv,
                    Token::SInv => Token::S,
                    Token::T(k) => Token::T(-k),
                })
                .collect(),
        );
        mulm(self.trace(word), self.trace(&inv), self.prime.q)
    }
}

/// |Tr|² as an integer in [0, p²], confirmed by every lift given.
pub fn abs_sq_integer(lifts: &[ModLift], word: &GeneratorWord) -> Result<u64> {
    let mut value = None;
    for lift in lifts {
        let v = lift.abs_sq(word);
        let bound = lift.p * lift.p;
        if v > bound {
            return Err(Error::Defect(format!("|Tr|^2 mod {} is not an integer in [0, {}]", lift.prime.q, bound)));
        }
        match value {
            None => value = Some(v),
            Some(w) if w != v => return Err(Error::Defect(format!("|Tr|^2 disagrees across primes: {} vs {}", w, v))),
            _ => {}
        }
    }
    value.ok_or_else(|| Error::Argument("no primes supplied".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgroup::{sl2_enumerate, word_decompose};
    use crate::weilrep::trace_abs_sq;
    use num_traits::ToPrimitive;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(97) && !is_prime(91) && is_prime((1 << 61) - 1));
        let ps = find_primes(120, 2);
        assert_eq!(ps.len(), 2);
        for mp in ps {
            assert_eq!((mp.q - 1) % 120, 0);
            assert_eq!(powm(mp.w, 120, mp.q), 1);
            assert_ne!(powm(mp.w, 60, mp.q), 1);
        }
    }

    #[test]
    fn agrees_with_exact() {
        for p in [2u64, 3, 4, 5, 6] {
            let primes = find_primes(field_order(p) as u64, 2);
            let lifts: Vec<ModLift> = primes.into_iter().map(|pr| ModLift::new(p, pr).unwrap()).collect();
            let n = a_order(p) as u64;
            for m in sl2_enumerate(n, 64).unwrap().step_by(5) {
                let exact = trace_abs_sq(p, &m).unwrap();
                let modular = abs_sq_integer(&lifts, &word_decompose(&m)).unwrap();
                assert_eq!(exact.to_integer().to_u64().unwrap(), modular, "p = {}, {:?}", p, m);
                assert!(exact.is_integer());
            }
        }
    }
}
