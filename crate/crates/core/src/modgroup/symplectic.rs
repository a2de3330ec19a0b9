use serde::Serialize;

use super::{divisors, sigma0};
use crate::error::{Error, Result};

/// 2g×2g matrix mod N in coordinates (m₁, n₁, …, m_g, n_g), acting on columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpMatrix {
    pub genus: usize,
    pub modulus: u64,
    pub entries: Vec<u64>,
}

/// ω(v, v') = Σ (n_i m'_i − m_i n'_i) mod N.
pub fn omega(v: &[u64], w: &[u64], modulus: u64) -> u64 {
    let n = modulus as i128;
    let mut acc = 0i128;
    for i in 0..v.len() / 2 {
        acc += v[2 * i + 1] as i128 * w[2 * i] as i128 - v[2 * i] as i128 * w[2 * i + 1] as i128;
    }
    acc.rem_euclid(n) as u64
}

impl SpMatrix {
    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim() + j]
    }

    pub fn identity(genus: usize, modulus: u64) -> Self {
        let d = 2 * genus;
        let entries = (0..d * d).map(|k| if k / d == k % d { 1 % modulus } else { 0 }).collect();
        SpMatrix { genus, modulus, entries }
    }

    /// Transvection v ↦ v + ω(v, γ)·γ.
    pub fn transvection(gamma: &[u64], modulus: u64) -> Self {
        let d = gamma.len();
        let genus = d / 2;
        let mut entries = vec![0u64; d * d];
        for j in 0..d {
            let mut e = vec![0u64; d];
            e[j] = 1;
            let w = omega(&e, gamma, modulus);
            for i in 0..d {
                entries[i * d + j] = (e[i] + w * gamma[i]) % modulus;
            }
        }
        SpMatrix { genus, modulus, entries }
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let d = self.dim();
        (0..d)
            .map(|i| ((0..d).map(|j| self.get(i, j) as u128 * v[j] as u128).sum::<u128>() % self.modulus as u128) as u64)
            .collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.dim();
        let mut entries = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                let s: u128 = (0..d).map(|k| self.get(i, k) as u128 * o.get(k, j) as u128).sum();
                entries[i * d + j] = (s % self.modulus as u128) as u64;
            }
        }
        SpMatrix { genus: self.genus, modulus: self.modulus, entries }
    }
}

/// True when M preserves ω mod N.
pub fn symplectic_form_ok(m: &SpMatrix) -> bool {
    let d = m.dim();
    let basis: Vec<Vec<u64>> = (0..d).map(|j| (0..d).map(|i| u64::from(i == j)).collect()).collect();
    let images: Vec<Vec<u64>> = basis.iter().map(|v| m.apply(v)).collect();
    (0..d).all(|i| (0..d).all(|j| omega(&images[i], &images[j], m.modulus) == omega(&basis[i], &basis[j], m.modulus)))
}

/// Homology transvections for γ ∈ {x_i, y_i, x_i − x_j}, with
/// x_i = (m_i, n_i) = (0, 1) and y_i = (1, 0).
pub fn sp_generators(genus: usize, modulus: u64) -> Result<Vec<SpMatrix>> {
    if genus == 0 {
        return Err(Error::Argument("genus must be at least 1".into()));
    }
    let d = 2 * genus;
    let unit = |k: usize| {
        let mut v = vec![0u64; d];
        v[k] = 1 % modulus;
        v
    };
    let mut out = Vec::new();
    for i in 0..genus {
        out.push(SpMatrix::transvection(&unit(2 * i + 1), modulus));
        out.push(SpMatrix::transvection(&unit(2 * i), modulus));
    }
    for i in 0..genus {
        for j in i + 1..genus {
            let mut g = vec![0u64; d];
            g[2 * i + 1] = 1 % modulus;
            g[2 * j + 1] = (modulus - 1) % modulus;
            out.push(SpMatrix::transvection(&g, modulus));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitInfo {
    pub delta: u64,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    pub modulus: u64,
    pub genus: usize,
    pub count: u64,
    pub expected: u64,
    /// One entry per orbit, each labelled by the δ | N with (0,δ,…,0,δ) in it.
    pub orbits: Vec<OrbitInfo>,
    pub representatives_ok: bool,
}

impl OrbitCensus {
    pub fn passes(&self) -> bool {
        self.count == self.expected && self.representatives_ok
    }
}

fn encode(v: &[u64], n: u64) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * n as usize + x as usize)
}

fn decode(mut k: usize, n: u64, d: usize) -> Vec<u64> {
    let mut v = vec![0u64; d];
    for i in (0..d).rev() {
        v[i] = (k % n as usize) as u64;
        k /= n as usize;
    }
    v
}

/// Orbits of the generated group on (Z/NZ)^{2g}.
pub fn orbit_census(modulus: u64, genus: usize) -> Result<OrbitCensus> {
    let d = 2 * genus;
    let total = (modulus as u128).pow(d as u32);
    if total > 1_000_000 {
        return Err(Error::Resource(format!("{}^{} vectors exceed the bound 10^6", modulus, d)));
    }
    let gens = sp_generators(genus, modulus)?;
    let total = total as usize;
    let mut orbit_of = vec![u32::MAX; total];
    let mut sizes: Vec<u64> = Vec::new();
    for start in 0..total {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = sizes.len() as u32;
        orbit_of[start] = id;
        let mut stack = vec![start];
        let mut size = 0u64;
        while let Some(k) = stack.pop() {
            size += 1;
            let v = decode(k, modulus, d);
            for g in &gens {
                let w = encode(&g.apply(&v), modulus);
                if orbit_of[w] == u32::MAX {
                    orbit_of[w] = id;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    let mut labelled = vec![None; sizes.len()];
    let mut reps_ok = true;
    for delta in divisors(modulus) {
        let v: Vec<u64> = (0..d).map(|i| if i % 2 == 1 { delta % modulus } else { 0 }).collect();
        let id = orbit_of[encode(&v, modulus)] as usize;
        if labelled[id].is_some() {
            reps_ok = false;
        } else {
            labelled[id] = Some(delta);
        }
    }
    if labelled.iter().any(|x| x.is_none()) {
        reps_ok = false;
    }
    let mut orbits: Vec<OrbitInfo> = labelled
        .iter()
        .zip(&sizes)
        .map(|(delta, &size)| OrbitInfo { delta: delta.unwrap_or(0), size })
        .collect();
    orbits.sort_by_key(|o| (o.delta, o.size));
    Ok(OrbitCensus { modulus, genus, count: sizes.len() as u64, expected: sigma0(modulus), orbits, representatives_ok: reps_ok })
}
