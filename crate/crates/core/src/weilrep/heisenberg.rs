use serde::Serialize;

use super::{Operator, WeilRep};
use crate::cyclo::CycloElt;
use crate::error::{Error, Result};
use crate::modgroup::{omega, symplectic_form_ok, SpMatrix};
use crate::ringmat::{solve_commutant, RingMatrix, RootMatrix};

/// Element (m₁, n₁, …, m_g, n_g; z) of the Heisenberg group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HeisenbergElt {
    pub x: Vec<i64>,
    pub z: i64,
}

impl HeisenbergElt {
    pub fn new(x: Vec<i64>, z: i64) -> Self {
        HeisenbergElt { x, z }
    }

    pub fn genus(&self) -> usize {
        self.x.len() / 2
    }

    /// k-th lattice basis vector (k even: shift coordinate, k odd: modulation).
    pub fn basis(genus: usize, k: usize) -> Self {
        let mut x = vec![0; 2 * genus];
        x[k] = 1;
        HeisenbergElt { x, z: 0 }
    }

    /// (X, z)·(X', z') = (X + X', z + z' + ω(X, X')).
    pub fn mul(&self, o: &Self) -> Self {
        let x = self.x.iter().zip(&o.x).map(|(a, b)| a + b).collect();
        let mut w = 0;
        for i in 0..self.genus() {
            w += self.x[2 * i + 1] * o.x[2 * i] - self.x[2 * i] * o.x[2 * i + 1];
        }
        HeisenbergElt { x, z: self.z + o.z + w }
    }
}

fn check_genus(rep: &WeilRep, len: usize) -> Result<()> {
    if len != 2 * rep.g {
        return Err(Error::Argument(format!("expected {} lattice coordinates, got {}", 2 * rep.g, len)));
    }
    Ok(())
}

/// A^z · Π_i Shift_i^{m_i} Mod_i^{n_i}: e_a ↦ A^{z + 2Σ n_i a_i} e_{a+m}.
pub fn schrodinger(rep: &WeilRep, h: &HeisenbergElt) -> Result<Operator> {
    check_genus(rep, h.x.len())?;
    let p = rep.p as i64;
    let n = rep.dim;
    let mut target = vec![0usize; n];
    let mut exps = vec![0i64; n];
    for col in 0..n {
        let d = rep.digits(col);
        let shifted: Vec<usize> = (0..rep.g).map(|i| (d[i] as i64 + h.x[2 * i]).rem_euclid(p) as usize).collect();
        target[col] = rep.index_of(&shifted);
        exps[col] = h.z + (0..rep.g).map(|i| 2 * h.x[2 * i + 1].rem_euclid(p) * d[i] as i64).sum::<i64>();
    }
    let body = RootMatrix::from_fn(n, n, rep.a_order(), |r, c| (target[c] == r).then(|| exps[c]));
    Ok(Operator { scalar: CycloElt::one(rep.field()), body })
}

/// Weyl-ordered A^{Σ m_i n_i}·Shift^m·Mod^n, with the integers taken as given.
pub fn weyl(rep: &WeilRep, x: &[i64]) -> Result<Operator> {
    check_genus(rep, x.len())?;
    let z: i64 = (0..rep.g).map(|i| x[2 * i] * x[2 * i + 1]).sum();
    schrodinger(rep, &HeisenbergElt::new(x.to_vec(), z))
}

#[derive(Debug, Clone, Serialize)]
pub struct EgorovReport {
    /// Lattice map mod p; column k is the image of the k-th basis vector.
    pub map: SpMatrix,
    /// Every conjugate was a unit-norm multiple of a Schrödinger operator.
    pub unit_witnesses: bool,
    pub additive: bool,
    pub preserves_omega: bool,
}

impl EgorovReport {
    pub fn passes(&self) -> bool {
        self.unit_witnesses && self.additive && self.preserves_omega
    }
}

/// X' with U·Add(X)·U⁻¹ = λ·Add(X'), and whether |λ| = 1.
fn conjugate_lattice(rep: &WeilRep, u: &Operator, x: &[i64]) -> Result<Option<(Vec<i64>, bool)>> {
    let add = schrodinger(rep, &HeisenbergElt::new(x.to_vec(), 0))?;
    let c = rep.product(&[u, &add, &u.adjoint()])?;
    let Some(h) = read_monomial(rep, &c) else { return Ok(None) };
    let target = rep.to_ring(&schrodinger(rep, &HeisenbergElt::new(h.clone(), 0))?)?;
    Ok(c.equal_up_to_scalar(&target).map(|w| (h, w.unit_norm)))
}

/// Reads (m, n) off a matrix proportional to some Add(m, n).
fn read_monomial(rep: &WeilRep, c: &RingMatrix) -> Option<Vec<i64>> {
    let n = rep.dim;
    let row_of = |col: usize| -> Option<usize> {
        let mut hit = None;
        for r in 0..n {
            if !c.get(r, col).is_zero() {
                if hit.is_some() {
                    return None;
                }
                hit = Some(r);
            }
        }
        hit
    };
    let r0 = row_of(0)?;
    let m = rep.digits(r0);
    let base = c.get(r0, 0).clone();
    let a2 = rep.a().pow(2);
    let mut x = vec![0i64; 2 * rep.g];
    for i in 0..rep.g {
        x[2 * i] = m[i] as i64;
        let mut e = vec![0usize; rep.g];
        e[i] = 1;
        let col = rep.index_of(&e);
        let r = row_of(col)?;
        let ratio = c.get(r, col).try_div(&base).ok()?;
        let mut pw = CycloElt::one(rep.field());
        let mut found = None;
        for k in 0..rep.p as i64 {
            if pw == ratio {
                found = Some(k);
                break;
            }
            pw = &pw * &a2;
        }
        x[2 * i + 1] = found?;
    }
    Some(x)
}

/// Lattice action of a unitary U by conjugation of Schrödinger operators.
pub fn egorov_map(rep: &WeilRep, u: &Operator) -> Result<EgorovReport> {
    let d = 2 * rep.g;
    let p = rep.p;
    let mut images = Vec::with_capacity(d);
    let mut unit = true;
    for k in 0..d {
        let e = HeisenbergElt::basis(rep.g, k).x;
        let (h, ok) = conjugate_lattice(rep, u, &e)?
            .ok_or_else(|| Error::Defect(format!("conjugate of basis vector {} is not a Heisenberg operator", k)))?;
        unit &= ok;
        images.push(h.iter().map(|v| v.rem_euclid(p as i64) as u64).collect::<Vec<u64>>());
    }
    let mut entries = vec![0u64; d * d];
    for (j, img) in images.iter().enumerate() {
        for i in 0..d {
            entries[i * d + j] = img[i];
        }
    }
    let map = SpMatrix { genus: rep.g, modulus: p, entries };
    let mut additive = true;
    for j in 0..d {
        for k in j..d {
            let mut x = vec![0i64; d];
            x[j] += 1;
            x[k] += 1;
            match conjugate_lattice(rep, u, &x)? {
                Some((h, ok)) => {
                    unit &= ok;
                    let want: Vec<u64> = (0..d).map(|i| (images[j][i] + images[k][i]) % p).collect();
                    let got: Vec<u64> = h.iter().map(|v| v.rem_euclid(p as i64) as u64).collect();
                    additive &= want == got;
                }
                None => additive = false,
            }
        }
    }
    let preserves = symplectic_form_ok(&map)
        && (0..d).all(|j| (0..d).all(|k| {
            let (ej, ek) = (HeisenbergElt::basis(rep.g, j).x, HeisenbergElt::basis(rep.g, k).x);
            let (ej, ek): (Vec<u64>, Vec<u64>) = (ej.iter().map(|&v| v as u64).collect(), ek.iter().map(|&v| v as u64).collect());
            omega(&images[j], &images[k], p) == omega(&ej, &ek, p)
        }));
    Ok(EgorovReport { map, unit_witnesses: unit, additive, preserves_omega: preserves })
}

/// Dimension of the commutant of the Schrödinger image, from the 2g
/// lattice generators (the center acts by scalars).
pub fn schrodinger_commutant_dim(rep: &WeilRep) -> Result<usize> {
    let mats = (0..2 * rep.g)
        .map(|k| schrodinger(rep, &HeisenbergElt::basis(rep.g, k)).and_then(|op| rep.to_ring(&op)))
        .collect::<Result<Vec<_>>>()?;
    Ok(solve_commutant(&mats)?.dimension)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weilrep::Generator;

    #[test]
    fn commutator_is_a_squared() {
        for p in 2..=6 {
            let rep = WeilRep::new(p, 1).unwrap();
            let x = schrodinger(&rep, &HeisenbergElt::new(vec![0, 1], 0)).unwrap();
            let y = schrodinger(&rep, &HeisenbergElt::new(vec![1, 0], 0)).unwrap();
            let c = rep.product(&[&x, &y, &x.adjoint(), &y.adjoint()]).unwrap();
            let a2 = rep.a().pow(2);
            assert_eq!(c, RingMatrix::identity(rep.field(), p as usize).scalar_mul(&a2).unwrap());
        }
    }

    #[test]
    fn group_law_up_to_a_power() {
        let rep = WeilRep::new(5, 2).unwrap();
        let h1 = HeisenbergElt::new(vec![1, 2, 0, 3], 1);
        let h2 = HeisenbergElt::new(vec![4, 1, 2, 2], 0);
        let lhs = rep.product(&[&schrodinger(&rep, &h1).unwrap(), &schrodinger(&rep, &h2).unwrap()]).unwrap();
        let rhs = rep.to_ring(&schrodinger(&rep, &h1.mul(&h2)).unwrap()).unwrap();
        let w = lhs.equal_up_to_scalar(&rhs).unwrap();
        assert!(w.unit_norm);
    }

    #[test]
    fn x_generator_is_a_shear() {
        let rep = WeilRep::new(5, 1).unwrap();
        let r = egorov_map(&rep, rep.generator(Generator::X(0)).unwrap()).unwrap();
        assert!(r.passes());
        // modulation vector fixed, shift vector sheared
        assert_eq!((r.map.get(0, 1), r.map.get(1, 1)), (0, 1));
        assert_eq!(r.map.get(0, 0), 1);
        assert_ne!(r.map.get(1, 0), 0);
    }
}
