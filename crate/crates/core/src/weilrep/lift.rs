use num_rational::BigRational;

use super::{a_order, field_order, gauss_sum};
use crate::cyclo::{make_field, CycloElt, Field};
use crate::error::{Error, Result};
use crate::modgroup::{word_decompose, GeneratorWord, SL2Residue, Token};
use crate::ringmat::{counts_to_cyclo, RingMatrix, RootMatrix, SumMatrix};

/// Images of S, S⁻¹ and T^k under the genus-one lift at level p.
#[derive(Debug, Clone)]
pub struct Genus1Lift {
    pub p: u64,
    field: Field,
    m: u32,
    step: u32,
    fourier: RootMatrix,
    fourier_bar: RootMatrix,
    s_scalar: CycloElt,
    s_inv_scalar: CycloElt,
    beta: CycloElt,
}

impl Genus1Lift {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::Argument(format!("level must be at least 2, got {}", p)));
        }
        if p > 512 {
            return Err(Error::Resource(format!("level {} exceeds 512", p)));
        }
        let field = make_field(field_order(p));
        let m = a_order(p);
        let step = field.order() / m;
        let n = p as usize;
        let fourier = RootMatrix::from_fn(n, n, m, |i, j| Some(-2 * (i * j) as i64));
        let fourier_bar = fourier.conj_transpose();
        let beta = CycloElt::root_of_unity(&field, (field.order() / 24) as i64);
        let mut s_scalar = gauss_sum(-1, 0, p).scale(&BigRational::new(1.into(), (m as i64).into()));
        if p % 2 == 0 {
            s_scalar = &s_scalar * &beta.pow(21);
        }
        let s_inv_scalar = s_scalar.conj();
        Ok(Genus1Lift { p, field, m, step, fourier, fourier_bar, s_scalar, s_inv_scalar, beta })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Modulus of SL₂ matrices accepted: p (odd) or 2p (even).
    pub fn modulus(&self) -> u64 {
        self.m as u64
    }

    fn t_body(&self, k: i64) -> RootMatrix {
        let exps: Vec<i64> = (0..self.p as i64).map(|i| -k * i * i).collect();
        RootMatrix::diagonal(self.m, &exps)
    }

    fn t_scalar(&self, k: i64) -> CycloElt {
        if self.p % 2 == 0 {
            self.beta.pow((-k).rem_euclid(24) as u64)
        } else {
            CycloElt::one(&self.field)
        }
    }

    /// scalar and group-ring body of the lifted word.
    pub fn evaluate(&self, word: &GeneratorWord) -> (CycloElt, SumMatrix) {
        let mut body = SumMatrix::identity(self.p as usize, self.m);
        let mut scalar = CycloElt::one(&self.field);
        for tok in &word.0 {
            match *tok {
                Token::S => {
                    body = body.mul_root(&self.fourier);
                    scalar = &scalar * &self.s_scalar;
                }
                Token::SInv => {
                    body = body.mul_root(&self.fourier_bar);
                    scalar = &scalar * &self.s_inv_scalar;
                }
                Token::T(k) => {
                    body = body.mul_root(&self.t_body(k));
                    scalar = &scalar * &self.t_scalar(k);
                }
            }
        }
        (scalar, body)
    }

    pub fn matrix(&self, word: &GeneratorWord) -> Result<RingMatrix> {
        let (scalar, body) = self.evaluate(word);
        Ok(body.to_ring(&self.field, self.step).scalar_mul(&scalar)?)
    }

    pub fn trace(&self, word: &GeneratorWord) -> CycloElt {
        let (scalar, body) = self.evaluate(word);
        &scalar * &counts_to_cyclo(&self.field, self.step, &body.trace())
    }

    fn check(&self, m: &SL2Residue) -> Result<()> {
        if m.modulus != self.modulus() {
            return Err(Error::Argument(format!(
                "matrix modulus {} does not match the lift modulus {}",
                m.modulus,
                self.modulus()
            )));
        }
        Ok(())
    }

    /// |Tr ρ(M)|², which is rational.
    pub fn trace_abs_sq(&self, m: &SL2Residue) -> Result<BigRational> {
        self.check(m)?;
        let t = self.trace(&word_decompose(m));
        t.norm_sq().to_rational().ok_or_else(|| Error::Defect("|Tr|^2 is not rational".into()))
    }
}

/// ρ(diag(a, a⁻¹)) against the permutation e_i ↦ e_{a⁻¹ i}; returns the
/// unit-norm scalar relating them, if any.
pub fn lemma_diag(p: u64, a: u64) -> Result<Option<CycloElt>> {
    let lift = Genus1Lift::new(p)?;
    let n = lift.modulus();
    let ai = crate::modgroup::inv_mod(a as i128, n)
        .ok_or_else(|| Error::Argument(format!("{} is not a unit mod {}", a, n)))?;
    let m = SL2Residue::new(n, a as i64, 0, 0, ai as i64)?;
    let rho = lift.matrix(&word_decompose(&m))?;
    let pp = p as usize;
    let perm = RingMatrix::from_fn(lift.field(), pp, pp, |i, j| {
        if (ai as usize * j) % pp == i {
            CycloElt::one(lift.field())
        } else {
            CycloElt::zero(lift.field())
        }
    });
    Ok(rho.equal_up_to_scalar(&perm).filter(|w| w.unit_norm).map(|w| w.lambda))
}

pub fn lift_genus1(p: u64, m: &SL2Residue) -> Result<RingMatrix> {
    let lift = Genus1Lift::new(p)?;
    lift.check(m)?;
    lift.matrix(&word_decompose(m))
}

pub fn lift_genus1_word(p: u64, word: &GeneratorWord) -> Result<RingMatrix> {
    Genus1Lift::new(p)?.matrix(word)
}

pub fn trace_abs_sq(p: u64, m: &SL2Residue) -> Result<BigRational> {
    Genus1Lift::new(p)?.trace_abs_sq(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgroup::{word_decompose_with, Token::*};

    #[test]
    fn relations() {
        for p in 2..=8 {
            let lift = Genus1Lift::new(p).unwrap();
            let s4 = lift.matrix(&GeneratorWord(vec![S, S, S, S])).unwrap();
            assert_eq!(s4, RingMatrix::identity(lift.field(), p as usize), "S^4 at p = {}", p);
            let st3 = lift.matrix(&GeneratorWord(vec![S, T(1), S, T(1), S, T(1)])).unwrap();
            // S = [[0, 1], [−1, 0]], so (ST)³ = 1
            let id = RingMatrix::identity(lift.field(), p as usize);
            assert!(st3.equal_up_to_scalar(&id).map_or(false, |w| w.unit_norm), "(ST)^3 at p = {}", p);
            let ss = lift.matrix(&GeneratorWord(vec![S, SInv])).unwrap();
            assert_eq!(ss, RingMatrix::identity(lift.field(), p as usize));
            assert!(s4.is_unitary());
        }
    }

    #[test]
    fn word_independence() {
        for p in [3u64, 4, 5] {
            let lift = Genus1Lift::new(p).unwrap();
            let n = lift.modulus();
            let m = SL2Residue::new(n, 2, 1, 1, 1).unwrap();
            let a = lift.matrix(&word_decompose_with(&m, 0)).unwrap();
            let b = lift.matrix(&word_decompose_with(&m, 1)).unwrap();
            assert!(a.equal_up_to_scalar(&b).unwrap().unit_norm);
        }
    }

    #[test]
    fn projective_homomorphism() {
        for p in [2u64, 3, 4, 5, 6] {
            let lift = Genus1Lift::new(p).unwrap();
            let n = lift.modulus();
            let ms: Vec<SL2Residue> = crate::modgroup::sl2_enumerate(n, 64).unwrap().step_by(7).take(6).collect();
            for a in &ms {
                for b in &ms {
                    let lhs = lift.matrix(&word_decompose(a)).unwrap().matmul(&lift.matrix(&word_decompose(b)).unwrap()).unwrap();
                    let rhs = lift.matrix(&word_decompose(&a.mul(b))).unwrap();
                    assert!(lhs.equal_up_to_scalar(&rhs).map_or(false, |w| w.unit_norm), "p = {}", p);
                }
            }
        }
    }

    #[test]
    fn diagonal_permutes() {
        for (p, a) in [(5u64, 2u64), (7, 3), (4, 3), (6, 5), (9, 2)] {
            assert!(lemma_diag(p, a).unwrap().is_some(), "p = {}, a = {}", p, a);
        }
    }

    #[test]
    fn identity_trace() {
        let t = trace_abs_sq(5, &SL2Residue::identity(5)).unwrap();
        assert_eq!(t, BigRational::from_integer(25.into()));
        assert!(trace_abs_sq(5, &SL2Residue::identity(10)).is_err());
    }
}
