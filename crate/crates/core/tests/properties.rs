use num_complex::Complex64;
use proptest::prelude::*;

use weil::analysis::modular::{abs_sq_integer, find_primes, ModLift};
use weil::cyclo::{make_field, CycloElt, Field};
use weil::modgroup::{conj_profile, word_decompose, GeneratorWord, SL2Residue, Token};
use weil::ringmat::RingMatrix;
use weil::weilrep::{a_order, field_order, gauss_sum, trace_abs_sq, Genus1Lift};

const ORDERS: [u32; 6] = [3, 4, 8, 12, 24, 40];

fn elt(field: &Field, coeffs: &[i64]) -> CycloElt {
    coeffs
        .iter()
        .enumerate()
        .fold(CycloElt::zero(field), |acc, (k, &c)| &acc + &CycloElt::root_of_unity(field, k as i64).mul_int(c))
}

trait MulInt {
    fn mul_int(&self, c: i64) -> CycloElt;
}

impl MulInt for CycloElt {
    fn mul_int(&self, c: i64) -> CycloElt {
        self * &CycloElt::from_int(self.field(), c)
    }
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..8)
}

fn word() -> impl Strategy<Value = GeneratorWord> {
    prop::collection::vec(prop_oneof![Just(Token::S), Just(Token::SInv), (-5i64..=5).prop_map(Token::T)], 0..12)
        .prop_map(GeneratorWord)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cyclo_ring_axioms(oi in 0usize..ORDERS.len(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = make_field(ORDERS[oi]);
        let (x, y, z) = (elt(&f, &a), elt(&f, &b), elt(&f, &c));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!(x.conj().conj(), x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn cyclo_embedding_is_a_homomorphism(oi in 0usize..ORDERS.len(), a in coeffs(), b in coeffs()) {
        let f = make_field(ORDERS[oi]);
        let (x, y) = (elt(&f, &a), elt(&f, &b));
        // oracle: evaluate the integer combinations of roots directly
        let direct = |cs: &[i64]| -> Complex64 {
            cs.iter().enumerate().map(|(k, &c)| {
                Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * k as f64 / ORDERS[oi] as f64)
            }).sum()
        };
        let (ex, ey) = (direct(&a), direct(&b));
        prop_assert!((x.embed_complex(53) - ex).norm() < 1e-9);
        prop_assert!(((&x * &y).embed_complex(53) - ex * ey).norm() < 1e-9);
        prop_assert!((x.norm_sq().embed_complex(53) - ex.norm_sqr()).norm() < 1e-9);
    }

    #[test]
    fn ringmat_identities(seed in prop::collection::vec(-2i64..=2, 16 * 4)) {
        let f = make_field(8);
        let m = |k: usize| RingMatrix::from_fn(&f, 2, 2, |i, j| {
            let base = 16 * k + 4 * (2 * i + j);
            elt(&f, &seed[base..base + 4])
        });
        let (a, b, c, d) = (m(0), m(1), m(2), m(3));
        prop_assert_eq!(a.matmul(&b).unwrap().dagger(), b.dagger().matmul(&a.dagger()).unwrap());
        prop_assert_eq!(a.matmul(&b).unwrap().trace().unwrap(), b.matmul(&a).unwrap().trace().unwrap());
        let lhs = a.kron(&b).unwrap().matmul(&c.kron(&d).unwrap()).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn word_decomposition_roundtrip(n in 2u64..40, w in word()) {
        let m = w.eval(n);
        prop_assert_eq!(word_decompose(&m).eval(n), m);
    }

    #[test]
    fn trace_is_a_class_function(p in 2u64..=8, w in word(), h in word()) {
        let n = a_order(p) as u64;
        let (m, g) = (w.eval(n), h.eval(n));
        let conj = g.mul(&m).mul(&g.inverse());
        let lift = Genus1Lift::new(p).unwrap();
        prop_assert_eq!(lift.trace_abs_sq(&m).unwrap(), lift.trace_abs_sq(&conj).unwrap());
    }

    #[test]
    fn modular_engine_matches_exact(p in 2u64..=9, w in word()) {
        let n = a_order(p) as u64;
        let m = w.eval(n);
        let lifts: Vec<ModLift> = find_primes(field_order(p) as u64, 2).into_iter().map(|q| ModLift::new(p, q).unwrap()).collect();
        let exact = trace_abs_sq(p, &m).unwrap();
        let modular = abs_sq_integer(&lifts, &word_decompose(&m)).unwrap();
        prop_assert_eq!(exact, num_rational::BigRational::from_integer(modular.into()));
    }

    #[test]
    fn profile_is_conjugation_invariant(n in 1u32..=6, w in word(), h in word()) {
        let big = 1u64 << n;
        let (m, g) = (w.eval(big), h.eval(big));
        let conj = g.mul(&m).mul(&g.inverse());
        let (a, b) = (conj_profile(&m, n).unwrap(), conj_profile(&conj, n).unwrap());
        prop_assert_eq!((a.l, a.x, a.s), (b.l, b.x, b.s));
    }

    #[test]
    fn gauss_sum_matches_direct_summation(a in -6i64..=6, b in -6i64..=6, p in 1u64..=12) {
        let g = gauss_sum(a, b, p);
        // A = e^{2πi/p} (p odd) or e^{πi/p} (p even)
        let m = a_order(p) as f64;
        let direct: Complex64 = (0..a_order(p) as i64)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (a * k * k + b * k) as f64 / m))
            .sum();
        prop_assert!((g.embed_complex(53) - direct).norm() < 1e-9);
    }
}

#[test]
fn sl2_residue_rejects_bad_determinant() {
    assert!(SL2Residue::new(8, 2, 0, 0, 1).is_err());
}
