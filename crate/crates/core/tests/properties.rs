use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

use bethe_qpoly::bethe::poly_admissible;
use bethe_qpoly::json::{qp_from_json, qp_to_json, scalar_from_json, scalar_to_json};
use bethe_qpoly::qpoly::identities::same_function;
use bethe_qpoly::qpoly::{top_part, wronskian, QuasiPolynomial};
use bethe_qpoly::random;
use bethe_qpoly::reconstruct::{bezout, discrete_antiderivative};
use bethe_qpoly::{Field, Scalar};

fn fields() -> Vec<Field> {
    vec![Field::generic(1), Field::generic(2), Field::cyclotomic(6, 1).unwrap(), Field::cyclotomic(12, 2).unwrap()]
}

fn field_strategy() -> impl Strategy<Value = Field> {
    (0..4usize).prop_map(|i| fields()[i].clone())
}

fn scalar_with_logs(r: &mut rand_chacha::ChaCha8Rng, f: &Field) -> Scalar {
    let c = random::scalar(r, f);
    if r.gen_bool(0.3) {
        c.try_div(&f.log_q()).unwrap()
    } else {
        c
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(f in field_strategy(), seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let (a, b, c) = (scalar_with_logs(&mut r, &f), scalar_with_logs(&mut r, &f), scalar_with_logs(&mut r, &f));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Scalar::zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn canonical_form_is_idempotent(f in field_strategy(), seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = &scalar_with_logs(&mut r, &f) + &scalar_with_logs(&mut r, &f).try_div(&random::scalar(&mut r, &f)).unwrap();
        let s = a.canonical();
        let back = f.parse(&s).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.canonical(), s);
        prop_assert_eq!(scalar_from_json(&f, &scalar_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn shift_is_a_ring_homomorphism(f in field_strategy(), seed in any::<u64>(), k in -2i64..=2, l in -2i64..=2) {
        let mut r = random::rng(seed);
        let a = random::with_logs(&mut r, &f, 3, 2);
        let b = random::with_logs(&mut r, &f, 3, 2);
        prop_assert!(same_function(&a.mul(&b).shift(&f, k), &a.shift(&f, k).mul(&b.shift(&f, k))));
        prop_assert!(same_function(&a.shift(&f, k).shift(&f, l), &a.shift(&f, k + l)));
        let c = QuasiPolynomial::new(a.alpha(), random::with_logs(&mut r, &f, 3, 2).body().clone());
        let c = c.with_exponent(a.alpha() - Rational64::from_integer(1)).unwrap();
        let a = a.with_exponent(c.alpha()).unwrap();
        prop_assert!(same_function(&a.add(&c).unwrap().shift(&f, k), &a.shift(&f, k).add(&c.shift(&f, k)).unwrap()));
    }

    #[test]
    fn wronskian_antisymmetric_and_log_free(f in field_strategy(), seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = random::log_free(&mut r, &f, 3);
        let b = random::log_free(&mut r, &f, 3);
        let w = wronskian(&f, &[a.clone(), b.clone()]);
        prop_assert!(same_function(&w, &wronskian(&f, &[b.clone(), a.clone()]).neg()));
        prop_assert!(w.is_log_free());
        prop_assert!(wronskian(&f, &[a.clone(), a]).is_zero());
        let c = random::with_logs(&mut r, &f, 2, 2);
        prop_assert!(same_function(&wronskian(&f, &[b.clone(), c.clone()]), &wronskian(&f, &[c, b]).neg()));
    }

    #[test]
    fn antiderivative_contract(f in field_strategy(), seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let g = random::with_logs(&mut r, &f, 3, 2);
        let i = discrete_antiderivative(&f, &g).unwrap();
        prop_assert!(same_function(&i.sub(&i.shift(&f, -1)).unwrap(), &g));
    }

    #[test]
    fn bezout_identity(f in field_strategy(), seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let p = loop {
            let d = r.gen_range(0..=4);
            let p = random::poly(&mut r, &f, d);
            if poly_admissible(&f, &p) {
                break p;
            }
        };
        let y = QuasiPolynomial::log_free(random::exponent(&mut r, &f), p);
        let bz = bezout(&f, &y).unwrap();
        let lhs = y.mul(&bz.a).add(&y.shift(&f, -1).mul(&bz.b)).unwrap();
        prop_assert!(same_function(&lhs, &QuasiPolynomial::monomial(Rational64::from_integer(0))));
    }

    #[test]
    fn json_round_trip(f in field_strategy(), seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = random::with_logs(&mut r, &f, 4, 2);
        let v = qp_to_json(&a);
        let back = qp_from_json(&f, &v).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(qp_to_json(&back), v);
    }

    #[test]
    fn top_part_is_multiplicative(f in field_strategy(), seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = random::with_logs(&mut r, &f, 3, 2);
        let b = random::with_logs(&mut r, &f, 3, 2);
        let lhs = top_part(&a.mul(&b)).unwrap();
        let rhs = top_part(&a).unwrap().mul(&top_part(&b).unwrap());
        prop_assert!(same_function(&lhs, &rhs));
    }
}
