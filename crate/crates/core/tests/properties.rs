use num_complex::Complex64 as C64;
use proptest::prelude::*;

use qdirac::band::BlockBandOperator;
use qdirac::basis::TruncatedSpace;
use qdirac::halfint::HalfInt;
use qdirac::triple::{build_triple, QuasiSpectralTriple};

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn triple(n2: i32, extra: i32) -> QuasiSpectralTriple {
    build_triple(h(n2), h(n2 + 2 * extra), 1.0, 0.5).unwrap()
}

/// 0 = πA, 1 = πB, 2 = πB*, 3 = D, 4 = γ
fn letter(t: &QuasiSpectralTriple, k: u8) -> &BlockBandOperator {
    match k {
        0 => &t.gens.pi_a,
        1 => &t.gens.pi_b,
        2 => &t.gens.pi_bstar,
        3 => &t.dirac,
        _ => &t.gamma,
    }
}

fn word(t: &QuasiSpectralTriple, w: &[u8], c: (f64, f64)) -> BlockBandOperator {
    let mut op = letter(t, w[0]).clone();
    for &k in &w[1..] {
        op = op.compose(letter(t, k)).unwrap();
    }
    op.scale(C64::new(c.0, c.1))
}

fn arb_word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..5, 1..3)
}

fn arb_coeff() -> impl Strategy<Value = (f64, f64)> {
    (-2.0..2.0f64, -2.0..2.0f64)
}

fn max_diff(a: &BlockBandOperator, b: &BlockBandOperator) -> f64 {
    a.max_abs_diff_valid(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn halfint_display_parse_round_trip(t in -10_000i32..10_000) {
        let x = h(t);
        prop_assert_eq!(x.to_string().parse::<HalfInt>().unwrap(), x);
        prop_assert_eq!(format!("{}", x.to_f64()).parse::<HalfInt>().unwrap(), x);
    }

    #[test]
    fn index_round_trip(n2 in 0i32..8, extra in 0i32..6) {
        let s = TruncatedSpace::new(h(n2), h(n2 + 2 * extra)).unwrap();
        let mut expected = 0usize;
        for v in s.basis() {
            let k = s.index_of(&v).unwrap();
            prop_assert_eq!(k, expected);
            prop_assert_eq!(s.basis_vector(k).unwrap(), v);
            expected += 1;
        }
        prop_assert_eq!(expected, s.dim());
    }

    #[test]
    fn composition_is_associative(n2 in 0i32..5, a in arb_word(), b in arb_word(), c in arb_word(), k in arb_coeff()) {
        let t = triple(n2, 14);
        let (a, b, c) = (word(&t, &a, k), word(&t, &b, (1.0, 0.0)), word(&t, &c, (0.5, -1.0)));
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(max_diff(&left, &right) < 1e-9);
    }

    #[test]
    fn adjoint_reverses_products(n2 in 0i32..5, a in arb_word(), b in arb_word(), k in arb_coeff()) {
        let t = triple(n2, 12);
        let (a, b) = (word(&t, &a, k), word(&t, &b, (0.0, 1.0)));
        let lhs = a.compose(&b).unwrap().adjoint();
        let rhs = b.adjoint().compose(&a.adjoint()).unwrap();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-9);
        prop_assert!(max_diff(&a.adjoint().adjoint(), &a) == 0.0);
    }

    #[test]
    fn apply_matches_dense(n2 in 0i32..4, a in arb_word(), k in arb_coeff(), seed in prop::collection::vec(-1.0..1.0f64, 64)) {
        let t = triple(n2, 4);
        let op = word(&t, &a, k);
        let dim = t.space.dim();
        let v: Vec<C64> = (0..dim).map(|i| C64::new(seed[i % 64], seed[(i * 7 + 3) % 64])).collect();
        let got = op.apply(&v).unwrap();
        let dense = op.to_dense() * nalgebra::DVector::from_vec(v);
        for (x, y) in got.iter().zip(dense.iter()) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn valid_sectors_agree_with_larger_truncation(n2 in 0i32..5, a in arb_word(), b in arb_word()) {
        let small = triple(n2, 10);
        let large = triple(n2, 20);
        let (s, l) = (
            word(&small, &a, (1.0, 0.0)).compose(&word(&small, &b, (1.0, 0.0))).unwrap(),
            word(&large, &a, (1.0, 0.0)).compose(&word(&large, &b, (1.0, 0.0))).unwrap(),
        );
        for sector in s.valid_sectors() {
            for col in small.space.enumerate_sector(sector).unwrap() {
                let mut cs = s.column(&col);
                let mut cl = l.column(&col);
                cs.retain(|(_, v)| v.norm() > 0.0);
                cl.retain(|(_, v)| v.norm() > 0.0);
                prop_assert_eq!(cs.len(), cl.len());
                for ((r1, v1), (r2, v2)) in cs.iter().zip(&cl) {
                    prop_assert_eq!(r1, r2);
                    prop_assert!((v1 - v2).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn real_structure_is_antiunitary(n2 in 0i32..6, seed in prop::collection::vec(-1.0..1.0f64, 64), c in arb_coeff()) {
        let t = triple(n2, 3);
        let dim = t.space.dim();
        let v: Vec<C64> = (0..dim).map(|i| C64::new(seed[i % 64], seed[(i * 5 + 1) % 64])).collect();
        let jv = t.j.apply(&v);
        let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>();
        prop_assert!((norm(&jv) - norm(&v)).abs() < 1e-12);
        let c = C64::new(c.0, c.1);
        let cv: Vec<C64> = v.iter().map(|z| c * z).collect();
        for (x, y) in t.j.apply(&cv).iter().zip(&jv) {
            prop_assert!((x - c.conj() * y).norm() < 1e-12);
        }
    }
}
