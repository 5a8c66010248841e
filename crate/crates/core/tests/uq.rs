use proptest::prelude::*;
use qflag_core::cartan::{CartanDatum, CartanType, RootVec, Weight};
use qflag_core::scalar::{parse_scalar, QExp, QField, RatFunc, Zero};
use qflag_core::uq::{SubalgebraTag, Tensor, Uq, UqElement};

type U = Uq<RatFunc>;
type E = UqElement<RatFunc>;

fn alg(ty: CartanType) -> U {
    Uq::new(CartanDatum::new(ty), 8)
}

fn s(x: &str) -> RatFunc {
    parse_scalar(x).unwrap()
}

/// Product of generator symbols `e1`, `f2`, `K1` (= k_{α_1}), `k1` (= k_{ϖ_1}).
fn word(u: &U, w: &str) -> E {
    let mut acc = u.one();
    for t in w.split_whitespace() {
        let i: usize = t[1..].parse::<usize>().unwrap() - 1;
        let g = match &t[..1] {
            "e" => u.e(i),
            "f" => u.f(i),
            "K" => u.ki(i),
            "k" => u.k(Weight::unit(i)),
            "J" => u.k(-u.alpha(i)),
            _ => panic!("bad symbol {t}"),
        };
        acc = u.mul(&acc, &g).unwrap();
    }
    acc
}

fn gens(u: &U) -> Vec<E> {
    let mut g = Vec::new();
    for i in 0..u.rank() {
        g.push(u.e(i));
        g.push(u.f(i));
        g.push(u.k(Weight::unit(i)));
    }
    g
}

#[test]
fn a1_commutator() {
    let u = alg(CartanType::A1);
    let lhs = u.commutator(&u.e(0), &u.f(0)).unwrap();
    let c = s("1/(q - q^(-1))");
    let rhs = u.ki(0).sub(&u.k(-u.alpha(0))).unwrap().scale(&c);
    assert_eq!(lhs, rhs);
}

#[test]
fn k_multiplies_additively() {
    let u = alg(CartanType::A2);
    let a = Weight([1, -2]);
    let b = Weight([3, 1]);
    assert_eq!(u.mul(&u.k(a), &u.k(b)).unwrap(), u.k(a + b));
    assert_eq!(u.mul(&u.k(a), &u.k(-a)).unwrap(), u.one());
}

#[test]
fn commutators_all_types() {
    for ty in [CartanType::A1, CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        for i in 0..u.rank() {
            for j in 0..u.rank() {
                let lhs = u.commutator(&u.e(i), &u.f(j)).unwrap();
                if i == j {
                    let rhs = u.ki(i).sub(&u.k(-u.alpha(i))).unwrap().scale(&u.c[i]);
                    assert_eq!(lhs, rhs);
                } else {
                    assert!(lhs.is_zero(), "{ty:?} [e{i}, f{j}]");
                }
            }
        }
    }
}

#[test]
fn k_conjugation() {
    let u = alg(CartanType::B2);
    let l = Weight([1, -1]);
    for i in 0..2 {
        let lhs = u.mul_all(&[&u.k(l), &u.e(i), &u.k(-l)]).unwrap();
        assert_eq!(lhs, u.e(i).scale(&RatFunc::q_pow(u.datum.qexp(l, u.alpha(i)))));
        let lhs = u.mul_all(&[&u.k(l), &u.f(i), &u.k(-l)]).unwrap();
        assert_eq!(lhs, u.f(i).scale(&RatFunc::q_pow(-u.datum.qexp(l, u.alpha(i)))));
    }
}

#[test]
fn serre_relations_vanish() {
    for ty in [CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        for (i, j) in [(0, 1), (1, 0)] {
            let (se, sf) = u.serre(i, j).unwrap();
            assert!(se.is_zero(), "{ty:?} e-Serre ({i},{j})");
            assert!(sf.is_zero(), "{ty:?} f-Serre ({i},{j})");
        }
    }
}

#[test]
fn a2_serre_expanded() {
    let u = alg(CartanType::A2);
    let a = word(&u, "e1 e1 e2");
    let b = word(&u, "e1 e2 e1").scale(&s("q + q^(-1)"));
    let c = word(&u, "e2 e1 e1");
    assert!(a.sub(&b).unwrap().add(&c).unwrap().is_zero());
    // the non-Serre combination is nonzero
    assert!(!a.sub(&word(&u, "e1 e2 e1")).unwrap().add(&c).unwrap().is_zero());
}

#[test]
fn half_dimensions_are_kostant_counts() {
    for ty in [CartanType::A1, CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        for h in 0..=6 {
            for g in u.datum.grades_of_height(h) {
                assert_eq!(u.half.dim(g).unwrap() as u64, u.datum.kostant(g), "{ty:?} {:?}", g.0);
            }
        }
    }
}

#[test]
fn word_pairing_is_symmetric() {
    for ty in [CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        let g = RootVec([2, 2]);
        let words = all_words(g);
        for x in &words {
            for y in &words {
                assert_eq!(u.half.word_pairing(x, y).unwrap(), u.half.word_pairing(y, x).unwrap());
            }
        }
    }
}

#[test]
fn simple_pairing_value() {
    let u = alg(CartanType::B2);
    assert_eq!(u.half.word_pairing(&[0], &[0]).unwrap(), s("1/(q^(-2) - q^2)"));
    assert_eq!(u.half.word_pairing(&[1], &[1]).unwrap(), s("1/(q^(-1) - q)"));
}

fn all_words(g: RootVec) -> Vec<Vec<u8>> {
    if g.is_zero() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..2 {
        if g.0[i] > 0 {
            for mut w in all_words(g - RootVec::unit(i)) {
                w.insert(0, i as u8);
                out.push(w);
            }
        }
    }
    out
}

#[test]
fn mixed_datum_rejected() {
    let a = alg(CartanType::A2);
    let b = alg(CartanType::B2);
    assert!(a.mul(&a.e(0), &b.e(0)).is_err());
    assert!(a.e(0).add(&b.e(0)).is_err());
}

#[test]
fn coproduct_of_generators() {
    let u = alg(CartanType::A2);
    let l = Weight([2, -1]);
    assert_eq!(u.coproduct(&u.k(l)).unwrap(), Tensor::pure(&[&u.k(l), &u.k(l)]).unwrap());
    for i in 0..2 {
        let ki_inv = u.k(-u.alpha(i));
        let want =
            Tensor::pure(&[&u.f(i), &ki_inv]).unwrap().add(&Tensor::pure(&[&u.one(), &u.f(i)]).unwrap()).unwrap();
        assert_eq!(u.coproduct(&u.f(i)).unwrap(), want);
        let want =
            Tensor::pure(&[&u.e(i), &u.one()]).unwrap().add(&Tensor::pure(&[&u.ki(i), &u.e(i)]).unwrap()).unwrap();
        assert_eq!(u.coproduct(&u.e(i)).unwrap(), want);
        assert!(u.counit(&u.e(i)).is_zero());
        assert!(u.counit(&u.f(i)).is_zero());
    }
    assert_eq!(u.counit(&u.k(l)), RatFunc::from_int(1));
}

fn hopf_checks(u: &U, x: &E) {
    let d = u.coproduct(x).unwrap();
    // coassociativity
    assert_eq!(u.coproduct_at(&d, 0).unwrap(), u.coproduct_at(&d, 1).unwrap(), "coassoc {x:?}");
    // counit
    let id = |y: &E| Ok(y.clone());
    let eps = |y: &E| Ok(u.scalar(u.counit(y)));
    assert_eq!(&u.contract(&d, &[&eps, &id]).unwrap(), x);
    assert_eq!(&u.contract(&d, &[&id, &eps]).unwrap(), x);
    // antipode
    assert_eq!(u.antipode_axiom(x).unwrap(), u.scalar(u.counit(x)), "antipode {x:?}");
    let sr = |y: &E| Ok(y.clone());
    let sl = |y: &E| u.antipode(y);
    assert_eq!(u.contract(&d, &[&sr, &sl]).unwrap(), u.scalar(u.counit(x)));
    // S S^{-1} = id
    assert_eq!(&u.antipode(&u.antipode_inv(x).unwrap()).unwrap(), x);
    assert_eq!(&u.antipode_inv(&u.antipode(x).unwrap()).unwrap(), x);
}

#[test]
fn hopf_axioms_on_generators() {
    for ty in [CartanType::A1, CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        for g in gens(&u) {
            hopf_checks(&u, &g);
        }
    }
}

#[test]
fn hopf_axioms_on_words() {
    let u = alg(CartanType::B2);
    for w in ["e1 f2 e2 f1", "f1 f2 f2 k1", "e1 e2 e2", "f2 e2 e2 f2", "e1 k2 f1 e1"] {
        hopf_checks(&u, &word(&u, w));
    }
    let u = alg(CartanType::A2);
    for w in ["e1 e2 e1 f2", "f1 f2 f1 f2", "e2 f1 k1 e1"] {
        hopf_checks(&u, &word(&u, w));
    }
}

#[test]
fn coproduct_and_antipode_are_multiplicative() {
    let u = alg(CartanType::A2);
    let pairs = [("e1 f2", "e2 f1 e1"), ("f1 f1", "e1 k2"), ("e2 e1", "f2 f1")];
    for (a, b) in pairs {
        let (a, b) = (word(&u, a), word(&u, b));
        let ab = u.mul(&a, &b).unwrap();
        let lhs = u.coproduct(&ab).unwrap();
        let rhs = u.tensor_mul(&u.coproduct(&a).unwrap(), &u.coproduct(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let sab = u.antipode(&ab).unwrap();
        let sbsa = u.mul(&u.antipode(&b).unwrap(), &u.antipode(&a).unwrap()).unwrap();
        assert_eq!(sab, sbsa);
        assert_eq!(u.counit(&ab), u.counit(&a) * u.counit(&b));
    }
}

#[test]
fn adjoint_examples() {
    let u = alg(CartanType::A2);
    let l = Weight([1, 2]);
    for i in 0..2 {
        let want = u.e(i).scale(&RatFunc::q_pow(u.datum.qexp(l, u.alpha(i))));
        assert_eq!(u.adjoint(&u.k(l), &u.e(i)).unwrap(), want);
    }
    let x = word(&u, "e1 f2 e2");
    assert_eq!(u.adjoint(&x, &u.one()).unwrap(), u.scalar(u.counit(&x)));
    // ad(uu') = ad(u) ad(u')
    let a = word(&u, "e1");
    let b = word(&u, "f2 k1");
    let v = word(&u, "f1 e2");
    let lhs = u.adjoint(&u.mul(&a, &b).unwrap(), &v).unwrap();
    let rhs = u.adjoint(&a, &u.adjoint(&b, &v).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    // ad(k_λ) on a weight vector
    let y = word(&u, "f1 f2 e1");
    let g = u.weight_of(&y).unwrap();
    assert_eq!(u.adjoint(&u.k(l), &y).unwrap(), y.scale(&RatFunc::q_pow(u.datum.qexp(l, g))));
}

#[test]
fn a1_adjoint_by_hand() {
    // ad(e)(f) = e f S(1) + k f S(e) = e f − k f k⁻¹ e = e f − q^{-2} f e
    let u = alg(CartanType::A1);
    let ef = word(&u, "e1 f1");
    let fe = word(&u, "f1 e1");
    let want = ef.sub(&fe.scale(&s("q^(-2)"))).unwrap();
    assert_eq!(u.adjoint(&u.e(0), &u.f(0)).unwrap(), want);
}

#[test]
fn decompose_examples() {
    let u = alg(CartanType::A1);
    let w = Weight([1, 0]);
    let p = u.decompose_mod2(&u.k(w)).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p[&w], u.one());
    let x = u.mul(&u.e(0), &u.k(Weight([2, 0]))).unwrap();
    let p = u.decompose_mod2(&x).unwrap();
    assert_eq!(p.keys().copied().collect::<Vec<_>>(), vec![Weight::ZERO]);
    let p = u.decompose_mod2(&u.f(0)).unwrap();
    let r = u.datum.mod2_class(-u.alpha(0));
    assert_eq!(p.keys().copied().collect::<Vec<_>>(), vec![r]);
    let comp = &p[&r];
    assert!(u.is_in(SubalgebraTag::Even, comp));
    assert_eq!(u.mul(comp, &u.k(r)).unwrap(), u.f(0));
}

#[test]
fn decompose_reconstructs() {
    let u = alg(CartanType::B2);
    let x = word(&u, "f1 k2 e2 f2").add(&word(&u, "k1 e1")).unwrap().add(&word(&u, "f1 f2 k1 k1")).unwrap();
    let parts = u.decompose_mod2(&x).unwrap();
    assert!(parts.len() > 1);
    let mut acc = u.zero();
    for (r, c) in &parts {
        assert!(u.is_in(SubalgebraTag::Even, c));
        acc = acc.add(&u.mul(c, &u.k(*r)).unwrap()).unwrap();
    }
    assert_eq!(acc, x);
}

#[test]
fn subalgebra_tags() {
    let u = alg(CartanType::A2);
    let fk = word(&u, "f1 K1 f2 K2");
    assert!(u.is_in(SubalgebraTag::NMinusTilde, &fk));
    assert!(!u.is_in(SubalgebraTag::NMinus, &fk));
    assert!(u.is_in(SubalgebraTag::BMinus, &fk));
    assert!(u.is_in(SubalgebraTag::Even, &fk));
    assert!(u.is_in(SubalgebraTag::HEven, &u.k(Weight([2, -4]))));
    assert!(!u.is_in(SubalgebraTag::HEven, &u.k(Weight([1, 0]))));
    assert!(u.is_in(SubalgebraTag::NPlus, &word(&u, "e1 e2")));
    assert!(u.is_in(SubalgebraTag::BPlus, &word(&u, "e1 k2")));
    assert!(!u.is_in(SubalgebraTag::Even, &u.f(0)));
}

#[test]
fn ad_stability() {
    for ty in [CartanType::A1, CartanType::A2] {
        let u = alg(ty);
        for l in u.datum.transversal() {
            let r = u.check_ad_stability(l, 1).unwrap();
            assert!(r.passed(), "{ty:?} {:?}: {:?}", l, r.failures);
            assert!(r.checked > 0);
        }
    }
    let u = alg(CartanType::A1);
    let v = u.mul(&u.e(0), &u.k(Weight([1, 0]))).unwrap();
    let p = u.decompose_mod2(&u.adjoint(&u.f(0), &v).unwrap()).unwrap();
    assert!(p.keys().all(|k| *k == Weight([1, 0])));
}

fn arb_word(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!["e1", "e2", "f1", "f2", "k1", "k2", "J1"]), 0..=max)
        .prop_map(|v| v.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn associativity(a in arb_word(3), b in arb_word(3), c in arb_word(2)) {
        let u = alg(CartanType::B2);
        let (x, y, z) = (word(&u, &a), word(&u, &b), word(&u, &c));
        let l = u.mul(&u.mul(&x, &y).unwrap(), &z).unwrap();
        let r = u.mul(&x, &u.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn coassociativity_random(a in arb_word(4)) {
        let u = alg(CartanType::A2);
        let x = word(&u, &a);
        let d = u.coproduct(&x).unwrap();
        prop_assert_eq!(u.coproduct_at(&d, 0).unwrap(), u.coproduct_at(&d, 1).unwrap());
        prop_assert_eq!(u.antipode_axiom(&x).unwrap(), u.scalar(u.counit(&x)));
    }

    #[test]
    fn weight_grading_under_ad(a in arb_word(4), l0 in -2i64..3, l1 in -2i64..3) {
        let u = alg(CartanType::A2);
        let x = word(&u, &a);
        let l = Weight([l0, l1]);
        if let Some(g) = u.weight_of(&x) {
            let want = x.scale(&RatFunc::q_pow(u.datum.qexp(l, g)));
            prop_assert_eq!(u.adjoint(&u.k(l), &x).unwrap(), want);
        }
    }
}

#[test]
fn q_exponents_are_fractional_for_a2() {
    let u = alg(CartanType::A2);
    // (ϖ_1, ϖ_1) = 2/3
    assert_eq!(u.datum.qexp(Weight([1, 0]), Weight([1, 0])), QExp::ratio(2, 3).unwrap());
}

#[test]
fn parsed_elements() {
    let u = alg(CartanType::A2);
    assert_eq!(u.parse("e1*f2").unwrap(), word(&u, "e1 f2"));
    assert_eq!(u.parse("K1 - k[1,0]").unwrap(), word(&u, "K1").sub(&word(&u, "k1")).unwrap());
    let x = u.parse("(q + 1)*e2*e2/2").unwrap();
    assert_eq!(x, word(&u, "e2 e2").scale(&s("(q+1)/2")));
    for bad in ["e3", "g1", "k", "k[1]", "e1["] {
        assert!(u.parse(bad).is_err(), "{bad}");
    }
}
