use std::sync::Arc;

use proptest::prelude::*;
use qflag_core::braid::Pbw;
use qflag_core::cartan::{CartanDatum, CartanType, RootVec, Weight};
use qflag_core::scalar::{parse_scalar, One, QField, RatFunc, Zero};
use qflag_core::uq::{Uq, UqElement};

type U = Uq<RatFunc>;
type E = UqElement<RatFunc>;

fn alg(ty: CartanType) -> Arc<U> {
    Arc::new(Uq::new(CartanDatum::new(ty), 8))
}

fn q(e: &str) -> RatFunc {
    parse_scalar(e).unwrap()
}

fn word(u: &U, w: &[(char, usize)]) -> E {
    let mut acc = u.one();
    for &(c, i) in w {
        let g = match c {
            'e' => u.e(i),
            'f' => u.f(i),
            'k' => u.k(Weight::unit(i)),
            'K' => u.k(-Weight::unit(i)),
            _ => unreachable!(),
        };
        acc = u.mul(&acc, &g).unwrap();
    }
    acc
}

/// τ(x, f_{y_1} ⋯ f_{y_n}) from property (a) and the values on generators only.
fn oracle(u: &U, x: &E, y: &[usize]) -> RatFunc {
    if y.is_empty() {
        // τ(k_λ E, 1) = δ_{E,1}
        return x.terms().filter(|(m, _)| m.e.g.is_zero()).fold(RatFunc::zero(), |a, (_, c)| a + c.clone());
    }
    let j = y[0];
    let d = u.coproduct(x).unwrap();
    let mut acc = RatFunc::zero();
    for (k, c) in d.terms() {
        let (x0, x1) = (k[0], k[1]);
        if x0.e.g != RootVec::unit(j) {
            continue;
        }
        // τ(k_λ e_j, f_j) = q^{(λ,α_j)} τ(e_j, f_j)
        let t0 = u.half.tau_simple[j].mul_q_pow(u.datum.qexp(x0.k, u.alpha(j)));
        let rest = oracle(u, &u.mono_element(&x1), &y[1..]);
        acc = acc + c.clone() * t0 * rest;
    }
    acc
}

#[test]
fn generator_values() {
    for ty in [CartanType::A1, CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        let l = Weight([1, 2]);
        let m = Weight([-1, 1]);
        assert_eq!(u.tau(&u.k(l), &u.k(m)).unwrap(), RatFunc::q_pow(-u.datum.qexp(l, m)));
        assert_eq!(u.tau(&u.one(), &u.one()).unwrap(), RatFunc::one());
        for i in 0..u.rank() {
            assert!(u.tau(&u.k(l), &u.f(i)).unwrap().is_zero());
            assert!(u.tau(&u.e(i), &u.k(l)).unwrap().is_zero());
            for j in 0..u.rank() {
                let want = if i == j {
                    let qi = u.datum.qi(i);
                    (RatFunc::q_pow(-qi) - RatFunc::q_pow(qi)).inv().unwrap()
                } else {
                    RatFunc::zero()
                };
                assert_eq!(u.tau(&u.e(i), &u.f(j)).unwrap(), want);
            }
        }
    }
}

#[test]
fn membership_is_checked() {
    let u = alg(CartanType::A2);
    assert!(u.tau(&u.f(0), &u.f(0)).is_err());
    assert!(u.tau(&u.e(0), &u.e(0)).is_err());
}

#[test]
fn matches_generator_recursion_oracle() {
    for ty in [CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        let xs: Vec<Vec<(char, usize)>> = vec![
            vec![('e', 0), ('e', 1)],
            vec![('e', 1), ('e', 0)],
            vec![('e', 0), ('k', 1), ('e', 1), ('e', 1)],
            vec![('e', 1), ('e', 0), ('e', 1)],
            vec![('e', 0), ('e', 0), ('e', 1)],
        ];
        for xw in &xs {
            let x = word(&u, xw);
            let n: Vec<usize> = xw.iter().filter(|p| p.0 == 'e').map(|p| p.1).collect();
            let mut ys = vec![n.clone()];
            let mut r = n.clone();
            r.reverse();
            ys.push(r);
            for y in ys {
                let fy = word(&u, &y.iter().map(|&i| ('f', i)).collect::<Vec<_>>());
                assert_eq!(u.tau(&x, &fy).unwrap(), oracle(&u, &x, &y), "{ty:?} {xw:?} {y:?}");
            }
        }
    }
}

#[test]
fn a2_gram_alpha1_plus_alpha2() {
    // four brute-force pairings, then invert
    let u = alg(CartanType::A2);
    let pbw = Pbw::standard(u.clone()).unwrap();
    let g = RootVec([1, 1]);
    let pg = pbw.grade(g).unwrap();
    let gram = pbw.gram(g).unwrap();
    for a in 0..2 {
        for b in 0..2 {
            let x = pbw.e_monomial(g, a).unwrap();
            // f-monomial as an explicit word combination for the oracle
            let fwords = [vec![0usize, 1], vec![1, 0]];
            let fy = pbw.f_monomial(g, b).unwrap();
            let mut want = RatFunc::zero();
            // expand f_monomial in products f_{w}: solve via internal coordinates of words
            let w0 = u.f_word(&[0, 1]).unwrap();
            let w1 = u.f_word(&[1, 0]).unwrap();
            let c0 = u.f_coords(&w0, g).unwrap();
            let c1 = u.f_coords(&w1, g).unwrap();
            let target = u.f_coords(&fy, g).unwrap();
            let m = qflag_core::linalg::Matrix::from_cols(2, &[c0, c1]);
            let coef = m.solve(&target).unwrap();
            for (c, w) in coef.iter().zip(&fwords) {
                want = want + c.clone() * oracle(&u, &x, w);
            }
            assert_eq!(gram.get(a, b), &want);
        }
    }
    assert_eq!(pg.exps.len(), 2);
    let d = pbw.dual_basis(g).unwrap();
    check_biorthogonal(&u, &d, g);
}

fn check_biorthogonal(u: &U, d: &qflag_core::pairing::DualBasis<RatFunc>, g: RootVec) {
    for (r, x) in d.x.iter().enumerate() {
        for (s, y) in d.y.iter().enumerate() {
            let t = u.tau(&u.e_vec(g, x), &u.f_vec(g, y)).unwrap();
            let want = if r == s { RatFunc::one() } else { RatFunc::zero() };
            assert_eq!(t, want, "grade {:?} ({r},{s})", g.0);
        }
    }
}

#[test]
fn dual_bases_up_to_height_four() {
    for ty in [CartanType::A1, CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        let pbw = Pbw::standard(u.clone()).unwrap();
        for d in pbw.dual_bases(4).unwrap() {
            assert_eq!(d.gram.rank(), d.len());
            check_biorthogonal(&u, &d, d.g);
        }
    }
}

#[test]
fn a1_dual_of_e() {
    let u = alg(CartanType::A1);
    let pbw = Pbw::standard(u.clone()).unwrap();
    let d = pbw.dual_basis(RootVec([1, 0])).unwrap();
    assert_eq!(u.f_vec(RootVec([1, 0]), &d.y[0]), u.f(0).scale(&q("q^(-1) - q")));
    let d0 = pbw.dual_basis(RootVec::ZERO).unwrap();
    assert_eq!(d0.x, vec![vec![RatFunc::one()]]);
    assert_eq!(d0.y, vec![vec![RatFunc::one()]]);
}

#[test]
fn distinct_weights_are_orthogonal() {
    let u = alg(CartanType::B2);
    let grades: Vec<RootVec> = (0..=4).flat_map(|h| u.datum.grades_of_height(h)).collect();
    for &a in &grades {
        for &b in &grades {
            if a == b {
                continue;
            }
            for i in 0..u.half.dim(a).unwrap() {
                for j in 0..u.half.dim(b).unwrap() {
                    let mut x = vec![RatFunc::zero(); u.half.dim(a).unwrap()];
                    x[i] = RatFunc::one();
                    let mut y = vec![RatFunc::zero(); u.half.dim(b).unwrap()];
                    y[j] = RatFunc::one();
                    assert!(u.tau(&u.e_vec(a, &x), &u.f_vec(b, &y)).unwrap().is_zero());
                }
            }
        }
    }
}

fn arb_b(plus: bool) -> impl Strategy<Value = Vec<(char, usize)>> {
    let c = if plus { 'e' } else { 'f' };
    prop::collection::vec((prop::sample::select(vec![c, c, 'k', 'K']), 0usize..2), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// τ(x, y₁y₂) = (τ⊗τ)(Δx, y₁⊗y₂) and τ(x₁x₂, y) = (τ⊗τ)(x₂⊗x₁, Δy).
    #[test]
    fn defining_properties(x1 in arb_b(true), x2 in arb_b(true), y1 in arb_b(false), y2 in arb_b(false)) {
        let u = alg(CartanType::A2);
        let (x1, x2, y1, y2) = (word(&u, &x1), word(&u, &x2), word(&u, &y1), word(&u, &y2));
        let x = u.mul(&x1, &x2).unwrap();
        let y = u.mul(&y1, &y2).unwrap();
        let lhs = u.tau(&x, &y).unwrap();
        let mut a = RatFunc::zero();
        for (k, c) in u.coproduct(&x).unwrap().terms() {
            let t0 = u.tau(&u.mono_element(&k[0]), &y1).unwrap();
            let t1 = u.tau(&u.mono_element(&k[1]), &y2).unwrap();
            a = a + c.clone() * t0 * t1;
        }
        prop_assert_eq!(&lhs, &a);
        let mut b = RatFunc::zero();
        for (k, c) in u.coproduct(&y).unwrap().terms() {
            let t0 = u.tau(&x2, &u.mono_element(&k[0])).unwrap();
            let t1 = u.tau(&x1, &u.mono_element(&k[1])).unwrap();
            b = b + c.clone() * t0 * t1;
        }
        prop_assert_eq!(&lhs, &b);
    }

    #[test]
    fn cartan_factor(l0 in -2i64..3, l1 in -2i64..3, m0 in -2i64..3, m1 in -2i64..3, idx in 0usize..3) {
        let u = alg(CartanType::B2);
        let g = RootVec([1, 2]);
        let n = u.half.dim(g).unwrap();
        let mut v = vec![RatFunc::zero(); n];
        v[idx % n] = RatFunc::one();
        let w: Vec<RatFunc> = (0..n).map(|i| RatFunc::from_int(i as i64 + 1)).collect();
        let x = u.e_vec(g, &v);
        let y = u.f_vec(g, &w);
        let (l, m) = (Weight([l0, l1]), Weight([m0, m1]));
        let xk = u.mul(&x, &u.k(l)).unwrap();
        let yk = u.mul(&y, &u.k(m)).unwrap();
        let want = u.tau(&x, &y).unwrap().mul_q_pow(-u.datum.qexp(l, m));
        prop_assert_eq!(u.tau(&xk, &yk).unwrap(), want);
    }
}
