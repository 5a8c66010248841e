use std::collections::BTreeMap;
use std::sync::Arc;

use qflag_core::cartan::{CartanDatum, CartanType, Weight};
use qflag_core::modules::{unit, CartanProjection, IrreducibleModule, ModuleCache};
use qflag_core::scalar::{qfact, qint, QExp, QField, RatFunc, Zero};
use qflag_core::uq::Uq;

type U = Uq<RatFunc>;

fn alg(ty: CartanType) -> Arc<U> {
    Arc::new(Uq::new(CartanDatum::new(ty), 10))
}

fn build(u: &Arc<U>, nu: [i64; 2]) -> IrreducibleModule<RatFunc> {
    IrreducibleModule::build(u.clone(), Weight(nu), 64).unwrap()
}

/// Kostant multiplicity formula: m(μ) = Σ_w sgn(w) P(w(ν+ρ) − (μ+ρ)).
fn kostant_multiplicity(d: &CartanDatum, nu: Weight, mu: Weight) -> i64 {
    let rho = d.rho();
    let mut seen: BTreeMap<Weight, i64> = BTreeMap::new();
    let mut stack = vec![(nu + rho, 1i64)];
    while let Some((w, s)) = stack.pop() {
        if seen.contains_key(&w) {
            continue;
        }
        seen.insert(w, s);
        for i in 0..d.rank {
            stack.push((d.reflect(i, w), -s));
        }
    }
    let mut total = 0;
    for (w, s) in seen {
        if let Some(g) = d.weight_to_root(w - (mu + rho)) {
            if g.is_nonneg() {
                total += s * d.kostant(g) as i64;
            }
        }
    }
    total
}

fn weights_in_range(ty: CartanType) -> Vec<[i64; 2]> {
    let max = if ty == CartanType::B2 { 1 } else { 2 };
    let mut out = Vec::new();
    for a in 0..=max {
        for b in 0..=(if ty == CartanType::A1 { 0 } else { max }) {
            out.push([a, b]);
        }
    }
    out
}

#[test]
fn weyl_dimensions_characters_and_relations() {
    for ty in [CartanType::A1, CartanType::A2, CartanType::B2] {
        let u = alg(ty);
        for nu in weights_in_range(ty) {
            let m = build(&u, nu);
            let nu = Weight(nu);
            assert_eq!(m.dim() as u64, u.datum.weyl_dim(nu));
            let mut mult: BTreeMap<Weight, i64> = BTreeMap::new();
            for w in &m.rep.weights {
                *mult.entry(*w).or_default() += 1;
            }
            for (w, k) in &mult {
                assert_eq!(*k, kostant_multiplicity(&u.datum, nu, *w), "{ty:?} {nu:?} at {w:?}");
            }
            assert_eq!(m.rep.weight_indices(nu).len(), 1);
            for i in 0..u.rank() {
                assert!(m.rep.e[i].apply(&m.highest()).iter().all(|x| x.is_zero()));
            }
            let bad = m.rep.check_relations().unwrap();
            assert!(bad.is_empty(), "{ty:?} {nu:?}: {bad:?}");
        }
    }
}

#[test]
fn a1_small_modules() {
    let u = alg(CartanType::A1);
    let v = build(&u, [1, 0]);
    assert_eq!(v.dim(), 2);
    assert_eq!(v.rep.weights, vec![Weight([1, 0]), Weight([-1, 0])]);
    let v2 = build(&u, [2, 0]);
    assert_eq!(v2.dim(), 3);
    // basis b_n = f^n v, so f^{(n)} v = b_n / [n]!
    let d = QExp::int(1);
    let q1: RatFunc = qint(1, d);
    let q2: RatFunc = qint(2, d);
    let div = |n: u32| qfact::<RatFunc>(n, d).inv().unwrap();
    // f · f^{(0)} v = [1] f^{(1)} v and f · f^{(1)} v = [2] f^{(2)} v
    let fb = |c: usize| v2.rep.f[0].apply(&unit(3, c));
    assert_eq!(fb(0)[1].clone() * div(0) / div(1), q1);
    assert_eq!(fb(1)[2].clone() * div(1) / div(2), q2);
    // e f^n v = [n][ν − n + 1] f^{n−1} v
    assert_eq!(v2.rep.e[0].get(0, 1), &q2);
    assert_eq!(v2.rep.e[0].get(1, 2), &(q2.clone() * q1));
}

#[test]
fn a2_vector_representation() {
    let u = alg(CartanType::A2);
    let m = build(&u, [1, 0]);
    assert_eq!(m.dim(), 3);
    let w1 = Weight([1, 0]);
    let a1 = u.alpha(0);
    let a2 = u.alpha(1);
    assert_eq!(m.rep.weights, vec![w1, w1 - a1, w1 - a1 - a2]);
}

#[test]
fn non_dominant_and_cap() {
    let u = alg(CartanType::A2);
    assert!(IrreducibleModule::build(u.clone(), Weight([-1, 0]), 64).is_err());
    assert!(matches!(IrreducibleModule::build(u.clone(), Weight([3, 3]), 10), Err(qflag_core::Error::Capacity(_))));
}

#[test]
fn singular_vectors_in_tensors() {
    let u = alg(CartanType::A1);
    let v = build(&u, [1, 0]);
    let t = v.rep.tensor(&v.rep);
    let top = t.singular_vectors(Weight([2, 0]));
    assert_eq!(top, vec![unit(4, 0)]);
    assert_eq!(t.singular_vectors(Weight([0, 0])).len(), 1);
    let u = alg(CartanType::A2);
    let a = build(&u, [1, 0]);
    let b = build(&u, [0, 1]);
    let t = a.rep.tensor(&b.rep);
    assert_eq!(t.singular_vectors(Weight::ZERO).len(), 1);
}

fn check_projection(u: &Arc<U>, a: [i64; 2], b: [i64; 2]) {
    let ma = build(u, a);
    let mb = build(u, b);
    let mt = build(u, [a[0] + b[0], a[1] + b[1]]);
    let p = CartanProjection::build(&ma, &mb, &mt).unwrap();
    assert_eq!(p.top_dim + p.complement_dim, ma.dim() * mb.dim());
    let t = ma.rep.tensor(&mb.rep);
    assert_eq!(p.apply(&unit(t.dim(), 0)), mt.highest());
    for i in 0..u.rank() {
        assert_eq!(p.matrix.mul(&t.e[i]), mt.rep.e[i].mul(&p.matrix), "e{i} {a:?} {b:?}");
        assert_eq!(p.matrix.mul(&t.f[i]), mt.rep.f[i].mul(&p.matrix), "f{i} {a:?} {b:?}");
        let w = u.datum.fundamental(i);
        assert_eq!(p.matrix.mul(&t.k_matrix(w)), mt.rep.k_matrix(w).mul(&p.matrix));
    }
}

#[test]
fn projection_is_equivariant() {
    let u = alg(CartanType::A1);
    for (a, b) in [([1, 0], [1, 0]), ([1, 0], [2, 0]), ([2, 0], [1, 0]), ([2, 0], [2, 0])] {
        check_projection(&u, a, b);
    }
    let u = alg(CartanType::A2);
    for (a, b) in [([1, 0], [0, 1]), ([0, 1], [1, 0]), ([1, 0], [1, 0]), ([1, 1], [1, 0])] {
        check_projection(&u, a, b);
    }
    let u = alg(CartanType::B2);
    check_projection(&u, [1, 0], [0, 1]);
}

#[test]
fn a1_projection_examples() {
    let u = alg(CartanType::A1);
    let cache = ModuleCache::new(u.clone(), 64);
    let w = Weight([1, 0]);
    let p = cache.projection(w, w).unwrap();
    let v = cache.module(w).unwrap();
    let t = v.rep.tensor(&v.rep);
    let s = &t.singular_vectors(Weight::ZERO)[0];
    assert!(p.apply(s).iter().all(|x| x.is_zero()));
    let top = cache.module(Weight([2, 0])).unwrap();
    let fv = t.f[0].apply(&unit(4, 0));
    assert_eq!(p.apply(&fv), top.rep.f[0].apply(&top.highest()));
}
