//! Coproduct, counit, antipode and adjoint action.
//!
//! `Δ(e_i) = e_i ⊗ 1 + k_i ⊗ e_i`, `Δ(f_i) = f_i ⊗ k_i⁻¹ + 1 ⊗ f_i`,
//! `S(e_i) = −k_i⁻¹ e_i`, `S(f_i) = −f_i k_i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use super::{Bx, Mono, Uq, UqElement};
use crate::cartan::{CartanType, RootVec, Weight};
use crate::error::{Error, Result};
use crate::scalar::QField;

/// Element of `U_q(g)^{⊗n}` in the basis of tuples of normal-form monomials.
#[derive(Clone, PartialEq)]
pub struct Tensor<F> {
    pub ty: CartanType,
    pub n: usize,
    terms: BTreeMap<Vec<Mono>, F>,
}

impl<F: QField> Tensor<F> {
    pub fn zero(ty: CartanType, n: usize) -> Self {
        Tensor { ty, n, terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Mono>, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: Vec<Mono>, c: F) {
        debug_assert_eq!(k.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(x) => {
                *x = x.add_ref(&c);
                if x.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    /// `a ⊗ b ⊗ …` of plain elements.
    pub fn pure(parts: &[&UqElement<F>]) -> Result<Self> {
        let ty = parts.first().map(|p| p.ty).ok_or_else(|| Error::Domain("empty tensor".into()))?;
        if parts.iter().any(|p| p.ty != ty) {
            return Err(Error::MixedDatum);
        }
        let mut t = Tensor::zero(ty, parts.len());
        let mut stack: Vec<(Vec<Mono>, F)> = vec![(Vec::new(), F::one())];
        for p in parts {
            let mut next = Vec::new();
            for (k, c) in &stack {
                for (m, x) in p.terms() {
                    let mut k2 = k.clone();
                    k2.push(*m);
                    next.push((k2, c.mul_ref(x)));
                }
            }
            stack = next;
        }
        for (k, c) in stack {
            t.add_term(k, c);
        }
        Ok(t)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.ty != o.ty || self.n != o.n {
            return Err(Error::MixedDatum);
        }
        let mut t = self.clone();
        for (k, c) in &o.terms {
            t.add_term(k.clone(), c.clone());
        }
        Ok(t)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-F::one()))
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut t = Tensor::zero(self.ty, self.n);
        for (k, c) in &self.terms {
            t.add_term(k.clone(), c.mul_ref(s));
        }
        t
    }
}

impl<F: QField> fmt::Debug for Tensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for m in k {
                write!(f, "[F{:?}#{} k{:?} E{:?}#{}]", m.f.g.0, m.f.i, m.k.0, m.e.g.0, m.e.i)?;
            }
        }
        Ok(())
    }
}

/// `Δ(E_s) = Σ c · k_{γ_b} E_a ⊗ E_b`, `Δ(F_s) = Σ c · F_a ⊗ F_b k_{−γ_a}`.
pub(crate) type HalfCoproduct<F> = Arc<Vec<(Bx, Bx, F)>>;

pub(crate) struct HopfMemo<F> {
    de: RwLock<HashMap<Bx, HalfCoproduct<F>>>,
    df: RwLock<HashMap<Bx, HalfCoproduct<F>>>,
    s: RwLock<HashMap<(bool, bool, Bx), Arc<UqElement<F>>>>,
}

impl<F> Default for HopfMemo<F> {
    fn default() -> Self {
        HopfMemo { de: RwLock::default(), df: RwLock::default(), s: RwLock::default() }
    }
}

impl<F: QField> Uq<F> {
    pub(crate) fn delta_e(&self, b: Bx) -> Result<HalfCoproduct<F>> {
        if let Some(v) = self.hopf_memo.de.read().get(&b) {
            return Ok(v.clone());
        }
        let out = if b.g.is_zero() {
            vec![(Bx::ONE, Bx::ONE, F::one())]
        } else {
            let (j, t) = self.half.grade(b.g)?.split[b.idx()];
            let inner = self.delta_e(Bx::new(b.g - RootVec::unit(j), t))?;
            let aj = self.alpha(j);
            let mut acc: BTreeMap<(Bx, Bx), F> = BTreeMap::new();
            for (ea, eb, c) in inner.iter() {
                // e_j k_{γb} E_a ⊗ E_b
                let s = c.mul_q_pow(-self.datum.qexp(aj, self.gw(eb.g)));
                self.lift(&mut acc, j, *ea, &s, |p| (p, *eb))?;
                // k_j k_{γb} E_a ⊗ e_j E_b
                self.lift(&mut acc, j, *eb, c, |p| (*ea, p))?;
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect()
        };
        let out = Arc::new(out);
        self.hopf_memo.de.write().insert(b, out.clone());
        Ok(out)
    }

    fn delta_f(&self, b: Bx) -> Result<HalfCoproduct<F>> {
        if let Some(v) = self.hopf_memo.df.read().get(&b) {
            return Ok(v.clone());
        }
        let out = if b.g.is_zero() {
            vec![(Bx::ONE, Bx::ONE, F::one())]
        } else {
            let (j, t) = self.half.grade(b.g)?.split[b.idx()];
            let inner = self.delta_f(Bx::new(b.g - RootVec::unit(j), t))?;
            let aj = self.alpha(j);
            let mut acc: BTreeMap<(Bx, Bx), F> = BTreeMap::new();
            for (fa, fb, c) in inner.iter() {
                // f_j F_a ⊗ k_j⁻¹ F_b k_{−γa}
                let s = c.mul_q_pow(self.datum.qexp(aj, self.gw(fb.g)));
                self.lift(&mut acc, j, *fa, &s, |p| (p, *fb))?;
                self.lift(&mut acc, j, *fb, c, |p| (*fa, p))?;
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect()
        };
        let out = Arc::new(out);
        self.hopf_memo.df.write().insert(b, out.clone());
        Ok(out)
    }

    /// Add `s · (x_j · x_b)` expanded in the basis, placed by `slot`.
    fn lift(
        &self,
        acc: &mut BTreeMap<(Bx, Bx), F>,
        j: usize,
        b: Bx,
        s: &F,
        slot: impl Fn(Bx) -> (Bx, Bx),
    ) -> Result<()> {
        let up = b.g + RootVec::unit(j);
        let gu = self.half.grade(up)?;
        let row = gu.lmul[j].as_ref().expect("lmul").row(b.idx());
        for (p, x) in row.iter().enumerate() {
            if !x.is_zero() {
                let e = acc.entry(slot(Bx::new(up, p))).or_insert_with(F::zero);
                *e = e.add_ref(&s.mul_ref(x));
            }
        }
        Ok(())
    }

    pub fn coproduct_mono(&self, m: &Mono) -> Result<Tensor<F>> {
        let mut t = Tensor::zero(self.ty(), 2);
        let df = self.delta_f(m.f)?;
        let de = self.delta_e(m.e)?;
        for (fa, fb, c) in df.iter() {
            for (ea, eb, d) in de.iter() {
                let left = Mono { f: *fa, k: m.k + self.gw(eb.g), e: *ea };
                let right = Mono { f: *fb, k: m.k - self.gw(fa.g), e: *eb };
                t.add_term(vec![left, right], c.mul_ref(d));
            }
        }
        Ok(t)
    }

    pub fn coproduct(&self, u: &UqElement<F>) -> Result<Tensor<F>> {
        self.check(u)?;
        let mut t = Tensor::zero(self.ty(), 2);
        for (m, c) in u.terms() {
            for (k, x) in self.coproduct_mono(m)?.terms() {
                t.add_term(k.clone(), x.mul_ref(c));
            }
        }
        Ok(t)
    }

    /// Apply `Δ` to tensor slot `slot`, producing an `(n+1)`-fold tensor.
    pub fn coproduct_at(&self, t: &Tensor<F>, slot: usize) -> Result<Tensor<F>> {
        assert!(slot < t.n);
        let mut out = Tensor::zero(t.ty, t.n + 1);
        for (k, c) in t.terms() {
            for (d, x) in self.coproduct_mono(&k[slot])?.terms() {
                let mut key = k[..slot].to_vec();
                key.extend_from_slice(d);
                key.extend_from_slice(&k[slot + 1..]);
                out.add_term(key, c.mul_ref(x));
            }
        }
        Ok(out)
    }

    pub fn counit(&self, u: &UqElement<F>) -> F {
        let mut acc = F::zero();
        for (m, c) in u.terms() {
            if m.f.g.is_zero() && m.e.g.is_zero() {
                acc = acc.add_ref(c);
            }
        }
        acc
    }

    pub fn mono_element(&self, m: &Mono) -> UqElement<F> {
        UqElement::mono(self.ty(), *m, F::one())
    }

    /// Componentwise product of tensors.
    pub fn tensor_mul(&self, a: &Tensor<F>, b: &Tensor<F>) -> Result<Tensor<F>> {
        if a.ty != self.ty() || b.ty != self.ty() || a.n != b.n {
            return Err(Error::MixedDatum);
        }
        let mut out = Tensor::zero(self.ty(), a.n);
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                let parts: Vec<UqElement<F>> = ka
                    .iter()
                    .zip(kb)
                    .map(|(x, y)| self.mul(&self.mono_element(x), &self.mono_element(y)))
                    .collect::<Result<_>>()?;
                let refs: Vec<&UqElement<F>> = parts.iter().collect();
                let p = Tensor::pure(&refs)?;
                let s = ca.mul_ref(cb);
                for (k, x) in p.terms() {
                    out.add_term(k.clone(), x.mul_ref(&s));
                }
            }
        }
        Ok(out)
    }

    /// Multiply the slots of a tensor together after applying `maps[i]` to slot `i`.
    pub fn contract(
        &self,
        t: &Tensor<F>,
        maps: &[&dyn Fn(&UqElement<F>) -> Result<UqElement<F>>],
    ) -> Result<UqElement<F>> {
        assert_eq!(maps.len(), t.n);
        let mut acc = self.zero();
        for (k, c) in t.terms() {
            let mut p = self.one();
            for (m, f) in k.iter().zip(maps) {
                p = self.mul(&p, &f(&self.mono_element(m))?)?;
            }
            acc = acc.add(&p.scale(c))?;
        }
        Ok(acc)
    }

    /// Antipode (`inverse = false`) or its inverse applied to a half basis element.
    fn s_half(&self, inverse: bool, e_side: bool, b: Bx) -> Result<Arc<UqElement<F>>> {
        let key = (inverse, e_side, b);
        if let Some(v) = self.hopf_memo.s.read().get(&key) {
            return Ok(v.clone());
        }
        let out = if b.g.is_zero() {
            self.one()
        } else {
            let (j, t) = self.half.grade(b.g)?.split[b.idx()];
            let inner = self.s_half(inverse, e_side, Bx::new(b.g - RootVec::unit(j), t))?;
            let gen = self.s_generator(inverse, e_side, j);
            // anti-homomorphism: S(x_j X) = S(X) S(x_j)
            self.mul(&inner, &gen)?
        };
        let out = Arc::new(out);
        self.hopf_memo.s.write().insert(key, out.clone());
        Ok(out)
    }

    fn s_generator(&self, inverse: bool, e_side: bool, j: usize) -> UqElement<F> {
        let kj = self.ki(j);
        let kj_inv = self.k(-self.alpha(j));
        let m1 = -F::one();
        let r = match (inverse, e_side) {
            (false, true) => self.mul(&kj_inv, &self.e(j)),
            (false, false) => self.mul(&self.f(j), &kj),
            (true, true) => self.mul(&self.e(j), &kj_inv),
            (true, false) => self.mul(&kj, &self.f(j)),
        };
        r.expect("generator product").scale(&m1)
    }

    fn s_apply(&self, inverse: bool, u: &UqElement<F>) -> Result<UqElement<F>> {
        self.check(u)?;
        let mut acc = self.zero();
        for (m, c) in u.terms() {
            // S(F k E) = S(E) k_{−λ} S(F)
            let se = self.s_half(inverse, true, m.e)?;
            let sf = self.s_half(inverse, false, m.f)?;
            let p = self.mul_all(&[&se, &self.k(-m.k), &sf])?;
            acc = acc.add(&p.scale(c))?;
        }
        Ok(acc)
    }

    pub fn antipode(&self, u: &UqElement<F>) -> Result<UqElement<F>> {
        self.s_apply(false, u)
    }

    pub fn antipode_inv(&self, u: &UqElement<F>) -> Result<UqElement<F>> {
        self.s_apply(true, u)
    }

    /// `ad(u)(v) = Σ u₍₀₎ v S(u₍₁₎)`.
    pub fn adjoint(&self, u: &UqElement<F>, v: &UqElement<F>) -> Result<UqElement<F>> {
        self.check(v)?;
        let d = self.coproduct(u)?;
        let mut acc = self.zero();
        for (k, c) in d.terms() {
            let s1 = self.antipode(&self.mono_element(&k[1]))?;
            let p = self.mul_all(&[&self.mono_element(&k[0]), v, &s1])?;
            acc = acc.add(&p.scale(c))?;
        }
        Ok(acc)
    }

    /// `m ∘ (S ⊗ id) ∘ Δ`, which must equal `ε(u) · 1`.
    pub fn antipode_axiom(&self, u: &UqElement<F>) -> Result<UqElement<F>> {
        let d = self.coproduct(u)?;
        self.contract(&d, &[&|x| self.antipode(x), &|x| Ok(x.clone())])
    }

    /// `k_λ` weight of a weight-homogeneous element under `ad(U_q(h))`, if any.
    pub fn weight_of(&self, u: &UqElement<F>) -> Option<Weight> {
        let mut w = None;
        for (m, _) in u.terms() {
            let g = self.gw(m.e.g) - self.gw(m.f.g);
            match w {
                None => w = Some(g),
                Some(x) if x != g => return None,
                _ => {}
            }
        }
        w.or(Some(Weight::ZERO))
    }
}
