//! The graded algebra `A_q = ⊕_{ν ∈ Λ⁺} A_q(ν)` of highest-weight matrix coefficients
//! and its model `U_q(n⁺)^★ ⊗ O_q(H)`.
//!
//! `A_q(ν)` is realized as `V(ν)` through `c_v ↦ v`, so that `u · c_v = c_{uv}`, and the
//! product is the projection of `V(ν) ⊗ V(ν')` onto `V(ν + ν')`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::braid::Pbw;
use crate::cartan::{CartanType, RootVec, Weight};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::modules::{unit, IrreducibleModule, ModuleCache};
use crate::scalar::QField;
use crate::uq::half::dot;
use crate::uq::{Bx, Uq, UqElement};

/// A finite sum of homogeneous components, `ν ↦` coordinates in `V(ν)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AqElement<F> {
    pub ty: CartanType,
    parts: BTreeMap<Weight, Vec<F>>,
}

impl<F: QField> AqElement<F> {
    pub fn zero(ty: CartanType) -> Self {
        AqElement { ty, parts: BTreeMap::new() }
    }

    pub fn homogeneous(ty: CartanType, nu: Weight, v: Vec<F>) -> Self {
        let mut a = Self::zero(ty);
        if v.iter().any(|x| !x.is_zero()) {
            a.parts.insert(nu, v);
        }
        a
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Weight, &Vec<F>)> {
        self.parts.iter()
    }

    pub fn component(&self, nu: Weight) -> Option<&Vec<F>> {
        self.parts.get(&nu)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The degree `ν` when the element lies in a single `A_q(ν)`.
    pub fn degree(&self) -> Option<Weight> {
        match self.parts.len() {
            1 => self.parts.keys().next().copied(),
            _ => None,
        }
    }

    fn combine(&self, o: &Self, s: &F) -> Result<Self> {
        if self.ty != o.ty {
            return Err(Error::MixedDatum);
        }
        let mut out = self.clone();
        for (nu, v) in &o.parts {
            let e = out.parts.entry(*nu).or_insert_with(|| vec![F::zero(); v.len()]);
            for (x, y) in e.iter_mut().zip(v) {
                *x = x.add_ref(&y.mul_ref(s));
            }
        }
        out.parts.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, &F::one())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, &-F::one())
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.ty);
        }
        let parts = self.parts.iter().map(|(k, v)| (*k, v.iter().map(|x| x.mul_ref(s)).collect())).collect();
        AqElement { ty: self.ty, parts }
    }
}

/// An element of `U_q(n⁺)^★ = ⊕_γ (U_q(n⁺)_γ)*`, stored as its values on the
/// internal basis of each grade.
#[derive(Debug, Clone, PartialEq)]
pub struct StarFunctional<F> {
    pub ty: CartanType,
    parts: BTreeMap<RootVec, Vec<F>>,
}

impl<F: QField> StarFunctional<F> {
    pub fn zero(ty: CartanType) -> Self {
        StarFunctional { ty, parts: BTreeMap::new() }
    }

    /// `ε` restricted to `U_q(n⁺)`, the unit.
    pub fn epsilon(ty: CartanType) -> Self {
        Self::homogeneous(ty, RootVec::ZERO, vec![F::one()])
    }

    pub fn homogeneous(ty: CartanType, g: RootVec, values: Vec<F>) -> Self {
        let mut x = Self::zero(ty);
        x.insert(g, values);
        x
    }

    /// `ξ_i` with `ξ_i(e_i) = 1`.
    pub fn simple(ty: CartanType, i: usize) -> Self {
        Self::homogeneous(ty, RootVec::unit(i), vec![F::one()])
    }

    /// The functional dual to basis element `s` of grade `g`.
    pub fn delta(ty: CartanType, g: RootVec, dim: usize, s: usize) -> Self {
        Self::homogeneous(ty, g, unit(dim, s))
    }

    fn insert(&mut self, g: RootVec, values: Vec<F>) {
        if values.iter().any(|x| !x.is_zero()) {
            self.parts.insert(g, values);
        } else {
            self.parts.remove(&g);
        }
    }

    pub fn parts(&self) -> impl Iterator<Item = (&RootVec, &Vec<F>)> {
        self.parts.iter()
    }

    pub fn part(&self, g: RootVec) -> Option<&Vec<F>> {
        self.parts.get(&g)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max_height(&self) -> i64 {
        self.parts.keys().map(|g| g.height()).max().unwrap_or(0)
    }

    fn accumulate(&mut self, g: RootVec, dim: usize, s: usize, x: F) {
        if x.is_zero() {
            return;
        }
        let e = self.parts.entry(g).or_insert_with(|| vec![F::zero(); dim]);
        e[s] = e[s].add_ref(&x);
    }

    fn cleaned(mut self) -> Self {
        self.parts.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        self
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.ty != o.ty {
            return Err(Error::MixedDatum);
        }
        let mut out = self.clone();
        for (g, v) in &o.parts {
            for (s, x) in v.iter().enumerate() {
                out.accumulate(*g, v.len(), s, x.clone());
            }
        }
        Ok(out.cleaned())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let parts = self.parts.iter().map(|(g, v)| (*g, v.iter().map(|x| x.mul_ref(c)).collect())).collect();
        StarFunctional { ty: self.ty, parts }.cleaned()
    }

    /// `ξ(x)` for `x ∈ U_q(n⁺)`.
    pub fn eval(&self, x: &UqElement<F>) -> Result<F> {
        if x.ty != self.ty {
            return Err(Error::MixedDatum);
        }
        let mut acc = F::zero();
        for (m, c) in x.terms() {
            if !m.f.g.is_zero() || !m.k.is_zero() {
                return Err(Error::Domain("functionals are evaluated on U_q(n+)".into()));
            }
            if let Some(v) = self.parts.get(&m.e.g) {
                acc = acc.add_ref(&v[m.e.idx()].mul_ref(c));
            }
        }
        Ok(acc)
    }
}

/// `Σ_χ ξ_χ ⊗ χ` in `U_q(n⁺)^★ ⊗ O_q(H)`, keyed by the character weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelElement<F> {
    pub ty: CartanType,
    parts: BTreeMap<Weight, StarFunctional<F>>,
}

impl<F: QField> ModelElement<F> {
    pub fn zero(ty: CartanType) -> Self {
        ModelElement { ty, parts: BTreeMap::new() }
    }

    pub fn pure(xi: StarFunctional<F>, chi: Weight) -> Self {
        let mut m = Self::zero(xi.ty);
        if !xi.is_zero() {
            m.parts.insert(chi, xi);
        }
        m
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Weight, &StarFunctional<F>)> {
        self.parts.iter()
    }

    pub fn part(&self, chi: Weight) -> Option<&StarFunctional<F>> {
        self.parts.get(&chi)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.ty != o.ty {
            return Err(Error::MixedDatum);
        }
        let mut out = self.clone();
        for (chi, xi) in &o.parts {
            let sum = match out.parts.get(chi) {
                Some(x) => x.add(xi)?,
                None => xi.clone(),
            };
            if sum.is_zero() {
                out.parts.remove(chi);
            } else {
                out.parts.insert(*chi, sum);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let parts: BTreeMap<_, _> =
            self.parts.iter().map(|(k, x)| (*k, x.scale(c))).filter(|(_, x)| !x.is_zero()).collect();
        ModelElement { ty: self.ty, parts }
    }

    /// Map every functional part, keeping the characters.
    pub fn map(&self, f: impl Fn(Weight, &StarFunctional<F>) -> Result<StarFunctional<F>>) -> Result<Self> {
        let mut out = Self::zero(self.ty);
        for (chi, xi) in &self.parts {
            out = out.add(&Self::pure(f(*chi, xi)?, *chi))?;
        }
        Ok(out)
    }
}

/// `c_λ⁻¹ · a` in the localization `S₁⁻¹A_q`.
#[derive(Debug, Clone)]
pub struct LocalAqElement<F> {
    pub lambda: Weight,
    pub a: AqElement<F>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionalTable {
    pub character: Vec<i64>,
    pub entries: Vec<(String, String)>,
}

/// `A_q` for one Cartan datum, with the module and PBW caches it needs.
pub struct Aq<F> {
    pub uq: Arc<Uq<F>>,
    pub modules: ModuleCache<F>,
    pub pbw: Arc<Pbw<F>>,
}

impl<F: QField> Aq<F> {
    pub fn new(uq: Arc<Uq<F>>, dim_cap: usize) -> Result<Self> {
        let pbw = Arc::new(Pbw::standard(uq.clone())?);
        Ok(Aq { modules: ModuleCache::new(uq.clone(), dim_cap), uq, pbw })
    }

    pub fn ty(&self) -> CartanType {
        self.uq.ty()
    }

    pub fn module(&self, nu: Weight) -> Result<Arc<IrreducibleModule<F>>> {
        self.modules.module(nu)
    }

    pub fn dim(&self, nu: Weight) -> Result<usize> {
        Ok(self.module(nu)?.dim())
    }

    pub fn one(&self) -> AqElement<F> {
        AqElement::homogeneous(self.ty(), Weight::ZERO, vec![F::one()])
    }

    /// `c_λ`, the coefficient of the highest weight vector.
    pub fn c(&self, lambda: Weight) -> Result<AqElement<F>> {
        let m = self.module(lambda)?;
        Ok(AqElement::homogeneous(self.ty(), lambda, m.highest()))
    }

    /// `c_v` for the `k`-th basis vector of `V(ν)`.
    pub fn basis(&self, nu: Weight, k: usize) -> Result<AqElement<F>> {
        let d = self.dim(nu)?;
        if k >= d {
            return Err(Error::Domain(format!("basis index {k} out of range for dim {d}")));
        }
        Ok(AqElement::homogeneous(self.ty(), nu, unit(d, k)))
    }

    /// Left `U_q(h)`-weight of the `k`-th basis vector of `A_q(ν)`.
    pub fn left_weight(&self, nu: Weight, k: usize) -> Result<Weight> {
        Ok(self.module(nu)?.rep.weights[k])
    }

    fn check(&self, a: &AqElement<F>) -> Result<()> {
        if a.ty != self.ty() {
            return Err(Error::MixedDatum);
        }
        Ok(())
    }

    fn kron(a: &[F], b: &[F]) -> Vec<F> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                out.push(x.mul_ref(y));
            }
        }
        out
    }

    /// The Cartan product.
    pub fn multiply(&self, a: &AqElement<F>, b: &AqElement<F>) -> Result<AqElement<F>> {
        self.check(a)?;
        self.check(b)?;
        let mut out = AqElement::zero(self.ty());
        for (nu, v) in a.parts() {
            for (mu, w) in b.parts() {
                let p = self.modules.projection(*nu, *mu)?;
                let x = p.apply(&Self::kron(v, w));
                out = out.add(&AqElement::homogeneous(self.ty(), *nu + *mu, x))?;
            }
        }
        Ok(out)
    }

    /// `∂_u(a) = u · a`.
    pub fn left_action(&self, u: &UqElement<F>, a: &AqElement<F>) -> Result<AqElement<F>> {
        self.check(a)?;
        let mut out = AqElement::zero(self.ty());
        for (nu, v) in a.parts() {
            let x = self.module(*nu)?.rep.act(u, v)?;
            out = out.add(&AqElement::homogeneous(self.ty(), *nu, x))?;
        }
        Ok(out)
    }

    /// `σ_λ(a) = a · k_λ`, the scalar `q^{(λ,ν)}` on `A_q(ν)`.
    pub fn sigma(&self, lambda: Weight, a: &AqElement<F>) -> Result<AqElement<F>> {
        self.check(a)?;
        let mut out = AqElement::zero(self.ty());
        for (nu, v) in a.parts() {
            let s = F::q_pow(self.uq.datum.qexp(lambda, *nu));
            out = out.add(&AqElement::homogeneous(self.ty(), *nu, v.iter().map(|x| x.mul_ref(&s)).collect()))?;
        }
        Ok(out)
    }

    // ---- U_q(n⁺)^★ ----

    fn half_dim(&self, g: RootVec) -> Result<usize> {
        self.uq.half.dim(g)
    }

    /// Values on the PBW `e`-monomials of grade `g`.
    pub fn pbw_values(&self, xi: &StarFunctional<F>, g: RootVec) -> Result<Vec<F>> {
        let pg = self.pbw.grade(g)?;
        match xi.part(g) {
            Some(v) => Ok(pg.e_mat.apply(v)),
            None => Ok(vec![F::zero(); pg.exps.len()]),
        }
    }

    /// The functional taking the given values on the PBW `e`-monomials of grade `g`.
    pub fn from_pbw_values(&self, g: RootVec, values: &[F]) -> Result<StarFunctional<F>> {
        let pg = self.pbw.grade(g)?;
        Ok(StarFunctional::homogeneous(self.ty(), g, pg.e_inv.apply(values)))
    }

    /// `ξ · t_a(ξ')`; with `a = 0` this is the product of `U_q(n⁺)^★`.
    fn twisted_product(&self, a: Weight, x: &StarFunctional<F>, y: &StarFunctional<F>) -> Result<StarFunctional<F>> {
        if x.ty != self.ty() || y.ty != self.ty() {
            return Err(Error::MixedDatum);
        }
        let mut out = StarFunctional::zero(self.ty());
        let d = &self.uq.datum;
        let mut targets: Vec<RootVec> = Vec::new();
        for gx in x.parts.keys() {
            for gy in y.parts.keys() {
                targets.push(*gx + *gy);
            }
        }
        targets.sort();
        targets.dedup();
        for g in targets {
            let dim = self.half_dim(g)?;
            for s in 0..dim {
                // Δ(E_s) = Σ c k_{γ(b)} E_a ⊗ E_b
                let delta = self.uq.delta_e(Bx::new(g, s))?;
                let mut acc = F::zero();
                for (ea, eb, c) in delta.iter() {
                    let (Some(vx), Some(vy)) = (x.parts.get(&ea.g), y.parts.get(&eb.g)) else {
                        continue;
                    };
                    let p = vx[ea.idx()].mul_ref(&vy[eb.idx()]);
                    if p.is_zero() {
                        continue;
                    }
                    let tw = d.qexp(a, self.uq.gw(eb.g));
                    acc = acc.add_ref(&p.mul_ref(c).mul_q_pow(tw));
                }
                out.accumulate(g, dim, s, acc);
            }
        }
        Ok(out.cleaned())
    }

    /// Product in `U_q(n⁺)^★ ≅ O_q(B⁺)(0)`: `(ξξ')(x) = Σ ξ(x₍₀₎) ξ'(x₍₁₎)`.
    pub fn star_multiply(&self, x: &StarFunctional<F>, y: &StarFunctional<F>) -> Result<StarFunctional<F>> {
        self.twisted_product(Weight::ZERO, x, y)
    }

    /// `t_λ(ξ) = q^{(γ,λ)} ξ` on `(U_q(n⁺)_γ)*`.
    pub fn t(&self, lambda: Weight, xi: &StarFunctional<F>) -> StarFunctional<F> {
        let mut out = xi.clone();
        for (g, v) in out.parts.iter_mut() {
            let s = F::q_pow(self.uq.datum.qexp(lambda, self.uq.gw(*g)));
            for x in v.iter_mut() {
                *x = x.mul_ref(&s);
            }
        }
        out
    }

    /// `(d_x ξ)(x') = ξ(x' x)` for `x ∈ U_q(n⁺)`.
    pub fn d(&self, x: &UqElement<F>, xi: &StarFunctional<F>) -> Result<StarFunctional<F>> {
        if x.ty != self.ty() || xi.ty != self.ty() {
            return Err(Error::MixedDatum);
        }
        let mut out = StarFunctional::zero(self.ty());
        for (m, c) in x.terms() {
            if !m.f.g.is_zero() || !m.k.is_zero() {
                return Err(Error::Domain("d_x needs x in U_q(n+)".into()));
            }
            for (gx, v) in xi.parts() {
                let g = *gx - m.e.g;
                if !g.is_nonneg() {
                    continue;
                }
                let dim = self.half_dim(g)?;
                for s in 0..dim {
                    let p = self.uq.half.basis_product(g, s, m.e.g, m.e.idx())?;
                    out.accumulate(g, dim, s, dot(&p, v).mul_ref(c));
                }
            }
        }
        Ok(out.cleaned())
    }

    /// Left `U_q(b⁺)`-action `(u · ξ)(x) = ξ(x u)`; `k_λ` acts as `t_{−λ}`.
    pub fn b_action(&self, u: &UqElement<F>, xi: &StarFunctional<F>) -> Result<StarFunctional<F>> {
        let mut out = StarFunctional::zero(self.ty());
        for (m, c) in u.terms() {
            if !m.f.g.is_zero() {
                return Err(Error::Domain("the action on U_q(n+)^* is defined for U_q(b+)".into()));
            }
            let e = self.uq.e_vec(m.e.g, &unit(self.half_dim(m.e.g)?, m.e.idx()));
            let x = self.t(-m.k, &self.d(&e, xi)?);
            out = out.add(&x.scale(c))?;
        }
        Ok(out)
    }

    /// `y ∈ U_q(n⁻)` with `ξ = τ(·, y)`.
    pub fn nminus_model(&self, xi: &StarFunctional<F>) -> Result<UqElement<F>> {
        let mut out = self.uq.zero();
        for (g, v) in xi.parts() {
            let gr = self.uq.half.grade(*g)?;
            let y = gr.gram_inv.apply(v);
            out = out.add(&self.uq.f_vec(*g, &y))?;
        }
        Ok(out)
    }

    /// `ξ ↦ Σ_γ q^{(γ,γ)/2} y_γ`, an algebra isomorphism `U_q(n⁺)^★ → U_q(n⁻)`.
    ///
    /// The plain `τ`-dual satisfies `y(ξξ') = q^{−(γ,γ')} y(ξ) y(ξ')`; the twist absorbs the factor.
    /// With this coproduct the order of factors is preserved, not reversed.
    pub fn nminus_algebra_map(&self, xi: &StarFunctional<F>) -> Result<UqElement<F>> {
        let mut out = self.uq.zero();
        for (g, v) in xi.parts() {
            let gw = self.uq.gw(*g);
            let e = self.uq.datum.qexp(gw, gw);
            let s = F::q_pow(crate::scalar::QExp(e.0 / 2));
            let part = StarFunctional::homogeneous(self.ty(), *g, v.clone());
            out = out.add(&self.nminus_model(&part)?.scale(&s))?;
        }
        Ok(out)
    }

    pub fn from_nminus(&self, y: &UqElement<F>) -> Result<StarFunctional<F>> {
        let mut out = StarFunctional::zero(self.ty());
        let mut grades: Vec<RootVec> = y.terms().map(|(m, _)| m.f.g).collect();
        grades.sort();
        grades.dedup();
        for g in grades {
            let coords = self.uq.f_coords(y, g)?;
            let gr = self.uq.half.grade(g)?;
            out = out.add(&StarFunctional::homogeneous(self.ty(), g, gr.gram.apply(&coords)))?;
        }
        Ok(out)
    }

    // ---- ϑ ----

    /// `ϑ(c_v) = ξ_v ⊗ χ_ν` with `ξ_v(x) = f₀(x v)`.
    pub fn theta(&self, a: &AqElement<F>) -> Result<ModelElement<F>> {
        self.check(a)?;
        let mut out = ModelElement::zero(self.ty());
        for (nu, v) in a.parts() {
            let m = self.module(*nu)?;
            let mut xi = StarFunctional::zero(self.ty());
            for sp in &m.spaces {
                let dim = self.half_dim(sp.gamma)?;
                for s in 0..dim {
                    let mat = m.rep.half_matrix(true, Bx::new(sp.gamma, s))?;
                    xi.accumulate(sp.gamma, dim, s, dot(mat.row(0), v));
                }
            }
            out = out.add(&ModelElement::pure(xi.cleaned(), *nu))?;
        }
        Ok(out)
    }

    /// `ϑ(c_λ⁻¹ a) = (ε ⊗ χ_{−λ}) ϑ(a)`.
    pub fn theta_local(&self, l: &LocalAqElement<F>) -> Result<ModelElement<F>> {
        let t = self.theta(&l.a)?;
        let mut out = ModelElement::zero(self.ty());
        for (chi, xi) in t.parts() {
            out = out.add(&ModelElement::pure(self.t(-l.lambda, xi), *chi - l.lambda))?;
        }
        Ok(out)
    }

    /// `ϑ₀` on a degree-zero local element.
    pub fn theta0(&self, l: &LocalAqElement<F>) -> Result<StarFunctional<F>> {
        let t = self.theta_local(l)?;
        for (chi, _) in t.parts() {
            if !chi.is_zero() {
                return Err(Error::Domain("theta0 needs a degree-zero element".into()));
            }
        }
        Ok(t.part(Weight::ZERO).cloned().unwrap_or_else(|| StarFunctional::zero(self.ty())))
    }

    /// `(ξ ⊗ χ_a)(ξ' ⊗ χ_b) = ξ · t_a(ξ') ⊗ χ_{a+b}`.
    pub fn model_multiply(&self, x: &ModelElement<F>, y: &ModelElement<F>) -> Result<ModelElement<F>> {
        let mut out = ModelElement::zero(self.ty());
        for (a, xi) in x.parts() {
            for (b, eta) in y.parts() {
                out = out.add(&ModelElement::pure(self.twisted_product(*a, xi, eta)?, *a + *b))?;
            }
        }
        Ok(out)
    }

    /// `s_λ` on the character factor.
    pub fn model_s(&self, lambda: Weight, x: &ModelElement<F>) -> Result<ModelElement<F>> {
        x.map(|chi, xi| Ok(xi.scale(&F::q_pow(self.uq.datum.qexp(lambda, chi)))))
    }

    pub fn local_eq(&self, a: &LocalAqElement<F>, b: &LocalAqElement<F>) -> Result<bool> {
        Ok(self.theta_local(a)? == self.theta_local(b)?)
    }

    /// The scalar `s` with `c_μ a = s · a c_μ` for `a = c_v`, `v` a weight vector.
    pub fn ore_scalar(&self, mu: Weight, nu: Weight, k: usize) -> Result<F> {
        let w = self.left_weight(nu, k)?;
        Ok(F::q_pow(self.uq.datum.qexp(nu - w, mu)))
    }

    /// Tabulate a model element on PBW monomials.
    pub fn table(&self, x: &ModelElement<F>) -> Result<Vec<FunctionalTable>> {
        let d = &self.uq.datum;
        let mut out = Vec::new();
        for (chi, xi) in x.parts() {
            let mut entries = Vec::new();
            for (g, _) in xi.parts() {
                let pg = self.pbw.grade(*g)?;
                for (r, val) in self.pbw_values(xi, *g)?.into_iter().enumerate() {
                    if !val.is_zero() {
                        entries.push((self.pbw.monomial_name('e', &pg.exps[r]), val.to_string()));
                    }
                }
            }
            out.push(FunctionalTable { character: chi.0[..d.rank].to_vec(), entries });
        }
        Ok(out)
    }

    /// Matrix of `ℓ_φ` from `A_q(ν')` to `A_q(ν + ν')` for homogeneous `φ ∈ A_q(ν)`.
    pub fn left_mult_matrix(&self, phi: &[F], nu: Weight, nu2: Weight) -> Result<Matrix<F>> {
        let p = self.modules.projection(nu, nu2)?;
        let d2 = self.dim(nu2)?;
        let cols: Vec<Vec<F>> = (0..d2).map(|j| p.apply(&Self::kron(phi, &unit(d2, j)))).collect();
        Ok(Matrix::from_cols(p.matrix.rows(), &cols))
    }
}
