//! The ring `D_q ⊂ End(A_q)` generated by `ℓ_φ`, `∂_u`, `σ_λ`, realized as exact
//! operators on finite windows of degrees, and its transport to the `ϑ`-model.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::aq::{Aq, AqElement, LocalAqElement, ModelElement, StarFunctional};
use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::rank_of;
use crate::scalar::QField;
use crate::uq::{SubalgebraTag, UqElement};

/// A generator of `D_q`.
#[derive(Clone)]
pub enum DqGen<F> {
    /// `ℓ_φ`, left multiplication.
    L(AqElement<F>),
    /// `∂_u`, the left action.
    D(UqElement<F>),
    /// `σ_λ`, right multiplication by `k_λ`.
    Sigma(Weight),
}

/// `Σ c · g₁ g₂ ⋯ gₙ` with `gₙ` applied first.
#[derive(Clone)]
pub struct DqOperator<F> {
    terms: Vec<(F, Vec<DqGen<F>>)>,
}

impl<F: QField> DqOperator<F> {
    pub fn id() -> Self {
        DqOperator { terms: vec![(F::one(), Vec::new())] }
    }

    pub fn zero() -> Self {
        DqOperator { terms: Vec::new() }
    }

    pub fn gen(g: DqGen<F>) -> Self {
        DqOperator { terms: vec![(F::one(), vec![g])] }
    }

    pub fn l(phi: AqElement<F>) -> Self {
        Self::gen(DqGen::L(phi))
    }

    pub fn d(u: UqElement<F>) -> Self {
        Self::gen(DqGen::D(u))
    }

    pub fn sigma(l: Weight) -> Self {
        Self::gen(DqGen::Sigma(l))
    }

    /// `self ∘ o`.
    pub fn then(&self, o: &Self) -> Self {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = x.clone();
                w.extend(y.iter().cloned());
                terms.push((a.mul_ref(b), w));
            }
        }
        DqOperator { terms }
    }

    pub fn compose(ops: &[&Self]) -> Self {
        ops.iter().fold(Self::id(), |acc, o| acc.then(o))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        DqOperator { terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        DqOperator { terms: self.terms.iter().map(|(a, w)| (a.mul_ref(c), w.clone())).collect() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Minimal `(a, b)` with the operator written in `D_q^{ab}`: `a = 2` when every `∂_u`
    /// has `u ∈ U^e_q(g)`, `b = 2` when every `σ_λ` has `λ ∈ 2Λ`.
    pub fn tags(&self, aq: &Aq<F>) -> (u8, u8) {
        let mut a = 2;
        let mut b = 2;
        for (_, w) in &self.terms {
            for g in w {
                match g {
                    DqGen::D(u) if !aq.uq.is_in(SubalgebraTag::Even, u) => a = 1,
                    DqGen::Sigma(l) if !aq.uq.datum.mod2_class(*l).is_zero() => b = 1,
                    _ => {}
                }
            }
        }
        (a, b)
    }
}

/// Finite set of source degrees on which operators are compared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Window {
    pub weights: Vec<Weight>,
}

impl Window {
    /// All dominant `ν'` with `ν' ≤ bound` coordinatewise.
    pub fn below(rank: usize, bound: Weight) -> Self {
        let mut weights = Vec::new();
        for a in 0..=bound.0[0] {
            for b in 0..=(if rank > 1 { bound.0[1] } else { 0 }) {
                weights.push(Weight([a, b]));
            }
        }
        Window { weights }
    }

    pub fn describe(&self, rank: usize) -> Vec<Vec<i64>> {
        self.weights.iter().map(|w| w.0[..rank].to_vec()).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub relation: String,
    pub case: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.passed { "ok" } else { "FAIL" };
        write!(f, "[{s}] {} {}", self.relation, self.case)?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Rel1Report {
    pub nu: Vec<i64>,
    pub phi: usize,
    pub window: Vec<Vec<i64>>,
    /// Largest height of `β_r` with a nonzero contribution.
    pub effective_height: i64,
    /// Heights checked to contribute nothing beyond `effective_height`.
    pub stable_through: i64,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelIdentityReport {
    pub case: String,
    pub height_cap: i64,
    /// PBW labels of the `x_r` whose coefficient functional is nonzero.
    pub surviving: Vec<String>,
    pub samples: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceReport {
    pub family: String,
    pub members: usize,
    pub rank: usize,
    pub window: Vec<Vec<i64>>,
}

impl IndependenceReport {
    pub fn independent(&self) -> bool {
        self.rank == self.members
    }
}

/// Sample data for the relation suite.
pub struct RelationSample<F> {
    pub phis: Vec<(String, AqElement<F>)>,
    pub us: Vec<(String, UqElement<F>)>,
    pub lambdas: Vec<Weight>,
    pub window: Window,
}

/// Operators of `D_q` acting on `A_q` and on the `ϑ`-model.
pub struct Dq<F> {
    pub aq: Arc<Aq<F>>,
}

impl<F: QField> Dq<F> {
    pub fn new(aq: Arc<Aq<F>>) -> Self {
        Dq { aq }
    }

    fn apply_gen(&self, g: &DqGen<F>, psi: &AqElement<F>) -> Result<AqElement<F>> {
        match g {
            DqGen::L(phi) => self.aq.multiply(phi, psi),
            DqGen::D(u) => self.aq.left_action(u, psi),
            DqGen::Sigma(l) => self.aq.sigma(*l, psi),
        }
    }

    pub fn apply(&self, p: &DqOperator<F>, psi: &AqElement<F>) -> Result<AqElement<F>> {
        let mut out = AqElement::zero(self.aq.ty());
        for (c, w) in &p.terms {
            let mut x = psi.clone();
            for g in w.iter().rev() {
                if x.is_zero() {
                    break;
                }
                x = self.apply_gen(g, &x)?;
            }
            out = out.add(&x.scale(c))?;
        }
        Ok(out)
    }

    /// Images of every basis vector of every degree in the window.
    pub fn materialize(&self, p: &DqOperator<F>, w: &Window) -> Result<Vec<AqElement<F>>> {
        let mut out = Vec::new();
        for &nu in &w.weights {
            for k in 0..self.aq.dim(nu)? {
                out.push(self.apply(p, &self.aq.basis(nu, k)?)?);
            }
        }
        Ok(out)
    }

    /// `None` when the operators agree on the window, else a witness.
    pub fn compare(&self, p: &DqOperator<F>, q: &DqOperator<F>, w: &Window) -> Result<Option<String>> {
        for &nu in &w.weights {
            for k in 0..self.aq.dim(nu)? {
                let b = self.aq.basis(nu, k)?;
                if self.apply(p, &b)? != self.apply(q, &b)? {
                    return Ok(Some(format!("differ on basis vector {k} of degree {:?}", &nu.0[..self.aq.uq.rank()])));
                }
            }
        }
        Ok(None)
    }

    fn check(&self, rel: &str, case: String, p: &DqOperator<F>, q: &DqOperator<F>, w: &Window) -> Result<CheckResult> {
        let witness = self.compare(p, q, w)?;
        Ok(CheckResult { relation: rel.into(), case, passed: witness.is_none(), witness })
    }

    /// `Σ ℓ_{u₍₀₎·φ} ∂_{u₍₁₎}`.
    pub fn leibniz_rhs(&self, u: &UqElement<F>, phi: &AqElement<F>) -> Result<DqOperator<F>> {
        let uq = &self.aq.uq;
        let mut out = DqOperator::zero();
        for (k, c) in uq.coproduct(u)?.terms() {
            let a = self.aq.left_action(&uq.mono_element(&k[0]), phi)?;
            if a.is_zero() {
                continue;
            }
            let t = DqOperator::l(a).then(&DqOperator::d(uq.mono_element(&k[1])));
            out = out.add(&t.scale(c));
        }
        Ok(out)
    }

    /// `Σ ∂_{u₍₁₎} ℓ_{(S⁻¹u₍₀₎)·φ}`.
    pub fn left_leibniz_rhs(&self, u: &UqElement<F>, phi: &AqElement<F>) -> Result<DqOperator<F>> {
        let uq = &self.aq.uq;
        let mut out = DqOperator::zero();
        for (k, c) in uq.coproduct(u)?.terms() {
            let s = uq.antipode_inv(&uq.mono_element(&k[0]))?;
            let a = self.aq.left_action(&s, phi)?;
            if a.is_zero() {
                continue;
            }
            let t = DqOperator::d(uq.mono_element(&k[1])).then(&DqOperator::l(a));
            out = out.add(&t.scale(c));
        }
        Ok(out)
    }

    /// The defining relations of `D_q` on the sample.
    pub fn verify_relations(&self, s: &RelationSample<F>) -> Result<Vec<CheckResult>> {
        let uq = &self.aq.uq;
        let d = &uq.datum;
        let w = &s.window;
        let id = DqOperator::id();
        let mut out = Vec::new();
        out.push(self.check("unit-relations", "l_1 = id".into(), &DqOperator::l(self.aq.one()), &id, w)?);
        out.push(self.check("unit-relations", "d_1 = id".into(), &DqOperator::d(uq.one()), &id, w)?);
        out.push(self.check("unit-relations", "sigma_0 = id".into(), &DqOperator::sigma(Weight::ZERO), &id, w)?);
        for (na, a) in &s.phis {
            for (nb, b) in &s.phis {
                let lhs = DqOperator::l(a.clone()).then(&DqOperator::l(b.clone()));
                let rhs = DqOperator::l(self.aq.multiply(a, b)?);
                out.push(self.check("left-multiplication-homomorphism", format!("l_{na} l_{nb}"), &lhs, &rhs, w)?);
            }
        }
        for (na, a) in &s.us {
            for (nb, b) in &s.us {
                let lhs = DqOperator::d(a.clone()).then(&DqOperator::d(b.clone()));
                let rhs = DqOperator::d(uq.mul(a, b)?);
                out.push(self.check("action-homomorphism", format!("d_{na} d_{nb}"), &lhs, &rhs, w)?);
            }
        }
        for &l in &s.lambdas {
            for &m in &s.lambdas {
                let lhs = DqOperator::sigma(l).then(&DqOperator::sigma(m));
                out.push(self.check(
                    "sigma-additivity",
                    format!("sigma_{:?} sigma_{:?}", l.0, m.0),
                    &lhs,
                    &DqOperator::sigma(l + m),
                    w,
                )?);
            }
        }
        for (nu, u) in &s.us {
            for (np, phi) in &s.phis {
                let lhs = DqOperator::d(u.clone()).then(&DqOperator::l(phi.clone()));
                out.push(self.check(
                    "action-leibniz",
                    format!("d_{nu} l_{np}"),
                    &lhs,
                    &self.leibniz_rhs(u, phi)?,
                    w,
                )?);
                let lhs = DqOperator::l(phi.clone()).then(&DqOperator::d(u.clone()));
                out.push(self.check(
                    "left-leibniz",
                    format!("l_{np} d_{nu}"),
                    &lhs,
                    &self.left_leibniz_rhs(u, phi)?,
                    w,
                )?);
            }
        }
        for &l in &s.lambdas {
            for (nu, u) in &s.us {
                let lhs = DqOperator::sigma(l).then(&DqOperator::d(u.clone()));
                let rhs = DqOperator::d(u.clone()).then(&DqOperator::sigma(l));
                out.push(self.check("sigma-action-commutation", format!("sigma_{:?} d_{nu}", l.0), &lhs, &rhs, w)?);
            }
            for (np, phi) in &s.phis {
                let Some(nu) = phi.degree() else {
                    return Err(Error::Domain(format!("{np} is not homogeneous")));
                };
                let lhs = DqOperator::sigma(l).then(&DqOperator::l(phi.clone()));
                let rhs = DqOperator::l(phi.clone()).then(&DqOperator::sigma(l)).scale(&F::q_pow(d.qexp(l, nu)));
                out.push(self.check("sigma-multiplication-twist", format!("sigma_{:?} l_{np}", l.0), &lhs, &rhs, w)?);
            }
        }
        Ok(out)
    }

    /// The non-obvious relation for the basis vector `φ = c_{v_k}` of `A_q(ν)`:
    /// `(Σ_r ℓ_{y_r·φ} ∂_{x_r}) ∂_{k_{−2μ}} σ_{2ν} = Σ_r ℓ_{(S x_r)·φ} ∂_{y_r k_{β_r}}`,
    /// with the `r`-sum accumulated by height until it stops contributing.
    pub fn rel1_check(&self, nu: Weight, k: usize, w: &Window) -> Result<Rel1Report> {
        let aq = &self.aq;
        let uq = &aq.uq;
        let d = &uq.datum;
        let phi = aq.basis(nu, k)?;
        let mu = aq.left_weight(nu, k)?;
        let mut sources = Vec::new();
        for &nu2 in &w.weights {
            for j in 0..aq.dim(nu2)? {
                let psi = aq.basis(nu2, j)?;
                let mu2 = aq.left_weight(nu2, j)?;
                let s = F::q_pow(d.qexp(-2 * mu, mu2) + d.qexp(2 * nu, nu2));
                sources.push((nu2, j, psi, s));
            }
        }
        let zero = AqElement::zero(aq.ty());
        let mut lhs = vec![zero.clone(); sources.len()];
        let mut rhs = vec![zero; sources.len()];
        let mut effective = 0;
        let mut quiet = 0;
        let mut h = 0;
        while quiet < 2 {
            let mut any = false;
            for g in d.grades_of_height(h) {
                let db = aq.pbw.dual_basis(g)?;
                for r in 0..db.len() {
                    let x = uq.e_vec(g, &db.x[r]);
                    let y = uq.f_vec(g, &db.y[r]);
                    let yphi = aq.left_action(&y, &phi)?;
                    let sx_phi = aq.left_action(&uq.antipode(&x)?, &phi)?;
                    let yk = uq.mul(&y, &uq.k(uq.gw(g)))?;
                    for (t, (_, _, psi, s)) in sources.iter().enumerate() {
                        if !yphi.is_zero() {
                            let xpsi = aq.left_action(&x, psi)?;
                            if !xpsi.is_zero() {
                                let c = aq.multiply(&yphi, &xpsi)?.scale(s);
                                any |= !c.is_zero();
                                lhs[t] = lhs[t].add(&c)?;
                            }
                        }
                        if !sx_phi.is_zero() {
                            let ypsi = aq.left_action(&yk, psi)?;
                            if !ypsi.is_zero() {
                                let c = aq.multiply(&sx_phi, &ypsi)?;
                                any |= !c.is_zero();
                                rhs[t] = rhs[t].add(&c)?;
                            }
                        }
                    }
                }
            }
            if any {
                effective = h;
                quiet = 0;
            } else {
                quiet += 1;
            }
            h += 1;
        }
        let mut witness = None;
        for (t, (nu2, j, _, _)) in sources.iter().enumerate() {
            if lhs[t] != rhs[t] {
                witness = Some(format!("differ on basis vector {j} of degree {:?}", &nu2.0[..d.rank]));
                break;
            }
        }
        Ok(Rel1Report {
            nu: nu.0[..d.rank].to_vec(),
            phi: k,
            window: w.describe(d.rank),
            effective_height: effective,
            stable_through: h - 1,
            passed: witness.is_none(),
            witness,
        })
    }

    // ---- ϑ-model operators ----

    /// `m_ξ ⊗ 1`.
    pub fn model_m(&self, xi: &StarFunctional<F>, x: &ModelElement<F>) -> Result<ModelElement<F>> {
        x.map(|_, eta| self.aq.star_multiply(xi, eta))
    }

    /// `d_x ⊗ 1`.
    pub fn model_d(&self, u: &UqElement<F>, x: &ModelElement<F>) -> Result<ModelElement<F>> {
        x.map(|_, eta| self.aq.d(u, eta))
    }

    /// `t_λ ⊗ 1`.
    pub fn model_t(&self, l: Weight, x: &ModelElement<F>) -> Result<ModelElement<F>> {
        x.map(|_, eta| Ok(self.aq.t(l, eta)))
    }

    /// Coefficient functionals `ϑ₀(c_λ⁻¹ (y_r · c_λ))` paired with `x_r`, for all `r`
    /// up to height `cap`, dropping zero coefficients.
    pub fn torus_terms(&self, lambda: Weight, cap: i64) -> Result<Vec<(String, UqElement<F>, StarFunctional<F>)>> {
        let aq = &self.aq;
        let uq = &aq.uq;
        let c = aq.c(lambda)?;
        let mut out = Vec::new();
        for h in 0..=cap {
            for g in uq.datum.grades_of_height(h) {
                let db = aq.pbw.dual_basis(g)?;
                for r in 0..db.len() {
                    let y = uq.f_vec(g, &db.y[r]);
                    let yc = aq.left_action(&y, &c)?;
                    if yc.is_zero() {
                        continue;
                    }
                    let xi = aq.theta0(&LocalAqElement { lambda, a: yc })?;
                    out.push((db.labels[r].clone(), uq.e_vec(g, &db.x[r]), xi));
                }
            }
        }
        Ok(out)
    }

    fn functional_samples(&self, cap: i64, chis: &[Weight]) -> Result<Vec<ModelElement<F>>> {
        let mut out = Vec::new();
        for h in 0..=cap {
            for g in self.aq.uq.datum.grades_of_height(h) {
                let dim = self.aq.uq.half.dim(g)?;
                for s in 0..dim {
                    for &chi in chis {
                        out.push(ModelElement::pure(StarFunctional::delta(self.aq.ty(), g, dim, s), chi));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `∂_{k_{2λ}} σ_{−2λ} = Σ_r ℓ_{c_λ⁻¹(y_r·c_λ)} ∂_{x_r}` on the `ϑ`-model: the left side is
    /// `t_{−2λ} ⊗ 1`, the right side `Σ_r m_{ϑ₀(…)} d_{x_r}`.
    pub fn torus_expression_verify(&self, lambda: Weight, cap: i64) -> Result<ModelIdentityReport> {
        let d = &self.aq.uq.datum;
        let terms = self.torus_terms(lambda, cap)?;
        let samples = self.functional_samples(cap, &[Weight::ZERO, lambda])?;
        let mut witness = None;
        for x in &samples {
            // ∂_{k_{2λ}} ↦ t_{−2λ} ⊗ s_{2λ},  σ_{−2λ} ↦ 1 ⊗ s_{−2λ}
            let lhs = self.model_t(-2 * lambda, x)?;
            let mut rhs = ModelElement::zero(self.aq.ty());
            for (_, xr, xi) in &terms {
                rhs = rhs.add(&self.model_m(xi, &self.model_d(xr, x)?)?)?;
            }
            if lhs != rhs {
                witness = Some(format!("{x:?}"));
                break;
            }
        }
        Ok(ModelIdentityReport {
            case: format!("d_k[{}] sigma_-2lambda, lambda = {}", d.fmt_weight(2 * lambda), d.fmt_weight(lambda)),
            height_cap: cap,
            surviving: terms.iter().map(|t| t.0.clone()).collect(),
            samples: samples.len(),
            passed: witness.is_none(),
            witness,
        })
    }

    /// `ϑ(∂_{f_i k_i}(c_λ⁻¹ a))` from the Leibniz rule along `Δ(f_i k_i) = f_i k_i ⊗ 1 + k_i ⊗ f_i k_i`.
    pub fn direct_fk(&self, i: usize, l: &LocalAqElement<F>) -> Result<ModelElement<F>> {
        let aq = &self.aq;
        let uq = &aq.uq;
        let d = &uq.datum;
        let fk = uq.mul(&uq.f(i), &uq.ki(i))?;
        let ty = aq.ty();
        let cinv = ModelElement::pure(StarFunctional::epsilon(ty), -l.lambda);
        let c = aq.c(l.lambda)?;
        let s = F::q_pow(-d.qexp(uq.alpha(i), l.lambda));
        // ∂_k(c⁻¹) = q^{−(α_i,λ)} c⁻¹,  ∂_{fk}(c⁻¹) = −q^{−(α_i,λ)} c⁻¹ ∂_{fk}(c) c⁻¹
        let dfk_c = aq.theta(&aq.left_action(&fk, &c)?)?;
        let dfk_cinv = aq.model_multiply(&aq.model_multiply(&cinv, &dfk_c)?, &cinv)?.scale(&-s.clone());
        let dk_cinv = cinv.scale(&s);
        let ta = aq.theta(&l.a)?;
        let tfa = aq.theta(&aq.left_action(&fk, &l.a)?)?;
        aq.model_multiply(&dfk_cinv, &ta)?.add(&aq.model_multiply(&dk_cinv, &tfa)?)
    }

    /// The expression for `∂_{f_i k_i}` obtained from the non-obvious relation at
    /// `φ = f_i · c_ν`, applied on the `ϑ`-model:
    /// `[Σ_r m_{ϑ₀(c_ν⁻¹ (y_r·φ))} d_{x_r} (t_{2μ} ⊗ s_{2α_i}) − m_{ϑ₀(c_ν⁻¹ φ)}] / K`
    /// with `μ = ν − α_i` and `K = −q^{−(α_i,ν)} [⟨ν,α_i^∨⟩]_{q_i} (q_i⁻¹ − q_i)`.
    pub fn local_fk(&self, i: usize, nu: Weight, cap: i64, x: &ModelElement<F>) -> Result<ModelElement<F>> {
        let aq = &self.aq;
        let uq = &aq.uq;
        let d = &uq.datum;
        let n = d.coroot_pair(nu, i);
        if n <= 0 {
            return Err(Error::Domain(format!("need ⟨ν, α_{}^∨⟩ > 0", i + 1)));
        }
        let ai = uq.alpha(i);
        let mu = nu - ai;
        let phi = aq.left_action(&uq.f(i), &aq.c(nu)?)?;
        let qi = d.qi(i);
        let kk = F::q_pow(-d.qexp(ai, nu))
            .mul_ref(&uq.half.qint_i(n, i))
            .mul_ref(&F::q_pow(-qi).sub_ref(&F::q_pow(qi)))
            .neg();
        let shifted = aq.model_s(2 * ai, &self.model_t(2 * mu, x)?)?;
        let mut acc = ModelElement::zero(aq.ty());
        for h in 0..=cap {
            for g in d.grades_of_height(h) {
                let db = aq.pbw.dual_basis(g)?;
                for r in 0..db.len() {
                    let y = uq.f_vec(g, &db.y[r]);
                    let yphi = aq.left_action(&y, &phi)?;
                    if yphi.is_zero() {
                        continue;
                    }
                    let xi = aq.theta0(&LocalAqElement { lambda: nu, a: yphi })?;
                    let xr = uq.e_vec(g, &db.x[r]);
                    acc = acc.add(&self.model_m(&xi, &self.model_d(&xr, &shifted)?)?)?;
                }
            }
        }
        let xi0 = aq.theta0(&LocalAqElement { lambda: nu, a: phi })?;
        acc = acc.sub(&self.model_m(&xi0, x)?)?;
        Ok(acc.scale(&kk.inv()?))
    }

    /// Compare the local expression for `∂_{f_i k_i}` with its direct action on
    /// `ϑ(c_λ⁻¹ · c_v)` for the given degrees.
    pub fn fk_expression_verify(
        &self,
        i: usize,
        nu: Weight,
        lambdas: &[Weight],
        degrees: &[Weight],
    ) -> Result<ModelIdentityReport> {
        let aq = &self.aq;
        let d = &aq.uq.datum;
        let mut samples = 0;
        let mut cap = 0;
        let mut witness = None;
        'outer: for &lam in lambdas {
            for &nu2 in degrees {
                let m = aq.module(nu2)?;
                let h = m.spaces.iter().map(|s| s.gamma.height()).max().unwrap_or(0);
                cap = cap.max(h);
                for k in 0..m.dim() {
                    let l = LocalAqElement { lambda: lam, a: aq.basis(nu2, k)? };
                    let x = aq.theta_local(&l)?;
                    let direct = self.direct_fk(i, &l)?;
                    let local = self.local_fk(i, nu, h, &x)?;
                    samples += 1;
                    if direct != local {
                        witness = Some(format!("c_{:?}^-1 v[{:?},{k}]", &lam.0[..d.rank], &nu2.0[..d.rank]));
                        break 'outer;
                    }
                }
            }
        }
        Ok(ModelIdentityReport {
            case: format!("d_f{}k{} via phi = f{}.c[{}]", i + 1, i + 1, i + 1, d.fmt_weight(nu)),
            height_cap: cap,
            surviving: Vec::new(),
            samples,
            passed: witness.is_none(),
            witness,
        })
    }

    /// `ϑ ∘ P = P̃ ∘ ϑ` for `P ∈ {σ_λ, ℓ_φ, ∂_x, ∂_{k_λ}}` and their model counterparts,
    /// on the basis of each degree in `degrees`.
    pub fn transport_check(&self, degrees: &[Weight], lambdas: &[Weight]) -> Result<Vec<CheckResult>> {
        let aq = &self.aq;
        let uq = &aq.uq;
        let mut out = Vec::new();
        let mut push = |rel: &str, case: String, ok: bool| {
            out.push(CheckResult { relation: rel.into(), case, passed: ok, witness: None });
        };
        let xs: Vec<(String, UqElement<F>)> = (0..uq.rank())
            .map(|i| (format!("e{}", i + 1), uq.e(i)))
            .chain(std::iter::once(("e1e2".to_string(), uq.e_word(&[0, (uq.rank() - 1) as u8])?)))
            .collect();
        for &nu in degrees {
            for k in 0..aq.dim(nu)? {
                let psi = aq.basis(nu, k)?;
                let tp = aq.theta(&psi)?;
                for &l in lambdas {
                    let a = aq.theta(&aq.sigma(l, &psi)?)? == aq.model_s(l, &tp)?;
                    push("transport.sigma", format!("{:?} on v[{:?},{k}]", l.0, nu.0), a);
                    let lhs = aq.theta(&aq.left_action(&uq.k(l), &psi)?)?;
                    let rhs = aq.model_s(l, &self.model_t(-l, &tp)?)?;
                    push("transport.d_k", format!("{:?} on v[{:?},{k}]", l.0, nu.0), lhs == rhs);
                }
                for (n, x) in &xs {
                    let lhs = aq.theta(&aq.left_action(x, &psi)?)?;
                    push("transport.d_x", format!("{n} on v[{:?},{k}]", nu.0), lhs == self.model_d(x, &tp)?);
                }
                for &lam in degrees {
                    for j in 0..aq.dim(lam)? {
                        // φ = c_λ⁻¹ c_v ∈ (S₁⁻¹A_q)(0):  ϑ(φψ) = ϑ(c_λ⁻¹) ϑ(c_v ψ)
                        let a = aq.basis(lam, j)?;
                        let phi = LocalAqElement { lambda: lam, a: a.clone() };
                        let lhs = aq.theta_local(&LocalAqElement { lambda: lam, a: aq.multiply(&a, &psi)? })?;
                        let rhs = self.model_m(&aq.theta0(&phi)?, &tp)?;
                        push(
                            "transport.l",
                            format!("c_{:?}^-1 v[{:?},{j}] on v[{:?},{k}]", lam.0, lam.0, nu.0),
                            lhs == rhs,
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// Flattened window images of an operator, as one coordinate vector.
    fn flatten(&self, p: &DqOperator<F>, w: &Window, targets: &[Weight]) -> Result<Vec<F>> {
        let mut v = Vec::new();
        for img in self.materialize(p, w)? {
            for &t in targets {
                let dim = self.aq.dim(t)?;
                match img.component(t) {
                    Some(x) => v.extend(x.iter().cloned()),
                    None => v.extend(std::iter::repeat_n(F::zero(), dim)),
                }
            }
            if img.parts().any(|(nu, _)| !targets.contains(nu)) {
                return Err(Error::Capacity("operator image leaves the target degrees".into()));
            }
        }
        Ok(v)
    }

    /// Rank of the family `{P ∂_{k_λ}}` (`right = true`) or `{σ_λ P}` over the
    /// transversal of `Λ/2Λ` and the probes, as matrices on the window.
    pub fn coset_independence(
        &self,
        probes: &[(String, DqOperator<F>)],
        w: &Window,
        targets: &[Weight],
        right: bool,
    ) -> Result<IndependenceReport> {
        let uq = &self.aq.uq;
        let mut vecs = Vec::new();
        for l in uq.datum.transversal() {
            for (_, p) in probes {
                let op = if right { p.then(&DqOperator::d(uq.k(l))) } else { DqOperator::sigma(l).then(p) };
                vecs.push(self.flatten(&op, w, targets)?);
            }
        }
        Ok(IndependenceReport {
            family: if right { "P d_k[lambda]".into() } else { "sigma_lambda P".into() },
            members: vecs.len(),
            rank: rank_of(&vecs),
            window: w.describe(uq.rank()),
        })
    }

    /// `σ_λ ℓ_φ ∂_u σ_{−λ} = q^{(λ,ν)} ℓ_φ ∂_u` for `φ ∈ A_q(ν)`.
    pub fn sigma_exchange(&self, l: Weight, phi: &AqElement<F>, u: &UqElement<F>, w: &Window) -> Result<CheckResult> {
        let nu = phi.degree().ok_or_else(|| Error::Domain("phi must be homogeneous".into()))?;
        let core = DqOperator::l(phi.clone()).then(&DqOperator::d(u.clone()));
        let lhs = DqOperator::compose(&[&DqOperator::sigma(l), &core, &DqOperator::sigma(-l)]);
        let rhs = core.scale(&F::q_pow(self.aq.uq.datum.qexp(l, nu)));
        self.check("sigma-exchange", format!("{:?}", l.0), &lhs, &rhs, w)
    }
}
