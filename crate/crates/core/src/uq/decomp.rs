//! Subalgebra membership and the decomposition `U_q(g) = ⊕_{λ̄ ∈ Λ/2Λ} U^e_q(g) k_λ`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Mono, Uq, UqElement};
use crate::cartan::Weight;
use crate::error::Result;
use crate::scalar::QField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SubalgebraTag {
    /// `U_q(n⁺)`
    NPlus,
    /// `U_q(n⁻)`
    NMinus,
    /// `Ũ_q(n⁻) = ⟨f_i k_i⟩`
    NMinusTilde,
    /// `U_q(h)`
    H,
    /// `U^e_q(h) = span{k_{2λ}}`
    HEven,
    /// `U_q(b⁺)`
    BPlus,
    /// `U_q(b⁻)`
    BMinus,
    /// `U^e_q(g)`
    Even,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdStabilityReport {
    pub coset: Weight,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AdStabilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn even(w: Weight) -> bool {
    w.0.iter().all(|x| x.rem_euclid(2) == 0)
}

impl<F: QField> Uq<F> {
    /// `λ − (weight of F)` reduced mod 2Λ; `F k_λ E` lies in `U^e_q(g) k_μ` exactly for this class.
    pub fn coset_of(&self, m: &Mono) -> Weight {
        self.datum.mod2_class(m.k - self.gw(m.f.g))
    }

    pub fn mono_in(&self, tag: SubalgebraTag, m: &Mono) -> bool {
        let nf = m.f.g.is_zero();
        let ne = m.e.g.is_zero();
        let nk = m.k.is_zero();
        match tag {
            SubalgebraTag::NPlus => nf && nk,
            SubalgebraTag::NMinus => ne && nk,
            SubalgebraTag::NMinusTilde => ne && m.k == self.gw(m.f.g),
            SubalgebraTag::H => nf && ne,
            SubalgebraTag::HEven => nf && ne && even(m.k),
            SubalgebraTag::BPlus => nf,
            SubalgebraTag::BMinus => ne,
            SubalgebraTag::Even => self.coset_of(m).is_zero(),
        }
    }

    pub fn is_in(&self, tag: SubalgebraTag, u: &UqElement<F>) -> bool {
        u.ty == self.ty() && u.terms().all(|(m, _)| self.mono_in(tag, m))
    }

    /// Components `u_λ ∈ U^e_q(g)` with `u = Σ_λ u_λ k_λ`, keyed by the transversal representative.
    pub fn decompose_mod2(&self, u: &UqElement<F>) -> Result<BTreeMap<Weight, UqElement<F>>> {
        self.check(u)?;
        let mut parts: BTreeMap<Weight, UqElement<F>> = BTreeMap::new();
        for (m, c) in u.terms() {
            let r = self.coset_of(m);
            // F k_λ E = (F k_{λ} E k_{−r}) k_r and k_{−r} commutes past E up to a scalar
            let shifted = Mono { k: m.k - r, ..*m };
            let s = c.mul_q_pow(self.datum.qexp(r, self.gw(m.e.g)));
            parts.entry(r).or_insert_with(|| self.zero()).add_term(shifted, s);
        }
        parts.retain(|_, v| !v.is_zero());
        Ok(parts)
    }

    /// Check `ad(u)(v) ∈ U^e_q(g) k_λ` for `u` running over words in
    /// `e_i, f_i, k_{ϖ_i}` of length ≤ `degree` and `v` over `U^e_q(g)` monomials
    /// of total height ≤ `degree`, times `k_λ`.
    pub fn check_ad_stability(&self, lambda: Weight, degree: usize) -> Result<AdStabilityReport> {
        let r = self.rank();
        let coset = self.datum.mod2_class(lambda);
        let mut gens = Vec::new();
        for i in 0..r {
            gens.push((format!("e{}", i + 1), self.e(i)));
            gens.push((format!("f{}", i + 1), self.f(i)));
            gens.push((format!("k[w{}]", i + 1), self.k(self.datum.fundamental(i))));
        }
        let mut us: Vec<(String, UqElement<F>)> = vec![("1".into(), self.one())];
        let mut layer = us.clone();
        for _ in 0..degree {
            let mut next = Vec::new();
            for (n, u) in &layer {
                for (g, x) in &gens {
                    next.push((format!("{n}*{g}"), self.mul(u, x)?));
                }
            }
            us.extend(next.iter().cloned());
            layer = next;
        }
        let mut vgens = Vec::new();
        for i in 0..r {
            vgens.push((format!("e{}", i + 1), self.e(i)));
            vgens.push((format!("f{}k{}", i + 1, i + 1), self.mul(&self.f(i), &self.ki(i))?));
            vgens.push((format!("k[2w{}]", i + 1), self.k(2 * self.datum.fundamental(i))));
        }
        let kl = self.k(lambda);
        let mut vs: Vec<(String, UqElement<F>)> = vec![(format!("k{:?}", &lambda.0[..r]), kl.clone())];
        let mut layer: Vec<(String, UqElement<F>)> = vec![("1".into(), self.one())];
        for _ in 0..degree.min(2) {
            let mut next = Vec::new();
            for (n, v) in &layer {
                for (g, x) in &vgens {
                    next.push((format!("{n}*{g}"), self.mul(v, x)?));
                }
            }
            for (n, v) in &next {
                vs.push((format!("{n}*k{:?}", &lambda.0[..r]), self.mul(v, &kl)?));
            }
            layer = next;
        }
        let mut report = AdStabilityReport { coset, checked: 0, failures: Vec::new() };
        for (un, u) in &us {
            for (vn, v) in &vs {
                let w = self.adjoint(u, v)?;
                let parts = self.decompose_mod2(&w)?;
                report.checked += 1;
                if parts.keys().any(|k| *k != coset) {
                    report.failures.push(format!("ad({un})({vn})"));
                }
            }
        }
        Ok(report)
    }
}
