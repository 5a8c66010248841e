//! The Drinfeld pairing `τ: U_q(b⁺) × U_q(b⁻) → F` and dual PBW bases.

use std::sync::Arc;

use serde::Serialize;

use crate::braid::Pbw;
use crate::cartan::RootVec;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::QField;
use crate::uq::{SubalgebraTag, Uq, UqElement};

impl<F: QField> Uq<F> {
    /// `τ(x, y)` for `x ∈ U_q(b⁺)`, `y ∈ U_q(b⁻)`.
    ///
    /// On monomials `τ(k_λ E, F k_μ) = q^{(λ,γ_E) − (λ,μ)} τ(E, F)`, and
    /// `τ(E_a, F_b)` is the Gram entry of the word basis.
    pub fn tau(&self, x: &UqElement<F>, y: &UqElement<F>) -> Result<F> {
        self.check(x)?;
        self.check(y)?;
        if !self.is_in(SubalgebraTag::BPlus, x) {
            return Err(Error::Domain("first argument of τ must lie in U_q(b+)".into()));
        }
        if !self.is_in(SubalgebraTag::BMinus, y) {
            return Err(Error::Domain("second argument of τ must lie in U_q(b-)".into()));
        }
        let d = &self.datum;
        let mut acc = F::zero();
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                if mx.e.g != my.f.g {
                    continue;
                }
                let gr = self.half.grade(mx.e.g)?;
                let t = gr.gram.get(mx.e.idx(), my.f.idx());
                if t.is_zero() {
                    continue;
                }
                let e = d.qexp(mx.k, self.gw(mx.e.g)) - d.qexp(mx.k, my.k);
                acc = acc.add_ref(&cx.mul_ref(cy).mul_ref(t).mul_q_pow(e));
            }
        }
        Ok(acc)
    }
}

/// Biorthogonal bases of `U_q(n⁺)_γ` and `U_q(n⁻)_{−γ}`.
#[derive(Clone)]
pub struct DualBasis<F> {
    pub g: RootVec,
    /// `τ(PBW e_a, PBW f_b)`.
    pub gram: Matrix<F>,
    /// Internal coordinates of `x_r` (the PBW `e`-monomials).
    pub x: Vec<Vec<F>>,
    /// Internal coordinates of `y_r`, with `τ(x_r, y_s) = δ_rs`.
    pub y: Vec<Vec<F>>,
    pub labels: Vec<String>,
}

impl<F: QField> DualBasis<F> {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub gamma: Vec<i64>,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

impl<F: QField> Pbw<F> {
    /// Gram matrix of `τ` in the PBW bases of grade `g`.
    pub fn gram(&self, g: RootVec) -> Result<Matrix<F>> {
        let pg = self.grade(g)?;
        let h = self.uq.half.grade(g)?;
        Ok(pg.e_mat.mul(&h.gram).mul(&pg.f_mat.transpose()))
    }

    pub fn dual_basis(&self, g: RootVec) -> Result<Arc<DualBasis<F>>> {
        if let Some(d) = self.duals.read().get(&g) {
            return Ok(d.clone());
        }
        let pg = self.grade(g)?;
        let gram = self.gram(g)?;
        let inv = gram.inverse().map_err(|_| Error::Violation(format!("τ is degenerate on grade {:?}", g.0)))?;
        let m = inv.transpose().mul(&pg.f_mat);
        let x = (0..pg.exps.len()).map(|r| pg.e_mat.row(r).to_vec()).collect();
        let y = (0..pg.exps.len()).map(|r| m.row(r).to_vec()).collect();
        let labels = pg.exps.iter().map(|k| self.monomial_name('e', k)).collect();
        let d = Arc::new(DualBasis { g, gram, x, y, labels });
        self.duals.write().insert(g, d.clone());
        Ok(d)
    }

    /// Dual bases of every grade of height at most `cap`.
    pub fn dual_bases(&self, cap: i64) -> Result<Vec<Arc<DualBasis<F>>>> {
        let mut out = Vec::new();
        for h in 0..=cap {
            for g in self.uq.datum.grades_of_height(h) {
                out.push(self.dual_basis(g)?);
            }
        }
        Ok(out)
    }

    pub fn gram_report(&self, g: RootVec) -> Result<GramReport> {
        let pg = self.grade(g)?;
        let m = self.gram(g)?;
        Ok(GramReport {
            gamma: g.0[..self.uq.rank()].to_vec(),
            rows: pg.exps.iter().map(|k| self.monomial_name('e', k)).collect(),
            cols: pg.exps.iter().map(|k| self.monomial_name('f', k)).collect(),
            matrix: (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect(),
        })
    }
}
