//! Finite-dimensional irreducible modules `V(ν)`, tensor products and the
//! projection of `V(ν) ⊗ V(ν')` onto its top component `V(ν + ν')`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use crate::cartan::{RootVec, Weight};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::QField;
use crate::uq::{Bx, Uq, UqElement};

/// Default bound on `dim V(ν)`.
pub const DEFAULT_DIM_CAP: usize = 64;

/// A finite-dimensional weight module given by action matrices (acting on columns).
pub struct Rep<F> {
    pub uq: Arc<Uq<F>>,
    pub weights: Vec<Weight>,
    pub e: Vec<Matrix<F>>,
    pub f: Vec<Matrix<F>>,
    memo: RwLock<HashMap<(bool, Bx), Arc<Matrix<F>>>>,
}

impl<F: QField> Rep<F> {
    pub fn new(uq: Arc<Uq<F>>, weights: Vec<Weight>, e: Vec<Matrix<F>>, f: Vec<Matrix<F>>) -> Self {
        Rep { uq, weights, e, f, memo: RwLock::new(HashMap::new()) }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Diagonal of `k_λ`.
    pub fn k_diag(&self, l: Weight) -> Vec<F> {
        self.weights.iter().map(|&w| F::q_pow(self.uq.datum.qexp(l, w))).collect()
    }

    pub fn k_matrix(&self, l: Weight) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (i, x) in self.k_diag(l).into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Matrix of a half basis element `E_b` (`e_side`) or `F_b`.
    pub fn half_matrix(&self, e_side: bool, b: Bx) -> Result<Arc<Matrix<F>>> {
        if let Some(m) = self.memo.read().get(&(e_side, b)) {
            return Ok(m.clone());
        }
        let m = if b.g.is_zero() {
            Matrix::identity(self.dim())
        } else {
            let (j, t) = self.uq.half.grade(b.g)?.split[b.idx()];
            let tail = self.half_matrix(e_side, Bx::new(b.g - RootVec::unit(j), t))?;
            let g = if e_side { &self.e[j] } else { &self.f[j] };
            g.mul(&tail)
        };
        let m = Arc::new(m);
        self.memo.write().insert((e_side, b), m.clone());
        Ok(m)
    }

    /// `u · v`.
    pub fn act(&self, u: &UqElement<F>, v: &[F]) -> Result<Vec<F>> {
        if u.ty != self.uq.ty() {
            return Err(Error::MixedDatum);
        }
        let mut out = vec![F::zero(); self.dim()];
        for (m, c) in u.terms() {
            let x = self.half_matrix(true, m.e)?.apply(v);
            let kd = self.k_diag(m.k);
            let x: Vec<F> = x.iter().zip(&kd).map(|(a, b)| a.mul_ref(b)).collect();
            let x = self.half_matrix(false, m.f)?.apply(&x);
            for (o, y) in out.iter_mut().zip(x) {
                if !y.is_zero() {
                    *o = o.add_ref(&y.mul_ref(c));
                }
            }
        }
        Ok(out)
    }

    pub fn matrix_of(&self, u: &UqElement<F>) -> Result<Matrix<F>> {
        let cols: Vec<Vec<F>> = (0..self.dim()).map(|j| self.act(u, &unit(self.dim(), j))).collect::<Result<_>>()?;
        Ok(Matrix::from_cols(self.dim(), &cols))
    }

    pub fn weight_indices(&self, w: Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == w).collect()
    }

    pub fn distinct_weights(&self) -> Vec<Weight> {
        let mut ws = self.weights.clone();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Vectors of weight `w` killed by every `e_i`, as full coordinate vectors.
    pub fn singular_vectors(&self, w: Weight) -> Vec<Vec<F>> {
        let idx = self.weight_indices(w);
        if idx.is_empty() {
            return Vec::new();
        }
        let mut rows = Vec::new();
        for e in &self.e {
            for r in 0..self.dim() {
                let row: Vec<F> = idx.iter().map(|&c| e.get(r, c).clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let kernel = if rows.is_empty() {
            (0..idx.len()).map(|j| unit(idx.len(), j)).collect()
        } else {
            Matrix::from_rows(rows).nullspace()
        };
        kernel
            .into_iter()
            .map(|k| {
                let mut v = vec![F::zero(); self.dim()];
                for (x, &i) in k.into_iter().zip(&idx) {
                    v[i] = x;
                }
                v
            })
            .collect()
    }

    /// Defining relations of `U_q(g)` as matrix identities; returns the failing ones.
    pub fn check_relations(&self) -> Result<Vec<String>> {
        let uq = &self.uq;
        let r = uq.rank();
        let mut bad = Vec::new();
        for i in 0..r {
            let ki = self.k_matrix(uq.alpha(i));
            let ki_inv = self.k_matrix(-uq.alpha(i));
            for j in 0..r {
                let comm = self.e[i].mul(&self.f[j]).sub(&self.f[j].mul(&self.e[i]));
                let want = if i == j { ki.sub(&ki_inv).scale(&uq.c[i]) } else { Matrix::zeros(self.dim(), self.dim()) };
                if comm != want {
                    bad.push(format!("[e{}, f{}]", i + 1, j + 1));
                }
                let kw = self.k_matrix(uq.datum.fundamental(i));
                let kw_inv = self.k_matrix(-uq.datum.fundamental(i));
                let s = F::q_pow(uq.datum.qexp(uq.datum.fundamental(i), uq.alpha(j)));
                if kw.mul(&self.e[j]).mul(&kw_inv) != self.e[j].scale(&s) {
                    bad.push(format!("k_w{} e{} k_w{}^-1", i + 1, j + 1, i + 1));
                }
                if kw.mul(&self.f[j]).mul(&kw_inv) != self.f[j].scale(&s.inv()?) {
                    bad.push(format!("k_w{} f{} k_w{}^-1", i + 1, j + 1, i + 1));
                }
                if i != j {
                    let (se, sf) = uq.serre(i, j)?;
                    if !self.matrix_of(&se)?.is_zero() {
                        bad.push(format!("e-Serre({}, {})", i + 1, j + 1));
                    }
                    if !self.matrix_of(&sf)?.is_zero() {
                        bad.push(format!("f-Serre({}, {})", i + 1, j + 1));
                    }
                }
            }
        }
        Ok(bad)
    }

    /// `M ⊗ N` with `x` acting through `Δ(x)`; basis `(a, b) ↦ a·dim N + b`.
    pub fn tensor(&self, o: &Rep<F>) -> Rep<F> {
        let uq = self.uq.clone();
        let (n1, n2) = (self.dim(), o.dim());
        let mut weights = Vec::with_capacity(n1 * n2);
        for a in &self.weights {
            for b in &o.weights {
                weights.push(*a + *b);
            }
        }
        let i1 = Matrix::identity(n1);
        let i2 = Matrix::identity(n2);
        let mut e = Vec::new();
        let mut f = Vec::new();
        for i in 0..uq.rank() {
            let ai = uq.alpha(i);
            // Δ(e_i) = e_i ⊗ 1 + k_i ⊗ e_i, Δ(f_i) = f_i ⊗ k_i⁻¹ + 1 ⊗ f_i
            e.push(self.e[i].kronecker(&i2).add(&self.k_matrix(ai).kronecker(&o.e[i])));
            f.push(self.f[i].kronecker(&o.k_matrix(-ai)).add(&i1.kronecker(&o.f[i])));
        }
        Rep::new(uq, weights, e, f)
    }
}

pub fn unit<F: QField>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

/// One weight space `ν − γ` of `V(ν)`.
#[derive(Clone)]
pub struct WeightSpace<F> {
    pub gamma: RootVec,
    /// Indices `t` of the internal `F_t` with basis vectors `F_t v_ν`.
    pub words: Vec<usize>,
    pub offset: usize,
    /// Coordinates of `F_s v_ν` (all `s` in the grade) in this basis.
    pub quotient: Matrix<F>,
}

/// `V(ν)`, built as the quotient of the Verma module by its maximal submodule.
pub struct IrreducibleModule<F> {
    pub nu: Weight,
    pub rep: Rep<F>,
    pub spaces: Vec<WeightSpace<F>>,
    by_gamma: HashMap<RootVec, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleReport {
    pub weight: Vec<i64>,
    pub dim: usize,
    pub weyl_dim: u64,
    pub weights: Vec<Vec<i64>>,
    pub e: Vec<Vec<Vec<String>>>,
    pub f: Vec<Vec<Vec<String>>>,
}

impl<F: QField> IrreducibleModule<F> {
    pub fn build(uq: Arc<Uq<F>>, nu: Weight, dim_cap: usize) -> Result<Self> {
        let d = uq.datum.clone();
        if !d.is_dominant(nu) {
            return Err(Error::Domain(format!("weight ({}) is not dominant", d.fmt_weight(nu))));
        }
        let expected = d.weyl_dim(nu) as usize;
        if expected > dim_cap {
            return Err(Error::Capacity(format!("dim V({}) = {expected} exceeds the cap {dim_cap}", d.fmt_weight(nu))));
        }
        let r = uq.rank();
        let mut spaces: Vec<WeightSpace<F>> = Vec::new();
        let mut by_gamma: HashMap<RootVec, usize> = HashMap::new();
        spaces.push(WeightSpace { gamma: RootVec::ZERO, words: vec![0], offset: 0, quotient: Matrix::identity(1) });
        by_gamma.insert(RootVec::ZERO, 0);
        let mut total = 1;
        let mut h = 1;
        loop {
            let mut any = false;
            for g in d.grades_of_height(h) {
                if (0..r).all(|i| !by_gamma.contains_key(&(g - RootVec::unit(i)))) {
                    continue;
                }
                // Φ(w) = (Q_{γ−α_i}(e_i w))_i stacked
                let mut rows: Vec<Vec<F>> = Vec::new();
                for i in 0..r {
                    let low = g - RootVec::unit(i);
                    let Some(&li) = by_gamma.get(&low) else { continue };
                    let ei = verma_e(&uq, nu, i, g)?;
                    let proj = spaces[li].quotient.mul(&ei);
                    for row in 0..proj.rows() {
                        rows.push(proj.row(row).to_vec());
                    }
                }
                if rows.is_empty() {
                    continue;
                }
                let phi = Matrix::from_rows(rows);
                let (rr, piv) = phi.rref();
                if piv.is_empty() {
                    continue;
                }
                let quotient = Matrix::from_rows((0..piv.len()).map(|i| rr.row(i).to_vec()).collect());
                debug_assert_eq!(quotient.cols(), uq.half.dim(g)?);
                by_gamma.insert(g, spaces.len());
                spaces.push(WeightSpace { gamma: g, words: piv.clone(), offset: total, quotient });
                total += piv.len();
                any = true;
                if total > dim_cap {
                    return Err(Error::Capacity(format!("module exceeds the dimension cap {dim_cap}")));
                }
            }
            if !any {
                break;
            }
            h += 1;
        }
        if total != expected {
            return Err(Error::Violation(format!(
                "V({}) has dimension {total}, Weyl formula gives {expected}",
                d.fmt_weight(nu)
            )));
        }
        let weights: Vec<Weight> =
            spaces.iter().flat_map(|s| std::iter::repeat(nu - d.root_to_weight(s.gamma)).take(s.words.len())).collect();
        let mut e = vec![Matrix::zeros(total, total); r];
        let mut f = vec![Matrix::zeros(total, total); r];
        for s in &spaces {
            for i in 0..r {
                // e_i: γ → γ − α_i
                if let Some(&li) = by_gamma.get(&(s.gamma - RootVec::unit(i))) {
                    let lo = &spaces[li];
                    let m = lo.quotient.mul(&verma_e(&uq, nu, i, s.gamma)?);
                    for (c, &t) in s.words.iter().enumerate() {
                        for row in 0..m.rows() {
                            e[i].set(lo.offset + row, s.offset + c, m.get(row, t).clone());
                        }
                    }
                }
                // f_i: γ → γ + α_i
                let up = s.gamma + RootVec::unit(i);
                if let Some(&ui) = by_gamma.get(&up) {
                    let hi = &spaces[ui];
                    let lm = uq.half.grade(up)?;
                    let lm = lm.lmul[i].as_ref().expect("lmul");
                    for (c, &t) in s.words.iter().enumerate() {
                        let v = hi.quotient.apply(lm.row(t));
                        for (row, x) in v.into_iter().enumerate() {
                            f[i].set(hi.offset + row, s.offset + c, x);
                        }
                    }
                }
            }
        }
        let rep = Rep::new(uq, weights, e, f);
        Ok(IrreducibleModule { nu, rep, spaces, by_gamma })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn space(&self, g: RootVec) -> Option<&WeightSpace<F>> {
        self.by_gamma.get(&g).map(|&i| &self.spaces[i])
    }

    /// Coordinates of `F_b v_ν` for an internal `f`-basis element.
    pub fn f_image(&self, b: Bx) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        if let Some(s) = self.space(b.g) {
            for (r, x) in s.quotient.col(b.idx()).into_iter().enumerate() {
                v[s.offset + r] = x;
            }
        }
        v
    }

    pub fn highest(&self) -> Vec<F> {
        unit(self.dim(), 0)
    }

    /// `γ` with `v` of weight `ν − γ`, for basis index `i`.
    pub fn depth(&self, i: usize) -> RootVec {
        let s = self.spaces.iter().rev().find(|s| s.offset <= i).expect("index in range");
        s.gamma
    }

    pub fn report(&self, emit_matrices: bool) -> ModuleReport {
        let d = &self.rep.uq.datum;
        let fmt = |m: &Matrix<F>| -> Vec<Vec<String>> {
            (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
        };
        ModuleReport {
            weight: self.nu.0[..d.rank].to_vec(),
            dim: self.dim(),
            weyl_dim: d.weyl_dim(self.nu),
            weights: self.rep.weights.iter().map(|w| w.0[..d.rank].to_vec()).collect(),
            e: if emit_matrices { self.rep.e.iter().map(fmt).collect() } else { vec![] },
            f: if emit_matrices { self.rep.f.iter().map(fmt).collect() } else { vec![] },
        }
    }
}

/// `e_i` on the Verma module, grade `γ → γ − α_i`, in the internal `f`-bases.
fn verma_e<F: QField>(uq: &Uq<F>, nu: Weight, i: usize, g: RootVec) -> Result<Matrix<F>> {
    let gr = uq.half.grade(g)?;
    let a = gr.der_a[i].as_ref().expect("derivation");
    let b = gr.der_b[i].as_ref().expect("derivation");
    let e = uq.datum.qexp(uq.alpha(i), nu);
    // rows of A, B index the source; transpose to act on columns
    let m = a.scale(&F::q_pow(e)).sub(&b.scale(&F::q_pow(-e))).scale(&uq.c[i]);
    Ok(m.transpose())
}

/// Projection `V(ν) ⊗ V(ν') → V(ν + ν')` along the non-top isotypic components,
/// normalized by `v_ν ⊗ v_ν' ↦ v_{ν+ν'}`.
pub struct CartanProjection<F> {
    pub matrix: Matrix<F>,
    /// Dimensions of the isotypic pieces: top first, then the complement.
    pub top_dim: usize,
    pub complement_dim: usize,
}

impl<F: QField> CartanProjection<F> {
    pub fn build(a: &IrreducibleModule<F>, b: &IrreducibleModule<F>, top: &IrreducibleModule<F>) -> Result<Self> {
        let uq = a.rep.uq.clone();
        let d = &uq.datum;
        if top.nu != a.nu + b.nu {
            return Err(Error::Domain("target must be V(ν + ν')".into()));
        }
        let t = a.rep.tensor(&b.rep);
        let n = t.dim();
        let hv = unit::<F>(n, 0);
        let mut proj: Matrix<F> = Matrix::zeros(top.dim(), n);
        // complement vectors by weight, built from the top weight downwards
        let mut comp: BTreeMap<RootVec, Vec<Vec<F>>> = BTreeMap::new();
        let mut grades: Vec<RootVec> =
            t.distinct_weights().into_iter().filter_map(|w| d.weight_to_root(top.nu - w)).collect();
        grades.sort_by_key(|g| (g.height(), *g));
        let mut top_dim = 0;
        let mut comp_dim = 0;
        for g in grades {
            let w = top.nu - d.root_to_weight(g);
            let idx = t.weight_indices(w);
            let mut c: Vec<Vec<F>> = Vec::new();
            for i in 0..uq.rank() {
                if let Some(prev) = comp.get(&(g - RootVec::unit(i))) {
                    for v in prev {
                        c.push(t.f[i].apply(v));
                    }
                }
            }
            if !g.is_zero() {
                c.extend(t.singular_vectors(w));
            }
            let restrict = |v: &Vec<F>| idx.iter().map(|&k| v[k].clone()).collect::<Vec<F>>();
            let keep = independent_subset(&c.iter().map(restrict).collect::<Vec<_>>());
            let c: Vec<Vec<F>> = keep.into_iter().map(|k| c[k].clone()).collect();
            // top vectors F_b (v ⊗ v')
            let mut tops: Vec<Vec<F>> = Vec::new();
            let mut images: Vec<Vec<F>> = Vec::new();
            for bi in 0..uq.half.dim(g)? {
                let bx = Bx::new(g, bi);
                tops.push(t.half_matrix(false, bx)?.apply(&hv));
                images.push(top.f_image(bx));
            }
            let keep = independent_subset(&tops.iter().map(restrict).collect::<Vec<_>>());
            let tops: Vec<Vec<F>> = keep.iter().map(|&k| tops[k].clone()).collect();
            let images: Vec<Vec<F>> = keep.iter().map(|&k| images[k].clone()).collect();
            if tops.len() + c.len() != idx.len() {
                return Err(Error::Violation(format!(
                    "weight ({}): top {} + complement {} ≠ {}",
                    d.fmt_weight(w),
                    tops.len(),
                    c.len(),
                    idx.len()
                )));
            }
            top_dim += tops.len();
            comp_dim += c.len();
            let mut cols: Vec<Vec<F>> = tops.iter().map(restrict).collect();
            cols.extend(c.iter().map(restrict));
            let basis = Matrix::from_cols(idx.len(), &cols);
            let inv = basis
                .inverse()
                .map_err(|_| Error::Violation(format!("weight ({}) does not decompose", d.fmt_weight(w))))?;
            // w = Σ α_j top_j + …, π(w) = Σ α_j image_j
            for (col, &k) in idx.iter().enumerate() {
                for (j, img) in images.iter().enumerate() {
                    let a = inv.get(j, col);
                    if a.is_zero() {
                        continue;
                    }
                    for (row, x) in img.iter().enumerate() {
                        if !x.is_zero() {
                            let cur = proj.get(row, k).clone();
                            proj.set(row, k, cur.add_ref(&x.mul_ref(a)));
                        }
                    }
                }
            }
            comp.insert(g, c);
        }
        if top_dim != top.dim() || top_dim + comp_dim != n {
            return Err(Error::Violation("isotypic dimensions do not add up".into()));
        }
        Ok(CartanProjection { matrix: proj, top_dim, complement_dim: comp_dim })
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.matrix.apply(v)
    }
}

/// Cache of irreducible modules and projections for one algebra.
pub struct ModuleCache<F> {
    pub uq: Arc<Uq<F>>,
    pub dim_cap: usize,
    modules: RwLock<HashMap<Weight, Arc<IrreducibleModule<F>>>>,
    projections: RwLock<HashMap<(Weight, Weight), Arc<CartanProjection<F>>>>,
}

impl<F: QField> ModuleCache<F> {
    pub fn new(uq: Arc<Uq<F>>, dim_cap: usize) -> Self {
        ModuleCache { uq, dim_cap, modules: RwLock::new(HashMap::new()), projections: RwLock::new(HashMap::new()) }
    }

    pub fn module(&self, nu: Weight) -> Result<Arc<IrreducibleModule<F>>> {
        if let Some(m) = self.modules.read().get(&nu) {
            return Ok(m.clone());
        }
        let m = Arc::new(IrreducibleModule::build(self.uq.clone(), nu, self.dim_cap)?);
        Ok(self.modules.write().entry(nu).or_insert(m).clone())
    }

    pub fn projection(&self, a: Weight, b: Weight) -> Result<Arc<CartanProjection<F>>> {
        if let Some(p) = self.projections.read().get(&(a, b)) {
            return Ok(p.clone());
        }
        let (ma, mb, mt) = (self.module(a)?, self.module(b)?, self.module(a + b)?);
        let p = Arc::new(CartanProjection::build(&ma, &mb, &mt)?);
        Ok(self.projections.write().entry((a, b)).or_insert(p).clone())
    }
}
