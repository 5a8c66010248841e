//! The algebra `f ≅ U_q(n⁺) ≅ U_q(n⁻)` as words modulo the radical of the
//! Drinfeld pairing.
//!
//! For every grade `γ ∈ Q⁺` a basis of standard words is chosen greedily among
//! the spanning words `i·b` (`b` a basis word of grade `γ − α_i`). The pairing
//! of an `e`-word with an `f`-word is symmetric in the two words, so the same
//! words serve as basis for both halves and the Gram matrix is symmetric.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::cartan::{CartanDatum, RootVec};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::{qint, QExp, QField};

pub type Word = Vec<u8>;

/// Tables for one grade `γ`.
pub struct Grade<F> {
    pub g: RootVec,
    pub words: Vec<Word>,
    /// `(first letter, index of the tail in grade γ − α_first)`; empty for γ = 0.
    pub split: Vec<(usize, usize)>,
    /// `gram[s][t] = τ(e_{w_s}, f_{w_t})`.
    pub gram: Matrix<F>,
    pub gram_inv: Matrix<F>,
    /// `lmul[i]`: rows index grade `γ − α_i`, row `s` = coordinates of `i · w_s`.
    pub lmul: Vec<Option<Matrix<F>>>,
    /// `rmul[i]`: rows index grade `γ − α_i`, row `s` = coordinates of `w_s · i`.
    pub rmul: Vec<Option<Matrix<F>>>,
    /// Skew derivations on the `f` side, grade `γ → γ − α_i`:
    /// `e_i y = y e_i + (A_i(y) k_i − B_i(y) k_i⁻¹)/(q_i − q_i⁻¹)`.
    pub der_a: Vec<Option<Matrix<F>>>,
    pub der_b: Vec<Option<Matrix<F>>>,
}

impl<F> Grade<F> {
    pub fn dim(&self) -> usize {
        self.words.len()
    }
}

pub struct Half<F> {
    pub datum: Arc<CartanDatum>,
    pub cap: i64,
    grades: RwLock<HashMap<RootVec, Arc<Grade<F>>>>,
    pv: RwLock<HashMap<Word, Arc<Vec<F>>>>,
    prod: RwLock<HashMap<(RootVec, usize, RootVec, usize), Arc<Vec<F>>>>,
    /// `1/(q_i^{-1} − q_i)`.
    pub tau_simple: Vec<F>,
}

pub fn word_grade(w: &[u8]) -> RootVec {
    let mut g = RootVec::ZERO;
    for &i in w {
        g.0[i as usize] += 1;
    }
    g
}

impl<F: QField> Half<F> {
    pub fn new(datum: Arc<CartanDatum>, cap: i64) -> Self {
        let tau_simple = (0..datum.rank)
            .map(|i| {
                let qi = datum.qi(i);
                (F::q_pow(-qi) - F::q_pow(qi)).inv().expect("q_i^{-1} ≠ q_i")
            })
            .collect();
        Half {
            datum,
            cap,
            grades: RwLock::new(HashMap::new()),
            pv: RwLock::new(HashMap::new()),
            prod: RwLock::new(HashMap::new()),
            tau_simple,
        }
    }

    fn check(&self, g: RootVec) -> Result<()> {
        if g.height() > self.cap {
            return Err(Error::Capacity(format!(
                "grade {:?} has height {} above the cap {}",
                &g.0[..self.datum.rank],
                g.height(),
                self.cap
            )));
        }
        Ok(())
    }

    pub fn alpha(&self, i: usize) -> RootVec {
        RootVec::unit(i)
    }

    /// Tables for grade `g`; `None` when `g ∉ Q⁺`.
    pub fn try_grade(&self, g: RootVec) -> Result<Option<Arc<Grade<F>>>> {
        if !g.is_nonneg() {
            return Ok(None);
        }
        self.grade(g).map(Some)
    }

    pub fn grade(&self, g: RootVec) -> Result<Arc<Grade<F>>> {
        assert!(g.is_nonneg(), "grade outside Q+");
        if let Some(x) = self.grades.read().get(&g) {
            return Ok(x.clone());
        }
        self.check(g)?;
        let built = Arc::new(self.build(g)?);
        Ok(self.grades.write().entry(g).or_insert(built).clone())
    }

    pub fn dim(&self, g: RootVec) -> Result<usize> {
        if !g.is_nonneg() {
            return Ok(0);
        }
        Ok(self.grade(g)?.dim())
    }

    /// `τ(X, f_j · w)` for `w` the basis word `tail` of grade `γ(X) − α_j`.
    fn pair_split(&self, x: &[u8], j: usize, tail: usize) -> Result<F> {
        let d = &self.datum;
        let mut acc = F::zero();
        let mut prefix = RootVec::ZERO;
        for (p, &l) in x.iter().enumerate() {
            if l as usize == j {
                let mut rest = x[..p].to_vec();
                rest.extend_from_slice(&x[p + 1..]);
                let v = self.pairing_vector(&rest)?;
                let c = &v[tail];
                if !c.is_zero() {
                    let e = d.qexp_roots(self.alpha(j), prefix);
                    acc = acc.add_ref(&c.mul_q_pow(e));
                }
            }
            prefix.0[l as usize] += 1;
        }
        Ok(acc.mul_ref(&self.tau_simple[j]))
    }

    /// `(τ(X, f_{w_t}))_t` over the basis words of the grade of `X`.
    pub fn pairing_vector(&self, x: &[u8]) -> Result<Arc<Vec<F>>> {
        if let Some(v) = self.pv.read().get(x) {
            return Ok(v.clone());
        }
        let g = word_grade(x);
        let v = if x.is_empty() {
            vec![F::one()]
        } else {
            let gr = self.grade(g)?;
            let mut out = Vec::with_capacity(gr.dim());
            for &(j, tail) in &gr.split {
                out.push(self.pair_split(x, j, tail)?);
            }
            out
        };
        let v = Arc::new(v);
        self.pv.write().insert(x.to_vec(), v.clone());
        Ok(v)
    }

    /// `τ(e_X, f_Y)` for arbitrary words.
    pub fn word_pairing(&self, x: &[u8], y: &[u8]) -> Result<F> {
        if word_grade(x) != word_grade(y) {
            return Ok(F::zero());
        }
        let cy = self.coords(y)?;
        let px = self.pairing_vector(x)?;
        Ok(dot(&px, &cy))
    }

    fn build(&self, g: RootVec) -> Result<Grade<F>> {
        let d = self.datum.clone();
        let r = d.rank;
        if g.is_zero() {
            return Ok(Grade {
                g,
                words: vec![vec![]],
                split: vec![],
                gram: Matrix::identity(1),
                gram_inv: Matrix::identity(1),
                lmul: vec![None; r],
                rmul: vec![None; r],
                der_a: vec![None; r],
                der_b: vec![None; r],
            });
        }
        let mut cands: Vec<(usize, usize, Word)> = Vec::new();
        let mut lower: Vec<Option<Arc<Grade<F>>>> = Vec::with_capacity(r);
        for i in 0..r {
            let lg = self.try_grade(g - self.alpha(i))?;
            if let Some(lg) = &lg {
                for (s, w) in lg.words.iter().enumerate() {
                    let mut word = vec![i as u8];
                    word.extend_from_slice(w);
                    cands.push((i, s, word));
                }
            }
            lower.push(lg);
        }
        let n = cands.len();
        let mut wmat: Vec<Vec<F>> = Vec::with_capacity(n);
        for (_, _, x) in &cands {
            let mut row = Vec::with_capacity(n);
            for &(j, t, _) in &cands {
                row.push(self.pair_split(x, j, t)?);
            }
            wmat.push(row);
        }
        let rows = independent_subset(&wmat);
        if rows.is_empty() {
            return Err(Error::Violation(format!("grade {:?} has no nonzero pairing", g.0)));
        }
        let words: Vec<Word> = rows.iter().map(|&c| cands[c].2.clone()).collect();
        let split: Vec<(usize, usize)> = rows.iter().map(|&c| (cands[c].0, cands[c].1)).collect();
        let gram =
            Matrix::from_rows(rows.iter().map(|&a| rows.iter().map(|&b| wmat[a][b].clone()).collect()).collect());
        let gram_inv =
            gram.inverse().map_err(|_| Error::Violation(format!("singular Gram matrix at grade {:?}", g.0)))?;

        // left multiplication tables straight from the candidate rows
        let mut lmul: Vec<Option<Matrix<F>>> = vec![None; r];
        let mut offset = 0;
        for i in 0..r {
            if let Some(lg) = &lower[i] {
                let m = Matrix::from_rows(
                    (0..lg.dim())
                        .map(|s| {
                            let pv: Vec<F> = rows.iter().map(|&b| wmat[offset + s][b].clone()).collect();
                            gram_inv.apply_left(&pv)
                        })
                        .collect(),
                );
                offset += lg.dim();
                lmul[i] = Some(m);
            }
        }

        let mut grade = Grade {
            g,
            words,
            split,
            gram,
            gram_inv,
            lmul,
            rmul: vec![None; r],
            der_a: vec![None; r],
            der_b: vec![None; r],
        };

        // right multiplication: w_s · i with w_s = j · w_t
        for i in 0..r {
            let Some(lg) = &lower[i] else { continue };
            let mut m = Matrix::zeros(lg.dim(), grade.dim());
            if lg.g.is_zero() {
                let v = self.coords_in(&grade, &[i as u8])?;
                for (c, x) in v.into_iter().enumerate() {
                    m.set(0, c, x);
                }
            } else {
                for s in 0..lg.dim() {
                    let (j, t) = lg.split[s];
                    let mid = self.grade(g - self.alpha(j))?;
                    let inner = mid.rmul[i].as_ref().expect("rmul of lower grade").row(t).to_vec();
                    let row = grade.lmul[j].as_ref().expect("lmul").apply_left(&inner);
                    for (c, x) in row.into_iter().enumerate() {
                        m.set(s, c, x);
                    }
                }
            }
            grade.rmul[i] = Some(m);
        }

        // skew derivations A_i, B_i: grade g → g − α_i
        for i in 0..r {
            let Some(target) = &lower[i] else { continue };
            let mut ma = Matrix::zeros(grade.dim(), target.dim());
            let mut mb = Matrix::zeros(grade.dim(), target.dim());
            for s in 0..grade.dim() {
                let (j, t) = grade.split[s];
                let tail_grade = g - self.alpha(j);
                let mut ra = vec![F::zero(); target.dim()];
                let mut rb = vec![F::zero(); target.dim()];
                if (tail_grade - self.alpha(i)).is_nonneg() {
                    let tail = self.grade(tail_grade)?;
                    let lm = target.lmul[j].as_ref().expect("lmul");
                    let a_in = tail.der_a[i].as_ref().expect("der").row(t).to_vec();
                    let b_in = tail.der_b[i].as_ref().expect("der").row(t).to_vec();
                    ra = lm.apply_left(&a_in);
                    rb = lm.apply_left(&b_in);
                }
                if j == i {
                    let e = d.qexp_roots(self.alpha(i), tail_grade);
                    ra[t] = ra[t].add_ref(&F::q_pow(-e));
                    rb[t] = rb[t].add_ref(&F::q_pow(e));
                }
                for c in 0..target.dim() {
                    ma.set(s, c, ra[c].clone());
                    mb.set(s, c, rb[c].clone());
                }
            }
            grade.der_a[i] = Some(ma);
            grade.der_b[i] = Some(mb);
        }
        Ok(grade)
    }

    fn coords_in(&self, grade: &Grade<F>, w: &[u8]) -> Result<Vec<F>> {
        let pv: Vec<F> = grade.split.iter().map(|&(j, t)| self.pair_split(w, j, t)).collect::<Result<_>>()?;
        Ok(grade.gram_inv.apply_left(&pv))
    }

    /// Coordinates of a word in the basis of its grade.
    pub fn coords(&self, w: &[u8]) -> Result<Vec<F>> {
        if w.is_empty() {
            return Ok(vec![F::one()]);
        }
        let tail = self.coords(&w[1..])?;
        let g = word_grade(w);
        let gr = self.grade(g)?;
        Ok(gr.lmul[w[0] as usize].as_ref().expect("lmul").apply_left(&tail))
    }

    /// Coordinates of `w_a · w_b` for basis words of grades `ga`, `gb`.
    pub fn basis_product(&self, ga: RootVec, a: usize, gb: RootVec, b: usize) -> Result<Arc<Vec<F>>> {
        let key = (ga, a, gb, b);
        if let Some(v) = self.prod.read().get(&key) {
            return Ok(v.clone());
        }
        let v = if ga.is_zero() {
            let mut v = vec![F::zero(); self.dim(gb)?];
            v[b] = F::one();
            v
        } else {
            let gra = self.grade(ga)?;
            let (j, t) = gra.split[a];
            let inner = self.basis_product(ga - self.alpha(j), t, gb, b)?;
            let top = self.grade(ga + gb)?;
            top.lmul[j].as_ref().expect("lmul").apply_left(&inner)
        };
        let v = Arc::new(v);
        self.prod.write().insert(key, v.clone());
        Ok(v)
    }

    /// Product of two homogeneous vectors.
    pub fn mul_vec(&self, ga: RootVec, x: &[F], gb: RootVec, y: &[F]) -> Result<Vec<F>> {
        let mut out = vec![F::zero(); self.dim(ga + gb)?];
        for (a, ca) in x.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in y.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let c = ca.mul_ref(cb);
                let p = self.basis_product(ga, a, gb, b)?;
                for (o, v) in out.iter_mut().zip(p.iter()) {
                    if !v.is_zero() {
                        *o = o.add_ref(&v.mul_ref(&c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[n]_{q_i}` as a field element.
    pub fn qint_i(&self, n: i64, i: usize) -> F {
        qint::<F>(n, self.datum.qi(i))
    }

    pub fn qexp_roots(&self, a: RootVec, b: RootVec) -> QExp {
        self.datum.qexp_roots(a, b)
    }
}

pub fn dot<F: QField>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add_ref(&x.mul_ref(y));
        }
    }
    acc
}
