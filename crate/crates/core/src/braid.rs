//! Lusztig's braid automorphisms and PBW root vectors.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use crate::cartan::{ConvexOrder, RootVec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::QField;
use crate::uq::{Bx, Uq, UqElement};

impl<F: QField> Uq<F> {
    /// `T_i` (or `T_i⁻¹`) on a Chevalley generator `e_j` / `f_j`.
    fn t_generator(&self, i: usize, inverse: bool, e_side: bool, j: usize) -> Result<UqElement<F>> {
        let qi = self.datum.qi(i);
        let sign = -F::one();
        if i == j {
            let ki = self.ki(i);
            let ki_inv = self.k(-self.alpha(i));
            let r = match (inverse, e_side) {
                (false, true) => self.mul(&self.f(i), &ki)?,
                (false, false) => self.mul(&ki_inv, &self.e(i))?,
                (true, true) => self.mul(&ki_inv, &self.f(i))?,
                (true, false) => self.mul(&self.e(i), &ki)?,
            };
            return Ok(r.scale(&sign));
        }
        let n = (-self.datum.a[i][j]) as u32;
        let mut acc = self.zero();
        for k in 0..=n {
            // (−q_i)^{∓k}
            let mut c = F::q_pow(qi * (k as i64));
            if k % 2 == 1 {
                c = -c;
            }
            let c_neg = c.inv()?;
            let term = match (inverse, e_side) {
                (false, true) => {
                    self.mul_all(&[&self.e_divided(i, n - k)?, &self.e(j), &self.e_divided(i, k)?])?.scale(&c_neg)
                }
                (false, false) => {
                    self.mul_all(&[&self.f_divided(i, k)?, &self.f(j), &self.f_divided(i, n - k)?])?.scale(&c)
                }
                (true, true) => {
                    self.mul_all(&[&self.e_divided(i, k)?, &self.e(j), &self.e_divided(i, n - k)?])?.scale(&c_neg)
                }
                (true, false) => {
                    self.mul_all(&[&self.f_divided(i, n - k)?, &self.f(j), &self.f_divided(i, k)?])?.scale(&c)
                }
            };
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    fn t_half(&self, i: usize, inverse: bool, e_side: bool, b: Bx) -> Result<Arc<UqElement<F>>> {
        let key = (i, inverse, e_side, b);
        if let Some(v) = self.t_memo.read().get(&key) {
            return Ok(v.clone());
        }
        let out = if b.g.is_zero() {
            self.one()
        } else {
            let (j, t) = self.half.grade(b.g)?.split[b.idx()];
            let head = self.t_generator(i, inverse, e_side, j)?;
            let tail = self.t_half(i, inverse, e_side, Bx::new(b.g - RootVec::unit(j), t))?;
            self.mul(&head, &tail)?
        };
        let out = Arc::new(out);
        self.t_memo.write().insert(key, out.clone());
        Ok(out)
    }

    /// `T_i(u)`, or `T_i⁻¹(u)` when `inverse` is set.
    pub fn lusztig_t(&self, i: usize, u: &UqElement<F>, inverse: bool) -> Result<UqElement<F>> {
        self.check(u)?;
        if i >= self.rank() {
            return Err(Error::Domain(format!("T_{} out of range", i + 1)));
        }
        let mut acc = self.zero();
        for (m, c) in u.terms() {
            // s_i is an involution, so T_i and T_i⁻¹ act alike on k_λ
            let f = self.t_half(i, inverse, false, m.f)?;
            let e = self.t_half(i, inverse, true, m.e)?;
            let k = self.k(self.datum.reflect(i, m.k));
            acc = acc.add(&self.mul_all(&[&f, &k, &e])?.scale(c))?;
        }
        Ok(acc)
    }

    /// `T_{w_1} T_{w_2} ⋯ T_{w_n}(u)`.
    pub fn lusztig_t_word(&self, word: &[usize], u: &UqElement<F>) -> Result<UqElement<F>> {
        let mut x = u.clone();
        for &i in word.iter().rev() {
            x = self.lusztig_t(i, &x, false)?;
        }
        Ok(x)
    }

    /// Check the braid relation for `T_i, T_j` on all `e_k`, `f_k`, `k_{ϖ_k}`.
    pub fn verify_braid(&self, i: usize, j: usize) -> Result<BraidReport> {
        if i == j || i >= self.rank() || j >= self.rank() {
            return Err(Error::Domain("braid relation needs two distinct indices".into()));
        }
        let m = match self.datum.a[i][j] * self.datum.a[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            _ => 6,
        };
        let lhs: Vec<usize> = (0..m).map(|t| if t % 2 == 0 { i } else { j }).collect();
        let rhs: Vec<usize> = (0..m).map(|t| if t % 2 == 0 { j } else { i }).collect();
        let mut report = BraidReport { i: i + 1, j: j + 1, m, checked: Vec::new(), failures: Vec::new() };
        for k in 0..self.rank() {
            for (name, x) in [
                (format!("e{}", k + 1), self.e(k)),
                (format!("f{}", k + 1), self.f(k)),
                (format!("k[w{}]", k + 1), self.k(self.datum.fundamental(k))),
            ] {
                let a = self.lusztig_t_word(&lhs, &x)?;
                let b = self.lusztig_t_word(&rhs, &x)?;
                if a != b {
                    report.failures.push(name.clone());
                }
                report.checked.push(name);
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BraidReport {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub checked: Vec<String>,
    pub failures: Vec<String>,
}

impl BraidReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// PBW monomials of one grade and their change of basis to the internal word basis.
pub struct PbwGrade<F> {
    pub g: RootVec,
    /// Exponent vectors `(k_1, …, k_L)` with `Σ k_t β_t = γ`, lexicographically ordered.
    pub exps: Vec<Vec<u32>>,
    /// Row `r`: internal coordinates of `e_{β_1}^{k_1} ⋯ e_{β_L}^{k_L}`.
    pub e_mat: Matrix<F>,
    pub e_inv: Matrix<F>,
    /// Same for `f_{β_1}^{k_1} ⋯ f_{β_L}^{k_L}`.
    pub f_mat: Matrix<F>,
    pub f_inv: Matrix<F>,
}

/// Root vectors for a convex order together with lazily built PBW tables.
pub struct Pbw<F> {
    pub uq: Arc<Uq<F>>,
    pub order: ConvexOrder,
    pub e_roots: Vec<UqElement<F>>,
    pub f_roots: Vec<UqElement<F>>,
    e_coords: Vec<Vec<F>>,
    f_coords: Vec<Vec<F>>,
    grades: RwLock<HashMap<RootVec, Arc<PbwGrade<F>>>>,
    pub(crate) duals: RwLock<HashMap<RootVec, Arc<crate::pairing::DualBasis<F>>>>,
}

/// Exponent vectors `k` with `Σ k_t roots[t] = g`, in lexicographic order.
pub fn partitions(roots: &[RootVec], g: RootVec) -> Vec<Vec<u32>> {
    fn go(roots: &[RootVec], t: usize, g: RootVec, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if t == roots.len() {
            if g.is_zero() {
                out.push(cur.clone());
            }
            return;
        }
        let mut rest = g;
        let mut k = 0;
        while rest.is_nonneg() {
            cur.push(k);
            go(roots, t + 1, rest, cur, out);
            cur.pop();
            rest = rest - roots[t];
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(roots, 0, g, &mut Vec::new(), &mut out);
    out.sort();
    out
}

impl<F: QField> Pbw<F> {
    /// `e_{β_t} = T_{i_1} ⋯ T_{i_{t−1}}(e_{i_t})` and likewise for `f`.
    pub fn new(uq: Arc<Uq<F>>, order: ConvexOrder) -> Result<Self> {
        let mut e_roots = Vec::new();
        let mut f_roots = Vec::new();
        let mut e_coords = Vec::new();
        let mut f_coords = Vec::new();
        for (t, &i) in order.word.iter().enumerate() {
            let prefix = &order.word[..t];
            let b = order.roots[t];
            let e = uq.lusztig_t_word(prefix, &uq.e(i))?;
            let f = uq.lusztig_t_word(prefix, &uq.f(i))?;
            let ec = uq
                .e_coords(&e, b)
                .map_err(|_| Error::Violation(format!("e_β{} is not in U_q(n+) of weight {:?}", t + 1, b.0)))?;
            let fc = uq
                .f_coords(&f, b)
                .map_err(|_| Error::Violation(format!("f_β{} is not in U_q(n-) of weight {:?}", t + 1, b.0)))?;
            e_roots.push(e);
            f_roots.push(f);
            e_coords.push(ec);
            f_coords.push(fc);
        }
        Ok(Pbw {
            uq,
            order,
            e_roots,
            f_roots,
            e_coords,
            f_coords,
            grades: RwLock::new(HashMap::new()),
            duals: RwLock::new(HashMap::new()),
        })
    }

    /// The datum's own convex order.
    pub fn standard(uq: Arc<Uq<F>>) -> Result<Self> {
        let order = uq.datum.order.clone();
        Self::new(uq, order)
    }

    fn monomial(&self, exps: &[u32], coords: &[Vec<F>]) -> Result<Vec<F>> {
        let mut g = RootVec::ZERO;
        let mut v = vec![F::one()];
        for (t, &k) in exps.iter().enumerate() {
            for _ in 0..k {
                let b = self.order.roots[t];
                v = self.uq.half.mul_vec(g, &v, b, &coords[t])?;
                g = g + b;
            }
        }
        Ok(v)
    }

    pub fn grade(&self, g: RootVec) -> Result<Arc<PbwGrade<F>>> {
        if let Some(x) = self.grades.read().get(&g) {
            return Ok(x.clone());
        }
        let exps = partitions(&self.order.roots, g);
        let e_rows: Vec<Vec<F>> = exps.iter().map(|k| self.monomial(k, &self.e_coords)).collect::<Result<_>>()?;
        let f_rows: Vec<Vec<F>> = exps.iter().map(|k| self.monomial(k, &self.f_coords)).collect::<Result<_>>()?;
        let dim = self.uq.half.dim(g)?;
        if exps.len() != dim {
            return Err(Error::Violation(format!("grade {:?}: {} PBW monomials but dimension {dim}", g.0, exps.len())));
        }
        let e_mat = Matrix::from_rows(e_rows);
        let f_mat = Matrix::from_rows(f_rows);
        let e_inv = e_mat
            .inverse()
            .map_err(|_| Error::Violation(format!("PBW e-monomials of grade {:?} are dependent", g.0)))?;
        let f_inv = f_mat
            .inverse()
            .map_err(|_| Error::Violation(format!("PBW f-monomials of grade {:?} are dependent", g.0)))?;
        let out = Arc::new(PbwGrade { g, exps, e_mat, e_inv, f_mat, f_inv });
        self.grades.write().insert(g, out.clone());
        Ok(out)
    }

    /// Internal coordinates of the `r`-th PBW `e`-monomial of grade `g`.
    pub fn e_monomial(&self, g: RootVec, r: usize) -> Result<UqElement<F>> {
        let pg = self.grade(g)?;
        Ok(self.uq.e_vec(g, pg.e_mat.row(r)))
    }

    pub fn f_monomial(&self, g: RootVec, r: usize) -> Result<UqElement<F>> {
        let pg = self.grade(g)?;
        Ok(self.uq.f_vec(g, pg.f_mat.row(r)))
    }

    /// PBW coordinates of internal `e`-coordinates.
    pub fn to_pbw_e(&self, g: RootVec, v: &[F]) -> Result<Vec<F>> {
        Ok(self.grade(g)?.e_inv.apply_left(v))
    }

    pub fn to_pbw_f(&self, g: RootVec, v: &[F]) -> Result<Vec<F>> {
        Ok(self.grade(g)?.f_inv.apply_left(v))
    }

    /// Render an exponent vector as `e_{β1}^2 e_{β3}`.
    pub fn monomial_name(&self, side: char, exps: &[u32]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(t, &k)| if k == 1 { format!("{side}_b{}", t + 1) } else { format!("{side}_b{}^{k}", t + 1) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Deterministic rendering of an element in the PBW basis, terms `F k_λ E`.
    pub fn render(&self, u: &UqElement<F>) -> Result<String> {
        use std::collections::BTreeMap;
        let mut groups: BTreeMap<(RootVec, crate::cartan::Weight, RootVec), Vec<(usize, usize, F)>> = BTreeMap::new();
        for (m, c) in u.terms() {
            groups.entry((m.f.g, m.k, m.e.g)).or_default().push((m.f.idx(), m.e.idx(), c.clone()));
        }
        let mut out = Vec::new();
        for ((gf, k, ge), entries) in groups {
            let pf = self.grade(gf)?;
            let pe = self.grade(ge)?;
            let mut mat = Matrix::zeros(pf.exps.len(), pe.exps.len());
            for (a, b, c) in entries {
                mat.set(a, b, c);
            }
            // internal → PBW on both sides: rows via f_inv, cols via e_inv
            let conv = pf.f_inv.transpose().mul(&mat).mul(&pe.e_inv);
            for a in 0..conv.rows() {
                for b in 0..conv.cols() {
                    let c = conv.get(a, b);
                    if c.is_zero() {
                        continue;
                    }
                    let mut factors = Vec::new();
                    let fname = self.monomial_name('f', &pf.exps[a]);
                    if fname != "1" {
                        factors.push(fname);
                    }
                    if !k.is_zero() {
                        factors.push(format!("k[{}]", self.uq.datum.fmt_weight(k)));
                    }
                    let ename = self.monomial_name('e', &pe.exps[b]);
                    if ename != "1" {
                        factors.push(ename);
                    }
                    let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
                    out.push(format!("({c})*{body}"));
                }
            }
        }
        if out.is_empty() {
            Ok("0".into())
        } else {
            Ok(out.join(" + "))
        }
    }
}

/// `C` with `PBW_b = C · PBW_a` on the `e`-monomials of grade `g`.
pub fn change_of_basis<F: QField>(a: &Pbw<F>, b: &Pbw<F>, g: RootVec) -> Result<Matrix<F>> {
    let ga = a.grade(g)?;
    let gb = b.grade(g)?;
    Ok(gb.e_mat.mul(&ga.e_inv))
}
