//! The quantum Weyl algebra `B_q = ⟨m_ξ, d_x⟩` acting on `U_q(n⁺)^★`, and its
//! extension `E_q` by the grading operators `t_λ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use parking_lot::RwLock;
use rand::Rng;
use serde::Serialize;

use crate::aq::{Aq, LocalAqElement, StarFunctional};
use crate::cartan::{CartanType, RootVec, Weight};
use crate::error::{Error, Result};
use crate::expr::{parse_formal, parse_int_list, Atom};
use crate::linalg::rank_of;
use crate::modules::unit;
use crate::scalar::QField;
use crate::uq::{Bx, UqElement};

/// `Σ c · m_{δ_a} d_{w_b}`, with `δ_a` dual to the internal basis element `a` of
/// `U_q(n⁺)` and `w_b` the internal basis element `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BqElement<F> {
    pub ty: CartanType,
    terms: BTreeMap<(Bx, Bx), F>,
}

impl<F: QField> BqElement<F> {
    pub fn zero(ty: CartanType) -> Self {
        BqElement { ty, terms: BTreeMap::new() }
    }

    pub fn one(ty: CartanType) -> Self {
        Self::term(ty, Bx::ONE, Bx::ONE, F::one())
    }

    pub fn term(ty: CartanType, xi: Bx, x: Bx, c: F) -> Self {
        let mut z = Self::zero(ty);
        z.add_term(xi, x, c);
        z
    }

    fn add_term(&mut self, xi: Bx, x: Bx, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(xi, x)) {
            Some(v) => {
                *v = v.add_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&(xi, x));
                }
            }
            None => {
                self.terms.insert((xi, x), c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Bx, Bx), &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.ty != o.ty {
            return Err(Error::MixedDatum);
        }
        let mut out = self.clone();
        for ((a, b), c) in &o.terms {
            out.add_term(*a, *b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-F::one()))
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.ty);
        }
        BqElement { ty: self.ty, terms: self.terms.iter().map(|(k, c)| (*k, c.mul_ref(s))).collect() }
    }

    /// Largest height of a `d_x` factor.
    pub fn x_height(&self) -> i64 {
        self.terms.keys().map(|(_, x)| x.g.height()).max().unwrap_or(0)
    }

    /// Largest height of an `m_ξ` or `d_x` factor.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|(a, x)| a.g.height().max(x.g.height())).max().unwrap_or(0)
    }
}

/// `Σ_λ t_λ b_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EqElement<F> {
    pub ty: CartanType,
    parts: BTreeMap<Weight, BqElement<F>>,
}

impl<F: QField> EqElement<F> {
    pub fn zero(ty: CartanType) -> Self {
        EqElement { ty, parts: BTreeMap::new() }
    }

    pub fn from_b(b: BqElement<F>) -> Self {
        Self::with_t(Weight::ZERO, b)
    }

    pub fn with_t(l: Weight, b: BqElement<F>) -> Self {
        let mut out = Self::zero(b.ty);
        if !b.is_zero() {
            out.parts.insert(l, b);
        }
        out
    }

    pub fn t(ty: CartanType, l: Weight) -> Self {
        Self::with_t(l, BqElement::one(ty))
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Weight, &BqElement<F>)> {
        self.parts.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The `B_q` element when no `t_λ` with `λ ≠ 0` occurs.
    pub fn as_b(&self) -> Option<BqElement<F>> {
        match self.parts.len() {
            0 => Some(BqElement::zero(self.ty)),
            1 => self.parts.get(&Weight::ZERO).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (l, b) in &o.parts {
            let s = match out.parts.get(l) {
                Some(x) => x.add(b)?,
                None => b.clone(),
            };
            if s.is_zero() {
                out.parts.remove(l);
            } else {
                out.parts.insert(*l, s);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.ty);
        for (l, b) in &self.parts {
            let x = b.scale(s);
            if !x.is_zero() {
                out.parts.insert(*l, x);
            }
        }
        out
    }
}

type TermList<F> = Arc<Vec<((Bx, Bx), F)>>;

#[derive(Debug, Clone, Serialize)]
pub struct NormalFormTerm {
    pub coefficient: String,
    pub t: Vec<i64>,
    /// PBW exponents of the dual functional.
    pub xi: Vec<u32>,
    /// PBW exponents of the `e`-monomial.
    pub x: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct TopTerm<F> {
    pub grade: RootVec,
    pub exps: Vec<u32>,
    pub coeff: StarFunctional<F>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopProductReport {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub product: Vec<u32>,
    /// Coefficient of `e^{k+r}` in `e^k e^r`.
    pub pbw_scalar: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TElementReport {
    pub lambda: Vec<i64>,
    pub normal_form: String,
    pub terms: usize,
    /// `-1` when the element acts by `q^{−(γ,λ)}`, `+1` for `q^{(γ,λ)}`, `0` otherwise.
    pub orientation: i8,
    pub height_cap: i64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OreWitness {
    pub sample: String,
    pub lambda: Vec<i64>,
    /// `b` with `s · a = b · s`.
    pub left: String,
    /// `b'` with `a · s = s · b'`.
    pub right: String,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaithfulnessReport {
    pub word: String,
    pub normal_form_terms: usize,
    pub height_cap: i64,
    pub action_matches: bool,
    /// Whether `normal form = 0` agrees with `action = 0` on the tested space.
    pub zero_iff_zero: bool,
}

impl FaithfulnessReport {
    pub fn passed(&self) -> bool {
        self.action_matches && self.zero_iff_zero
    }
}

/// A generator of a random test word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordGen {
    M(usize),
    D(usize),
}

/// A random word of length `1..=max_len` in `m_{ξ_i}`, `d_{e_i}`.
pub fn random_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Vec<WordGen> {
    let n = rng.gen_range(1..=max_len);
    (0..n)
        .map(|_| {
            let i = rng.gen_range(0..rank);
            if rng.gen_bool(0.5) {
                WordGen::M(i)
            } else {
                WordGen::D(i)
            }
        })
        .collect()
}

pub fn word_string(w: &[WordGen]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|g| match g {
            WordGen::M(i) => format!("m[xi{}]", i + 1),
            WordGen::D(i) => format!("d[e{}]", i + 1),
        })
        .collect();
    parts.join("*")
}

/// `B_q` and `E_q` for one Cartan datum.
pub struct Bq<F> {
    pub aq: Arc<Aq<F>>,
    memo: RwLock<HashMap<(Bx, Bx, Bx, Bx), TermList<F>>>,
}

impl<F: QField> Bq<F> {
    pub fn new(aq: Arc<Aq<F>>) -> Self {
        Bq { aq, memo: RwLock::new(HashMap::new()) }
    }

    pub fn ty(&self) -> CartanType {
        self.aq.ty()
    }

    fn half_dim(&self, g: RootVec) -> Result<usize> {
        self.aq.uq.half.dim(g)
    }

    pub fn one(&self) -> BqElement<F> {
        BqElement::one(self.ty())
    }

    /// `m_ξ`.
    pub fn m(&self, xi: &StarFunctional<F>) -> BqElement<F> {
        let mut z = BqElement::zero(self.ty());
        for (g, v) in xi.parts() {
            for (s, c) in v.iter().enumerate() {
                z.add_term(Bx::new(*g, s), Bx::ONE, c.clone());
            }
        }
        z
    }

    pub fn m_simple(&self, i: usize) -> BqElement<F> {
        self.m(&StarFunctional::simple(self.ty(), i))
    }

    /// `d_x` for `x ∈ U_q(n⁺)`.
    pub fn d(&self, x: &UqElement<F>) -> Result<BqElement<F>> {
        let mut z = BqElement::zero(self.ty());
        for (m, c) in x.terms() {
            if !m.f.g.is_zero() || !m.k.is_zero() {
                return Err(Error::Domain("d_x needs x in U_q(n+)".into()));
            }
            z.add_term(Bx::ONE, m.e, c.clone());
        }
        Ok(z)
    }

    pub fn d_simple(&self, i: usize) -> BqElement<F> {
        BqElement::term(self.ty(), Bx::ONE, Bx::new(RootVec::unit(i), 0), F::one())
    }

    fn delta(&self, b: Bx) -> Result<StarFunctional<F>> {
        Ok(StarFunctional::delta(self.ty(), b.g, self.half_dim(b.g)?, b.idx()))
    }

    fn e_basis(&self, b: Bx) -> Result<UqElement<F>> {
        Ok(self.aq.uq.e_vec(b.g, &unit(self.half_dim(b.g)?, b.idx())))
    }

    /// `m_{δ_a} d_{w_b} · m_{δ_c} d_{w_e} = Σ m_{δ_a · (k_{γ''}E' · δ_c)} d_{E'' w_e}` along
    /// `Δ(w_b) = Σ k_{γ(E'')} E' ⊗ E''`.
    fn mul_basis(&self, a: Bx, b: Bx, c: Bx, e: Bx) -> Result<TermList<F>> {
        let key = (a, b, c, e);
        if let Some(v) = self.memo.read().get(&key) {
            return Ok(v.clone());
        }
        let aq = &self.aq;
        let uq = &aq.uq;
        let da = self.delta(a)?;
        let dc = self.delta(c)?;
        let mut acc = BqElement::zero(self.ty());
        for (e1, e2, coef) in uq.delta_e(b)?.iter() {
            let moved = aq.t(-uq.gw(e2.g), &aq.d(&self.e_basis(*e1)?, &dc)?);
            if moved.is_zero() {
                continue;
            }
            let xi = aq.star_multiply(&da, &moved)?;
            let x = uq.half.basis_product(e2.g, e2.idx(), e.g, e.idx())?;
            let gx = e2.g + e.g;
            for (g, v) in xi.parts() {
                for (s, cv) in v.iter().enumerate() {
                    if cv.is_zero() {
                        continue;
                    }
                    let cc = cv.mul_ref(coef);
                    for (t, cx) in x.iter().enumerate() {
                        if !cx.is_zero() {
                            acc.add_term(Bx::new(*g, s), Bx::new(gx, t), cc.mul_ref(cx));
                        }
                    }
                }
            }
        }
        let out: TermList<F> = Arc::new(acc.terms.into_iter().collect());
        self.memo.write().insert(key, out.clone());
        Ok(out)
    }

    pub fn mul(&self, x: &BqElement<F>, y: &BqElement<F>) -> Result<BqElement<F>> {
        if x.ty != self.ty() || y.ty != self.ty() {
            return Err(Error::MixedDatum);
        }
        let mut out = BqElement::zero(self.ty());
        for ((a, b), c1) in &x.terms {
            for ((c, e), c2) in &y.terms {
                let s = c1.mul_ref(c2);
                for ((p, r), v) in self.mul_basis(*a, *b, *c, *e)?.iter() {
                    out.add_term(*p, *r, v.mul_ref(&s));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, xs: &[&BqElement<F>]) -> Result<BqElement<F>> {
        let mut acc = self.one();
        for x in xs {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// The action on `U_q(n⁺)^★`.
    pub fn act(&self, z: &BqElement<F>, eta: &StarFunctional<F>) -> Result<StarFunctional<F>> {
        let aq = &self.aq;
        let mut out = StarFunctional::zero(self.ty());
        // group by x so each d_x is applied once
        let mut by_x: BTreeMap<Bx, Vec<(Bx, &F)>> = BTreeMap::new();
        for ((a, b), c) in &z.terms {
            by_x.entry(*b).or_default().push((*a, c));
        }
        for (b, list) in by_x {
            let dx = aq.d(&self.e_basis(b)?, eta)?;
            if dx.is_zero() {
                continue;
            }
            let mut xi = StarFunctional::zero(self.ty());
            for (a, c) in list {
                xi = xi.add(&self.delta(a)?.scale(c))?;
            }
            out = out.add(&aq.star_multiply(&xi, &dx)?)?;
        }
        Ok(out)
    }

    /// `t_{−μ} b t_μ`: `m_ξ d_x ↦ q^{(γ_x − γ_ξ, μ)} m_ξ d_x`.
    pub fn conj(&self, mu: Weight, z: &BqElement<F>) -> BqElement<F> {
        let uq = &self.aq.uq;
        let mut out = BqElement::zero(self.ty());
        for ((a, b), c) in &z.terms {
            let e = uq.datum.qexp(uq.gw(b.g) - uq.gw(a.g), mu);
            out.add_term(*a, *b, c.mul_q_pow(e));
        }
        out
    }

    /// `(t_λ b)(t_μ b') = t_{λ+μ} (t_{−μ} b t_μ) b'`.
    pub fn eq_mul(&self, x: &EqElement<F>, y: &EqElement<F>) -> Result<EqElement<F>> {
        let mut out = EqElement::zero(self.ty());
        for (l, b) in &x.parts {
            for (m, b2) in &y.parts {
                let p = self.mul(&self.conj(*m, b), b2)?;
                out = out.add(&EqElement::with_t(*l + *m, p))?;
            }
        }
        Ok(out)
    }

    pub fn eq_act(&self, x: &EqElement<F>, eta: &StarFunctional<F>) -> Result<StarFunctional<F>> {
        let mut out = StarFunctional::zero(self.ty());
        for (l, b) in &x.parts {
            out = out.add(&self.aq.t(*l, &self.act(b, eta)?))?;
        }
        Ok(out)
    }

    // ---- text ----

    fn pbw_exps(&self, raw: &str) -> Result<(RootVec, usize)> {
        let pbw = &self.aq.pbw;
        let v = parse_int_list(raw.trim().trim_start_matches('(').trim_end_matches(')'))?;
        let roots = &pbw.order.roots;
        if v.len() != roots.len() || v.iter().any(|&k| k < 0) {
            return Err(Error::Config(format!("expected {} non-negative PBW exponents", roots.len())));
        }
        let exps: Vec<u32> = v.iter().map(|&k| k as u32).collect();
        let mut g = RootVec::ZERO;
        for (k, b) in exps.iter().zip(roots) {
            g = g + (*k as i64) * *b;
        }
        let pg = pbw.grade(g)?;
        let r = pg.exps.iter().position(|e| *e == exps).expect("exponent vector of its own grade");
        Ok((g, r))
    }

    fn simple_index(&self, raw: &str, prefix: &str) -> Result<usize> {
        let i: usize = raw
            .strip_prefix(prefix)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Config(format!("expected {prefix}<i>, found `{raw}`")))?;
        if i == 0 || i > self.aq.uq.rank() {
            return Err(Error::Config(format!("index {i} out of range")));
        }
        Ok(i - 1)
    }

    fn atom(&self, a: &Atom) -> Result<EqElement<F>> {
        let ty = self.ty();
        let raw = a.args.as_deref().map(str::trim).unwrap_or("");
        let b = match a.name.as_str() {
            "m" if raw.starts_with('(') => {
                let (g, r) = self.pbw_exps(raw)?;
                let n = self.aq.pbw.grade(g)?.exps.len();
                self.m(&self.aq.from_pbw_values(g, &unit(n, r))?)
            }
            "m" => self.m_simple(self.simple_index(raw, "xi")?),
            "d" if raw.starts_with('(') => {
                let (g, r) = self.pbw_exps(raw)?;
                self.d(&self.aq.pbw.e_monomial(g, r)?)?
            }
            "d" => {
                let mut acc = self.one();
                for part in raw.split('*') {
                    acc = self.mul(&acc, &self.d_simple(self.simple_index(part.trim(), "e")?))?;
                }
                acc
            }
            "t" => {
                let w = self.aq.uq.datum.parse_weight(raw)?;
                return Ok(EqElement::t(ty, w));
            }
            _ => return Err(Error::Config(format!("unknown generator `{}`", a.name))),
        };
        Ok(EqElement::from_b(b))
    }

    /// Normal form of a word such as `d[e1]*m[xi1] - q^-2*m[xi1]*d[e1]` or `t[2,0]*m[(0,1,0)]`.
    pub fn normal_form(&self, src: &str) -> Result<EqElement<F>> {
        let f = parse_formal(src)?;
        let mut out = EqElement::zero(self.ty());
        for (c, word) in &f.terms {
            let mut acc = EqElement::from_b(self.one());
            for a in word {
                acc = self.eq_mul(&acc, &self.atom(a)?)?;
            }
            out = out.add(&acc.scale(&F::from_ratfunc(c)?))?;
        }
        Ok(out)
    }

    /// Terms in PBW coordinates on both sides.
    pub fn pbw_terms(&self, z: &BqElement<F>) -> Result<Vec<(Vec<u32>, Vec<u32>, F)>> {
        let pbw = &self.aq.pbw;
        let mut acc: BTreeMap<(RootVec, usize, RootVec, usize), F> = BTreeMap::new();
        for ((a, b), c) in &z.terms {
            let pa = pbw.grade(a.g)?;
            let pb = pbw.grade(b.g)?;
            for r in 0..pa.exps.len() {
                let va = pa.e_mat.get(r, a.idx());
                if va.is_zero() {
                    continue;
                }
                for s in 0..pb.exps.len() {
                    let vb = pb.e_inv.get(b.idx(), s);
                    if vb.is_zero() {
                        continue;
                    }
                    let k = (a.g, r, b.g, s);
                    let v = c.mul_ref(va).mul_ref(vb);
                    let e = acc.entry(k).or_insert_with(F::zero);
                    *e = e.add_ref(&v);
                }
            }
        }
        let mut out = Vec::new();
        for ((ga, r, gb, s), c) in acc {
            if c.is_zero() {
                continue;
            }
            out.push((pbw.grade(ga)?.exps[r].clone(), pbw.grade(gb)?.exps[s].clone(), c));
        }
        Ok(out)
    }

    fn exps_str(e: &[u32]) -> String {
        let v: Vec<String> = e.iter().map(|k| k.to_string()).collect();
        format!("({})", v.join(","))
    }

    pub fn render(&self, z: &BqElement<F>) -> Result<String> {
        let mut parts = Vec::new();
        for (xi, x, c) in self.pbw_terms(z)? {
            let mut f = format!("({c})");
            if xi.iter().any(|&k| k > 0) {
                let _ = write!(f, "*m[{}]", Self::exps_str(&xi));
            }
            if x.iter().any(|&k| k > 0) {
                let _ = write!(f, "*d[{}]", Self::exps_str(&x));
            }
            parts.push(f);
        }
        Ok(if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }

    pub fn render_eq(&self, z: &EqElement<F>) -> Result<String> {
        let d = &self.aq.uq.datum;
        let mut parts = Vec::new();
        for (l, b) in &z.parts {
            let body = self.render(b)?;
            if l.is_zero() {
                parts.push(body);
            } else {
                parts.push(format!("t[{}]*({body})", d.fmt_weight(*l)));
            }
        }
        Ok(if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }

    pub fn dump(&self, z: &EqElement<F>) -> Result<Vec<NormalFormTerm>> {
        let r = self.aq.uq.rank();
        let mut out = Vec::new();
        for (l, b) in &z.parts {
            for (xi, x, c) in self.pbw_terms(b)? {
                out.push(NormalFormTerm { coefficient: c.to_string(), t: l.0[..r].to_vec(), xi, x });
            }
        }
        Ok(out)
    }

    // ---- filtration ----

    /// Leading term for the order on PBW exponents of the `d_x` part: total
    /// height first, then lexicographic.
    pub fn top_term(&self, z: &BqElement<F>) -> Result<TopTerm<F>> {
        if z.is_zero() {
            return Err(Error::Domain("the zero element has no top term".into()));
        }
        let pbw = &self.aq.pbw;
        let mut best: Option<(i64, Vec<u32>, RootVec, usize)> = None;
        let mut coeffs: BTreeMap<(RootVec, usize), StarFunctional<F>> = BTreeMap::new();
        for ((a, b), c) in &z.terms {
            let pb = pbw.grade(b.g)?;
            for s in 0..pb.exps.len() {
                let vb = pb.e_inv.get(b.idx(), s);
                if vb.is_zero() {
                    continue;
                }
                let e = coeffs.entry((b.g, s)).or_insert_with(|| StarFunctional::zero(z.ty));
                *e = e.add(&self.delta(*a)?.scale(&c.mul_ref(vb)))?;
            }
        }
        for ((g, s), xi) in &coeffs {
            if xi.is_zero() {
                continue;
            }
            let exps = pbw.grade(*g)?.exps[*s].clone();
            let key = (g.height(), exps.clone(), *g, *s);
            if best.as_ref().is_none_or(|b| (key.0, &key.1) > (b.0, &b.1)) {
                best = Some(key);
            }
        }
        let (_, exps, g, s) = best.expect("nonzero element has a term");
        Ok(TopTerm { grade: g, exps, coeff: coeffs.remove(&(g, s)).unwrap() })
    }

    /// Compare `top(z z')` with `c_{k,r} · ξ · t_{−γ_k}(ξ')` at exponent `k + r`, where
    /// `c_{k,r}` is the coefficient of `e^{k+r}` in `e^k e^r`.
    pub fn top_product_check(&self, z: &BqElement<F>, z2: &BqElement<F>) -> Result<TopProductReport> {
        let aq = &self.aq;
        let pbw = &aq.pbw;
        let a = self.top_term(z)?;
        let b = self.top_term(z2)?;
        let g = a.grade + b.grade;
        let pa = pbw.grade(a.grade)?;
        let pb = pbw.grade(b.grade)?;
        let ra = pa.exps.iter().position(|e| *e == a.exps).unwrap();
        let rb = pb.exps.iter().position(|e| *e == b.exps).unwrap();
        let prod = aq.uq.half.mul_vec(a.grade, pa.e_mat.row(ra), b.grade, pb.e_mat.row(rb))?;
        let coords = pbw.to_pbw_e(g, &prod)?;
        let sum: Vec<u32> = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        let pg = pbw.grade(g)?;
        let r = pg.exps.iter().position(|e| *e == sum).unwrap();
        let c = coords[r].clone();
        let zz = self.mul(z, z2)?;
        let top = self.top_term(&zz)?;
        let predicted = aq.star_multiply(&a.coeff, &aq.t(-aq.uq.gw(a.grade), &b.coeff))?.scale(&c);
        Ok(TopProductReport {
            left: a.exps,
            right: b.exps,
            product: top.exps.clone(),
            pbw_scalar: c.to_string(),
            passed: top.exps == sum && top.coeff == predicted,
        })
    }

    // ---- grading operators inside B_q ----

    /// `Σ_r m_{ϑ₀(c_κ⁻¹ (y_r · c_κ))} d_{x_r}` for `λ = 2κ`.
    pub fn t_element(&self, lambda: Weight) -> Result<BqElement<F>> {
        let aq = &self.aq;
        let uq = &aq.uq;
        let d = &uq.datum;
        let kappa = Weight([lambda.0[0] / 2, lambda.0[1] / 2]);
        if 2 * kappa != lambda || !d.is_dominant(kappa) {
            return Err(Error::Domain(format!("({}) is not in 2Λ⁺", d.fmt_weight(lambda))));
        }
        let c = aq.c(kappa)?;
        let depth = aq.module(kappa)?.spaces.iter().map(|s| s.gamma.height()).max().unwrap_or(0);
        let mut z = BqElement::zero(self.ty());
        for h in 0..=depth {
            for g in d.grades_of_height(h) {
                let db = aq.pbw.dual_basis(g)?;
                for r in 0..db.len() {
                    let yc = aq.left_action(&uq.f_vec(g, &db.y[r]), &c)?;
                    if yc.is_zero() {
                        continue;
                    }
                    let xi = aq.theta0(&LocalAqElement { lambda: kappa, a: yc })?;
                    let x = self.d(&uq.e_vec(g, &db.x[r]))?;
                    z = z.add(&self.mul(&self.m(&xi), &x)?)?;
                }
            }
        }
        Ok(z)
    }

    /// Basis of `⊕_{ht γ ≤ cap} (U_q(n⁺)_γ)*`.
    pub fn functional_basis(&self, cap: i64) -> Result<Vec<StarFunctional<F>>> {
        let mut out = Vec::new();
        for h in 0..=cap {
            for g in self.aq.uq.datum.grades_of_height(h) {
                let n = self.half_dim(g)?;
                for s in 0..n {
                    out.push(StarFunctional::delta(self.ty(), g, n, s));
                }
            }
        }
        Ok(out)
    }

    pub fn t_element_check(&self, lambda: Weight, cap: i64) -> Result<TElementReport> {
        let uq = &self.aq.uq;
        let z = self.t_element(lambda)?;
        let mut neg = true;
        let mut pos = true;
        for eta in self.functional_basis(cap)? {
            let img = self.act(&z, &eta)?;
            neg &= img == self.aq.t(-lambda, &eta);
            pos &= img == self.aq.t(lambda, &eta);
        }
        let orientation = if lambda.is_zero() || neg {
            -1
        } else if pos {
            1
        } else {
            0
        };
        Ok(TElementReport {
            lambda: lambda.0[..uq.rank()].to_vec(),
            normal_form: self.render(&z)?,
            terms: z.len(),
            orientation,
            height_cap: cap,
            passed: orientation != 0,
        })
    }

    /// Ore witnesses for `s = t_element(λ)`: `s a = b s` and `a s = s b'` with `b`, `b'`
    /// read off from the grading, checked by multiplication in `B_q`.
    pub fn ore_witness(&self, name: &str, a: &BqElement<F>, lambda: Weight) -> Result<OreWitness> {
        let s = self.t_element(lambda)?;
        let orient = self.t_element_check(lambda, 1)?.orientation;
        let mu = if orient >= 0 { lambda } else { -lambda };
        // s acts as t_μ:  t_μ a t_{−μ} = conj(−μ, a)
        let b = self.conj(-mu, a);
        let b2 = self.conj(mu, a);
        let ok1 = self.mul(&s, a)? == self.mul(&b, &s)?;
        let ok2 = self.mul(a, &s)? == self.mul(&s, &b2)?;
        Ok(OreWitness {
            sample: name.to_string(),
            lambda: lambda.0[..self.aq.uq.rank()].to_vec(),
            left: self.render(&b)?,
            right: self.render(&b2)?,
            verified: ok1 && ok2,
        })
    }

    fn apply_word(&self, w: &[WordGen], eta: &StarFunctional<F>) -> Result<StarFunctional<F>> {
        let uq = &self.aq.uq;
        let mut x = eta.clone();
        for g in w.iter().rev() {
            x = match *g {
                WordGen::M(i) => self.aq.star_multiply(&StarFunctional::simple(self.ty(), i), &x)?,
                WordGen::D(i) => self.aq.d(&uq.e(i), &x)?,
            };
        }
        Ok(x)
    }

    pub fn word_element(&self, w: &[WordGen]) -> Result<BqElement<F>> {
        let gens: Vec<BqElement<F>> = w
            .iter()
            .map(|g| match *g {
                WordGen::M(i) => self.m_simple(i),
                WordGen::D(i) => self.d_simple(i),
            })
            .collect();
        self.mul_all(&gens.iter().collect::<Vec<_>>())
    }

    /// Round trip: the normal form of `w` acts on all functionals of height `≤ cap`
    /// as the composite of its letters.
    pub fn faithfulness(&self, w: &[WordGen], cap: Option<i64>) -> Result<FaithfulnessReport> {
        let z = self.word_element(w)?;
        let cap = cap.unwrap_or(w.len() as i64 + 2);
        let mut matches = true;
        let mut acts_zero = true;
        for eta in self.functional_basis(cap)? {
            let a = self.act(&z, &eta)?;
            matches &= a == self.apply_word(w, &eta)?;
            acts_zero &= a.is_zero();
        }
        Ok(FaithfulnessReport {
            word: word_string(w),
            normal_form_terms: z.len(),
            height_cap: cap,
            action_matches: matches,
            zero_iff_zero: acts_zero == z.is_zero(),
        })
    }

    /// `z = 0` iff `z` acts as zero on functionals of height `≤ cap`.
    pub fn zero_iff_acts_zero(&self, z: &BqElement<F>, cap: i64) -> Result<bool> {
        let mut zero = true;
        for eta in self.functional_basis(cap)? {
            zero &= self.act(z, &eta)?.is_zero();
        }
        Ok(zero == z.is_zero())
    }

    fn flatten(&self, eta: &StarFunctional<F>, grades: &[(RootVec, usize)]) -> Vec<F> {
        let mut v = Vec::new();
        for &(g, n) in grades {
            match eta.part(g) {
                Some(x) => v.extend(x.iter().cloned()),
                None => v.extend(std::iter::repeat_n(F::zero(), n)),
            }
        }
        v
    }

    fn grades_upto(&self, cap: i64) -> Result<Vec<(RootVec, usize)>> {
        let mut out = Vec::new();
        for h in 0..=cap {
            for g in self.aq.uq.datum.grades_of_height(h) {
                out.push((g, self.half_dim(g)?));
            }
        }
        Ok(out)
    }

    /// Whether `z` fails to be invertible as an operator on the space of height
    /// `≤ cap`: it has a kernel there or misses `ε`. Locally unipotent elements such
    /// as `1 + d_x` are invertible operators and are not detected.
    pub fn operator_non_invertible(&self, z: &BqElement<F>, cap: i64) -> Result<bool> {
        let grades = self.grades_upto(cap + z.degree())?;
        let basis = self.functional_basis(cap)?;
        let imgs: Vec<Vec<F>> =
            basis.iter().map(|e| self.act(z, e).map(|x| self.flatten(&x, &grades))).collect::<Result<_>>()?;
        let r = rank_of(&imgs);
        if r < basis.len() {
            return Ok(true);
        }
        let mut with_eps = imgs.clone();
        with_eps.push(self.flatten(&StarFunctional::epsilon(self.ty()), &grades));
        Ok(rank_of(&with_eps) > r)
    }

    /// Top term of `z` is a scalar multiple of `m_ε d_1`.
    pub fn has_scalar_top(&self, z: &BqElement<F>) -> Result<bool> {
        let t = self.top_term(z)?;
        Ok(t.exps.iter().all(|&k| k == 0) && t.coeff.parts().all(|(g, _)| g.is_zero()))
    }

    /// Evidence that `z` is not a unit: its top term is not scalar, and no product
    /// `z p` with a probe has a scalar top term, so none of them is `1`.
    pub fn non_unit_evidence(&self, z: &BqElement<F>, probes: &[BqElement<F>]) -> Result<bool> {
        if self.has_scalar_top(z)? {
            return Ok(false);
        }
        for p in probes {
            if self.has_scalar_top(&self.mul(z, p)?)? || self.has_scalar_top(&self.mul(p, z)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rank of `{t_λ b}` over the transversal of `Λ/2Λ` and the given `b`, as operators
    /// on functionals of height `≤ cap`.
    pub fn coset_rank(&self, bs: &[BqElement<F>], cap: i64) -> Result<(usize, usize)> {
        let deg = bs.iter().map(|b| b.degree()).max().unwrap_or(0);
        let grades = self.grades_upto(cap + deg)?;
        let basis = self.functional_basis(cap)?;
        let mut vecs = Vec::new();
        for l in self.aq.uq.datum.transversal() {
            for b in bs {
                let e = EqElement::with_t(l, b.clone());
                let mut v = Vec::new();
                for eta in &basis {
                    v.extend(self.flatten(&self.eq_act(&e, eta)?, &grades));
                }
                vecs.push(v);
            }
        }
        Ok((vecs.len(), rank_of(&vecs)))
    }
}
