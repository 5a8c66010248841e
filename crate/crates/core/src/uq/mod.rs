//! `U_q(g)` with triangular normal form `f-part · k_λ · e-part`.
//!
//! Both halves are expressed in the standard-word basis of [`half::Half`];
//! conversion to PBW monomials lives in [`crate::braid`].

mod decomp;
pub mod half;
mod hopf;

pub use decomp::{AdStabilityReport, SubalgebraTag};
pub use hopf::Tensor;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::cartan::{CartanDatum, CartanType, RootVec, Weight};
use crate::error::{Error, Result};
use crate::scalar::QField;
use half::Half;

/// Index of a basis element of `U_q(n^±)`: grade and position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bx {
    pub g: RootVec,
    pub i: u32,
}

impl Bx {
    pub const ONE: Bx = Bx { g: RootVec::ZERO, i: 0 };

    pub fn new(g: RootVec, i: usize) -> Bx {
        Bx { g, i: i as u32 }
    }

    pub fn idx(&self) -> usize {
        self.i as usize
    }
}

/// `F_f · k_λ · E_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub f: Bx,
    pub k: Weight,
    pub e: Bx,
}

impl Mono {
    pub const ONE: Mono = Mono { f: Bx::ONE, k: Weight::ZERO, e: Bx::ONE };

    pub fn k(l: Weight) -> Mono {
        Mono { f: Bx::ONE, k: l, e: Bx::ONE }
    }
}

#[derive(Clone, PartialEq)]
pub struct UqElement<F> {
    pub ty: CartanType,
    terms: BTreeMap<Mono, F>,
}

impl<F: QField> UqElement<F> {
    pub fn zero(ty: CartanType) -> Self {
        UqElement { ty, terms: BTreeMap::new() }
    }

    pub fn from_terms(ty: CartanType, terms: impl IntoIterator<Item = (Mono, F)>) -> Self {
        let mut u = Self::zero(ty);
        for (m, c) in terms {
            u.add_term(m, c);
        }
        u
    }

    pub fn mono(ty: CartanType, m: Mono, c: F) -> Self {
        Self::from_terms(ty, [(m, c)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add_ref(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn same(&self, o: &Self) -> Result<()> {
        if self.ty != o.ty {
            return Err(Error::MixedDatum);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        let mut u = self.clone();
        for (m, c) in &o.terms {
            u.add_term(*m, c.clone());
        }
        Ok(u)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        UqElement { ty: self.ty, terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.ty);
        }
        UqElement { ty: self.ty, terms: self.terms.iter().map(|(m, c)| (*m, c.mul_ref(s))).collect() }
    }

    /// Largest `ht(F) + ht(E)` over the terms.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.f.g.height() + m.e.g.height()).max().unwrap_or(0)
    }
}

impl<F: QField> fmt::Debug for UqElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})·F{:?}#{}·k{:?}·E{:?}#{}", m.f.g.0, m.f.i, m.k.0, m.e.g.0, m.e.i))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type TermList<F> = Arc<Vec<(Mono, F)>>;

/// Multiplication context for one Cartan datum.
pub struct Uq<F> {
    pub datum: Arc<CartanDatum>,
    pub half: Half<F>,
    /// `1/(q_i − q_i⁻¹)`.
    pub c: Vec<F>,
    comm: RwLock<HashMap<(Bx, Bx), TermList<F>>>,
    pub(crate) hopf_memo: hopf::HopfMemo<F>,
    /// `T_i^{±1}` on half basis elements, keyed by `(i, inverse, e-side, basis index)`.
    pub(crate) t_memo: RwLock<HashMap<(usize, bool, bool, Bx), Arc<UqElement<F>>>>,
}

impl<F: QField> Uq<F> {
    pub fn new(datum: CartanDatum, cap: i64) -> Self {
        let datum = Arc::new(datum);
        let c = (0..datum.rank)
            .map(|i| {
                let qi = datum.qi(i);
                (F::q_pow(qi) - F::q_pow(-qi)).inv().expect("q_i ≠ q_i^{-1}")
            })
            .collect();
        Uq {
            half: Half::new(datum.clone(), cap),
            datum,
            c,
            comm: RwLock::new(HashMap::new()),
            hopf_memo: Default::default(),
            t_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn ty(&self) -> CartanType {
        self.datum.ty
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn alpha(&self, i: usize) -> Weight {
        self.datum.simple_root(i)
    }

    pub fn gw(&self, g: RootVec) -> Weight {
        self.datum.root_to_weight(g)
    }

    pub fn zero(&self) -> UqElement<F> {
        UqElement::zero(self.ty())
    }

    pub fn one(&self) -> UqElement<F> {
        self.scalar(F::one())
    }

    pub fn scalar(&self, c: F) -> UqElement<F> {
        UqElement::mono(self.ty(), Mono::ONE, c)
    }

    pub fn k(&self, l: Weight) -> UqElement<F> {
        UqElement::mono(self.ty(), Mono::k(l), F::one())
    }

    pub fn e(&self, i: usize) -> UqElement<F> {
        UqElement::mono(self.ty(), Mono { f: Bx::ONE, k: Weight::ZERO, e: Bx::new(RootVec::unit(i), 0) }, F::one())
    }

    pub fn f(&self, i: usize) -> UqElement<F> {
        UqElement::mono(self.ty(), Mono { f: Bx::new(RootVec::unit(i), 0), k: Weight::ZERO, e: Bx::ONE }, F::one())
    }

    /// `k_i = k_{α_i}`.
    pub fn ki(&self, i: usize) -> UqElement<F> {
        self.k(self.alpha(i))
    }

    /// The `e`-vector with coordinates `v` in grade `g`.
    pub fn e_vec(&self, g: RootVec, v: &[F]) -> UqElement<F> {
        UqElement::from_terms(
            self.ty(),
            v.iter().enumerate().map(|(i, c)| (Mono { f: Bx::ONE, k: Weight::ZERO, e: Bx::new(g, i) }, c.clone())),
        )
    }

    pub fn f_vec(&self, g: RootVec, v: &[F]) -> UqElement<F> {
        UqElement::from_terms(
            self.ty(),
            v.iter().enumerate().map(|(i, c)| (Mono { f: Bx::new(g, i), k: Weight::ZERO, e: Bx::ONE }, c.clone())),
        )
    }

    pub fn e_word(&self, w: &[u8]) -> Result<UqElement<F>> {
        let g = half::word_grade(w);
        Ok(self.e_vec(g, &self.half.coords(w)?))
    }

    pub fn f_word(&self, w: &[u8]) -> Result<UqElement<F>> {
        let g = half::word_grade(w);
        Ok(self.f_vec(g, &self.half.coords(w)?))
    }

    /// Homogeneous `e`-part coordinates of an element of `U_q(n⁺)_g`.
    pub fn e_coords(&self, u: &UqElement<F>, g: RootVec) -> Result<Vec<F>> {
        let mut v = vec![F::zero(); self.half.dim(g)?];
        for (m, c) in u.terms() {
            if m.f.g.is_zero() && m.k.is_zero() && m.e.g == g {
                v[m.e.idx()] = c.clone();
            } else {
                return Err(Error::Domain(format!("element is not in U_q(n+) of grade {:?}", g.0)));
            }
        }
        Ok(v)
    }

    pub fn f_coords(&self, u: &UqElement<F>, g: RootVec) -> Result<Vec<F>> {
        let mut v = vec![F::zero(); self.half.dim(g)?];
        for (m, c) in u.terms() {
            if m.e.g.is_zero() && m.k.is_zero() && m.f.g == g {
                v[m.f.idx()] = c.clone();
            } else {
                return Err(Error::Domain(format!("element is not in U_q(n-) of grade {:?}", g.0)));
            }
        }
        Ok(v)
    }

    pub(crate) fn check(&self, u: &UqElement<F>) -> Result<()> {
        if u.ty != self.ty() {
            return Err(Error::MixedDatum);
        }
        Ok(())
    }

    /// Normal form of `E_a · F_b` as `Σ F' k_ν E'`.
    fn commute(&self, ea: Bx, fb: Bx) -> Result<TermList<F>> {
        if let Some(v) = self.comm.read().get(&(ea, fb)) {
            return Ok(v.clone());
        }
        let out: Vec<(Mono, F)> = if ea.g.is_zero() {
            vec![(Mono { f: fb, k: Weight::ZERO, e: Bx::ONE }, F::one())]
        } else if fb.g.is_zero() {
            vec![(Mono { f: Bx::ONE, k: Weight::ZERO, e: ea }, F::one())]
        } else {
            let ga = self.half.grade(ea.g)?;
            let (i, t) = ga.split[ea.idx()];
            let inner = self.commute(Bx::new(ea.g - RootVec::unit(i), t), fb)?;
            let ai = self.alpha(i);
            let mut acc: BTreeMap<Mono, F> = BTreeMap::new();
            let mut push = |m: Mono, c: F| {
                if c.is_zero() {
                    return;
                }
                let e = acc.entry(m).or_insert_with(F::zero);
                *e = e.add_ref(&c);
            };
            for (m, c) in inner.iter() {
                // F'' e_i k_ν E'' = q^{-(α_i,ν)} F'' k_ν (e_i E'')
                let up = m.e.g + RootVec::unit(i);
                let gu = self.half.grade(up)?;
                let row = gu.lmul[i].as_ref().expect("lmul").row(m.e.idx());
                let s = c.mul_q_pow(-self.datum.qexp(ai, m.k));
                for (p, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        push(Mono { f: m.f, k: m.k, e: Bx::new(up, p) }, s.mul_ref(x));
                    }
                }
                // (A_i(F'') k_{ν+α_i} − B_i(F'') k_{ν−α_i}) E'' / (q_i − q_i⁻¹)
                let down = m.f.g - RootVec::unit(i);
                if down.is_nonneg() {
                    let gf = self.half.grade(m.f.g)?;
                    let ra = gf.der_a[i].as_ref().expect("der").row(m.f.idx());
                    let rb = gf.der_b[i].as_ref().expect("der").row(m.f.idx());
                    let s = c.mul_ref(&self.c[i]);
                    for (p, x) in ra.iter().enumerate() {
                        if !x.is_zero() {
                            push(Mono { f: Bx::new(down, p), k: m.k + ai, e: m.e }, s.mul_ref(x));
                        }
                    }
                    for (p, x) in rb.iter().enumerate() {
                        if !x.is_zero() {
                            push(Mono { f: Bx::new(down, p), k: m.k - ai, e: m.e }, -s.mul_ref(x));
                        }
                    }
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        let out = Arc::new(out);
        self.comm.write().insert((ea, fb), out.clone());
        Ok(out)
    }

    pub fn mul(&self, a: &UqElement<F>, b: &UqElement<F>) -> Result<UqElement<F>> {
        self.check(a)?;
        self.check(b)?;
        let d = &self.datum;
        let mut acc: BTreeMap<Mono, F> = BTreeMap::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let cab = ca.mul_ref(cb);
                for (m, c) in self.commute(ma.e, mb.f)?.iter() {
                    // F_a k_λ F' k_ν E' k_μ E_b
                    let e = -d.qexp(ma.k, self.gw(m.f.g)) - d.qexp(mb.k, self.gw(m.e.g));
                    let s = cab.mul_ref(c).mul_q_pow(e);
                    let gf = ma.f.g + m.f.g;
                    let ge = m.e.g + mb.e.g;
                    let fv = self.half.basis_product(ma.f.g, ma.f.idx(), m.f.g, m.f.idx())?;
                    let ev = self.half.basis_product(m.e.g, m.e.idx(), mb.e.g, mb.e.idx())?;
                    let k = ma.k + m.k + mb.k;
                    for (p, x) in fv.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let sx = s.mul_ref(x);
                        for (r, y) in ev.iter().enumerate() {
                            if y.is_zero() {
                                continue;
                            }
                            let key = Mono { f: Bx::new(gf, p), k, e: Bx::new(ge, r) };
                            let v = acc.entry(key).or_insert_with(F::zero);
                            *v = v.add_ref(&sx.mul_ref(y));
                        }
                    }
                }
            }
        }
        Ok(UqElement::from_terms(self.ty(), acc))
    }

    pub fn mul_all(&self, xs: &[&UqElement<F>]) -> Result<UqElement<F>> {
        let mut acc = self.one();
        for x in xs {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &UqElement<F>, n: u32) -> Result<UqElement<F>> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Parse `e1`, `f2`, `K1` (`k_{α_1}`), `k[1,-1]` (`k_λ`) and scalars, e.g. `e1*f1 - q^-2*K1`.
    pub fn parse(&self, src: &str) -> Result<UqElement<F>> {
        let formal = crate::expr::parse_formal(src)?;
        let mut out = self.zero();
        for (c, word) in &formal.terms {
            let mut acc = self.one();
            for a in word {
                acc = self.mul(&acc, &self.atom(&a.name, a.args.as_deref())?)?;
            }
            out = out.add(&acc.scale(&F::from_ratfunc(c)?))?;
        }
        Ok(out)
    }

    fn atom(&self, name: &str, args: Option<&str>) -> Result<UqElement<F>> {
        if name == "k" {
            let raw = args.ok_or_else(|| Error::Config("k needs a weight, as in k[1,0]".into()))?;
            return Ok(self.k(self.datum.parse_weight(raw)?));
        }
        let bad = || Error::Config(format!("unknown generator `{name}`"));
        if args.is_some() || name.len() < 2 {
            return Err(bad());
        }
        let (head, idx) = name.split_at(1);
        let i: usize = idx.parse().map_err(|_| bad())?;
        if i == 0 || i > self.rank() {
            return Err(Error::Config(format!("generator index {i} out of range")));
        }
        match head {
            "e" => Ok(self.e(i - 1)),
            "f" => Ok(self.f(i - 1)),
            "K" => Ok(self.ki(i - 1)),
            _ => Err(bad()),
        }
    }

    pub fn commutator(&self, a: &UqElement<F>, b: &UqElement<F>) -> Result<UqElement<F>> {
        self.mul(a, b)?.sub(&self.mul(b, a)?)
    }

    /// The `U_q(n⁺)` or `U_q(n⁻)` element of a symbol word `e1*e2*...`.
    pub fn e_divided(&self, i: usize, n: u32) -> Result<UqElement<F>> {
        let fact = crate::scalar::qfact::<F>(n, self.datum.qi(i));
        Ok(self.pow(&self.e(i), n)?.scale(&fact.inv()?))
    }

    pub fn f_divided(&self, i: usize, n: u32) -> Result<UqElement<F>> {
        let fact = crate::scalar::qfact::<F>(n, self.datum.qi(i));
        Ok(self.pow(&self.f(i), n)?.scale(&fact.inv()?))
    }

    /// Both quantum Serre combinations for the ordered pair `(i, j)`, `i ≠ j`,
    /// `Σ_k (−1)^k x_i^{(1−a_ij−k)} x_j x_i^{(k)}` for `x = e` and `x = f`.
    pub fn serre(&self, i: usize, j: usize) -> Result<(UqElement<F>, UqElement<F>)> {
        let n = (1 - self.datum.a[i][j]) as u32;
        let mut se = self.zero();
        let mut sf = self.zero();
        for k in 0..=n {
            let sign = if k % 2 == 0 { F::one() } else { -F::one() };
            let te = self.mul_all(&[&self.e_divided(i, n - k)?, &self.e(j), &self.e_divided(i, k)?])?;
            let tf = self.mul_all(&[&self.f_divided(i, n - k)?, &self.f(j), &self.f_divided(i, k)?])?;
            se = se.add(&te.scale(&sign))?;
            sf = sf.add(&tf.scale(&sign))?;
        }
        Ok((se, sf))
    }
}
