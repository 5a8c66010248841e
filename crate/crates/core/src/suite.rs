//! Verification suites and their machine-readable report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aq::{Aq, AqElement};
use crate::bq::{random_word, word_string, Bq, WordGen};
use crate::cartan::{CartanType, DatumConfig, RootVec, Weight};
use crate::dq::{CheckResult, Dq, DqOperator, RelationSample, Window};
use crate::error::{Error, Result};
use crate::scalar::{QExp, QField, RatFunc, Zero};
use crate::uq::{SubalgebraTag, Uq, UqElement};

type F = RatFunc;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Hopf,
    Serre,
    Braid,
    Pbw,
    Pairing,
    Modules,
    Aq,
    Dq,
    Rel1,
    Rel2,
    Cosets,
    Bq,
    Telement,
    Decomp,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Hopf,
        Suite::Serre,
        Suite::Braid,
        Suite::Pbw,
        Suite::Pairing,
        Suite::Modules,
        Suite::Aq,
        Suite::Dq,
        Suite::Rel1,
        Suite::Rel2,
        Suite::Cosets,
        Suite::Bq,
        Suite::Telement,
        Suite::Decomp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hopf => "hopf",
            Suite::Serre => "serre",
            Suite::Braid => "braid",
            Suite::Pbw => "pbw",
            Suite::Pairing => "pairing",
            Suite::Modules => "modules",
            Suite::Aq => "aq",
            Suite::Dq => "dq",
            Suite::Rel1 => "rel1",
            Suite::Rel2 => "rel2",
            Suite::Cosets => "cosets",
            Suite::Bq => "bq",
            Suite::Telement => "telement",
            Suite::Decomp => "decomp",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Config(format!("unknown suite `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Positive evidence for a statement that is sampled, not proved.
    Evidence,
    /// A cap was too small to decide the check.
    Capacity,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// Name of the identity being checked.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<Vec<i64>>>,
    pub caps: BTreeMap<String, i64>,
    pub timing_ms: u64,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub evidence: usize,
    pub capacity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub ty: String,
    pub rank: usize,
    pub reduced_word: Vec<usize>,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub timing_ms: BTreeMap<String, u64>,
}

impl Report {
    /// 0 when everything passed, 1 on a violated identity, 2 when only caps were hit.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if self.summary.capacity > 0 {
            2
        } else {
            0
        }
    }

    pub fn of_suite(&self, s: Suite) -> impl Iterator<Item = &CheckRecord> {
        let p = format!("{}/", s.name());
        self.checks.iter().filter(move |c| c.id.starts_with(&p))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub datum: DatumConfig,
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Height cap for PBW, pairing and `t`-element checks.
    pub height_cap: Option<i64>,
    /// Upper bound of the degree window for operator checks.
    pub window: Option<Weight>,
    /// Height cap of the `U_q(n^±)` tables.
    pub half_cap: i64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            datum: DatumConfig::default(),
            suites: Vec::new(),
            seed: 0,
            height_cap: None,
            window: None,
            half_cap: 12,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.half_cap <= 0 || self.height_cap.is_some_and(|h| h <= 0) {
            return Err(Error::Config("caps must be positive".into()));
        }
        if let Some(w) = self.window {
            if w.0.iter().any(|&x| x < 0) {
                return Err(Error::Config("window bound must be dominant".into()));
            }
        }
        Ok(())
    }
}

/// Lazily built algebras shared by the suites of one run.
pub struct Context {
    pub uq: Arc<Uq<F>>,
    aq: OnceLock<Arc<Aq<F>>>,
    bq: OnceLock<Arc<Bq<F>>>,
}

impl Context {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        let d = cfg.datum.build()?;
        Ok(Context { uq: Arc::new(Uq::new(d, cfg.half_cap)), aq: OnceLock::new(), bq: OnceLock::new() })
    }

    pub fn aq(&self) -> Result<Arc<Aq<F>>> {
        if let Some(a) = self.aq.get() {
            return Ok(a.clone());
        }
        let a = Arc::new(Aq::new(self.uq.clone(), 64)?);
        Ok(self.aq.get_or_init(|| a).clone())
    }

    pub fn dq(&self) -> Result<Dq<F>> {
        Ok(Dq::new(self.aq()?))
    }

    pub fn bq(&self) -> Result<Arc<Bq<F>>> {
        if let Some(b) = self.bq.get() {
            return Ok(b.clone());
        }
        let b = Arc::new(Bq::new(self.aq()?));
        Ok(self.bq.get_or_init(|| b).clone())
    }
}

/// What a single check produced.
#[derive(Default)]
struct Outcome {
    passed: bool,
    evidence: bool,
    window: Option<Vec<Vec<i64>>>,
    caps: BTreeMap<String, i64>,
    witnesses: Vec<String>,
    detail: Option<serde_json::Value>,
}

impl Outcome {
    fn new(passed: bool) -> Self {
        Outcome { passed, ..Default::default() }
    }

    fn evidence(passed: bool) -> Self {
        Outcome { passed, evidence: true, ..Default::default() }
    }

    fn window(mut self, w: Vec<Vec<i64>>) -> Self {
        self.window = Some(w);
        self
    }

    fn cap(mut self, k: &str, v: i64) -> Self {
        self.caps.insert(k.to_string(), v);
        self
    }

    fn witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    fn witnesses(mut self, w: impl IntoIterator<Item = String>) -> Self {
        self.witnesses.extend(w);
        self
    }

    fn detail(mut self, d: &impl Serialize) -> Self {
        self.detail = serde_json::to_value(d).ok();
        self
    }
}

impl From<CheckResult> for Outcome {
    fn from(c: CheckResult) -> Self {
        Outcome::new(c.passed).witnesses(c.witness)
    }
}

struct Recorder {
    checks: Vec<CheckRecord>,
}

impl Recorder {
    /// Runs one check. Capacity and violation errors become statuses; configuration
    /// errors abort the run.
    fn run(&mut self, id: String, anchor: &str, f: impl FnOnce() -> Result<Outcome>) -> Result<()> {
        let start = Instant::now();
        let res = f();
        let timing_ms = start.elapsed().as_millis() as u64;
        let (status, o) = match res {
            Ok(o) => {
                let s = match (o.passed, o.evidence) {
                    (false, _) => Status::Fail,
                    (true, true) => Status::Evidence,
                    (true, false) => Status::Pass,
                };
                (s, o)
            }
            Err(e @ Error::Config(_)) => return Err(e),
            Err(e @ Error::Capacity(_)) => (Status::Capacity, Outcome::default().witness(e.to_string())),
            Err(e) => (Status::Fail, Outcome::default().witness(e.to_string())),
        };
        self.checks.push(CheckRecord {
            id,
            anchor: anchor.to_string(),
            status,
            window: o.window,
            caps: o.caps,
            timing_ms,
            witnesses: o.witnesses,
            detail: o.detail,
        });
        Ok(())
    }
}

/// Execute the selected suites. An empty selection yields an empty report.
pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let ctx = Context::new(cfg)?;
    let mut rec = Recorder { checks: Vec::new() };
    let mut timing = BTreeMap::new();
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    for &s in &suites {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(s as u64 + 1)));
        let r = Runner { ctx: &ctx, cfg, rec: &mut rec, rng: &mut rng };
        r.run(s)?;
        timing.insert(s.name().to_string(), start.elapsed().as_millis() as u64);
    }
    let mut summary = Summary::default();
    for c in &rec.checks {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Evidence => summary.evidence += 1,
            Status::Capacity => summary.capacity += 1,
        }
    }
    let d = &ctx.uq.datum;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        ty: d.ty.to_string(),
        rank: d.rank,
        reduced_word: d.order.word.iter().map(|i| i + 1).collect(),
        seed: cfg.seed,
        suites,
        checks: rec.checks,
        summary,
        timing_ms: timing,
    })
}

fn w(a: i64, b: i64) -> Weight {
    Weight([a, b])
}

/// Dominant weights with every coordinate at most `max`.
fn box_weights(rank: usize, max: i64) -> Vec<Weight> {
    Window::below(rank, Weight([max, if rank == 1 { 0 } else { max }])).weights
}

struct Runner<'a> {
    ctx: &'a Context,
    cfg: &'a RunConfig,
    rec: &'a mut Recorder,
    rng: &'a mut ChaCha8Rng,
}

impl Runner<'_> {
    fn ty(&self) -> CartanType {
        self.ctx.uq.ty()
    }

    fn rank(&self) -> usize {
        self.ctx.uq.rank()
    }

    fn fw(&self, w: Weight) -> String {
        self.ctx.uq.datum.fmt_weight(w)
    }

    fn run(mut self, s: Suite) -> Result<()> {
        match s {
            Suite::Hopf => self.hopf(),
            Suite::Serre => self.serre(),
            Suite::Braid => self.braid(),
            Suite::Pbw => self.pbw(),
            Suite::Pairing => self.pairing(),
            Suite::Modules => self.modules(),
            Suite::Aq => self.aq(),
            Suite::Dq => self.dq(),
            Suite::Rel1 => self.rel1(),
            Suite::Rel2 => self.rel2(),
            Suite::Cosets => self.cosets(),
            Suite::Bq => self.bq(),
            Suite::Telement => self.telement(),
            Suite::Decomp => self.decomp(),
        }
    }

    /// A random word of length `1..=4` in `e_i`, `f_i`, `k_{±ϖ_i}`.
    fn random_uq_word(&mut self) -> (String, UqElement<F>) {
        let uq = self.ctx.uq.clone();
        let n = self.rng.gen_range(1..=4);
        let mut names = Vec::new();
        let mut acc = uq.one();
        for _ in 0..n {
            let i = self.rng.gen_range(0..uq.rank());
            let (name, g) = match self.rng.gen_range(0..4) {
                0 => (format!("e{}", i + 1), uq.e(i)),
                1 => (format!("f{}", i + 1), uq.f(i)),
                2 => {
                    let l = uq.datum.fundamental(i);
                    (format!("k[{}]", self.fw(l)), uq.k(l))
                }
                _ => {
                    let l = -uq.datum.fundamental(i);
                    (format!("k[{}]", self.fw(l)), uq.k(l))
                }
            };
            names.push(name);
            acc = uq.mul(&acc, &g).expect("generators multiply");
        }
        (names.join("*"), acc)
    }

    fn hopf(&mut self) -> Result<()> {
        let uq = self.ctx.uq.clone();
        let mut samples = Vec::new();
        for i in 0..uq.rank() {
            samples.push((format!("e{}", i + 1), uq.e(i)));
            samples.push((format!("f{}", i + 1), uq.f(i)));
            let l = uq.datum.fundamental(i);
            samples.push((format!("k[{}]", self.fw(l)), uq.k(l)));
        }
        for _ in 0..50 {
            samples.push(self.random_uq_word());
        }
        for (k, (name, x)) in samples.into_iter().enumerate() {
            let uq = uq.clone();
            self.rec.run(format!("hopf/{k:02}/{name}"), "hopf-axioms", move || {
                let mut bad = Vec::new();
                let d = uq.coproduct(&x)?;
                if uq.coproduct_at(&d, 0)? != uq.coproduct_at(&d, 1)? {
                    bad.push("coassociativity".to_string());
                }
                let id = |y: &UqElement<F>| Ok(y.clone());
                let eps = |y: &UqElement<F>| Ok(uq.scalar(uq.counit(y)));
                if uq.contract(&d, &[&eps, &id])? != x || uq.contract(&d, &[&id, &eps])? != x {
                    bad.push("counit".into());
                }
                let ex = uq.scalar(uq.counit(&x));
                let s = |y: &UqElement<F>| uq.antipode(y);
                if uq.antipode_axiom(&x)? != ex || uq.contract(&d, &[&id, &s])? != ex {
                    bad.push("antipode".into());
                }
                if uq.antipode(&uq.antipode_inv(&x)?)? != x {
                    bad.push("antipode inverse".into());
                }
                Ok(Outcome::new(bad.is_empty()).witnesses(bad))
            })?;
        }
        Ok(())
    }

    fn serre(&mut self) -> Result<()> {
        let uq = self.ctx.uq.clone();
        for i in 0..uq.rank() {
            for j in 0..uq.rank() {
                if i == j {
                    continue;
                }
                let uq = uq.clone();
                self.rec.run(format!("serre/{}{}", i + 1, j + 1), "quantum-serre", move || {
                    let (se, sf) = uq.serre(i, j)?;
                    let mut o = Outcome::new(se.is_zero() && sf.is_zero());
                    if !se.is_zero() {
                        o = o.witness("e-side combination is nonzero");
                    }
                    if !sf.is_zero() {
                        o = o.witness("f-side combination is nonzero");
                    }
                    Ok(o)
                })?;
            }
        }
        Ok(())
    }

    fn braid(&mut self) -> Result<()> {
        let uq = self.ctx.uq.clone();
        for i in 0..uq.rank() {
            for j in (i + 1)..uq.rank() {
                let uq = uq.clone();
                self.rec.run(format!("braid/{}{}", i + 1, j + 1), "braid-relation", move || {
                    let r = uq.verify_braid(i, j)?;
                    Ok(Outcome::new(r.passed()).witnesses(r.failures.clone()).cap("m", r.m as i64).detail(&r))
                })?;
            }
        }
        Ok(())
    }

    fn pbw(&mut self) -> Result<()> {
        let aq = self.ctx.aq()?;
        let cap = self.cfg.height_cap.unwrap_or(6);
        for h in 0..=cap {
            for g in aq.uq.datum.grades_of_height(h) {
                let aq = aq.clone();
                self.rec.run(format!("pbw/{:?}", &g.0[..self.rank()]), "pbw-dimension", move || {
                    let want = aq.uq.datum.kostant(g) as usize;
                    let half = aq.uq.half.dim(g)?;
                    let pbw = aq.pbw.grade(g)?.exps.len();
                    Ok(Outcome::new(half == want && pbw == want)
                        .cap("height", cap)
                        .witness(format!("kostant {want}, half {half}, pbw monomials {pbw}")))
                })?;
            }
        }
        Ok(())
    }

    fn pairing(&mut self) -> Result<()> {
        let aq = self.ctx.aq()?;
        let uq = aq.uq.clone();
        let cap = self.cfg.height_cap.unwrap_or(4);
        let grades: Vec<RootVec> = (0..=cap).flat_map(|h| uq.datum.grades_of_height(h)).collect();
        let r = self.rank();
        let unit = |n: usize, i: usize| crate::modules::unit::<F>(n, i);
        for &a in &grades {
            let uq = uq.clone();
            let grades = grades.clone();
            self.rec.run(format!("pairing/orthogonal/{:?}", &a.0[..r]), "pairing-orthogonality", move || {
                let mut bad = Vec::new();
                let na = uq.half.dim(a)?;
                for &b in grades.iter().filter(|b| **b != a && b.height() == a.height()) {
                    let nb = uq.half.dim(b)?;
                    for i in 0..na {
                        for j in 0..nb {
                            if !uq.tau(&uq.e_vec(a, &unit(na, i)), &uq.f_vec(b, &unit(nb, j)))?.is_zero() {
                                bad.push(format!("{:?}[{i}] against {:?}[{j}]", &a.0[..r], &b.0[..r]));
                            }
                        }
                    }
                }
                Ok(Outcome::new(bad.is_empty()).cap("height", cap).witnesses(bad))
            })?;
        }
        for &g in &grades {
            let aq1 = aq.clone();
            self.rec.run(format!("pairing/gram/{:?}", &g.0[..r]), "pairing-nondegeneracy", move || {
                let m = aq1.pbw.gram(g)?;
                let n = aq1.pbw.grade(g)?.exps.len();
                Ok(Outcome::new(m.rank() == n).cap("height", cap).witness(format!("rank {} of {n}", m.rank())))
            })?;
            let aq = aq.clone();
            self.rec.run(format!("pairing/dual/{:?}", &g.0[..r]), "dual-basis", move || {
                let uq = &aq.uq;
                let d = aq.pbw.dual_basis(g)?;
                let mut bad = Vec::new();
                for (a, x) in d.x.iter().enumerate() {
                    for (b, y) in d.y.iter().enumerate() {
                        let t = uq.tau(&uq.e_vec(g, x), &uq.f_vec(g, y))?;
                        let want = if a == b { F::from_int(1) } else { F::zero() };
                        if t != want {
                            bad.push(format!("({a},{b}) = {t}"));
                        }
                    }
                }
                Ok(Outcome::new(bad.is_empty()).cap("height", cap).witnesses(bad))
            })?;
        }
        Ok(())
    }

    fn modules(&mut self) -> Result<()> {
        let aq = self.ctx.aq()?;
        let max = if self.ty() == CartanType::B2 { 1 } else { 2 };
        for nu in box_weights(self.rank(), max) {
            let aq1 = aq.clone();
            let name = self.fw(nu);
            self.rec.run(format!("modules/{name}"), "weyl-dimension", move || {
                let m = aq1.module(nu)?;
                let want = aq1.uq.datum.weyl_dim(nu);
                Ok(Outcome::new(m.dim() as u64 == want).witness(format!("dim {} weyl {want}", m.dim())))
            })?;
            let aq2 = aq.clone();
            self.rec.run(format!("modules/{name}/relations"), "module-relations", move || {
                let bad = aq2.module(nu)?.rep.check_relations()?;
                Ok(Outcome::new(bad.is_empty()).witnesses(bad))
            })?;
        }
        Ok(())
    }

    fn aq_weights(&self) -> Vec<Weight> {
        match self.ty() {
            CartanType::A1 => vec![w(0, 0), w(1, 0), w(2, 0)],
            CartanType::A2 => vec![w(0, 0), w(1, 0), w(0, 1), w(1, 1)],
            CartanType::B2 => vec![w(0, 0), w(1, 0), w(0, 1)],
        }
    }

    fn random_homogeneous(&mut self, aq: &Aq<F>, ws: &[Weight]) -> Result<AqElement<F>> {
        loop {
            let nu = ws[self.rng.gen_range(0..ws.len())];
            let v: Vec<F> = (0..aq.dim(nu)?)
                .map(|_| match self.rng.gen_range(0..4) {
                    0 => F::zero(),
                    1 => F::from_int(self.rng.gen_range(-3..4)),
                    _ => F::q_pow(QExp::int(self.rng.gen_range(-2..3))),
                })
                .collect();
            let x = AqElement::homogeneous(aq.ty(), nu, v);
            if !x.is_zero() {
                return Ok(x);
            }
        }
    }

    fn aq(&mut self) -> Result<()> {
        let aq = self.ctx.aq()?;
        let ws = self.aq_weights();
        for &l in &ws {
            for &m in &ws {
                let aq = aq.clone();
                let id = format!("aq/c/{}+{}", self.fw(l), self.fw(m));
                self.rec.run(id, "cartan-multiplicativity", move || {
                    Ok(Outcome::new(aq.multiply(&aq.c(l)?, &aq.c(m)?)? == aq.c(l + m)?))
                })?;
            }
        }
        let fund: Vec<Weight> = (0..self.rank()).map(|i| aq.uq.datum.fundamental(i)).collect();
        let mut pairs: Vec<(Weight, Weight)> = fund.iter().flat_map(|&a| fund.iter().map(move |&b| (a, b))).collect();
        if self.ty() == CartanType::A1 {
            pairs.push((w(2, 0), w(1, 0)));
        }
        for (nu, mu) in pairs {
            let aq = aq.clone();
            let id = format!("aq/theta/{}x{}", self.fw(nu), self.fw(mu));
            self.rec.run(id, "model-multiplicativity", move || {
                let mut bad = Vec::new();
                for i in 0..aq.dim(nu)? {
                    for j in 0..aq.dim(mu)? {
                        let (x, y) = (aq.basis(nu, i)?, aq.basis(mu, j)?);
                        let lhs = aq.theta(&aq.multiply(&x, &y)?)?;
                        let rhs = aq.model_multiply(&aq.theta(&x)?, &aq.theta(&y)?)?;
                        if lhs != rhs {
                            bad.push(format!("basis {i} x basis {j}"));
                        }
                    }
                }
                Ok(Outcome::new(bad.is_empty()).witnesses(bad))
            })?;
        }
        let ws = &ws[1..];
        let mut samples = Vec::new();
        for _ in 0..100 {
            samples.push((self.random_homogeneous(&aq, ws)?, self.random_homogeneous(&aq, ws)?));
        }
        let aq2 = aq.clone();
        self.rec.run("aq/domain".into(), "no-zero-divisors", move || {
            let mut bad = Vec::new();
            for (k, (x, y)) in samples.iter().enumerate() {
                if aq2.multiply(x, y)?.is_zero() {
                    bad.push(format!("sample {k}"));
                }
            }
            Ok(Outcome::new(bad.is_empty()).cap("samples", samples.len() as i64).witnesses(bad))
        })
    }

    fn window_bound(&self, default: Weight) -> Weight {
        self.cfg.window.unwrap_or(default)
    }

    fn relation_sample(&self, aq: &Aq<F>) -> Result<RelationSample<F>> {
        let uq = &aq.uq;
        let r = uq.rank();
        let (phis, bound) = match self.ty() {
            CartanType::A1 => (vec![(w(1, 0), 0), (w(1, 0), 1), (w(2, 0), 1)], w(3, 0)),
            CartanType::A2 => (vec![(w(1, 0), 1), (w(0, 1), 0)], w(1, 1)),
            CartanType::B2 => (vec![(w(0, 1), 0), (w(0, 1), 3)], w(0, 0)),
        };
        let mut us = vec![("1".to_string(), uq.one())];
        for i in 0..r {
            us.push((format!("e{}", i + 1), uq.e(i)));
            us.push((format!("f{}", i + 1), uq.f(i)));
            us.push((format!("K{}", i + 1), uq.ki(i)));
        }
        us.push(("e1*f1".into(), uq.mul(&uq.e(0), &uq.f(0))?));
        let mut phi_out = Vec::new();
        for (nu, k) in phis {
            phi_out.push((format!("v[{}]{k}", self.fw(nu)), aq.basis(nu, k)?));
        }
        let lambdas = if r == 1 { vec![w(0, 0), w(1, 0), w(-1, 0)] } else { vec![w(0, 0), w(1, 0), w(0, 1)] };
        Ok(RelationSample { phis: phi_out, us, lambdas, window: Window::below(r, self.window_bound(bound)) })
    }

    fn dq(&mut self) -> Result<()> {
        let dq = self.ctx.dq()?;
        let s = self.relation_sample(&dq.aq)?;
        let win = s.window.describe(self.rank());
        let start = Instant::now();
        let results = dq.verify_relations(&s);
        let ms = start.elapsed().as_millis() as u64;
        let results = match results {
            Ok(r) => r,
            Err(e @ Error::Config(_)) => return Err(e),
            Err(e) => {
                return self.rec.run("dq/relations".into(), "operator-relations", move || Err(e));
            }
        };
        let n = results.len().max(1) as u64;
        for (k, c) in results.into_iter().enumerate() {
            let anchor = c.relation.clone();
            let win = win.clone();
            self.rec.run(format!("dq/{k:03}/{}", c.case), &anchor, move || Ok(Outcome::from(c).window(win)))?;
            // the relations are computed together; spread the time evenly
            self.rec.checks.last_mut().expect("just pushed").timing_ms = ms / n;
        }
        Ok(())
    }

    fn rel1(&mut self) -> Result<()> {
        let dq = Arc::new(self.ctx.dq()?);
        let (nus, bound) = match self.ty() {
            CartanType::A1 => (vec![w(1, 0), w(2, 0)], w(3, 0)),
            CartanType::A2 => (vec![w(1, 0), w(0, 1)], w(1, 1)),
            CartanType::B2 => (vec![w(0, 1)], w(1, 0)),
        };
        let win = Window::below(self.rank(), self.window_bound(bound));
        for nu in nus {
            for k in 0..dq.aq.dim(nu)? {
                let (dq, win) = (dq.clone(), win.clone());
                let r = self.rank();
                self.rec.run(format!("rel1/{}/{k}", self.fw(nu)), "dual-basis-exchange", move || {
                    let rep = dq.rel1_check(nu, k, &win)?;
                    Ok(Outcome::new(rep.passed && rep.stable_through > rep.effective_height)
                        .window(win.describe(r))
                        .cap("effective_height", rep.effective_height)
                        .cap("stable_through", rep.stable_through)
                        .witnesses(rep.witness.clone())
                        .detail(&rep))
                })?;
            }
        }
        Ok(())
    }

    fn rel2(&mut self) -> Result<()> {
        let dq = Arc::new(self.ctx.dq()?);
        let r = self.rank();
        let cap = self.cfg.height_cap.unwrap_or(3);
        let mut lambdas = vec![w(0, 0)];
        lambdas.extend((0..r).map(|i| dq.aq.uq.datum.fundamental(i)));
        for l in lambdas {
            let dq = dq.clone();
            self.rec.run(format!("rel2/torus/{}", self.fw(l)), "local-torus-expression", move || {
                let rep = dq.torus_expression_verify(l, cap)?;
                Ok(Outcome::new(rep.passed).cap("height", cap).witnesses(rep.witness.clone()).detail(&rep))
            })?;
        }
        let cases: Vec<(usize, Weight, Vec<Weight>, Vec<Weight>)> = if r == 1 {
            [w(1, 0), w(2, 0)]
                .into_iter()
                .map(|nu| (0, nu, vec![w(0, 0), w(1, 0)], vec![w(0, 0), w(1, 0), w(2, 0)]))
                .collect()
        } else {
            (0..r).map(|i| (i, dq.aq.uq.datum.fundamental(i), vec![w(0, 0), w(0, 1)], vec![w(0, 0), w(1, 0)])).collect()
        };
        for (i, nu, lambdas, degrees) in cases {
            let dq = dq.clone();
            let id = format!("rel2/fk/{}/{}", i + 1, self.fw(nu));
            self.rec.run(id, "local-fk-expression", move || {
                let rep = dq.fk_expression_verify(i, nu, &lambdas, &degrees)?;
                Ok(Outcome::new(rep.passed).witnesses(rep.witness.clone()).detail(&rep))
            })?;
        }
        let degs = match self.ty() {
            CartanType::A1 => vec![w(0, 0), w(1, 0), w(2, 0)],
            _ => vec![w(1, 0), w(0, 1)],
        };
        let shifts = if r == 1 { vec![w(1, 0), w(-1, 0)] } else { vec![w(1, 0), w(-1, 1)] };
        let dq2 = dq.clone();
        let start = Instant::now();
        let res = dq2.transport_check(&degs, &shifts);
        let ms = start.elapsed().as_millis() as u64;
        match res {
            Ok(cs) => {
                let n = cs.len().max(1) as u64;
                for (k, c) in cs.into_iter().enumerate() {
                    self.rec
                        .run(format!("rel2/transport/{k:02}/{}", c.case), "model-transport", move || Ok(c.into()))?;
                    self.rec.checks.last_mut().expect("just pushed").timing_ms = ms / n;
                }
                Ok(())
            }
            Err(e) => self.rec.run("rel2/transport".into(), "model-transport", move || Err(e)),
        }
    }

    fn cosets(&mut self) -> Result<()> {
        let dq = Arc::new(self.ctx.dq()?);
        let uq = dq.aq.uq.clone();
        let r = self.rank();
        let (probes, win) = match self.ty() {
            CartanType::A1 => {
                (vec![("id".to_string(), DqOperator::id())], Window::below(1, self.window_bound(w(1, 0))))
            }
            CartanType::A2 => {
                let mut win = Window::below(2, self.window_bound(w(1, 1)));
                if self.cfg.window.is_none() {
                    win.weights.push(w(2, 0));
                }
                (vec![("id".to_string(), DqOperator::id()), ("d_e1".to_string(), DqOperator::d(uq.e(0)))], win)
            }
            CartanType::B2 => {
                (vec![("id".to_string(), DqOperator::id())], Window::below(2, self.window_bound(w(1, 1))))
            }
        };
        for right in [true, false] {
            let (dq, probes, win) = (dq.clone(), probes.clone(), win.clone());
            let side = if right { "right" } else { "left" };
            self.rec.run(format!("cosets/dq/{side}"), "coset-independence", move || {
                let rep = dq.coset_independence(&probes, &win, &win.weights, right)?;
                Ok(Outcome::evidence(rep.independent())
                    .window(win.describe(r))
                    .witness(format!("{}: rank {} of {}", rep.family, rep.rank, rep.members))
                    .detail(&rep))
            })?;
        }
        let bq = self.ctx.bq()?;
        let cap = self.cfg.height_cap.unwrap_or(3);
        self.rec.run("cosets/bq".into(), "coset-independence", move || {
            let bs = vec![bq.one(), bq.m_simple(0), bq.d_simple(r - 1)];
            let (n, k) = bq.coset_rank(&bs, cap)?;
            Ok(Outcome::evidence(n == k).cap("height", cap).witness(format!("t_lambda b: rank {k} of {n}")))
        })
    }

    fn bq(&mut self) -> Result<()> {
        let bq = self.ctx.bq()?;
        let r = self.rank();
        for i in 0..r {
            for j in 0..r {
                let bq = bq.clone();
                self.rec.run(format!("bq/delta/{}{}", i + 1, j + 1), "delta-commutation", move || {
                    let uq = &bq.aq.uq;
                    let nf = |s: String| -> Result<_> {
                        bq.normal_form(&s)?.as_b().ok_or_else(|| Error::Domain("unexpected torus part".into()))
                    };
                    let dm = nf(format!("d[e{}]*m[xi{}]", i + 1, j + 1))?;
                    let md = nf(format!("m[xi{}]*d[e{}]", j + 1, i + 1))?;
                    let s = F::q_pow(-uq.datum.qexp(uq.alpha(i), uq.alpha(j)));
                    let lhs = dm.sub(&md.scale(&s))?;
                    let rhs = if i == j { bq.one() } else { crate::bq::BqElement::zero(bq.ty()) };
                    Ok(Outcome::new(lhs == rhs).witness(bq.render(&lhs)?))
                })?;
            }
        }
        let words: Vec<Vec<WordGen>> = (0..100).map(|_| random_word(self.rng, r, 4)).collect();
        let bq2 = bq.clone();
        self.rec.run("bq/faithfulness".into(), "faithfulness", move || {
            let mut bad = Vec::new();
            for w in &words {
                let rep = bq2.faithfulness(w, None)?;
                if !rep.passed() {
                    bad.push(format!("{:?}", rep));
                }
            }
            Ok(Outcome::new(bad.is_empty()).cap("words", words.len() as i64).cap("degree", 4).witnesses(bad))
        })?;
        let pairs: Vec<(Vec<WordGen>, Vec<WordGen>)> =
            (0..50).map(|_| (random_word(self.rng, r, 3), random_word(self.rng, r, 3))).collect();
        let bq2 = bq.clone();
        self.rec.run("bq/top-terms".into(), "top-term-multiplicativity", move || {
            let mut bad = Vec::new();
            for (a, b) in &pairs {
                let x = bq2.word_element(a)?;
                let y = bq2.word_element(b)?;
                let rep = bq2.top_product_check(&x, &y)?;
                if !rep.passed || bq2.mul(&x, &y)?.is_zero() {
                    bad.push(format!("{} * {}", word_string(a), word_string(b)));
                }
            }
            Ok(Outcome::new(bad.is_empty()).cap("pairs", pairs.len() as i64).witnesses(bad))
        })?;
        let bq2 = bq.clone();
        self.rec.run("bq/non-units".into(), "non-unit", move || {
            let probes: Vec<_> = ["1", "m[xi1]", "d[e1]", "m[xi1]*d[e1]", "1 + d[e1]*d[e1]"]
                .iter()
                .map(|s| bq2.normal_form(s).map(|e| e.as_b().expect("no torus part")))
                .collect::<Result<_>>()?;
            let mut bad = Vec::new();
            for s in ["m[xi1]", "d[e1]", "1 + m[xi1]", "1 + d[e1]", "m[xi1]*d[e1]"] {
                let z = bq2.normal_form(s)?.as_b().expect("no torus part");
                if !bq2.non_unit_evidence(&z, &probes)? {
                    bad.push(s.to_string());
                }
            }
            Ok(Outcome::evidence(bad.is_empty()).witnesses(bad))
        })
    }

    fn telement(&mut self) -> Result<()> {
        let bq = self.ctx.bq()?;
        let r = self.rank();
        let cap = self.cfg.height_cap.unwrap_or(3);
        for i in 0..r {
            let l = 2 * bq.aq.uq.datum.fundamental(i);
            let bq2 = bq.clone();
            self.rec.run(format!("telement/{}", self.fw(l)), "torus-element-action", move || {
                let rep = bq2.t_element_check(l, cap)?;
                Ok(Outcome::new(rep.passed)
                    .cap("height", cap)
                    .witness(format!("orientation {}", rep.orientation))
                    .detail(&rep))
            })?;
            let mut samples = vec![("1".to_string(), bq.one())];
            for j in 0..r {
                samples.push((format!("m[xi{}]", j + 1), bq.m_simple(j)));
                samples.push((format!("d[e{}]", j + 1), bq.d_simple(j)));
            }
            for (name, a) in samples {
                let bq2 = bq.clone();
                self.rec.run(format!("telement/{}/ore/{name}", self.fw(l)), "ore-condition", move || {
                    let wit = bq2.ore_witness(&name, &a, l)?;
                    Ok(Outcome::new(wit.verified)
                        .witness(format!("left {} right {}", wit.left, wit.right))
                        .detail(&wit))
                })?;
            }
        }
        Ok(())
    }

    fn decomp(&mut self) -> Result<()> {
        let uq = self.ctx.uq.clone();
        let coeffs = ["1", "-2", "q", "q^-1", "3"];
        let mut samples = Vec::new();
        for _ in 0..100 {
            let n = self.rng.gen_range(1..=3);
            let mut x = uq.zero();
            for _ in 0..n {
                let (_, y) = self.random_uq_word();
                let c = crate::scalar::parse_scalar(coeffs[self.rng.gen_range(0..coeffs.len())])?;
                x = x.add(&y.scale(&c))?;
            }
            samples.push(x);
        }
        self.rec.run("decomp/round-trip".into(), "mod2-decomposition", move || {
            let mut bad = Vec::new();
            for (k, x) in samples.iter().enumerate() {
                let parts = uq.decompose_mod2(x)?;
                let mut acc = uq.zero();
                let mut ok = true;
                for (l, c) in &parts {
                    ok &= uq.is_in(SubalgebraTag::Even, c);
                    acc = acc.add(&uq.mul(c, &uq.k(*l))?)?;
                }
                if !ok || &acc != x {
                    bad.push(format!("sample {k}"));
                }
            }
            Ok(Outcome::new(bad.is_empty()).cap("samples", samples.len() as i64).witnesses(bad))
        })
    }
}
