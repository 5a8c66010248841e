use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use qflag_core::aq::Aq;
use qflag_core::bq::Bq;
use qflag_core::braid::Pbw;
use qflag_core::cartan::DatumConfig;
use qflag_core::dq::{Dq, Window};
use qflag_core::suite::{run_suite, RunConfig, Status, Suite};
use qflag_core::uq::Uq;
use qflag_core::{CartanDatum, Error, Scalar, Weight};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "qflag",
    version,
    about = "Exact checks for quantized flag manifolds and their differential operators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct DatumArgs {
    /// Cartan type: A1, A2 or B2.
    #[arg(long = "type", default_value = "A1")]
    ty: String,
    /// Rank, checked against the type.
    #[arg(long)]
    rank: Option<usize>,
    /// 1-based reduced word for the longest Weyl element, e.g. 2,1,2.
    #[arg(long, value_delimiter = ',')]
    word: Option<Vec<usize>>,
    /// Override of the root-of-q denominator N.
    #[arg(long = "n-override")]
    n_override: Option<i64>,
    /// Height cap of the U_q(n±) tables.
    #[arg(long = "half-cap", default_value_t = 12)]
    half_cap: i64,
}

impl DatumArgs {
    fn config(&self) -> DatumConfig {
        DatumConfig {
            ty: Some(self.ty.clone()),
            rank: self.rank,
            reduced_word: self.word.clone(),
            n_override: self.n_override,
        }
    }

    fn datum(&self) -> Result<CartanDatum, Error> {
        if self.half_cap <= 0 {
            return Err(Error::Config("caps must be positive".into()));
        }
        self.config().build()
    }

    fn uq(&self) -> Result<Arc<Uq<Scalar>>, Error> {
        Ok(Arc::new(Uq::new(self.datum()?, self.half_cap)))
    }

    fn aq(&self) -> Result<Arc<Aq<Scalar>>, Error> {
        Ok(Arc::new(Aq::new(self.uq()?, 64)?))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and write a JSON report.
    Suite {
        /// Suite names (hopf, serre, braid, pbw, pairing, modules, aq, dq, rel1, rel2, cosets, bq, telement, decomp).
        names: Vec<String>,
        /// Run every suite.
        #[arg(long)]
        all: bool,
        /// Comma-separated suite names, same as the positional list.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Height cap for PBW, pairing and t-element checks.
        #[arg(long = "height-cap")]
        height_cap: Option<i64>,
        /// Upper bound of the degree window, e.g. 1,1.
        #[arg(long)]
        window: Option<String>,
        /// Report path; the report goes to stdout when omitted.
        #[arg(long, alias = "report")]
        out: Option<PathBuf>,
    },
    /// Check the dual-basis exchange relation for every basis vector of A_q(nu).
    #[command(name = "rel1-verify")]
    Rel1Verify {
        #[command(flatten)]
        datum: DatumArgs,
        /// Degree nu, e.g. 1 (A1) or 1,0.
        #[arg(long)]
        nu: String,
        /// Window bound; defaults to nu.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, alias = "report")]
        out: Option<PathBuf>,
    },
    /// Braid relations of the Lusztig automorphisms on all Chevalley generators.
    #[command(name = "braid-check")]
    BraidCheck {
        #[command(flatten)]
        datum: DatumArgs,
    },
    /// Root vectors of the convex order given by the reduced word.
    #[command(name = "root-vectors")]
    RootVectors {
        #[command(flatten)]
        datum: DatumArgs,
    },
    /// Gram matrix of the pairing on one grade, in PBW bases.
    Pairing {
        #[command(flatten)]
        datum: DatumArgs,
        /// Grade in simple-root coordinates, e.g. 1,1 or a1+a2.
        #[arg(long)]
        grade: String,
    },
    /// Build the irreducible module of highest weight nu.
    Module {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        nu: String,
        /// Include the e_i and f_i matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Elements of U_q(g): normal form, coproduct, antipode.
    Uq {
        #[command(subcommand)]
        op: UqOp,
    },
    /// Elements of B_q.
    Bq {
        #[command(subcommand)]
        op: BqOp,
    },
}

#[derive(Subcommand)]
enum UqOp {
    /// PBW normal form of an expression such as `e1*f1 - f1*e1`.
    #[command(name = "normal-form")]
    NormalForm {
        #[command(flatten)]
        datum: DatumArgs,
        expr: String,
    },
    Coproduct {
        #[command(flatten)]
        datum: DatumArgs,
        expr: String,
    },
    Antipode {
        #[command(flatten)]
        datum: DatumArgs,
        expr: String,
    },
}

#[derive(Subcommand)]
enum BqOp {
    /// Normal form of a word such as `d[e1]*m[xi1]`.
    #[command(name = "normal-form")]
    NormalForm {
        #[command(flatten)]
        datum: DatumArgs,
        expr: String,
    },
    /// The torus element of weight lambda built from dual bases, with its action check.
    #[command(name = "t-element")]
    TElement {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        lambda: String,
        #[arg(long = "height-cap", default_value_t = 3)]
        height_cap: i64,
    },
}

fn exit_code_of(e: &Error) -> u8 {
    match e {
        Error::Violation(_) => 1,
        Error::Capacity(_) => 2,
        _ => 3,
    }
}

fn emit(v: &Value, out: Option<&PathBuf>) -> Result<(), Error> {
    let s = serde_json::to_string_pretty(v).expect("report serializes");
    match out {
        Some(p) => std::fs::write(p, s + "\n").map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{s}");
            Ok(())
        }
    }
}

fn parse_window(d: &CartanDatum, s: &str) -> Result<Weight, Error> {
    let w = d.parse_weight(s)?;
    if !d.is_dominant(w) {
        return Err(Error::Config(format!("window bound `{s}` must be dominant")));
    }
    Ok(w)
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Suite { names, all, suite, datum, seed, height_cap, window, out } => {
            let mut suites: Vec<Suite> = if all {
                Suite::ALL.to_vec()
            } else {
                names.iter().chain(&suite).map(|s| s.parse()).collect::<Result<_, _>>()?
            };
            suites.sort();
            let d = datum.datum()?;
            let window = window.map(|w| parse_window(&d, &w)).transpose()?;
            let cfg = RunConfig { datum: datum.config(), suites, seed, height_cap, window, half_cap: datum.half_cap };
            let report = run_suite(&cfg)?;
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Evidence => "evidence",
                    Status::Capacity => "capacity",
                };
                eprintln!("[{tag}] {} ({}) {} ms", c.id, c.anchor, c.timing_ms);
            }
            let s = &report.summary;
            eprintln!("{} pass, {} evidence, {} fail, {} capacity", s.pass, s.evidence, s.fail, s.capacity);
            emit(&serde_json::to_value(&report).expect("report serializes"), out.as_ref())?;
            Ok(report.exit_code() as u8)
        }
        Cmd::Rel1Verify { datum, nu, window, out } => {
            let aq = datum.aq()?;
            let d = &aq.uq.datum;
            let nu = parse_window(d, &nu)?;
            let bound = match window {
                Some(w) => parse_window(d, &w)?,
                None => nu,
            };
            let win = Window::below(d.rank, bound);
            let dq = Dq::new(aq.clone());
            let mut reps = Vec::new();
            let mut ok = true;
            for k in 0..aq.dim(nu)? {
                let r = dq.rel1_check(nu, k, &win)?;
                ok &= r.passed;
                eprintln!(
                    "[{}] phi {k}: effective height {}, stable through {}",
                    if r.passed { "pass" } else { "FAIL" },
                    r.effective_height,
                    r.stable_through
                );
                reps.push(r);
            }
            emit(
                &json!({ "anchor": "dual-basis-exchange", "nu": d.fmt_weight(nu), "status": if ok { "pass" } else { "fail" }, "checks": reps }),
                out.as_ref(),
            )?;
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::BraidCheck { datum } => {
            let uq = datum.uq()?;
            let mut reps = Vec::new();
            let mut ok = true;
            for i in 0..uq.rank() {
                for j in (i + 1)..uq.rank() {
                    let r = uq.verify_braid(i, j)?;
                    ok &= r.passed();
                    reps.push(r);
                }
            }
            emit(
                &json!({ "anchor": "braid-relation", "status": if ok { "pass" } else { "fail" }, "checks": reps }),
                None,
            )?;
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::RootVectors { datum } => {
            let pbw = Pbw::standard(datum.uq()?)?;
            let mut rows = Vec::new();
            for (t, b) in pbw.order.roots.iter().enumerate() {
                rows.push(json!({
                    "root": &b.0[..pbw.uq.rank()],
                    "e": pbw.render(&pbw.e_roots[t])?,
                    "f": pbw.render(&pbw.f_roots[t])?,
                }));
            }
            let word: Vec<usize> = pbw.order.word.iter().map(|i| i + 1).collect();
            emit(&json!({ "reduced_word": word, "root_vectors": rows }), None)?;
            Ok(0)
        }
        Cmd::Pairing { datum, grade } => {
            let pbw = Pbw::standard(datum.uq()?)?;
            let g = pbw.uq.datum.parse_root(&grade)?;
            if !g.is_nonneg() {
                return Err(Error::Config(format!("grade `{grade}` must be a non-negative root combination")));
            }
            emit(&serde_json::to_value(pbw.gram_report(g)?).expect("serializes"), None)?;
            Ok(0)
        }
        Cmd::Module { datum, nu, matrices } => {
            let aq = datum.aq()?;
            let nu = parse_window(&aq.uq.datum, &nu)?;
            let m = aq.module(nu)?;
            let bad = m.rep.check_relations()?;
            let mut v = serde_json::to_value(m.report(matrices)).expect("serializes");
            v["relations_hold"] = json!(bad.is_empty());
            emit(&v, None)?;
            Ok(if bad.is_empty() && m.dim() as u64 == aq.uq.datum.weyl_dim(nu) { 0 } else { 1 })
        }
        Cmd::Uq { op } => {
            let (datum, expr, kind) = match op {
                UqOp::NormalForm { datum, expr } => (datum, expr, 0),
                UqOp::Coproduct { datum, expr } => (datum, expr, 1),
                UqOp::Antipode { datum, expr } => (datum, expr, 2),
            };
            let pbw = Pbw::standard(datum.uq()?)?;
            let uq = &pbw.uq;
            let x = uq.parse(&expr)?;
            let v = match kind {
                0 => json!({ "input": expr, "normal_form": pbw.render(&x)? }),
                1 => {
                    let mut terms = Vec::new();
                    for (k, c) in uq.coproduct(&x)?.terms() {
                        let l = pbw.render(&uq.mono_element(&k[0]))?;
                        let r = pbw.render(&uq.mono_element(&k[1]))?;
                        terms.push(json!({ "coefficient": c.to_string(), "left": l, "right": r }));
                    }
                    json!({ "input": expr, "coproduct": terms })
                }
                _ => json!({ "input": expr, "antipode": pbw.render(&uq.antipode(&x)?)? }),
            };
            emit(&v, None)?;
            Ok(0)
        }
        Cmd::Bq { op } => match op {
            BqOp::NormalForm { datum, expr } => {
                let bq = Bq::new(datum.aq()?);
                let z = bq.normal_form(&expr)?;
                let v = json!({ "input": expr, "normal_form": bq.render_eq(&z)?, "terms": bq.dump(&z)? });
                emit(&v, None)?;
                Ok(0)
            }
            BqOp::TElement { datum, lambda, height_cap } => {
                if height_cap <= 0 {
                    return Err(Error::Config("caps must be positive".into()));
                }
                let bq = Bq::new(datum.aq()?);
                let l = bq.aq.uq.datum.parse_weight(&lambda)?;
                let r = bq.t_element_check(l, height_cap)?;
                let ok = r.passed;
                emit(
                    &json!({ "anchor": "torus-element-action", "status": if ok { "pass" } else { "fail" }, "check": r }),
                    None,
                )?;
                Ok(if ok { 0 } else { 1 })
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("qflag: {e}");
            ExitCode::from(exit_code_of(&e))
        }
    }
}
