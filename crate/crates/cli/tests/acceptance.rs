//! End-to-end acceptance: full reports for A1 and A2, a structural report for B2, and
//! one pass/fail line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

struct Run {
    report: Value,
    code: Option<i32>,
    elapsed: Duration,
}

fn run(args: &[&str]) -> Run {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_qflag")).args(args).output().expect("qflag runs");
    Run {
        report: serde_json::from_slice(&o.stdout).expect("report is JSON"),
        code: o.status.code(),
        elapsed: start.elapsed(),
    }
}

fn checks<'a>(r: &'a Value, prefix: &'a str) -> impl Iterator<Item = &'a Value> + 'a {
    r["checks"].as_array().unwrap().iter().filter(move |c| c["id"].as_str().unwrap().starts_with(prefix))
}

/// Every matching check passed (or is positive evidence) and there are exactly `n` of them.
fn all_ok(r: &Value, prefix: &str, n: usize) -> Result<(), String> {
    let cs: Vec<_> = checks(r, prefix).collect();
    if cs.len() != n {
        return Err(format!("{} {prefix}: {} checks, expected {n}", r["type"], cs.len()));
    }
    for c in cs {
        let s = c["status"].as_str().unwrap();
        if s != "pass" && s != "evidence" {
            return Err(format!("{} {} is {s}: {}", r["type"], c["id"], c["witnesses"]));
        }
    }
    Ok(())
}

fn suite_ms(r: &Value, s: &str) -> u64 {
    r["timing_ms"][s].as_u64().unwrap_or(0)
}

fn cap(c: &Value, k: &str) -> i64 {
    c["caps"][k].as_i64().unwrap_or(-1)
}

fn grades(rank: usize, h: i64) -> usize {
    // number of (a, b) with a + b = h, a, b ≥ 0
    if rank == 1 {
        1
    } else {
        h as usize + 1
    }
}

fn upto(rank: usize, cap: i64) -> usize {
    (0..=cap).map(|h| grades(rank, h)).sum()
}

#[test]
fn acceptance() {
    let a1 = run(&["suite", "--all", "--type", "A1", "--seed", "2024"]);
    let a2 = run(&["suite", "--all", "--type", "A2", "--seed", "2024"]);
    let b2 = run(&["suite", "hopf", "serre", "braid", "pbw", "pairing", "modules", "--type", "B2", "--seed", "2024"]);
    let (r1, r2, rb) = (&a1.report, &a2.report, &b2.report);
    let full = [r1, r2];
    let all = [r1, r2, rb];

    let mut results: Vec<(usize, &str, Result<(), String>)> = Vec::new();

    results.push((
        1,
        "Hopf axioms on generators and 50 random monomials, A1/A2/B2, < 30 s",
        (|| {
            for (r, rank) in all.iter().zip([1, 2, 2]) {
                all_ok(r, "hopf/", 3 * rank + 50)?;
                if suite_ms(r, "hopf") >= 30_000 {
                    return Err(format!("{} took {} ms", r["type"], suite_ms(r, "hopf")));
                }
            }
            Ok(())
        })(),
    ));

    results.push((
        2,
        "Serre relations vanish, A2/B2",
        (|| {
            for r in [r2, rb] {
                all_ok(r, "serre/", 2)?;
            }
            Ok(())
        })(),
    ));

    results.push((
        3,
        "braid relations on Chevalley generators, A2 3-fold, B2 4-fold",
        (|| {
            for (r, m) in [(r2, 3), (rb, 4)] {
                all_ok(r, "braid/", 1)?;
                let c = checks(r, "braid/").next().unwrap();
                if cap(c, "m") != m || c["detail"]["checked"].as_array().unwrap().len() != 6 {
                    return Err(format!("{} braid check: {c}", r["type"]));
                }
            }
            Ok(())
        })(),
    ));

    results.push((
        4,
        "PBW dimension equals Kostant count for ht <= 6, A2/B2",
        (|| {
            for r in [r2, rb] {
                all_ok(r, "pbw/", upto(2, 6))?;
            }
            Ok(())
        })(),
    ));

    results.push((
        5,
        "pairing orthogonality, Gram invertibility and dual bases for ht <= 4",
        (|| {
            for (r, rank) in all.iter().zip([1, 2, 2]) {
                let n = upto(rank, 4);
                all_ok(r, "pairing/orthogonal/", n)?;
                all_ok(r, "pairing/gram/", n)?;
                all_ok(r, "pairing/dual/", n)?;
            }
            Ok(())
        })(),
    ));

    results.push((
        6,
        "module dimensions match Weyl formula and relations hold",
        (|| {
            for (r, n) in all.iter().zip([3, 9, 4]) {
                all_ok(r, "modules/", 2 * n)?;
            }
            Ok(())
        })(),
    ));

    results.push((
        7,
        "c products, model multiplicativity, 100 nonzero products",
        (|| {
            for (r, nw, np) in [(r1, 3, 2), (r2, 4, 4)] {
                all_ok(r, "aq/c/", nw * nw)?;
                all_ok(r, "aq/theta/", np)?;
                all_ok(r, "aq/domain", 1)?;
                if cap(checks(r, "aq/domain").next().unwrap(), "samples") != 100 {
                    return Err("sample count".into());
                }
            }
            Ok(())
        })(),
    ));

    results.push((
        8,
        "operator relation suite on windows up to 3w (A1) / w1+w2 (A2)",
        (|| {
            for (r, top) in [(r1, vec![3]), (r2, vec![1, 1])] {
                let cs: Vec<_> = checks(r, "dq/").collect();
                all_ok(r, "dq/", cs.len())?;
                let anchors: std::collections::BTreeSet<_> = cs.iter().map(|c| c["anchor"].as_str().unwrap()).collect();
                if anchors.len() != 8 {
                    return Err(format!("{} covers {} relation families", r["type"], anchors.len()));
                }
                let win = cs[0]["window"].as_array().unwrap();
                if !win
                    .iter()
                    .any(|w| w.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).eq(top.iter().copied()))
                {
                    return Err(format!("window {win:?} misses {top:?}"));
                }
            }
            Ok(())
        })(),
    ));

    results.push((
        9,
        "dual-basis exchange relation for every basis vector, stable truncation, < 5 min",
        (|| {
            for (r, n) in [(r1, 2 + 3), (r2, 3 + 3)] {
                all_ok(r, "rel1/", n)?;
                for c in checks(r, "rel1/") {
                    if cap(c, "stable_through") <= cap(c, "effective_height") {
                        return Err(format!("{} not stable", c["id"]));
                    }
                }
                if suite_ms(r, "rel1") >= 300_000 {
                    return Err("too slow".into());
                }
            }
            if checks(r1, "rel1/2/").count() != 3 {
                return Err("A1 nu = 2w missing".into());
            }
            Ok(())
        })(),
    ));

    results.push((
        10,
        "local torus expression and derived f_i k_i expression, A1/A2",
        (|| {
            for (r, n) in [(r1, 2), (r2, 3)] {
                all_ok(r, "rel2/torus/", n)?;
                all_ok(r, "rel2/fk/", 2)?;
            }
            Ok(())
        })(),
    ));

    results.push((
        11,
        "B_q delta relation, faithfulness on 100 words, top terms on 50 pairs",
        (|| {
            for (r, rank) in [(r1, 1), (r2, 2)] {
                all_ok(r, "bq/delta/", rank * rank)?;
                all_ok(r, "bq/faithfulness", 1)?;
                all_ok(r, "bq/top-terms", 1)?;
                let f = checks(r, "bq/faithfulness").next().unwrap();
                let t = checks(r, "bq/top-terms").next().unwrap();
                if cap(f, "words") != 100 || cap(f, "degree") != 4 || cap(t, "pairs") != 50 {
                    return Err("sample sizes".into());
                }
            }
            Ok(())
        })(),
    ));

    results.push((
        12,
        "t-elements act by a q-power of (gamma, 2w_i) for ht <= 3, Ore witnesses",
        (|| {
            for (r, rank) in [(r1, 1usize), (r2, 2)] {
                let ts: Vec<_> = checks(r, "telement/").filter(|c| c["anchor"] == "torus-element-action").collect();
                if ts.len() != rank {
                    return Err("t-element count".into());
                }
                for c in &ts {
                    let o = c["detail"]["orientation"].as_i64().unwrap();
                    if c["status"] != "pass" || o.abs() != 1 || cap(c, "height") < 3 {
                        return Err(format!("{c}"));
                    }
                }
                let ore: Vec<_> = checks(r, "telement/").filter(|c| c["anchor"] == "ore-condition").collect();
                if ore.len() != rank * (1 + 2 * rank) || ore.iter().any(|c| c["status"] != "pass") {
                    return Err("Ore witnesses".into());
                }
            }
            Ok(())
        })(),
    ));

    results.push((
        13,
        "coset-translated independence on stated windows, mod-2 decomposition round trips",
        (|| {
            for r in full {
                all_ok(r, "cosets/", 3)?;
                all_ok(r, "decomp/", 1)?;
                if cap(checks(r, "decomp/").next().unwrap(), "samples") != 100 {
                    return Err("sample count".into());
                }
            }
            Ok(())
        })(),
    ));

    results.push((
        14,
        "qflag suite --all for A1 and A2 exits 0 in < 10 min",
        (|| {
            for x in [&a1, &a2] {
                if x.code != Some(0) {
                    return Err(format!("exit code {:?}", x.code));
                }
            }
            if b2.code != Some(0) {
                return Err(format!("B2 structural run exit code {:?}", b2.code));
            }
            let t = a1.elapsed + a2.elapsed;
            if t >= Duration::from_secs(600) {
                return Err(format!("took {t:?}"));
            }
            println!("    (A1 + A2 full suites: {:.1} s)", t.as_secs_f64());
            Ok(())
        })(),
    ));

    let mut failed = 0;
    for (n, what, res) in &results {
        match res {
            Ok(()) => println!("criterion {n:2}: PASS  {what}"),
            Err(e) => {
                failed += 1;
                println!("criterion {n:2}: FAIL  {what}: {e}");
            }
        }
    }
    assert_eq!(results.len(), 14);
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
