use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use irk_core::algebra::{confirm_distributivity_witness, find_distributivity_violation, Family};
use irk_core::corpus::run_corpus;
use irk_core::embed::{adjoin_zero_embed, check_degree_bounds, degree_search, hat_embed, DegreeOutcome, DegreeResult};
use irk_core::lemmas::{check_subsemigroup, LemmaOptions};
use irk_core::orbits::classify;
use irk_core::schein::{verify_theorem, Status, Theorem, VerifyContext};
use irk_core::subsemigroup::generated_by_at_most_two;
use irk_core::{CayleyTable, DualSymInv, InverseAlgebra, Subsemigroup, SymInv};
use rayon::prelude::*;

const BUDGET: u64 = 5_000_000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn criterion(number: usize, label: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let took = start.elapsed();
    let ok = out.ok && took <= limit;
    let late = if out.ok && !ok { ", over the time limit" } else { "" };
    println!(
        "criterion {number:>2} {} {label}: {} [{:.2} s of {} s{late}]",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn golden(example: usize) -> Outcome {
    match run_corpus(Some(example)) {
        Err(e) => fail(e.to_string()),
        Ok(outcomes) => {
            let o = &outcomes[0];
            let bad: Vec<String> = o
                .mismatches()
                .map(|m| format!("{}: expected {}, computed {}", m.name, m.expected, m.computed))
                .collect();
            if bad.is_empty() {
                pass(format!("{} values match", o.items.len()))
            } else {
                fail(bad.join("; "))
            }
        }
    }
}

fn describe<A: InverseAlgebra>(s: &Subsemigroup<'_, A>) -> String {
    let alg = s.algebra();
    let gens: Vec<String> = s.generators().iter().map(|g| alg.format(g)).collect();
    format!("<{}>", gens.join(", "))
}

fn lemma_sweep<A: InverseAlgebra>(alg: &A, distributive: bool) -> Result<(usize, Vec<String>), String> {
    let subs = generated_by_at_most_two(alg).map_err(|e| e.to_string())?;
    let opts = LemmaOptions {
        distributive,
        enumerate_local_algebras: true,
    };
    let bad = subs
        .par_iter()
        .flat_map_iter(|s| {
            check_subsemigroup(s, opts)
                .into_iter()
                .map(move |v| format!("{} {v}", describe(s)))
        })
        .collect();
    Ok((subs.len(), bad))
}

fn lemma_suite() -> Outcome {
    let sym = lemma_sweep(&SymInv::new(3).expect("n = 3"), true);
    let dual = lemma_sweep(&DualSymInv::new(3).expect("n = 3"), false);
    match (sym, dual) {
        (Ok((ns, bs)), Ok((nd, bd))) => {
            let bad: Vec<String> = bs.into_iter().chain(bd).collect();
            let summary = format!("{ns} + {nd} subsemigroups, {} violations", bad.len());
            if bad.is_empty() {
                pass(summary)
            } else {
                fail(format!("{summary}; first: {}", bad[0]))
            }
        }
        (Err(e), _) | (_, Err(e)) => fail(e),
    }
}

fn distributivity() -> Outcome {
    let sym = SymInv::new(3).expect("n = 3");
    let dual = DualSymInv::new(3).expect("n = 3");
    let on_sym = find_distributivity_violation(&sym, 3);
    let on_dual = find_distributivity_violation(&dual, 2);
    match (on_sym, on_dual) {
        (Ok(None), Ok(Some(w))) => match confirm_distributivity_witness(&dual, &w) {
            Ok(true) => {
                let ys: Vec<String> = w.ys.iter().map(|y| dual.format(y)).collect();
                pass(format!(
                    "none on partial injections; block-bijection witness x = {}, Y = {{{}}}: {} != {}",
                    dual.format(&w.x),
                    ys.join(", "),
                    dual.format(&w.lhs),
                    dual.format(&w.rhs)
                ))
            }
            Ok(false) => fail("witness does not re-verify"),
            Err(e) => fail(e.to_string()),
        },
        (Ok(Some(w)), _) => fail(format!(
            "unexpected witness on partial injections at x = {}",
            sym.format(&w.x)
        )),
        (_, Ok(None)) => fail("no witness on block bijections"),
        (Err(e), _) | (_, Err(e)) => fail(e.to_string()),
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    applicable: usize,
    bad: Vec<String>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.applicable += other.applicable;
        self.bad.extend(other.bad);
        self
    }
}

/// Runs `theorems` on every subsemigroup that `select` admits. A theorem must
/// hold whenever `must_apply` says so and must never fail.
fn theorem_sweep<A: InverseAlgebra>(
    alg: &A,
    theorems: &[Theorem],
    select: impl Fn(&Subsemigroup<'_, A>) -> bool + Sync,
    must_apply: impl Fn(&Subsemigroup<'_, A>, Theorem) -> bool + Sync,
) -> Tally {
    let ctx = VerifyContext::new(alg);
    let subs = match generated_by_at_most_two(alg) {
        Ok(s) => s,
        Err(e) => {
            return Tally {
                bad: vec![e.to_string()],
                ..Tally::default()
            }
        }
    };
    subs.par_iter()
        .filter(|s| select(s))
        .map(|s| {
            let mut t = Tally {
                checked: 1,
                ..Tally::default()
            };
            for &th in theorems {
                match verify_theorem(&ctx, s, th) {
                    Err(e) => t.bad.push(format!("{} {th}: {e}", describe(s))),
                    Ok(v) => match v.status {
                        Status::Holds => t.applicable += 1,
                        Status::NotApplicable if !must_apply(s, th) => {}
                        status => t.bad.push(format!("{} {th}: {status:?}", describe(s))),
                    },
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge)
}

fn theorems() -> Outcome {
    let sym3 = SymInv::new(3).expect("n = 3");
    let sym4 = SymInv::new(4).expect("n = 4");
    let dual3 = DualSymInv::new(3).expect("n = 3");
    let first_three = [Theorem::T1, Theorem::T2, Theorem::T3];
    let sweep = theorem_sweep(
        &sym3,
        &first_three,
        |_| true,
        |s, t| t != Theorem::T3 || classify(s.algebra(), s.elements()).disperse,
    )
    .merge(theorem_sweep(
        &dual3,
        &first_three,
        |_| true,
        |s, t| t != Theorem::T3 || classify(s.algebra(), s.elements()).disperse,
    ));
    let effective = |s: &Subsemigroup<'_, SymInv>| classify(s.algebra(), s.elements()).effective;
    let t4 = theorem_sweep(&sym3, &[Theorem::T4], effective, |_, _| true).merge(theorem_sweep(
        &sym4,
        &[Theorem::T4],
        effective,
        |_, _| true,
    ));
    let summary = format!(
        "T1-T3 on {} subsemigroups ({} verdicts hold), T4 on {} effective ones",
        sweep.checked, sweep.applicable, t4.checked
    );
    let bad: Vec<String> = sweep.bad.into_iter().chain(t4.bad).collect();
    if bad.is_empty() && t4.applicable == t4.checked {
        pass(summary)
    } else {
        fail(format!(
            "{summary}; {} problems, first: {}",
            bad.len(),
            bad.first().map_or("", String::as_str)
        ))
    }
}

fn embeddings() -> Outcome {
    let dual3 = DualSymInv::new(3).expect("n = 3");
    let sym6 = SymInv::new(6).expect("n = 6");
    let sym3 = SymInv::new(3).expect("n = 3");
    let dual4 = DualSymInv::new(4).expect("n = 4");

    let hats: Result<Vec<_>, _> = dual3.carrier().iter().map(hat_embed).collect();
    let adjoined: Result<Vec<_>, _> = sym3.carrier().iter().map(adjoin_zero_embed).collect();
    let (hats, adjoined) = match (hats, adjoined) {
        (Ok(h), Ok(a)) => (h, a),
        (Err(e), _) | (_, Err(e)) => return fail(e.to_string()),
    };
    let mut products = 0;
    let mut bad = Vec::new();
    for (i, x) in dual3.carrier().iter().enumerate() {
        for (j, y) in dual3.carrier().iter().enumerate() {
            products += 1;
            let xy = hat_embed(&dual3.compose(x, y)).expect("hat of a member");
            if xy != sym6.compose(&hats[i], &hats[j]) {
                bad.push(format!("hat fails on {} {}", dual3.format(x), dual3.format(y)));
            }
        }
    }
    for (i, x) in sym3.carrier().iter().enumerate() {
        for (j, y) in sym3.carrier().iter().enumerate() {
            products += 1;
            let xy = adjoin_zero_embed(&sym3.compose(x, y)).expect("image of a member");
            if xy != dual4.compose(&adjoined[i], &adjoined[j]) {
                bad.push(format!(
                    "zero adjunction fails on {} {}",
                    sym3.format(x),
                    sym3.format(y)
                ));
            }
        }
    }
    let distinct = |n: usize, mut v: Vec<String>| {
        v.sort();
        v.dedup();
        v.len() == n
    };
    if !distinct(hats.len(), hats.iter().map(|h| sym6.format(h)).collect()) {
        bad.push("hat is not injective".into());
    }
    if !distinct(adjoined.len(), adjoined.iter().map(|b| dual4.format(b)).collect()) {
        bad.push("zero adjunction is not injective".into());
    }
    let summary = format!("{products} products compared");
    if bad.is_empty() {
        pass(summary)
    } else {
        fail(format!("{summary}; {}", bad.join("; ")))
    }
}

/// Re-checks a search witness: the listed images must form an injective
/// homomorphic copy of the table.
fn witness_holds<A: InverseAlgebra>(alg: &A, table: &CayleyTable, outcome: &DegreeOutcome) -> bool {
    let DegreeOutcome::Exact { witness, .. } = outcome else {
        return false;
    };
    let Ok(images) = witness.iter().map(|(_, x)| alg.parse(x)).collect::<Result<Vec<_>, _>>() else {
        return false;
    };
    let n = table.len() as u32;
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    sorted.len() == images.len()
        && (0..n).all(|i| {
            (0..n).all(|j| alg.compose(&images[i as usize], &images[j as usize]) == images[table.mul(i, j) as usize])
        })
}

fn degrees_of(table: &CayleyTable, n_sym: usize, n_dual: usize) -> Result<(DegreeResult, bool), String> {
    let r = DegreeResult {
        deg: degree_search(table, Family::Sym, n_sym, BUDGET).map_err(|e| e.to_string())?,
        degstar: degree_search(table, Family::DualSym, n_dual, BUDGET).map_err(|e| e.to_string())?,
    };
    let verified = match (r.deg.degree(), r.degstar.degree()) {
        (Some(d), Some(m)) => {
            let sym = SymInv::new(d).map_err(|e| e.to_string())?;
            let dual = DualSymInv::new(m).map_err(|e| e.to_string())?;
            witness_holds(&sym, table, &r.deg) && witness_holds(&dual, table, &r.degstar)
        }
        _ => false,
    };
    Ok((r, verified))
}

fn degrees() -> Outcome {
    let load = |text: &str| CayleyTable::load(text).expect("bundled table");
    let b2 = load(include_str!("../../core/data/b2.table"));
    let chain = load(include_str!("../../core/data/chain2.table"));
    let t = load(include_str!("../../core/data/brandt_plus_point.table"));

    let mut notes = Vec::new();
    let mut ok = true;
    for (name, table, want) in [("B2", &b2, Some((2, 3))), ("2-chain", &chain, None), ("T", &t, None)] {
        match degrees_of(table, 5, 4) {
            Err(e) => return fail(format!("{name}: {e}")),
            Ok((r, verified)) => {
                let got = r.deg.degree().zip(r.degstar.degree());
                let bounds = check_degree_bounds(&r).map(|v| v.holds()).unwrap_or(false);
                ok &= verified && bounds && want.is_none_or(|w| got == Some(w));
                notes.push(match got {
                    Some((d, m)) => format!(
                        "{name} deg {d} deg* {m} (witnesses {}, bounds {})",
                        if verified { "verified" } else { "REJECTED" },
                        if bounds { "hold" } else { "FAIL" }
                    ),
                    None => format!("{name} unresolved"),
                });
            }
        }
    }

    // a known copy of T inside the four-point block bijections
    let dual4 = DualSymInv::new(4).expect("n = 4");
    let assignment = [("a", "(12->13|34->24)"), ("d", "(1|234)")];
    let pairs: Vec<(String, _)> = assignment
        .iter()
        .map(|(l, x)| (l.to_string(), dual4.parse(x).expect("valid element")))
        .collect();
    match Subsemigroup::image_of(&dual4, &t, &pairs) {
        Ok(img) if img.representation().is_some_and(|r| r.injective) => notes.push("T embeds in 4 points".into()),
        Ok(_) => {
            ok = false;
            notes.push("known copy of T is not injective".into());
        }
        Err(e) => {
            ok = false;
            notes.push(format!("known copy of T: {e}"));
        }
    }
    if ok {
        pass(notes.join("; "))
    } else {
        fail(notes.join("; "))
    }
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_irk"))
            .args([
                "decompose",
                "--algebra",
                "dual-sym",
                "--n",
                "5",
                "--gens",
                "(1->2|4->3|235->145)",
                "--report",
                "json",
            ])
            .output()
    };
    match (run(), run()) {
        (Ok(a), Ok(b)) if a.status.success() && b.status.success() => {
            if a.stdout == b.stdout {
                pass(format!("{} identical bytes", a.stdout.len()))
            } else {
                fail("outputs differ")
            }
        }
        (Ok(a), Ok(_)) => fail(format!("exit status {}", a.status)),
        (Err(e), _) | (_, Err(e)) => fail(e.to_string()),
    }
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "worked example 1", s(1), || golden(1)),
        criterion(2, "worked example 2", s(1), || golden(2)),
        criterion(3, "worked example 3", s(1), || golden(3)),
        criterion(4, "worked example 4", s(1), || golden(4)),
        criterion(5, "lemma suite over 3 points", s(300), lemma_suite),
        criterion(6, "distributivity dichotomy", s(30), distributivity),
        criterion(7, "theorem verifiers", s(600), theorems),
        criterion(8, "embeddings", s(60), embeddings),
        criterion(9, "degrees and bounds", s(120), degrees),
        criterion(10, "deterministic JSON", s(60), determinism),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
