//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::panic;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use urgency::arena::{solve_bounded, solve_exact, Outcome};
use urgency::decision::{arrow_objective, arrow_term, characteristic_terms, decide_preorder, pair_letter, Method, Options};
use urgency::dfa::Dfa;
use urgency::encode::{self, pushdown};
use urgency::gen;
use urgency::monoid::{ClassId, SynMonoid};
use urgency::nf::{NfId, Normalizer};
use urgency::selftest::{self, Settings, Suite, DEFAULT_SEED};
use urgency::term::sandwich;
use urgency::{parse_term, plug, Caps, Grammar, Sym, Term};

type Outcome_ = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn example_objective() -> Dfa {
    let s = |x: &str| x.split_whitespace().map(Sym::from).collect::<Vec<_>>();
    Dfa::finite(s("a_l a_r b c"), &[s("a_l c"), s("a_r b")]).unwrap()
}

fn suite_lines(suite: Suite, cases: usize) -> Result<(usize, usize), String> {
    let s = Settings {
        cases: Some(cases),
        seed: DEFAULT_SEED,
        flip_d2: false,
    };
    let lines = selftest::run(suite, &s).map_err(err)?;
    let mut total = 0;
    for l in &lines {
        ensure(l.passed(), || l.to_string())?;
        total += l.cases;
    }
    Ok((lines.len(), total))
}

fn c1_example() -> Outcome_ {
    let o = example_objective();
    let g = Grammar::empty(2);
    let t = |s: &str| parse_term(s).unwrap();
    let win = solve_exact(&g, &t("(a_l A1 a_r) . (b E1 c)"), &o).map_err(err)?;
    let lose = solve_exact(&g, &t("(a_l A1 a_r) . (b E2 c)"), &o).map_err(err)?;
    ensure(win.is_win(), || "E1 variant should win".into())?;
    ensure(!lose.is_win(), || "E2 variant should lose".into())?;
    let opts = Options::default();
    let fwd = decide_preorder(&g, &t("b E2 c"), &t("b E1 c"), &o, &opts).map_err(err)?;
    let bwd = decide_preorder(&g, &t("b E1 c"), &t("b E2 c"), &o, &opts).map_err(err)?;
    ensure(fwd.holds, || "b E2 c ⊑ b E1 c should hold".into())?;
    ensure(!bwd.holds, || "b E1 c ⊑ b E2 c should fail".into())?;
    let w = bwd.witness.ok_or("no witness")?;
    ensure(w == t("(a_l A1 a_r) . @_"), || format!("witness {w}"))?;
    Ok(format!("WIN/LOSE as expected, witness {w}"))
}

fn c2_monoid() -> Outcome_ {
    let m = SynMonoid::build(&example_objective(), 1000).map_err(err)?;
    let s = |x: &str| x.split_whitespace().map(Sym::from).collect::<Vec<_>>();
    ensure(m.len() == 7, || format!("{} classes", m.len()))?;
    let l = m.class_of_letters(&s("a_l c")).map_err(err)?;
    let r = m.class_of_letters(&s("a_r b")).map_err(err)?;
    ensure(l == r, || "a_l.c and a_r.b differ".into())?;
    ensure(m.classes().any(|c| c == ClassId::ZERO), || "no zero".into())?;
    Ok("7 classes including zero, a_l.c ≈ a_r.b".into())
}

fn c3_axioms() -> Outcome_ {
    let (lines, total) = suite_lines(Suite::Axioms, 1000)?;
    Ok(format!("{lines} axioms, {total} instances, 0 violations"))
}

fn c4_normalization() -> Outcome_ {
    let (_, total) = suite_lines(Suite::Nf, 500)?;
    Ok(format!("{total} terms over N=1,2,3, 0 mismatches"))
}

fn c5_kleene() -> Outcome_ {
    let mut r = gen::rng(DEFAULT_SEED ^ 0x5);
    let (mut decided, mut total) = (0, 0);
    for i in 0..100 {
        let n = 1 + (i % 2) as u32;
        let sigma = gen::alphabet(2);
        let o = gen::dfa(&mut r, &sigma, 3);
        let m = SynMonoid::build(&o, 10_000).map_err(err)?;
        let g = gen::right_linear_grammar(&mut r, &sigma, n, 1 + i % 3);
        let start = Term::var("X0");
        let mut nz = Normalizer::new(&g, &m, &Caps::default()).with_prune(true);
        let x = nz.normalize(&start).map_err(err)?;
        let b = solve_bounded(&g, &start, &o, 10_000, true).map_err(err)?.outcome;
        total += 1;
        if b != Outcome::Unknown {
            decided += 1;
            ensure(nz.wins(x) == (b == Outcome::Win), || format!("disagreement on {g}"))?;
        }
    }
    ensure(decided >= 50, || format!("only {decided} grammars decided"))?;
    Ok(format!("{total} grammars, {decided} decided by the bounded solver, all agree"))
}

fn c6_arrow() -> Outcome_ {
    let (_, total) = suite_lines(Suite::Arrow, 300)?;
    Ok(format!("{total} instances, 0 mismatches"))
}

fn c7_preorder() -> Outcome_ {
    let mut r = gen::rng(DEFAULT_SEED ^ 0x7);
    let g = Grammar::empty(1);
    let (mut checked, mut falses, mut rightsep) = (0, 0, 0);
    while checked < 120 {
        let sigma = gen::alphabet(2);
        let o = gen::dfa(&mut r, &sigma, 3);
        let m = SynMonoid::build(&o, 1000).map_err(err)?;
        if m.len() > 5 {
            continue;
        }
        let t = gen::term(&mut r, &sigma, 1, 6, &[]);
        let t2 = gen::term(&mut r, &sigma, 1, 6, &[]);
        if common::max_adam_set(&g, &m, &t) > 2 {
            continue;
        }
        let mut oracle = true;
        for c in common::contexts(&m) {
            if solve_exact(&g, &plug(&c, &t), &o).map_err(err)?.is_win()
                && !solve_exact(&g, &plug(&c, &t2), &o).map_err(err)?.is_win()
            {
                oracle = false;
                break;
            }
        }
        let d = decide_preorder(&g, &t, &t2, &o, &Options::default()).map_err(err)?;
        ensure(d.holds == oracle, || format!("t={t} t2={t2} o={}", o.to_json()))?;
        if m.is_right_separating() {
            rightsep += 1;
            let fast = Options {
                method: Method::RightSep,
                ..Options::default()
            };
            let general = Options {
                method: Method::Enum,
                ..Options::default()
            };
            let a = decide_preorder(&g, &t, &t2, &o, &fast).map_err(err)?.holds;
            let b = decide_preorder(&g, &t, &t2, &o, &general).map_err(err)?.holds;
            ensure(a == b, || format!("fast and general paths differ on t={t} t2={t2}"))?;
        }
        falses += usize::from(!oracle);
        checked += 1;
    }
    Ok(format!(
        "{checked} pairs ({falses} separated), {rightsep} right-separating instances agree on both paths"
    ))
}

/// Eve choices over at most two Adam sets of at most two of `leaves`.
fn small_nfs(leaves: &[Term]) -> Vec<Term> {
    let mut adam = Vec::new();
    for i in 0..leaves.len() {
        adam.push(Term::adam(1, [leaves[i].clone()]));
        for j in i + 1..leaves.len() {
            adam.push(Term::adam(1, [leaves[i].clone(), leaves[j].clone()]));
        }
    }
    let mut out = Vec::new();
    for i in 0..adam.len() {
        out.push(Term::eve(1, [adam[i].clone()]));
        for j in i + 1..adam.len() {
            out.push(Term::eve(1, [adam[i].clone(), adam[j].clone()]));
        }
    }
    out
}

fn three_state_dfas(count: usize) -> Vec<Dfa> {
    let mut r = gen::rng(DEFAULT_SEED ^ 0x8);
    let sigma = gen::alphabet(2);
    let mut out = Vec::new();
    while out.len() < count {
        let o = gen::dfa(&mut r, &sigma, 3);
        if o.minimize().len() == 3 && o.minimize().reachable().iter().all(|&x| x) {
            out.push(o);
        }
    }
    out
}

fn c8_characteristic() -> Outcome_ {
    let caps = Caps::default();
    let (mut contexts, mut terms) = (0, 0);
    for o in three_state_dfas(4) {
        let m = SynMonoid::build(&o, 1000).map_err(err)?;
        let d = m.dfa().clone();
        let g = Grammar::empty(1);
        let am = SynMonoid::build(&arrow_objective(&d), 1000).map_err(err)?;
        let ag = Grammar::empty(1);
        let leaves: Vec<Term> = m.classes().filter(|&c| c != ClassId::ZERO).map(|c| m.rep_term(c)).collect();
        let domain = small_nfs(&leaves);
        terms += domain.len();
        let mut nz = Normalizer::new(&g, &m, &caps);
        let mut anz = Normalizer::new(&ag, &am, &caps);
        let arrowed: Vec<NfId> = domain
            .iter()
            .map(|t| anz.normalize(&arrow_term(t, &d)?))
            .collect::<urgency::Result<_>>()
            .map_err(err)?;
        for ch in characteristic_terms(&o, &caps).map_err(err)? {
            contexts += 1;
            let chi = anz.normalize(&Term::eve(1, [ch.term.clone()])).map_err(err)?;
            for (t, &at) in domain.iter().zip(&arrowed) {
                let x = nz.normalize(&plug(&ch.context, t)).map_err(err)?;
                let wins = nz.wins(x);
                let up = anz.dominates(chi, at).map_err(err)?;
                ensure(wins == up, || format!("context {} term {t}: wins={wins} closure={up}", ch.context))?;
            }
        }
        pair_closures(&d, &am, &mut anz)?;
    }
    Ok(format!(
        "{contexts} characteristic contexts x {terms} terms over 4 three-state objectives; pair-alphabet solution spaces are single upward closures"
    ))
}

/// Over the state-pair alphabet every context `w.•.y` has as solution space
/// the upward closure of one term `A1{q>p : p ∈ R}` (optionally with `skip`).
fn pair_closures(d: &Dfa, am: &SynMonoid, nz: &mut Normalizer) -> Result<(), String> {
    let leaves: Vec<Term> = am.classes().filter(|&c| c != ClassId::ZERO).map(|c| am.rep_term(c)).collect();
    let domain = small_nfs(&leaves);
    let dom_ids: Vec<NfId> = domain.iter().map(|t| nz.normalize(t)).collect::<urgency::Result<_>>().map_err(err)?;
    let n = d.len();
    let mut gens = Vec::new();
    for q in 0..n {
        for region in 1u32..(1 << n) {
            let letters: Vec<Term> = (0..n)
                .filter(|p| region >> p & 1 == 1)
                .map(|p| Term::letter_sym(pair_letter(d, q, p)))
                .collect();
            for skip in [false, true] {
                let mut ops = letters.clone();
                if skip {
                    ops.push(Term::skip());
                }
                let chi = nz.normalize(&Term::eve(1, [Term::adam(1, ops)])).map_err(err)?;
                let row: Vec<bool> = dom_ids.iter().map(|&t| nz.dominates(chi, t)).collect::<urgency::Result<_>>().map_err(err)?;
                gens.push(row);
            }
        }
    }
    let rights: Vec<Term> = leaves.iter().map(|l| Term::adam(1, [l.clone()])).chain(small_nfs(&leaves).into_iter().take(40)).collect();
    for w in &leaves {
        for y in &rights {
            let c = sandwich(w, y);
            let space: Vec<bool> = domain
                .iter()
                .map(|t| nz.normalize(&plug(&c, t)).map(|x| nz.wins(x)))
                .collect::<urgency::Result<_>>()
                .map_err(err)?;
            if space.iter().all(|&b| !b) {
                continue;
            }
            ensure(gens.iter().any(|g| *g == space), || format!("context {c} is not a single upward closure"))?;
        }
    }
    Ok(())
}

fn random_pds(r: &mut gen::Rng8) -> String {
    let states = r.gen_range(2..=3);
    let st = |i: usize| format!("q{i}");
    let gammas = ["z", "x"];
    let labels = ["a", "b"];
    let mut internal = Vec::new();
    let mut push = Vec::new();
    let mut pop = Vec::new();
    for q in 0..states {
        for g in gammas {
            for _ in 0..2 {
                let p = st(r.gen_range(0..states));
                let a = if r.gen_bool(0.8) { serde_json::json!(labels[r.gen_range(0..2)]) } else { serde_json::Value::Null };
                match r.gen_range(0..3) {
                    0 => internal.push(serde_json::json!([st(q), g, a, p])),
                    1 => push.push(serde_json::json!([st(q), g, a, p, gammas[r.gen_range(0..2)]])),
                    _ => pop.push(serde_json::json!([st(q), g, a, p])),
                }
            }
        }
    }
    let owners: serde_json::Map<String, serde_json::Value> = (0..states)
        .map(|q| (st(q), serde_json::json!(if r.gen_bool(0.5) { "eve" } else { "adam" })))
        .collect();
    serde_json::json!({
        "states": (0..states).map(st).collect::<Vec<_>>(),
        "owners": owners,
        "initial": "q0",
        "stack_alphabet": gammas,
        "initial_stack": "z",
        "finals": [st(states - 1)],
        "internal": internal,
        "push": push,
        "pop": pop,
        "observation": "reach:a",
    })
    .to_string()
}

fn c9_encoders() -> Outcome_ {
    let (lines, _) = suite_lines(Suite::Encoders, 60)?;
    let (a, b) = encode::nfa_pair_from_json(include_str!("fixtures/example_nfas.json")).map_err(err)?;
    let caps = Caps::default();
    ensure(!encode::inclusion(&a, &b).map_err(err)?.answer(&caps).map_err(err)?, || "example inclusion".into())?;
    ensure(encode::simulation(&a, &b).map_err(err)?.answer(&caps).map_err(err)?, || "example simulation".into())?;
    let mut r = gen::rng(DEFAULT_SEED ^ 0x9);
    let mut triples = 0;
    for _ in 0..30 {
        let p = pushdown::Pds::from_json(&random_pds(&mut r)).map_err(err)?;
        for s in pushdown::summaries(&p, &caps).map_err(err)? {
            for t in s.options.iter().flatten() {
                triples += 1;
                ensure(t.from == s.state, || format!("summary of {} {} starts in {}", s.state, s.top, t.from))?;
            }
        }
    }
    Ok(format!(
        "{lines} encoders x 60 instances agree with their oracles; example verdicts match; {triples} summary triples over 30 pushdown systems have the right first component"
    ))
}

fn c10_resources() -> Outcome_ {
    let dfa = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/dense4.dfa");
    let blocks = [
        "A2{E2{a,b,c},E2{a.b,c.a},E2{b.c,a.a}}",
        "A2{E2{a,b},E2{c,a.c},E2{b.b,c.a}}",
        "E2{A2{a,b,c},A2{a.b,c.a},A2{b.c,a.a}}",
    ];
    let mut reports = Vec::new();
    for block in blocks {
        let term = [block; 5].join(".");
        let out = Command::new(env!("CARGO_BIN_EXE_urgency"))
            .args(["normalize", &term, "maxurg 2;", dfa])
            .env_remove("URGENCY_MAX_NODES")
            .output()
            .map_err(err)?;
        let stderr = String::from_utf8_lossy(&out.stderr).trim().to_string();
        ensure(out.status.code() == Some(3), || format!("exit {:?} for {block}: {stderr}", out.status.code()))?;
        ensure(stderr.contains("cap"), || format!("no count report: {stderr}"))?;
        reports.push(stderr);
    }
    Ok(format!("{} blow-up instances exit 3 ({})", reports.len(), reports[0]))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome_, u64); 10] = [
        (1, "worked example", c1_example, 1),
        (2, "syntactic monoid golden test", c2_monoid, 1),
        (3, "axiom soundness", c3_axioms, 120),
        (4, "normalization correctness", c4_normalization, 120),
        (5, "Kleene iteration on grammars", c5_kleene, 120),
        (6, "arrow translation faithfulness", c6_arrow, 60),
        (7, "preorder vs contextual oracle", c7_preorder, 300),
        (8, "characteristic terms", c8_characteristic, 60),
        (9, "encoder theorems", c9_encoders, 300),
        (10, "resource discipline", c10_resources, 120),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, name, check, limit) in criteria {
        let start = Instant::now();
        let res = panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let res = res.and_then(|d| {
            if took > Duration::from_secs(limit) {
                Err(format!("took {:.1}s, limit {limit}s", took.as_secs_f64()))
            } else {
                Ok(d)
            }
        });
        match res {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{:.2}s]", took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {e} [{:.2}s]", took.as_secs_f64());
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
