//! Command-line front end.
//!
//! Exit codes: 0 success or a positive verdict, 1 a negative verdict, 2 usage
//! or input errors, 3 an exceeded resource cap.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::arena::{solve_bounded, solve_exact, Outcome};
use crate::decision::{decide_equiv, decide_preorder, Decision, Method, Options};
use crate::dfa::Dfa;
use crate::encode::{self, hyper, mcvp, pushdown, Encoding, Iig};
use crate::error::{Caps, Error, Result};
use crate::monoid::SynMonoid;
use crate::nf::Normalizer;
use crate::selftest::{self, Suite};
use crate::term::{parse_grammar, parse_term, Grammar, Sym, Term};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "urgency", version, about = "Urgency programs: games, normal forms and contextual preorders")]
pub struct Cli {
    /// Output format for verdicts and errors.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    #[command(flatten)]
    pub caps: CapArgs,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct CapArgs {
    /// Cap on normal-form nodes.
    #[arg(long, global = true, env = "URGENCY_MAX_NODES")]
    pub max_nodes: Option<usize>,
    /// Cap on syntactic monoid classes.
    #[arg(long, global = true)]
    pub max_classes: Option<usize>,
    /// Cap on contexts enumerated by the preorder procedures.
    #[arg(long, global = true)]
    pub max_contexts: Option<usize>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let mut c = Caps::default();
        if let Some(n) = self.max_nodes {
            c.nf_nodes = n;
        }
        if let Some(n) = self.max_classes {
            c.monoid_classes = n;
        }
        if let Some(n) = self.max_contexts {
            c.contexts = n;
        }
        c
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Parse a term or grammar (file or literal) and print it canonically.
    Parse { input: String },
    /// Decide the winner of a term.
    Solve(SolveArgs),
    /// Print the objective-specialized normal form.
    Normalize(NormalizeArgs),
    /// Decide `t1 ⊑_O t2`.
    Preorder(PreorderArgs),
    /// Decide `t1 ≈_O t2`.
    Equiv(PreorderArgs),
    /// Reduce a verification problem to an urgency game bundle.
    Encode {
        #[arg(value_enum)]
        problem: Problem,
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Pushdown summaries per stack symbol and state.
    Summaries { input: PathBuf },
    /// Syntactic monoid of an objective.
    Monoid {
        dfa: String,
        /// Print every class with its representative.
        #[arg(long)]
        list: bool,
    },
    /// Seeded self-test suites.
    Selftest {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, hide = true)]
        flip_d2: bool,
    },
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub term: String,
    pub dfa: String,
    #[arg(long)]
    pub grammar: Option<String>,
    /// Exhaustive minimax; recursion-free terms only (default).
    #[arg(long, conflicts_with_all = ["budget", "nf"])]
    pub exact: bool,
    /// Bounded search with this many steps.
    #[arg(long, conflicts_with = "nf")]
    pub budget: Option<usize>,
    /// With --budget: close repeated positions into cycles.
    #[arg(long, requires = "budget")]
    pub cycles: bool,
    /// Decide via the normal form; handles recursion.
    #[arg(long)]
    pub nf: bool,
    /// Write Eve's winning strategy as JSON (exact mode).
    #[arg(long)]
    pub strategy: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    pub term: String,
    pub grammar: String,
    pub dfa: String,
    #[arg(long)]
    pub prune: bool,
    #[arg(long)]
    pub stats: bool,
}

#[derive(Args, Debug)]
pub struct PreorderArgs {
    pub t1: String,
    pub t2: String,
    #[arg(long)]
    pub grammar: Option<String>,
    #[arg(long)]
    pub dfa: String,
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// Print a separating context when the answer is false.
    #[arg(long)]
    pub witness: bool,
    #[arg(long)]
    pub prune: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Inclusion,
    Simulation,
    Iig,
    Pushdown,
    Hyper,
    Mcvp,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            report_error(cli.format, &e);
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn report_error(format: Format, e: &Error) {
    match format {
        Format::Text => eprintln!("error: {e}"),
        Format::Json => eprintln!(
            "{}",
            json!({"schema_version": 1, "error": {"kind": e.kind(), "message": e.to_string()}})
        ),
    }
}

/// Contents of `arg` when it names a file, else `arg` itself.
fn text_arg(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        Ok(fs::read_to_string(p)?)
    } else {
        Ok(arg.to_string())
    }
}

fn term_arg(arg: &str) -> Result<Term> {
    parse_term(&text_arg(arg)?)
}

fn grammar_arg(arg: Option<&str>, terms: &[&Term]) -> Result<Grammar> {
    match arg {
        Some(a) => parse_grammar(&text_arg(a)?),
        None => {
            let n = terms.iter().map(|t| t.max_choice_urgency()).max().unwrap_or(0).max(1);
            Ok(Grammar::empty(n))
        }
    }
}

fn letters(g: &Grammar, terms: &[&Term]) -> BTreeSet<Sym> {
    let mut out: BTreeSet<Sym> = terms.iter().flat_map(|t| t.letters()).collect();
    for d in g.defs.values() {
        out.extend(d.letters());
    }
    out
}

fn dfa_arg(arg: &str, extra: &BTreeSet<Sym>) -> Result<Dfa> {
    Dfa::resolve(&text_arg(arg)?, extra)
}

fn verdict(format: Format, win: bool) -> i32 {
    let v = if win { "WIN" } else { "LOSE" };
    match format {
        Format::Text => println!("{v}"),
        Format::Json => println!("{}", json!({"schema_version": 1, "verdict": v})),
    }
    if win {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    let caps = cli.caps.caps();
    let format = cli.format;
    match &cli.cmd {
        Cmd::Parse { input } => {
            let text = text_arg(input)?;
            let (kind, out) = if text.trim_start().starts_with("maxurg") {
                ("grammar", parse_grammar(&text)?.to_string())
            } else {
                ("term", parse_term(&text)?.to_string())
            };
            match format {
                Format::Text => println!("{}", out.trim_end()),
                Format::Json => println!("{}", json!({"schema_version": 1, "kind": kind, "text": out.trim_end()})),
            }
            Ok(EXIT_TRUE)
        }
        Cmd::Solve(a) => solve(a, format, &caps),
        Cmd::Normalize(a) => {
            let t = term_arg(&a.term)?;
            let g = grammar_arg(Some(&a.grammar), &[&t])?;
            let o = dfa_arg(&a.dfa, &letters(&g, &[&t]))?;
            let m = SynMonoid::build(&o, caps.monoid_classes)?;
            let mut nz = Normalizer::new(&g, &m, &caps).with_prune(a.prune);
            let x = nz.normalize(&t)?;
            let text = nz.render(x).to_string();
            let stats = nz.stats(x);
            match format {
                Format::Text => {
                    println!("{text}");
                    if a.stats {
                        println!("{stats}");
                    }
                }
                Format::Json => {
                    let mut j = json!({"schema_version": 1, "normal_form": text, "wins": nz.wins(x)});
                    if a.stats {
                        j["stats"] = json!({
                            "eve_sets": stats.eve_nodes,
                            "adam_sets": stats.adam_nodes,
                            "leaves": stats.leaves,
                        });
                    }
                    println!("{j}");
                }
            }
            Ok(EXIT_TRUE)
        }
        Cmd::Preorder(a) => {
            let (g, t1, t2, o, opts) = preorder_inputs(a, &caps)?;
            let d = decide_preorder(&g, &t1, &t2, &o, &opts)?;
            print_decision(format, &d, a.witness);
            Ok(if d.holds { EXIT_TRUE } else { EXIT_FALSE })
        }
        Cmd::Equiv(a) => {
            let (g, t1, t2, o, opts) = preorder_inputs(a, &caps)?;
            let (fwd, bwd) = decide_equiv(&g, &t1, &t2, &o, &opts)?;
            let holds = fwd.holds && bwd.holds;
            match format {
                Format::Text => {
                    println!("{holds}");
                    println!("t1 <= t2: {} ({})", fwd.holds, fwd.method);
                    println!("t2 <= t1: {} ({})", bwd.holds, bwd.method);
                    if a.witness {
                        for (dir, d) in [("t1 <= t2", &fwd), ("t2 <= t1", &bwd)] {
                            if let Some(w) = &d.witness {
                                println!("witness for {dir}: {w}");
                            }
                        }
                    }
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "schema_version": 1,
                        "holds": holds,
                        "forward": decision_json(&fwd, a.witness),
                        "backward": decision_json(&bwd, a.witness),
                    })
                ),
            }
            Ok(if holds { EXIT_TRUE } else { EXIT_FALSE })
        }
        Cmd::Encode { problem, input, out } => {
            let text = fs::read_to_string(input)?;
            let enc = encode_problem(*problem, &text)?;
            enc.write_bundle(out)?;
            match format {
                Format::Text => println!("wrote {}", out.display()),
                Format::Json => println!(
                    "{}",
                    json!({"schema_version": 1, "bundle": out.display().to_string(), "query": enc.query.is_some()})
                ),
            }
            Ok(EXIT_TRUE)
        }
        Cmd::Summaries { input } => {
            let p = pushdown::Pds::from_json(&fs::read_to_string(input)?)?;
            let sums = pushdown::summaries(&p, &caps)?;
            match format {
                Format::Text => {
                    for s in &sums {
                        println!("{} {}:", s.state, s.top);
                        for (i, opt) in s.options.iter().enumerate() {
                            let ts: Vec<String> =
                                opt.iter().map(|t| format!("({}, {}, {})", t.from, t.observation, t.to)).collect();
                            println!("  option {i}: {}", ts.join(" "));
                        }
                    }
                }
                Format::Json => {
                    let j: Vec<_> = sums
                        .iter()
                        .map(|s| {
                            json!({
                                "state": s.state,
                                "top": s.top,
                                "options": s.options.iter().map(|o| o.iter().map(|t| json!([t.from, t.observation, t.to])).collect::<Vec<_>>()).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    println!("{}", json!({"schema_version": 1, "summaries": j}));
                }
            }
            Ok(EXIT_TRUE)
        }
        Cmd::Monoid { dfa, list } => {
            let o = dfa_arg(dfa, &BTreeSet::new())?;
            let m = SynMonoid::build(&o, caps.monoid_classes)?;
            let rows: Vec<(String, String, bool)> = m
                .classes()
                .map(|c| (c.to_string(), m.rep_text(c), m.accepts(c)))
                .collect();
            match format {
                Format::Text => {
                    println!("{} classes", m.len());
                    println!("right-separating: {}", m.is_right_separating());
                    if *list {
                        for (c, rep, acc) in &rows {
                            let mut tags = Vec::new();
                            if *c == m.zero().to_string() {
                                tags.push("zero");
                            }
                            if *c == m.identity().to_string() {
                                tags.push("identity");
                            }
                            if *acc {
                                tags.push("accepting");
                            }
                            let tags = if tags.is_empty() { String::new() } else { format!(" [{}]", tags.join(", ")) };
                            println!("{c} {rep}{tags}");
                        }
                    }
                }
                Format::Json => {
                    let mut j = json!({
                        "schema_version": 1,
                        "classes": m.len(),
                        "right_separating": m.is_right_separating(),
                    });
                    if *list {
                        j["list"] = rows
                            .iter()
                            .map(|(c, rep, acc)| json!({"class": c, "rep": rep, "accepting": acc}))
                            .collect();
                    }
                    println!("{j}");
                }
            }
            Ok(EXIT_TRUE)
        }
        Cmd::Selftest {
            suite,
            cases,
            seed,
            flip_d2,
        } => {
            let suites = match suite {
                Some(s) => vec![s.parse::<Suite>()?],
                None => Suite::ALL.to_vec(),
            };
            let settings = selftest::Settings {
                cases: *cases,
                seed: *seed,
                flip_d2: *flip_d2,
            };
            let mut ok = true;
            let mut all = Vec::new();
            for s in suites {
                for line in selftest::run(s, &settings)? {
                    ok &= line.passed();
                    if format == Format::Text {
                        println!("{line}");
                    }
                    all.push(json!({
                        "suite": s.to_string(),
                        "name": line.name,
                        "cases": line.cases,
                        "failures": line.failures,
                        "first": line.first,
                    }));
                }
            }
            if format == Format::Json {
                println!("{}", json!({"schema_version": 1, "seed": seed, "passed": ok, "lines": all}));
            }
            Ok(if ok { EXIT_TRUE } else { EXIT_FALSE })
        }
    }
}

fn solve(a: &SolveArgs, format: Format, caps: &Caps) -> Result<i32> {
    let t = term_arg(&a.term)?;
    let g = grammar_arg(a.grammar.as_deref(), &[&t])?;
    let o = dfa_arg(&a.dfa, &letters(&g, &[&t]))?;
    if a.nf {
        let m = SynMonoid::build(&o, caps.monoid_classes)?;
        let mut nz = Normalizer::new(&g, &m, caps).with_prune(true);
        let x = nz.normalize(&t)?;
        return Ok(verdict(format, nz.wins(x)));
    }
    if let Some(budget) = a.budget {
        let v = solve_bounded(&g, &t, &o, budget, a.cycles)?;
        return Ok(match v.outcome {
            Outcome::Win => verdict(format, true),
            Outcome::Lose => verdict(format, false),
            Outcome::Unknown => {
                match format {
                    Format::Text => println!("UNKNOWN"),
                    Format::Json => println!("{}", json!({"schema_version": 1, "verdict": "UNKNOWN", "budget": budget})),
                }
                EXIT_RESOURCE
            }
        });
    }
    let v = solve_exact(&g, &t, &o)?;
    if let (Some(path), Some(strategy)) = (&a.strategy, &v.strategy) {
        let moves: Vec<_> = strategy
            .iter()
            .map(|(pos, i)| json!({"position": pos.to_string(), "choice": i}))
            .collect();
        let doc = json!({"schema_version": 1, "strategy": moves});
        fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(verdict(format, v.is_win()))
}

fn preorder_inputs(a: &PreorderArgs, caps: &Caps) -> Result<(Grammar, Term, Term, Dfa, Options)> {
    let t1 = term_arg(&a.t1)?;
    let t2 = term_arg(&a.t2)?;
    let g = grammar_arg(a.grammar.as_deref(), &[&t1, &t2])?;
    let o = dfa_arg(&a.dfa, &letters(&g, &[&t1, &t2]))?;
    let opts = Options {
        method: a.method.parse::<Method>()?,
        caps: caps.clone(),
        prune: a.prune,
    };
    Ok((g, t1, t2, o, opts))
}

fn decision_json(d: &Decision, witness: bool) -> serde_json::Value {
    let mut j = json!({"holds": d.holds, "method": d.method});
    if witness {
        j["witness"] = json!(d.witness.as_ref().map(|w| w.to_string()));
    }
    j
}

fn print_decision(format: Format, d: &Decision, witness: bool) {
    match format {
        Format::Text => {
            println!("{}", d.holds);
            println!("method: {}", d.method);
            if witness {
                if let Some(w) = &d.witness {
                    println!("witness: {w}");
                }
            }
        }
        Format::Json => {
            let mut j = decision_json(d, witness);
            j["schema_version"] = json!(1);
            println!("{j}");
        }
    }
}

pub fn encode_problem(problem: Problem, text: &str) -> Result<Encoding> {
    match problem {
        Problem::Inclusion => {
            let (a, b) = encode::nfa_pair_from_json(text)?;
            encode::inclusion(&a, &b)
        }
        Problem::Simulation => {
            let (a, b) = encode::nfa_pair_from_json(text)?;
            encode::simulation(&a, &b)
        }
        Problem::Iig => encode::imperfect_info(&Iig::from_json(text)?),
        Problem::Pushdown => pushdown::encode(&pushdown::Pds::from_json(text)?),
        Problem::Hyper => hyper::encode(&hyper::HyperSpec::from_json(text)?),
        Problem::Mcvp => mcvp::encode(&mcvp::Circuit::from_json(text)?),
    }
}
