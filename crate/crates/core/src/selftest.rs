//! Seeded self-test suites: axiom soundness and oracle agreement.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::arena::solve_exact;
use crate::axioms::{self, Axiom};
use crate::decision::arrow_translate;
use crate::encode::{self, hyper, mcvp, Iig};
use crate::error::{Caps, Error, Result};
use crate::gen;
use crate::monoid::SynMonoid;
use crate::nf::Normalizer;
use crate::term::{Grammar, Sym};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Nf,
    Arrow,
    Encoders,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Axioms, Suite::Nf, Suite::Arrow, Suite::Encoders];

    pub fn default_cases(self) -> usize {
        match self {
            Suite::Axioms => 1000,
            Suite::Nf => 500,
            Suite::Arrow => 300,
            Suite::Encoders => 60,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Axioms => "axioms",
            Suite::Nf => "nf",
            Suite::Arrow => "arrow",
            Suite::Encoders => "encoders",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

/// One line of a report.
#[derive(Clone, Debug)]
pub struct Line {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first: Option<String>,
}

impl Line {
    fn new(name: impl Into<String>, cases: usize) -> Line {
        Line {
            name: name.into(),
            cases,
            failures: 0,
            first: None,
        }
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first.is_none() {
            self.first = Some(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{status} {}: {} cases, {} failures", self.name, self.cases, self.failures)?;
        if let Some(x) = &self.first {
            write!(f, " (first: {x})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub cases: Option<usize>,
    pub seed: u64,
    /// Mutation smoke test: break the side condition of D2.
    pub flip_d2: bool,
}

pub fn run(suite: Suite, s: &Settings) -> Result<Vec<Line>> {
    let cases = s.cases.unwrap_or(suite.default_cases());
    match suite {
        Suite::Axioms => {
            let cfg = axioms::Config {
                flip_d2: s.flip_d2,
                ..axioms::Config::default()
            };
            Axiom::ALL
                .into_iter()
                .map(|a| {
                    let rep = axioms::run(a, cases, s.seed, &cfg)?;
                    Ok(Line {
                        name: format!("axiom {a}"),
                        cases,
                        failures: rep.violations,
                        first: rep.first.map(|v| v.to_string()),
                    })
                })
                .collect()
        }
        Suite::Nf => (1..=3).map(|n| nf(n, cases, s.seed)).collect(),
        Suite::Arrow => Ok(vec![arrow(cases, s.seed)?]),
        Suite::Encoders => encoders(cases, s.seed),
    }
}

fn nf(n: u32, cases: usize, seed: u64) -> Result<Line> {
    let mut r = gen::rng(seed.wrapping_add(n as u64));
    let mut line = Line::new(format!("normal form N={n}"), cases);
    let g = Grammar::empty(n);
    for i in 0..cases {
        let sigma = gen::alphabet(2 + i % 2);
        let o = gen::dfa(&mut r, &sigma, 4);
        let m = SynMonoid::build(&o, Caps::default().monoid_classes)?;
        let t = gen::term(&mut r, &sigma, n, 12, &[]);
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let x = nz.normalize(&t)?;
        let want = solve_exact(&g, &t, &o)?.is_win();
        if nz.wins(x) != want {
            line.fail(|| format!("{t}"));
        }
    }
    Ok(line)
}

fn arrow(cases: usize, seed: u64) -> Result<Line> {
    let mut r = gen::rng(seed ^ 0xa770);
    let mut line = Line::new("arrow translation", cases);
    for i in 0..cases {
        let n = 1 + (i % 2) as u32;
        let sigma = gen::alphabet(2 + i % 2);
        let o = gen::dfa(&mut r, &sigma, 3);
        let g = Grammar::empty(n);
        let t = gen::term(&mut r, &sigma, n, 10, &[]);
        let a = arrow_translate(&g, &t, &o)?;
        let want = solve_exact(&g, &t, &o)?.is_win();
        if solve_exact(&a.grammar, &a.term, &a.objective)?.is_win() != want {
            line.fail(|| format!("{t}"));
        }
    }
    Ok(line)
}

fn encoders(cases: usize, seed: u64) -> Result<Vec<Line>> {
    let caps = Caps::default();
    let mut r = gen::rng(seed ^ 0xe4c0);
    let sigma = gen::alphabet(2);
    let mut inc = Line::new("encoder inclusion", cases);
    let mut sim = Line::new("encoder simulation", cases);
    for _ in 0..cases {
        let a = encode::random_nfa(&mut r, &sigma, 3, 0.3);
        let b = encode::random_nfa(&mut r, &sigma, 3, 0.3);
        if encode::inclusion(&a, &b)?.answer(&caps)? == a.included_in(&b) {
            inc.fail(|| encode::nfa_pair_to_json(&a, &b));
        }
        if encode::simulation(&a, &b)?.answer(&caps)? == a.trim().simulated_by(&b) {
            sim.fail(|| encode::nfa_pair_to_json(&a, &b));
        }
    }
    let mut iig = Line::new("encoder imperfect information", cases);
    for _ in 0..cases {
        let automaton = encode::random_nfa(&mut r, &sigma, 4, 0.25);
        let hd = (0..automaton.len()).map(|_| format!("h{}", r.gen_range(0..2))).collect();
        let game = Iig { automaton, hd };
        if encode::imperfect_info(&game)?.answer(&caps)? != game.solve() {
            iig.fail(|| game.to_json());
        }
    }
    let mut hy = Line::new("encoder hyper", cases);
    for i in 0..cases {
        let system = encode::random_nfa(&mut r, &sigma, 3, 0.3);
        let n = 1 + i % 2;
        let property = random_tuple_dfa(&mut r, &sigma, n);
        let h = hyper::HyperSpec::new(system, n, property)?;
        if hyper::encode(&h)?.answer(&caps)? != h.holds()? {
            hy.fail(|| format!("n={n} {}", h.system.to_json()));
        }
    }
    let mut mc = Line::new("encoder mcvp", cases);
    for _ in 0..cases {
        let size = r.gen_range(1..=10);
        let c = mcvp::random(&mut r, size);
        if mcvp::encode(&c)?.answer(&caps)? != c.eval() {
            mc.fail(|| c.to_json());
        }
    }
    Ok(vec![inc, sim, iig, hy, mc])
}

/// Random DFA over tuple letters `a|b|...` of arity `n`.
pub fn random_tuple_dfa(r: &mut gen::Rng8, sigma: &[Sym], n: usize) -> crate::dfa::Dfa {
    let mut tuples = vec![Vec::<Sym>::new()];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                sigma.iter().map(move |a| {
                    let mut t = t.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
    }
    let letters: Vec<Sym> = tuples.iter().map(|t| hyper::tuple_letter(t)).collect();
    gen::dfa(r, &letters, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let s = Settings {
            cases: Some(20),
            seed: DEFAULT_SEED,
            flip_d2: false,
        };
        for suite in Suite::ALL {
            for line in run(suite, &s).unwrap() {
                assert!(line.passed(), "{line}");
            }
        }
    }

    #[test]
    fn mutant_fails_the_axiom_suite() {
        let s = Settings {
            cases: Some(300),
            seed: DEFAULT_SEED,
            flip_d2: true,
        };
        let lines = run(Suite::Axioms, &s).unwrap();
        assert!(lines.iter().any(|l| !l.passed()));
    }
}
