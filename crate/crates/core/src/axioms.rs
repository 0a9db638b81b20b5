//! Randomized soundness checks for the axioms of the precongruence.
//!
//! Every instance `l ⊑ r` (or `l ≈ r`) is plugged into random contexts and
//! solved exactly against random objectives; a violation is a context where
//! `l` wins and `r` loses.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::arena::solve_exact;
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::gen::{self, Rng8};
use crate::monoid::SynMonoid;
use crate::term::{plug, Grammar, Player, Sym, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// Monotonicity of choice.
    L1,
    /// Distributivity of the lattice.
    L2,
    /// Absorption.
    L3,
    /// Flattening of nested choices of equal owner and urgency.
    L4,
    /// `t ⊑ t E_u t'` when `urg(t) ≤ u`.
    L5,
    /// Left distributivity, `urg(t) < u`.
    D1,
    /// Right distributivity, `urg(t) ≤ u`.
    D2,
    /// Urgency normalization under an Eve choice.
    N,
    /// `err` is least.
    B,
    /// Words equal in the monoid with zero.
    M,
    /// Words related by the syntactic precongruence of the objective.
    S,
    /// Urgency normalization under an Adam choice.
    NA,
}

impl Axiom {
    pub const ALL: [Axiom; 12] = [
        Axiom::L1,
        Axiom::L2,
        Axiom::L3,
        Axiom::L4,
        Axiom::L5,
        Axiom::D1,
        Axiom::D2,
        Axiom::N,
        Axiom::B,
        Axiom::M,
        Axiom::S,
        Axiom::NA,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Axiom> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown axiom `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub axiom: Axiom,
    pub max_urgency: u32,
    pub lhs: Term,
    pub rhs: Term,
    /// Both directions must hold.
    pub equiv: bool,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub instance: Instance,
    pub context: Term,
    pub objective: Dfa,
    /// `true` when `rhs` wins and `lhs` loses in an equivalence.
    pub reversed: bool,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = if self.reversed {
            (&self.instance.rhs, &self.instance.lhs)
        } else {
            (&self.instance.lhs, &self.instance.rhs)
        };
        write!(
            f,
            "{}: context {} wins with {} but loses with {}",
            self.instance.axiom, self.context, a, b
        )
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub axiom: Axiom,
    pub cases: usize,
    pub violations: usize,
    pub first: Option<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Generator settings. `flip_d2` breaks the side condition of D2 to check
/// that the suite can fail.
#[derive(Clone, Debug)]
pub struct Config {
    pub max_states: usize,
    pub max_letters: usize,
    pub max_urgency: u32,
    pub contexts: usize,
    pub flip_d2: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_states: 4,
            max_letters: 3,
            max_urgency: 2,
            contexts: 3,
            flip_d2: false,
        }
    }
}

fn player(r: &mut Rng8) -> Player {
    if r.gen_bool(0.5) {
        Player::Eve
    } else {
        Player::Adam
    }
}

/// Small term whose urgency is at most `bound`.
fn term_upto(r: &mut Rng8, al: &[Sym], bound: u32) -> Term {
    let size = r.gen_range(1..=3);
    if bound == 0 {
        gen::word(r, al, 2)
    } else {
        gen::term(r, al, bound, size, &[])
    }
}

fn small(r: &mut Rng8, al: &[Sym], n: u32) -> Term {
    term_upto(r, al, n)
}

fn set(r: &mut Rng8, al: &[Sym], n: u32, max: usize) -> Vec<Term> {
    let k = r.gen_range(1..=max);
    (0..k).map(|_| small(r, al, n)).collect()
}

/// Every choice function over `sets`, one element per set.
fn choice_functions(sets: &[Vec<Term>]) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for s in sets {
        out = out
            .into_iter()
            .flat_map(|f: Vec<Term>| {
                s.iter().map(move |t| {
                    let mut f = f.clone();
                    f.push(t.clone());
                    f
                })
            })
            .collect();
    }
    out
}

/// Random bracketing of `items` with `skip`s sprinkled in.
fn rebracket(r: &mut Rng8, items: &[Term]) -> Term {
    match items.len() {
        0 => Term::skip(),
        1 if r.gen_bool(0.3) => Term::concat(Term::skip(), items[0].clone()),
        1 => items[0].clone(),
        len => {
            let k = r.gen_range(1..len);
            Term::concat(rebracket(r, &items[..k]), rebracket(r, &items[k..]))
        }
    }
}

fn letters(r: &mut Rng8, al: &[Sym], max: usize) -> Vec<Term> {
    let len = r.gen_range(0..=max);
    (0..len).map(|_| Term::letter_sym(al.choose(r).unwrap().clone())).collect()
}

/// Random instance of `axiom` over alphabet `al`; `o` is only used by `S`.
pub fn instance(r: &mut Rng8, axiom: Axiom, al: &[Sym], n: u32, o: &Dfa, cfg: &Config) -> Result<Instance> {
    let mut n = n;
    if matches!(axiom, Axiom::N | Axiom::NA) || (axiom == Axiom::D2 && cfg.flip_d2) {
        n = n.max(2);
    }
    let u = r.gen_range(1..=n);
    let p = player(r);
    let (lhs, rhs, equiv) = match axiom {
        Axiom::L1 => {
            let k = r.gen_range(1..=2);
            let mut ls = Vec::new();
            let mut rs = Vec::new();
            for _ in 0..k {
                let t = small(r, al, n);
                let t2 = match r.gen_range(0..3) {
                    0 => t.clone(),
                    1 => {
                        let v = r.gen_range(t.urgency(n).max(1)..=n);
                        Term::eve(v, [t.clone(), small(r, al, n)])
                    }
                    _ => {
                        let s = small(r, al, n);
                        ls.push(Term::err());
                        rs.push(s);
                        continue;
                    }
                };
                ls.push(t);
                rs.push(t2);
            }
            (Term::choice(p, u, ls), Term::choice(p, u, rs), false)
        }
        Axiom::L2 => {
            let k = r.gen_range(1..=2);
            let sets: Vec<Vec<Term>> = (0..k).map(|_| set(r, al, n, 2)).collect();
            let lhs = Term::eve(u, sets.iter().map(|s| Term::adam(u, s.clone())));
            let rhs = Term::adam(u, choice_functions(&sets).into_iter().map(|f| Term::eve(u, f)));
            (lhs, rhs, true)
        }
        Axiom::L3 => {
            let t = term_upto(r, al, u);
            let t2 = small(r, al, n);
            let lhs = if r.gen_bool(0.5) {
                Term::adam(u, [t.clone(), Term::eve(u, [t.clone(), t2])])
            } else {
                Term::eve(u, [t.clone(), Term::adam(u, [t.clone(), t2])])
            };
            (lhs, t, true)
        }
        Axiom::L4 => {
            let k = r.gen_range(1..=2);
            let sets: Vec<Vec<Term>> = (0..k).map(|_| set(r, al, n, 2)).collect();
            let lhs = Term::choice(p, u, sets.iter().map(|s| Term::choice(p, u, s.clone())));
            let rhs = Term::choice(p, u, sets.concat());
            (lhs, rhs, true)
        }
        Axiom::L5 => {
            let t = term_upto(r, al, u);
            let t2 = small(r, al, n);
            (t.clone(), Term::eve(u, [t, t2]), false)
        }
        Axiom::D1 => {
            let t = term_upto(r, al, u - 1);
            let s = set(r, al, n, 2);
            let lhs = Term::concat(t.clone(), Term::choice(p, u, s.clone()));
            let rhs = Term::choice(p, u, s.into_iter().map(|x| Term::concat(t.clone(), x)));
            (lhs, rhs, true)
        }
        Axiom::D2 => {
            let (u, t) = if cfg.flip_d2 {
                let u = r.gen_range(1..n);
                let v = r.gen_range(u + 1..=n);
                let t = Term::choice(player(r), v, set(r, al, v, 2));
                (u, t)
            } else {
                (u, term_upto(r, al, u))
            };
            let s = set(r, al, n, 2);
            let lhs = Term::concat(Term::choice(p, u, s.clone()), t.clone());
            let rhs = Term::choice(p, u, s.into_iter().map(|x| Term::concat(x, t.clone())));
            (lhs, rhs, true)
        }
        Axiom::N | Axiom::NA => {
            let v = r.gen_range(1..n);
            let w = r.gen_range(v + 1..=n);
            let outer = if axiom == Axiom::N { Player::Eve } else { Player::Adam };
            let s = set(r, al, n, 2);
            let lhs = Term::choice(outer, v, [Term::choice(p, w, s.clone())]);
            let rhs = Term::choice(outer, v, [Term::choice(p, v, s)]);
            (lhs, rhs, true)
        }
        Axiom::B => (Term::err(), small(r, al, n), false),
        Axiom::M => {
            let mut items = letters(r, al, 3);
            if r.gen_bool(0.2) {
                let i = r.gen_range(0..=items.len());
                items.insert(i, Term::err());
            }
            let a = rebracket(r, &items);
            let b = rebracket(r, &items);
            (a, b, true)
        }
        Axiom::S => {
            let m = SynMonoid::build(o, 100_000)?;
            let mut pick = None;
            for _ in 0..20 {
                let w = Term::seq(letters(r, al, 3));
                let w2 = Term::seq(letters(r, al, 3));
                if m.leq(m.class_of_term(&w)?, m.class_of_term(&w2)?) {
                    pick = Some((w, w2));
                    break;
                }
            }
            let (w, w2) = pick.unwrap_or_else(|| {
                let w = Term::seq(letters(r, al, 3));
                (w.clone(), w)
            });
            (w, w2, false)
        }
    };
    Ok(Instance {
        axiom,
        max_urgency: n,
        lhs,
        rhs,
        equiv,
    })
}

/// Checks one instance in `cfg.contexts` random contexts against `o`.
pub fn check(r: &mut Rng8, inst: &Instance, al: &[Sym], o: &Dfa, cfg: &Config) -> Result<Option<Violation>> {
    let g = Grammar::empty(inst.max_urgency);
    for i in 0..cfg.contexts {
        let c = if i == 0 {
            Term::hole()
        } else {
            let size = r.gen_range(2..=6);
            gen::context(r, al, inst.max_urgency, size)
        };
        let l = solve_exact(&g, &plug(&c, &inst.lhs), o)?.is_win();
        let rr = solve_exact(&g, &plug(&c, &inst.rhs), o)?.is_win();
        if (l && !rr) || (inst.equiv && rr && !l) {
            return Ok(Some(Violation {
                instance: inst.clone(),
                context: c,
                objective: o.clone(),
                reversed: !l,
            }));
        }
    }
    Ok(None)
}

/// Runs `cases` random instances of `axiom`, each with its own objective.
pub fn run(axiom: Axiom, cases: usize, seed: u64, cfg: &Config) -> Result<Report> {
    let mut r = gen::rng(seed ^ (axiom as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut report = Report {
        axiom,
        cases,
        violations: 0,
        first: None,
    };
    for _ in 0..cases {
        let al = gen::alphabet(r.gen_range(1..=cfg.max_letters));
        let o = gen::dfa(&mut r, &al, cfg.max_states);
        let n = r.gen_range(1..=cfg.max_urgency);
        let inst = instance(&mut r, axiom, &al, n, &o, cfg)?;
        if let Some(v) = check(&mut r, &inst, &al, &o, cfg)? {
            report.violations += 1;
            report.first.get_or_insert(v);
        }
    }
    Ok(report)
}
