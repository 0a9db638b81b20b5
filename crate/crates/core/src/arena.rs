//! Operational game semantics: moves, an exact solver for recursion-free
//! terms and a bounded solver for grammars.

use std::collections::HashMap;

use crate::dfa::Dfa;
use crate::error::{Caps, Error, Result};
use crate::monoid::{ClassId, SynMonoid};
use crate::term::{Grammar, Kind, Player, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    Win,
    Lose,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Eve's choices at the positions she owns and wins, as `(position, operand index)`.
    pub strategy: Option<Vec<(Term, usize)>>,
}

impl Verdict {
    pub fn is_win(&self) -> bool {
        self.outcome == Outcome::Win
    }
}

/// Owner of a position: the owner of its leading subterm. `None` for word terms.
pub fn owner(t: &Term, max_urgency: u32) -> Option<Player> {
    let (_, lead) = t.leading_path(max_urgency)?;
    Some(match lead.kind() {
        Kind::Choice(p, _, _) => *p,
        _ => Player::Eve,
    })
}

/// Successor positions; empty exactly for word terms.
pub fn successors(g: &Grammar, t: &Term) -> Result<Vec<Term>> {
    let Some((path, lead)) = t.leading_path(g.max_urgency) else {
        return Ok(Vec::new());
    };
    Ok(match lead.kind() {
        Kind::Choice(_, _, ops) => ops.iter().map(|s| t.replace_at(&path, s.clone())).collect(),
        Kind::Var(x) => vec![t.replace_at(&path, g.def(x)?.clone())],
        _ => unreachable!("leading subterms are actions"),
    })
}

/// Exact winner of a recursion-free term.
pub fn solve_exact(g: &Grammar, t: &Term, o: &Dfa) -> Result<Verdict> {
    g.check_term(t)?;
    g.check_acyclic(t)?;
    let mut s = Exact {
        g,
        o,
        memo: HashMap::new(),
        strategy: HashMap::new(),
    };
    let win = s.go(t)?;
    let strategy = win.then(|| {
        let mut v: Vec<(Term, usize)> = s.strategy.into_iter().collect();
        v.sort_by_cached_key(|(t, _)| t.to_text());
        v
    });
    Ok(Verdict {
        outcome: if win { Outcome::Win } else { Outcome::Lose },
        strategy,
    })
}

struct Exact<'a> {
    g: &'a Grammar,
    o: &'a Dfa,
    memo: HashMap<Term, bool>,
    strategy: HashMap<Term, usize>,
}

impl Exact<'_> {
    fn go(&mut self, t: &Term) -> Result<bool> {
        if let Some(&b) = self.memo.get(t) {
            return Ok(b);
        }
        let b = match t.word() {
            Some(w) => self.o.member_word(&w)?,
            None => {
                let owner = owner(t, self.g.max_urgency).expect("non-word has a leading subterm");
                let succ = successors(self.g, t)?;
                let mut result = owner == Player::Adam;
                for (i, s) in succ.iter().enumerate() {
                    let w = self.go(s)?;
                    if owner == Player::Eve && w {
                        if succ.len() > 1 {
                            self.strategy.insert(t.clone(), i);
                        }
                        result = true;
                        break;
                    }
                    if owner == Player::Adam && !w {
                        result = false;
                        break;
                    }
                }
                result
            }
        };
        self.memo.insert(t.clone(), b);
        Ok(b)
    }
}

/// Replaces maximal runs of word factors on the concatenation spine by the
/// representative of their class. Positions related this way have the same winner.
pub fn canonical_position(t: &Term, m: &SynMonoid) -> Result<Term> {
    fn spine(t: &Term, out: &mut Vec<Term>) {
        match t.kind() {
            Kind::Concat(a, b) => {
                spine(a, out);
                spine(b, out);
            }
            _ => out.push(t.clone()),
        }
    }
    let mut factors = Vec::new();
    spine(t, &mut factors);
    let mut out: Vec<Term> = Vec::new();
    let mut run: Option<ClassId> = None;
    let flush = |run: &mut Option<ClassId>, out: &mut Vec<Term>| -> bool {
        if let Some(c) = run.take() {
            if c == ClassId::ZERO {
                return false;
            }
            if c != m.identity() {
                out.push(m.rep_term(c));
            }
        }
        true
    };
    for f in factors {
        match f.word() {
            Some(w) => {
                let c = m.class_of_word(&w)?;
                run = Some(m.mul(run.unwrap_or(m.identity()), c));
            }
            None => {
                if !flush(&mut run, &mut out) {
                    return Ok(Term::err());
                }
                out.push(f);
            }
        }
    }
    if !flush(&mut run, &mut out) {
        return Ok(Term::err());
    }
    Ok(Term::seq(out))
}

const POSITION_CAP: usize = 1_000_000;

/// Bounded solver. `Win` and `Lose` are sound; `Unknown` means the budget ran out.
///
/// Positions are taken modulo the objective's syntactic congruence. With
/// `cycles` set, repeated positions close the arena graph, so plays that
/// revisit a position count as infinite and lost for Eve.
pub fn solve_bounded(g: &Grammar, t: &Term, o: &Dfa, budget: usize, cycles: bool) -> Result<Verdict> {
    g.check_term(t)?;
    let m = SynMonoid::build(o, Caps::default().monoid_classes)?;
    let start = canonical_position(t, &m)?;
    let outcome = if cycles {
        graph_solve(g, &start, &m, budget)?
    } else {
        let g = g.clone();
        let m2 = m.clone();
        std::thread::scope(|s| {
            std::thread::Builder::new()
                .stack_size(1 << 30)
                .spawn_scoped(s, move || {
                    let mut tree = Tree {
                        g: &g,
                        m: &m2,
                        memo: HashMap::new(),
                    };
                    tree.go(&start, budget)
                })
                .expect("spawn solver thread")
                .join()
                .expect("solver thread panicked")
        })?
    };
    Ok(Verdict {
        outcome,
        strategy: None,
    })
}

fn word_wins(m: &SynMonoid, t: &Term) -> Result<Option<bool>> {
    Ok(match t.word() {
        Some(w) => Some(m.accepts(m.class_of_word(&w)?)),
        None => None,
    })
}

struct Tree<'a> {
    g: &'a Grammar,
    m: &'a SynMonoid,
    memo: HashMap<(Term, usize), Outcome>,
}

impl Tree<'_> {
    fn go(&mut self, t: &Term, left: usize) -> Result<Outcome> {
        if let Some(w) = word_wins(self.m, t)? {
            return Ok(if w { Outcome::Win } else { Outcome::Lose });
        }
        if left == 0 {
            return Ok(Outcome::Unknown);
        }
        if let Some(&o) = self.memo.get(&(t.clone(), left)) {
            return Ok(o);
        }
        let owner = owner(t, self.g.max_urgency).expect("non-word has a leading subterm");
        let (good, bad) = match owner {
            Player::Eve => (Outcome::Win, Outcome::Lose),
            Player::Adam => (Outcome::Lose, Outcome::Win),
        };
        let mut result = bad;
        for s in successors(self.g, t)? {
            let s = canonical_position(&s, self.m)?;
            match self.go(&s, left - 1)? {
                o if o == good => {
                    result = good;
                    break;
                }
                Outcome::Unknown => result = Outcome::Unknown,
                _ => {}
            }
        }
        self.memo.insert((t.clone(), left), result);
        Ok(result)
    }
}

fn graph_solve(g: &Grammar, start: &Term, m: &SynMonoid, budget: usize) -> Result<Outcome> {
    #[derive(Clone, Copy, PartialEq)]
    enum Node {
        Leaf(bool),
        Frontier,
        Inner(Player),
    }
    let mut ids: HashMap<Term, usize> = HashMap::new();
    let mut terms = vec![start.clone()];
    let mut depth = vec![0usize];
    let mut nodes = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    ids.insert(start.clone(), 0);
    let mut i = 0;
    while i < terms.len() {
        let t = terms[i].clone();
        let (node, next) = if let Some(w) = word_wins(m, &t)? {
            (Node::Leaf(w), Vec::new())
        } else if depth[i] >= budget || terms.len() >= POSITION_CAP {
            (Node::Frontier, Vec::new())
        } else {
            let mut next = Vec::new();
            for s in successors(g, &t)? {
                let s = canonical_position(&s, m)?;
                let id = *ids.entry(s.clone()).or_insert_with(|| {
                    terms.push(s);
                    depth.push(depth[i] + 1);
                    terms.len() - 1
                });
                next.push(id);
            }
            (Node::Inner(owner(&t, g.max_urgency).expect("non-word")), next)
        };
        nodes.push(node);
        succ.push(next);
        i += 1;
    }
    let n = nodes.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, ss) in succ.iter().enumerate() {
        for &s in ss {
            preds[s].push(v);
        }
    }
    let attractor = |frontier_wins: bool| -> Vec<bool> {
        let mut win = vec![false; n];
        let mut need: Vec<usize> = (0..n)
            .map(|v| match nodes[v] {
                Node::Inner(Player::Eve) => 1,
                Node::Inner(Player::Adam) => succ[v].len(),
                _ => 0,
            })
            .collect();
        let mut work: Vec<usize> = (0..n)
            .filter(|&v| matches!(nodes[v], Node::Leaf(true)) || (frontier_wins && nodes[v] == Node::Frontier))
            .collect();
        for &v in &work {
            win[v] = true;
        }
        while let Some(v) = work.pop() {
            for &p in &preds[v] {
                if win[p] {
                    continue;
                }
                // one count per edge, so duplicate successors are handled
                for _ in succ[p].iter().filter(|&&s| s == v) {
                    need[p] = need[p].saturating_sub(1);
                }
                if need[p] == 0 {
                    win[p] = true;
                    work.push(p);
                }
            }
        }
        win
    };
    if attractor(false)[0] {
        return Ok(Outcome::Win);
    }
    if !attractor(true)[0] {
        return Ok(Outcome::Lose);
    }
    Ok(Outcome::Unknown)
}

/// Convenience check used by tests and encoders: the objective letters must cover the term.
pub fn check_letters(t: &Term, o: &Dfa) -> Result<()> {
    for a in t.letters() {
        if o.letter_index(&a).is_none() {
            return Err(Error::UnknownLetter(a.to_string()));
        }
    }
    Ok(())
}
