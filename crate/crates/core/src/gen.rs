//! Seeded random instances for the self-test suites and the test harness.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dfa::Dfa;
use crate::term::{Grammar, Player, Sym, Term};

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alphabet(k: usize) -> Vec<Sym> {
    ["a", "b", "c", "d", "e"][..k].iter().map(|&s| Sym::from(s)).collect()
}

/// Complete DFA with `1..=max_states` states and random finals.
pub fn dfa(r: &mut Rng8, alphabet: &[Sym], max_states: usize) -> Dfa {
    let n = r.gen_range(1..=max_states);
    let delta: Vec<Vec<usize>> = (0..n)
        .map(|_| alphabet.iter().map(|_| r.gen_range(0..n)).collect())
        .collect();
    let finals: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
    Dfa::from_fn(n, alphabet.to_vec(), 0, |q| finals[q], |q, a| delta[q][a]).expect("generated DFA is complete")
}

fn player(r: &mut Rng8) -> Player {
    if r.gen_bool(0.5) {
        Player::Eve
    } else {
        Player::Adam
    }
}

fn leaf(r: &mut Rng8, alphabet: &[Sym], vars: &[Sym]) -> Term {
    let x: f64 = r.gen();
    if !vars.is_empty() && x < 0.15 {
        Term::var(vars.choose(r).unwrap())
    } else if x < 0.25 {
        Term::skip()
    } else if x < 0.3 {
        Term::err()
    } else {
        Term::letter_sym(alphabet.choose(r).unwrap().clone())
    }
}

/// Random term with roughly `size` nodes and choices of urgency `1..=n`.
pub fn term(r: &mut Rng8, alphabet: &[Sym], n: u32, size: usize, vars: &[Sym]) -> Term {
    if size <= 1 {
        return leaf(r, alphabet, vars);
    }
    if r.gen_bool(0.45) {
        let k = r.gen_range(1..size);
        let a = term(r, alphabet, n, k, vars);
        let b = term(r, alphabet, n, size - k, vars);
        Term::concat(a, b)
    } else {
        let arity = r.gen_range(1..=3usize).min(size - 1).max(1);
        let per = (size - 1) / arity;
        let ops: Vec<Term> = (0..arity).map(|_| term(r, alphabet, n, per.max(1), vars)).collect();
        Term::choice(player(r), r.gen_range(1..=n), ops)
    }
}

/// Random context with exactly one hole.
pub fn context(r: &mut Rng8, alphabet: &[Sym], n: u32, size: usize) -> Term {
    if size <= 1 {
        return Term::hole();
    }
    let x: f64 = r.gen();
    if x < 0.5 {
        let k = r.gen_range(1..size);
        let c = context(r, alphabet, n, size - k);
        let t = term(r, alphabet, n, k, &[]);
        if r.gen_bool(0.5) {
            Term::concat(t, c)
        } else {
            Term::concat(c, t)
        }
    } else {
        let others = r.gen_range(1..=2usize);
        let per = ((size - 1) / (others + 1)).max(1);
        let mut ops = vec![context(r, alphabet, n, per)];
        ops.extend((0..others).map(|_| term(r, alphabet, n, per, &[])));
        Term::choice(player(r), r.gen_range(1..=n), ops)
    }
}

pub fn word(r: &mut Rng8, alphabet: &[Sym], max_len: usize) -> Term {
    let len = r.gen_range(0..=max_len);
    Term::seq((0..len).map(|_| Term::letter_sym(alphabet.choose(r).unwrap().clone())))
}

/// Right-linear grammar over `X0..X{k-1}`: every definition is a choice tree
/// whose leaves are `w` or `w.@Xj`.
pub fn right_linear_grammar(r: &mut Rng8, alphabet: &[Sym], n: u32, nts: usize) -> Grammar {
    let names: Vec<Sym> = (0..nts).map(|i| Sym::from(format!("X{i}"))).collect();
    let mut g = Grammar::empty(n);
    for x in &names {
        let body = rl_body(r, alphabet, n, &names, 2);
        g.define(x, body);
    }
    g
}

fn rl_body(r: &mut Rng8, alphabet: &[Sym], n: u32, names: &[Sym], depth: usize) -> Term {
    if depth == 0 || r.gen_bool(0.3) {
        let w = word(r, alphabet, 2);
        return if r.gen_bool(0.6) {
            Term::concat(w, Term::var(names.choose(r).unwrap()))
        } else {
            w
        };
    }
    let arity = r.gen_range(2..=3);
    let ops: Vec<Term> = (0..arity).map(|_| rl_body(r, alphabet, n, names, depth - 1)).collect();
    Term::choice(player(r), r.gen_range(1..=n), ops)
}
