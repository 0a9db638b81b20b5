//! Finite-state n-trace hyperproperties with alternating quantifiers
//! `∃ t1 ∀ t2 ∃ t3 ...` over traces of equal length.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Deserialize;
use serde_json::Value;

use super::{Encoding, Nfa};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::term::{Grammar, Player, Sym, Term};

#[derive(Clone, Debug)]
pub struct HyperSpec {
    pub system: Nfa,
    pub n: usize,
    /// Property over tuple letters `a1|a2|...|an`.
    pub property: Dfa,
}

#[derive(Deserialize)]
struct HyperJson {
    system: super::nfa::NfaJson,
    n: usize,
    property: Value,
}

pub fn tuple_letter(labels: &[Sym]) -> Sym {
    Sym::from(labels.iter().map(|a| &**a).collect::<Vec<_>>().join("|"))
}

impl HyperSpec {
    pub fn new(system: Nfa, n: usize, property: Dfa) -> Result<HyperSpec> {
        if n == 0 {
            return Err(Error::Invalid("a hyperproperty needs at least one trace".into()));
        }
        let h = HyperSpec { system, n, property };
        for tuple in h.tuples() {
            if h.property.letter_index(&tuple).is_none() {
                return Err(Error::AlphabetMismatch(format!("property has no letter `{tuple}`")));
            }
        }
        Ok(h)
    }

    pub fn from_json(text: &str) -> Result<HyperSpec> {
        let j: HyperJson = serde_json::from_str(text)?;
        let system = Nfa::from_parts(j.system)?;
        let property = match &j.property {
            Value::String(s) => {
                let h = HyperSpec {
                    system: system.clone(),
                    n: j.n,
                    property: Dfa::universal(vec![])?,
                };
                Dfa::resolve(s, &h.tuples().into_iter().collect())?
            }
            other => Dfa::from_json(&other.to_string())?,
        };
        HyperSpec::new(system, j.n, property)
    }

    fn tuples(&self) -> Vec<Sym> {
        let mut out = vec![Vec::<Sym>::new()];
        for _ in 0..self.n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    self.system.alphabet.iter().map(move |a| {
                        let mut t = t.clone();
                        t.push(a.clone());
                        t
                    })
                })
                .collect();
        }
        out.iter().map(|t| tuple_letter(t)).collect()
    }

    /// Brute-force semantics for n ≤ 2 by subset construction over the
    /// universally quantified trace.
    pub fn holds(&self) -> Result<bool> {
        let s = &self.system;
        let p = &self.property;
        match self.n {
            1 => {
                let start = (s.initial, p.initial());
                let mut seen = HashSet::from([start]);
                let mut queue = VecDeque::from([start]);
                while let Some((q, r)) = queue.pop_front() {
                    if s.finals[q] && p.is_final(r) {
                        return Ok(true);
                    }
                    for (_, a, q2) in s.out(q) {
                        let next = (*q2, p.step_sym(r, &tuple_letter(&[a.clone()]))?);
                        if seen.insert(next) {
                            queue.push_back(next);
                        }
                    }
                }
                Ok(false)
            }
            2 => {
                type Node = (usize, BTreeSet<(usize, usize)>);
                let start: Node = (s.initial, BTreeSet::from([(s.initial, p.initial())]));
                let mut seen: HashSet<Node> = HashSet::from([start.clone()]);
                let mut queue = VecDeque::from([start]);
                while let Some((q, set)) = queue.pop_front() {
                    if s.finals[q] && set.iter().all(|&(q2, r)| !s.finals[q2] || p.is_final(r)) {
                        return Ok(true);
                    }
                    for (_, a, q1) in s.out(q) {
                        let mut next = BTreeSet::new();
                        for &(q2, r) in &set {
                            for (_, b, q3) in s.out(q2) {
                                next.insert((*q3, p.step_sym(r, &tuple_letter(&[a.clone(), b.clone()]))?));
                            }
                        }
                        let node = (*q1, next);
                        if seen.insert(node.clone()) {
                            queue.push_back(node);
                        }
                    }
                }
                Ok(false)
            }
            _ => Err(Error::Unsupported("the direct checker handles at most two traces".into())),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct PhaseState {
    phase: usize,
    runs: Vec<Option<usize>>,
    buffer: Vec<Sym>,
    prop: usize,
}

/// Objective reading rounds of `n` transition letters, one per trace.
fn phase_objective(h: &HyperSpec) -> Dfa {
    let s = &h.system;
    let n = h.n;
    let letters: Vec<(usize, Sym, usize)> = s.delta.clone();
    let alphabet: Vec<Sym> = letters.iter().map(|(q, a, p)| s.transition_letter(*q, a, *p)).collect();
    let start = PhaseState {
        phase: 0,
        runs: vec![Some(s.initial); n],
        buffer: Vec::new(),
        prop: h.property.initial(),
    };
    let mut index: HashMap<PhaseState, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let st = states[i].clone();
        let mut row = Vec::with_capacity(letters.len());
        for (q, a, p) in &letters {
            let mut next = st.clone();
            next.runs[st.phase] = match st.runs[st.phase] {
                Some(c) if c == *q => Some(*p),
                _ => None,
            };
            next.buffer.push(a.clone());
            if st.phase + 1 == n {
                next.prop = h.property.step_sym(st.prop, &tuple_letter(&next.buffer)).expect("tuples checked");
                next.buffer.clear();
                next.phase = 0;
            } else {
                next.phase += 1;
            }
            let id = *index.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let finals = states
        .iter()
        .map(|st| {
            if st.phase != 0 {
                return false;
            }
            match st.runs.iter().position(|r| !r.is_some_and(|q| s.finals[q])) {
                // trace i+1 is invalid: fine for Eve iff it is universally quantified
                Some(i) => i % 2 == 1,
                None => h.property.is_final(st.prop),
            }
        })
        .collect();
    let names = (0..states.len()).map(|i| i.to_string()).collect();
    Dfa::new(names, alphabet, delta, 0, finals).expect("total by construction")
}

/// `@X = skip E_n (t_1 . X)` where `t_i` picks a transition for trace `i`
/// at urgency `n-i+1`, owned by Eve for odd `i`.
pub fn encode(h: &HyperSpec) -> Result<Encoding> {
    let s = &h.system;
    let n = h.n as u32;
    let trans: Vec<Term> = s
        .delta
        .iter()
        .map(|(q, a, p)| Term::letter_sym(s.transition_letter(*q, a, *p)))
        .collect();
    let round = Term::seq((1..=h.n).map(|i| {
        let player = if i % 2 == 1 { Player::Eve } else { Player::Adam };
        Term::choice_or_err(player, n - i as u32 + 1, trans.clone())
    }));
    let mut g = Grammar::empty(n);
    g.define("X", Term::eve(n, [Term::skip(), Term::concat(round, Term::var("X"))]));
    Ok(Encoding {
        grammar: g,
        start: Term::var("X"),
        objective: phase_objective(h),
        query: None,
    })
}
