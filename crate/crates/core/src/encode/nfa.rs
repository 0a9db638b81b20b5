use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dfa::value_name;
use crate::error::{Error, Result};
use crate::term::Sym;

/// Nondeterministic automaton; transitions may be partial.
#[derive(Clone, Debug, PartialEq)]
pub struct Nfa {
    pub states: Vec<String>,
    pub initial: usize,
    pub alphabet: Vec<Sym>,
    pub finals: Vec<bool>,
    pub delta: Vec<(usize, Sym, usize)>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct NfaJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub states: Vec<Value>,
    pub initial: Value,
    pub alphabet: Vec<String>,
    pub finals: Vec<Value>,
    pub delta: Vec<(Value, String, Value)>,
}

impl Nfa {
    pub fn new(states: Vec<String>, initial: usize, alphabet: Vec<Sym>, finals: Vec<bool>, delta: Vec<(usize, Sym, usize)>) -> Result<Nfa> {
        if states.is_empty() {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if initial >= states.len() || finals.len() != states.len() {
            return Err(Error::InvalidAutomaton("state index out of range".into()));
        }
        let sigma: HashSet<&Sym> = alphabet.iter().collect();
        for (q, a, p) in &delta {
            if *q >= states.len() || *p >= states.len() {
                return Err(Error::InvalidAutomaton("transition state out of range".into()));
            }
            if !sigma.contains(a) {
                return Err(Error::UnknownLetter(a.to_string()));
            }
        }
        let mut delta = delta;
        delta.sort();
        delta.dedup();
        Ok(Nfa {
            states,
            initial,
            alphabet,
            finals,
            delta,
        })
    }

    pub(crate) fn from_parts(j: NfaJson) -> Result<Nfa> {
        let states: Vec<String> = j.states.iter().map(value_name).collect();
        let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != states.len() {
            return Err(Error::InvalidAutomaton("duplicate state".into()));
        }
        let st = |v: &Value| {
            let n = value_name(v);
            index
                .get(n.as_str())
                .copied()
                .ok_or_else(|| Error::InvalidAutomaton(format!("unknown state `{n}`")))
        };
        let initial = st(&j.initial)?;
        let mut finals = vec![false; states.len()];
        for f in &j.finals {
            finals[st(f)?] = true;
        }
        let mut delta = Vec::new();
        for (q, a, p) in &j.delta {
            delta.push((st(q)?, Sym::from(a.as_str()), st(p)?));
        }
        Nfa::new(states.clone(), initial, j.alphabet.iter().map(|a| Sym::from(a.as_str())).collect(), finals, delta)
    }

    pub fn from_json(text: &str) -> Result<Nfa> {
        Nfa::from_parts(serde_json::from_str(text)?)
    }

    pub(crate) fn to_parts(&self) -> NfaJson {
        NfaJson {
            schema_version: Some(1),
            states: self.states.iter().map(|s| Value::String(s.clone())).collect(),
            initial: Value::String(self.states[self.initial].clone()),
            alphabet: self.alphabet.iter().map(|a| a.to_string()).collect(),
            finals: (0..self.len())
                .filter(|&q| self.finals[q])
                .map(|q| Value::String(self.states[q].clone()))
                .collect(),
            delta: self
                .delta
                .iter()
                .map(|(q, a, p)| (Value::String(self.states[*q].clone()), a.to_string(), Value::String(self.states[*p].clone())))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_parts()).expect("serializable")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn succ(&self, q: usize, a: &str) -> impl Iterator<Item = usize> + '_ {
        let a = a.to_string();
        self.delta.iter().filter(move |(s, b, _)| *s == q && **b == *a).map(|&(_, _, p)| p)
    }

    pub fn out(&self, q: usize) -> impl Iterator<Item = &(usize, Sym, usize)> + '_ {
        self.delta.iter().filter(move |(s, _, _)| *s == q)
    }

    /// Letter naming a transition in encodings.
    pub fn transition_letter(&self, q: usize, a: &str, p: usize) -> Sym {
        Sym::from(format!("{}:{}:{}", self.states[q], a, self.states[p]))
    }

    /// Restriction to states from which a final state is reachable; the
    /// initial state is kept even when it is not.
    pub fn trim(&self) -> Nfa {
        let mut live = self.finals.clone();
        loop {
            let mut changed = false;
            for (q, _, p) in &self.delta {
                if live[*p] && !live[*q] {
                    live[*q] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let delta = self.delta.iter().filter(|(q, _, p)| live[*q] && live[*p]).cloned().collect();
        Nfa {
            delta,
            ..self.clone()
        }
    }

    /// Language inclusion by subset construction on `other`.
    pub fn included_in(&self, other: &Nfa) -> bool {
        let start = (self.initial, BTreeSet::from([other.initial]));
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some((q, s)) = queue.pop_front() {
            if self.finals[q] && !s.iter().any(|&p| other.finals[p]) {
                return false;
            }
            for (_, a, q2) in self.out(q) {
                let s2: BTreeSet<usize> = s.iter().flat_map(|&p| other.succ(p, a)).collect();
                let next = (*q2, s2);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        true
    }

    /// Whether `other` simulates `self` (greatest fixed point).
    pub fn simulated_by(&self, other: &Nfa) -> bool {
        let mut rel: Vec<Vec<bool>> = (0..self.len())
            .map(|q| (0..other.len()).map(|p| !self.finals[q] || other.finals[p]).collect())
            .collect();
        loop {
            let mut changed = false;
            for q in 0..self.len() {
                for p in 0..other.len() {
                    if rel[q][p]
                        && !self
                            .out(q)
                            .all(|(_, a, q2)| other.succ(p, a).any(|p2| rel[*q2][p2]))
                    {
                        rel[q][p] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                return rel[self.initial][other.initial];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example() -> (Nfa, Nfa) {
        let a = Nfa::from_json(
            r#"{"states":["q0","q1","q2","q3"],"initial":"q0","alphabet":["a","b","c"],
                "finals":["q2","q3"],"delta":[["q0","a","q1"],["q1","b","q2"],["q1","c","q3"]]}"#,
        )
        .unwrap();
        let b = Nfa::from_json(
            r#"{"states":["p0","pl","pr","pl'","pr'"],"initial":"p0","alphabet":["a","b","c"],
                "finals":["pl'","pr'"],"delta":[["p0","a","pl"],["p0","a","pr"],["pl","b","pl'"],["pr","c","pr'"]]}"#,
        )
        .unwrap();
        (a, b)
    }

    #[test]
    fn example_inclusion_and_simulation() {
        let (a, b) = example();
        assert!(a.included_in(&b));
        assert!(!a.simulated_by(&b));
        assert!(b.simulated_by(&a));
        assert!(a.simulated_by(&a));
    }

    #[test]
    fn json_round_trip() {
        let (a, _) = example();
        assert_eq!(Nfa::from_json(&a.to_json()).unwrap(), a);
    }
}
