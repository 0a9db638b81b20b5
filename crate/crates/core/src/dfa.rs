//! Complete deterministic automata and the bits of automata algebra the
//! objectives and encoders need.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::term::{Sym, Word};

#[derive(Clone, Debug)]
pub struct Dfa {
    names: Vec<String>,
    alphabet: Vec<Sym>,
    index: HashMap<Sym, usize>,
    /// `delta[q][a]`
    delta: Vec<Vec<usize>>,
    initial: usize,
    finals: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct DfaJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema_version: Option<u32>,
    states: Vec<Value>,
    initial: Value,
    alphabet: Vec<String>,
    finals: Vec<Value>,
    delta: Vec<(Value, String, Value)>,
}

pub(crate) fn value_name(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Dfa {
    /// Builds a DFA from a total transition table `delta[q][a]`.
    pub fn new(
        names: Vec<String>,
        alphabet: Vec<Sym>,
        delta: Vec<Vec<usize>>,
        initial: usize,
        finals: Vec<bool>,
    ) -> Result<Dfa> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if initial >= n {
            return Err(Error::InvalidAutomaton("initial state out of range".into()));
        }
        if delta.len() != n || finals.len() != n {
            return Err(Error::InvalidAutomaton("table size does not match state count".into()));
        }
        let mut index = HashMap::new();
        for (i, a) in alphabet.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::InvalidAutomaton(format!("letter `{a}` listed twice")));
            }
        }
        for row in &delta {
            if row.len() != alphabet.len() || row.iter().any(|&p| p >= n) {
                return Err(Error::InvalidAutomaton("transition table is not total".into()));
            }
        }
        Ok(Dfa {
            names,
            alphabet,
            index,
            delta,
            initial,
            finals,
        })
    }

    /// Builds a DFA from a closure giving the successor of `(q, a)`.
    pub fn from_fn(
        states: usize,
        alphabet: Vec<Sym>,
        initial: usize,
        finals: impl Fn(usize) -> bool,
        step: impl Fn(usize, usize) -> usize,
    ) -> Result<Dfa> {
        let names = (0..states).map(|q| q.to_string()).collect();
        let delta = (0..states)
            .map(|q| (0..alphabet.len()).map(|a| step(q, a)).collect())
            .collect();
        let finals = (0..states).map(finals).collect();
        Dfa::new(names, alphabet, delta, initial, finals)
    }

    pub fn from_json(text: &str) -> Result<Dfa> {
        let j: DfaJson = serde_json::from_str(text)?;
        let names: Vec<String> = j.states.iter().map(value_name).collect();
        let mut sidx = HashMap::new();
        for (i, s) in names.iter().enumerate() {
            if sidx.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidAutomaton(format!("state `{s}` listed twice")));
            }
        }
        let state = |v: &Value| -> Result<usize> {
            let s = value_name(v);
            sidx.get(&s)
                .copied()
                .ok_or_else(|| Error::InvalidAutomaton(format!("unknown state `{s}`")))
        };
        let alphabet: Vec<Sym> = j.alphabet.iter().map(|a| Sym::from(a.as_str())).collect();
        let aidx: HashMap<&str, usize> = j.alphabet.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let mut delta = vec![vec![usize::MAX; alphabet.len()]; names.len()];
        for (q, a, p) in &j.delta {
            let (q, p) = (state(q)?, state(p)?);
            let &ai = aidx
                .get(a.as_str())
                .ok_or_else(|| Error::InvalidAutomaton(format!("unknown letter `{a}` in delta")))?;
            if delta[q][ai] != usize::MAX && delta[q][ai] != p {
                return Err(Error::InvalidAutomaton(format!(
                    "two transitions from `{}` on `{a}`",
                    names[q]
                )));
            }
            delta[q][ai] = p;
        }
        for (q, row) in delta.iter().enumerate() {
            if let Some(ai) = row.iter().position(|&p| p == usize::MAX) {
                return Err(Error::InvalidAutomaton(format!(
                    "delta is not total: missing `{}` on `{}`",
                    names[q], alphabet[ai]
                )));
            }
        }
        let mut finals = vec![false; names.len()];
        for f in &j.finals {
            finals[state(f)?] = true;
        }
        let initial = state(&j.initial)?;
        Dfa::new(names, alphabet, delta, initial, finals)
    }

    pub fn to_json(&self) -> String {
        let j = DfaJson {
            schema_version: Some(1),
            states: self.names.iter().map(|s| Value::String(s.clone())).collect(),
            initial: Value::String(self.names[self.initial].clone()),
            alphabet: self.alphabet.iter().map(|a| a.to_string()).collect(),
            finals: (0..self.len())
                .filter(|&q| self.finals[q])
                .map(|q| Value::String(self.names[q].clone()))
                .collect(),
            delta: (0..self.len())
                .flat_map(|q| {
                    (0..self.alphabet.len()).map(move |a| (q, a))
                })
                .map(|(q, a)| {
                    (
                        Value::String(self.names[q].clone()),
                        self.alphabet[a].to_string(),
                        Value::String(self.names[self.delta[q][a]].clone()),
                    )
                })
                .collect(),
        };
        serde_json::to_string_pretty(&j).expect("automaton serializes")
    }

    /// Resolves a built-in objective name or a JSON document.
    ///
    /// Built-ins: `terminate` (every word), `reach:<letter>` (words containing
    /// the letter) and `finite:w1,w2,...` where words are `.`-separated letters
    /// and `skip` is the empty word. `extra` letters are added to the alphabet.
    pub fn resolve(spec: &str, extra: &BTreeSet<Sym>) -> Result<Dfa> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            let d = Dfa::from_json(spec)?;
            return Ok(d);
        }
        if spec == "terminate" {
            return Dfa::universal(extra.iter().cloned().collect());
        }
        if let Some(target) = spec.strip_prefix("reach:") {
            let mut sigma = extra.clone();
            sigma.insert(Sym::from(target));
            return Dfa::reach(sigma.into_iter().collect(), target);
        }
        if let Some(words) = spec.strip_prefix("finite:") {
            let words: Vec<Vec<Sym>> = words
                .split(',')
                .map(|w| {
                    w.split('.')
                        .map(str::trim)
                        .filter(|s| !s.is_empty() && *s != "skip")
                        .map(Sym::from)
                        .collect()
                })
                .collect();
            let mut sigma = extra.clone();
            sigma.extend(words.iter().flatten().cloned());
            return Dfa::finite(sigma.into_iter().collect(), &words);
        }
        Err(Error::InvalidAutomaton(format!("unknown objective `{spec}`")))
    }

    /// Σ*
    pub fn universal(alphabet: Vec<Sym>) -> Result<Dfa> {
        Dfa::from_fn(1, alphabet, 0, |_| true, |_, _| 0)
    }

    /// Σ*·target·Σ*
    pub fn reach(alphabet: Vec<Sym>, target: &str) -> Result<Dfa> {
        let t = alphabet
            .iter()
            .position(|a| &**a == target)
            .ok_or_else(|| Error::UnknownLetter(target.to_string()))?;
        Dfa::from_fn(2, alphabet, 0, |q| q == 1, move |q, a| if q == 1 || a == t { 1 } else { 0 })
    }

    /// A finite language, as a trie with a sink.
    pub fn finite(alphabet: Vec<Sym>, words: &[Vec<Sym>]) -> Result<Dfa> {
        let idx: HashMap<Sym, usize> = alphabet.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        // state 0 is the sink, state 1 the root
        let mut delta: Vec<Vec<usize>> = vec![vec![0; alphabet.len()], vec![0; alphabet.len()]];
        let mut finals = vec![false, false];
        for w in words {
            let mut q = 1;
            for a in w {
                let ai = *idx.get(a).ok_or_else(|| Error::UnknownLetter(a.to_string()))?;
                if delta[q][ai] == 0 {
                    delta.push(vec![0; alphabet.len()]);
                    finals.push(false);
                    delta[q][ai] = delta.len() - 1;
                }
                q = delta[q][ai];
            }
            finals[q] = true;
        }
        let names = (0..delta.len()).map(|q| q.to_string()).collect();
        Dfa::new(names, alphabet, delta, 1, finals)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn alphabet(&self) -> &[Sym] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn letter_index(&self, a: &str) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q][a]
    }

    pub fn step_sym(&self, q: usize, a: &str) -> Result<usize> {
        let ai = self.letter_index(a).ok_or_else(|| Error::UnknownLetter(a.to_string()))?;
        Ok(self.delta[q][ai])
    }

    pub fn run(&self, q: usize, w: &[Sym]) -> Result<usize> {
        w.iter().try_fold(q, |q, a| self.step_sym(q, a))
    }

    pub fn member(&self, w: &[Sym]) -> Result<bool> {
        Ok(self.finals[self.run(self.initial, w)?])
    }

    /// Membership of a monoid-flattened word; the zero word is never a member.
    pub fn member_word(&self, w: &Word) -> Result<bool> {
        match w {
            Word::Zero => Ok(false),
            Word::Letters(ls) => self.member(ls),
        }
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.finals.iter_mut().for_each(|f| *f = !*f);
        d
    }

    fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            let a: BTreeSet<_> = self.alphabet.iter().collect();
            let b: BTreeSet<_> = other.alphabet.iter().collect();
            if a != b {
                return Err(Error::AlphabetMismatch("product of automata over different alphabets".into()));
            }
        }
        let perm: Vec<usize> = self
            .alphabet
            .iter()
            .map(|a| other.index[a])
            .collect();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        ids.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut row = Vec::with_capacity(self.alphabet.len());
            for (a, &b) in perm.iter().enumerate() {
                let next = (self.delta[p][a], other.delta[q][b]);
                let id = *ids.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let finals = pairs.iter().map(|&(p, q)| accept(self.finals[p], other.finals[q])).collect();
        let names = pairs
            .iter()
            .map(|&(p, q)| format!("({},{})", self.names[p], other.names[q]))
            .collect();
        Dfa::new(names, self.alphabet.clone(), delta, 0, finals)
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a || b)
    }

    /// Whether the language accepted from `q` is included in the one accepted from `r`.
    pub fn residual_inclusion(&self, q: usize, r: usize) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::from([(q, r)]);
        seen.insert((q, r));
        while let Some((p, s)) = queue.pop_front() {
            if self.finals[p] && !self.finals[s] {
                return false;
            }
            for a in 0..self.alphabet.len() {
                let next = (self.delta[p][a], self.delta[s][a]);
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        true
    }

    /// Residual inclusion for all state pairs at once, by greatest fixed point.
    pub fn inclusion_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut incl: Vec<Vec<bool>> = (0..n)
            .map(|p| (0..n).map(|q| !self.finals[p] || self.finals[q]).collect())
            .collect();
        loop {
            let mut changed = false;
            for p in 0..n {
                for q in 0..n {
                    if incl[p][q]
                        && (0..self.alphabet.len()).any(|a| !incl[self.delta[p][a]][self.delta[q][a]])
                    {
                        incl[p][q] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                return incl;
            }
        }
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            for &p in &self.delta[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn live(&self) -> Vec<bool> {
        let n = self.len();
        let mut live: Vec<bool> = self.finals.clone();
        loop {
            let mut changed = false;
            for q in 0..n {
                if !live[q] && self.delta[q].iter().any(|&p| live[p]) {
                    live[q] = true;
                    changed = true;
                }
            }
            if !changed {
                return live;
            }
        }
    }

    /// Minimal complete DFA for the same language, restricted to reachable states.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let states: Vec<usize> = (0..self.len()).filter(|&q| reach[q]).collect();
        let k = self.alphabet.len();
        // Moore refinement
        let mut block: Vec<usize> = vec![0; self.len()];
        for &q in &states {
            block[q] = usize::from(self.finals[q]);
        }
        let mut count = 0;
        loop {
            let mut sig: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![0; self.len()];
            for &q in &states {
                let mut key = Vec::with_capacity(k + 1);
                key.push(block[q]);
                key.extend(self.delta[q].iter().map(|&p| block[p]));
                let n = sig.len();
                next[q] = *sig.entry(key).or_insert(n);
            }
            let c = sig.len();
            block = next;
            if c == count {
                break;
            }
            count = c;
        }
        // renumber blocks in BFS order from the initial state for stable output
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut reps: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        order.insert(block[self.initial], 0);
        reps.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for &p in &self.delta[q] {
                if !order.contains_key(&block[p]) {
                    order.insert(block[p], reps.len());
                    reps.push(p);
                    queue.push_back(p);
                }
            }
        }
        let delta = reps
            .iter()
            .map(|&q| self.delta[q].iter().map(|&p| order[&block[p]]).collect())
            .collect();
        let finals = reps.iter().map(|&q| self.finals[q]).collect();
        let names = reps.iter().map(|&q| self.names[q].clone()).collect();
        Dfa::new(names, self.alphabet.clone(), delta, 0, finals).expect("minimization preserves totality")
    }

    /// Same language over a larger alphabet; new letters lead to a rejecting sink.
    pub fn extend_alphabet(&self, extra: &BTreeSet<Sym>) -> Dfa {
        let new: Vec<Sym> = extra.iter().filter(|a| !self.index.contains_key(*a)).cloned().collect();
        if new.is_empty() {
            return self.clone();
        }
        let sink = self.len();
        let mut names = self.names.clone();
        let mut sink_name = "sink".to_string();
        while names.contains(&sink_name) {
            sink_name.push('\'');
        }
        names.push(sink_name);
        let mut alphabet = self.alphabet.clone();
        alphabet.extend(new.iter().cloned());
        let mut delta: Vec<Vec<usize>> = self
            .delta
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.extend(std::iter::repeat(sink).take(new.len()));
                r
            })
            .collect();
        delta.push(vec![sink; alphabet.len()]);
        let mut finals = self.finals.clone();
        finals.push(false);
        Dfa::new(names, alphabet, delta, self.initial, finals).expect("extension preserves totality")
    }

    /// Words of length at most `max_len` in shortlex order.
    pub fn words_up_to(alphabet: &[Sym], max_len: usize) -> Vec<Vec<Sym>> {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for a in alphabet {
                    let mut v: Vec<Sym> = w.clone();
                    v.push(a.clone());
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}
