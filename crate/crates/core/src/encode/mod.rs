//! Reductions of verification problems to urgency games.

pub mod hyper;
pub mod mcvp;
pub mod nfa;
pub mod pushdown;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::decision::{decide_preorder, Options};
use crate::dfa::{value_name, Dfa};
use crate::error::{Caps, Error, Result};
use crate::monoid::SynMonoid;
use crate::nf::Normalizer;
use crate::term::{parse_grammar, parse_term, Grammar, Player, Sym, Term};

pub use nfa::Nfa;

/// Grammar, start term and objective. Eve wins `start` iff the encoded
/// property holds; `query`, when present, asks `query ⊑_O start` instead.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub grammar: Grammar,
    pub start: Term,
    pub objective: Dfa,
    pub query: Option<Term>,
}

impl Encoding {
    pub fn write_bundle(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("grammar.txt"), self.grammar.to_string())?;
        fs::write(dir.join("start.term"), format!("{}\n", self.start))?;
        fs::write(dir.join("objective.json"), self.objective.to_json())?;
        if let Some(q) = &self.query {
            fs::write(dir.join("query.term"), format!("{q}\n"))?;
        }
        Ok(())
    }

    pub fn read_bundle(dir: &Path) -> Result<Encoding> {
        let grammar = parse_grammar(&fs::read_to_string(dir.join("grammar.txt"))?)?;
        let start = parse_term(&fs::read_to_string(dir.join("start.term"))?)?;
        let objective = Dfa::from_json(&fs::read_to_string(dir.join("objective.json"))?)?;
        let q = dir.join("query.term");
        let query = if q.exists() {
            Some(parse_term(&fs::read_to_string(q)?)?)
        } else {
            None
        };
        Ok(Encoding {
            grammar,
            start,
            objective,
            query,
        })
    }

    /// Answer to the encoded question: the winner of `start`, or the
    /// preorder `query ⊑_O start` when a query is present.
    pub fn answer(&self, caps: &Caps) -> Result<bool> {
        if let Some(q) = &self.query {
            let opts = Options {
                caps: caps.clone(),
                prune: true,
                ..Options::default()
            };
            return Ok(decide_preorder(&self.grammar, q, &self.start, &self.objective, &opts)?.holds);
        }
        let m = SynMonoid::build(&self.objective, caps.monoid_classes)?;
        let mut nz = Normalizer::new(&self.grammar, &m, caps).with_prune(true);
        let x = nz.normalize(&self.start)?;
        Ok(nz.wins(x))
    }
}

#[derive(Deserialize)]
struct PairJson {
    #[serde(alias = "a")]
    left: nfa::NfaJson,
    #[serde(alias = "b")]
    right: nfa::NfaJson,
}

/// Reads `{"left": nfa, "right": nfa}`; `a`/`b` are accepted as keys too.
pub fn nfa_pair_from_json(text: &str) -> Result<(Nfa, Nfa)> {
    let j: PairJson = serde_json::from_str(text)?;
    Ok((Nfa::from_parts(j.left)?, Nfa::from_parts(j.right)?))
}

pub fn nfa_pair_to_json(a: &Nfa, b: &Nfa) -> String {
    serde_json::to_string_pretty(&serde_json::json!({
        "schema_version": 1,
        "left": a.to_parts(),
        "right": b.to_parts(),
    }))
    .expect("serializable")
}

fn nt(prefix: &str, i: usize) -> Sym {
    Sym::from(format!("{prefix}{i}"))
}

const STUCK: &str = "stuck";

/// Objective over `b`'s transition letters: accepts sequences that are not
/// an accepting run of `b` from its initial state.
fn broken_run_objective(b: &Nfa) -> Dfa {
    let n = b.len();
    let broken = n;
    let mut alphabet: Vec<Sym> = b.delta.iter().map(|(p, a, p2)| b.transition_letter(*p, a, *p2)).collect();
    alphabet.push(Sym::from(STUCK));
    let mut names: Vec<String> = b.states.clone();
    let mut bname = "broken".to_string();
    while names.contains(&bname) {
        bname.push('\'');
    }
    names.push(bname);
    let delta = (0..=n)
        .map(|s| {
            let mut row: Vec<usize> = b
                .delta
                .iter()
                .map(|&(p, _, p2)| if s == p { p2 } else { broken })
                .collect();
            row.push(broken);
            row
        })
        .collect();
    let finals = (0..=n).map(|s| s == broken || !b.finals[s]).collect();
    Dfa::new(names, alphabet, delta, b.initial, finals).expect("total by construction")
}

fn inclusion_like(a: &Nfa, b: &Nfa, eve_urgency: u32, n: u32) -> Result<Encoding> {
    let mut g = Grammar::empty(n);
    for q in 0..a.len() {
        let mut ops = Vec::new();
        for (_, x, p) in a.out(q) {
            let replies: Vec<Term> = b
                .delta
                .iter()
                .filter(|(_, y, _)| y == x)
                .map(|(r, y, r2)| Term::letter_sym(b.transition_letter(*r, y, *r2)))
                .collect();
            let adam = if replies.is_empty() {
                Term::letter(STUCK)
            } else {
                Term::adam(1, replies)
            };
            ops.push(Term::concat(adam, Term::var(&nt("X", *p))));
        }
        if a.finals[q] {
            ops.push(Term::skip());
        }
        g.define(&nt("X", q), Term::choice_or_err(Player::Eve, eve_urgency, ops));
    }
    Ok(Encoding {
        grammar: g,
        start: Term::var(&nt("X", a.initial)),
        objective: broken_run_objective(b),
        query: None,
    })
}

/// Eve wins iff `L(a) ⊄ L(b)`. Maximal urgency 2.
pub fn inclusion(a: &Nfa, b: &Nfa) -> Result<Encoding> {
    inclusion_like(a, b, 2, 2)
}

/// Eve wins iff `a.trim()` is not simulated by `b`. Maximal urgency 1.
///
/// Plays only count once Eve stops in a final state of `a`, so moves of `a`
/// that cannot lead to acceptance never help her.
pub fn simulation(a: &Nfa, b: &Nfa) -> Result<Encoding> {
    inclusion_like(a, b, 1, 1)
}

/// Imperfect-information reachability game: Adam picks letters, Eve only
/// sees the abstraction `hd` of the current state.
#[derive(Clone, Debug)]
pub struct Iig {
    pub automaton: Nfa,
    /// Abstraction of each state.
    pub hd: Vec<String>,
}

#[derive(Deserialize)]
struct IigJson {
    automaton: nfa::NfaJson,
    observation: BTreeMap<String, Value>,
}

impl Iig {
    pub fn from_json(text: &str) -> Result<Iig> {
        let j: IigJson = serde_json::from_str(text)?;
        let automaton = Nfa::from_parts(j.automaton)?;
        let hd = automaton
            .states
            .iter()
            .map(|s| {
                j.observation
                    .get(s)
                    .map(value_name)
                    .ok_or_else(|| Error::Invalid(format!("no observation for state `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Iig { automaton, hd })
    }

    pub fn to_json(&self) -> String {
        let obs: BTreeMap<&str, &str> = self
            .automaton
            .states
            .iter()
            .zip(&self.hd)
            .map(|(s, h)| (s.as_str(), h.as_str()))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "schema_version": 1,
            "automaton": self.automaton.to_parts(),
            "observation": obs,
        }))
        .expect("serializable")
    }

    fn observations(&self) -> Vec<String> {
        let s: BTreeSet<&String> = self.hd.iter().collect();
        s.into_iter().cloned().collect()
    }

    /// Knowledge-set game: Eve wins iff she can reach a knowledge set containing a final state.
    pub fn solve(&self) -> bool {
        let a = &self.automaton;
        let obs = self.observations();
        let start: BTreeSet<usize> = BTreeSet::from([a.initial]);
        let mut sets = vec![start.clone()];
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start, 0)]);
        // moves[k][letter] = successor knowledge sets, one per observation
        let mut moves: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let k = sets[i].clone();
            let mut per_letter = Vec::new();
            for x in &a.alphabet {
                let mut opts = Vec::new();
                for h in &obs {
                    let k2: BTreeSet<usize> = k
                        .iter()
                        .flat_map(|&q| a.succ(q, x))
                        .filter(|&p| &self.hd[p] == h)
                        .collect();
                    if k2.is_empty() {
                        continue;
                    }
                    let id = *index.entry(k2.clone()).or_insert_with(|| {
                        sets.push(k2);
                        sets.len() - 1
                    });
                    opts.push(id);
                }
                per_letter.push(opts);
            }
            moves.push(per_letter);
            i += 1;
        }
        let mut win: Vec<bool> = sets.iter().map(|k| k.iter().any(|&q| a.finals[q])).collect();
        loop {
            let mut changed = false;
            for k in 0..sets.len() {
                if !win[k] && !a.alphabet.is_empty() && moves[k].iter().all(|opts| opts.iter().any(|&k2| win[k2])) {
                    win[k] = true;
                    changed = true;
                }
            }
            if !changed {
                return win[0];
            }
        }
    }
}

/// Accepts reversed runs `(q_k-1,a,q_k) ... (q0,a,q1)` with `q_k` final; the
/// empty word iff the initial state is final.
fn reversed_run_objective(a: &Nfa) -> Dfa {
    let n = a.len();
    let (init, dead) = (0, n + 1);
    let alphabet: Vec<Sym> = a.delta.iter().map(|(q, x, p)| a.transition_letter(*q, x, *p)).collect();
    let mut names = vec!["start".to_string()];
    names.extend(a.states.iter().map(|s| format!("src:{s}")));
    names.push("dead".to_string());
    let delta = (0..=n + 1)
        .map(|s| {
            a.delta
                .iter()
                .map(|&(q, _, p)| match s {
                    0 if a.finals[p] => 1 + q,
                    s if s >= 1 && s <= n && s - 1 == p => 1 + q,
                    _ => dead,
                })
                .collect()
        })
        .collect();
    let finals = (0..=n + 1)
        .map(|s| s == 1 + a.initial || (s == init && a.finals[a.initial]))
        .collect();
    Dfa::new(names, alphabet, delta, init, finals).expect("total by construction")
}

/// Left-linear encoding at urgency 1: Eve wins iff she wins the imperfect-information game.
pub fn imperfect_info(game: &Iig) -> Result<Encoding> {
    let a = &game.automaton;
    if game.hd.len() != a.len() {
        return Err(Error::Invalid("abstraction must cover every state".into()));
    }
    let obs = game.observations();
    let idx: HashMap<&String, usize> = obs.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let mut g = Grammar::empty(1);
    for (hi, h) in obs.iter().enumerate() {
        let mut ops = Vec::new();
        if (0..a.len()).any(|q| &game.hd[q] == h && a.finals[q]) {
            ops.push(Term::skip());
        }
        if !a.alphabet.is_empty() {
            let per_letter = a.alphabet.iter().map(|x| {
                Term::eve(
                    1,
                    obs.iter().enumerate().map(|(h2i, h2)| {
                        let steps = a
                            .delta
                            .iter()
                            .filter(|(_, y, p)| y == x && &game.hd[*p] == h2)
                            .map(|(q, y, p)| Term::letter_sym(a.transition_letter(*q, y, *p)));
                        Term::concat(Term::var(&nt("H", h2i)), Term::choice_or_err(Player::Eve, 1, steps))
                    }),
                )
            });
            ops.push(Term::adam(1, per_letter));
        }
        g.define(&nt("H", hi), Term::choice_or_err(Player::Eve, 1, ops));
    }
    Ok(Encoding {
        grammar: g,
        start: Term::var(&nt("H", idx[&game.hd[a.initial]])),
        objective: reversed_run_objective(a),
        query: None,
    })
}

/// Random NFA over `alphabet` with up to `max_states` states.
pub fn random_nfa(r: &mut crate::gen::Rng8, alphabet: &[Sym], max_states: usize, density: f64) -> Nfa {
    use rand::Rng;
    let n = r.gen_range(1..=max_states);
    let mut delta = Vec::new();
    for q in 0..n {
        for a in alphabet {
            for p in 0..n {
                if r.gen_bool(density) {
                    delta.push((q, a.clone(), p));
                }
            }
        }
    }
    let finals = (0..n).map(|_| r.gen_bool(0.4)).collect();
    Nfa::new((0..n).map(|q| format!("s{q}")).collect(), 0, alphabet.to_vec(), finals, delta).expect("valid by construction")
}
