//! Pushdown games with a regular observation of transition labels.

use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;
use serde_json::Value;

use super::{nt, Encoding};
use crate::dfa::{value_name, Dfa};
use crate::error::{Caps, Error, Result};
use crate::monoid::{ClassId, SynMonoid};
use crate::nf::Normalizer;
use crate::term::{Grammar, Player, Sym, Term, Word};

#[derive(Clone, Debug)]
pub struct Pds {
    pub states: Vec<String>,
    pub owners: Vec<Player>,
    pub initial: usize,
    pub stack: Vec<String>,
    pub initial_stack: usize,
    pub finals: Vec<bool>,
    /// `(q, γ, label, p)`
    pub internal: Vec<(usize, usize, Option<Sym>, usize)>,
    /// `(q, γ, label, p, γ')`: replaces `γ` by `γ'γ`.
    pub push: Vec<(usize, usize, Option<Sym>, usize, usize)>,
    /// `(q, γ, label, p)`
    pub pop: Vec<(usize, usize, Option<Sym>, usize)>,
    pub observation: Dfa,
}

#[derive(Deserialize)]
struct PdsJson {
    states: Vec<Value>,
    #[serde(default)]
    owners: BTreeMap<String, String>,
    initial: Value,
    stack_alphabet: Vec<Value>,
    initial_stack: Value,
    finals: Vec<Value>,
    #[serde(default)]
    internal: Vec<(Value, Value, Option<String>, Value)>,
    #[serde(default)]
    push: Vec<(Value, Value, Option<String>, Value, Value)>,
    #[serde(default)]
    pop: Vec<(Value, Value, Option<String>, Value)>,
    observation: Value,
}

fn lookup(names: &[String], v: &Value, what: &str) -> Result<usize> {
    let n = value_name(v);
    names
        .iter()
        .position(|s| *s == n)
        .ok_or_else(|| Error::InvalidAutomaton(format!("unknown {what} `{n}`")))
}

impl Pds {
    pub fn from_json(text: &str) -> Result<Pds> {
        let j: PdsJson = serde_json::from_str(text)?;
        let states: Vec<String> = j.states.iter().map(value_name).collect();
        let stack: Vec<String> = j.stack_alphabet.iter().map(value_name).collect();
        let st = |v: &Value| lookup(&states, v, "state");
        let gm = |v: &Value| lookup(&stack, v, "stack symbol");
        let mut owners = vec![Player::Eve; states.len()];
        for (s, o) in &j.owners {
            let q = st(&Value::String(s.clone()))?;
            owners[q] = match o.to_ascii_lowercase().as_str() {
                "eve" => Player::Eve,
                "adam" => Player::Adam,
                _ => return Err(Error::Invalid(format!("owner `{o}` is neither eve nor adam"))),
            };
        }
        let mut finals = vec![false; states.len()];
        for f in &j.finals {
            finals[st(f)?] = true;
        }
        let label = |a: &Option<String>| a.as_deref().map(Sym::from);
        let observation = match &j.observation {
            Value::String(s) => {
                let labels = j
                    .internal
                    .iter()
                    .map(|t| &t.2)
                    .chain(j.push.iter().map(|t| &t.2))
                    .chain(j.pop.iter().map(|t| &t.2))
                    .flatten()
                    .map(|a| Sym::from(a.as_str()))
                    .collect();
                Dfa::resolve(s, &labels)?
            }
            other => Dfa::from_json(&other.to_string())?,
        };
        let pds = Pds {
            initial: st(&j.initial)?,
            initial_stack: gm(&j.initial_stack)?,
            internal: j
                .internal
                .iter()
                .map(|(q, g, a, p)| Ok((st(q)?, gm(g)?, label(a), st(p)?)))
                .collect::<Result<_>>()?,
            push: j
                .push
                .iter()
                .map(|(q, g, a, p, g2)| Ok((st(q)?, gm(g)?, label(a), st(p)?, gm(g2)?)))
                .collect::<Result<_>>()?,
            pop: j
                .pop
                .iter()
                .map(|(q, g, a, p)| Ok((st(q)?, gm(g)?, label(a), st(p)?)))
                .collect::<Result<_>>()?,
            states,
            owners,
            stack,
            finals,
            observation,
        };
        for a in pds.labels().into_iter().flatten() {
            if pds.observation.letter_index(&a).is_none() {
                return Err(Error::AlphabetMismatch(format!("label `{a}` is not in the observation alphabet")));
            }
        }
        Ok(pds)
    }

    fn labels(&self) -> Vec<Option<Sym>> {
        self.internal
            .iter()
            .map(|t| t.2.clone())
            .chain(self.push.iter().map(|t| t.2.clone()))
            .chain(self.pop.iter().map(|t| t.2.clone()))
            .collect()
    }

    fn letter(&self, q: usize, a: &Option<Sym>, p: usize) -> Sym {
        Sym::from(format!(
            "{}:{}:{}",
            self.states[q],
            a.as_deref().unwrap_or(""),
            self.states[p]
        ))
    }

    fn moves(&self) -> Vec<(usize, Option<Sym>, usize)> {
        let mut v: Vec<(usize, Option<Sym>, usize)> = self
            .internal
            .iter()
            .map(|(q, _, a, p)| (*q, a.clone(), *p))
            .chain(self.push.iter().map(|(q, _, a, p, _)| (*q, a.clone(), *p)))
            .chain(self.pop.iter().map(|(q, _, a, p)| (*q, a.clone(), *p)))
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

fn proc_name(q: usize, g: usize) -> Sym {
    Sym::from(format!("N{q}_{g}"))
}

/// Objective: the letters form a path from the initial state whose labels
/// the observation accepts and which ends in a final state.
fn path_objective(p: &Pds) -> (Dfa, HashMap<Sym, (usize, Option<Sym>, usize)>) {
    let n = p.states.len();
    let o = &p.observation;
    let k = o.len();
    let dead = n * k;
    let moves = p.moves();
    let alphabet: Vec<Sym> = moves.iter().map(|(q, a, r)| p.letter(*q, a, *r)).collect();
    let decode = alphabet.iter().cloned().zip(moves.iter().cloned()).collect();
    let mut names = Vec::with_capacity(dead + 1);
    for q in 0..n {
        for s in 0..k {
            names.push(format!("{}/{}", p.states[q], o.name(s)));
        }
    }
    names.push("dead".into());
    let delta = (0..=dead)
        .map(|x| {
            moves
                .iter()
                .map(|(q, a, r)| {
                    if x == dead || x / k != *q {
                        return dead;
                    }
                    let s = x % k;
                    let s2 = match a {
                        Some(a) => o.step_sym(s, a).expect("labels checked"),
                        None => s,
                    };
                    r * k + s2
                })
                .collect()
        })
        .collect();
    let finals = (0..=dead)
        .map(|x| x != dead && p.finals[x / k] && o.is_final(x % k))
        .collect();
    let dfa = Dfa::new(names, alphabet, delta, p.initial * k + o.initial(), finals).expect("total by construction");
    (dfa, decode)
}

/// Encoding at urgency 1: `N^q_γ` runs the procedure for top symbol `γ` from
/// `q` until it is popped; `R_γ` lets Eve guess the return state.
pub fn encode(p: &Pds) -> Result<Encoding> {
    let (objective, _) = path_objective(p);
    let mut g = Grammar::empty(1);
    for (gi, _) in p.stack.iter().enumerate() {
        g.define(&nt("R", gi), Term::eve(1, (0..p.states.len()).map(|q| Term::var(&proc_name(q, gi)))));
        for q in 0..p.states.len() {
            let mut ops = Vec::new();
            for (_, _, a, r) in p.internal.iter().filter(|t| t.0 == q && t.1 == gi) {
                ops.push(Term::concat(Term::letter_sym(p.letter(q, a, *r)), Term::var(&proc_name(*r, gi))));
            }
            for (_, _, a, r, g2) in p.push.iter().filter(|t| t.0 == q && t.1 == gi) {
                ops.push(Term::seq([
                    Term::letter_sym(p.letter(q, a, *r)),
                    Term::var(&proc_name(*r, *g2)),
                    Term::var(&nt("R", gi)),
                ]));
            }
            for (_, _, a, r) in p.pop.iter().filter(|t| t.0 == q && t.1 == gi) {
                ops.push(Term::letter_sym(p.letter(q, a, *r)));
            }
            g.define(&proc_name(q, gi), Term::choice_or_err(p.owners[q], 1, ops));
        }
    }
    Ok(Encoding {
        grammar: g,
        start: Term::var(&proc_name(p.initial, p.initial_stack)),
        objective,
        query: None,
    })
}

/// One summary triple: source state, observation class of the labels, target state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub from: String,
    pub observation: String,
    pub to: String,
}

#[derive(Clone, Debug)]
pub struct Summary {
    pub state: String,
    pub top: String,
    /// One Adam-set of triples per Eve option.
    pub options: Vec<Vec<Triple>>,
}

/// Summaries read off the normal forms of every `N^q_γ`.
pub fn summaries(p: &Pds, caps: &Caps) -> Result<Vec<Summary>> {
    let enc = encode(p)?;
    let (_, decode) = path_objective(p);
    let m = SynMonoid::build(&enc.objective, caps.monoid_classes)?;
    let om = SynMonoid::build(&p.observation, caps.monoid_classes)?;
    let mut nz = Normalizer::new(&enc.grammar, &m, caps).with_prune(true);
    let mut out = Vec::new();
    for (gi, gname) in p.stack.iter().enumerate() {
        for q in 0..p.states.len() {
            let x = nz.normalize(&Term::var(&proc_name(q, gi)))?;
            let mut options = Vec::new();
            for &a in nz.node(x).children() {
                let mut triples = Vec::new();
                for &leaf in nz.node(a).children() {
                    let crate::nf::Node::Leaf(c) = nz.node(leaf) else {
                        unreachable!("level-1 normal form")
                    };
                    if *c == ClassId::ZERO {
                        continue;
                    }
                    let Word::Letters(w) = m.rep(*c) else { continue };
                    let (Some(first), Some(last)) = (w.first(), w.last()) else {
                        continue;
                    };
                    let labels: Vec<Sym> = w.iter().filter_map(|l| decode[l].1.clone()).collect();
                    triples.push(Triple {
                        from: p.states[decode[first].0].clone(),
                        observation: om.rep_text(om.class_of_letters(&labels)?),
                        to: p.states[decode[last].2].clone(),
                    });
                }
                triples.sort();
                triples.dedup();
                if !triples.is_empty() {
                    options.push(triples);
                }
            }
            out.push(Summary {
                state: p.states[q].clone(),
                top: gname.clone(),
                options,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::wins;
    use super::*;

    #[test]
    fn one_step() {
        let p = Pds::from_json(
            r#"{"states":["q","f"],"initial":"q","stack_alphabet":["z"],"initial_stack":"z","finals":["f"],
                "internal":[["q","z","t","f"]],"pop":[["f","z",null,"f"]],"observation":"terminate"}"#,
        )
        .unwrap();
        assert!(wins(&encode(&p).unwrap()));
        let s = summaries(&p, &Caps::default()).unwrap();
        let q = s.iter().find(|s| s.state == "q").unwrap();
        assert_eq!(q.options.len(), 1);
        assert_eq!(q.options[0][0].from, "q");
        assert_eq!(q.options[0][0].to, "f");
    }

    #[test]
    fn anbn_generator() {
        // push an `a` per step, switch, pop with `b` per step
        let p = Pds::from_json(
            r#"{"states":["up","down","f"],"initial":"up","stack_alphabet":["z","x"],"initial_stack":"z",
                "finals":["f"],
                "push":[["up","z","a","up","x"],["up","x","a","up","x"]],
                "internal":[["up","x","b","down"]],
                "pop":[["down","x","b","down"],["down","z",null,"f"]],
                "observation":{"states":[0,1,2],"initial":0,"alphabet":["a","b"],"finals":[0,1],
                  "delta":[[0,"a",0],[0,"b",1],[1,"a",2],[1,"b",1],[2,"a",2],[2,"b",2]]}}"#,
        )
        .unwrap();
        assert!(wins(&encode(&p).unwrap()));
        for s in summaries(&p, &Caps::default()).unwrap() {
            for t in s.options.iter().flatten() {
                assert_eq!(t.from, s.state);
            }
        }
    }
}
