//! Monotone circuit value as a preorder query `w ⊑_O @P_n` with `O = {w}`.

use serde::{Deserialize, Serialize};

use super::Encoding;
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::term::{Grammar, Sym, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    True,
    False,
    And,
    Or,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Gate {
    pub op: Op,
    #[serde(default)]
    pub inputs: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Circuit {
    #[serde(default = "one")]
    pub schema_version: u32,
    pub gates: Vec<Gate>,
}

fn one() -> u32 {
    1
}

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Result<Circuit> {
        let c = Circuit { schema_version: 1, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let c: Circuit = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn validate(&self) -> Result<()> {
        if self.gates.is_empty() {
            return Err(Error::Invalid("circuit has no gates".into()));
        }
        for (i, g) in self.gates.iter().enumerate() {
            match g.op {
                Op::True | Op::False if !g.inputs.is_empty() => {
                    return Err(Error::Invalid(format!("constant gate {i} has inputs")))
                }
                Op::And | Op::Or if g.inputs.is_empty() => return Err(Error::Invalid(format!("gate {i} has no inputs"))),
                _ => {}
            }
            if let Some(&j) = g.inputs.iter().find(|&&j| j >= i) {
                return Err(Error::Invalid(format!("gate {i} reads gate {j}, which is not earlier")));
            }
        }
        Ok(())
    }

    pub fn eval(&self) -> bool {
        let mut v = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let x = match g.op {
                Op::True => true,
                Op::False => false,
                Op::And => g.inputs.iter().all(|&j| v[j]),
                Op::Or => g.inputs.iter().any(|&j| v[j]),
            };
            v.push(x);
        }
        v[self.gates.len() - 1]
    }
}

pub fn encode(c: &Circuit) -> Result<Encoding> {
    c.validate()?;
    let name = |i: usize| format!("P{i}");
    let mut g = Grammar::empty(1);
    for (i, gate) in c.gates.iter().enumerate() {
        let inputs = gate.inputs.iter().map(|&j| Term::var(&name(j)));
        let body = match gate.op {
            Op::True => Term::letter("w"),
            Op::False => Term::err(),
            Op::And => Term::adam(1, inputs),
            Op::Or => Term::eve(1, inputs),
        };
        g.define(&name(i), body);
    }
    let w = vec![Sym::from("w")];
    Ok(Encoding {
        grammar: g,
        start: Term::var(&name(c.gates.len() - 1)),
        objective: Dfa::finite(w.clone(), &[w])?,
        query: Some(Term::letter("w")),
    })
}

pub fn random(r: &mut crate::gen::Rng8, size: usize) -> Circuit {
    use rand::Rng;
    let mut gates = Vec::with_capacity(size);
    for i in 0..size {
        let op = if i < 2 || r.gen_bool(0.2) {
            if r.gen_bool(0.5) {
                Op::True
            } else {
                Op::False
            }
        } else if r.gen_bool(0.5) {
            Op::And
        } else {
            Op::Or
        };
        let inputs = match op {
            Op::True | Op::False => vec![],
            _ => {
                let k = r.gen_range(1..=2);
                (0..k).map(|_| r.gen_range(0..i)).collect()
            }
        };
        gates.push(Gate { op, inputs });
    }
    Circuit::new(gates).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{decide_preorder, Options};

    fn query(c: &Circuit) -> bool {
        let e = encode(c).unwrap();
        decide_preorder(&e.grammar, e.query.as_ref().unwrap(), &e.start, &e.objective, &Options::default())
            .unwrap()
            .holds
    }

    #[test]
    fn constants_and_conjunction() {
        let t = Circuit::new(vec![Gate { op: Op::True, inputs: vec![] }]).unwrap();
        assert!(query(&t));
        let c = Circuit::new(vec![
            Gate { op: Op::False, inputs: vec![] },
            Gate { op: Op::True, inputs: vec![] },
            Gate { op: Op::And, inputs: vec![0, 1] },
        ])
        .unwrap();
        assert!(!c.eval());
        assert!(!query(&c));
    }

    #[test]
    fn random_circuits_match_evaluation() {
        let mut r = crate::gen::rng(5);
        for _ in 0..30 {
            let c = random(&mut r, 8);
            assert_eq!(query(&c), c.eval());
        }
    }
}
