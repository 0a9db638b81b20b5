//! Shared oracles for the integration tests.
#![allow(dead_code)]

use urgency::monoid::SynMonoid;
use urgency::nf::Normalizer;
use urgency::term::sandwich;
use urgency::{Caps, Grammar, Term};

/// All contexts `w . _ . y`: `w` a class representative, `y` an Eve choice over
/// at most two Adam choices over class representatives.
pub fn contexts(m: &SynMonoid) -> Vec<Term> {
    let reps: Vec<Term> = m.classes().map(|c| m.rep_term(c)).collect();
    let k = reps.len();
    let adam: Vec<Term> = (1u32..(1 << k))
        .map(|mask| Term::adam(1, (0..k).filter(|i| mask >> i & 1 == 1).map(|i| reps[i].clone())))
        .collect();
    let mut ys = Vec::new();
    for i in 0..adam.len() {
        ys.push(Term::eve(1, [adam[i].clone()]));
        for j in i + 1..adam.len() {
            ys.push(Term::eve(1, [adam[i].clone(), adam[j].clone()]));
        }
    }
    let mut out = Vec::new();
    for w in &reps {
        for y in &ys {
            out.push(sandwich(w, y));
        }
    }
    out
}

pub fn max_adam_set(g: &Grammar, m: &SynMonoid, t: &Term) -> usize {
    let mut nz = Normalizer::new(g, m, &Caps::default());
    let x = nz.normalize(t).unwrap();
    nz.node(x).children().iter().map(|&a| nz.node(a).children().len()).max().unwrap()
}
