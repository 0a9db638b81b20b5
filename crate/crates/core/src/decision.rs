//! Deciding the objective-specialized contextual preorder.
//!
//! Methods: domination of normal forms (exact for right-separating
//! objectives, sound in general), exact context-type enumeration for N ≤ 2,
//! characteristic terms over the arrow translation for N = 1, and a generic
//! capped context enumeration.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::dfa::Dfa;
use crate::error::{Caps, Error, Result};
use crate::monoid::{ClassId, SynMonoid};
use crate::nf::{NfId, Node, Normalizer};
use crate::term::{plug, sandwich, Grammar, Kind, Player, Sym, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Method {
    #[default]
    Auto,
    RightSep,
    Char,
    Enum,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        Ok(match s {
            "auto" => Method::Auto,
            "rightsep" => Method::RightSep,
            "char" => Method::Char,
            "enum" => Method::Enum,
            _ => return Err(Error::Invalid(format!("unknown method `{s}`"))),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::RightSep => "rightsep",
            Method::Char => "char",
            Method::Enum => "enum",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub method: Method,
    pub caps: Caps,
    pub prune: bool,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub holds: bool,
    /// Procedure that produced the answer.
    pub method: &'static str,
    /// A context `C` with `C[t]` won and `C[t']` lost, checked on normal forms.
    pub witness: Option<Term>,
}

/// Arrow-translated system over state-pair letters.
#[derive(Clone, Debug)]
pub struct ArrowSystem {
    pub grammar: Grammar,
    pub term: Term,
    pub objective: Dfa,
}

pub fn pair_letter(o: &Dfa, q: usize, p: usize) -> Sym {
    Sym::from(format!("{}>{}", o.name(q), o.name(p)))
}

/// Objective over state pairs: `(q, p)` moves from `q` to `p` and from any other state to a failure sink.
pub fn arrow_objective(o: &Dfa) -> Dfa {
    let n = o.len();
    let mut fail = "fail".to_string();
    while o.state_index(&fail).is_some() {
        fail.push('\'');
    }
    let mut names: Vec<String> = (0..n).map(|q| o.name(q).to_string()).collect();
    names.push(fail);
    let alphabet: Vec<Sym> = (0..n).flat_map(|q| (0..n).map(move |p| (q, p))).map(|(q, p)| pair_letter(o, q, p)).collect();
    let delta = (0..=n)
        .map(|s| {
            (0..n)
                .flat_map(|q| (0..n).map(move |p| if s == q { p } else { n }))
                .collect()
        })
        .collect();
    let finals = (0..=n).map(|q| q < n && o.is_final(q)).collect();
    Dfa::new(names, alphabet, delta, o.initial(), finals).expect("arrow objective is total")
}

pub fn arrow_term(t: &Term, o: &Dfa) -> Result<Term> {
    Ok(match t.kind() {
        Kind::Letter(a) => {
            let ai = o.letter_index(a).ok_or_else(|| Error::UnknownLetter(a.to_string()))?;
            Term::eve(1, (0..o.len()).map(|q| Term::letter_sym(pair_letter(o, q, o.step(q, ai)))))
        }
        Kind::Skip | Kind::Err | Kind::Var(_) => t.clone(),
        Kind::Concat(a, b) => Term::concat(arrow_term(a, o)?, arrow_term(b, o)?),
        Kind::Choice(p, u, ops) => Term::choice(*p, *u, ops.iter().map(|s| arrow_term(s, o)).collect::<Result<Vec<_>>>()?),
    })
}

pub fn arrow_translate(g: &Grammar, t: &Term, o: &Dfa) -> Result<ArrowSystem> {
    g.check_term(t)?;
    let mut grammar = Grammar::empty(g.max_urgency);
    for (x, body) in &g.defs {
        grammar.define(x, arrow_term(body, o)?);
    }
    Ok(ArrowSystem {
        grammar,
        term: arrow_term(t, o)?,
        objective: arrow_objective(o),
    })
}

/// Bit set over small indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| (0..64).filter(move |i| w >> i & 1 == 1).map(move |i| k * 64 + i))
    }
}

/// `∀i [Z nonempty on S_i] ∃i' ∀s'' ∈ S'_i' ∃s ∈ S_i: Z(s) ⊆ Z(s'')`; returns a failing `i`.
fn forall_exists(left: &[Vec<Bits>], right: &[Vec<Bits>]) -> Option<usize> {
    left.iter().position(|si| {
        si.iter().all(|z| !z.is_empty())
            && !right
                .iter()
                .any(|sj| sj.iter().all(|z2| si.iter().any(|z| z.subset(z2))))
    })
}

/// Eve or Adam choice that collapses singletons.
fn choice1(p: Player, u: u32, ops: Vec<Term>) -> Term {
    let mut ops = ops;
    ops.sort();
    ops.dedup();
    if ops.len() == 1 {
        ops.pop().unwrap()
    } else {
        Term::choice(p, u, ops)
    }
}

fn adam_sets(nz: &Normalizer, x: NfId) -> Vec<Vec<NfId>> {
    nz.node(x)
        .children()
        .iter()
        .map(|&a| nz.node(a).children().to_vec())
        .collect()
}

fn leaf_class(nz: &Normalizer, x: NfId) -> ClassId {
    match nz.node(x) {
        Node::Leaf(c) => *c,
        _ => unreachable!("level-0 node"),
    }
}

struct Ctx<'a> {
    g: &'a Grammar,
    t: &'a Term,
    t2: &'a Term,
    m: &'a SynMonoid,
    opts: &'a Options,
}

impl Ctx<'_> {
    fn normalizer(&self) -> Normalizer<'_> {
        Normalizer::new(self.g, self.m, &self.opts.caps).with_prune(self.opts.prune)
    }

    /// Whether `c` separates `t` from `t'`.
    fn separates(&self, nz: &mut Normalizer, c: &Term) -> Result<bool> {
        let a = nz.normalize(&plug(c, self.t))?;
        let b = nz.normalize(&plug(c, self.t2))?;
        Ok(nz.wins(a) && !nz.wins(b))
    }

    fn validated(&self, nz: &mut Normalizer, c: Term) -> Result<Option<Term>> {
        Ok(self.separates(nz, &c)?.then_some(c))
    }

    fn decision(&self, holds: bool, method: &'static str, witness: Option<Term>) -> Result<Decision> {
        let witness = if holds {
            None
        } else {
            // prefer a short context when one exists
            let mut nz = self.normalizer();
            match search_witness(self, &mut nz)? {
                Some(c) => Some(c),
                None => match witness {
                    Some(c) => self.validated(&mut nz, c)?,
                    None => None,
                },
            }
        };
        Ok(Decision { holds, method, witness })
    }
}

fn small_reps(m: &SynMonoid, limit: usize) -> Vec<ClassId> {
    let mut cs: Vec<ClassId> = m.classes().filter(|&c| c != ClassId::ZERO).collect();
    cs.sort_by_key(|&c| (m.rep_text(c).len(), c));
    cs.truncate(limit);
    cs
}

/// Contexts `l · • · r` with `l`, `r` among words and binary choices over words.
fn search_witness(cx: &Ctx, nz: &mut Normalizer) -> Result<Option<Term>> {
    let m = cx.m;
    let n = cx.g.max_urgency;
    let reps: Vec<Term> = small_reps(m, 8).into_iter().map(|c| m.rep_term(c)).collect();
    let mut sides = vec![Term::skip()];
    sides.extend(reps.iter().filter(|r| !matches!(r.kind(), Kind::Skip)).cloned());
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            for u in 1..=n {
                for p in [Player::Adam, Player::Eve] {
                    sides.push(Term::choice(p, u, [reps[i].clone(), reps[j].clone()]));
                }
            }
        }
    }
    let x = nz.normalize(cx.t)?;
    let y = nz.normalize(cx.t2)?;
    let mut nsides = Vec::with_capacity(sides.len());
    for s in &sides {
        nsides.push(nz.normalize(s)?);
    }
    for (r, &nr) in sides.iter().zip(&nsides) {
        for (l, &nl) in sides.iter().zip(&nsides) {
            let lx = nz.concat(nl, x)?;
            let a = nz.concat(lx, nr)?;
            if !nz.wins(a) {
                continue;
            }
            let ly = nz.concat(nl, y)?;
            let b = nz.concat(ly, nr)?;
            if !nz.wins(b) {
                let c = sandwich(l, r);
                if cx.separates(nz, &c)? {
                    return Ok(Some(c));
                }
            }
        }
    }
    Ok(None)
}

/// Decides `t ⊑_O t'`.
pub fn decide_preorder(g: &Grammar, t: &Term, t2: &Term, o: &Dfa, opts: &Options) -> Result<Decision> {
    g.check_term(t)?;
    g.check_term(t2)?;
    let m = SynMonoid::build(o, opts.caps.monoid_classes)?;
    for a in t.letters().into_iter().chain(t2.letters()) {
        m.generator(&a)?;
    }
    let cx = Ctx { g, t, t2, m: &m, opts };
    let n = g.max_urgency;
    match opts.method {
        Method::RightSep => {
            if !m.is_right_separating() {
                return Err(Error::Unsupported("objective is not right-separating; use --method auto".into()));
            }
            by_domination(&cx)
        }
        Method::Char => by_char_terms(&cx, o),
        Method::Enum => by_enumeration(&cx),
        Method::Auto => {
            if m.is_right_separating() {
                return by_domination(&cx);
            }
            let d = by_domination(&cx)?;
            if d.holds {
                return Ok(d);
            }
            if n >= 3 {
                let mut nz = cx.normalizer();
                if let Some(c) = search_witness(&cx, &mut nz)? {
                    return Ok(Decision {
                        holds: false,
                        method: "witness-search",
                        witness: Some(c),
                    });
                }
            }
            by_enumeration(&cx)
        }
    }
}

pub fn decide_equiv(g: &Grammar, t: &Term, t2: &Term, o: &Dfa, opts: &Options) -> Result<(Decision, Decision)> {
    let a = decide_preorder(g, t, t2, o, opts)?;
    let b = decide_preorder(g, t2, t, o, opts)?;
    Ok((a, b))
}

fn by_domination(cx: &Ctx) -> Result<Decision> {
    let mut nz = cx.normalizer();
    let x = nz.normalize(cx.t)?;
    let y = nz.normalize(cx.t2)?;
    let holds = nz.dominates(x, y)?;
    cx.decision(holds, "domination", None)
}

fn by_enumeration(cx: &Ctx) -> Result<Decision> {
    match cx.g.max_urgency {
        1 => enum_level1(cx),
        2 => enum_level2(cx),
        _ => brute_force(cx),
    }
}

/// Exact procedure for N = 1: contexts `w · • · y` are characterized by the
/// class of `w` and the Adam-sets of `y`.
fn enum_level1(cx: &Ctx) -> Result<Decision> {
    let m = cx.m;
    let mut nz = cx.normalizer();
    let x = nz.normalize(cx.t)?;
    let y = nz.normalize(cx.t2)?;
    let sx: Vec<Vec<ClassId>> = adam_sets(&nz, x).iter().map(|a| a.iter().map(|&l| leaf_class(&nz, l)).collect()).collect();
    let sy: Vec<Vec<ClassId>> = adam_sets(&nz, y).iter().map(|a| a.iter().map(|&l| leaf_class(&nz, l)).collect()).collect();
    let classes: Vec<ClassId> = m.classes().collect();
    for w in m.classes().filter(|&w| w != ClassId::ZERO) {
        let z = |s: ClassId| {
            let ws = m.mul(w, s);
            let mut b = Bits::new(classes.len());
            for &c in &classes {
                if m.accepts(m.mul(ws, c)) {
                    b.set(c.index());
                }
            }
            b
        };
        let zx: Vec<Vec<Bits>> = sx.iter().map(|a| a.iter().map(|&s| z(s)).collect()).collect();
        let zy: Vec<Vec<Bits>> = sy.iter().map(|a| a.iter().map(|&s| z(s)).collect()).collect();
        if let Some(i) = forall_exists(&zx, &zy) {
            let right = choice1(
                Player::Eve,
                1,
                zx[i]
                    .iter()
                    .map(|b| choice1(Player::Adam, 1, b.ones().map(|c| m.rep_term(ClassId(c as u32))).collect()))
                    .collect(),
            );
            let c = sandwich(&m.rep_term(w), &right);
            return cx.decision(false, "enum", Some(c));
        }
    }
    cx.decision(true, "enum", None)
}

/// Sets of minimal-DFA states as bit masks.
type States = u64;

/// Realizable winning regions of level-1 right contexts: unions of
/// intersections of `{q : f_c(q) ∈ F}`, each with an Eve-set of Adam-sets of classes realizing it.
fn regions(m: &SynMonoid, cap: usize) -> Result<Vec<(States, Vec<Vec<ClassId>>)>> {
    let d = m.dfa();
    if d.len() > 64 {
        return Err(Error::resource("objective states for state-set enumeration", d.len(), 64));
    }
    let base: Vec<(States, ClassId)> = m
        .classes()
        .filter(|&c| c != ClassId::ZERO)
        .map(|c| {
            let mut mask = 0;
            for q in 0..d.len() {
                if m.apply(c, q).is_some_and(|p| d.is_final(p)) {
                    mask |= 1 << q;
                }
            }
            (mask, c)
        })
        .collect();
    let mut inter: HashMap<States, Vec<ClassId>> = HashMap::new();
    let mut work: Vec<States> = Vec::new();
    for &(mask, c) in &base {
        if let std::collections::hash_map::Entry::Vacant(e) = inter.entry(mask) {
            e.insert(vec![c]);
            work.push(mask);
        }
    }
    while let Some(r) = work.pop() {
        for &(mask, c) in &base {
            let k = r & mask;
            if !inter.contains_key(&k) {
                let mut rep = inter[&r].clone();
                rep.push(c);
                inter.insert(k, rep);
                work.push(k);
                if inter.len() > cap {
                    return Err(Error::resource("contexts", format!("more than {cap} state sets"), cap as u64));
                }
            }
        }
    }
    let gens: Vec<(States, Vec<ClassId>)> = inter.into_iter().collect();
    let mut union: HashMap<States, Vec<Vec<ClassId>>> = HashMap::new();
    let mut work: Vec<States> = Vec::new();
    for (mask, rep) in &gens {
        if !union.contains_key(mask) {
            union.insert(*mask, vec![rep.clone()]);
            work.push(*mask);
        }
    }
    while let Some(r) = work.pop() {
        for (mask, rep) in &gens {
            let k = r | mask;
            if !union.contains_key(&k) {
                let mut e = union[&r].clone();
                e.push(rep.clone());
                union.insert(k, e);
                work.push(k);
                if union.len() > cap {
                    return Err(Error::resource("contexts", format!("more than {cap} state sets"), cap as u64));
                }
            }
        }
    }
    let mut out: Vec<(States, Vec<Vec<ClassId>>)> = union.into_iter().collect();
    out.sort();
    Ok(out)
}

/// States from which a level-1 normal form reaches `r`.
fn acc(m: &SynMonoid, nz: &Normalizer, x1: NfId, r: States) -> States {
    let n = m.dfa().len();
    let mut out = 0;
    for a in nz.node(x1).children() {
        let mut inter: States = if n == 64 { !0 } else { (1 << n) - 1 };
        for &l in nz.node(*a).children() {
            let c = leaf_class(nz, l);
            let mut pre = 0;
            for q in 0..n {
                if m.apply(c, q).is_some_and(|p| r >> p & 1 == 1) {
                    pre |= 1 << q;
                }
            }
            inter &= pre;
        }
        out |= inter;
    }
    out
}

/// Antichains of non-empty masks, each generating an up-set.
fn antichains(elems: &[States], cap: usize) -> Result<Vec<Vec<States>>> {
    fn go(elems: &[States], i: usize, cur: &mut Vec<States>, out: &mut Vec<Vec<States>>, cap: usize) -> Result<()> {
        if i == elems.len() {
            if !cur.is_empty() {
                if out.len() >= cap {
                    return Err(Error::resource("contexts", format!("more than {cap} left-context types"), cap as u64));
                }
                out.push(cur.clone());
            }
            return Ok(());
        }
        go(elems, i + 1, cur, out, cap)?;
        let e = elems[i];
        if cur.iter().all(|&c| c & e != c && c & e != e) {
            cur.push(e);
            go(elems, i + 1, cur, out, cap)?;
            cur.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(elems, 0, &mut Vec::new(), &mut out, cap)?;
    Ok(out)
}

/// Exact procedure for N = 2. Right contexts matter through the state sets
/// from which their level-1 parts win; left contexts through an up-set of
/// state sets reachable by a level-1 choice over words.
fn enum_level2(cx: &Ctx) -> Result<Decision> {
    let m = cx.m;
    let caps = &cx.opts.caps;
    let d = m.dfa();
    let fam = regions(m, caps.contexts)?;
    let mut nz = cx.normalizer();
    let x = nz.normalize(cx.t)?;
    let y = nz.normalize(cx.t2)?;
    let sx = adam_sets(&nz, x);
    let sy = adam_sets(&nz, y);
    let mut level1: BTreeSet<NfId> = BTreeSet::new();
    for a in sx.iter().chain(&sy) {
        level1.extend(a.iter().copied());
    }
    // one representative class per state reachable in one word
    let mut via: HashMap<usize, ClassId> = HashMap::new();
    for c in small_reps(m, usize::MAX) {
        if let Some(q) = m.apply(c, d.initial()) {
            via.entry(q).or_insert(c);
        }
    }
    let v: States = via.keys().fold(0, |acc, &q| acc | 1 << q);
    let mut accs: HashMap<NfId, Vec<States>> = HashMap::new();
    let mut types: BTreeSet<States> = BTreeSet::new();
    for &x1 in &level1 {
        let row: Vec<States> = fam.iter().map(|(r, _)| acc(m, &nz, x1, *r) & v).collect();
        types.extend(row.iter().copied().filter(|&s| s != 0));
        accs.insert(x1, row);
    }
    let elems: Vec<States> = types.into_iter().collect();
    for up in antichains(&elems, caps.contexts)? {
        let z = |x1: NfId| {
            let mut b = Bits::new(fam.len());
            for (k, &s) in accs[&x1].iter().enumerate() {
                if up.iter().any(|&a| a & s == a) {
                    b.set(k);
                }
            }
            b
        };
        let zx: Vec<Vec<Bits>> = sx.iter().map(|a| a.iter().map(|&s| z(s)).collect()).collect();
        let zy: Vec<Vec<Bits>> = sy.iter().map(|a| a.iter().map(|&s| z(s)).collect()).collect();
        if let Some(i) = forall_exists(&zx, &zy) {
            let left = choice1(
                Player::Eve,
                1,
                up.iter()
                    .map(|&a| {
                        let ops = (0..64).filter(|q| a >> q & 1 == 1).map(|q| m.rep_term(via[&q])).collect();
                        choice1(Player::Adam, 1, ops)
                    })
                    .collect(),
            );
            let region_term = |k: usize| {
                let e = &fam[k].1;
                choice1(
                    Player::Eve,
                    1,
                    e.iter()
                        .map(|a| choice1(Player::Adam, 1, a.iter().map(|&c| m.rep_term(c)).collect()))
                        .collect(),
                )
            };
            let right = choice1(
                Player::Eve,
                2,
                zx[i]
                    .iter()
                    .map(|b| choice1(Player::Adam, 2, b.ones().map(region_term).collect()))
                    .collect(),
            );
            let c = sandwich(&left, &right);
            return cx.decision(false, "enum", Some(c));
        }
    }
    cx.decision(true, "enum", None)
}

/// Capped enumeration of all contexts `l · • · r` with `l` a level N-1 and
/// `r` a level N normal form.
fn brute_force(cx: &Ctx) -> Result<Decision> {
    let caps = &cx.opts.caps;
    let n = cx.g.max_urgency;
    let mut nz = cx.normalizer();
    let x = nz.normalize(cx.t)?;
    let y = nz.normalize(cx.t2)?;
    let lefts = nz.enumerate_level(n - 1, caps.nf_enum)?;
    let rights = nz.enumerate_level(n, caps.nf_enum)?;
    let total = lefts.len() as u128 * rights.len() as u128;
    if total > caps.contexts as u128 {
        return Err(Error::resource("contexts", total, caps.contexts as u64));
    }
    for &l in &lefts {
        let l = nz.lift(l, n)?;
        let lx = nz.concat(l, x)?;
        let ly = nz.concat(l, y)?;
        for &r in &rights {
            let a = nz.concat(lx, r)?;
            if !nz.wins(a) {
                continue;
            }
            let b = nz.concat(ly, r)?;
            if !nz.wins(b) {
                let c = sandwich(&nz.render(l), &nz.render(r));
                return cx.decision(false, "enum", Some(c));
            }
        }
    }
    cx.decision(true, "enum", None)
}

/// Characteristic term of a plausible level-1 context over the arrow
/// translation: the context starts in `state` and its right part wins exactly from `region`.
#[derive(Clone, Debug)]
pub struct CharTerm {
    pub state: usize,
    pub region: Vec<usize>,
    /// Adam choice over the state-pair classes in the solution space.
    pub term: Term,
    /// Witness context over the original alphabet.
    pub context: Term,
}

/// Characteristic terms for N = 1, over the minimal DFA of `o`. Contexts with
/// an empty solution space have no characteristic term and are omitted.
pub fn characteristic_terms(o: &Dfa, caps: &Caps) -> Result<Vec<CharTerm>> {
    let m = SynMonoid::build(o, caps.monoid_classes)?;
    let d = m.dfa();
    let fam = regions(&m, caps.contexts)?;
    let mut via: HashMap<usize, ClassId> = HashMap::new();
    for c in small_reps(&m, usize::MAX) {
        if let Some(q) = m.apply(c, d.initial()) {
            via.entry(q).or_insert(c);
        }
    }
    let mut states: Vec<usize> = via.keys().copied().collect();
    states.sort();
    let mut out = Vec::new();
    for &q in &states {
        for (r, rep) in &fam {
            let region: Vec<usize> = (0..d.len()).filter(|p| r >> p & 1 == 1).collect();
            if region.is_empty() {
                continue;
            }
            let mut ops: Vec<Term> = region.iter().map(|&p| Term::letter_sym(pair_letter(d, q, p))).collect();
            if r >> q & 1 == 1 {
                ops.push(Term::skip());
            }
            let right = choice1(
                Player::Eve,
                1,
                rep.iter()
                    .map(|a| choice1(Player::Adam, 1, a.iter().map(|&c| m.rep_term(c)).collect()))
                    .collect(),
            );
            out.push(CharTerm {
                state: q,
                region,
                term: Term::adam(1, ops),
                context: sandwich(&m.rep_term(via[&q]), &right),
            });
            if out.len() > caps.contexts {
                return Err(Error::resource("contexts", out.len(), caps.contexts as u64));
            }
        }
    }
    Ok(out)
}

fn by_char_terms(cx: &Ctx, o: &Dfa) -> Result<Decision> {
    if cx.g.max_urgency != 1 {
        return Err(Error::Unsupported(
            "characteristic terms are implemented for maximal urgency 1; use --method enum".into(),
        ));
    }
    let caps = &cx.opts.caps;
    let chars = characteristic_terms(o, caps)?;
    let d = cx.m.dfa().clone();
    let ax = arrow_translate(cx.g, cx.t, &d)?;
    let ay = arrow_term(cx.t2, &d)?;
    let am = SynMonoid::build(&ax.objective, caps.monoid_classes)?;
    let mut nz = Normalizer::new(&ax.grammar, &am, caps).with_prune(cx.opts.prune);
    let x = nz.normalize(&ax.term)?;
    let y = nz.normalize(&ay)?;
    for ch in &chars {
        let c = nz.normalize(&Term::eve(1, [ch.term.clone()]))?;
        if nz.dominates(c, x)? && !nz.dominates(c, y)? {
            return cx.decision(false, "char", Some(ch.context.clone()));
        }
    }
    cx.decision(true, "char", None)
}
