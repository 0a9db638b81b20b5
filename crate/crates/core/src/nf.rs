//! Objective-specialized normal forms.
//!
//! A normal form of level `u > 0` is an Eve-set of Adam-sets of level `u-1`
//! normal forms; level 0 is a monoid class. Nodes are hash-consed in an
//! [`NfStore`] so equality is id equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Caps, Error, Result};
use crate::monoid::{ClassId, SynMonoid};
use crate::term::{Grammar, Kind, Player, Sym, Term};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NfId(u32);

impl NfId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NfId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Leaf(ClassId),
    /// Eve-set at a level; children are Adam nodes of the same level.
    Eve(u32, Vec<NfId>),
    /// Adam-set at a level; children are nodes one level down.
    Adam(u32, Vec<NfId>),
}

impl Node {
    pub fn level(&self) -> u32 {
        match self {
            Node::Leaf(_) => 0,
            Node::Eve(l, _) | Node::Adam(l, _) => *l,
        }
    }

    pub fn children(&self) -> &[NfId] {
        match self {
            Node::Leaf(_) => &[],
            Node::Eve(_, c) | Node::Adam(_, c) => c,
        }
    }
}

#[derive(Default)]
pub struct NfStore {
    nodes: Vec<Node>,
    index: HashMap<Node, NfId>,
    cap: usize,
}

impl NfStore {
    pub fn new(cap: usize) -> Self {
        NfStore {
            cap,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NfId) -> &Node {
        &self.nodes[id.index()]
    }

    fn intern(&mut self, node: Node) -> Result<NfId> {
        if let Some(&id) = self.index.get(&node) {
            return Ok(id);
        }
        if self.nodes.len() >= self.cap {
            return Err(Error::resource("normal form nodes", format!("more than {}", self.cap), self.cap as u64));
        }
        let id = NfId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        Ok(id)
    }

    fn set(&mut self, player: Player, level: u32, mut ids: Vec<NfId>) -> Result<NfId> {
        assert!(!ids.is_empty(), "normal form sets are non-empty");
        ids.sort_unstable();
        ids.dedup();
        self.intern(match player {
            Player::Eve => Node::Eve(level, ids),
            Player::Adam => Node::Adam(level, ids),
        })
    }
}

/// Node counts per level of one normal form.
#[derive(Clone, Debug, Default)]
pub struct NfStats {
    pub eve_nodes: BTreeMap<u32, usize>,
    pub adam_nodes: BTreeMap<u32, usize>,
    pub leaves: usize,
}

impl fmt::Display for NfStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, n) in self.eve_nodes.iter().rev() {
            writeln!(f, "level {l}: {n} eve-sets, {} adam-sets", self.adam_nodes.get(l).copied().unwrap_or(0))?;
        }
        write!(f, "level 0: {} classes", self.leaves)
    }
}

/// Normalizer for one grammar and objective monoid.
pub struct Normalizer<'a> {
    pub g: &'a Grammar,
    pub m: &'a SynMonoid,
    pub store: NfStore,
    n: u32,
    prune: bool,
    env: HashMap<Sym, NfId>,
    concat_memo: HashMap<(NfId, NfId), NfId>,
    down_memo: HashMap<(NfId, u32), NfId>,
    wins_memo: HashMap<NfId, bool>,
    dom_memo: HashMap<(NfId, NfId), bool>,
    prune_memo: HashMap<NfId, NfId>,
}

impl<'a> Normalizer<'a> {
    pub fn new(g: &'a Grammar, m: &'a SynMonoid, caps: &Caps) -> Self {
        Normalizer {
            g,
            m,
            store: NfStore::new(caps.nf_nodes),
            n: g.max_urgency,
            prune: false,
            env: HashMap::new(),
            concat_memo: HashMap::new(),
            down_memo: HashMap::new(),
            wins_memo: HashMap::new(),
            dom_memo: HashMap::new(),
            prune_memo: HashMap::new(),
        }
    }

    pub fn with_prune(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    pub fn max_urgency(&self) -> u32 {
        self.n
    }

    pub fn node(&self, id: NfId) -> &Node {
        self.store.node(id)
    }

    pub fn level(&self, id: NfId) -> u32 {
        self.node(id).level()
    }

    pub fn leaf(&mut self, c: ClassId) -> Result<NfId> {
        self.store.intern(Node::Leaf(c))
    }

    /// Wraps `x` in singleton Adam/Eve sets up to level `to`.
    pub fn lift(&mut self, mut x: NfId, to: u32) -> Result<NfId> {
        for l in self.level(x) + 1..=to {
            let a = self.store.set(Player::Adam, l, vec![x])?;
            x = self.store.set(Player::Eve, l, vec![a])?;
        }
        Ok(x)
    }

    pub fn nf_of_class(&mut self, c: ClassId) -> Result<NfId> {
        let l = self.leaf(c)?;
        self.lift(l, self.n)
    }

    pub fn eve_set(&mut self, level: u32, adam_sets: Vec<NfId>) -> Result<NfId> {
        let x = self.store.set(Player::Eve, level, adam_sets)?;
        self.maybe_prune(x)
    }

    pub fn adam_set(&mut self, level: u32, members: Vec<NfId>) -> Result<NfId> {
        let x = self.store.set(Player::Adam, level, members)?;
        self.maybe_prune(x)
    }

    fn check_same_level(&self, xs: &[NfId]) -> Result<u32> {
        let l = self.level(xs[0]);
        for &x in xs {
            if self.level(x) != l {
                return Err(Error::LevelMismatch(l, self.level(x)));
            }
        }
        Ok(l)
    }

    /// Union of Eve-sets.
    pub fn eve_combine(&mut self, xs: &[NfId]) -> Result<NfId> {
        let l = self.check_same_level(xs)?;
        if l == 0 {
            return Err(Error::LevelMismatch(0, 1));
        }
        let mut all = Vec::new();
        for &x in xs {
            all.extend_from_slice(self.node(x).children());
        }
        self.eve_set(l, all)
    }

    /// Adam choice over Eve-sets, distributed pairwise.
    pub fn adam_combine(&mut self, xs: &[NfId]) -> Result<NfId> {
        let l = self.check_same_level(xs)?;
        if l == 0 {
            return Err(Error::LevelMismatch(0, 1));
        }
        let mut acc = xs[0];
        for &y in &xs[1..] {
            if acc == y {
                continue;
            }
            let ea = self.node(acc).children().to_vec();
            let eb = self.node(y).children().to_vec();
            let need = ea.len() as u128 * eb.len() as u128;
            if need > self.store.cap as u128 {
                return Err(Error::resource("normal form nodes", need, self.store.cap as u64));
            }
            let mut sets = Vec::with_capacity(need as usize);
            for &a in &ea {
                for &b in &eb {
                    let mut members = self.node(a).children().to_vec();
                    members.extend_from_slice(self.node(b).children());
                    sets.push(self.adam_set(l, members)?);
                }
            }
            acc = self.eve_set(l, sets)?;
        }
        Ok(acc)
    }

    /// Sequential composition of two normal forms of the same level.
    pub fn concat(&mut self, x: NfId, y: NfId) -> Result<NfId> {
        let l = self.check_same_level(&[x, y])?;
        if let Some(&r) = self.concat_memo.get(&(x, y)) {
            return Ok(r);
        }
        let r = if l == 0 {
            let (Node::Leaf(a), Node::Leaf(b)) = (self.node(x), self.node(y)) else {
                unreachable!()
            };
            let c = self.m.mul(*a, *b);
            self.leaf(c)?
        } else {
            // x.y = E_Ax A_{t in Ax} (t.y) and t.y = E_Ay A_{s in Ay} t.s
            let ex = self.node(x).children().to_vec();
            let ey = self.node(y).children().to_vec();
            let mut options = Vec::with_capacity(ex.len());
            for &ax in &ex {
                let mut per_t = Vec::new();
                for &t in &self.node(ax).children().to_vec() {
                    let mut sets = Vec::with_capacity(ey.len());
                    for &ay in &ey {
                        let mut members = Vec::new();
                        for &s in &self.node(ay).children().to_vec() {
                            members.push(self.concat(t, s)?);
                        }
                        sets.push(self.adam_set(l, members)?);
                    }
                    per_t.push(self.eve_set(l, sets)?);
                }
                options.push(self.adam_combine(&per_t)?);
            }
            self.eve_combine(&options)?
        };
        self.concat_memo.insert((x, y), r);
        Ok(r)
    }

    /// Collapses the levels above `u` into level `u`.
    pub fn down(&mut self, x: NfId, u: u32) -> Result<NfId> {
        let l = self.level(x);
        if l == u {
            return Ok(x);
        }
        if l < u || u == 0 {
            return Err(Error::LevelMismatch(l, u));
        }
        if let Some(&r) = self.down_memo.get(&(x, u)) {
            return Ok(r);
        }
        let mut options = Vec::new();
        for a in self.node(x).children().to_vec() {
            let mut parts = Vec::new();
            for y in self.node(a).children().to_vec() {
                parts.push(self.down(y, u)?);
            }
            options.push(self.adam_combine(&parts)?);
        }
        let r = self.eve_combine(&options)?;
        self.down_memo.insert((x, u), r);
        Ok(r)
    }

    /// Choice of the given player and urgency over level-`n` normal forms.
    pub fn choice(&mut self, player: Player, u: u32, ops: &[NfId]) -> Result<NfId> {
        let mut parts = Vec::with_capacity(ops.len());
        for &o in ops {
            parts.push(self.down(o, u)?);
        }
        let r = match player {
            Player::Eve => self.eve_combine(&parts)?,
            Player::Adam => self.adam_combine(&parts)?,
        };
        self.lift(r, self.n)
    }

    /// Normal form of `t` at the grammar's maximal urgency.
    pub fn normalize(&mut self, t: &Term) -> Result<NfId> {
        self.g.check_term(t)?;
        let pending: Vec<Sym> = self
            .g
            .reachable(t)?
            .into_iter()
            .filter(|x| !self.env.contains_key(x))
            .collect();
        if !pending.is_empty() {
            self.kleene(&pending)?;
        }
        self.norm(t)
    }

    fn kleene(&mut self, xs: &[Sym]) -> Result<()> {
        let bottom = self.nf_of_class(ClassId::ZERO)?;
        for x in xs {
            self.env.insert(x.clone(), bottom);
        }
        loop {
            let mut next = Vec::with_capacity(xs.len());
            for x in xs {
                let body = self.g.def(x)?.clone();
                let v = self.norm(&body)?;
                next.push(self.eve_combine(&[self.env[x], v])?);
            }
            let mut changed = false;
            for (x, v) in xs.iter().zip(next) {
                let old = self.env[x];
                if old != v {
                    // pruned sets may differ structurally at an equivalent value
                    changed |= !(self.prune && self.dom(v, old));
                    self.env.insert(x.clone(), v);
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn norm(&mut self, t: &Term) -> Result<NfId> {
        if let Some(w) = t.word() {
            let c = self.m.class_of_word(&w)?;
            return self.nf_of_class(c);
        }
        match t.kind() {
            Kind::Var(x) => self
                .env
                .get(x)
                .copied()
                .ok_or_else(|| Error::Undefined(x.to_string())),
            Kind::Concat(a, b) => {
                let x = self.norm(a)?;
                let y = self.norm(b)?;
                self.concat(x, y)
            }
            Kind::Choice(p, u, ops) => {
                let mut xs = Vec::with_capacity(ops.len());
                for o in ops {
                    xs.push(self.norm(o)?);
                }
                self.choice(*p, *u, &xs)
            }
            Kind::Letter(_) | Kind::Skip | Kind::Err => unreachable!("words handled above"),
        }
    }

    /// Whether Eve wins the normal form from the initial state.
    pub fn wins(&mut self, x: NfId) -> bool {
        if let Some(&b) = self.wins_memo.get(&x) {
            return b;
        }
        let b = match self.node(x).clone() {
            Node::Leaf(c) => self.m.accepts(c),
            Node::Eve(_, cs) => cs.iter().any(|&c| self.wins(c)),
            Node::Adam(_, cs) => cs.iter().all(|&c| self.wins(c)),
        };
        self.wins_memo.insert(x, b);
        b
    }

    /// Domination preorder `x ≼ y`.
    pub fn dominates(&mut self, x: NfId, y: NfId) -> Result<bool> {
        if self.level(x) != self.level(y) {
            return Err(Error::LevelMismatch(self.level(x), self.level(y)));
        }
        Ok(self.dom(x, y))
    }

    fn dom(&mut self, x: NfId, y: NfId) -> bool {
        if x == y {
            return true;
        }
        if let Some(&b) = self.dom_memo.get(&(x, y)) {
            return b;
        }
        let b = match (self.node(x).clone(), self.node(y).clone()) {
            (Node::Leaf(a), Node::Leaf(b)) => self.m.leq(a, b),
            (Node::Eve(_, xs), Node::Eve(_, ys)) => xs.iter().all(|&a| ys.iter().any(|&b| self.dom(a, b))),
            (Node::Adam(_, xs), Node::Adam(_, ys)) => ys.iter().all(|&b| xs.iter().any(|&a| self.dom(a, b))),
            _ => unreachable!("levels checked"),
        };
        self.dom_memo.insert((x, y), b);
        b
    }

    fn maybe_prune(&mut self, x: NfId) -> Result<NfId> {
        if self.prune {
            self.prune_node(x)
        } else {
            Ok(x)
        }
    }

    /// Drops dominated Adam-sets from Eve-sets and dominating members from
    /// Adam-sets. On mutual domination the smaller id survives.
    pub fn prune_node(&mut self, x: NfId) -> Result<NfId> {
        if let Some(&r) = self.prune_memo.get(&x) {
            return Ok(r);
        }
        let r = match self.node(x).clone() {
            Node::Leaf(_) => x,
            Node::Eve(l, cs) | Node::Adam(l, cs) => {
                let is_eve = matches!(self.node(x), Node::Eve(..));
                let mut kids = Vec::with_capacity(cs.len());
                for c in cs {
                    kids.push(self.prune_node(c)?);
                }
                kids.sort_unstable();
                kids.dedup();
                let mut keep = Vec::new();
                for (i, &a) in kids.iter().enumerate() {
                    let redundant = kids.iter().enumerate().any(|(j, &b)| {
                        if i == j {
                            return false;
                        }
                        // `a` is redundant if some `b` is at least as good for its owner
                        let (lo, hi) = if is_eve { (a, b) } else { (b, a) };
                        self.dom(lo, hi) && (!self.dom(hi, lo) || j < i)
                    });
                    if !redundant {
                        keep.push(a);
                    }
                }
                let p = if is_eve { Player::Eve } else { Player::Adam };
                self.store.set(p, l, keep)?
            }
        };
        self.prune_memo.insert(x, r);
        self.prune_memo.insert(r, r);
        Ok(r)
    }

    /// All canonical normal forms of a level, guarded by `cap`.
    pub fn enumerate_level(&mut self, level: u32, cap: usize) -> Result<Vec<NfId>> {
        let classes: Vec<ClassId> = self.m.classes().collect();
        let mut items = Vec::with_capacity(classes.len());
        if classes.len() > cap {
            return Err(Error::resource("normal forms at level 0", classes.len(), cap as u64));
        }
        for c in classes {
            items.push(self.leaf(c)?);
        }
        for l in 1..=level {
            let n = items.len();
            // 2^(2^n - 1) - 1 non-empty sets of non-empty sets
            let inner = if n >= 64 { None } else { Some((1u128 << n) - 1) };
            let count = inner.and_then(|k| if k >= 127 { None } else { Some((1u128 << k) - 1) });
            match count {
                Some(c) if c <= cap as u128 => {}
                Some(c) => return Err(Error::resource("normal forms at level", format!("{c} at level {l}"), cap as u64)),
                None => {
                    return Err(Error::resource(
                        "normal forms at level",
                        format!("2^(2^{n}-1)-1 at level {l}"),
                        cap as u64,
                    ))
                }
            }
            let mut adam = Vec::new();
            for mask in 1u64..(1u64 << n) {
                let members: Vec<NfId> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect();
                adam.push(self.store.set(Player::Adam, l, members)?);
            }
            let k = adam.len();
            let mut next = Vec::new();
            for mask in 1u128..(1u128 << k) {
                let sets: Vec<NfId> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| adam[i]).collect();
                next.push(self.store.set(Player::Eve, l, sets)?);
            }
            items = next;
        }
        Ok(items)
    }

    /// Term with the same normal form: Eve-sets become Eve choices, Adam-sets
    /// Adam choices, both at the node's level, and leaves their representative words.
    pub fn render(&self, x: NfId) -> Term {
        match self.node(x) {
            Node::Leaf(c) => self.m.rep_term(*c),
            Node::Eve(l, cs) => Term::eve(*l, cs.iter().map(|&c| self.render(c))),
            Node::Adam(l, cs) => Term::adam(*l, cs.iter().map(|&c| self.render(c))),
        }
    }

    pub fn stats(&self, x: NfId) -> NfStats {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![x];
        let mut s = NfStats::default();
        while let Some(y) = stack.pop() {
            if !seen.insert(y) {
                continue;
            }
            match self.node(y) {
                Node::Leaf(_) => s.leaves += 1,
                Node::Eve(l, cs) => {
                    *s.eve_nodes.entry(*l).or_default() += 1;
                    stack.extend(cs);
                }
                Node::Adam(l, cs) => {
                    *s.adam_nodes.entry(*l).or_default() += 1;
                    stack.extend(cs);
                }
            }
        }
        s
    }

    /// Leaf classes reachable in a normal form.
    pub fn leaf_classes(&self, x: NfId) -> Vec<ClassId> {
        let mut out = std::collections::BTreeSet::new();
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            match self.node(y) {
                Node::Leaf(c) => {
                    out.insert(*c);
                }
                n => stack.extend(n.children()),
            }
        }
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::solve_exact;
    use crate::dfa::Dfa;
    use crate::term::{parse_grammar, parse_term};

    fn example() -> SynMonoid {
        let s = |x: &str| x.split_whitespace().map(Sym::from).collect::<Vec<_>>();
        let o = Dfa::finite(s("a_l a_r b c"), &[s("a_l c"), s("a_r b")]).unwrap();
        SynMonoid::build(&o, 1000).unwrap()
    }

    #[test]
    fn singleton_wrapping() {
        let m = example();
        let g = Grammar::empty(2);
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let z = nz.nf_of_class(ClassId::ZERO).unwrap();
        assert_eq!(nz.render(z), parse_term("E2{A2{E1{A1{err}}}}").unwrap());
        assert!(!nz.wins(z));
        let a = m.generator("a_l").unwrap();
        assert_eq!(nz.nf_of_class(a).unwrap(), nz.nf_of_class(a).unwrap());
    }

    #[test]
    fn combine_examples() {
        let m = example();
        let g = Grammar::empty(1);
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let [x, y, z] = ["a_l", "a_r", "b"].map(|a| {
            let l = nz.leaf(m.generator(a).unwrap()).unwrap();
            nz.lift(l, 1).unwrap()
        });
        let r = nz.adam_combine(&[x, y]).unwrap();
        assert_eq!(nz.render(r), parse_term("E1{A1{a_l, a_r}}").unwrap());
        let xy = nz.eve_combine(&[x, y]).unwrap();
        let r = nz.adam_combine(&[xy, z]).unwrap();
        assert_eq!(nz.render(r), parse_term("E1{A1{a_l, b}, A1{a_r, b}}").unwrap());
        assert_eq!(nz.eve_combine(&[xy, xy]).unwrap(), xy);
    }

    #[test]
    fn example_normal_form() {
        let m = example();
        let g = Grammar::empty(2);
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let x = nz.normalize(&parse_term("(a_l A1 a_r).(b E2 c)").unwrap()).unwrap();
        let want = parse_term("E2{A2{E1{A1{a_l.b, a_r.b}}}, A2{E1{A1{a_l.c, a_r.c}}}}").unwrap();
        let want = nz.normalize(&want).unwrap();
        assert_eq!(x, want);
        assert!(!nz.wins(x));
        let y = nz.normalize(&parse_term("(a_l A1 a_r).(b E1 c)").unwrap()).unwrap();
        assert!(nz.wins(y));
    }

    #[test]
    fn wins_agrees_on_example_terms() {
        let s = |x: &str| x.split_whitespace().map(Sym::from).collect::<Vec<_>>();
        let o = Dfa::finite(s("a_l a_r b c"), &[s("a_l c"), s("a_r b")]).unwrap();
        let m = SynMonoid::build(&o, 1000).unwrap();
        let g = Grammar::empty(2);
        for t in [
            "(a_l A1 a_r).(b E2 c)",
            "(a_l A1 a_r).(b E1 c)",
            "(a_l E1 a_r).(b A2 c)",
            "(a_l A2 a_r).(b E1 c).(skip A2 b)",
            "E1{a_l.(b A2 c), a_r.A1{b,c}}",
            "A2{a_l.E1{c, b}, a_r.E2{c,b}}",
        ] {
            let t = parse_term(t).unwrap();
            let mut nz = Normalizer::new(&g, &m, &Caps::default());
            let x = nz.normalize(&t).unwrap();
            assert_eq!(nz.wins(x), solve_exact(&g, &t, &o).unwrap().is_win(), "{t}");
        }
    }

    #[test]
    fn kleene_fixed_points() {
        let o = Dfa::universal(vec![Sym::from("a")]).unwrap();
        let m = SynMonoid::build(&o, 1000).unwrap();
        let g = parse_grammar("maxurg 1; @X = @X;").unwrap();
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let x = nz.normalize(&Term::var("X")).unwrap();
        assert_eq!(x, nz.nf_of_class(ClassId::ZERO).unwrap());

        let g = parse_grammar("maxurg 1; @X = skip E1 a.@X;").unwrap();
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let x = nz.normalize(&Term::var("X")).unwrap();
        assert!(nz.wins(x));
    }

    #[test]
    fn domination_basics() {
        let m = example();
        let g = Grammar::empty(1);
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let z = nz.leaf(ClassId::ZERO).unwrap();
        for c in m.classes() {
            let l = nz.leaf(c).unwrap();
            assert!(nz.dominates(z, l).unwrap());
            assert!(nz.dominates(l, l).unwrap());
        }
        let l1 = nz.nf_of_class(m.identity()).unwrap();
        assert!(matches!(nz.dominates(z, l1), Err(Error::LevelMismatch(0, 1))));
    }

    #[test]
    fn enumeration_counts() {
        let o = Dfa::universal(vec![Sym::from("a")]).unwrap();
        let m = SynMonoid::build(&o, 1000).unwrap();
        assert_eq!(m.len(), 2);
        let g = Grammar::empty(1);
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        assert_eq!(nz.enumerate_level(0, 100).unwrap().len(), 2);
        assert_eq!(nz.enumerate_level(1, 100).unwrap().len(), 7);
        assert!(matches!(nz.enumerate_level(1, 5), Err(Error::Resource { .. })));
    }

    #[test]
    fn node_cap_is_enforced() {
        let m = example();
        let g = Grammar::empty(2);
        let caps = Caps {
            nf_nodes: 20,
            ..Caps::default()
        };
        let mut nz = Normalizer::new(&g, &m, &caps);
        let t = parse_term("A2{E2{a_l,a_r,b}, E2{b,c,a_l}, E2{c, a_r}}.A1{E1{a_l,b},E1{c,a_r}}").unwrap();
        assert!(matches!(nz.normalize(&t), Err(Error::Resource { .. })));
    }
}
