//! The syntactic monoid of a regular objective, its precongruences and the
//! right-separation test.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::term::{Sym, Term, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ClassId(pub u32);

impl ClassId {
    pub const ZERO: ClassId = ClassId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Syntactic monoid with zero. Class 0 is always the zero (the class of `err`).
#[derive(Clone, Debug)]
pub struct SynMonoid {
    dfa: Dfa,
    dead: Option<usize>,
    /// Transformations over the minimal DFA; empty for the zero class.
    trans: Vec<Vec<u32>>,
    reps: Vec<Vec<Sym>>,
    index: HashMap<Vec<u32>, ClassId>,
    gens: Vec<ClassId>,
    identity: ClassId,
    incl: Vec<Vec<bool>>,
    table: Option<Vec<u32>>,
}

const TABLE_LIMIT: usize = 1024;

pub fn build_monoid(o: &Dfa, cap: usize) -> Result<SynMonoid> {
    SynMonoid::build(o, cap)
}

impl SynMonoid {
    pub fn build(o: &Dfa, cap: usize) -> Result<SynMonoid> {
        let dfa = o.minimize();
        let n = dfa.len();
        let live = dfa.live();
        let dead = (0..n).find(|&q| !live[q]);
        let mut m = SynMonoid {
            dead,
            trans: vec![Vec::new()],
            reps: vec![vec![Sym::from("err")]],
            index: HashMap::new(),
            gens: Vec::new(),
            identity: ClassId::ZERO,
            incl: dfa.inclusion_matrix(),
            table: None,
            dfa,
        };
        let ident: Vec<u32> = (0..n as u32).collect();
        m.identity = m.insert(ident, Vec::new(), cap)?.0;
        let mut queue = VecDeque::from([m.identity]);
        let k = m.dfa.alphabet().len();
        let mut gens = vec![ClassId::ZERO; k];
        while let Some(c) = queue.pop_front() {
            if c == ClassId::ZERO {
                continue;
            }
            for a in 0..k {
                let t: Vec<u32> = m.trans[c.index()]
                    .iter()
                    .map(|&q| m.dfa.step(q as usize, a) as u32)
                    .collect();
                let mut w = m.reps[c.index()].clone();
                w.push(m.dfa.alphabet()[a].clone());
                let (id, fresh) = m.insert(t, w, cap)?;
                if c == m.identity {
                    gens[a] = id;
                }
                if fresh {
                    queue.push_back(id);
                }
            }
        }
        m.gens = gens;
        let len = m.len();
        if len <= TABLE_LIMIT {
            let mut table = vec![0u32; len * len];
            for x in 0..len {
                for y in 0..len {
                    table[x * len + y] = m.compose(ClassId(x as u32), ClassId(y as u32)).0;
                }
            }
            m.table = Some(table);
        }
        Ok(m)
    }

    fn insert(&mut self, t: Vec<u32>, rep: Vec<Sym>, cap: usize) -> Result<(ClassId, bool)> {
        if let Some(d) = self.dead {
            if t.iter().all(|&q| q as usize == d) {
                return Ok((ClassId::ZERO, false));
            }
        }
        if let Some(&id) = self.index.get(&t) {
            return Ok((id, false));
        }
        if self.trans.len() >= cap {
            return Err(Error::resource("monoid classes", format!("more than {cap}"), cap as u64));
        }
        let id = ClassId(self.trans.len() as u32);
        self.index.insert(t.clone(), id);
        self.trans.push(t);
        self.reps.push(rep);
        Ok((id, true))
    }

    fn compose(&self, x: ClassId, y: ClassId) -> ClassId {
        if x == ClassId::ZERO || y == ClassId::ZERO {
            return ClassId::ZERO;
        }
        let (fx, fy) = (&self.trans[x.index()], &self.trans[y.index()]);
        let t: Vec<u32> = fx.iter().map(|&q| fy[q as usize]).collect();
        if let Some(d) = self.dead {
            if t.iter().all(|&q| q as usize == d) {
                return ClassId::ZERO;
            }
        }
        self.index[&t]
    }

    /// Number of classes, zero included.
    pub fn len(&self) -> usize {
        self.trans.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn classes(&self) -> impl Iterator<Item = ClassId> {
        (0..self.len() as u32).map(ClassId)
    }

    pub fn zero(&self) -> ClassId {
        ClassId::ZERO
    }

    pub fn identity(&self) -> ClassId {
        self.identity
    }

    /// The minimized objective the transformations act on.
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn dead_state(&self) -> Option<usize> {
        self.dead
    }

    pub fn mul(&self, x: ClassId, y: ClassId) -> ClassId {
        match &self.table {
            Some(t) => ClassId(t[x.index() * self.len() + y.index()]),
            None => self.compose(x, y),
        }
    }

    pub fn generator(&self, a: &str) -> Result<ClassId> {
        let ai = self.dfa.letter_index(a).ok_or_else(|| Error::UnknownLetter(a.to_string()))?;
        Ok(self.gens[ai])
    }

    pub fn class_of_letters(&self, w: &[Sym]) -> Result<ClassId> {
        w.iter()
            .try_fold(self.identity, |c, a| Ok(self.mul(c, self.generator(a)?)))
    }

    pub fn class_of_word(&self, w: &Word) -> Result<ClassId> {
        match w {
            Word::Zero => Ok(ClassId::ZERO),
            Word::Letters(ls) => self.class_of_letters(ls),
        }
    }

    /// Class of a word term; errors if the term is not a word.
    pub fn class_of_term(&self, t: &Term) -> Result<ClassId> {
        let w = t
            .word()
            .ok_or_else(|| Error::Invalid(format!("`{t}` is not a word term")))?;
        self.class_of_word(&w)
    }

    /// Shortest representative word; the zero class is represented by `err`.
    pub fn rep(&self, c: ClassId) -> Word {
        if c == ClassId::ZERO {
            Word::Zero
        } else {
            Word::Letters(self.reps[c.index()].clone())
        }
    }

    pub fn rep_term(&self, c: ClassId) -> Term {
        Term::from_word(&self.rep(c))
    }

    pub fn rep_text(&self, c: ClassId) -> String {
        self.rep_term(c).to_text()
    }

    /// Image of a state of the minimal DFA; `None` for the zero class.
    pub fn apply(&self, c: ClassId, q: usize) -> Option<usize> {
        if c == ClassId::ZERO {
            None
        } else {
            Some(self.trans[c.index()][q] as usize)
        }
    }

    pub fn transformation(&self, c: ClassId) -> Option<&[u32]> {
        (c != ClassId::ZERO).then(|| self.trans[c.index()].as_slice())
    }

    /// Whether words of the class belong to the objective.
    pub fn accepts(&self, c: ClassId) -> bool {
        self.apply(c, self.dfa.initial()).is_some_and(|q| self.dfa.is_final(q))
    }

    fn state_leq(&self, p: Option<usize>, q: Option<usize>) -> bool {
        match (p, q) {
            (None, _) => true,
            (Some(p), None) => self.dead == Some(p),
            (Some(p), Some(q)) => self.incl[p][q],
        }
    }

    /// Two-sided syntactic precongruence.
    pub fn leq(&self, x: ClassId, y: ClassId) -> bool {
        if x == ClassId::ZERO || x == y {
            return true;
        }
        (0..self.dfa.len()).all(|q| self.state_leq(self.apply(x, q), self.apply(y, q)))
    }

    /// Right precongruence: only right extensions are compared.
    pub fn right_leq(&self, x: ClassId, y: ClassId) -> bool {
        let q0 = self.dfa.initial();
        x == ClassId::ZERO || self.state_leq(self.apply(x, q0), self.apply(y, q0))
    }

    pub fn is_right_separating(&self) -> bool {
        self.classes()
            .all(|x| self.classes().all(|y| self.leq(x, y) == self.right_leq(x, y)))
    }
}

/// Bounded right-separation check for an objective given only by membership.
///
/// Every pair of words up to `max_len` that no right extension up to
/// `2 * max_len` distinguishes must also be indistinguishable by two-sided
/// extensions up to the same length. The answer is only as good as the bound.
pub fn is_right_separating_bounded(
    member: &dyn Fn(&[Sym]) -> bool,
    alphabet: &[Sym],
    max_len: usize,
) -> bool {
    let words = Dfa::words_up_to(alphabet, max_len);
    let ext = Dfa::words_up_to(alphabet, 2 * max_len);
    let cat = |a: &[Sym], b: &[Sym], c: &[Sym]| -> Vec<Sym> {
        a.iter().chain(b).chain(c).cloned().collect()
    };
    // right profile of each word
    let profile: Vec<Vec<bool>> = words
        .iter()
        .map(|w| ext.iter().map(|v| member(&cat(&[], w, v))).collect())
        .collect();
    for (i, w) in words.iter().enumerate() {
        for (j, w2) in words.iter().enumerate() {
            if i == j {
                continue;
            }
            let right_leq = profile[i].iter().zip(&profile[j]).all(|(&a, &b)| !a || b);
            if !right_leq {
                continue;
            }
            for u in &ext {
                for v in &ext {
                    if u.len() + v.len() > 2 * max_len {
                        continue;
                    }
                    if member(&cat(u, w, v)) && !member(&cat(u, w2, v)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(s: &str) -> Vec<Sym> {
        s.split_whitespace().map(Sym::from).collect()
    }

    fn example() -> SynMonoid {
        let o = Dfa::finite(syms("a_l a_r b c"), &[syms("a_l c"), syms("a_r b")]).unwrap();
        build_monoid(&o, 1000).unwrap()
    }

    #[test]
    fn example_has_seven_classes() {
        let m = example();
        assert_eq!(m.len(), 7);
        let lc = m.class_of_letters(&syms("a_l c")).unwrap();
        assert_eq!(lc, m.class_of_letters(&syms("a_r b")).unwrap());
        assert!(m.accepts(lc));
        assert_eq!(m.class_of_letters(&syms("a_l b")).unwrap(), ClassId::ZERO);
        assert!(!m.leq(m.generator("a_l").unwrap(), m.generator("a_r").unwrap()));
        assert!(!m.is_right_separating());
    }

    #[test]
    fn identity_and_zero_laws() {
        let m = example();
        for x in m.classes() {
            assert_eq!(m.mul(x, m.identity()), x);
            assert_eq!(m.mul(m.identity(), x), x);
            assert_eq!(m.mul(x, ClassId::ZERO), ClassId::ZERO);
            assert!(m.leq(ClassId::ZERO, x));
            assert!(m.right_leq(ClassId::ZERO, x));
            assert_eq!(m.class_of_word(&m.rep(x)).unwrap(), x);
        }
        assert_eq!(m.class_of_term(&crate::parse_term("a_l.err.b").unwrap()).unwrap(), ClassId::ZERO);
        assert_eq!(m.class_of_term(&Term::skip()).unwrap(), m.identity());
    }

    #[test]
    fn universal_and_parity() {
        let a = syms("a");
        let m = build_monoid(&Dfa::universal(a.clone()).unwrap(), 100).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.generator("a").unwrap(), m.identity());
        assert!(m.is_right_separating());
        let even = Dfa::from_fn(2, a, 0, |q| q == 0, |q, _| 1 - q).unwrap();
        let m = build_monoid(&even, 100).unwrap();
        assert_eq!(m.len(), 3);
        assert_ne!(m.generator("a").unwrap(), m.identity());
    }

    #[test]
    fn reach_is_right_separating() {
        let m = build_monoid(&Dfa::reach(syms("a b #"), "#").unwrap(), 100).unwrap();
        assert!(m.is_right_separating());
    }

    #[test]
    fn cap_is_enforced() {
        let o = Dfa::finite(syms("a_l a_r b c"), &[syms("a_l c"), syms("a_r b")]).unwrap();
        assert!(matches!(build_monoid(&o, 3), Err(Error::Resource { .. })));
    }

    #[test]
    fn bounded_right_separation() {
        let ab = syms("a b");
        let pal = |w: &[Sym]| w.len() % 2 == 0 && w.iter().eq(w.iter().rev());
        assert!(is_right_separating_bounded(&pal, &ab, 3));
        let sq = |w: &[Sym]| {
            let n = w.len();
            (0..=n).any(|k| k * k == n)
        };
        assert!(is_right_separating_bounded(&sq, &syms("a"), 4));
        assert!(is_right_separating_bounded(&|_: &[Sym]| false, &ab, 3));
    }
}
