//! Terms, grammars, contexts and the leading-subterm machinery.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Sym = Arc<str>;

/// Name of the hole non-terminal. Not allowed in user grammars.
pub const HOLE: &str = "_";

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn tag(self) -> char {
        match self {
            Player::Eve => 'E',
            Player::Adam => 'A',
        }
    }
}

#[derive(PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Kind {
    Letter(Sym),
    Skip,
    Err,
    Var(Sym),
    Concat(Term, Term),
    Choice(Player, u32, Vec<Term>),
}

#[derive(Debug)]
struct Inner {
    hash: u64,
    size: usize,
    kind: Kind,
}

/// An immutable, cheaply clonable program term.
#[derive(Clone, Debug)]
pub struct Term(Arc<Inner>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.kind.cmp(&other.0.kind)
    }
}

/// Which side of a concatenation a path step descends into.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Flattened view of a word term in the monoid with zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Word {
    Zero,
    Letters(Vec<Sym>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Insertion {
    Immediate,
    Paused,
}

impl Term {
    fn make(kind: Kind) -> Term {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        let size = match &kind {
            Kind::Concat(a, b) => 1 + a.size() + b.size(),
            Kind::Choice(_, _, ops) => 1 + ops.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        };
        Term(Arc::new(Inner {
            hash: h.finish(),
            size,
            kind,
        }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn letter(name: &str) -> Term {
        Term::make(Kind::Letter(name.into()))
    }

    pub fn letter_sym(name: Sym) -> Term {
        Term::make(Kind::Letter(name))
    }

    pub fn skip() -> Term {
        Term::make(Kind::Skip)
    }

    pub fn err() -> Term {
        Term::make(Kind::Err)
    }

    pub fn var(name: &str) -> Term {
        Term::make(Kind::Var(name.into()))
    }

    pub fn hole() -> Term {
        Term::var(HOLE)
    }

    pub fn concat(a: Term, b: Term) -> Term {
        Term::make(Kind::Concat(a, b))
    }

    /// Left-associated concatenation of a sequence; `skip` for an empty one.
    pub fn seq<I: IntoIterator<Item = Term>>(items: I) -> Term {
        items
            .into_iter()
            .reduce(Term::concat)
            .unwrap_or_else(Term::skip)
    }

    /// Builds a choice; operands are sorted and deduplicated.
    ///
    /// Panics on an empty operand set or urgency 0.
    pub fn choice<I: IntoIterator<Item = Term>>(player: Player, urgency: u32, ops: I) -> Term {
        let mut ops: Vec<Term> = ops.into_iter().collect();
        assert!(!ops.is_empty(), "choice over an empty set");
        assert!(urgency >= 1, "choice urgency must be positive");
        ops.sort();
        ops.dedup();
        Term::make(Kind::Choice(player, urgency, ops))
    }

    /// Like [`Term::choice`] but yields `err` for an empty operand set.
    pub fn choice_or_err<I: IntoIterator<Item = Term>>(player: Player, urgency: u32, ops: I) -> Term {
        let ops: Vec<Term> = ops.into_iter().collect();
        if ops.is_empty() {
            Term::err()
        } else {
            Term::choice(player, urgency, ops)
        }
    }

    pub fn eve<I: IntoIterator<Item = Term>>(urgency: u32, ops: I) -> Term {
        Term::choice(Player::Eve, urgency, ops)
    }

    pub fn adam<I: IntoIterator<Item = Term>>(urgency: u32, ops: I) -> Term {
        Term::choice(Player::Adam, urgency, ops)
    }

    /// Term size: leaves count 1, every concatenation and choice adds 1.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn is_word(&self) -> bool {
        match self.kind() {
            Kind::Letter(_) | Kind::Skip | Kind::Err => true,
            Kind::Var(_) | Kind::Choice(..) => false,
            Kind::Concat(a, b) => a.is_word() && b.is_word(),
        }
    }

    /// Monoid view of a word term; `None` if the term is not a word.
    pub fn word(&self) -> Option<Word> {
        fn go(t: &Term, out: &mut Vec<Sym>, zero: &mut bool) -> bool {
            match t.kind() {
                Kind::Letter(a) => {
                    out.push(a.clone());
                    true
                }
                Kind::Skip => true,
                Kind::Err => {
                    *zero = true;
                    true
                }
                Kind::Concat(a, b) => go(a, out, zero) && go(b, out, zero),
                _ => false,
            }
        }
        let mut out = Vec::new();
        let mut zero = false;
        if !go(self, &mut out, &mut zero) {
            return None;
        }
        Some(if zero { Word::Zero } else { Word::Letters(out) })
    }

    /// Term of a flat word: `skip` for the empty word.
    pub fn from_word(w: &Word) -> Term {
        match w {
            Word::Zero => Term::err(),
            Word::Letters(ls) => Term::seq(ls.iter().cloned().map(Term::letter_sym)),
        }
    }

    pub fn urgency(&self, max_urgency: u32) -> u32 {
        match self.kind() {
            Kind::Letter(_) | Kind::Skip | Kind::Err => 0,
            Kind::Var(_) => max_urgency,
            Kind::Concat(a, b) => a.urgency(max_urgency).max(b.urgency(max_urgency)),
            Kind::Choice(_, u, _) => *u,
        }
    }

    /// Path to the leading action and the action itself, or `None` for a word term.
    pub fn leading_path(&self, max_urgency: u32) -> Option<(Vec<Side>, Term)> {
        fn walk(t: &Term, n: u32, path: &mut Vec<Side>, best: &mut Option<(u32, Vec<Side>, Term)>) {
            let u = match t.kind() {
                Kind::Concat(a, b) => {
                    path.push(Side::Left);
                    walk(a, n, path, best);
                    path.pop();
                    path.push(Side::Right);
                    walk(b, n, path, best);
                    path.pop();
                    return;
                }
                Kind::Var(_) => n,
                Kind::Choice(_, u, _) => *u,
                _ => return,
            };
            if best.as_ref().map_or(true, |(bu, _, _)| u > *bu) {
                *best = Some((u, path.clone(), t.clone()));
            }
        }
        let mut best = None;
        walk(self, max_urgency, &mut Vec::new(), &mut best);
        best.map(|(_, p, t)| (p, t))
    }

    /// The leading subterm with its enclosing context.
    pub fn leading_subterm(&self, max_urgency: u32) -> Option<(Term, Term)> {
        let (path, sub) = self.leading_path(max_urgency)?;
        Some((sub, self.replace_at(&path, Term::hole())))
    }

    /// Replaces the subterm at a concatenation path.
    pub fn replace_at(&self, path: &[Side], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((side, rest)) => match self.kind() {
                Kind::Concat(a, b) => match side {
                    Side::Left => Term::concat(a.replace_at(rest, new), b.clone()),
                    Side::Right => Term::concat(a.clone(), b.replace_at(rest, new)),
                },
                _ => panic!("path does not follow the concatenation spine"),
            },
        }
    }

    /// Substitutes non-terminals for which `f` returns a replacement.
    pub fn subst(&self, f: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self.kind() {
            Kind::Var(x) => f(x).unwrap_or_else(|| self.clone()),
            Kind::Concat(a, b) => Term::concat(a.subst(f), b.subst(f)),
            Kind::Choice(p, u, ops) => Term::choice(*p, *u, ops.iter().map(|o| o.subst(f))),
            _ => self.clone(),
        }
    }

    pub fn contains_var(&self) -> bool {
        match self.kind() {
            Kind::Var(_) => true,
            Kind::Concat(a, b) => a.contains_var() || b.contains_var(),
            Kind::Choice(_, _, ops) => ops.iter().any(Term::contains_var),
            _ => false,
        }
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect(&mut |t| {
            if let Kind::Var(x) = t.kind() {
                out.insert(x.clone());
            }
        });
        out
    }

    pub fn letters(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect(&mut |t| {
            if let Kind::Letter(a) = t.kind() {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn max_choice_urgency(&self) -> u32 {
        let mut m = 0;
        self.collect(&mut |t| {
            if let Kind::Choice(_, u, _) = t.kind() {
                m = m.max(*u);
            }
        });
        m
    }

    fn collect(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self.kind() {
            Kind::Concat(a, b) => {
                a.collect(f);
                b.collect(f);
            }
            Kind::Choice(_, _, ops) => ops.iter().for_each(|o| o.collect(f)),
            _ => {}
        }
    }

    pub fn check_urgency(&self, max_urgency: u32) -> Result<()> {
        let m = self.max_choice_urgency();
        if m > max_urgency {
            return Err(Error::UrgencyRange {
                found: m,
                max: max_urgency,
            });
        }
        Ok(())
    }

    fn hole_count(&self) -> usize {
        let mut n = 0;
        self.collect(&mut |t| {
            if matches!(t.kind(), Kind::Var(x) if &**x == HOLE) {
                n += 1;
            }
        });
        n
    }

    /// Path to the hole along the concatenation spine, if it is not enclosed by a choice.
    fn spine_hole_path(&self) -> Option<Vec<Side>> {
        match self.kind() {
            Kind::Var(x) if &**x == HOLE => Some(Vec::new()),
            Kind::Concat(a, b) => {
                if let Some(mut p) = a.spine_hole_path() {
                    p.insert(0, Side::Left);
                    Some(p)
                } else {
                    let mut p = b.spine_hole_path()?;
                    p.insert(0, Side::Right);
                    Some(p)
                }
            }
            _ => None,
        }
    }

    /// Pretty text in the term syntax; parsing it back yields the same term.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// Replaces the hole of `c` with `t`. A context without a hole is returned unchanged.
pub fn plug(c: &Term, t: &Term) -> Term {
    c.subst(&|x| (x == HOLE).then(|| t.clone()))
}

/// Builds the context `left · • · right`, dropping `skip` sides.
pub fn sandwich(left: &Term, right: &Term) -> Term {
    let mut parts = Vec::new();
    if !matches!(left.kind(), Kind::Skip) {
        parts.push(left.clone());
    }
    parts.push(Term::hole());
    if !matches!(right.kind(), Kind::Skip) {
        parts.push(right.clone());
    }
    Term::seq(parts)
}

pub fn classify_insertion(c: &Term, t: &Term, max_urgency: u32) -> Insertion {
    let whole = plug(c, t);
    if whole.is_word() {
        return Insertion::Immediate;
    }
    debug_assert!(c.hole_count() <= 1);
    let Some(hole) = c.spine_hole_path() else {
        return Insertion::Paused;
    };
    match whole.leading_path(max_urgency) {
        Some((lead, _)) if lead.starts_with(&hole) => Insertion::Immediate,
        _ => Insertion::Paused,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Letter(a) => write_ident(f, a),
            Kind::Skip => f.write_str("skip"),
            Kind::Err => f.write_str("err"),
            Kind::Var(x) => {
                f.write_str("@")?;
                write_ident(f, x)
            }
            Kind::Concat(a, b) => {
                write!(f, "{a}.")?;
                if matches!(b.kind(), Kind::Concat(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Kind::Choice(p, u, ops) => {
                write!(f, "{}{}{{", p.tag(), u)?;
                for (i, o) in ops.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{o}")?;
                }
                f.write_str("}")
            }
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '#' | '$')
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '#' | '$' | '\'' | '~' | ':' | '-' | '>' | '<' | '|' | '!' | '/')
}

fn is_choice_keyword(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some('E') | Some('A')) && s.len() > 1 && cs.all(|c| c.is_ascii_digit())
}

fn plain_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c))
        && cs.all(is_ident_char)
        && !matches!(s, "skip" | "err" | "maxurg")
        && !is_choice_keyword(s)
}

fn write_ident(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    if plain_ident(s) {
        f.write_str(s)
    } else {
        f.write_str("\"")?;
        for c in s.chars() {
            if c == '"' || c == '\\' {
                f.write_str("\\")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("\"")
    }
}

// ---------------------------------------------------------------------------
// Lexer and parser

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Quoted(String),
    Choice(Player, u32),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    At,
    Semi,
    Eq,
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let adv = |i: &mut usize, n: usize, line: &mut usize, col: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            adv(&mut i, 1, &mut line, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                adv(&mut i, 1, &mut line, &mut col);
            }
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '@' => Some(Tok::At),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, l0, c0));
            adv(&mut i, 1, &mut line, &mut col);
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            adv(&mut i, 1, &mut line, &mut col);
            loop {
                match chars.get(i) {
                    None => return Err(Error::syntax(l0, c0, "unterminated quoted letter")),
                    Some('"') => {
                        adv(&mut i, 1, &mut line, &mut col);
                        break;
                    }
                    Some('\\') => {
                        let Some(&e) = chars.get(i + 1) else {
                            return Err(Error::syntax(l0, c0, "unterminated quoted letter"));
                        };
                        s.push(e);
                        adv(&mut i, 2, &mut line, &mut col);
                    }
                    Some(&ch) => {
                        s.push(ch);
                        adv(&mut i, 1, &mut line, &mut col);
                    }
                }
            }
            out.push((Tok::Quoted(s), l0, c0));
            continue;
        }
        if is_ident_start(c) {
            let mut s = String::new();
            while i < chars.len() && is_ident_char(chars[i]) {
                if chars[i] == '/' && chars.get(i + 1) == Some(&'/') {
                    break;
                }
                s.push(chars[i]);
                adv(&mut i, 1, &mut line, &mut col);
            }
            let tok = if is_choice_keyword(&s) {
                let u: u32 = s[1..]
                    .parse()
                    .map_err(|_| Error::syntax(l0, c0, format!("bad urgency in `{s}`")))?;
                if u == 0 {
                    return Err(Error::syntax(l0, c0, "urgency must be at least 1"));
                }
                let p = if s.starts_with('E') { Player::Eve } else { Player::Adam };
                Tok::Choice(p, u)
            } else {
                Tok::Ident(s)
            };
            out.push((tok, l0, c0));
            continue;
        }
        return Err(Error::syntax(l0, c0, format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

impl Lexer {
    fn new(text: &str) -> Result<Lexer> {
        Ok(Lexer {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::syntax(l, c, msg)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}, found {:?}", self.peek())))
        }
    }
}

/// Parses a term. The result may mention non-terminals and the hole.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut lx = Parser::new(text)?;
    let t = lx.inner.term_p(&mut lx.paren)?;
    if *lx.inner.peek() != Tok::Eof {
        return Err(lx.inner.err(format!("unexpected trailing {:?}", lx.inner.peek())));
    }
    Ok(t)
}

struct Parser {
    inner: Lexer,
    paren: bool,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        Ok(Parser {
            inner: Lexer::new(text)?,
            paren: false,
        })
    }
}

// `paren` keeps `(x E2 y) E2 z` from merging into one set.
impl Lexer {
    fn term_p(&mut self, paren: &mut bool) -> Result<Term> {
        let mut acc = self.seq_p(paren)?;
        while let Tok::Choice(p, u) = *self.peek() {
            self.next();
            let merge = !*paren;
            let rhs = self.seq_p(paren)?;
            acc = match acc.kind() {
                Kind::Choice(p0, u0, ops) if merge && *p0 == p && *u0 == u => {
                    let mut ops = ops.clone();
                    ops.push(rhs);
                    Term::choice(p, u, ops)
                }
                _ => Term::choice(p, u, [acc, rhs]),
            };
            *paren = false;
        }
        Ok(acc)
    }

    fn seq_p(&mut self, paren: &mut bool) -> Result<Term> {
        let mut acc = self.factor_p(paren)?;
        while *self.peek() == Tok::Dot {
            self.next();
            let rhs = self.factor_p(paren)?;
            acc = Term::concat(acc, rhs);
            *paren = false;
        }
        Ok(acc)
    }

    fn factor_p(&mut self, paren: &mut bool) -> Result<Term> {
        *paren = false;
        match self.next() {
            Tok::LParen => {
                let t = self.term_p(paren)?;
                self.expect(Tok::RParen, "`)`")?;
                *paren = true;
                Ok(t)
            }
            Tok::Choice(p, u) => {
                if *self.peek() != Tok::LBrace {
                    return Err(self.err("expected `{` after choice operator"));
                }
                self.next();
                if *self.peek() == Tok::RBrace {
                    return Err(self.err("empty choice"));
                }
                let mut ops = vec![self.term_p(paren)?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    ops.push(self.term_p(paren)?);
                }
                self.expect(Tok::RBrace, "`,` or `}`")?;
                *paren = true;
                Ok(Term::choice(p, u, ops))
            }
            Tok::At => match self.next() {
                Tok::Ident(x) | Tok::Quoted(x) => Ok(Term::var(&x)),
                t => Err(self.err(format!("expected non-terminal name after `@`, found {t:?}"))),
            },
            Tok::Ident(s) => Ok(match s.as_str() {
                "skip" => Term::skip(),
                "err" => Term::err(),
                _ => Term::letter(&s),
            }),
            Tok::Quoted(s) => Ok(Term::letter(&s)),
            t => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected a term, found {t:?}")))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Grammars

/// Defining equations for non-terminals plus the maximal urgency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub max_urgency: u32,
    pub defs: BTreeMap<Sym, Term>,
}

impl Grammar {
    pub fn empty(max_urgency: u32) -> Grammar {
        Grammar {
            max_urgency,
            defs: BTreeMap::new(),
        }
    }

    pub fn new(max_urgency: u32, defs: BTreeMap<Sym, Term>) -> Result<Grammar> {
        let g = Grammar { max_urgency, defs };
        g.validate()?;
        Ok(g)
    }

    pub fn define(&mut self, name: &str, t: Term) {
        self.defs.insert(name.into(), t);
    }

    pub fn def(&self, name: &str) -> Result<&Term> {
        self.defs.get(name).ok_or_else(|| Error::Undefined(name.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_urgency == 0 {
            return Err(Error::Invalid("maximal urgency must be positive".into()));
        }
        if self.defs.contains_key(HOLE) {
            return Err(Error::Invalid("the hole `_` cannot be defined".into()));
        }
        for t in self.defs.values() {
            self.check_term(t)?;
        }
        Ok(())
    }

    /// Checks urgencies and that every non-terminal used by `t` is defined.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        t.check_urgency(self.max_urgency)?;
        for x in t.vars() {
            if &*x != HOLE && !self.defs.contains_key(&x) {
                return Err(Error::Undefined(x.to_string()));
            }
        }
        Ok(())
    }

    /// Non-terminals reachable from `t` through defining equations.
    pub fn reachable(&self, t: &Term) -> Result<BTreeSet<Sym>> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<Sym> = t.vars().into_iter().filter(|x| &**x != HOLE).collect();
        while let Some(x) = stack.pop() {
            if !seen.insert(x.clone()) {
                continue;
            }
            for y in self.def(&x)?.vars() {
                if !seen.contains(&y) {
                    stack.push(y);
                }
            }
        }
        Ok(seen)
    }

    /// Errors with the first non-terminal on a dependency cycle reachable from `t`.
    pub fn check_acyclic(&self, t: &Term) -> Result<()> {
        let reach = self.reachable(t)?;
        let mut state: BTreeMap<Sym, u8> = BTreeMap::new();
        fn dfs(g: &Grammar, x: &Sym, state: &mut BTreeMap<Sym, u8>) -> Result<()> {
            match state.get(x) {
                Some(1) => return Err(Error::Recursive(x.to_string())),
                Some(_) => return Ok(()),
                None => {}
            }
            state.insert(x.clone(), 1);
            for y in g.def(x)?.vars() {
                dfs(g, &y, state)?;
            }
            state.insert(x.clone(), 2);
            Ok(())
        }
        for x in &reach {
            dfs(self, x, &mut state)?;
        }
        Ok(())
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "maxurg {};", self.max_urgency)?;
        for (x, t) in &self.defs {
            f.write_str("@")?;
            write_ident(f, x)?;
            writeln!(f, " = {t};")?;
        }
        Ok(())
    }
}

/// Parses `maxurg N;` followed by `@X = term;` equations.
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut lx = Lexer::new(text)?;
    match lx.next() {
        Tok::Ident(k) if k == "maxurg" => {}
        _ => return Err(Error::syntax(1, 1, "grammar must start with `maxurg <N>;`")),
    }
    let n: u32 = match lx.next() {
        Tok::Ident(s) => s.parse().map_err(|_| lx.err("expected an integer after `maxurg`"))?,
        _ => return Err(lx.err("expected an integer after `maxurg`")),
    };
    lx.expect(Tok::Semi, "`;`")?;
    let mut defs = BTreeMap::new();
    let mut paren = false;
    while *lx.peek() != Tok::Eof {
        let (l, c) = lx.here();
        lx.expect(Tok::At, "`@`")?;
        let name = match lx.next() {
            Tok::Ident(x) | Tok::Quoted(x) => x,
            _ => return Err(Error::syntax(l, c, "expected a non-terminal name")),
        };
        if name == HOLE {
            return Err(Error::syntax(l, c, "the hole `_` cannot be defined"));
        }
        lx.expect(Tok::Eq, "`=`")?;
        let t = lx.term_p(&mut paren)?;
        lx.expect(Tok::Semi, "`;`")?;
        if defs.insert(Sym::from(name.as_str()), t).is_some() {
            return Err(Error::syntax(l, c, format!("@{name} defined twice")));
        }
    }
    Grammar::new(n, defs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn urgency_of_running_example() {
        let t = p("a.(a_l A1 a_r).(b E2 c).(b A1 c)");
        assert_eq!(t.urgency(2), 2);
        assert_eq!(p("a").urgency(2), 0);
        assert_eq!(p("@X").urgency(2), 2);
    }

    #[test]
    fn leading_subterm_of_running_example() {
        let t = p("a.(a_l A1 a_r).(b E2 c).(b A1 c)");
        let (sub, ctx) = t.leading_subterm(2).unwrap();
        assert_eq!(sub, p("E2{b,c}"));
        assert_eq!(ctx, p("a.A1{a_l,a_r}.@_.A1{b,c}"));
        assert_eq!(plug(&ctx, &sub), t);
    }

    #[test]
    fn leading_ties_go_left() {
        let t = p("(a A1 b).(c E1 d)");
        assert_eq!(t.leading_subterm(1).unwrap().0, p("A1{a,b}"));
        assert!(p("a.b").leading_subterm(3).is_none());
    }

    #[test]
    fn plug_examples() {
        let b = p("b");
        assert_eq!(plug(&p("@_"), &b), b);
        assert_eq!(plug(&p("a.@_"), &b), p("a.b"));
        assert_eq!(plug(&p("E2{@_,c}"), &b), p("E2{b,c}"));
        assert_eq!(plug(&p("a.c"), &b), p("a.c"));
    }

    #[test]
    fn insertion_examples() {
        let t = p("E2{x}");
        assert_eq!(classify_insertion(&p("@_.A1{y}"), &t, 3), Insertion::Immediate);
        assert_eq!(classify_insertion(&p("@_.A3{y}"), &t, 3), Insertion::Paused);
        assert_eq!(classify_insertion(&p("E2{@_,z}"), &t, 3), Insertion::Paused);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(p("E2{b,c}"), Term::eve(2, [Term::letter("b"), Term::letter("c")]));
        assert_eq!(
            p("a . (a_l A1 a_r)"),
            Term::concat(Term::letter("a"), Term::adam(1, [Term::letter("a_l"), Term::letter("a_r")]))
        );
        assert_eq!(p("E2{c,b,b}"), p("E2{b,c}"));
        assert_eq!(p("x E1 y E1 z"), p("E1{x,y,z}"));
        assert_ne!(p("(x E1 y) E1 z"), p("E1{x,y,z}"));
        assert!(matches!(parse_term("E1{}"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_term("a . "), Err(Error::Syntax { .. })));
    }

    #[test]
    fn quoted_letters_round_trip() {
        let t = Term::seq([Term::letter("(q,a,p)"), Term::letter("skip"), Term::letter("E2")]);
        assert_eq!(p(&t.to_text()), t);
    }

    #[test]
    fn words_flatten() {
        assert_eq!(p("a.skip.(b.c)").word(), Some(Word::Letters(vec!["a".into(), "b".into(), "c".into()])));
        assert_eq!(p("a.err.b").word(), Some(Word::Zero));
        assert_eq!(p("a.E1{b}").word(), None);
    }

    #[test]
    fn grammar_round_trip() {
        let g = parse_grammar("maxurg 2;\n@X = skip E1 a.@X; // loop\n@Y = @X.b;").unwrap();
        assert_eq!(g.max_urgency, 2);
        assert_eq!(parse_grammar(&g.to_string()).unwrap(), g);
        assert!(matches!(parse_grammar("maxurg 1; @X = @Z;"), Err(Error::Undefined(_))));
        assert!(matches!(parse_grammar("maxurg 1; @X = E2{a};"), Err(Error::UrgencyRange { .. })));
        assert!(g.check_acyclic(&p("@Y")).is_err());
    }
}
