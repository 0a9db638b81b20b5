//! Urgency programs: terms with player- and urgency-annotated choices, their
//! game semantics over regular objectives, objective-specialized normal forms,
//! and decision procedures for the specialized contextual preorder.

pub mod arena;
pub mod axioms;
pub mod cli;
pub mod decision;
pub mod dfa;
pub mod encode;
pub mod error;
pub mod gen;
pub mod monoid;
pub mod nf;
pub mod selftest;
pub mod term;

pub use error::{Caps, Error, Result};
pub use term::{parse_grammar, parse_term, plug, Grammar, Player, Sym, Term};
