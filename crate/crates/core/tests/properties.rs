use proptest::prelude::*;
use rand::Rng;

use urgency::arena::{solve_bounded, solve_exact, Outcome};
use urgency::decision::{arrow_translate, decide_preorder, Options};
use urgency::encode::{self, hyper, Iig};
use urgency::gen;
use urgency::monoid::{ClassId, SynMonoid};
use urgency::nf::Normalizer;
use urgency::term::{classify_insertion, Insertion, Kind, Side};
use urgency::{parse_term, plug, Caps, Grammar, Player, Term};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(300))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>(), n in 1u32..=3) {
        let mut r = gen::rng(seed);
        let t = gen::term(&mut r, &gen::alphabet(3), n, 14, &[]);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn leading_subterm_replugs(seed in any::<u64>(), n in 1u32..=3) {
        let mut r = gen::rng(seed);
        let t = gen::term(&mut r, &gen::alphabet(2), n, 12, &[]);
        if let Some((s, c)) = t.leading_subterm(n) {
            prop_assert_eq!(plug(&c, &s), t);
        } else {
            prop_assert!(t.is_word());
        }
    }

    #[test]
    fn leading_side_follows_urgency(seed in any::<u64>(), n in 1u32..=3) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let t = Term::concat(gen::term(&mut r, &al, n, 6, &[]), gen::term(&mut r, &al, n, 6, &[]));
        let Kind::Concat(a, b) = t.kind() else { unreachable!() };
        if let Some((path, _)) = t.leading_path(n) {
            match path[0] {
                Side::Left => prop_assert!(a.urgency(n) >= b.urgency(n)),
                Side::Right => prop_assert!(b.urgency(n) > a.urgency(n)),
            }
        }
    }

    #[test]
    fn immediate_insertion_is_inherited_upwards(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let n = 2;
        let c = gen::context(&mut r, &al, n, 5);
        let t = gen::term(&mut r, &al, n, 4, &[]);
        let t2 = gen::term(&mut r, &al, n, 4, &[]);
        if classify_insertion(&c, &t, n) == Insertion::Immediate && t.urgency(n) <= t2.urgency(n) && !t.is_word() {
            prop_assert_eq!(classify_insertion(&c, &t2, n), Insertion::Immediate);
        }
    }

    #[test]
    fn word_flattening_matches_the_monoid(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let o = gen::dfa(&mut r, &al, 4);
        let m = SynMonoid::build(&o, 10_000).unwrap();
        let a = gen::word(&mut r, &al, 3);
        let b = gen::word(&mut r, &al, 3);
        let ab = Term::concat(a.clone(), Term::concat(Term::skip(), b.clone()));
        let w = ab.word().unwrap();
        prop_assert_eq!(Term::from_word(&w).word().unwrap(), w.clone());
        let want = m.mul(m.class_of_term(&a).unwrap(), m.class_of_term(&b).unwrap());
        prop_assert_eq!(m.class_of_word(&w).unwrap(), want);
        let with_err = Term::concat(ab, Term::err());
        prop_assert_eq!(m.class_of_term(&with_err).unwrap(), ClassId::ZERO);
    }

    #[test]
    fn monoid_laws(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(1 + (seed % 3) as usize);
        let o = gen::dfa(&mut r, &al, 4);
        let m = SynMonoid::build(&o, 10_000).unwrap();
        let cs: Vec<ClassId> = m.classes().collect();
        for &x in &cs {
            prop_assert_eq!(m.mul(x, m.identity()), x);
            prop_assert_eq!(m.mul(m.identity(), x), x);
            prop_assert_eq!(m.mul(x, m.zero()), m.zero());
            prop_assert!(m.leq(m.zero(), x));
            prop_assert_eq!(m.leq(x, m.zero()), x == m.zero());
            for &y in &cs {
                prop_assert!(!m.leq(x, y) || m.right_leq(x, y));
                for &z in cs.iter().take(8) {
                    prop_assert_eq!(m.mul(m.mul(x, y), z), m.mul(x, m.mul(y, z)));
                    if m.leq(x, y) {
                        prop_assert!(m.leq(m.mul(z, x), m.mul(z, y)));
                        prop_assert!(m.leq(m.mul(x, z), m.mul(y, z)));
                    }
                }
            }
        }
        let sep = cs.iter().all(|&x| cs.iter().all(|&y| m.leq(x, y) == m.right_leq(x, y)));
        prop_assert_eq!(sep, m.is_right_separating());
        let w: Vec<_> = (0..r.gen_range(0..5)).map(|_| al[r.gen_range(0..al.len())].clone()).collect();
        let (u, v) = w.split_at(w.len() / 2);
        prop_assert_eq!(
            m.class_of_letters(&w).unwrap(),
            m.mul(m.class_of_letters(u).unwrap(), m.class_of_letters(v).unwrap())
        );
        prop_assert_eq!(m.accepts(m.class_of_letters(&w).unwrap()), o.member(&w).unwrap());
    }

    #[test]
    fn bounded_solver_agrees_and_is_monotone(seed in any::<u64>(), n in 1u32..=2) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let o = gen::dfa(&mut r, &al, 3);
        let g = Grammar::empty(n);
        let t = gen::term(&mut r, &al, n, 10, &[]);
        let exact = solve_exact(&g, &t, &o).unwrap();
        prop_assert_eq!(exact.is_win(), solve_exact(&g, &t, &o).unwrap().is_win());
        let mut prev = Outcome::Unknown;
        for budget in [1, 4, 16, 10_000] {
            let b = solve_bounded(&g, &t, &o, budget, false).unwrap().outcome;
            if prev != Outcome::Unknown {
                prop_assert_eq!(b, prev);
            }
            prev = b;
        }
        prop_assert_eq!(prev == Outcome::Win, exact.is_win());
        prop_assert_ne!(prev, Outcome::Unknown);
    }

    #[test]
    fn normal_forms_preserve_the_winner(seed in any::<u64>(), n in 1u32..=3) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let o = gen::dfa(&mut r, &al, 4);
        let m = SynMonoid::build(&o, 10_000).unwrap();
        let g = Grammar::empty(n);
        let t = gen::term(&mut r, &al, n, 12, &[]);
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let x = nz.normalize(&t).unwrap();
        prop_assert_eq!(nz.wins(x), solve_exact(&g, &t, &o).unwrap().is_win());
    }

    #[test]
    fn axioms_hold_on_normal_forms(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let n = 2;
        let o = gen::dfa(&mut r, &al, 3);
        let m = SynMonoid::build(&o, 10_000).unwrap();
        let g = Grammar::empty(n);
        let mut nz = Normalizer::new(&g, &m, &Caps::default());
        let p = if r.gen_bool(0.5) { Player::Eve } else { Player::Adam };
        let s: Vec<Term> = (0..2).map(|_| gen::term(&mut r, &al, n, 3, &[])).collect();
        let mut equal = |a: &Term, b: &Term| -> bool {
            let x = nz.normalize(a).unwrap();
            let y = nz.normalize(b).unwrap();
            nz.dominates(x, y).unwrap() && nz.dominates(y, x).unwrap()
        };
        // D1 with urg(t) = 1 < 2
        let t = gen::term(&mut r, &al, 1, 3, &[]);
        let l = Term::concat(t.clone(), Term::choice(p, 2, s.clone()));
        let rr = Term::choice(p, 2, s.iter().map(|x| Term::concat(t.clone(), x.clone())));
        prop_assert!(equal(&l, &rr), "D1 {} vs {}", l, rr);
        // D2 with urg(t) ≤ u
        let u = r.gen_range(1..=2);
        let t = gen::term(&mut r, &al, u, 3, &[]);
        let l = Term::concat(Term::choice(p, u, s.clone()), t.clone());
        let rr = Term::choice(p, u, s.iter().map(|x| Term::concat(x.clone(), t.clone())));
        prop_assert!(equal(&l, &rr), "D2 {} vs {}", l, rr);
        // N
        let l = Term::eve(1, [Term::choice(p, 2, s.clone())]);
        let rr = Term::eve(1, [Term::choice(p, 1, s.clone())]);
        prop_assert!(equal(&l, &rr));
        // L4
        let l = Term::choice(p, u, [Term::choice(p, u, s.clone()), s[0].clone()]);
        let rr = Term::choice(p, u, s.clone());
        prop_assert!(equal(&l, &rr));
        // L3
        let t = gen::term(&mut r, &al, u, 3, &[]);
        let l = Term::adam(u, [t.clone(), Term::eve(u, [t.clone(), s[1].clone()])]);
        prop_assert!(equal(&l, &t));
        // B
        let e = nz.normalize(&Term::err()).unwrap();
        let e = nz.lift(e, n).unwrap();
        let x = nz.normalize(&s[0]).unwrap();
        prop_assert!(nz.dominates(e, x).unwrap());
    }

    #[test]
    fn arrow_translation_is_faithful(seed in any::<u64>(), n in 1u32..=2) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let o = gen::dfa(&mut r, &al, 3);
        let g = Grammar::empty(n);
        let t = gen::term(&mut r, &al, n, 10, &[]);
        let a = arrow_translate(&g, &t, &o).unwrap();
        prop_assert_eq!(
            solve_exact(&a.grammar, &a.term, &a.objective).unwrap().is_win(),
            solve_exact(&g, &t, &o).unwrap().is_win()
        );
    }
}

proptest! {
    #![proptest_config(cfg(60))]

    #[test]
    fn preorder_is_a_precongruence(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let o = gen::dfa(&mut r, &al, 3);
        let g = Grammar::empty(1);
        let t = gen::term(&mut r, &al, 1, 4, &[]);
        let t2 = gen::term(&mut r, &al, 1, 4, &[]);
        let opts = Options::default();
        if decide_preorder(&g, &t, &t2, &o, &opts).unwrap().holds {
            let c = gen::context(&mut r, &al, 1, 4);
            let d = decide_preorder(&g, &plug(&c, &t), &plug(&c, &t2), &o, &opts).unwrap();
            prop_assert!(d.holds, "context {}", c);
        }
    }

    #[test]
    fn preorder_witnesses_separate(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let o = gen::dfa(&mut r, &al, 3);
        let g = Grammar::empty(1);
        let t = gen::term(&mut r, &al, 1, 4, &[]);
        let t2 = gen::term(&mut r, &al, 1, 4, &[]);
        let d = decide_preorder(&g, &t, &t2, &o, &Options::default()).unwrap();
        if let Some(c) = d.witness {
            prop_assert!(!d.holds);
            let m = SynMonoid::build(&o, 10_000).unwrap();
            let mut nz = Normalizer::new(&g, &m, &Caps::default());
            let a = nz.normalize(&plug(&c, &t)).unwrap();
            let b = nz.normalize(&plug(&c, &t2)).unwrap();
            prop_assert!(nz.wins(a) && !nz.wins(b), "witness {}", c);
        }
    }

    #[test]
    fn encoders_respect_their_urgency_bounds(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let al = gen::alphabet(2);
        let a = encode::random_nfa(&mut r, &al, 3, 0.3);
        let b = encode::random_nfa(&mut r, &al, 3, 0.3);
        let check = |e: &encode::Encoding, n: u32| {
            e.grammar.max_urgency == n
                && e.grammar.defs.values().chain([&e.start]).all(|t| t.max_choice_urgency() <= n)
        };
        prop_assert!(check(&encode::inclusion(&a, &b).unwrap(), 2));
        prop_assert!(check(&encode::simulation(&a, &b).unwrap(), 1));
        let hd = (0..a.len()).map(|i| format!("h{}", i % 2)).collect();
        let game = Iig { automaton: a.clone(), hd };
        prop_assert!(check(&encode::imperfect_info(&game).unwrap(), 1));
        for k in 1..=2usize {
            let property = urgency::selftest::random_tuple_dfa(&mut r, &al, k);
            let h = hyper::HyperSpec::new(a.clone(), k, property).unwrap();
            prop_assert!(check(&hyper::encode(&h).unwrap(), k as u32));
        }
    }
}

#[test]
fn domination_is_a_preorder_on_level_one() {
    let o = urgency::dfa::Dfa::resolve("reach:a", &["a".into(), "b".into()].into_iter().collect()).unwrap();
    let m = SynMonoid::build(&o, 100).unwrap();
    let g = Grammar::empty(1);
    let mut nz = Normalizer::new(&g, &m, &Caps::default());
    let all = nz.enumerate_level(1, 10_000).unwrap();
    assert!(!all.is_empty());
    for &x in &all {
        assert!(nz.dominates(x, x).unwrap());
        for &y in &all {
            for &z in &all {
                if nz.dominates(x, y).unwrap() && nz.dominates(y, z).unwrap() {
                    assert!(nz.dominates(x, z).unwrap());
                }
            }
        }
    }
}
