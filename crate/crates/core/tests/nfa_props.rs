//! Automaton operations against brute force on small random automata.

use std::collections::BTreeSet;

use proptest::prelude::*;
use stackspace::nfa::{LengthBound, Move, Nfa, TwSym, TwoWayNfa};

const SIGMA: usize = 2;

fn alphabet() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

#[derive(Debug, Clone)]
struct Spec {
    states: usize,
    edges: Vec<(usize, Option<usize>, usize)>,
    initial: Vec<usize>,
    finals: Vec<usize>,
}

fn spec(max_states: usize) -> impl Strategy<Value = Spec> {
    (1..=max_states).prop_flat_map(|n| {
        let edge = (0..n, prop::option::weighted(0.8, 0..SIGMA), 0..n);
        (
            Just(n),
            prop::collection::vec(edge, 0..3 * n),
            prop::collection::vec(0..n, 1..=2),
            prop::collection::vec(0..n, 0..=n),
        )
            .prop_map(|(states, edges, initial, finals)| Spec {
                states,
                edges,
                initial,
                finals,
            })
    })
}

fn build(s: &Spec) -> Nfa {
    Nfa::from_parts(
        alphabet(),
        s.states,
        s.edges.iter().copied(),
        s.initial.iter().copied(),
        s.finals.iter().copied(),
    )
}

/// Path search over (state, position), independent of the library's
/// closure code.
fn brute_accepts(s: &Spec, w: &[usize]) -> bool {
    let mut seen = BTreeSet::new();
    let mut todo: Vec<(usize, usize)> = s.initial.iter().map(|&q| (q, 0)).collect();
    while let Some((q, i)) = todo.pop() {
        if !seen.insert((q, i)) {
            continue;
        }
        if i == w.len() && s.finals.contains(&q) {
            return true;
        }
        for &(p, a, r) in &s.edges {
            if p != q {
                continue;
            }
            match a {
                None => todo.push((r, i)),
                Some(a) if w.get(i) == Some(&a) => todo.push((r, i + 1)),
                Some(_) => {}
            }
        }
    }
    false
}

fn words(max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..SIGMA).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 160, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn membership_matches_brute_force(s in spec(5)) {
        let nfa = build(&s);
        for w in words(5) {
            prop_assert_eq!(nfa.accepts(&w), brute_accepts(&s, &w), "{:?}", w);
        }
    }

    #[test]
    fn union_and_product(s in spec(4), t in spec(4)) {
        let (a, b) = (build(&s), build(&t));
        let u = a.union(&b).unwrap();
        let p = a.product(&b).unwrap();
        for w in words(5) {
            let (x, y) = (brute_accepts(&s, &w), brute_accepts(&t, &w));
            prop_assert_eq!(u.accepts(&w), x || y);
            prop_assert_eq!(p.accepts(&w), x && y);
        }
    }

    #[test]
    fn erasing_symbols(s in spec(5), keep_a in any::<bool>()) {
        let keep = |x: usize| (x == 0) == keep_a;
        let erased = build(&s).erase_symbols(keep);
        // the same automaton with the dropped letters turned into λ edges
        let lambda = Spec {
            edges: s.edges.iter().map(|&(p, a, q)| (p, a.filter(|&x| keep(x)), q)).collect(),
            ..s.clone()
        };
        // the result alphabet is just the kept letter, renumbered to 0
        let kept = if keep_a { 0 } else { 1 };
        prop_assert_eq!(erased.alphabet(), &alphabet()[kept..=kept]);
        for len in 0..=5 {
            prop_assert_eq!(erased.accepts(&vec![0; len]), brute_accepts(&lambda, &vec![kept; len]), "length {}", len);
        }
    }

    #[test]
    fn trim_and_prefix_closure(s in spec(5)) {
        let nfa = build(&s);
        let trimmed = nfa.trim();
        let prefixes = nfa.prefix_closure();
        let all = words(5);
        let lang: BTreeSet<Vec<usize>> = words(10).into_iter().filter(|w| brute_accepts(&s, w)).collect();
        for w in &all {
            prop_assert_eq!(trimmed.accepts(w), lang.contains(w));
            // a shortest extension is shorter than the state count, so 10 suffices
            prop_assert_eq!(prefixes.accepts(w), lang.iter().any(|v| v.starts_with(w)), "{:?}", w);
        }
        prop_assert!(trimmed.num_states() <= nfa.num_states());
        prop_assert_eq!(nfa.is_empty(), lang.is_empty());
    }

    #[test]
    fn lengths_and_finiteness(s in spec(4)) {
        let nfa = build(&s);
        let n = s.states;
        // infinite iff some accepted word has length in [n, 2n)
        let accepted: Vec<Vec<usize>> = words(2 * n - 1).into_iter().filter(|w| brute_accepts(&s, w)).collect();
        let infinite = accepted.iter().any(|w| w.len() >= n);
        prop_assert_eq!(nfa.is_finite(), !infinite);
        prop_assert_eq!(nfa.min_word_length(), accepted.iter().map(Vec::len).min());
        let expected_max = if accepted.is_empty() {
            None
        } else if infinite {
            Some(LengthBound::Infinite)
        } else {
            Some(LengthBound::Finite(accepted.iter().map(Vec::len).max().unwrap()))
        };
        prop_assert_eq!(nfa.max_word_length(), expected_max);
        if let Some(w) = nfa.shortest_word() {
            prop_assert!(brute_accepts(&s, &w));
            prop_assert_eq!(Some(w.len()), nfa.min_word_length());
        }
        if !infinite {
            match nfa.longest_word() {
                Some(w) => {
                    prop_assert!(brute_accepts(&s, &w));
                    prop_assert_eq!(Some(LengthBound::Finite(w.len())), nfa.max_word_length());
                }
                None => prop_assert!(accepted.is_empty()),
            }
        }
        let listed: BTreeSet<Vec<usize>> = nfa.words_up_to(4).into_iter().collect();
        let brute: BTreeSet<Vec<usize>> = words(4).into_iter().filter(|w| brute_accepts(&s, w)).collect();
        prop_assert_eq!(listed, brute);
    }
}

#[derive(Debug, Clone)]
struct TwSpec {
    states: usize,
    edges: Vec<(usize, TwSym, usize, Move)>,
    finals: Vec<usize>,
}

fn tw_sym() -> impl Strategy<Value = TwSym> {
    prop_oneof![
        Just(TwSym::LeftEnd),
        Just(TwSym::RightEnd),
        (0..SIGMA).prop_map(TwSym::Sym),
        (0..SIGMA).prop_map(TwSym::Sym)
    ]
}

fn tw_move() -> impl Strategy<Value = Move> {
    prop_oneof![Just(Move::L), Just(Move::S), Just(Move::R)]
}

fn tw_spec() -> impl Strategy<Value = TwSpec> {
    (1..=4usize).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, tw_sym(), 0..n, tw_move()), 0..4 * n),
            prop::collection::vec(0..n, 0..=2),
        )
            .prop_map(|(states, edges, finals)| TwSpec { states, edges, finals })
    })
}

fn build_tw(s: &TwSpec) -> TwoWayNfa {
    let mut t = TwoWayNfa::new(alphabet(), s.states, 0);
    for &(p, sym, q, mv) in &s.edges {
        // moves off the tape are refused; that is part of what is tested
        let off = matches!((sym, mv), (TwSym::LeftEnd, Move::L) | (TwSym::RightEnd, Move::R));
        assert_eq!(t.add_edge(p, sym, q, mv).is_err(), off);
    }
    for &f in &s.finals {
        t.set_final(f);
    }
    t
}

/// Search over (state, head) on `▷ w ◁`, straight from the edge list.
fn brute_two_way(s: &TwSpec, w: &[usize]) -> bool {
    let sym_at = |i: usize| match i {
        0 => TwSym::LeftEnd,
        i if i == w.len() + 1 => TwSym::RightEnd,
        i => TwSym::Sym(w[i - 1]),
    };
    let mut seen = BTreeSet::new();
    let mut todo = vec![(0usize, 0usize)];
    while let Some((q, i)) = todo.pop() {
        if !seen.insert((q, i)) {
            continue;
        }
        if s.finals.contains(&q) {
            return true;
        }
        for &(p, sym, r, mv) in &s.edges {
            if p != q || sym != sym_at(i) {
                continue;
            }
            let j = match mv {
                Move::L if i > 0 => i - 1,
                Move::S => i,
                Move::R if i <= w.len() => i + 1,
                _ => continue,
            };
            todo.push((r, j));
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 160, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn behaviors_compose_associatively(s in tw_spec(), u in prop::collection::vec(0..SIGMA, 0..4),
                                       v in prop::collection::vec(0..SIGMA, 0..4),
                                       w in prop::collection::vec(0..SIGMA, 0..4)) {
        let t = build_tw(&s);
        let (bu, bv, bw) = (t.behavior(&u), t.behavior(&v), t.behavior(&w));
        prop_assert_eq!(bu.compose(&bv).compose(&bw), bu.compose(&bv.compose(&bw)));
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        prop_assert_eq!(t.behavior(&uv), bu.compose(&bv));
    }

    #[test]
    fn two_way_acceptance_agrees(s in tw_spec()) {
        let t = build_tw(&s);
        let one = t.to_one_way();
        for w in words(6) {
            let direct = brute_two_way(&s, &w);
            prop_assert_eq!(t.accepts_direct(&w), direct, "{:?}", w);
            prop_assert_eq!(t.accepts(&w), direct, "{:?}", w);
            prop_assert_eq!(one.accepts(&w), direct, "{:?}", w);
        }
    }
}
