use std::collections::BTreeSet;

use stackspace::check::words_up_to;
use stackspace::corpus::{corpus_entry, load_corpus};
use stackspace::csa::{
    accepting_stack_set, critical_language, final_stack_language, final_stack_language_direct, n0_nfa, nk_twoway,
    reachable_stack_set, store_language, write_prefix_language, CriticalCase, StoreWord,
};
use stackspace::nfa::{LengthBound, Side};
use stackspace::oracle::{store_sample, Budget};
use stackspace::{parse_machine, Action, Error, StackMachine, StackSym};

fn machine(name: &str) -> StackMachine {
    corpus_entry(name).unwrap().machine
}

fn stacks(set: &stackspace::csa::StackSet, max_len: usize) -> BTreeSet<String> {
    set.nfa
        .words_up_to(max_len)
        .iter()
        .map(|w| set.nfa.format_word(w))
        .collect()
}

fn word(m: &StackMachine, s: &str) -> Vec<usize> {
    m.parse_word(s).unwrap()
}

#[test]
fn accepting_stacks_of_comp_and_copy() {
    let comp = machine("comp");
    let s = accepting_stack_set(&comp, &word(&comp, "1111")).unwrap();
    assert_eq!(stacks(&s, 8), BTreeSet::from(["a a".to_string()]));
    assert_eq!(s.min_size(), Some(2));
    // a prime length is rejected
    assert!(accepting_stack_set(&comp, &word(&comp, "11111")).unwrap().is_empty());

    let copy = machine("copy");
    let s = accepting_stack_set(&copy, &word(&copy, "a$a#b$b")).unwrap();
    assert_eq!(stacks(&s, 8), BTreeSet::from(["a # b".to_string()]));
}

#[test]
fn reachable_stacks() {
    let comp = machine("comp");
    let s = reachable_stack_set(&comp, &word(&comp, "111")).unwrap();
    assert_eq!(s.max_size(), Some(LengthBound::Infinite));

    let nopush = machine("nopush");
    let s = reachable_stack_set(&nopush, &word(&nopush, "ab")).unwrap();
    assert_eq!(stacks(&s, 4), BTreeSet::from([String::new()]));

    let ww = machine("ww");
    let s = reachable_stack_set(&ww, &word(&ww, "ab#ab")).unwrap();
    assert_eq!(stacks(&s, 6), BTreeSet::from([String::new(), "a".into(), "a b".into()]));
}

#[test]
fn store_language_examples() {
    let nopush = machine("nopush");
    let store = store_language(&nopush).unwrap();
    assert!(store.is_finite());
    let words: Vec<String> = store.words_up_to(6).iter().map(|w| store.format_word(w)).collect();
    assert_eq!(words.len(), 1, "{words:?}");
    let sw = StoreWord::from_symbols(&nopush, &store.words_up_to(6)[0]).unwrap();
    assert!(sw.tape.cells.is_empty());

    assert!(!store_language(&machine("comp")).unwrap().is_finite());
}

#[test]
fn store_words_round_trip() {
    let m = machine("ww");
    for w in store_sample(
        &m,
        Budget {
            input_cap: 4,
            stack_cap: 4,
            ..Budget::default()
        },
    )
    .items
    {
        assert_eq!(StoreWord::from_symbols(&m, &w.to_symbols(&m)), Some(w));
    }
}

#[test]
fn final_stacks_two_ways() {
    for e in load_corpus().unwrap().iter().filter(|e| e.machine.is_checking()) {
        let m = &e.machine;
        let (a, b) = (
            final_stack_language(m).unwrap(),
            final_stack_language_direct(m).unwrap(),
        );
        for w in words_up_to(m.stack_alphabet().len(), 6) {
            assert_eq!(a.contains(&w), b.contains(&w), "{} {w:?}", e.name);
        }
    }
    let comp = final_stack_language(&machine("comp")).unwrap();
    assert_eq!(comp.min_size(), Some(2));
    assert_eq!(comp.max_size(), Some(LengthBound::Infinite));
    assert!(!comp.contains(&[0]) && comp.contains(&[0; 7]));
    let ww = final_stack_language(&machine("ww")).unwrap();
    assert!(words_up_to(2, 6).iter().all(|w| ww.contains(w)));
    assert_eq!(
        stacks(&final_stack_language(&machine("nopush")).unwrap(), 4),
        BTreeSet::from([String::new()])
    );
}

#[test]
fn write_prefixes() {
    let copy = write_prefix_language(&machine("copy")).unwrap();
    assert_eq!(copy.words_up_to(6), vec![Vec::<usize>::new()]);
    let ww = machine("ww");
    let lwm = write_prefix_language(&ww).unwrap();
    for w in words_up_to(3, 5) {
        assert_eq!(lwm.accepts(&w), !w.contains(&2), "{w:?}");
    }
    let nopush = write_prefix_language(&machine("nopush")).unwrap();
    assert_eq!(nopush.words_up_to(4), vec![Vec::<usize>::new()]);
}

/// Can λ write moves, starting in `qi` with `v[0]` on top, push the rest
/// of `v` and end in `qj`?
fn lambda_writes(m: &StackMachine, qi: usize, qj: usize, v: &[usize]) -> bool {
    let Some((&first, rest)) = v.split_first() else {
        return false;
    };
    let close = |set: BTreeSet<usize>, top: usize| {
        let mut set = set;
        loop {
            let more: Vec<usize> = m
                .transitions()
                .iter()
                .filter(|t| {
                    t.input.is_none()
                        && set.contains(&t.from)
                        && t.stack == StackSym::Sym(top)
                        && t.action == Action::WStay
                })
                .map(|t| t.to)
                .filter(|q| !set.contains(q))
                .collect();
            if more.is_empty() {
                return set;
            }
            set.extend(more);
        }
    };
    let mut set = close(BTreeSet::from([qi]), first);
    let mut top = first;
    for &c in rest {
        let next = m
            .transitions()
            .iter()
            .filter(|t| {
                t.input.is_none()
                    && set.contains(&t.from)
                    && t.stack == StackSym::Sym(top)
                    && t.action == Action::Push(c)
            })
            .map(|t| t.to)
            .collect();
        set = close(next, c);
        top = c;
    }
    set.contains(&qj)
}

#[test]
fn n0_matches_lambda_write_search() {
    let single = parse_machine(
        "machine CSA name=p\ninput: 1\nstack: a\nstates: q/w r/r\ninitial: q\nfinal: r\n\
         q , _ / BOT -> q push a\nq , _ / a -> q push a\nq , _ / a -> r wstay\n",
    )
    .unwrap();
    let n0 = n0_nfa(&single, 0, 0).unwrap();
    for k in 0..=5 {
        assert_eq!(n0.accepts(&vec![0; k]), k >= 1, "a^{k}");
    }
    for name in ["comp", "copy", "kdistinct", "xpad", "copyinput"] {
        let m = machine(name);
        let write: Vec<usize> = (0..m.num_states()).filter(|&q| m.is_write_state(q)).collect();
        for &qi in &write {
            for &qj in &write {
                let n0 = n0_nfa(&m, qi, qj).unwrap();
                for v in words_up_to(m.stack_alphabet().len(), 5) {
                    assert_eq!(n0.accepts(&v), lambda_writes(&m, qi, qj, &v), "{name} {qi}->{qj} {v:?}");
                }
            }
        }
    }
}

#[test]
fn nk_direction_forcing() {
    let left = parse_machine(
        "machine CSA name=l\ninput: 1\nstack: a b\nstates: w/w r/r\ninitial: w\nfinal: r\n\
         w , _ / BOT -> r wstay\nr , _ / a -> r left\nr , _ / b -> r left\n",
    )
    .unwrap();
    let through = nk_twoway(&left, 1, 1, Side::Right, Side::Left).unwrap();
    let back = nk_twoway(&left, 1, 1, Side::Right, Side::Right).unwrap();
    for v in words_up_to(2, 5) {
        assert!(through.accepts(&v), "{v:?}");
        assert!(!back.accepts(&v), "{v:?}");
    }
}

#[test]
fn critical_language_cases() {
    let m = machine("comp");
    let (g1, g2) = (m.state_id("g1").unwrap(), m.state_id("g2").unwrap());
    let (r0, c2) = (m.state_id("r0").unwrap(), m.state_id("c2").unwrap());
    let write = CriticalCase::Write { from: g1, to: g2 };
    let read = CriticalCase::Read {
        from: r0,
        to: r0,
        entry: Side::Right,
        exit: Side::Left,
    };
    let single = critical_language(&m, &[write]).unwrap();
    let n0 = n0_nfa(&m, g1, g2).unwrap();
    let nk = nk_twoway(&m, r0, r0, Side::Right, Side::Left).unwrap();
    let both = critical_language(&m, &[write, read]).unwrap();
    for v in words_up_to(1, 5) {
        assert_eq!(single.accepts(&v), n0.accepts(&v));
        assert_eq!(both.accepts(&v), n0.accepts(&v) && nk.accepts(&v), "{v:?}");
    }
    // c2 only moves right over cells, so it cannot leave on the left
    let never = CriticalCase::Read {
        from: c2,
        to: c2,
        entry: Side::Left,
        exit: Side::Left,
    };
    assert!(critical_language(&m, &[write, never]).unwrap().is_empty());
    assert_eq!(critical_language(&m, &[]).unwrap_err(), Error::EmptyCases);
}

#[test]
fn non_checking_machines_are_refused() {
    let pref = machine("pref");
    assert!(matches!(store_language(&pref), Err(Error::NotCsa(_))));
    assert!(matches!(accepting_stack_set(&pref, &[]), Err(Error::NotCsa(_))));
}
