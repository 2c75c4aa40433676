//! Oracle and measure invariants on small random checking machines and on
//! the corpus.

use proptest::prelude::*;
use stackspace::check::words_up_to;
use stackspace::corpus::corpus_entry;
use stackspace::measures::sigma_u;
use stackspace::model::{MachineParts, Mode};
use stackspace::oracle::{explore, explore_graph, Budget, Membership};
use stackspace::{Action, MachineClass, Measure, MeasureValue, StackMachine, StackSym, Transition};

// states 0, 1 write; 2, 3 read
const WRITE: [usize; 2] = [0, 1];
const READ: [usize; 2] = [2, 3];

fn input() -> impl Strategy<Value = Option<usize>> {
    prop::option::weighted(0.6, 0..2usize)
}

fn write_move() -> impl Strategy<Value = Transition> {
    (
        prop::sample::select(WRITE.to_vec()),
        input(),
        prop_oneof![Just(StackSym::Bottom), (0..2usize).prop_map(StackSym::Sym)],
        0..4usize,
        prop_oneof![Just(Action::WStay), (0..2usize).prop_map(Action::Push)],
    )
        .prop_map(|(from, input, stack, to, action)| Transition {
            from,
            input,
            stack,
            to,
            action,
        })
}

fn read_move() -> impl Strategy<Value = Transition> {
    (
        prop::sample::select(READ.to_vec()),
        input(),
        prop_oneof![
            Just(StackSym::Bottom),
            Just(StackSym::Top),
            (0..2usize).prop_map(StackSym::Sym)
        ],
        prop::sample::select(READ.to_vec()),
        prop_oneof![Just(Action::Left), Just(Action::RStay), Just(Action::Right)],
    )
        .prop_map(|(from, input, stack, to, action)| Transition {
            from,
            input,
            stack,
            to,
            action,
        })
}

/// λ wstay from a write state straight into a read state.
fn handoff() -> impl Strategy<Value = Transition> {
    (
        prop::sample::select(WRITE.to_vec()),
        prop_oneof![Just(StackSym::Bottom), (0..2usize).prop_map(StackSym::Sym)],
        prop::sample::select(READ.to_vec()),
    )
        .prop_map(|(from, stack, to)| Transition {
            from,
            input: None,
            stack,
            to,
            action: Action::WStay,
        })
}

fn csa() -> impl Strategy<Value = StackMachine> {
    (
        prop::collection::vec(write_move(), 2..9),
        prop::collection::vec(handoff(), 1..4),
        prop::collection::vec(read_move(), 3..12),
        prop::collection::btree_set(prop::sample::select(READ.to_vec()), 1..=2),
    )
        .prop_map(|(w, h, r, finals)| {
            let parts = MachineParts {
                name: "random".into(),
                states: ["w0", "w1", "r0", "r1"].map(String::from).to_vec(),
                input_alphabet: vec!["a".into(), "b".into()],
                stack_alphabet: vec!["x".into(), "y".into()],
                transitions: w.into_iter().chain(h).chain(r).collect(),
                initial: 0,
                finals,
                partition: Some(vec![Mode::Write, Mode::Write, Mode::Read, Mode::Read]),
            };
            StackMachine::new(MachineClass::Csa, parts).expect("generated machines are checking")
        })
}

fn budget(stack_cap: usize) -> Budget {
    Budget {
        stack_cap,
        node_cap: 200_000,
        input_cap: 4,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn oracle_agrees_with_exact_analysis(m in csa()) {
        for u in words_up_to(2, 4) {
            let report = explore(&m, &u, budget(8));
            let member = !stackspace::csa::accepting_stack_set(&m, &u).unwrap().is_empty();
            match report.membership {
                Membership::Accepted => prop_assert!(member, "{:?}", u),
                Membership::Rejected => prop_assert!(!member, "{:?}", u),
                Membership::Unknown => {}
            }
            for z in Measure::ALL {
                let exact = sigma_u(&m, &u, z, budget(8));
                match report.value(z) {
                    MeasureValue::AtLeast(k) => {
                        if let MeasureValue::Finite(e) = exact {
                            prop_assert!(k <= e, "{} on {:?}: >={} vs {}", z, u, k, e);
                        }
                    }
                    seen => prop_assert_eq!(seen, exact, "{} on {:?}", z, u),
                }
            }
        }
    }

    #[test]
    fn measures_are_ordered_on_members(m in csa()) {
        for u in words_up_to(2, 4) {
            if stackspace::csa::accepting_stack_set(&m, &u).unwrap().is_empty() {
                continue;
            }
            let [w, a, s] = Measure::ALL.map(|z| sigma_u(&m, &u, z, budget(8)));
            prop_assert!(w.certified_cmp(a).is_some_and(|o| o.is_le()), "{:?}: {} {}", u, w, a);
            prop_assert!(a.certified_cmp(s).is_some_and(|o| o.is_le()), "{:?}: {} {}", u, a, s);
        }
    }

    #[test]
    fn phase_discipline(m in csa(), u in prop::collection::vec(0..2usize, 0..4)) {
        let g = explore_graph(&m, &u, budget(6));
        for (i, out) in g.succ.iter().enumerate() {
            let c = &g.nodes[i];
            if m.is_write_state(c.state) {
                prop_assert!(c.tape.at_top_symbol(), "write state off the top: {:?}", c);
            }
            for &j in out {
                let d = &g.nodes[j as usize];
                if m.is_read_state(c.state) {
                    prop_assert!(m.is_read_state(d.state));
                    prop_assert_eq!(&c.tape.cells, &d.tape.cells);
                }
            }
        }
    }

    #[test]
    fn oracle_is_deterministic_and_monotone_in_the_stack_cap(m in csa(), u in prop::collection::vec(0..2usize, 0..5)) {
        let small = explore(&m, &u, budget(4));
        let again = explore(&m, &u, budget(4));
        prop_assert_eq!(
            serde_json::to_string(&small.to_json(&m, &u)).unwrap(),
            serde_json::to_string(&again.to_json(&m, &u)).unwrap()
        );
        let large = explore(&m, &u, budget(8));
        prop_assert!(small.visited <= large.visited);
        if small.membership != Membership::Unknown {
            prop_assert_eq!(small.membership, large.membership);
        }
        for z in Measure::ALL {
            let (s, l) = (small.value(z), large.value(z));
            if s.is_certified() && l.is_certified() {
                prop_assert_eq!(s, l, "{}", z);
            }
            if let (MeasureValue::AtLeast(a), MeasureValue::AtLeast(b) | MeasureValue::Finite(b)) = (s, l) {
                prop_assert!(a <= b, "{}: >={} then {}", z, a, l);
            }
        }
    }
}

#[test]
fn corpus_oracle_monotone_in_budget() {
    for name in ["pref", "xpad", "comp", "ww"] {
        let e = corpus_entry(name).unwrap();
        let m = &e.machine;
        for u in words_up_to(m.input_alphabet().len(), 3) {
            let small = explore(
                m,
                &u,
                Budget {
                    stack_cap: 4,
                    ..Budget::default()
                },
            );
            let large = explore(
                m,
                &u,
                Budget {
                    stack_cap: 9,
                    ..Budget::default()
                },
            );
            assert!(small.visited <= large.visited, "{name} {u:?}");
            if small.membership == Membership::Accepted {
                assert_eq!(large.membership, Membership::Accepted, "{name} {u:?}");
            }
            for z in Measure::ALL {
                if small.value(z).is_certified() && large.value(z).is_certified() {
                    assert_eq!(small.value(z), large.value(z), "{name} {z} {u:?}");
                }
            }
        }
    }
}
