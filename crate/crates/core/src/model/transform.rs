use std::collections::BTreeSet;

use super::{Action, MachineClass, Mode, StackMachine, StackSym, Transition};

/// Splits every state into a write copy `q_w` and a read copy `q_r`.
///
/// Write actions are kept on write copies and read actions on read copies;
/// each transition may land in either copy of its target. Only read copies
/// are final. One extra λ `wstay` on `▷` from `q0_w` to `q0_r` lets the new
/// machine start with a read move and keeps the empty computation.
pub fn partition_states(m: &StackMachine) -> StackMachine {
    let n = m.num_states();
    let w = |q: usize| q;
    let r = |q: usize| q + n;
    let mut states: Vec<String> = m.states().iter().map(|s| format!("{s}_w")).collect();
    states.extend(m.states().iter().map(|s| format!("{s}_r")));
    let mut partition = vec![Mode::Write; n];
    partition.extend(vec![Mode::Read; n]);

    let mut transitions = Vec::new();
    for t in m.transitions() {
        let from = if t.action.is_write() { w(t.from) } else { r(t.from) };
        for to in [w(t.to), r(t.to)] {
            transitions.push(Transition { from, to, ..*t });
        }
    }
    transitions.push(Transition {
        from: w(m.initial()),
        input: None,
        stack: StackSym::Bottom,
        to: r(m.initial()),
        action: Action::WStay,
    });

    let class = if m.is_non_erasing() {
        MachineClass::Nesa
    } else {
        MachineClass::Sa
    };
    let mut parts = m.parts();
    parts.name = format!("{}_partitioned", m.name());
    parts.states = states;
    parts.transitions = transitions;
    parts.initial = w(m.initial());
    parts.finals = m.finals().iter().map(|&q| r(q)).collect();
    parts.partition = Some(partition);
    StackMachine::new(class, parts).expect("partitioned machine is well formed")
}

/// The same machine with every state final. For a checking machine this
/// makes write states final, which only the relaxed constructor allows.
pub fn all_states_final(m: &StackMachine) -> StackMachine {
    let mut parts = m.parts();
    parts.name = format!("{}_allfinal", m.name());
    parts.finals = (0..m.num_states()).collect::<BTreeSet<_>>();
    StackMachine::new_relaxed(m.class(), parts).expect("same structure as a valid machine")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_machine;

    #[test]
    fn doubles_states_and_keeps_read_finals() {
        let m = parse_machine(
            "machine SA name=s\ninput: a\nstack: x\nstates: p q r\ninitial: p\nfinal: q r\n\
             p , a / BOT -> q push x\nq , _ / x -> r left\n",
        )
        .unwrap();
        let mp = partition_states(&m);
        assert_eq!(mp.num_states(), 6);
        assert_eq!(mp.finals().iter().copied().collect::<Vec<_>>(), vec![4, 5]);
        assert_eq!(mp.class(), MachineClass::Nesa);
        assert!(mp
            .transitions()
            .iter()
            .all(|t| mp.mode(t.from) == Some(if t.action.is_write() { Mode::Write } else { Mode::Read })));
    }
}
