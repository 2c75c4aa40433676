//! Decision procedures for checking stack automata: z-limitedness via the
//! primed-window machine, constant space via store-language finiteness, and
//! the three-way classification built from both.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::csa::store_language;
use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::model::{all_states_final, Action, MachineParts, Mode, StackMachine, StackSym, Transition};
use crate::nfa::Nfa;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Before,
    Inside,
    After,
}

const PHASES: [Phase; 3] = [Phase::Before, Phase::Inside, Phase::After];

/// Copy of `m` that may mark one window of its write phase: inside the
/// window only λ-moves are allowed and every pushed symbol is primed. The
/// read phase may cross primed cells with λ-moves only. Write states are
/// tripled (before, inside, after the window); read states are kept once.
///
/// Stack symbol `y` becomes `y'` when primed; primed ids are `g + y`.
pub fn primed_machine(m: &StackMachine) -> Result<StackMachine> {
    m.require_checking()?;
    let n = m.num_states();
    let g = m.stack_alphabet().len();
    let mut states = Vec::new();
    let mut partition = Vec::new();
    // id of (q, phase); read states ignore the phase
    let mut ids = vec![[0usize; 3]; n];
    for (q, id) in ids.iter_mut().enumerate() {
        if m.is_read_state(q) {
            *id = [states.len(); 3];
            states.push(m.states()[q].clone());
            partition.push(Mode::Read);
        } else {
            for (k, tag) in ["", "_in", "_after"].iter().enumerate() {
                id[k] = states.len();
                states.push(format!("{}{tag}", m.states()[q]));
                partition.push(Mode::Write);
            }
        }
    }
    let mut stack_alphabet = m.stack_alphabet().to_vec();
    for y in m.stack_alphabet() {
        let mut name = format!("{y}'");
        while m.stack_alphabet().contains(&name) {
            name.push('\'');
        }
        stack_alphabet.push(name);
    }
    let variants = |s: StackSym| match s {
        StackSym::Sym(y) => vec![StackSym::Sym(y), StackSym::Sym(g + y)],
        other => vec![other],
    };

    let mut transitions = Vec::new();
    for t in m.transitions() {
        if m.is_read_state(t.from) {
            for stack in variants(t.stack) {
                let primed = matches!(stack, StackSym::Sym(y) if y >= g);
                if primed && t.input.is_some() {
                    continue;
                }
                transitions.push(Transition {
                    from: ids[t.from][0],
                    stack,
                    to: ids[t.to][0],
                    ..*t
                });
            }
            continue;
        }
        for (k, phase) in PHASES.iter().enumerate() {
            if *phase == Phase::Inside && t.input.is_some() {
                continue;
            }
            let action = match (t.action, phase) {
                (Action::Push(y), Phase::Inside) => Action::Push(g + y),
                (a, _) => a,
            };
            for stack in variants(t.stack) {
                transitions.push(Transition {
                    from: ids[t.from][k],
                    stack,
                    to: ids[t.to][k],
                    action,
                    ..*t
                });
            }
        }
    }
    // window boundaries, on every possible top
    let mut tops = vec![StackSym::Bottom];
    tops.extend((0..2 * g).map(StackSym::Sym));
    for q in (0..n).filter(|&q| !m.is_read_state(q)) {
        for &stack in &tops {
            for (a, b) in [(0, 1), (1, 2)] {
                transitions.push(Transition {
                    from: ids[q][a],
                    input: None,
                    stack,
                    to: ids[q][b],
                    action: Action::WStay,
                });
            }
        }
    }
    let mut finals = std::collections::BTreeSet::new();
    for &f in m.finals() {
        finals.extend(ids[f]);
    }
    let parts = MachineParts {
        name: format!("{}_primed", m.name()),
        states,
        input_alphabet: m.input_alphabet().to_vec(),
        stack_alphabet,
        transitions,
        initial: ids[m.initial()][0],
        finals,
        partition: Some(partition),
    };
    StackMachine::new_relaxed(m.class(), parts)
}

/// The primed symbols occurring in store words of the primed machine, with
/// everything else erased, over the primed half of its stack alphabet.
pub fn primed_image(m: &StackMachine) -> Result<Nfa> {
    let mp = primed_machine(m)?;
    let store = store_language(&mp)?;
    let q = mp.num_states();
    let g = m.stack_alphabet().len();
    let primed = (q + g)..(q + 2 * g);
    let alphabet = mp.stack_alphabet()[g..].to_vec();
    Ok(store
        .relabel(alphabet, |a| primed.contains(&a).then(|| a - q - g))
        .trim())
}

fn measured_machine(m: &StackMachine, z: Measure) -> Result<StackMachine> {
    m.require_checking()?;
    match z {
        Measure::Accept => Ok(m.clone()),
        Measure::Strong => Ok(all_states_final(m)),
        Measure::Weak => Err(Error::InvalidMachine(
            "no decision procedure exists for the weak measure".into(),
        )),
    }
}

/// Shortest word from `from` to a state in `to`, with λ edges free.
fn shortest_between(nfa: &Nfa, from: usize, to: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let mut prev: Vec<Option<(usize, Option<usize>)>> = vec![None; nfa.num_states()];
    let mut dist = vec![usize::MAX; nfa.num_states()];
    let mut deque = VecDeque::from([from]);
    dist[from] = 0;
    while let Some(q) = deque.pop_front() {
        if to(q) {
            let mut w = Vec::new();
            let mut x = q;
            while let Some((p, a)) = prev[x] {
                w.extend(a);
                x = p;
            }
            w.reverse();
            return Some(w);
        }
        for &(a, r) in nfa.out_edges(q) {
            let d = dist[q] + usize::from(a.is_some());
            if d < dist[r] {
                dist[r] = d;
                prev[r] = Some((q, a));
                if a.is_some() {
                    deque.push_back(r);
                } else {
                    deque.push_front(r);
                }
            }
        }
    }
    None
}

/// Shortest accepted word whose accepting path runs once around a cycle
/// that reads at least one symbol. Present exactly when the (trimmed)
/// language is infinite.
fn pumping_witness(nfa: &Nfa) -> Option<Vec<usize>> {
    let nfa = nfa.trim();
    let mut best: Option<Vec<usize>> = None;
    for &init in nfa.initial() {
        for v in 0..nfa.num_states() {
            let Some(lead) = shortest_between(&nfa, init, |q| q == v) else {
                continue;
            };
            let Some(tail) = shortest_between(&nfa, v, |q| nfa.finals().contains(&q)) else {
                continue;
            };
            for &(a, w) in nfa.out_edges(v) {
                let Some(a) = a else { continue };
                let Some(back) = shortest_between(&nfa, w, |q| q == v) else {
                    continue;
                };
                let word: Vec<usize> = lead.iter().chain([&a]).chain(&back).chain(&tail).copied().collect();
                if best.as_ref().is_none_or(|b| word.len() < b.len()) {
                    best = Some(word);
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Evidence {
    /// Finiteness of the store language; `None` when it was not needed.
    pub store_finite: Option<bool>,
    pub primed_image_finite: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limitedness {
    pub limited: bool,
    pub evidence: Evidence,
}

/// Is `m` z-limited, for `z` accept or strong? Decided by finiteness of the
/// primed image of the (all-final, for strong) machine.
pub fn is_z_limited(m: &StackMachine, z: Measure) -> Result<Limitedness> {
    let mz = measured_machine(m, z)?;
    let image = primed_image(&mz)?;
    let finite = image.is_finite();
    let witness = if finite {
        image.longest_word()
    } else {
        pumping_witness(&image)
    };
    Ok(Limitedness {
        limited: finite,
        evidence: Evidence {
            store_finite: None,
            primed_image_finite: finite,
            witness: witness.map(|w| render(&image, &w)),
        },
    })
}

/// Is `σᶻ(n)` bounded by a constant? Decided by store-language finiteness.
pub fn is_constant_space(m: &StackMachine, z: Measure) -> Result<bool> {
    let mz = measured_machine(m, z)?;
    Ok(store_language(&mz)?.is_finite())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Unlimited,
    Constant,
    Linear,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Unlimited => "unlimited",
            Verdict::Constant => "constant",
            Verdict::Linear => "linear",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "unlimited" => Ok(Verdict::Unlimited),
            "constant" => Ok(Verdict::Constant),
            "linear" => Ok(Verdict::Linear),
            _ => Err(format!("unknown verdict `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierVerdict {
    pub measure: Measure,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

/// Unlimited if not z-limited, else Constant if the store language is
/// finite, else Linear.
pub fn classify(m: &StackMachine, z: Measure) -> Result<ClassifierVerdict> {
    let lim = is_z_limited(m, z)?;
    if !lim.limited {
        return Ok(ClassifierVerdict {
            measure: z,
            verdict: Verdict::Unlimited,
            evidence: lim.evidence,
        });
    }
    let mz = measured_machine(m, z)?;
    let store = store_language(&mz)?;
    let finite = store.is_finite();
    let witness = if finite {
        store.longest_word()
    } else {
        pumping_witness(&store)
    };
    Ok(ClassifierVerdict {
        measure: z,
        verdict: if finite { Verdict::Constant } else { Verdict::Linear },
        evidence: Evidence {
            store_finite: Some(finite),
            primed_image_finite: true,
            witness: witness.map(|w| render(&store, &w)),
        },
    })
}

fn render(nfa: &Nfa, w: &[usize]) -> String {
    w.iter()
        .map(|&a| nfa.alphabet()[a].as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
