use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::product::{
    start_node, write_product, write_successors, Behaviors, ReadPhase, WNode, MARKED_TOP_KEY, TOP_KEY,
};
use super::{accepting_stacks, InputSpec, StackSet, StackSetKind};
use crate::error::Result;
use crate::model::{Action, StackMachine, StackSym, StateId, Tape};
use crate::nfa::Nfa;

/// Alphabet of store words: every state, every stack symbol, then `BOT`,
/// `TOP` and `HEAD`.
pub fn store_alphabet(m: &StackMachine) -> Vec<String> {
    let mut a: Vec<String> = m.states().to_vec();
    a.extend(m.stack_alphabet().iter().cloned());
    a.extend(["BOT", "TOP", "HEAD"].map(String::from));
    a
}

struct Sym {
    q: usize,
    bot: usize,
    top: usize,
    head: usize,
}

impl Sym {
    fn new(m: &StackMachine) -> Self {
        let q = m.num_states();
        let g = m.stack_alphabet().len();
        Sym {
            q,
            bot: q + g,
            top: q + g + 1,
            head: q + g + 2,
        }
    }

    fn stack(&self, y: usize) -> usize {
        self.q + y
    }
}

/// A state together with a tape and head position, e.g. `q BOT a HEAD b TOP`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StoreWord {
    pub state: StateId,
    pub tape: Tape,
}

impl StoreWord {
    /// Symbol ids over [`store_alphabet`].
    pub fn to_symbols(&self, m: &StackMachine) -> Vec<usize> {
        let s = Sym::new(m);
        let mut out = vec![self.state, s.bot];
        if self.tape.head == 0 {
            out.push(s.head);
        }
        for (i, &y) in self.tape.cells.iter().enumerate() {
            out.push(s.stack(y));
            if self.tape.head == i + 1 {
                out.push(s.head);
            }
        }
        out.push(s.top);
        if self.tape.head == self.tape.cells.len() + 1 {
            out.push(s.head);
        }
        out
    }

    /// Inverse of [`StoreWord::to_symbols`]; `None` for malformed words.
    pub fn from_symbols(m: &StackMachine, word: &[usize]) -> Option<StoreWord> {
        let s = Sym::new(m);
        let (&state, rest) = word.split_first()?;
        if state >= s.q || rest.first() != Some(&s.bot) {
            return None;
        }
        let mut cells = Vec::new();
        let mut head = None;
        let mut closed = false;
        for &x in &rest[1..] {
            if x == s.head {
                if head.is_some() {
                    return None;
                }
                head = Some(if closed { cells.len() + 1 } else { cells.len() });
            } else if closed {
                return None;
            } else if x == s.top {
                closed = true;
            } else if x >= s.q && x < s.bot {
                cells.push(x - s.q);
            } else {
                return None;
            }
        }
        if !closed {
            return None;
        }
        Some(StoreWord {
            state,
            tape: Tape { cells, head: head? },
        })
    }

    pub fn display<'a>(&'a self, m: &'a StackMachine) -> impl fmt::Display + 'a {
        struct D<'a>(&'a StoreWord, &'a StackMachine);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "{} {}",
                    self.1.states()[self.0.state],
                    crate::model::store_tape(self.1, &self.0.tape)
                )
            }
        }
        D(self, m)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Mark {
    Unmarked,
    NeedHead,
    Marked,
}

/// The store language: every `q BOT .. HEAD .. TOP` that occurs in some
/// accepting computation, over [`store_alphabet`], input unconstrained.
pub fn store_language(m: &StackMachine) -> Result<Nfa> {
    m.require_checking()?;
    let s = Sym::new(m);
    let mut nfa = Nfa::new(store_alphabet(m));
    let root = nfa.add_state();
    nfa.set_initial(root);
    let fin = nfa.add_state();
    nfa.set_final(fin);

    // write configurations: head on top, state is a write state
    let prod = write_product(m, InputSpec::Free);
    let good = prod.coreachable();
    let write_states: BTreeSet<StateId> = prod
        .nodes
        .iter()
        .enumerate()
        .filter(|&(i, (w, _))| good[i] && !m.is_read_state(w.q))
        .map(|(_, (w, _))| w.q)
        .collect();
    let mut rev = vec![Vec::new(); prod.nodes.len()];
    for &(p, _, q) in &prod.edges {
        if good[p] && good[q] {
            rev[q].push(p);
        }
    }
    for &q in &write_states {
        let mut keep = vec![false; prod.nodes.len()];
        let mut stack: Vec<usize> = (0..prod.nodes.len())
            .filter(|&i| good[i] && prod.nodes[i].0.q == q)
            .collect();
        for &i in &stack {
            keep[i] = true;
        }
        while let Some(x) = stack.pop() {
            for &p in &rev[x] {
                if !keep[p] {
                    keep[p] = true;
                    stack.push(p);
                }
            }
        }
        if !keep[0] {
            continue;
        }
        let mut ids = HashMap::new();
        for i in (0..prod.nodes.len()).filter(|&i| keep[i]) {
            ids.insert(i, nfa.add_state());
        }
        for &(p, y, x) in &prod.edges {
            if keep[p] && keep[x] {
                nfa.add_edge(ids[&p], y.map(|y| s.stack(y)), ids[&x]);
            }
        }
        let tok = nfa.add_state();
        nfa.add_edge(root, Some(q), tok);
        nfa.add_edge(tok, Some(s.bot), ids[&0]);
        let head = nfa.add_state();
        nfa.add_edge(head, Some(s.top), fin);
        for (&i, &id) in &ids {
            if prod.nodes[i].0.q == q {
                nfa.add_edge(id, Some(s.head), head);
            }
        }
    }

    // read configurations, one marked product per state
    for q in (0..m.num_states()).filter(|&q| m.is_read_state(q)) {
        read_branch(m, q, &s, &mut nfa, root, fin);
    }
    Ok(nfa.trim())
}

fn read_branch(m: &StackMachine, q: StateId, s: &Sym, nfa: &mut Nfa, root: usize, fin: usize) {
    let rp = ReadPhase::new(m, InputSpec::Free, Some(q));
    let g = m.stack_alphabet().len();
    let mut behs = Behaviors::new();
    let mut ids: HashMap<(WNode, usize, Mark), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut node = |key: (WNode, usize, Mark), nfa: &mut Nfa, queue: &mut VecDeque<(WNode, usize, Mark)>| {
        *ids.entry(key).or_insert_with(|| {
            queue.push_back(key);
            nfa.add_state()
        })
    };

    let tok = nfa.add_state();
    nfa.add_edge(root, Some(q), tok);
    let w0 = start_node(m);
    let b_plain = behs.intern(rp.bot.clone());
    let b_marked = behs.intern(rp.marked_bot.clone());
    let n1 = node((w0, b_plain, Mark::Unmarked), nfa, &mut queue);
    let n2 = node((w0, b_marked, Mark::NeedHead), nfa, &mut queue);
    nfa.add_edge(tok, Some(s.bot), n1);
    nfa.add_edge(tok, Some(s.bot), n2);
    let tail = nfa.add_state();
    nfa.add_edge(tail, Some(s.head), fin);

    while let Some(key @ (w, b, mark)) = queue.pop_front() {
        let id = node(key, nfa, &mut queue);
        if mark == Mark::NeedHead {
            let t = node((w, b, Mark::Marked), nfa, &mut queue);
            nfa.add_edge(id, Some(s.head), t);
        }
        if m.is_read_state(w.q) {
            let start = rp.start_state(w.q, 0).expect("read state");
            match mark {
                Mark::Marked if behs.accepts(b, TOP_KEY, &rp.top, start) => {
                    nfa.add_edge(id, Some(s.top), fin);
                }
                Mark::Unmarked if behs.accepts(b, MARKED_TOP_KEY, &rp.marked_top, start) => {
                    nfa.add_edge(id, Some(s.top), tail);
                }
                _ => {}
            }
            continue;
        }
        for (push, w2) in write_successors(m, InputSpec::Free, w) {
            match (push, mark) {
                (None, _) => {
                    let t = node((w2, b, mark), nfa, &mut queue);
                    nfa.add_edge(id, None, t);
                }
                (Some(_), Mark::NeedHead) => {}
                (Some(y), Mark::Unmarked) => {
                    let b1 = behs.extend(b, y, &rp.cells[y]);
                    let t = node((w2, b1, Mark::Unmarked), nfa, &mut queue);
                    nfa.add_edge(id, Some(s.stack(y)), t);
                    let b2 = behs.extend(b, g + y, &rp.marked_cells[y]);
                    let t = node((w2, b2, Mark::NeedHead), nfa, &mut queue);
                    nfa.add_edge(id, Some(s.stack(y)), t);
                }
                (Some(y), Mark::Marked) => {
                    let b1 = behs.extend(b, y, &rp.cells[y]);
                    let t = node((w2, b1, Mark::Marked), nfa, &mut queue);
                    nfa.add_edge(id, Some(s.stack(y)), t);
                }
            }
        }
    }
}

/// Final stacks of accepting computations, read off the store language:
/// words `p BOT γ HEAD TOP` with `p` a read state, reduced to `γ`.
pub fn final_stack_language(m: &StackMachine) -> Result<StackSet> {
    let store = store_language(m)?;
    let s = Sym::new(m);
    let mut shape = Nfa::new(store.alphabet().to_vec());
    shape.add_states(4);
    shape.set_initial(0);
    shape.set_final(3);
    for q in (0..m.num_states()).filter(|&q| m.is_read_state(q)) {
        shape.add_edge(0, Some(q), 1);
    }
    // 1 --BOT--> 2 --γ*--> 2 --HEAD TOP--> 3
    let h = shape.add_state();
    shape.add_edge(1, Some(s.bot), 2);
    for y in 0..m.stack_alphabet().len() {
        shape.add_edge(2, Some(s.stack(y)), 2);
    }
    shape.add_edge(2, Some(s.head), h);
    shape.add_edge(h, Some(s.top), 3);
    let restricted = store.product(&shape)?;
    let nfa = restricted
        .relabel(m.stack_alphabet().to_vec(), |a| {
            (a >= s.q && a < s.bot).then(|| a - s.q)
        })
        .trim();
    Ok(StackSet {
        nfa,
        kind: StackSetKind::FinalStacks,
    })
}

/// Final stacks of accepting computations, computed directly from the
/// write/read product without going through the store language.
pub fn final_stack_language_direct(m: &StackMachine) -> Result<StackSet> {
    Ok(StackSet {
        nfa: accepting_stacks(m, InputSpec::Free)?,
        kind: StackSetKind::FinalStacks,
    })
}

/// Input prefixes consumed by the whole write phase of some accepting
/// computation. Simulates the write phase while feeding pushed symbols to
/// the store-language automaton; states are `(p, q, top, s)` where `p` is
/// the guessed state of the store word, `q` the simulated write state and
/// `s` a state of the store automaton.
pub fn write_prefix_language(m: &StackMachine) -> Result<Nfa> {
    let store = store_language(m)?;
    let sym = Sym::new(m);
    let mut out = Nfa::new(m.input_alphabet().to_vec());
    let n0 = out.add_state();
    out.set_initial(n0);

    type Key = (StateId, StateId, StackSym, usize);
    let mut ids: HashMap<Key, usize> = HashMap::new();
    let mut queue: VecDeque<Key> = VecDeque::new();
    let mut node = |k: Key, out: &mut Nfa, queue: &mut VecDeque<Key>| {
        *ids.entry(k).or_insert_with(|| {
            queue.push_back(k);
            out.add_state()
        })
    };

    let init: BTreeSet<usize> = store.initial().clone();
    for p in 0..m.num_states() {
        let after_p = store.step_set(&store.closure_of(&init), p);
        let after_bot = store.step_set(&after_p, sym.bot);
        for &st in &after_bot {
            let t = node((p, m.initial(), StackSym::Bottom, st), &mut out, &mut queue);
            out.add_edge(n0, None, t);
        }
    }
    let finals_from = |st: usize| {
        let a = store.step_set(&store.closure_of(&BTreeSet::from([st])), sym.head);
        let b = store.step_set(&a, sym.top);
        b.iter().any(|x| store.finals().contains(x))
    };

    while let Some(k @ (p, q, top, st)) = queue.pop_front() {
        let id = node(k, &mut out, &mut queue);
        if p == q && m.is_read_state(p) && finals_from(st) {
            out.set_final(id);
        }
        for &(lbl, st2) in store.out_edges(st) {
            if lbl.is_none() {
                let t = node((p, q, top, st2), &mut out, &mut queue);
                out.add_edge(id, None, t);
            }
        }
        if m.is_read_state(q) {
            continue;
        }
        for t in m.transitions_from(q) {
            if t.stack != top {
                continue;
            }
            match t.action {
                Action::WStay => {
                    let x = node((p, t.to, top, st), &mut out, &mut queue);
                    out.add_edge(id, t.input, x);
                }
                Action::Push(y) => {
                    for &(lbl, st2) in store.out_edges(st) {
                        if lbl == Some(sym.stack(y)) {
                            let x = node((p, t.to, StackSym::Sym(y), st2), &mut out, &mut queue);
                            out.add_edge(id, t.input, x);
                        }
                    }
                }
                _ => {}
            }
        }
    }
    Ok(out.trim())
}
