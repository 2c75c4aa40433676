use std::collections::{HashMap, VecDeque};

use super::InputSpec;
use crate::model::{Action, Mode, StackMachine, StackSym, StackSymId, StateId};
use crate::nfa::{Behavior, Move, Nfa};

/// Write-phase position: machine state, input consumed, top of stack.
/// A node whose state is a read state marks the end of the write phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct WNode {
    pub q: StateId,
    pub i: usize,
    pub top: StackSym,
}

pub(crate) fn start_node(m: &StackMachine) -> WNode {
    WNode {
        q: m.initial(),
        i: 0,
        top: StackSym::Bottom,
    }
}

/// Write moves out of `w`: `(pushed symbol or None for wstay, target)`.
pub(crate) fn write_successors(m: &StackMachine, input: InputSpec<'_>, w: WNode) -> Vec<(Option<StackSymId>, WNode)> {
    if m.is_read_state(w.q) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for t in m.transitions_from(w.q) {
        if t.stack != w.top {
            continue;
        }
        let Some(i) = input.consume(w.i, t.input) else { continue };
        match t.action {
            Action::WStay => out.push((None, WNode { q: t.to, i, top: w.top })),
            Action::Push(y) => out.push((
                Some(y),
                WNode {
                    q: t.to,
                    i,
                    top: StackSym::Sym(y),
                },
            )),
            _ => {}
        }
    }
    out
}

/// The read phase as a two-way automaton over the stack. Its states pair a
/// read state with the input position, and with a phase bit when one tape
/// cell is marked (used to pin the head position of a store word).
pub(crate) struct ReadPhase {
    ridx: Vec<Option<usize>>,
    slots: usize,
    phases: usize,
    pub cells: Vec<Behavior>,
    pub bot: Behavior,
    pub top: Behavior,
    pub marked_cells: Vec<Behavior>,
    pub marked_bot: Behavior,
    pub marked_top: Behavior,
}

impl ReadPhase {
    pub fn new(m: &StackMachine, input: InputSpec<'_>, mark: Option<StateId>) -> Self {
        let mut ridx = vec![None; m.num_states()];
        let mut count = 0;
        for (q, slot) in ridx.iter_mut().enumerate() {
            if m.mode(q) == Some(Mode::Read) {
                *slot = Some(count);
                count += 1;
            }
        }
        let slots = input.slots();
        let phases = if mark.is_some() { 2 } else { 1 };
        let n = count * slots * phases;
        let tw = |r: usize, j: usize, ph: usize| (r * slots + j) * phases + ph;

        let mut moves: HashMap<StackSym, Vec<(usize, usize, Move)>> = HashMap::new();
        for t in m.transitions() {
            let (Some(rf), Some(rt)) = (ridx[t.from], ridx[t.to]) else {
                continue;
            };
            let mv = match t.action {
                Action::Left => Move::L,
                Action::RStay => Move::S,
                Action::Right => Move::R,
                _ => continue,
            };
            let list = moves.entry(t.stack).or_default();
            for j in 0..slots {
                let Some(j2) = input.consume(j, t.input) else { continue };
                for ph in 0..phases {
                    list.push((tw(rf, j, ph), tw(rt, j2, ph), mv));
                }
            }
        }
        let mut finals = vec![false; n];
        for &f in m.finals() {
            if let Some(r) = ridx[f] {
                finals[tw(r, slots - 1, phases - 1)] = true;
            }
        }
        let mut marks = Vec::new();
        if let Some(q) = mark {
            if let Some(r) = ridx[q] {
                for j in 0..slots {
                    marks.push((tw(r, j, 0), tw(r, j, 1), Move::S));
                }
            }
        }
        let build = |sym: StackSym, marked: bool| {
            let mut mv = moves.get(&sym).cloned().unwrap_or_default();
            if marked {
                mv.extend_from_slice(&marks);
            }
            Behavior::cell(n, &mv, &finals)
        };
        let syms = m.stack_alphabet().len();
        let cells = (0..syms).map(|y| build(StackSym::Sym(y), false)).collect();
        let (marked_cells, marked_bot, marked_top) = if mark.is_some() {
            (
                (0..syms).map(|y| build(StackSym::Sym(y), true)).collect(),
                build(StackSym::Bottom, true),
                build(StackSym::Top, true),
            )
        } else {
            (Vec::new(), Behavior::identity(0), Behavior::identity(0))
        };
        ReadPhase {
            ridx,
            slots,
            phases,
            cells,
            bot: build(StackSym::Bottom, false),
            top: build(StackSym::Top, false),
            marked_cells,
            marked_bot,
            marked_top,
        }
    }

    /// Two-way state for read state `q` at input position `j`, phase 0.
    pub fn start_state(&self, q: StateId, j: usize) -> Option<usize> {
        let r = self.ridx[q]?;
        (j < self.slots).then(|| (r * self.slots + j) * self.phases)
    }
}

/// Interning table for behaviors with a composition cache.
pub(crate) struct Behaviors {
    pub list: Vec<Behavior>,
    index: HashMap<Behavior, usize>,
    compose_cache: HashMap<(usize, usize), usize>,
    accept_cache: HashMap<(usize, usize, usize), bool>,
}

impl Behaviors {
    pub fn new() -> Self {
        Behaviors {
            list: Vec::new(),
            index: HashMap::new(),
            compose_cache: HashMap::new(),
            accept_cache: HashMap::new(),
        }
    }

    pub fn intern(&mut self, b: Behavior) -> usize {
        if let Some(&id) = self.index.get(&b) {
            return id;
        }
        self.list.push(b.clone());
        self.index.insert(b, self.list.len() - 1);
        self.list.len() - 1
    }

    /// `list[id] · cell`, where `cell_key` identifies `cell` for caching.
    pub fn extend(&mut self, id: usize, cell_key: usize, cell: &Behavior) -> usize {
        if let Some(&r) = self.compose_cache.get(&(id, cell_key)) {
            return r;
        }
        let b = self.list[id].compose(cell);
        let r = self.intern(b);
        self.compose_cache.insert((id, cell_key), r);
        r
    }

    /// Does a read phase started on the top cell in two-way state `s` accept,
    /// with `right` the behavior of the cell holding `◁`?
    pub fn accepts(&mut self, id: usize, right_key: usize, right: &Behavior, s: usize) -> bool {
        if let Some(&r) = self.accept_cache.get(&(id, right_key, s)) {
            return r;
        }
        let r = Behavior::accepts_at_junction(&self.list[id], right, s);
        self.accept_cache.insert((id, right_key, s), r);
        r
    }
}

/// Product of the write phase with read-phase behaviors, as a graph over
/// pushed stack symbols.
pub(crate) struct WriteProduct {
    pub nodes: Vec<(WNode, usize)>,
    pub edges: Vec<(usize, Option<StackSymId>, usize)>,
    pub accepting: Vec<bool>,
}

impl WriteProduct {
    pub fn to_nfa(&self, m: &StackMachine) -> Nfa {
        Nfa::from_parts(
            m.stack_alphabet().to_vec(),
            self.nodes.len(),
            self.edges.iter().copied(),
            [0],
            (0..self.nodes.len()).filter(|&i| self.accepting[i]),
        )
        .trim()
    }

    /// Nodes from which an accepting node is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let mut rev = vec![Vec::new(); self.nodes.len()];
        for &(p, _, q) in &self.edges {
            rev[q].push(p);
        }
        let mut good = self.accepting.clone();
        let mut stack: Vec<usize> = (0..self.nodes.len()).filter(|&i| good[i]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !good[p] {
                    good[p] = true;
                    stack.push(p);
                }
            }
        }
        good
    }
}

pub(crate) const TOP_KEY: usize = usize::MAX;
pub(crate) const MARKED_TOP_KEY: usize = usize::MAX - 1;

pub(crate) fn write_product(m: &StackMachine, input: InputSpec<'_>) -> WriteProduct {
    let rp = ReadPhase::new(m, input, None);
    let mut behs = Behaviors::new();
    let b0 = behs.intern(rp.bot.clone());
    let mut index: HashMap<(WNode, usize), usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut queue = VecDeque::new();
    let start = (start_node(m), b0);
    index.insert(start, 0);
    nodes.push(start);
    queue.push_back(0);
    let mut edges = Vec::new();
    let mut accepting = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (w, b) = nodes[id];
        let acc = if m.is_read_state(w.q) {
            let s = rp.start_state(w.q, w.i).expect("read state");
            behs.accepts(b, TOP_KEY, &rp.top, s)
        } else {
            m.is_final(w.q) && w.i == input.last()
        };
        if accepting.len() <= id {
            accepting.resize(id + 1, false);
        }
        accepting[id] = acc;
        for (push, w2) in write_successors(m, input, w) {
            let b2 = match push {
                Some(y) => behs.extend(b, y, &rp.cells[y]),
                None => b,
            };
            let key = (w2, b2);
            let target = match index.get(&key) {
                Some(&t) => t,
                None => {
                    nodes.push(key);
                    let t = nodes.len() - 1;
                    index.insert(key, t);
                    queue.push_back(t);
                    t
                }
            };
            edges.push((id, push, target));
        }
    }
    accepting.resize(nodes.len(), false);
    WriteProduct {
        nodes,
        edges,
        accepting,
    }
}

/// Stacks of all reachable write-phase nodes, every node accepting.
pub(crate) fn write_reach(m: &StackMachine, input: InputSpec<'_>) -> Nfa {
    let mut index: HashMap<WNode, usize> = HashMap::new();
    let mut nodes = vec![start_node(m)];
    index.insert(nodes[0], 0);
    let mut edges = Vec::new();
    let mut k = 0;
    while k < nodes.len() {
        for (push, w2) in write_successors(m, input, nodes[k]) {
            let t = *index.entry(w2).or_insert_with(|| {
                nodes.push(w2);
                nodes.len() - 1
            });
            edges.push((k, push, t));
        }
        k += 1;
    }
    Nfa::from_parts(m.stack_alphabet().to_vec(), nodes.len(), edges, [0], 0..nodes.len())
}
