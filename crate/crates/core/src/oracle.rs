//! Brute-force ground truth: breadth-first search over configurations with a
//! stack cap and a node cap. Everything here works on single configurations
//! and shares no code with the regular-language analyses in [`crate::csa`].

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::csa::StoreWord;
use crate::measures::MeasureValue;
use crate::model::{
    initial_configuration, step, Action, Configuration, InputSym, MachineClass, StackMachine, StackSym, StateId, Tape,
    Transition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budget {
    pub stack_cap: usize,
    pub node_cap: usize,
    pub input_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            stack_cap: 12,
            node_cap: 2_000_000,
            input_cap: 6,
        }
    }
}

impl Budget {
    pub fn with_stack_cap(self, stack_cap: usize) -> Self {
        Budget { stack_cap, ..self }
    }

    pub fn with_input_cap(self, input_cap: usize) -> Self {
        Budget { input_cap, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Accepted,
    Rejected,
    Unknown,
}

/// Explored part of a configuration graph. `cut` is set when some
/// successor was dropped for exceeding the stack cap, `truncated` when the
/// node cap stopped the search.
#[derive(Debug, Clone)]
pub struct Graph<K> {
    pub nodes: Vec<K>,
    pub succ: Vec<Vec<u32>>,
    pub cut: bool,
    pub truncated: bool,
}

impl<K> Graph<K> {
    pub fn exhaustive(&self) -> bool {
        !self.cut && !self.truncated
    }

    /// Nodes from which a node satisfying `goal` is reachable.
    pub fn coreachable(&self, goal: impl Fn(&K) -> bool) -> Vec<bool> {
        let mut rev = vec![Vec::new(); self.nodes.len()];
        for (i, out) in self.succ.iter().enumerate() {
            for &j in out {
                rev[j as usize].push(i as u32);
            }
        }
        let mut good: Vec<bool> = self.nodes.iter().map(&goal).collect();
        let mut stack: Vec<u32> = (0..self.nodes.len() as u32).filter(|&i| good[i as usize]).collect();
        while let Some(j) = stack.pop() {
            for &i in &rev[j as usize] {
                if !good[i as usize] {
                    good[i as usize] = true;
                    stack.push(i);
                }
            }
        }
        good
    }
}

fn bfs<K: Clone + Eq + Hash>(start: K, node_cap: usize, mut succ: impl FnMut(&K) -> Vec<Option<K>>) -> Graph<K> {
    let mut index: HashMap<K, u32> = HashMap::new();
    let mut g = Graph {
        nodes: vec![start.clone()],
        succ: vec![Vec::new()],
        cut: false,
        truncated: false,
    };
    index.insert(start, 0);
    let mut k = 0;
    while k < g.nodes.len() {
        let next = succ(&g.nodes[k]);
        let mut out = Vec::with_capacity(next.len());
        for n in next {
            let Some(n) = n else {
                g.cut = true;
                continue;
            };
            if let Some(&j) = index.get(&n) {
                out.push(j);
                continue;
            }
            if g.nodes.len() >= node_cap {
                g.truncated = true;
                continue;
            }
            let j = g.nodes.len() as u32;
            index.insert(n.clone(), j);
            g.nodes.push(n);
            g.succ.push(Vec::new());
            out.push(j);
        }
        out.dedup();
        g.succ[k] = out;
        k += 1;
    }
    g
}

/// Configuration graph of `m` on `u`, restricted to stacks of at most
/// `budget.stack_cap` symbols.
pub fn explore_graph(m: &StackMachine, u: &[InputSym], budget: Budget) -> Graph<Configuration> {
    explore_from(m, u, initial_configuration(m), budget.stack_cap, budget.node_cap)
}

fn explore_from(
    m: &StackMachine,
    u: &[InputSym],
    c0: Configuration,
    cap: usize,
    node_cap: usize,
) -> Graph<Configuration> {
    bfs(c0, node_cap, |c| {
        step(m, u, c)
            .into_iter()
            .map(|d| (d.stack_size() <= cap).then_some(d))
            .collect()
    })
}

/// A pumpable λ cycle: from `from`, the λ moves `path` lead to a point
/// where `cycle` can be repeated forever, each round pushing at least one
/// symbol without reading input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pump {
    pub from: Configuration,
    pub path: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Pump {
    /// Applies `path` and then `rounds` copies of `cycle`.
    pub fn run(&self, m: &StackMachine, u: &[InputSym], rounds: usize) -> Option<Configuration> {
        let ts = m.transitions();
        let mut c = self.from.clone();
        let seq = self
            .path
            .iter()
            .chain(std::iter::repeat_n(&self.cycle, rounds).flatten());
        for &t in seq {
            c = crate::model::apply(u, &c, &ts[t])?;
        }
        Some(c)
    }

    /// Pumping twice more yields a strictly larger stack each time.
    pub fn verify(&self, m: &StackMachine, u: &[InputSym]) -> bool {
        let sizes: Option<Vec<usize>> = (0..3).map(|r| self.run(m, u, r).map(|c| c.stack_size())).collect();
        matches!(sizes.as_deref(), Some([a, b, c]) if a < b && b < c)
    }

    pub fn describe(&self, m: &StackMachine, u: &[InputSym]) -> String {
        let cyc: Vec<String> = self.cycle.iter().map(|&t| m.describe(&m.transitions()[t])).collect();
        format!("from {} repeat [{}]", self.from.display(m, u), cyc.join("; "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Strong,
    Accept,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub pump: Pump,
}

/// λ-only graph on `(state, top symbol)` with the head on the top symbol.
type TopNode = (StateId, StackSym);

struct TopGraph {
    // edges[(q, top)] = (transition, target)
    edges: HashMap<TopNode, Vec<(usize, TopNode)>>,
}

impl TopGraph {
    fn new(m: &StackMachine) -> Self {
        let mut edges: HashMap<_, Vec<_>> = HashMap::new();
        for (i, t) in m.transitions().iter().enumerate() {
            if t.input.is_some() || t.stack == StackSym::Top {
                continue;
            }
            let to = match t.action {
                Action::WStay | Action::RStay => (t.to, t.stack),
                Action::Push(y) => (t.to, StackSym::Sym(y)),
                _ => continue,
            };
            edges.entry((t.from, t.stack)).or_default().push((i, to));
        }
        TopGraph { edges }
    }

    fn out(&self, v: (StateId, StackSym)) -> &[(usize, (StateId, StackSym))] {
        self.edges.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Shortest transition sequence from `a` to `b`.
    fn path(&self, a: (StateId, StackSym), b: (StateId, StackSym)) -> Option<Vec<usize>> {
        let mut parent: HashMap<TopNode, Option<(usize, TopNode)>> = HashMap::new();
        parent.insert(a, None);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                let mut seq = Vec::new();
                let mut x = v;
                while let Some(Some((t, p))) = parent.get(&x) {
                    seq.push(*t);
                    x = *p;
                }
                seq.reverse();
                return Some(seq);
            }
            for &(t, w) in self.out(v) {
                parent.entry(w).or_insert_with(|| {
                    queue.push_back(w);
                    Some((t, v))
                });
            }
        }
        None
    }

    /// A path from `v` to some node lying on a cycle that contains a push.
    fn pump(&self, m: &StackMachine, v: (StateId, StackSym)) -> Option<(Vec<usize>, Vec<usize>)> {
        let ts = m.transitions();
        let mut seen = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &(t, y) in self.out(x) {
                if matches!(ts[t].action, Action::Push(_)) {
                    if let Some(back) = self.path(y, x) {
                        let lead = self.path(v, x).expect("reached");
                        let mut cycle = vec![t];
                        cycle.extend(back);
                        return Some((lead, cycle));
                    }
                }
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

fn pump_at(m: &StackMachine, tg: &TopGraph, c: &Configuration) -> Option<Pump> {
    if !c.tape.at_top_symbol() {
        return None;
    }
    let top = c.tape.scanned();
    let (path, cycle) = tg.pump(m, (c.state, top))?;
    Some(Pump {
        from: c.clone(),
        path,
        cycle,
    })
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub membership: Membership,
    pub weak: MeasureValue,
    pub accept: MeasureValue,
    pub strong: MeasureValue,
    pub visited: usize,
    pub truncated: bool,
    pub certificates: Vec<Certificate>,
}

impl OracleReport {
    pub fn value(&self, measure: crate::measures::Measure) -> MeasureValue {
        use crate::measures::Measure::*;
        match measure {
            Weak => self.weak,
            Accept => self.accept,
            Strong => self.strong,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReportJson {
    pub membership: Membership,
    pub weak: MeasureValue,
    pub accept: MeasureValue,
    pub strong: MeasureValue,
    pub visited: usize,
    pub truncated: bool,
    pub certificates: Vec<(CertificateKind, String)>,
}

impl OracleReport {
    pub fn to_json(&self, m: &StackMachine, u: &[InputSym]) -> OracleReportJson {
        OracleReportJson {
            membership: self.membership,
            weak: self.weak,
            accept: self.accept,
            strong: self.strong,
            visited: self.visited,
            truncated: self.truncated,
            certificates: self
                .certificates
                .iter()
                .map(|c| (c.kind, c.pump.describe(m, u)))
                .collect(),
        }
    }
}

fn accepting(m: &StackMachine, n: usize) -> impl Fn(&Configuration) -> bool + '_ {
    move |c| m.is_final(c.state) && c.pos == n
}

/// Smallest possible peak stack over paths from node 0 to an accepting node.
fn min_peak(g: &Graph<Configuration>, acc: &dyn Fn(&Configuration) -> bool) -> Option<usize> {
    let mut best = vec![usize::MAX; g.nodes.len()];
    let mut heap = BinaryHeap::new();
    best[0] = g.nodes[0].stack_size();
    heap.push(Reverse((best[0], 0u32)));
    while let Some(Reverse((d, i))) = heap.pop() {
        let i = i as usize;
        if d > best[i] {
            continue;
        }
        if acc(&g.nodes[i]) {
            return Some(d);
        }
        for &j in &g.succ[i] {
            let nd = d.max(g.nodes[j as usize].stack_size());
            if nd < best[j as usize] {
                best[j as usize] = nd;
                heap.push(Reverse((nd, j)));
            }
        }
    }
    None
}

/// How many extra rounds an accept certificate is re-checked with.
const ACCEPT_PUMPS: usize = 3;
/// How many candidate configurations an accept certificate search tries.
const ACCEPT_CANDIDATES: usize = 32;

/// Runs the configuration search on `u` and reads off all three measures.
pub fn explore(m: &StackMachine, u: &[InputSym], budget: Budget) -> OracleReport {
    let g = explore_graph(m, u, budget);
    let acc = accepting(m, u.len());
    let co = g.coreachable(&acc);
    let found = g.nodes.iter().any(&acc);
    let membership = match (found, g.exhaustive()) {
        (true, _) => Membership::Accepted,
        (false, true) => Membership::Rejected,
        (false, false) => Membership::Unknown,
    };
    let pumps_allowed = m.class() != MachineClass::Sa && m.is_non_erasing();
    let tg = TopGraph::new(m);
    let mut certificates = Vec::new();

    let max_reach = g.nodes.iter().map(Configuration::stack_size).max().unwrap_or(0);
    let strong = if g.exhaustive() {
        MeasureValue::Finite(max_reach)
    } else {
        let cert = pumps_allowed
            .then(|| {
                g.nodes
                    .iter()
                    .find_map(|c| pump_at(m, &tg, c).filter(|p| p.verify(m, u)))
            })
            .flatten();
        match cert {
            Some(pump) => {
                certificates.push(Certificate {
                    kind: CertificateKind::Strong,
                    pump,
                });
                MeasureValue::Infinite
            }
            None => MeasureValue::AtLeast(if g.cut {
                max_reach.max(budget.stack_cap + 1)
            } else {
                max_reach
            }),
        }
    };

    let weak = match membership {
        Membership::Rejected => MeasureValue::Finite(0),
        Membership::Accepted if !g.truncated => MeasureValue::Finite(min_peak(&g, &acc).expect("accepting node")),
        _ => MeasureValue::AtLeast(0),
    };

    let max_acc = (0..g.nodes.len())
        .filter(|&i| co[i])
        .map(|i| g.nodes[i].stack_size())
        .max()
        .unwrap_or(0);
    let accept = match membership {
        Membership::Rejected => MeasureValue::Finite(0),
        _ if g.exhaustive() => MeasureValue::Finite(max_acc),
        _ => {
            let cert = if pumps_allowed && m.is_checking() {
                accept_pump(m, u, &g, &co, &tg, budget)
            } else {
                None
            };
            match cert {
                Some(pump) => {
                    certificates.push(Certificate {
                        kind: CertificateKind::Accept,
                        pump,
                    });
                    MeasureValue::Infinite
                }
                None => MeasureValue::AtLeast(max_acc),
            }
        }
    };

    OracleReport {
        membership,
        weak,
        accept,
        strong,
        visited: g.nodes.len(),
        truncated: !g.exhaustive(),
        certificates,
    }
}

/// Looks for a pump on an accepting computation such that the pumped
/// configurations still lead to acceptance.
fn accept_pump(
    m: &StackMachine,
    u: &[InputSym],
    g: &Graph<Configuration>,
    co: &[bool],
    tg: &TopGraph,
    budget: Budget,
) -> Option<Pump> {
    let mut tried = BTreeSet::new();
    for (i, c) in g.nodes.iter().enumerate() {
        if !co[i] || !m.is_write_state(c.state) || !c.tape.at_top_symbol() {
            continue;
        }
        if !tried.insert((c.state, c.pos, c.tape.scanned())) {
            continue;
        }
        if tried.len() > ACCEPT_CANDIDATES {
            break;
        }
        let Some(pump) = pump_at(m, tg, c) else { continue };
        if !pump.verify(m, u) {
            continue;
        }
        // smallest accepting stack after r extra rounds must keep growing
        let mut last = None;
        let ok = (0..=ACCEPT_PUMPS).all(|r| {
            let Some(start) = pump.run(m, u, r) else { return false };
            let cap = start.stack_size() + budget.stack_cap;
            let sub = explore_from(m, u, start, cap, budget.node_cap / 8);
            let least = sub
                .nodes
                .iter()
                .filter(|c| accepting(m, u.len())(c))
                .map(Configuration::stack_size)
                .min();
            let grows =
                matches!((last, least), (None, Some(_))) || matches!((last, least), (Some(a), Some(b)) if b > a);
            last = least;
            grows
        });
        if ok {
            return Some(pump);
        }
    }
    None
}

/// Fires `t` on `c` when the input letters are free: a reading move is
/// allowed while fewer than `limit` letters have been consumed.
fn fire_free(c: &Configuration, t: &Transition, limit: usize) -> Option<Configuration> {
    if t.from != c.state || t.stack != c.tape.scanned() {
        return None;
    }
    let pos = match t.input {
        None => c.pos,
        Some(_) if c.pos < limit => c.pos + 1,
        Some(_) => return None,
    };
    Some(Configuration {
        state: t.to,
        pos,
        tape: c.tape.act(t.action)?,
    })
}

/// Graph of computations consuming at most `n` free letters.
pub fn explore_length(m: &StackMachine, n: usize, budget: Budget) -> Graph<Configuration> {
    bfs(initial_configuration(m), budget.node_cap, |c| {
        m.transitions_from(c.state)
            .filter_map(|t| fire_free(c, t, n))
            .map(|d| (d.stack_size() <= budget.stack_cap).then_some(d))
            .collect()
    })
}

/// Accept and strong measures over all inputs of length `n`, with letters
/// chosen freely at each read. Returns `(accept, strong)`.
pub fn length_measures(m: &StackMachine, n: usize, budget: Budget) -> (MeasureValue, MeasureValue) {
    let g = explore_length(m, n, budget);
    let acc = accepting(m, n);
    let co = g.coreachable(&acc);
    let max_reach = g.nodes.iter().map(Configuration::stack_size).max().unwrap_or(0);
    let max_acc = (0..g.nodes.len())
        .filter(|&i| co[i])
        .map(|i| g.nodes[i].stack_size())
        .max()
        .unwrap_or(0);
    if g.exhaustive() {
        return (MeasureValue::Finite(max_acc), MeasureValue::Finite(max_reach));
    }
    let pumps_allowed = m.class() != MachineClass::Sa && m.is_non_erasing();
    let tg = TopGraph::new(m);
    // a pump is λ-only, so its replay does not depend on the letters
    let strong_pump = pumps_allowed
        && g.nodes
            .iter()
            .any(|c| pump_at(m, &tg, c).is_some_and(|p| p.verify(m, &[])));
    let strong = if strong_pump {
        MeasureValue::Infinite
    } else {
        MeasureValue::AtLeast(if g.cut {
            max_reach.max(budget.stack_cap + 1)
        } else {
            max_reach
        })
    };
    (MeasureValue::AtLeast(max_acc), strong)
}

/// A finite sample; `complete` when no bound cut the search short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample<T: Ord> {
    pub items: BTreeSet<T>,
    pub complete: bool,
}

/// Accepted inputs of length at most `budget.input_cap` found with stacks
/// of at most `budget.stack_cap` symbols.
pub fn language_sample(m: &StackMachine, budget: Budget) -> Sample<Vec<InputSym>> {
    type Key = (StateId, Vec<InputSym>, Tape);
    let start: Key = (m.initial(), Vec::new(), Tape::default());
    let g = bfs(start, budget.node_cap, |(q, w, tape)| {
        let mut out = Vec::new();
        for t in m.transitions_from(*q) {
            if t.stack != tape.scanned() {
                continue;
            }
            let Some(tape2) = tape.act(t.action) else { continue };
            let fits = tape2.size() <= budget.stack_cap;
            match t.input {
                None => out.push(fits.then(|| (t.to, w.clone(), tape2.clone()))),
                Some(a) if w.len() < budget.input_cap => {
                    let mut w2 = w.clone();
                    w2.push(a);
                    out.push(fits.then(|| (t.to, w2, tape2.clone())));
                }
                Some(_) => {}
            }
        }
        out
    });
    let items = g
        .nodes
        .iter()
        .filter(|(q, _, _)| m.is_final(*q))
        .map(|(_, w, _)| w.clone())
        .collect();
    Sample {
        items,
        complete: g.exhaustive(),
    }
}

/// Store words `(state, tape)` of configurations on accepting computations
/// over inputs of length at most `budget.input_cap`.
pub fn store_sample(m: &StackMachine, budget: Budget) -> Sample<StoreWord> {
    let g = bfs(initial_configuration(m), budget.node_cap, |c| {
        m.transitions_from(c.state)
            .filter_map(|t| fire_free(c, t, budget.input_cap))
            .map(|d| (d.stack_size() <= budget.stack_cap).then_some(d))
            .collect()
    });
    let co = g.coreachable(|c| m.is_final(c.state));
    let items = (0..g.nodes.len())
        .filter(|&i| co[i])
        .map(|i| StoreWord {
            state: g.nodes[i].state,
            tape: g.nodes[i].tape.clone(),
        })
        .collect();
    Sample {
        items,
        complete: g.exhaustive(),
    }
}

/// Can the read phase, started in read state `p` on the top symbol of
/// `cells`, reach a final state for some continuation of the input?
fn read_phase_accepts(m: &StackMachine, p: StateId, cells: &[usize]) -> bool {
    let tape = Tape::at_top(cells.to_vec());
    let mut seen = BTreeSet::from([(p, tape.head)]);
    let mut queue = VecDeque::from([(p, tape.head)]);
    while let Some((q, h)) = queue.pop_front() {
        if m.is_final(q) {
            return true;
        }
        let here = Tape {
            cells: tape.cells.clone(),
            head: h,
        };
        for t in m.transitions_from(q) {
            if t.stack != here.scanned() || !t.action.is_read() {
                continue;
            }
            if let Some(next) = here.act(t.action) {
                if seen.insert((t.to, next.head)) {
                    queue.push_back((t.to, next.head));
                }
            }
        }
    }
    false
}

/// Inputs (length at most `budget.input_cap`) consumed by a complete write
/// phase that hands over to a read phase able to accept.
pub fn write_phase_prefixes(m: &StackMachine, budget: Budget) -> Sample<Vec<InputSym>> {
    let mut items = BTreeSet::new();
    if m.is_read_state(m.initial()) {
        if read_phase_accepts(m, m.initial(), &[]) {
            items.insert(Vec::new());
        }
        return Sample { items, complete: true };
    }
    type Key = (StateId, Vec<InputSym>, Vec<usize>);
    let mut handoffs: Vec<(StateId, Vec<InputSym>, Vec<usize>)> = Vec::new();
    let g = bfs::<Key>(
        (m.initial(), Vec::new(), Vec::new()),
        budget.node_cap,
        |(q, w, cells)| {
            let mut out = Vec::new();
            let top = Tape::at_top(cells.clone()).scanned();
            for t in m.transitions_from(*q) {
                if t.stack != top || !t.action.is_write() {
                    continue;
                }
                let mut w2 = w.clone();
                if let Some(a) = t.input {
                    if w.len() >= budget.input_cap {
                        continue;
                    }
                    w2.push(a);
                }
                let mut c2 = cells.clone();
                if let Action::Push(y) = t.action {
                    c2.push(y);
                }
                if m.is_read_state(t.to) {
                    handoffs.push((t.to, w2, c2));
                } else {
                    out.push((c2.len() <= budget.stack_cap).then_some((t.to, w2, c2)));
                }
            }
            out
        },
    );
    let mut cache: HashMap<(StateId, Vec<usize>), bool> = HashMap::new();
    for (p, w, cells) in handoffs {
        if items.contains(&w) {
            continue;
        }
        let ok = *cache
            .entry((p, cells.clone()))
            .or_insert_with(|| read_phase_accepts(m, p, &cells));
        if ok {
            items.insert(w);
        }
    }
    Sample {
        items,
        complete: g.exhaustive(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_machine;

    const COUNTER: &str = "machine NESA name=c\ninput: a\nstack: x\nstates: q f\ninitial: q\nfinal: f\n\
        q , a / BOT -> q push x\nq , a / x -> q push x\nq , _ / x -> f rstay\nq , _ / BOT -> f rstay\n";

    #[test]
    fn exact_when_search_is_exhaustive() {
        let m = parse_machine(COUNTER).unwrap();
        let u = m.parse_word("aaa").unwrap();
        let r = explore(&m, &u, Budget::default());
        assert_eq!(r.membership, Membership::Accepted);
        assert_eq!(r.weak, MeasureValue::Finite(3));
        assert_eq!(r.accept, MeasureValue::Finite(3));
        assert_eq!(r.strong, MeasureValue::Finite(3));
        assert!(!r.truncated);
    }

    #[test]
    fn stack_cap_degrades_to_lower_bound() {
        let m = parse_machine(COUNTER).unwrap();
        let u = m.parse_word("aaaaa").unwrap();
        let r = explore(&m, &u, Budget::default().with_stack_cap(3));
        assert_eq!(r.membership, Membership::Unknown);
        assert_eq!(r.strong, MeasureValue::AtLeast(4));
        assert!(r.truncated);
    }

    #[test]
    fn lambda_push_loop_is_certified() {
        let m = parse_machine(
            "machine NESA name=l\ninput: a\nstack: x\nstates: q f\ninitial: q\nfinal: f\n\
             q , _ / BOT -> q push x\nq , _ / x -> q push x\nq , a / BOT -> f rstay\n",
        )
        .unwrap();
        let u = m.parse_word("a").unwrap();
        let r = explore(&m, &u, Budget::default().with_stack_cap(5));
        assert_eq!(r.membership, Membership::Accepted);
        assert_eq!(r.weak, MeasureValue::Finite(0));
        assert_eq!(r.strong, MeasureValue::Infinite);
        assert_eq!(r.accept, MeasureValue::AtLeast(0));
        assert!(r.certificates[0].pump.verify(&m, &u));
    }

    #[test]
    fn length_mode_counts_free_letters() {
        let m = parse_machine(COUNTER).unwrap();
        assert_eq!(
            length_measures(&m, 4, Budget::default()),
            (MeasureValue::Finite(4), MeasureValue::Finite(4))
        );
    }

    #[test]
    fn samples() {
        let m = parse_machine(COUNTER).unwrap();
        let s = language_sample(&m, Budget::default().with_input_cap(3));
        assert_eq!(s.items.len(), 4);
        assert!(s.complete);
        let st = store_sample(&m, Budget::default().with_input_cap(2));
        assert!(st.items.contains(&StoreWord {
            state: 1,
            tape: Tape::at_top(vec![0, 0])
        }));
    }
}
