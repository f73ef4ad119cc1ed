//! Finite automata whose states are residuals `u\x`.
//!
//! Reading a letter `s` in state `r` moves to `s\r`; the sink `∞` (stored as
//! `None`) is absorbing, and so is the accepting state `e`. Since residuals never
//! get longer than their target, every automaton here is finite, which turns
//! the quantifiers over all of `P` in the definitions of boundary and essential
//! relations into reachability questions.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Gen, GenMask};
use crate::monoid::{ArtinMonoid, Trace};

/// A residual, or `None` for the sink `∞`.
pub type State = Option<Trace>;

fn is_accept(state: &State) -> bool {
    matches!(state, Some(t) if t.is_identity())
}

/// Tracks `u\x` while reading the letters of `u`.
#[derive(Clone, Debug)]
pub struct ResidualAutomaton<'m> {
    monoid: &'m ArtinMonoid,
    target: Trace,
}

impl<'m> ResidualAutomaton<'m> {
    pub fn new(monoid: &'m ArtinMonoid, target: Trace) -> Self {
        ResidualAutomaton { monoid, target }
    }

    pub fn target(&self) -> &Trace {
        &self.target
    }

    pub fn start(&self) -> State {
        Some(self.target.clone())
    }

    pub fn step(&self, state: &State, s: Gen) -> State {
        state.as_ref().and_then(|r| self.monoid.letter_residual(s, r))
    }

    pub fn run(&self, word: &[Gen]) -> State {
        word.iter().fold(self.start(), |st, &s| self.step(&st, s))
    }

    /// All states reachable from the start, in discovery order.
    pub fn reachable_states(&self) -> Vec<State> {
        let mut seen: HashMap<State, ()> = HashMap::new();
        let mut order = vec![self.start()];
        seen.insert(self.start(), ());
        let mut i = 0;
        while i < order.len() {
            for s in self.monoid.graph().generators() {
                let next = self.step(&order[i], s);
                if seen.insert(next.clone(), ()).is_none() {
                    order.push(next);
                }
            }
            i += 1;
        }
        order
    }
}

/// Residual automata for several targets, run in lockstep.
#[derive(Clone, Debug)]
pub struct ProductAutomaton<'m> {
    monoid: &'m ArtinMonoid,
    targets: Vec<Trace>,
}

/// Outcome of a breadth-first search over product states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Search {
    /// Label of a shortest path to a target state, if one is reachable.
    pub path: Option<Vec<Gen>>,
    pub states_explored: usize,
}

type Edge = (usize, Gen);

impl<'m> ProductAutomaton<'m> {
    pub fn new(monoid: &'m ArtinMonoid, targets: Vec<Trace>) -> Self {
        ProductAutomaton { monoid, targets }
    }

    pub fn start(&self) -> Vec<State> {
        self.targets.iter().cloned().map(Some).collect()
    }

    pub fn step(&self, state: &[State], s: Gen) -> Vec<State> {
        state.iter().map(|r| r.as_ref().and_then(|r| self.monoid.letter_residual(s, r))).collect()
    }

    /// Breadth-first search over all letters for a state satisfying `goal`,
    /// skipping the successors of states for which `prune` holds.
    pub fn search(&self, goal: impl Fn(&[State]) -> bool, prune: impl Fn(&[State]) -> bool) -> Search {
        let start = self.start();
        let mut index: HashMap<Vec<State>, usize> = HashMap::new();
        // Each node keeps its state and the (parent, letter) edge that reached it.
        let mut nodes: Vec<(Vec<State>, Option<Edge>)> = vec![(start.clone(), None)];
        index.insert(start, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if goal(&nodes[i].0) {
                let mut path = Vec::new();
                let mut cur = i;
                while let Some((parent, letter)) = nodes[cur].1 {
                    path.push(letter);
                    cur = parent;
                }
                path.reverse();
                return Search { path: Some(path), states_explored: nodes.len() };
            }
            if prune(&nodes[i].0) {
                continue;
            }
            for s in self.monoid.graph().generators() {
                let next = self.step(&nodes[i].0, s);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), nodes.len());
                    nodes.push((next, Some((i, s))));
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        Search { path: None, states_explored: nodes.len() }
    }
}

/// Recognizer for lexicographic normal forms; the state is the set of letters
/// that may not be read next.
#[derive(Clone, Copy, Debug)]
pub struct NormalFormDfa<'m> {
    monoid: &'m ArtinMonoid,
}

impl<'m> NormalFormDfa<'m> {
    pub fn new(monoid: &'m ArtinMonoid) -> Self {
        NormalFormDfa { monoid }
    }

    pub fn start(&self) -> GenMask {
        0
    }

    pub fn step(&self, blocked: GenMask, t: Gen) -> Option<GenMask> {
        self.monoid.nf_step(blocked, t)
    }

    pub fn accepts(&self, word: &[Gen]) -> bool {
        self.monoid.is_normal(word)
    }
}

/// Accepts the normal forms `z` with `x ⩽ z`.
#[derive(Clone, Debug)]
pub struct DivisibilityDfa<'m> {
    residuals: ResidualAutomaton<'m>,
    normal: NormalFormDfa<'m>,
}

impl<'m> DivisibilityDfa<'m> {
    pub fn accepts(&self, word: &[Gen]) -> bool {
        self.normal.accepts(word) && is_accept(&self.residuals.run(word))
    }
}

pub fn divisibility_language_dfa(monoid: &ArtinMonoid, x: Trace) -> DivisibilityDfa<'_> {
    DivisibilityDfa { residuals: ResidualAutomaton::new(monoid, x), normal: NormalFormDfa::new(monoid) }
}

/// Whether `z∨x = ∞`, decided by running the residual automaton of `x` on `z`.
pub fn is_annihilated(monoid: &ArtinMonoid, x: &Trace, z: &Trace) -> bool {
    ResidualAutomaton::new(monoid, x.clone()).run(z.letters()).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryCertificate {
    /// `true` iff no trace is disjoint (join `∞`) from every element.
    pub answer: bool,
    /// A trace `z` with `x∨z = ∞` for every `x`, when `answer` is false.
    #[serde(skip)]
    pub witness: Option<Trace>,
    /// Whether the witness was re-checked against the join directly.
    pub witness_verified: bool,
    pub states_explored: usize,
}

fn dedup(h: &[Trace]) -> Vec<Trace> {
    let mut v = h.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Decides whether every `z ∈ P` has a join with some element of `h`, by
/// checking that the all-`∞` product state is unreachable.
pub fn is_boundary_relation(monoid: &ArtinMonoid, h: &[Trace]) -> Result<BoundaryCertificate> {
    if h.is_empty() {
        return Err(Error::EmptyRelation);
    }
    let h = dedup(h);
    let product = ProductAutomaton::new(monoid, h.clone());
    // A component at `e` stays there, so such states never reach all-∞.
    let search = product.search(|st| st.iter().all(Option::is_none), |st| st.iter().any(is_accept));
    let Some(path) = search.path else {
        return Ok(BoundaryCertificate {
            answer: true,
            witness: None,
            witness_verified: false,
            states_explored: search.states_explored,
        });
    };
    let z = monoid.nf(path);
    let verified = h.iter().all(|x| monoid.join(x, &z).is_none());
    Ok(BoundaryCertificate { answer: false, witness: Some(z), witness_verified: verified, states_explored: search.states_explored })
}

/// A family `stem · loop^k` of survivors, one for every `k ⩾ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pump {
    pub stem: Vec<Gen>,
    pub cycle: Vec<Gen>,
}

impl Pump {
    pub fn member(&self, monoid: &ArtinMonoid, k: usize) -> Trace {
        let mut w = self.stem.clone();
        for _ in 0..k {
            w.extend_from_slice(&self.cycle);
        }
        monoid.nf(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialReport {
    /// `true` iff `P ∖ ⋃ xP` is finite.
    pub essential: bool,
    /// The full survivor set, in shortlex order, when finite.
    pub survivors: Option<Vec<Trace>>,
    /// An infinite family of survivors, when not finite.
    pub pump: Option<Pump>,
    pub states_explored: usize,
}

/// Decides finiteness of `P ∖ ⋃_{x∈h} xP` on the product of the residual
/// automata with the normal-form recognizer: survivors are normal forms read
/// without any component accepting, and the survivor language is finite iff the
/// survivor part of the product is acyclic.
pub fn is_essential_relation(monoid: &ArtinMonoid, h: &[Trace]) -> Result<EssentialReport> {
    if h.is_empty() {
        return Err(Error::EmptyRelation);
    }
    let h = dedup(h);
    let product = ProductAutomaton::new(monoid, h);
    let normal = NormalFormDfa::new(monoid);
    type Node = (Vec<State>, GenMask);

    let start: Node = (product.start(), normal.start());
    if start.0.iter().any(is_accept) {
        return Ok(EssentialReport { essential: true, survivors: Some(Vec::new()), pump: None, states_explored: 1 });
    }

    // Survivor subgraph: nodes and labelled edges.
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = vec![start.clone()];
    let mut edges: Vec<Vec<(Gen, usize)>> = vec![Vec::new()];
    index.insert(start, 0);
    let mut i = 0;
    while i < nodes.len() {
        for t in monoid.graph().generators() {
            let Some(blocked) = normal.step(nodes[i].1, t) else { continue };
            let states = product.step(&nodes[i].0, t);
            if states.iter().any(is_accept) {
                continue;
            }
            let node = (states, blocked);
            let j = match index.get(&node) {
                Some(&j) => j,
                None => {
                    index.insert(node.clone(), nodes.len());
                    nodes.push(node);
                    edges.push(Vec::new());
                    nodes.len() - 1
                }
            };
            edges[i].push((t, j));
        }
        i += 1;
    }
    let states_explored = nodes.len();

    if let Some(pump) = find_cycle(&edges) {
        return Ok(EssentialReport { essential: false, survivors: None, pump: Some(pump), states_explored });
    }

    let mut survivors = Vec::new();
    let mut stack: Vec<(usize, Vec<Gen>)> = vec![(0, Vec::new())];
    while let Some((n, word)) = stack.pop() {
        for &(t, m) in &edges[n] {
            let mut w = word.clone();
            w.push(t);
            stack.push((m, w));
        }
        survivors.push(monoid.nf(word));
    }
    survivors.sort();
    Ok(EssentialReport { essential: true, survivors: Some(survivors), pump: None, states_explored })
}

/// Depth-first search from node 0 for a cycle; returns the path to the cycle
/// and the cycle's label.
fn find_cycle(edges: &[Vec<(Gen, usize)>]) -> Option<Pump> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; edges.len()];
    // (node, next edge index); the stack is the active path.
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    let mut labels: Vec<Gen> = Vec::new();
    mark[0] = Mark::Active;
    while let Some(top) = stack.last_mut() {
        let n = top.0;
        if top.1 == edges[n].len() {
            mark[n] = Mark::Done;
            stack.pop();
            labels.pop();
            continue;
        }
        let (t, m) = edges[n][top.1];
        top.1 += 1;
        match mark[m] {
            Mark::Active => {
                let pos = stack.iter().position(|&(v, _)| v == m).expect("active node is on the stack");
                let mut cycle = labels[pos..].to_vec();
                cycle.push(t);
                return Some(Pump { stem: labels[..pos].to_vec(), cycle });
            }
            Mark::New => {
                mark[m] = Mark::Active;
                stack.push((m, 0));
                labels.push(t);
            }
            Mark::Done => {}
        }
    }
    None
}
