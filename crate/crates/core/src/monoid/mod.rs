//! Arithmetic in the positive monoid of a right-angled Artin group.
//!
//! A [`Trace`] is stored as the lexicographically least word representing it
//! (letters compared by generator index). Two traces are equal iff their stored
//! words are equal. Joins and residuals return `None` for the value `∞`, i.e.
//! when no common upper bound exists.

mod controlled;
mod group;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Gen, GenMask, PresentationGraph};

pub use controlled::ControlledMapReport;
pub use group::{GroupWord, Letter};

/// An element of the Artin monoid, in lexicographic normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Trace(Vec<Gen>);

impl Trace {
    pub fn identity() -> Self {
        Trace(Vec::new())
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Shortlex: shorter traces first, then lexicographic on normal forms.
impl Ord for Trace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Trace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Letter counts, the image of a trace under abelianization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianVector(pub Vec<u32>);

impl AbelianVector {
    pub fn zero(rank: usize) -> Self {
        AbelianVector(vec![0; rank])
    }

    pub fn add(&self, other: &Self) -> Self {
        AbelianVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise maximum.
    pub fn pointwise_max(&self, other: &Self) -> Self {
        AbelianVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// The Artin monoid of a graph. All trace arithmetic goes through this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinMonoid {
    graph: PresentationGraph,
}

impl ArtinMonoid {
    pub fn new(graph: PresentationGraph) -> Self {
        ArtinMonoid { graph }
    }

    pub fn graph(&self) -> &PresentationGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.vertex_count()
    }

    #[inline]
    pub fn commutes(&self, a: Gen, b: Gen) -> bool {
        self.graph.adjacent(a, b)
    }

    #[inline]
    fn neighbours(&self, a: Gen) -> GenMask {
        self.graph.neighbours(a)
    }

    fn check_letters(&self, word: &[Gen]) -> Result<()> {
        match word.iter().find(|&&g| g as usize >= self.rank()) {
            Some(g) => Err(Error::UnknownGenerator(format!("#{g}"))),
            None => Ok(()),
        }
    }

    /// Normal form of an arbitrary generator word.
    pub fn normal_form(&self, word: &[Gen]) -> Result<Trace> {
        self.check_letters(word)?;
        Ok(self.nf(word.to_vec()))
    }

    /// Greedy lexicographic normal form: repeatedly emit the smallest letter
    /// that can be commuted to the front of what remains.
    pub(crate) fn nf(&self, mut word: Vec<Gen>) -> Trace {
        if self.is_normal(&word) {
            return Trace(word);
        }
        let mut out = Vec::with_capacity(word.len());
        while !word.is_empty() {
            let mut allowed = self.graph.all_mask();
            let mut best = (word[0], 0);
            for (i, &c) in word.iter().enumerate() {
                if allowed >> c & 1 == 1 && c < best.0 {
                    best = (c, i);
                }
                allowed &= self.neighbours(c);
                if allowed == 0 {
                    break;
                }
            }
            word.remove(best.1);
            out.push(best.0);
        }
        Trace(out)
    }

    /// One step of the normal-form recognizer. `blocked` holds the letters that
    /// may not be read next; returns the new blocked set, or `None` if `t` is blocked.
    #[inline]
    pub fn nf_step(&self, blocked: GenMask, t: Gen) -> Option<GenMask> {
        if blocked >> t & 1 == 1 {
            return None;
        }
        let below = (1u64 << t) - 1;
        Some(self.neighbours(t) & (blocked | below))
    }

    /// Whether `word` is already in lexicographic normal form.
    pub fn is_normal(&self, word: &[Gen]) -> bool {
        let mut blocked = 0;
        for &t in word {
            match self.nf_step(blocked, t) {
                Some(b) => blocked = b,
                None => return false,
            }
        }
        true
    }

    pub fn generator(&self, g: Gen) -> Trace {
        Trace(vec![g])
    }

    pub fn multiply(&self, x: &Trace, y: &Trace) -> Trace {
        let mut w = x.0.clone();
        w.extend_from_slice(&y.0);
        self.nf(w)
    }

    pub fn power(&self, x: &Trace, k: usize) -> Trace {
        let w: Vec<Gen> = std::iter::repeat_n(x.0.iter().copied(), k).flatten().collect();
        self.nf(w)
    }

    pub fn length(&self, x: &Trace) -> usize {
        x.len()
    }

    pub fn abelianize(&self, x: &Trace) -> AbelianVector {
        let mut v = AbelianVector::zero(self.rank());
        for &g in x.letters() {
            v.0[g as usize] += 1;
        }
        v
    }

    /// Removes an occurrence of `a` that can be commuted to the front of `word`.
    /// `None` if `a` is not a left divisor of the trace represented by `word`.
    fn strip_letter(&self, word: &[Gen], a: Gen) -> Option<Vec<Gen>> {
        let mut allowed = self.graph.all_mask();
        for (i, &c) in word.iter().enumerate() {
            if allowed >> a & 1 == 0 {
                return None;
            }
            if c == a {
                let mut rest = word.to_vec();
                rest.remove(i);
                return Some(rest);
            }
            allowed &= self.neighbours(c);
        }
        None
    }

    /// `x⁻¹y` if `x ⩽ y`.
    pub fn left_quotient(&self, x: &Trace, y: &Trace) -> Option<Trace> {
        let mut rest = y.0.clone();
        for &a in x.letters() {
            rest = self.strip_letter(&rest, a)?;
        }
        Some(self.nf(rest))
    }

    /// `x ⩽ y` in the prefix order, i.e. `x⁻¹y ∈ P`.
    pub fn left_divides(&self, x: &Trace, y: &Trace) -> bool {
        let mut rest = y.0.clone();
        for &a in x.letters() {
            match self.strip_letter(&rest, a) {
                Some(r) => rest = r,
                None => return false,
            }
        }
        true
    }

    /// Word for `x\y = x⁻¹(x∨y)`, walking the letters of `x`: a letter either
    /// divides what is left of `y`, or commutes with all of it, or kills the join.
    fn residual_word(&self, x: &[Gen], y: &[Gen]) -> Option<Vec<Gen>> {
        let mut rest = y.to_vec();
        for &a in x {
            if let Some(r) = self.strip_letter(&rest, a) {
                rest = r;
            } else if rest.iter().all(|&c| self.commutes(a, c)) {
                // a∨rest = a·rest, so the residual is unchanged
            } else {
                return None;
            }
        }
        Some(rest)
    }

    /// Least common upper bound for `⩽`, `None` meaning `∞`.
    pub fn join(&self, x: &Trace, y: &Trace) -> Option<Trace> {
        let rest = self.residual_word(&x.0, &y.0)?;
        let mut w = x.0.clone();
        w.extend(rest);
        Some(self.nf(w))
    }

    /// `y\x := y⁻¹(y∨x)`, or `None` when `y∨x = ∞`.
    ///
    /// No `e`-convention is applied for the `∞` case; callers that need it
    /// substitute the identity themselves.
    pub fn residual(&self, y: &Trace, x: &Trace) -> Option<Trace> {
        self.residual_word(&y.0, &x.0).map(|w| self.nf(w))
    }

    /// Join of a single letter with a residual state, the transition of the
    /// residual automata: `s\r`.
    pub fn letter_residual(&self, s: Gen, r: &Trace) -> Option<Trace> {
        self.residual_word(&[s], &r.0).map(|w| self.nf(w))
    }

    /// Join of a finite family; `Some(e)` for the empty family.
    pub fn join_all<'a>(&self, traces: impl IntoIterator<Item = &'a Trace>) -> Option<Trace> {
        traces.into_iter().try_fold(Trace::identity(), |acc, t| self.join(&acc, t))
    }

    /// Smallest join-closed set containing `set`.
    pub fn join_closure(&self, set: &BTreeSet<Trace>) -> BTreeSet<Trace> {
        let mut closed = set.clone();
        let mut frontier: Vec<Trace> = set.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut fresh = Vec::new();
            for x in &frontier {
                for y in closed.iter() {
                    if let Some(j) = self.join(x, y) {
                        if !closed.contains(&j) && !fresh.contains(&j) {
                            fresh.push(j);
                        }
                    }
                }
            }
            closed.extend(fresh.iter().cloned());
            frontier = fresh;
        }
        closed
    }

    /// Minimal nontrivial elements: the generators.
    pub fn atoms(&self) -> Vec<Trace> {
        self.graph.generators().map(|g| self.generator(g)).collect()
    }

    pub fn is_atom(&self, x: &Trace) -> bool {
        x.len() == 1
    }

    /// The opposite graph is connected.
    pub fn is_graph_irreducible(&self) -> bool {
        self.graph.opp_components().len() == 1
    }

    /// Generators that have a join with every element: isolated vertices of the
    /// opposite graph.
    pub fn core(&self) -> GenMask {
        self.graph.opp_components().isolated
    }

    /// All traces of length at most `n`, in shortlex order.
    pub fn enumerate(&self, n: usize) -> Vec<Trace> {
        let mut out = vec![Trace::identity()];
        let mut level: Vec<(Vec<Gen>, GenMask)> = vec![(Vec::new(), 0)];
        for _ in 0..n {
            let mut next = Vec::new();
            for (word, blocked) in &level {
                for t in self.graph.generators() {
                    if let Some(b) = self.nf_step(*blocked, t) {
                        let mut w = word.clone();
                        w.push(t);
                        next.push((w, b));
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| Trace(w.clone())));
            level = next;
        }
        out
    }

    /// Traces of length exactly `n`.
    pub fn enumerate_exact(&self, n: usize) -> Vec<Trace> {
        self.enumerate(n).into_iter().filter(|t| t.len() == n).collect()
    }

    pub fn format(&self, x: &Trace) -> String {
        if x.is_identity() {
            return "e".to_string();
        }
        let names: Vec<&str> = x.letters().iter().map(|&g| self.graph.name(g)).collect();
        names.join(" ")
    }

    /// `INF` for `∞`.
    pub fn format_bound(&self, x: Option<&Trace>) -> String {
        x.map_or_else(|| "INF".to_string(), |t| self.format(t))
    }

    pub fn format_vector(&self, v: &AbelianVector) -> String {
        let parts: Vec<String> = v
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(g, c)| format!("{}: {c}", self.graph.name(g as Gen)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Splits a token list into generators. A token is a vertex name, `e`, or a
    /// run of single-character vertex names such as `abab`.
    pub(crate) fn tokenize(&self, input: &str) -> Result<Vec<Gen>> {
        let mut out = Vec::new();
        for token in input.split_whitespace() {
            if token == "e" {
                continue;
            }
            if let Some(g) = self.graph.index(token) {
                out.push(g);
                continue;
            }
            let mut buf = [0u8; 4];
            let split: Option<Vec<Gen>> =
                token.chars().map(|c| self.graph.index(c.encode_utf8(&mut buf))).collect();
            match split {
                Some(gens) => out.extend(gens),
                None => return Err(Error::UnknownGenerator(token.to_string())),
            }
        }
        Ok(out)
    }

    /// Parses a trace such as `a b a`, `aba` or `e`.
    pub fn parse_trace(&self, input: &str) -> Result<Trace> {
        Ok(self.nf(self.tokenize(input)?))
    }

    /// Parses a comma-separated list of traces.
    pub fn parse_trace_list(&self, input: &str) -> Result<Vec<Trace>> {
        if input.trim().is_empty() {
            return Ok(Vec::new());
        }
        input.split(',').map(|part| self.parse_trace(part)).collect()
    }
}

impl fmt::Display for AbelianVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monoid(text: &str) -> ArtinMonoid {
        ArtinMonoid::new(PresentationGraph::parse(text).unwrap())
    }

    fn edge() -> ArtinMonoid {
        monoid("vertices: a b\nedge: a b\n")
    }

    fn free2() -> ArtinMonoid {
        monoid("vertices: a b\n")
    }

    fn path4() -> ArtinMonoid {
        ArtinMonoid::new(PresentationGraph::path(4))
    }

    fn t(m: &ArtinMonoid, s: &str) -> Trace {
        m.parse_trace(s).unwrap()
    }

    #[test]
    fn normal_forms() {
        let m = edge();
        assert_eq!(m.format(&t(&m, "ba")), "a b");
        let p = path4();
        assert_eq!(m.format(&t(&m, "e")), "e");
        assert_eq!(p.format(&t(&p, "ca")), "c a");
        assert_eq!(p.format(&t(&p, "dc")), "c d");
        assert_eq!(p.format(&t(&p, "d b a")), "d a b");
        assert_eq!(p.format(&t(&p, "c a b")), "b c a");
        assert!(matches!(p.parse_trace("a z"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(p.normal_form(&[7]), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn multiplication_length_abelianization() {
        let m = edge();
        let ab = m.multiply(&t(&m, "a"), &t(&m, "b"));
        assert_eq!((m.format(&ab), m.length(&ab)), ("a b".to_string(), 2));
        let f = free2();
        assert_eq!(f.abelianize(&t(&f, "abab")).0, vec![2, 2]);
        assert_eq!(f.format_vector(&f.abelianize(&t(&f, "abab"))), "{a: 2, b: 2}");
        assert_eq!(f.abelianize(&Trace::identity()), AbelianVector::zero(2));
        assert_eq!(f.length(&Trace::identity()), 0);
    }

    #[test]
    fn divisibility() {
        let f = free2();
        assert!(f.left_divides(&t(&f, "a"), &t(&f, "ab")));
        assert!(!f.left_divides(&t(&f, "a"), &t(&f, "ba")));
        let m = edge();
        assert!(m.left_divides(&t(&m, "a"), &t(&m, "ba")));
        for x in m.enumerate(3) {
            assert!(m.left_divides(&Trace::identity(), &x));
        }
        assert_eq!(f.left_quotient(&t(&f, "a"), &t(&f, "ab")), Some(t(&f, "b")));
    }

    #[test]
    fn joins() {
        let m = edge();
        assert_eq!(m.join(&t(&m, "a"), &t(&m, "b")), Some(t(&m, "ab")));
        let f = free2();
        assert_eq!(f.join(&t(&f, "a"), &t(&f, "b")), None);
        for x in f.enumerate(3) {
            assert_eq!(f.join(&x, &Trace::identity()), Some(x.clone()));
            assert_eq!(f.join(&Trace::identity(), &x), Some(x.clone()));
        }
        let k = ArtinMonoid::new(PresentationGraph::complete_bipartite(2, 2));
        assert_eq!(k.join(&t(&k, "a1 b1"), &t(&k, "a2 b1")), None);
        assert_eq!(k.join(&t(&k, "a1"), &t(&k, "b1 b2")), Some(t(&k, "a1 b1 b2")));
    }

    #[test]
    fn residuals() {
        let f = free2();
        assert_eq!(f.residual(&t(&f, "b"), &t(&f, "ba")), Some(t(&f, "a")));
        assert_eq!(f.residual(&t(&f, "a"), &t(&f, "b")), None);
        for x in f.enumerate(3) {
            assert_eq!(f.residual(&x, &x), Some(Trace::identity()));
            assert_eq!(f.residual(&Trace::identity(), &x), Some(x.clone()));
        }
        let m = edge();
        assert_eq!(m.residual(&t(&m, "a"), &t(&m, "b")), Some(t(&m, "b")));
        assert_eq!(m.format_bound(None), "INF");
    }

    #[test]
    fn join_closures() {
        let m = edge();
        let set: BTreeSet<Trace> = [t(&m, "a"), t(&m, "b")].into();
        let closed: Vec<String> = m.join_closure(&set).iter().map(|x| m.format(x)).collect();
        assert_eq!(closed, vec!["a", "b", "a b"]);
        let f = free2();
        let set: BTreeSet<Trace> = [t(&f, "a"), t(&f, "b")].into();
        assert_eq!(f.join_closure(&set), set);
        let single: BTreeSet<Trace> = [t(&f, "aba")].into();
        assert_eq!(f.join_closure(&single), single);
    }

    #[test]
    fn atoms_core_irreducibility() {
        let p = path4();
        assert_eq!(p.atoms().len(), 4);
        assert!(p.atoms().iter().all(|a| p.is_atom(a)));
        assert!(!p.is_atom(&t(&p, "ab")));
        assert!(!p.is_atom(&Trace::identity()));
        assert!(p.is_graph_irreducible());
        assert_eq!(p.core(), 0);
        let k = ArtinMonoid::new(PresentationGraph::complete_bipartite(2, 2));
        assert!(!k.is_graph_irreducible());
        assert_eq!(k.core(), 0);
        assert_eq!(edge().core(), 0b11);
    }

    #[test]
    fn enumeration_counts_traces_once() {
        // Free monoid on 2 letters: 1 + 2 + 4 + 8.
        assert_eq!(free2().enumerate(3).len(), 15);
        // Free commutative monoid on 2 letters: 1 + 2 + 3 + 4.
        assert_eq!(edge().enumerate(3).len(), 10);
        let p = path4();
        let all = p.enumerate(4);
        let distinct: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|x| p.is_normal(x.letters())));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn shortlex_order() {
        let f = free2();
        assert!(t(&f, "b") < t(&f, "aa"));
        assert!(t(&f, "ab") < t(&f, "ba"));
    }
}
