//! Brute-force reference answers over a finite ball of traces.
//!
//! Nothing here uses `join`, `residual` or `left_divides` from the monoid
//! except where noted. Divisibility comes from up-sets generated by
//! multiplication alone, so these results can check the fast algorithms.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::monoid::{ArtinMonoid, GroupWord, Trace};

/// All traces of length at most `radius`, indexed, with cached up-sets.
pub struct Ball<'m> {
    monoid: &'m ArtinMonoid,
    radius: usize,
    traces: Vec<Trace>,
    index: HashMap<Trace, usize>,
    /// `len_end[k]` is the number of traces of length at most `k`.
    len_end: Vec<usize>,
    up_sets: HashMap<Trace, FixedBitSet>,
}

/// Result of the least-upper-bound search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lub {
    Infinite,
    Join(Trace),
    /// Common upper bounds exist in the ball but none is least.
    NoLeast,
}

impl<'m> Ball<'m> {
    pub fn new(monoid: &'m ArtinMonoid, radius: usize) -> Self {
        let traces = monoid.enumerate(radius);
        let index = traces.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let len_end = (0..=radius).map(|k| traces.partition_point(|t| t.len() <= k)).collect();
        Ball { monoid, radius, traces, index, len_end, up_sets: HashMap::new() }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    /// Traces of length at most `k`.
    pub fn up_to(&self, k: usize) -> &[Trace] {
        &self.traces[..self.len_end[k.min(self.radius)]]
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// `{x·u : u ∈ P}` intersected with the ball.
    pub fn up_set(&mut self, x: &Trace) -> &FixedBitSet {
        if !self.up_sets.contains_key(x) {
            let mut set = FixedBitSet::with_capacity(self.traces.len());
            if x.len() <= self.radius {
                for u in self.up_to(self.radius - x.len()) {
                    let xu = self.monoid.multiply(x, u);
                    set.insert(self.index[&xu]);
                }
            }
            self.up_sets.insert(x.clone(), set);
        }
        &self.up_sets[x]
    }

    /// `x ⩽ z` for `z` in the ball.
    pub fn divides(&mut self, x: &Trace, z: &Trace) -> bool {
        let i = self.index[z];
        self.up_set(x).contains(i)
    }

    fn common(&mut self, x: &Trace, y: &Trace) -> FixedBitSet {
        let mut c = self.up_set(x).clone();
        c.intersect_with(self.up_set(y));
        c
    }

    /// Least common upper bound. Needs `ℓ(x) + ℓ(y) ⩽ radius`, since a join
    /// is never longer than that.
    pub fn lub(&mut self, x: &Trace, y: &Trace) -> Lub {
        assert!(x.len() + y.len() <= self.radius, "ball too small for this pair");
        let common = self.common(x, y);
        let Some(shortest) = common.ones().next() else { return Lub::Infinite };
        let len = self.traces[shortest].len();
        let candidates: Vec<Trace> =
            common.ones().map(|i| self.traces[i].clone()).take_while(|t| t.len() == len).collect();
        for b in candidates {
            if common.is_subset(self.up_set(&b)) {
                return Lub::Join(b);
            }
        }
        Lub::NoLeast
    }

    /// Whether `claimed` satisfies the least-upper-bound law for `x, y`
    /// against every `z` in the ball.
    pub fn check_join(&mut self, x: &Trace, y: &Trace, claimed: Option<&Trace>) -> bool {
        let common = self.common(x, y);
        match claimed {
            None => common.is_clear(),
            Some(j) => match self.index.get(j) {
                Some(&ji) => common.contains(ji) && common.is_subset(self.up_set(j)),
                None => false,
            },
        }
    }

    /// Traces in the ball divisible by no element of `h`.
    pub fn survivors(&mut self, h: &[Trace]) -> Vec<Trace> {
        let mut covered = FixedBitSet::with_capacity(self.traces.len());
        for x in h {
            covered.union_with(self.up_set(x));
        }
        covered.toggle_range(..);
        covered.ones().map(|i| self.traces[i].clone()).collect()
    }
}

/// For each `x`, the traces `z` of the ball with `x∨z = ∞`. Uses the monoid's join.
pub struct AnnihilatorTable {
    sets: HashMap<Trace, FixedBitSet>,
    size: usize,
}

impl AnnihilatorTable {
    pub fn new(monoid: &ArtinMonoid, ball: &Ball<'_>, xs: &[Trace]) -> Self {
        let sets = xs
            .iter()
            .map(|x| {
                let mut set = FixedBitSet::with_capacity(ball.len());
                for (i, z) in ball.traces().iter().enumerate() {
                    if monoid.join(x, z).is_none() {
                        set.insert(i);
                    }
                }
                (x.clone(), set)
            })
            .collect();
        AnnihilatorTable { sets, size: ball.len() }
    }

    /// Shortlex-first `z` in the ball annihilating every element of `h`.
    pub fn find<'b>(&self, ball: &'b Ball<'_>, h: &[Trace]) -> Option<&'b Trace> {
        let mut acc = FixedBitSet::with_capacity(self.size);
        acc.insert_range(..);
        for x in h {
            acc.intersect_with(&self.sets[x]);
        }
        acc.ones().next().map(|i| &ball.traces()[i])
    }
}

/// `g ∈ ω(w)` decided by testing positivity of `g⁻¹ w^k` for `k ⩽ ℓ(g)`.
/// Each power of `w` must absorb a letter of the positive part of `g`, or
/// never will, so the bound is enough.
pub fn tail_member(monoid: &ArtinMonoid, w: &Trace, g: &GroupWord) -> bool {
    let inv = monoid.group_invert(g);
    let wg = monoid.from_trace(w);
    let mut power = GroupWord::identity();
    for _ in 0..=g.len() {
        if monoid.is_positive(&monoid.group_multiply(&inv, &power)) {
            return true;
        }
        power = monoid.group_multiply(&power, &wg);
    }
    false
}
