//! Exhaustive check that abelianization is a controlled map on short traces.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::Gen;

use super::{AbelianVector, ArtinMonoid, Trace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlledMapReport {
    pub depth: usize,
    pub traces: usize,
    pub pairs: usize,
    /// Number of traces with each letter multiset of total at most `depth`.
    pub fibers: BTreeMap<AbelianVector, usize>,
    pub counterexample: Option<String>,
}

impl ControlledMapReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn fiber(&self, v: &[u32]) -> Option<usize> {
        self.fibers.get(&AbelianVector(v.to_vec())).copied()
    }
}

/// Distinct traces obtained by normalizing every arrangement of a multiset.
fn fiber_by_permutation(m: &ArtinMonoid, v: &AbelianVector) -> usize {
    fn arrange(m: &ArtinMonoid, counts: &mut [u32], word: &mut Vec<Gen>, seen: &mut BTreeSet<Trace>) {
        if counts.iter().all(|&c| c == 0) {
            seen.insert(m.nf(word.clone()));
            return;
        }
        for g in 0..counts.len() {
            if counts[g] > 0 {
                counts[g] -= 1;
                word.push(g as Gen);
                arrange(m, counts, word, seen);
                word.pop();
                counts[g] += 1;
            }
        }
    }
    let mut seen = BTreeSet::new();
    arrange(m, &mut v.0.clone(), &mut Vec::new(), &mut seen);
    seen.len()
}

impl ArtinMonoid {
    /// Checks, for all `x, y` of length at most `depth`:
    /// join preservation (C2), `φ(x) ⩽ φ(y) ⇒ x ⩽ y` and `φ(x) = φ(y) ⇒ x = y`
    /// when `x∨y ≠ ∞` (C4, C5), and that each fiber of `φ` is finite with the size
    /// given by normalizing all arrangements of the letter multiset (C1).
    pub fn check_controlled_map(&self, depth: usize) -> ControlledMapReport {
        let traces = self.enumerate(depth);
        let images: Vec<AbelianVector> = traces.iter().map(|x| self.abelianize(x)).collect();
        let mut report = ControlledMapReport {
            depth,
            traces: traces.len(),
            pairs: 0,
            fibers: BTreeMap::new(),
            counterexample: None,
        };
        for v in &images {
            *report.fibers.entry(v.clone()).or_default() += 1;
        }
        for (v, &count) in &report.fibers {
            let expected = fiber_by_permutation(self, v);
            if expected != count {
                report.counterexample =
                    Some(format!("(C1) fiber of {} has {count} traces, expected {expected}", self.format_vector(v)));
                return report;
            }
        }
        for (i, x) in traces.iter().enumerate() {
            for (j, y) in traces.iter().enumerate() {
                report.pairs += 1;
                let Some(join) = self.join(x, y) else { continue };
                let (fx, fy) = (&images[i], &images[j]);
                let fail = |law: &str| {
                    Some(format!("({law}) fails at x = {}, y = {}", self.format(x), self.format(y)))
                };
                if self.abelianize(&join) != fx.pointwise_max(fy) {
                    report.counterexample = fail("C2");
                } else if fx.leq(fy) && !self.left_divides(x, y) {
                    report.counterexample = fail("C4");
                } else if fx == fy && x != y {
                    report.counterexample = fail("C5");
                }
                if report.counterexample.is_some() {
                    return report;
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PresentationGraph;

    #[test]
    fn free_monoid_fibers() {
        let m = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let report = m.check_controlled_map(4);
        assert!(report.passed(), "{:?}", report.counterexample);
        assert_eq!(report.fiber(&[1, 1]), Some(2));
        assert_eq!(report.fiber(&[2, 2]), Some(6));
    }

    #[test]
    fn commutation_collapses_fibers() {
        let m = ArtinMonoid::new(PresentationGraph::complete(2));
        let report = m.check_controlled_map(4);
        assert!(report.passed());
        assert_eq!(report.fiber(&[1, 1]), Some(1));
        assert!(report.fibers.values().all(|&c| c == 1));
    }
}
