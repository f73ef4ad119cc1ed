//! Decidable points of the Nica spectrum and satisfaction of elementary relations.
//!
//! A tail point `ω(w) = ⋃_k w^k P⁻¹` is the set of group elements below some
//! power of `w`. Translates `t·ω` are kept symbolically. Membership reduces to
//! iterating `r ↦ w\r`, which never lengthens `r` and so either reaches `e`,
//! reaches `∞`, or revisits a residual.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automata::{is_boundary_relation, is_essential_relation, BoundaryCertificate, EssentialReport, ProductAutomaton, State};
use crate::error::{Error, Result};
use crate::graph::{bits, GenMask};
use crate::lattice::{ComponentSet, LatticeIdeal};
use crate::monoid::{ArtinMonoid, GroupWord, Trace};

/// Largest component count for which [`saturate`] enumerates all subsets.
pub const SATURATE_MAX_COMPONENTS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpectrumPoint {
    /// `ω(w) = {g : g ⩽ w^k for some k}`.
    Tail(Trace),
    /// `t·base`, defined when `t⁻¹ ∈ base`.
    Translate { t: GroupWord, base: Box<SpectrumPoint> },
}

impl SpectrumPoint {
    pub fn tail(w: Trace) -> Self {
        SpectrumPoint::Tail(w)
    }

    /// The tail word of the underlying tail point.
    pub fn base_tail(&self) -> &Trace {
        match self {
            SpectrumPoint::Tail(w) => w,
            SpectrumPoint::Translate { base, .. } => base.base_tail(),
        }
    }

    /// `ω(e) = P⁻¹` has the maximal element `e`; every other tail point is an
    /// increasing union without a top. Translation preserves the order.
    pub fn has_maximal_element(&self) -> bool {
        self.base_tail().is_identity()
    }

    pub fn to_json(&self, m: &ArtinMonoid) -> serde_json::Value {
        match self {
            SpectrumPoint::Tail(w) => serde_json::json!({ "type": "tail", "w": m.format(w) }),
            SpectrumPoint::Translate { t, base } => {
                serde_json::json!({ "type": "translate", "t": m.format_group_word(t), "base": base.to_json(m) })
            }
        }
    }
}

/// Whether `r ⩽ w^k` for some `k ⩾ 0`.
fn below_some_power(m: &ArtinMonoid, w: &Trace, r: Trace) -> bool {
    let mut seen = HashSet::new();
    let mut cur = r;
    loop {
        if cur.is_identity() {
            return true;
        }
        if !seen.insert(cur.clone()) {
            return false;
        }
        match m.residual(w, &cur) {
            Some(next) => cur = next,
            None => return false,
        }
    }
}

/// Membership `g ∈ p`.
pub fn member(m: &ArtinMonoid, p: &SpectrumPoint, g: &GroupWord) -> bool {
    match p {
        // g ⩽ w^k forces g = u v⁻¹ with u, v positive, and then g ⩽ y iff u ⩽ y.
        SpectrumPoint::Tail(w) => match m.split_fraction(g) {
            Some((u, _)) => below_some_power(m, w, u),
            None => false,
        },
        SpectrumPoint::Translate { t, base } => member(m, base, &m.group_multiply(&m.group_invert(t), g)),
    }
}

pub fn member_trace(m: &ArtinMonoid, p: &SpectrumPoint, x: &Trace) -> bool {
    member(m, p, &m.from_trace(x))
}

/// `t·p`; fails unless `t⁻¹ ∈ p`.
pub fn translate(m: &ArtinMonoid, t: &GroupWord, p: &SpectrumPoint) -> Result<SpectrumPoint> {
    if !member(m, p, &m.group_invert(t)) {
        return Err(Error::DomainViolation(m.format_group_word(t)));
    }
    if t.is_identity() {
        return Ok(p.clone());
    }
    Ok(SpectrumPoint::Translate { t: t.clone(), base: Box::new(p.clone()) })
}

/// Search for a `q ∈ P` such that no `h ∈ H` divides any `q·w^m`. The product
/// state after reading `q` holds the residuals `q\h`, and `h ⩽ q·w^m` iff
/// `q\h ⩽ w^m`.
fn unsatisfied_search(m: &ArtinMonoid, w: &Trace, h: &[Trace]) -> Option<Vec<crate::graph::Gen>> {
    let memo: RefCell<HashMap<Trace, bool>> = RefCell::new(HashMap::new());
    let good = |st: &State| match st {
        None => false,
        Some(r) => {
            if let Some(&v) = memo.borrow().get(r) {
                return v;
            }
            let v = below_some_power(m, w, r.clone());
            memo.borrow_mut().insert(r.clone(), v);
            v
        }
    };
    let product = ProductAutomaton::new(m, h.to_vec());
    product
        .search(|st| !st.iter().any(&good), |st| st.iter().any(|r| matches!(r, Some(t) if t.is_identity())))
        .path
}

/// Whether `p` satisfies the elementary relation `H`: every `t ∈ p` has some
/// `h ∈ H` with `th ∈ p`. The empty relation is never satisfied. Translates are
/// answered through their base point, since the satisfying set is invariant.
pub fn satisfies(m: &ArtinMonoid, p: &SpectrumPoint, h: &[Trace]) -> bool {
    if h.is_empty() {
        return false;
    }
    if h.iter().any(Trace::is_identity) {
        return true;
    }
    unsatisfied_search(m, p.base_tail(), h).is_none()
}

/// A `q` witnessing that `ω(w)` fails `H`: `t = q⁻¹ ∈ ω(w)` while no `t·h` is.
pub fn unsatisfied_witness(m: &ArtinMonoid, w: &Trace, h: &[Trace]) -> Option<Trace> {
    if h.is_empty() {
        return Some(Trace::identity());
    }
    if h.iter().any(Trace::is_identity) {
        return None;
    }
    unsatisfied_search(m, w, h).map(|p| m.normal_form(&p).expect("generators of the graph"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationClass {
    Unsatisfiable,
    Boundary,
    Essential,
    Trivial,
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationClass::Unsatisfiable => "UNSATISFIABLE",
            RelationClass::Boundary => "BOUNDARY",
            RelationClass::Essential => "ESSENTIAL",
            RelationClass::Trivial => "TRIVIAL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: RelationClass,
    /// Absent only for the empty relation.
    pub boundary: Option<BoundaryCertificate>,
    pub essential: Option<EssentialReport>,
}

/// Finest tier of `H`: trivial (`e ∈ H`), essential, boundary, or unsatisfiable.
pub fn classify_relation(m: &ArtinMonoid, h: &[Trace]) -> Classification {
    if h.is_empty() {
        return Classification { class: RelationClass::Unsatisfiable, boundary: None, essential: None };
    }
    let boundary = is_boundary_relation(m, h).expect("nonempty relation");
    let essential = is_essential_relation(m, h).expect("nonempty relation");
    let class = if h.iter().any(Trace::is_identity) {
        RelationClass::Trivial
    } else if essential.essential {
        RelationClass::Essential
    } else if boundary.answer {
        RelationClass::Boundary
    } else {
        RelationClass::Unsatisfiable
    };
    Classification { class, boundary: Some(boundary), essential: Some(essential) }
}

/// Tail word supported on the generators of the components outside `c`.
pub fn component_witness(m: &ArtinMonoid, c: ComponentSet) -> Trace {
    let dec = m.graph().opp_components();
    let outside: GenMask = m.graph().all_mask() & !dec.generators_of(c);
    m.normal_form(&bits(outside).collect::<Vec<_>>()).expect("generators of the graph")
}

/// The basic relation `S_B`: all generators of the components in `b`.
pub fn basic_relation(m: &ArtinMonoid, b: ComponentSet) -> Vec<Trace> {
    let dec = m.graph().opp_components();
    bits(dec.generators_of(b)).map(|g| m.generator(g)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    /// Generating antichain of the ideal with the same spectrum as `H`.
    pub ideal: LatticeIdeal,
    /// Component sets whose witness point fails `H`.
    pub failing: Vec<ComponentSet>,
    pub samples_checked: usize,
    /// Sampled tail words on which `H` and the ideal's relations disagree.
    pub mismatches: Vec<Trace>,
}

/// Computes the antichain of component sets `C` whose witness `ω(w_C)` fails
/// `H`, and cross-checks it on sampled tail points.
pub fn saturate(m: &ArtinMonoid, h: &[Trace]) -> Result<Saturation> {
    let dec = m.graph().opp_components();
    if dec.len() > SATURATE_MAX_COMPONENTS {
        return Err(Error::BoundExceeded { count: dec.len(), bound: SATURATE_MAX_COMPONENTS });
    }
    let failing: Vec<ComponentSet> = (0..=dec.full_set())
        .filter(|&c| !satisfies(m, &SpectrumPoint::Tail(component_witness(m, c)), h))
        .collect();
    let ideal = LatticeIdeal::from_sets(dec.len(), failing.iter().copied());

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut samples: Vec<Trace> = Vec::new();
    if m.rank() > 0 {
        while samples.len() < 20 {
            let len = rng.gen_range(0..=4);
            let word: Vec<_> = (0..len).map(|_| rng.gen_range(0..m.rank()) as u8).collect();
            samples.push(m.normal_form(&word).expect("generators of the graph"));
        }
    }
    let mismatches = samples
        .iter()
        .filter(|w| {
            let p = SpectrumPoint::Tail((*w).clone());
            let by_ideal = ideal.generators().iter().all(|&b| satisfies(m, &p, &basic_relation(m, b)));
            satisfies(m, &p, h) != by_ideal
        })
        .cloned()
        .collect();
    Ok(Saturation { ideal, failing, samples_checked: samples.len(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PresentationGraph;

    fn mono(g: PresentationGraph) -> ArtinMonoid {
        ArtinMonoid::new(g)
    }

    fn gw(m: &ArtinMonoid, s: &str) -> GroupWord {
        m.parse_group_word(s).unwrap()
    }

    fn tail(m: &ArtinMonoid, s: &str) -> SpectrumPoint {
        SpectrumPoint::Tail(m.parse_trace(s).unwrap())
    }

    fn rel(m: &ArtinMonoid, s: &str) -> Vec<Trace> {
        m.parse_trace_list(s).unwrap()
    }

    #[test]
    fn principal_point_membership() {
        let f = mono(PresentationGraph::edgeless(2));
        let p = tail(&f, "e");
        assert!(member(&f, &p, &gw(&f, "a^-1")));
        assert!(!member(&f, &p, &gw(&f, "a")));
        assert!(member(&f, &p, &GroupWord::identity()));
        assert!(p.has_maximal_element());
    }

    #[test]
    fn tail_point_membership() {
        let f = mono(PresentationGraph::edgeless(2));
        let p = tail(&f, "ab");
        assert!(member(&f, &p, &gw(&f, "a")));
        assert!(!member(&f, &p, &gw(&f, "b")));
        assert!(member(&f, &p, &gw(&f, "a b a b")));
        assert!(member(&f, &p, &gw(&f, "a b a b^-1")));
        assert!(!p.has_maximal_element());
    }

    #[test]
    fn translates() {
        let f = mono(PresentationGraph::edgeless(2));
        let base = tail(&f, "e");
        assert_eq!(translate(&f, &GroupWord::identity(), &base).unwrap(), base);
        let moved = translate(&f, &gw(&f, "a"), &base).unwrap();
        assert!(member(&f, &moved, &gw(&f, "a")));
        assert!(!member(&f, &moved, &gw(&f, "b")));
        let back = translate(&f, &gw(&f, "a^-1"), &moved).unwrap();
        for g in ["a", "a^-1", "b^-1 a^-1", "b", "e"] {
            assert_eq!(member(&f, &back, &gw(&f, g)), member(&f, &base, &gw(&f, g)), "{g}");
        }
        assert!(matches!(translate(&f, &gw(&f, "a^-1"), &base), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn satisfaction() {
        let f = mono(PresentationGraph::edgeless(2));
        assert!(satisfies(&f, &tail(&f, "ab"), &rel(&f, "a,b")));
        assert!(!satisfies(&f, &tail(&f, "e"), &rel(&f, "a,b")));
        assert!(satisfies(&f, &tail(&f, "e"), &rel(&f, "e,a")));
        assert!(!satisfies(&f, &tail(&f, "ab"), &[]));
        let k = mono(PresentationGraph::complete_bipartite(2, 2));
        let p = tail(&k, "b1 b2");
        assert!(satisfies(&k, &p, &rel(&k, "b1,b2")));
        assert!(!satisfies(&k, &p, &rel(&k, "a1,a2")));
        assert_eq!(unsatisfied_witness(&k, &k.parse_trace("b1 b2").unwrap(), &rel(&k, "a1,a2")), Some(Trace::identity()));
    }

    #[test]
    fn classification() {
        let f = mono(PresentationGraph::edgeless(2));
        assert_eq!(classify_relation(&f, &rel(&f, "a,b")).class, RelationClass::Essential);
        let c = classify_relation(&f, &rel(&f, "a"));
        assert_eq!(c.class, RelationClass::Unsatisfiable);
        assert_eq!(c.boundary.unwrap().witness, Some(f.parse_trace("b").unwrap()));
        let z = mono(PresentationGraph::complete(2));
        assert_eq!(classify_relation(&z, &rel(&z, "a")).class, RelationClass::Boundary);
        assert_eq!(classify_relation(&z, &rel(&z, "a,e")).class, RelationClass::Trivial);
        assert_eq!(classify_relation(&z, &[]).class, RelationClass::Unsatisfiable);
        assert_eq!(RelationClass::Essential.to_string(), "ESSENTIAL");
    }

    #[test]
    fn saturation() {
        let k = mono(PresentationGraph::complete_bipartite(2, 2));
        let s = saturate(&k, &rel(&k, "a1,a2")).unwrap();
        assert_eq!(s.ideal.generators(), &[0b01]);
        assert!(s.mismatches.is_empty());
        let s = saturate(&k, &rel(&k, "e,a1")).unwrap();
        assert!(s.ideal.generators().is_empty());
        let f = mono(PresentationGraph::edgeless(2));
        let s = saturate(&f, &rel(&f, "a")).unwrap();
        assert_eq!(s.ideal.generators(), &[0]);
        assert_eq!(s.samples_checked, 20);
    }
}
