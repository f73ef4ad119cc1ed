//! Ideals of the Boolean lattice of component sets and the quotient
//! presentations they describe.
//!
//! A component set `B ⊆ Λ` (bit `i` = `i`-th component of the opposite graph)
//! stands for the basic relation `S_B`, the union of the generator sets of the
//! components in `B`. An ideal is given by an antichain of such sets and
//! contains every superset of a member. The empty antichain is the zero ideal
//! and `⟨∅⟩` is the whole algebra, since `S_∅` is the relation `1 = 0`.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{bits, ComponentDecomposition, Gen, GenMask, PresentationGraph};
use crate::monoid::ArtinMonoid;
use crate::spectrum::{basic_relation, component_witness, satisfies, SpectrumPoint};
use crate::star_algebra::{defect, AlgebraElement};

/// Bit set of components.
pub type ComponentSet = u64;

/// Default bound on `|Λ|` for [`enumerate_ideals`].
pub const DEFAULT_MAX_COMPONENTS: usize = 5;

fn is_subset(a: ComponentSet, b: ComponentSet) -> bool {
    a & !b == 0
}

fn set_order(a: &ComponentSet, b: &ComponentSet) -> std::cmp::Ordering {
    a.count_ones().cmp(&b.count_ones()).then(a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeIdeal {
    components: usize,
    /// Pairwise incomparable, sorted by size then bits.
    generators: Vec<ComponentSet>,
}

impl LatticeIdeal {
    /// Removes every set containing another; fails on sets mentioning unknown components.
    pub fn new(components: usize, sets: impl IntoIterator<Item = ComponentSet>) -> Result<Self> {
        let sets: Vec<ComponentSet> = sets.into_iter().collect();
        let full = full_set(components);
        if let Some(bad) = sets.iter().find(|&&s| s & !full != 0) {
            let idx = bits(*bad & !full).next().unwrap_or(0);
            return Err(Error::UnknownComponent(format!("#{idx}")));
        }
        Ok(Self::from_sets(components, sets))
    }

    pub(crate) fn from_sets(components: usize, sets: impl IntoIterator<Item = ComponentSet>) -> Self {
        let mut sets: Vec<ComponentSet> = sets.into_iter().collect();
        sets.sort_by(set_order);
        sets.dedup();
        let mut generators: Vec<ComponentSet> = Vec::new();
        for s in sets {
            if !generators.iter().any(|&g| is_subset(g, s)) {
                generators.push(s);
            }
        }
        LatticeIdeal { components, generators }
    }

    pub fn zero(components: usize) -> Self {
        LatticeIdeal { components, generators: Vec::new() }
    }

    /// `⟨∅⟩`, everything.
    pub fn whole(components: usize) -> Self {
        LatticeIdeal { components, generators: vec![0] }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn generators(&self) -> &[ComponentSet] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.generators == [0]
    }

    /// Whether the component set `c` lies in the ideal.
    pub fn contains(&self, c: ComponentSet) -> bool {
        self.generators.iter().any(|&b| is_subset(b, c))
    }

    /// Number of component sets in the ideal.
    pub fn size(&self) -> usize {
        (0..=full_set(self.components)).filter(|&c| self.contains(c)).count()
    }

    pub fn leq(&self, other: &LatticeIdeal) -> bool {
        self.generators.iter().all(|&b| other.generators.iter().any(|&c| is_subset(c, b)))
    }

    pub fn join(&self, other: &LatticeIdeal) -> LatticeIdeal {
        Self::from_sets(self.components, self.generators.iter().chain(&other.generators).copied())
    }

    pub fn meet(&self, other: &LatticeIdeal) -> LatticeIdeal {
        let unions = self.generators.iter().flat_map(|&b| other.generators.iter().map(move |&c| b | c));
        Self::from_sets(self.components, unions)
    }
}

fn full_set(components: usize) -> ComponentSet {
    if components >= 64 {
        u64::MAX
    } else {
        (1u64 << components) - 1
    }
}

/// Every ideal of the Boolean lattice on `components` elements, smallest first.
pub fn enumerate_ideals(components: usize, bound: usize) -> Result<Vec<LatticeIdeal>> {
    if components > bound || components > 6 {
        return Err(Error::BoundExceeded { count: components, bound: bound.min(6) });
    }
    let mut all: Vec<ComponentSet> = (0..=full_set(components)).collect();
    all.sort_by(set_order);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn extend(all: &[ComponentSet], start: usize, chosen: &mut Vec<ComponentSet>, n: usize, out: &mut Vec<LatticeIdeal>) {
        out.push(LatticeIdeal::from_sets(n, chosen.iter().copied()));
        for i in start..all.len() {
            let s = all[i];
            if chosen.iter().all(|&c| !is_subset(c, s) && !is_subset(s, c)) {
                chosen.push(s);
                extend(all, i + 1, chosen, n, out);
                chosen.pop();
            }
        }
    }
    extend(&all, 0, &mut chosen, components, &mut out);
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.generators.cmp(&b.generators)));
    Ok(out)
}

/// Covering pairs `(i, j)`: `ideals[i] < ideals[j]` with nothing in between.
pub fn hasse_diagram(ideals: &[LatticeIdeal]) -> Vec<(usize, usize)> {
    let n = ideals.len();
    let less = |i: usize, j: usize| i != j && ideals[i].leq(&ideals[j]) && ideals[i] != ideals[j];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if less(i, j) && !(0..n).any(|k| less(i, k) && less(k, j)) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Display name of a component: its least vertex.
pub fn component_label(graph: &PresentationGraph, dec: &ComponentDecomposition, i: usize) -> String {
    graph.name(bits(dec.components[i]).next().expect("components are nonempty")).to_string()
}

pub fn set_labels(graph: &PresentationGraph, dec: &ComponentDecomposition, set: ComponentSet) -> Vec<String> {
    bits(set).map(|i| component_label(graph, dec, i as usize)).collect()
}

/// Sorted array of sorted label arrays.
pub fn ideal_to_json(graph: &PresentationGraph, ideal: &LatticeIdeal) -> Value {
    let dec = graph.opp_components();
    Value::Array(ideal.generators.iter().map(|&b| json!(set_labels(graph, &dec, b))).collect())
}

pub fn format_ideal(graph: &PresentationGraph, ideal: &LatticeIdeal) -> String {
    if ideal.is_zero() {
        return "0".to_string();
    }
    let dec = graph.opp_components();
    let parts: Vec<String> =
        ideal.generators.iter().map(|&b| format!("{{{}}}", set_labels(graph, &dec, b).join(","))).collect();
    format!("<{}>", parts.join(","))
}

/// Parses `{a1},{b1,b2}`: brace groups of vertex names, each naming the
/// component that contains it. `{}` is the empty set; empty input is the zero ideal.
pub fn parse_ideal(graph: &PresentationGraph, input: &str) -> Result<LatticeIdeal> {
    let dec = graph.opp_components();
    let mut sets = Vec::new();
    let mut rest = input.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix('{')
            .and_then(|r| r.split_once('}'))
            .ok_or_else(|| Error::Parse { line: 1, message: format!("expected `{{...}}` at `{rest}`") })?;
        let mut set: ComponentSet = 0;
        for name in body.0.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let g = graph.index(name).ok_or_else(|| Error::UnknownComponent(name.to_string()))?;
            set |= 1 << dec.component_of(g);
        }
        sets.push(set);
        rest = body.1;
    }
    LatticeIdeal::new(dec.len(), sets)
}

/// A defining relation of the Toeplitz algebra or one of its quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `V_s* V_s = 1`.
    Isometry(Gen),
    /// `V_s V_t = V_t V_s` and `V_s* V_t = V_t V_s*` for an edge.
    Commute(Gen, Gen),
    /// `V_s* V_t = 0` for distinct non-adjacent `s, t`.
    Orthogonal(Gen, Gen),
    /// `∏_{s∈S} (1 − V_s V_s*) = 0`.
    Defect(GenMask),
}

impl Relation {
    pub fn render(&self, graph: &PresentationGraph) -> String {
        let n = |g: &Gen| graph.name(*g).to_string();
        match self {
            Relation::Isometry(s) => format!("V_{0}* V_{0} = 1", n(s)),
            Relation::Commute(s, t) => {
                format!("V_{0} V_{1} = V_{1} V_{0}, V_{0}* V_{1} = V_{1} V_{0}*", n(s), n(t))
            }
            Relation::Orthogonal(s, t) => format!("V_{}* V_{} = 0", n(s), n(t)),
            Relation::Defect(set) => {
                if *set == 0 {
                    return "1 = 0".to_string();
                }
                bits(*set).map(|g| format!("(1 - V_{0} V_{0}*)", graph.name(g))).collect::<Vec<_>>().join("") + " = 0"
            }
        }
    }

    /// The defect relation expanded into range projections, if this is one.
    pub fn expansion(&self, m: &ArtinMonoid) -> Option<AlgebraElement> {
        match self {
            Relation::Defect(set) => Some(defect(m, &bits(*set).map(|g| m.generator(g)).collect::<Vec<_>>())),
            _ => None,
        }
    }
}

/// Relations (1)–(3) of the Toeplitz algebra plus the extra defect relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPresentation {
    pub isometries: Vec<Relation>,
    pub commutations: Vec<Relation>,
    pub orthogonality: Vec<Relation>,
    /// Generator sets `S_i`, no one contained in another.
    pub extra: Vec<GenMask>,
}

fn base_relations(graph: &PresentationGraph) -> (Vec<Relation>, Vec<Relation>, Vec<Relation>) {
    let isometries = graph.generators().map(Relation::Isometry).collect();
    let mut commutations = Vec::new();
    let mut orthogonality = Vec::new();
    for s in graph.generators() {
        for t in graph.generators().filter(|&t| t > s) {
            if graph.adjacent(s, t) {
                commutations.push(Relation::Commute(s, t));
            } else {
                orthogonality.push(Relation::Orthogonal(s, t));
            }
        }
    }
    (isometries, commutations, orthogonality)
}

impl QuotientPresentation {
    pub fn extra_relations(&self) -> Vec<Relation> {
        self.extra.iter().map(|&s| Relation::Defect(s)).collect()
    }

    pub fn to_json(&self, m: &ArtinMonoid) -> Value {
        let g = m.graph();
        let render = |rs: &[Relation]| rs.iter().map(|r| r.render(g)).collect::<Vec<_>>();
        let extra: Vec<Value> = self
            .extra
            .iter()
            .map(|&s| {
                let rel = Relation::Defect(s);
                json!({
                    "generators": g.mask_names(s),
                    "product": rel.render(g),
                    "expanded": format!("{} = 0", rel.expansion(m).expect("defect relation").render(m)),
                })
            })
            .collect();
        json!({
            "generators": g.names(),
            "relations_1": render(&self.isometries),
            "relations_2": render(&self.commutations),
            "relations_3": render(&self.orthogonality),
            "extra": extra,
        })
    }

    /// Text block mirroring the numbered relation groups.
    pub fn render(&self, m: &ArtinMonoid, extra_label: &str) -> String {
        let g = m.graph();
        let mut out = String::new();
        let _ = writeln!(out, "generators: {}", g.names().join(" "));
        for (label, rs) in [("(1)", &self.isometries), ("(2)", &self.commutations), ("(3)", &self.orthogonality)] {
            for r in rs.iter() {
                let _ = writeln!(out, "{label} {}", r.render(g));
            }
        }
        for r in self.extra_relations() {
            let expanded = r.expansion(m).expect("defect relation").render(m);
            let _ = writeln!(out, "{extra_label} {}    i.e. {expanded} = 0", r.render(g));
        }
        out
    }
}

fn presentation_for(graph: &PresentationGraph, ideal: &LatticeIdeal) -> QuotientPresentation {
    let dec = graph.opp_components();
    let (isometries, commutations, orthogonality) = base_relations(graph);
    let extra = ideal.generators.iter().map(|&b| dec.generators_of(b)).collect();
    QuotientPresentation { isometries, commutations, orthogonality, extra }
}

/// Presentation of the quotient by `ideal`; refused when the centre is non-trivial.
pub fn quotient_presentation(graph: &PresentationGraph, ideal: &LatticeIdeal) -> Result<QuotientPresentation> {
    let dec = graph.opp_components();
    if dec.isolated != 0 {
        return Err(Error::NonTrivialCentre(graph.mask_names(dec.isolated)));
    }
    if ideal.components != dec.len() {
        return Err(Error::UnknownComponent(format!("ideal over {} components", ideal.components)));
    }
    Ok(presentation_for(graph, ideal))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    /// The maximal proper ideal: all singleton component sets.
    pub ideal: LatticeIdeal,
    /// Relations (1)–(3) and one defect relation per component (4).
    pub presentation: QuotientPresentation,
    /// Only set when the centre is trivial.
    pub purely_infinite: Option<bool>,
    pub simple: Option<bool>,
    pub isolated: Vec<String>,
    pub euler_characteristic: i64,
}

impl BoundaryReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.isolated.is_empty()
    }
}

pub fn boundary_quotient_report(graph: &PresentationGraph) -> BoundaryReport {
    let dec = graph.opp_components();
    let ideal = LatticeIdeal::from_sets(dec.len(), (0..dec.len()).map(|i| 1u64 << i));
    let presentation = presentation_for(graph, &ideal);
    let trivial = dec.isolated == 0;
    BoundaryReport {
        ideal,
        presentation,
        purely_infinite: trivial.then_some(true),
        simple: trivial.then_some(true),
        isolated: graph.mask_names(dec.isolated),
        euler_characteristic: graph.clique_euler(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalIdealReport {
    /// `⟨Λ⟩`.
    pub ideal: LatticeIdeal,
    /// The ideal is generated by `f_S` for this generator set (all of `S`).
    pub relation: GenMask,
    pub coincides_with_boundary_ideal: bool,
    pub note: &'static str,
}

pub fn minimal_ideal_report(graph: &PresentationGraph) -> MinimalIdealReport {
    let dec = graph.opp_components();
    let ideal = LatticeIdeal::from_sets(dec.len(), [dec.full_set()]);
    let boundary = LatticeIdeal::from_sets(dec.len(), (0..dec.len()).map(|i| 1u64 << i));
    MinimalIdealReport {
        coincides_with_boundary_ideal: ideal == boundary,
        ideal,
        relation: graph.all_mask(),
        note: "isomorphic to the compact operators",
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    /// The component set `B` in exactly one of the two ideals.
    pub set: ComponentSet,
    pub point: SpectrumPoint,
    pub satisfies_first: bool,
    pub satisfies_second: bool,
    pub explanation: String,
}

/// Whether `p` satisfies every basic relation of `ideal`.
pub fn satisfies_ideal(m: &ArtinMonoid, p: &SpectrumPoint, ideal: &LatticeIdeal) -> bool {
    ideal.generators.iter().all(|&b| satisfies(m, p, &basic_relation(m, b)))
}

/// A tail point satisfying the relations of one ideal but not the other.
pub fn separating_witness(m: &ArtinMonoid, first: &LatticeIdeal, second: &LatticeIdeal) -> Result<Separation> {
    let full = full_set(first.components);
    let mut candidates: Vec<ComponentSet> =
        (0..=full).filter(|&c| first.contains(c) != second.contains(c)).collect();
    candidates.sort_by(set_order);
    let set = *candidates.first().ok_or(Error::EqualIdeals)?;
    let point = SpectrumPoint::Tail(component_witness(m, set));
    let satisfies_first = satisfies_ideal(m, &point, first);
    let satisfies_second = satisfies_ideal(m, &point, second);
    let dec = m.graph().opp_components();
    let labels = set_labels(m.graph(), &dec, set);
    let explanation = if set == 0 {
        "the set {} lies in exactly one ideal; its relation S_∅ is the empty product 1 = 0, \
         which no point satisfies"
            .to_string()
    } else {
        format!(
            "the set {{{}}} lies in exactly one ideal; the tail of w = {} fails S_C exactly when C ⊆ {{{}}}",
            labels.join(","),
            m.format(point.base_tail()),
            labels.join(","),
        )
    };
    Ok(Separation { set, point, satisfies_first, satisfies_second, explanation })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: ComponentSet = 0b01;
    const B: ComponentSet = 0b10;

    fn ideal(sets: &[ComponentSet]) -> LatticeIdeal {
        LatticeIdeal::new(2, sets.iter().copied()).unwrap()
    }

    #[test]
    fn antichain_reduction() {
        assert_eq!(ideal(&[A, A | B]).generators(), &[A]);
        assert_eq!(ideal(&[B, A]).generators(), &[A, B]);
        assert!(ideal(&[]).is_zero());
        assert!(matches!(LatticeIdeal::new(2, [0b100]), Err(Error::UnknownComponent(_))));
    }

    #[test]
    fn order_and_operations() {
        assert!(ideal(&[A]).leq(&ideal(&[A, B])));
        assert!(!ideal(&[A, B]).leq(&ideal(&[A])));
        assert_eq!(ideal(&[A]).meet(&ideal(&[B])), ideal(&[A | B]));
        assert_eq!(ideal(&[A]).join(&LatticeIdeal::zero(2)), ideal(&[A]));
        assert!(LatticeIdeal::zero(2).leq(&LatticeIdeal::whole(2)));
    }

    #[test]
    fn ideal_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_ideals(n, 5).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 3, 6, 20, 168]);
        assert!(matches!(enumerate_ideals(6, 5), Err(Error::BoundExceeded { .. })));
        let two = enumerate_ideals(2, 5).unwrap();
        assert!(two[0].is_zero() && two[5].is_whole());
        // Hasse diagram of the free distributive lattice on two generators plus ends.
        assert_eq!(hasse_diagram(&two).len(), 6);
    }

    #[test]
    fn parsing_and_formatting() {
        let g = PresentationGraph::complete_bipartite(2, 2);
        let i = parse_ideal(&g, "{a2},{b1}").unwrap();
        assert_eq!(i.generators(), &[A, B]);
        assert_eq!(format_ideal(&g, &i), "<{a1},{b1}>");
        assert_eq!(ideal_to_json(&g, &i), json!([["a1"], ["b1"]]));
        assert!(parse_ideal(&g, "").unwrap().is_zero());
        assert!(parse_ideal(&g, "{}").unwrap().is_whole());
        assert_eq!(parse_ideal(&g, "{a1,b2}").unwrap().generators(), &[A | B]);
        assert!(matches!(parse_ideal(&g, "{z}"), Err(Error::UnknownComponent(_))));
        assert!(parse_ideal(&g, "a1").is_err());
    }

    #[test]
    fn presentations() {
        let g = PresentationGraph::complete_bipartite(2, 2);
        let p = quotient_presentation(&g, &ideal(&[A])).unwrap();
        assert_eq!(p.extra, vec![0b0011]);
        assert_eq!((p.isometries.len(), p.commutations.len(), p.orthogonality.len()), (4, 4, 2));
        let p = quotient_presentation(&g, &LatticeIdeal::zero(2)).unwrap();
        assert!(p.extra.is_empty());
        let z2 = PresentationGraph::complete(2);
        assert!(matches!(
            quotient_presentation(&z2, &LatticeIdeal::zero(2)),
            Err(Error::NonTrivialCentre(v)) if v == ["a", "b"]
        ));
    }

    #[test]
    fn reports() {
        let free = PresentationGraph::edgeless(3);
        let r = boundary_quotient_report(&free);
        assert_eq!((r.purely_infinite, r.simple), (Some(true), Some(true)));
        assert_eq!(r.presentation.extra, vec![0b111]);
        let z2 = PresentationGraph::complete(2);
        let r = boundary_quotient_report(&z2);
        assert_eq!(r.purely_infinite, None);
        assert_eq!(r.isolated, ["a", "b"]);
        let m = minimal_ideal_report(&PresentationGraph::complete_bipartite(2, 2));
        assert_eq!(m.ideal.generators(), &[A | B]);
        assert!(!m.coincides_with_boundary_ideal);
        assert!(minimal_ideal_report(&PresentationGraph::path(4)).coincides_with_boundary_ideal);
    }

    #[test]
    fn separation() {
        let m = ArtinMonoid::new(PresentationGraph::complete_bipartite(2, 2));
        let s = separating_witness(&m, &ideal(&[A]), &ideal(&[B])).unwrap();
        assert_eq!(s.set, A);
        assert_eq!(m.format(s.point.base_tail()), "b1 b2");
        assert!(!s.satisfies_first && s.satisfies_second);
        let s = separating_witness(&m, &LatticeIdeal::zero(2), &LatticeIdeal::whole(2)).unwrap();
        assert_eq!(s.set, 0);
        assert!(s.satisfies_first && !s.satisfies_second);
        assert_eq!(separating_witness(&m, &ideal(&[A]), &ideal(&[A])), Err(Error::EqualIdeals));
    }
}
