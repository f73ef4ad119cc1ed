//! Exact arithmetic in the *-algebra spanned by monomials `V_x V_y*`.
//!
//! Products follow the Nica rule `V_y* V_z = V_{y\z} V_{z\y}*` when `y∨z`
//! exists and `0` otherwise. Coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::monoid::{ArtinMonoid, GroupWord, Trace};
use crate::spectrum::{member, member_trace, translate, SpectrumPoint};

/// `V_left V_right*`. The diagonal monomial `(x, x)` is the range projection `e_x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub left: Trace,
    pub right: Trace,
}

impl Monomial {
    pub fn new(left: Trace, right: Trace) -> Self {
        Monomial { left, right }
    }

    pub fn one() -> Self {
        Monomial::new(Trace::identity(), Trace::identity())
    }

    pub fn projection(x: Trace) -> Self {
        Monomial::new(x.clone(), x)
    }

    pub fn adjoint(&self) -> Self {
        Monomial::new(self.right.clone(), self.left.clone())
    }

    pub fn is_diagonal(&self) -> bool {
        self.left == self.right
    }

    pub fn render(&self, m: &ArtinMonoid) -> String {
        let v = |x: &Trace, star: &str| {
            if x.is_identity() {
                String::new()
            } else {
                format!("V_{{{}}}{star}", m.format(x).replace(' ', ""))
            }
        };
        if self.is_diagonal() {
            return if self.left.is_identity() {
                "1".to_string()
            } else {
                format!("e_{{{}}}", m.format(&self.left).replace(' ', ""))
            };
        }
        [v(&self.left, ""), v(&self.right, "*")].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join(" ")
    }
}

/// `(x, y)·(z, w)`, or `None` for zero.
pub fn multiply_monomials(m: &ArtinMonoid, a: &Monomial, b: &Monomial) -> Option<Monomial> {
    let up = m.residual(&a.right, &b.left)?;
    let down = m.residual(&b.left, &a.right)?;
    Some(Monomial::new(m.multiply(&a.left, &up), m.multiply(&b.right, &down)))
}

/// Finite rational combination of monomials; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, BigRational>,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn monomial(mono: Monomial) -> Self {
        Self::term(mono, BigRational::one())
    }

    pub fn projection(x: Trace) -> Self {
        Self::monomial(Monomial::projection(x))
    }

    pub fn term(mono: Monomial, coeff: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(mono, coeff);
        out
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono.clone()).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement { terms: self.terms.iter().map(|(k, v)| (k.adjoint(), v.clone())).collect() }
    }

    pub fn multiply(&self, m: &ArtinMonoid, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(ab) = multiply_monomials(m, a, b) {
                    out.add_term(ab, ca * cb);
                }
            }
        }
        out
    }

    /// `Φ`: keeps the diagonal monomials.
    pub fn expectation_phi(&self) -> Self {
        self.filter(|mono| mono.is_diagonal())
    }

    /// `Φ_𝒢`: keeps monomials whose two sides have equal abelianization.
    pub fn expectation_grading(&self, m: &ArtinMonoid) -> Self {
        self.filter(|mono| m.abelianize(&mono.left) == m.abelianize(&mono.right))
    }

    fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        AlgebraElement { terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    /// `[{left, right, coeff: "p/q"}]` in monomial order.
    pub fn to_json(&self, m: &ArtinMonoid) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| json!({ "left": m.format(&k.left), "right": m.format(&k.right), "coeff": c.to_string() }))
                .collect(),
        )
    }

    /// `1 - e_{a} - e_{b}`, in monomial order.
    pub fn render(&self, m: &ArtinMonoid) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = mono.render(m);
            if abs.is_one() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&abs.to_string());
            } else {
                out.push_str(&format!("{abs} {body}"));
            }
        }
        out
    }
}

/// `e_x e_y`, which is `e_{x∨y}` or zero.
pub fn nica_projection_product(m: &ArtinMonoid, x: &Trace, y: &Trace) -> Option<Monomial> {
    multiply_monomials(m, &Monomial::projection(x.clone()), &Monomial::projection(y.clone()))
}

/// `f_H = ∏_{h∈H}(1 − e_h)` expanded by inclusion–exclusion over subsets of `H`.
pub fn defect(m: &ArtinMonoid, h: &[Trace]) -> AlgebraElement {
    let mut h = h.to_vec();
    h.sort();
    h.dedup();
    // Subsets as (join so far, sign); a None join is ∞ and drops out.
    let mut partial: Vec<(Trace, i64)> = vec![(Trace::identity(), 1)];
    for x in &h {
        let extra: Vec<(Trace, i64)> =
            partial.iter().filter_map(|(j, s)| m.join(j, x).map(|jx| (jx, -s))).collect();
        partial.extend(extra);
    }
    let mut out = AlgebraElement::zero();
    for (j, s) in partial {
        out.add_term(Monomial::projection(j), int(s));
    }
    out
}

/// The same expansion as [`defect`], by multiplying out the binomials.
pub fn defect_by_products(m: &ArtinMonoid, h: &[Trace]) -> AlgebraElement {
    let mut h = h.to_vec();
    h.sort();
    h.dedup();
    h.iter().fold(AlgebraElement::one(), |acc, x| {
        acc.multiply(m, &AlgebraElement::one().sub(&AlgebraElement::projection(x.clone())))
    })
}

/// Outcome of pairing an element with a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Value(BigRational),
    /// Some off-diagonal term might fix the point; its contribution is unknown.
    Undecided,
}

/// `V_x V_y* ε_p = ε_{x y⁻¹ p}` when `y ∈ p`, else `None`.
pub fn apply(m: &ArtinMonoid, mono: &Monomial, p: &SpectrumPoint) -> Option<SpectrumPoint> {
    if !member_trace(m, p, &mono.right) {
        return None;
    }
    let t = m.fraction(&mono.left, &mono.right);
    Some(translate(m, &t, p).expect("y ∈ p implies (x y⁻¹)⁻¹ ∈ p"))
}

/// Group elements used to compare two points: `u v⁻¹` with `u, v` of length at most 2.
fn probe_elements(m: &ArtinMonoid) -> Vec<GroupWord> {
    let short = m.enumerate(2);
    let mut out = Vec::new();
    for u in &short {
        for v in &short {
            out.push(m.fraction(u, v));
        }
    }
    out
}

/// `⟨ε_p, A ε_p⟩`. Diagonal terms contribute `c·[x ∈ p]`. An off-diagonal term
/// contributes `0` when the moved point visibly differs from `p` on a probe set,
/// and makes the answer undecided otherwise.
pub fn evaluate(m: &ArtinMonoid, a: &AlgebraElement, p: &SpectrumPoint) -> Evaluation {
    let mut total = BigRational::zero();
    let mut probes: Option<Vec<GroupWord>> = None;
    for (mono, c) in a.terms() {
        if mono.is_diagonal() {
            if member_trace(m, p, &mono.left) {
                total += c;
            }
            continue;
        }
        let Some(q) = apply(m, mono, p) else { continue };
        let probes = probes.get_or_insert_with(|| probe_elements(m));
        if probes.iter().all(|g| member(m, &q, g) == member(m, p, g)) {
            return Evaluation::Undecided;
        }
    }
    Evaluation::Value(total)
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Value(v) => write!(f, "{v}"),
            Evaluation::Undecided => f.write_str("UNDECIDED"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PresentationGraph;

    fn t(m: &ArtinMonoid, s: &str) -> Trace {
        m.parse_trace(s).unwrap()
    }

    fn mono(m: &ArtinMonoid, x: &str, y: &str) -> Monomial {
        Monomial::new(t(m, x), t(m, y))
    }

    #[test]
    fn monomial_products() {
        let free = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let ab = ArtinMonoid::new(PresentationGraph::complete(2));
        assert_eq!(multiply_monomials(&free, &mono(&free, "a", "e"), &mono(&free, "b", "e")), Some(mono(&free, "ab", "e")));
        assert_eq!(multiply_monomials(&free, &mono(&free, "e", "a"), &mono(&free, "b", "e")), None);
        assert_eq!(multiply_monomials(&ab, &mono(&ab, "e", "a"), &mono(&ab, "b", "e")), Some(mono(&ab, "b", "a")));
        // Isometry relation.
        assert_eq!(multiply_monomials(&free, &mono(&free, "e", "a"), &mono(&free, "a", "e")), Some(Monomial::one()));
    }

    #[test]
    fn projections() {
        let free = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let ab = ArtinMonoid::new(PresentationGraph::complete(2));
        assert_eq!(nica_projection_product(&ab, &t(&ab, "a"), &t(&ab, "b")), Some(Monomial::projection(t(&ab, "ab"))));
        assert_eq!(nica_projection_product(&free, &t(&free, "a"), &t(&free, "b")), None);
        let x = t(&free, "ab");
        assert_eq!(nica_projection_product(&free, &x, &x), Some(Monomial::projection(x)));
    }

    #[test]
    fn adjoints() {
        let free = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let a = AlgebraElement::monomial(mono(&free, "a", "b"));
        assert_eq!(a.adjoint(), AlgebraElement::monomial(mono(&free, "b", "a")));
        assert_eq!(a.adjoint().adjoint(), a);
        let p = AlgebraElement::projection(t(&free, "a"));
        assert_eq!(p.adjoint(), p);
    }

    #[test]
    fn defects() {
        let free = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let ab = ArtinMonoid::new(PresentationGraph::complete(2));
        let h = |m: &ArtinMonoid| vec![t(m, "a"), t(m, "b")];
        assert_eq!(defect(&ab, &h(&ab)).render(&ab), "1 - e_{a} - e_{b} + e_{ab}");
        assert_eq!(defect(&free, &h(&free)).render(&free), "1 - e_{a} - e_{b}");
        assert_eq!(defect(&free, &[]), AlgebraElement::one());
        for m in [&free, &ab] {
            assert_eq!(defect(m, &h(m)), defect_by_products(m, &h(m)));
        }
    }

    #[test]
    fn expectations() {
        let free = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let off = AlgebraElement::monomial(mono(&free, "a", "b"));
        assert!(off.expectation_phi().is_zero());
        assert!(off.expectation_grading(&free).is_zero());
        let diag = AlgebraElement::projection(t(&free, "a"));
        assert_eq!(diag.expectation_phi(), diag);
        let graded = AlgebraElement::monomial(mono(&free, "ab", "ba"));
        assert_eq!(graded.expectation_grading(&free), graded);
        assert!(graded.expectation_phi().is_zero());
    }

    #[test]
    fn evaluation() {
        let free = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let f = defect(&free, &[t(&free, "a"), t(&free, "b")]);
        let one = Evaluation::Value(BigRational::one());
        assert_eq!(evaluate(&free, &f, &SpectrumPoint::Tail(Trace::identity())), one);
        assert_eq!(evaluate(&free, &f, &SpectrumPoint::Tail(t(&free, "ab"))), Evaluation::Value(BigRational::zero()));
        let moved = apply(&free, &mono(&free, "a", "e"), &SpectrumPoint::Tail(Trace::identity())).unwrap();
        assert!(member_trace(&free, &moved, &t(&free, "a")));
        assert!(!member_trace(&free, &moved, &t(&free, "b")));
        // V_a moves ω(e) but fixes ω(aaa...) up to the probes.
        let off = AlgebraElement::monomial(mono(&free, "a", "e"));
        assert_eq!(evaluate(&free, &off, &SpectrumPoint::Tail(Trace::identity())), Evaluation::Value(BigRational::zero()));
        assert_eq!(evaluate(&free, &off, &SpectrumPoint::Tail(t(&free, "a"))), Evaluation::Undecided);
    }
}
