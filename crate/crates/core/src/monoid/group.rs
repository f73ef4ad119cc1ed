//! Words in the Artin group, reduced by cancellation up to commutation.

use crate::error::{Error, Result};
use crate::graph::Gen;

use super::{ArtinMonoid, Trace};

/// A generator or its inverse. Ordered by generator, positive before inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: Gen) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: Gen) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// A group element. Words built through [`ArtinMonoid`] are reduced and in
/// lexicographic normal form, so equality of words is equality in the group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(Vec<Letter>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl ArtinMonoid {
    /// Cancels generator/inverse pairs that can be made adjacent, then puts the
    /// word in lexicographic normal form over signed letters.
    pub fn group_reduce(&self, letters: &[Letter]) -> GroupWord {
        let mut w = letters.to_vec();
        'outer: loop {
            for i in 0..w.len() {
                let commuting = self.graph().neighbours(w[i].gen);
                let mut between = 0u64;
                for j in i + 1..w.len() {
                    if w[j] == w[i].inv() && between & !commuting == 0 {
                        w.remove(j);
                        w.remove(i);
                        continue 'outer;
                    }
                    between |= 1 << w[j].gen;
                    if between & !commuting != 0 {
                        break;
                    }
                }
            }
            break;
        }
        GroupWord(self.signed_normal_form(w))
    }

    fn signed_normal_form(&self, mut word: Vec<Letter>) -> Vec<Letter> {
        let mut out = Vec::with_capacity(word.len());
        while !word.is_empty() {
            let mut allowed = self.graph().all_mask();
            let mut best = (word[0], 0);
            for (i, &c) in word.iter().enumerate() {
                if allowed >> c.gen & 1 == 1 && c < best.0 {
                    best = (c, i);
                }
                allowed &= self.graph().neighbours(c.gen);
                if allowed == 0 {
                    break;
                }
            }
            word.remove(best.1);
            out.push(best.0);
        }
        out
    }

    pub fn group_word(&self, letters: &[Letter]) -> Result<GroupWord> {
        if let Some(l) = letters.iter().find(|l| l.gen as usize >= self.rank()) {
            return Err(Error::UnknownGenerator(format!("#{}", l.gen)));
        }
        Ok(self.group_reduce(letters))
    }

    pub fn from_trace(&self, x: &Trace) -> GroupWord {
        GroupWord(x.letters().iter().map(|&g| Letter::pos(g)).collect())
    }

    /// `x y⁻¹` for traces `x`, `y`.
    pub fn fraction(&self, x: &Trace, y: &Trace) -> GroupWord {
        let mut w: Vec<Letter> = x.letters().iter().map(|&g| Letter::pos(g)).collect();
        w.extend(y.letters().iter().rev().map(|&g| Letter::neg(g)));
        self.group_reduce(&w)
    }

    pub fn group_multiply(&self, g: &GroupWord, h: &GroupWord) -> GroupWord {
        let mut w = g.0.clone();
        w.extend_from_slice(&h.0);
        self.group_reduce(&w)
    }

    pub fn group_invert(&self, g: &GroupWord) -> GroupWord {
        let w: Vec<Letter> = g.0.iter().rev().map(|l| l.inv()).collect();
        self.group_reduce(&w)
    }

    /// Whether the reduced word has no inverse letters, i.e. the element lies in P.
    pub fn is_positive(&self, g: &GroupWord) -> bool {
        self.group_reduce(&g.0).0.iter().all(|l| !l.inverse)
    }

    /// The positive trace represented by `g`, if any.
    pub fn to_trace(&self, g: &GroupWord) -> Option<Trace> {
        let reduced = self.group_reduce(&g.0);
        if reduced.0.iter().any(|l| l.inverse) {
            return None;
        }
        Some(self.nf(reduced.0.iter().map(|l| l.gen).collect()))
    }

    /// Writes `g = u v⁻¹` with `u, v ∈ P` sharing no right divisor, if `g ∈ P P⁻¹`.
    ///
    /// In a reduced word this holds iff every positive letter commutes with all
    /// inverse letters to its left.
    pub fn split_fraction(&self, g: &GroupWord) -> Option<(Trace, Trace)> {
        let reduced = self.group_reduce(&g.0);
        let mut negatives_seen = 0u64;
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for l in &reduced.0 {
            if l.inverse {
                negatives_seen |= 1 << l.gen;
                neg.push(l.gen);
            } else {
                if negatives_seen & !self.graph().neighbours(l.gen) != 0 {
                    return None;
                }
                pos.push(l.gen);
            }
        }
        neg.reverse();
        Some((self.nf(pos), self.nf(neg)))
    }

    /// Parses a group word: tokens are `s`, `s^-1` or `s⁻¹`, with runs of
    /// single-character positive generators allowed as in traces.
    pub fn parse_group_word(&self, input: &str) -> Result<GroupWord> {
        let mut letters = Vec::new();
        for token in input.split_whitespace() {
            let stripped = token.strip_suffix("^-1").or_else(|| token.strip_suffix("⁻¹"));
            match stripped {
                Some(name) => {
                    let g = self.graph().index(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
                    letters.push(Letter::neg(g));
                }
                None => letters.extend(self.tokenize(token)?.into_iter().map(Letter::pos)),
            }
        }
        Ok(self.group_reduce(&letters))
    }

    pub fn format_group_word(&self, g: &GroupWord) -> String {
        if g.is_identity() {
            return "e".to_string();
        }
        let parts: Vec<String> = g
            .0
            .iter()
            .map(|l| {
                let name = self.graph().name(l.gen);
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.to_string()
                }
            })
            .collect();
        parts.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PresentationGraph;

    fn word(m: &ArtinMonoid, s: &str) -> GroupWord {
        m.parse_group_word(s).unwrap()
    }

    #[test]
    fn free_cancellation() {
        let m = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let g = word(&m, "a a^-1 b");
        assert_eq!(m.format_group_word(&g), "b");
        assert!(m.is_positive(&g));
        let h = word(&m, "a^-1 b");
        assert_eq!(m.format_group_word(&h), "a^-1 b");
        assert!(!m.is_positive(&h));
        assert_eq!(word(&m, "a b a^-1").len(), 3);
    }

    #[test]
    fn cancellation_through_commuting_letters() {
        let m = ArtinMonoid::new(PresentationGraph::complete(2));
        let g = word(&m, "a b a^-1");
        assert_eq!(m.format_group_word(&g), "b");
        assert!(m.is_positive(&g));
        assert_eq!(word(&m, "b a⁻¹"), word(&m, "a^-1 b"));
    }

    #[test]
    fn inverse_and_multiplication() {
        let m = ArtinMonoid::new(PresentationGraph::path(4));
        let g = word(&m, "a b^-1 c d^-1 a");
        let gi = m.group_invert(&g);
        assert!(m.group_multiply(&g, &gi).is_identity());
        assert!(m.group_multiply(&gi, &g).is_identity());
    }

    #[test]
    fn fractions_split() {
        let m = ArtinMonoid::new(PresentationGraph::edgeless(2));
        let (u, v) = m.split_fraction(&word(&m, "a b^-1")).unwrap();
        assert_eq!((m.format(&u), m.format(&v)), ("a".into(), "b".into()));
        assert_eq!(m.split_fraction(&word(&m, "a^-1 b")), None);
        let z = ArtinMonoid::new(PresentationGraph::complete(2));
        let (u, v) = z.split_fraction(&word(&z, "a^-1 b")).unwrap();
        assert_eq!((z.format(&u), z.format(&v)), ("b".into(), "a".into()));
        assert!(matches!(m.parse_group_word("q^-1"), Err(Error::UnknownGenerator(_))));
    }
}
