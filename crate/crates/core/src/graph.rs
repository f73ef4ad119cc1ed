//! The defining graph of a right-angled Artin monoid.
//!
//! Vertices are generators; an edge `{a, b}` means `ab = ba`. Vertex names are
//! kept sorted lexicographically and a generator is identified by its index in
//! that order, so every normal form in the crate is relative to the name order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a generator in the sorted vertex list.
pub type Gen = u8;

/// Bit set of generators (bit `i` is generator `i`).
pub type GenMask = u64;

/// Vertex names that would clash with trace syntax.
pub const RESERVED_NAMES: [&str; 2] = ["e", "INF"];

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresentationGraph {
    names: Vec<String>,
    adjacency: Vec<GenMask>,
}

/// Connected components of the opposite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    /// Vertex masks, ordered by least vertex.
    pub components: Vec<GenMask>,
    /// Vertices isolated in the opposite graph.
    pub isolated: GenMask,
}

#[derive(Serialize, Deserialize)]
struct GraphObject {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
}

fn validate_name(name: &str) -> Result<()> {
    let bad_char = |c: char| c.is_whitespace() || ",;:{}^#\"⁻".contains(c);
    if name.is_empty() || name.chars().any(bad_char) || RESERVED_NAMES.contains(&name) {
        return Err(Error::InvalidName(name.to_string()));
    }
    Ok(())
}

/// Generators strictly above `g`.
#[inline]
pub fn above(g: Gen) -> GenMask {
    if g >= 63 {
        0
    } else {
        u64::MAX << (g + 1)
    }
}

pub fn bits(mask: GenMask) -> impl Iterator<Item = Gen> {
    (0..64u8).filter(move |i| mask >> i & 1 == 1)
}

impl PresentationGraph {
    /// Builds a graph from vertex names and edges given by name.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut names: Vec<String> = Vec::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            validate_name(v)?;
            names.push(v.to_string());
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0].clone()));
        }
        if names.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices { max: MAX_VERTICES, got: names.len() });
        }
        let mut graph = PresentationGraph { adjacency: vec![0; names.len()], names };
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let i = graph.index(u).ok_or_else(|| Error::UndeclaredVertex(u.to_string()))?;
            let j = graph.index(v).ok_or_else(|| Error::UndeclaredVertex(v.to_string()))?;
            if i == j {
                return Err(Error::SelfLoop(u.to_string()));
            }
            if graph.adjacent(i, j) {
                return Err(Error::DuplicateEdge(u.to_string(), v.to_string()));
            }
            graph.adjacency[i as usize] |= 1 << j;
            graph.adjacency[j as usize] |= 1 << i;
        }
        Ok(graph)
    }

    /// Parses either the line-based text format or the JSON object format.
    pub fn parse(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }

    /// Text format: one `vertices: v1 v2 ...` line followed by `edge: u v` lines.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_text(input: &str) -> Result<Self> {
        let mut vertices: Option<Vec<&str>> = None;
        let mut edges = Vec::new();
        for (n, raw) in input.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `vertices:` or `edge:`, found `{line}`")))?;
            match key.trim() {
                "vertices" => {
                    if vertices.is_some() {
                        return Err(err("`vertices:` given twice".into()));
                    }
                    vertices = Some(rest.split_whitespace().collect());
                }
                "edge" => {
                    if vertices.is_none() {
                        return Err(err("`edge:` before `vertices:`".into()));
                    }
                    let ends: Vec<&str> = rest.split_whitespace().collect();
                    if ends.len() != 2 {
                        return Err(err(format!("an edge has two endpoints, found {}", ends.len())));
                    }
                    edges.push((ends[0], ends[1], line_no));
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let vertices = vertices.ok_or(Error::Parse { line: 0, message: "missing `vertices:` line".into() })?;
        // Build incrementally so that edge errors carry their line number.
        let mut graph = Self::new::<&str>(&vertices, &[])?;
        for (u, v, line) in edges {
            graph = graph
                .with_edge(u, v)
                .map_err(|e| Error::Parse { line, message: e.to_string() })?;
        }
        Ok(graph)
    }

    pub fn parse_json(input: &str) -> Result<Self> {
        let obj: GraphObject = serde_json::from_str(input).map_err(|e| Error::Json(e.to_string()))?;
        let edges: Vec<(&str, &str)> = obj.edges.iter().map(|[u, v]| (u.as_str(), v.as_str())).collect();
        let vertices: Vec<&str> = obj.vertices.iter().map(String::as_str).collect();
        Self::new(&vertices, &edges)
    }

    fn with_edge(mut self, u: &str, v: &str) -> Result<Self> {
        let i = self.index(u).ok_or_else(|| Error::UndeclaredVertex(u.to_string()))?;
        let j = self.index(v).ok_or_else(|| Error::UndeclaredVertex(v.to_string()))?;
        if i == j {
            return Err(Error::SelfLoop(u.to_string()));
        }
        if self.adjacent(i, j) {
            return Err(Error::DuplicateEdge(u.to_string(), v.to_string()));
        }
        self.adjacency[i as usize] |= 1 << j;
        self.adjacency[j as usize] |= 1 << i;
        Ok(self)
    }

    /// Canonical text form; `parse_text(export_text(g)) == g`.
    pub fn export_text(&self) -> String {
        let mut out = String::from("vertices:");
        for name in &self.names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for (u, v) in self.edges() {
            let _ = writeln!(out, "edge: {} {}", self.name(u), self.name(v));
        }
        out
    }

    /// Canonical compact JSON form, newline terminated.
    pub fn export_json(&self) -> String {
        let obj = GraphObject {
            vertices: self.names.clone(),
            edges: self.edges().map(|(u, v)| [self.name(u).to_string(), self.name(v).to_string()]).collect(),
        };
        let mut s = serde_json::to_string(&obj).expect("graph object serializes");
        s.push('\n');
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g as usize]
    }

    pub fn index(&self, name: &str) -> Option<Gen> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok().map(|i| i as Gen)
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> {
        0..self.names.len() as Gen
    }

    pub fn all_mask(&self) -> GenMask {
        if self.names.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.names.len()) - 1
        }
    }

    #[inline]
    pub fn adjacent(&self, a: Gen, b: Gen) -> bool {
        self.adjacency[a as usize] >> b & 1 == 1
    }

    /// Neighbours of `a` in the graph, i.e. the generators commuting with `a`.
    #[inline]
    pub fn neighbours(&self, a: Gen) -> GenMask {
        self.adjacency[a as usize]
    }

    /// Edges as index pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Gen, Gen)> + '_ {
        self.generators().flat_map(move |u| bits(self.adjacency[u as usize] & above(u)).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// The complement graph on the same vertex set.
    pub fn opposite(&self) -> PresentationGraph {
        let all = self.all_mask();
        let adjacency = self
            .generators()
            .map(|g| !self.adjacency[g as usize] & all & !(1u64 << g))
            .collect();
        PresentationGraph { names: self.names.clone(), adjacency }
    }

    /// Connected components of the opposite graph, ordered by least vertex.
    pub fn opp_components(&self) -> ComponentDecomposition {
        let opp = self.opposite();
        let mut seen: GenMask = 0;
        let mut components = Vec::new();
        let mut isolated = 0;
        for start in self.generators() {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp: GenMask = 1 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= opp.adjacency[v as usize];
                }
                frontier = next & !comp;
                comp |= next;
            }
            if comp.count_ones() == 1 {
                isolated |= comp;
            }
            seen |= comp;
            components.push(comp);
        }
        ComponentDecomposition { components, isolated }
    }

    /// Number of vertices isolated in the opposite graph, the rank of the centre.
    pub fn centre_rank(&self) -> usize {
        self.opp_components().isolated.count_ones() as usize
    }

    pub fn is_centre_trivial(&self) -> bool {
        self.centre_rank() == 0
    }

    /// Euler characteristic of the clique complex: alternating count of nonempty cliques.
    pub fn clique_euler(&self) -> i64 {
        fn extend(graph: &PresentationGraph, size: u32, candidates: GenMask) -> i64 {
            let mut total = 0;
            for v in bits(candidates) {
                // Only extend with larger vertices so every clique is counted once.
                let rest = candidates & graph.adjacency[v as usize] & above(v);
                let sign = if size.is_multiple_of(2) { 1 } else { -1 };
                total += sign + extend(graph, size + 1, rest);
            }
            total
        }
        extend(self, 0, self.all_mask())
    }

    /// Clique counts by size, starting at single vertices.
    pub fn clique_counts(&self) -> Vec<u64> {
        fn extend(graph: &PresentationGraph, size: usize, candidates: GenMask, counts: &mut Vec<u64>) {
            for v in bits(candidates) {
                if counts.len() <= size {
                    counts.push(0);
                }
                counts[size] += 1;
                let rest = candidates & graph.adjacency[v as usize] & above(v);
                extend(graph, size + 1, rest, counts);
            }
        }
        let mut counts = Vec::new();
        extend(self, 0, self.all_mask(), &mut counts);
        counts
    }

    pub fn mask_names(&self, mask: GenMask) -> Vec<String> {
        bits(mask).map(|g| self.name(g).to_string()).collect()
    }

    // Named families used throughout the tests, benches and docs.

    /// `n` isolated vertices `a, b, c, ...` (free monoid).
    pub fn edgeless(n: usize) -> Self {
        let names = letter_names(n);
        Self::new::<String>(&names, &[]).expect("valid edgeless graph")
    }

    /// Every `a_i` adjacent to every `b_j`, no other edges.
    pub fn complete_bipartite(left: usize, right: usize) -> Self {
        let a: Vec<String> = (1..=left).map(|i| format!("a{i}")).collect();
        let b: Vec<String> = (1..=right).map(|i| format!("b{i}")).collect();
        let edges: Vec<(String, String)> =
            a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect();
        let vertices: Vec<String> = a.iter().chain(&b).cloned().collect();
        Self::new(&vertices, &edges).expect("valid bipartite graph")
    }

    /// Path `a - b - c - ...` on `n` vertices.
    pub fn path(n: usize) -> Self {
        let names = letter_names(n);
        let edges: Vec<(String, String)> = names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Self::new(&names, &edges).expect("valid path graph")
    }

    /// Complete graph on `n` vertices (free abelian monoid).
    pub fn complete(n: usize) -> Self {
        let names = letter_names(n);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
        Self::new(&names, &edges).expect("valid complete graph")
    }

    /// Vertex `a` joined to `n` leaves `b, c, ...`.
    pub fn star(leaves: usize) -> Self {
        let names = letter_names(leaves + 1);
        let edges: Vec<(String, String)> = names[1..].iter().map(|v| (names[0].clone(), v.clone())).collect();
        Self::new(&names, &edges).expect("valid star graph")
    }

    /// Join of two graphs: disjoint union plus every edge between the parts.
    /// Names of the right part are suffixed with `'` when they clash.
    pub fn join(&self, other: &PresentationGraph) -> Self {
        let rename = |n: &String| if self.index(n).is_some() { format!("{n}'") } else { n.clone() };
        let right: Vec<String> = other.names.iter().map(rename).collect();
        let mut vertices = self.names.clone();
        vertices.extend(right.iter().cloned());
        let mut edges: Vec<(String, String)> =
            self.edges().map(|(u, v)| (self.name(u).to_string(), self.name(v).to_string())).collect();
        edges.extend(other.edges().map(|(u, v)| (right[u as usize].clone(), right[v as usize].clone())));
        for l in &self.names {
            for r in &right {
                edges.push((l.clone(), r.clone()));
            }
        }
        Self::new(&vertices, &edges).expect("valid join")
    }
}

fn letter_names(n: usize) -> Vec<String> {
    // Skip `e`, which is reserved for the identity trace.
    let alphabet: Vec<char> = ('a'..='z').filter(|&c| c != 'e').collect();
    (0..n)
        .map(|i| if i < alphabet.len() { alphabet[i].to_string() } else { format!("v{i}") })
        .collect()
}

impl ComponentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Component containing the given generator.
    pub fn component_of(&self, g: Gen) -> usize {
        self.components.iter().position(|c| c >> g & 1 == 1).expect("components partition the vertices")
    }

    /// Union of the generator sets of the components selected by `set` (bit `i` = component `i`).
    pub fn generators_of(&self, set: u64) -> GenMask {
        self.components.iter().enumerate().filter(|(i, _)| set >> i & 1 == 1).fold(0, |acc, (_, c)| acc | c)
    }

    pub fn full_set(&self) -> u64 {
        if self.components.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.components.len()) - 1
        }
    }
}
