//! Simple connected undirected graphs with optional multipartite structure.
//!
//! Vertices are dense `0..n` indices. For the complete (bi/multi)partite
//! families the canonical order lists the parts one after another, each part
//! in ascending index order. Every downstream encoding (positions, orbit
//! keys, JSON chip vectors) follows that order.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Textual graph specifier, as accepted by the CLI's `--graph` flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphSpec {
    Complete(usize),
    CompleteBipartite(usize, usize),
    CompleteMultipartite(Vec<usize>),
    Cycle(usize),
    Path(usize),
    File(PathBuf),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
    #[error("cannot read edge list {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
}

/// One violated graph invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    Empty,
    SelfLoop { vertex: usize },
    DuplicateEdge { u: usize, v: usize },
    EndpointOutOfRange { vertex: usize },
    Asymmetric { u: usize, v: usize },
    Disconnected { components: usize },
    EmptyPart { part: usize },
    PartStructure { u: usize, v: usize },
    PartsUnsorted,
    DegreeMismatch { vertex: usize, expected: usize, actual: usize },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::Empty => write!(f, "empty: graph has no vertices"),
            Issue::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Issue::DuplicateEdge { u, v } => write!(f, "duplicate edge {u}-{v}"),
            Issue::EndpointOutOfRange { vertex } => {
                write!(f, "edge endpoint {vertex} out of range")
            }
            Issue::Asymmetric { u, v } => write!(f, "asymmetric adjacency {u}->{v}"),
            Issue::Disconnected { components } => {
                write!(f, "disconnected: {components} components")
            }
            Issue::EmptyPart { part } => write!(f, "empty part {part}"),
            Issue::PartStructure { u, v } => {
                write!(f, "adjacency of {u} and {v} disagrees with the part structure")
            }
            Issue::PartsUnsorted => write!(f, "part sizes not sorted non-increasing"),
            Issue::DegreeMismatch {
                vertex,
                expected,
                actual,
            } => write!(f, "vertex {vertex} has degree {actual}, expected {expected}"),
        }
    }
}

/// Every violated invariant of a candidate graph. Empty iff valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, pred: impl Fn(&Issue) -> bool) -> bool {
        self.issues.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// An unvalidated vertex count plus edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    /// Parse the edge-list text format: one `u v` pair per line, `#` starts a
    /// comment, blank lines ignored. Ids may be any non-negative integers and
    /// are remapped densely in ascending id order.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(u), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(format!("line {}: expected `u v`", lineno + 1));
            };
            let parse = |s: &str| {
                s.parse::<u64>()
                    .map_err(|e| format!("line {}: bad vertex id `{s}`: {e}", lineno + 1))
            };
            raw.push((parse(u)?, parse(v)?));
        }
        let mut ids: BTreeMap<u64, usize> = BTreeMap::new();
        for &(u, v) in &raw {
            ids.insert(u, 0);
            ids.insert(v, 0);
        }
        for (dense, slot) in ids.values_mut().enumerate() {
            *slot = dense;
        }
        Ok(EdgeList {
            vertex_count: ids.len(),
            edges: raw.iter().map(|(u, v)| (ids[u], ids[v])).collect(),
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let n = self.vertex_count;
        if n == 0 {
            issues.push(Issue::Empty);
            return ValidationReport { issues };
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &self.edges {
            if u >= n || v >= n {
                issues.push(Issue::EndpointOutOfRange {
                    vertex: u.max(v),
                });
                continue;
            }
            if u == v {
                issues.push(Issue::SelfLoop { vertex: u });
                continue;
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                issues.push(Issue::DuplicateEdge { u: key.0, v: key.1 });
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let components = count_components(&adjacency);
        if components > 1 {
            issues.push(Issue::Disconnected { components });
        }
        ValidationReport { issues }
    }
}

fn count_components(adjacency: &[Vec<usize>]) -> usize {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        components += 1;
        seen[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    components
}

/// Part structure of a complete multipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parts {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    part_of: Vec<usize>,
    declared_index: Vec<usize>,
}

impl Parts {
    fn new(sizes: Vec<usize>, declared_index: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut part_of = Vec::new();
        for (p, &size) in sizes.iter().enumerate() {
            offsets.push(part_of.len());
            part_of.extend(std::iter::repeat_n(p, size));
        }
        Parts {
            sizes,
            offsets,
            part_of,
            declared_index,
        }
    }

    /// Part sizes in canonical order.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    /// Vertex ids of part `p`, ascending.
    pub fn members(&self, p: usize) -> std::ops::Range<usize> {
        self.offsets[p]..self.offsets[p] + self.sizes[p]
    }

    /// Vertex id of the `index`-th (0-based) vertex of part `p`.
    pub fn vertex(&self, p: usize, index: usize) -> usize {
        debug_assert!(index < self.sizes[p]);
        self.offsets[p] + index
    }

    /// For each canonical part, its position in the spec as written.
    pub fn declared_index(&self) -> &[usize] {
        &self.declared_index
    }
}

/// Immutable simple connected undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    edge_count: usize,
    parts: Option<Parts>,
    spec: Option<GraphSpec>,
}

impl Graph {
    /// Build from an explicit edge list, rejecting anything that is not a
    /// simple connected graph.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let list = EdgeList {
            vertex_count,
            edges: edges.to_vec(),
        };
        let report = list.validate();
        if !report.is_valid() {
            return Err(GraphError::Invalid(report));
        }
        Ok(Self::assemble(vertex_count, edges, None))
    }

    fn assemble(n: usize, edges: &[(usize, usize)], parts: Option<Parts>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        let degrees = adjacency.iter().map(Vec::len).collect();
        Graph {
            adjacency,
            degrees,
            edge_count: edges.len(),
            parts,
            spec: None,
        }
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges)
    }

    /// `K_{a,b}` with the `a` side first. Side order is kept as written.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self, GraphError> {
        Self::multipartite(vec![a, b], vec![0, 1])
    }

    /// Complete multipartite graph. Part sizes are sorted non-increasing
    /// (stable), and the canonical vertex order follows the sorted parts.
    pub fn complete_multipartite(sizes: &[usize]) -> Result<Self, GraphError> {
        let mut order: Vec<usize> = (0..sizes.len()).collect();
        order.sort_by(|&x, &y| sizes[y].cmp(&sizes[x]));
        let sorted = order.iter().map(|&i| sizes[i]).collect();
        Self::multipartite(sorted, order)
    }

    fn multipartite(sizes: Vec<usize>, declared: Vec<usize>) -> Result<Self, GraphError> {
        let empty: Vec<Issue> = sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 0)
            .map(|(p, _)| Issue::EmptyPart { part: declared[p] })
            .collect();
        if !empty.is_empty() || sizes.is_empty() {
            let issues = if sizes.is_empty() { vec![Issue::Empty] } else { empty };
            return Err(GraphError::Invalid(ValidationReport { issues }));
        }
        let parts = Parts::new(sizes, declared);
        let n = parts.part_of.len();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if parts.part_of[u] != parts.part_of[v] {
                    edges.push((u, v));
                }
            }
        }
        let report = EdgeList {
            vertex_count: n,
            edges: edges.clone(),
        }
        .validate();
        if !report.is_valid() {
            return Err(GraphError::Invalid(report));
        }
        Ok(Self::assemble(n, &edges, Some(parts)))
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            let issues = match n {
                0 => vec![Issue::Empty],
                1 => vec![Issue::SelfLoop { vertex: 0 }],
                _ => vec![Issue::DuplicateEdge { u: 0, v: 1 }],
            };
            return Err(GraphError::Invalid(ValidationReport { issues }));
        }
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.degrees
            .get(v)
            .copied()
            .ok_or(GraphError::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count(),
            })
    }

    pub fn parts(&self) -> Option<&Parts> {
        self.parts.as_ref()
    }

    /// The spec this graph was built from, if any.
    pub fn spec(&self) -> Option<&GraphSpec> {
        self.spec.as_ref()
    }

    /// `(a, b)` side sizes when this is a complete bipartite graph.
    pub fn bipartite_sides(&self) -> Option<(usize, usize)> {
        match self.parts() {
            Some(p) if p.count() == 2 => Some((p.sizes[0], p.sizes[1])),
            _ => None,
        }
    }

    /// Re-check every structural invariant of this graph.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let n = self.vertex_count();
        if n == 0 {
            issues.push(Issue::Empty);
        }
        for u in 0..n {
            let row = &self.adjacency[u];
            for (i, &v) in row.iter().enumerate() {
                if v >= n {
                    issues.push(Issue::EndpointOutOfRange { vertex: v });
                    continue;
                }
                if v == u {
                    issues.push(Issue::SelfLoop { vertex: u });
                }
                if i > 0 && row[i - 1] == v {
                    issues.push(Issue::DuplicateEdge { u, v });
                }
                if self.adjacency[v].binary_search(&u).is_err() {
                    issues.push(Issue::Asymmetric { u, v });
                }
            }
            if self.degrees[u] != row.len() {
                issues.push(Issue::DegreeMismatch {
                    vertex: u,
                    expected: row.len(),
                    actual: self.degrees[u],
                });
            }
        }
        let components = count_components(&self.adjacency);
        if components > 1 {
            issues.push(Issue::Disconnected { components });
        }
        if let Some(parts) = &self.parts {
            if parts.sizes.windows(2).any(|w| w[0] < w[1]) && parts.count() != 2 {
                issues.push(Issue::PartsUnsorted);
            }
            for (p, &s) in parts.sizes.iter().enumerate() {
                if s == 0 {
                    issues.push(Issue::EmptyPart { part: p });
                }
            }
            for u in 0..n {
                for v in u + 1..n {
                    let adjacent = self.adjacency[u].binary_search(&v).is_ok();
                    if adjacent != (parts.part_of[u] != parts.part_of[v]) {
                        issues.push(Issue::PartStructure { u, v });
                    }
                }
                let expected = n - parts.sizes[parts.part_of[u]];
                if self.degrees[u] != expected {
                    issues.push(Issue::DegreeMismatch {
                        vertex: u,
                        expected,
                        actual: self.degrees[u],
                    });
                }
            }
        }
        ValidationReport { issues }
    }
}

/// Build and validate the graph named by `spec`.
pub fn build_graph(spec: &GraphSpec) -> Result<Graph, GraphError> {
    let mut graph = match spec {
        GraphSpec::Complete(n) => Graph::complete(*n)?,
        GraphSpec::CompleteBipartite(a, b) => Graph::complete_bipartite(*a, *b)?,
        GraphSpec::CompleteMultipartite(sizes) => Graph::complete_multipartite(sizes)?,
        GraphSpec::Cycle(n) => Graph::cycle(*n)?,
        GraphSpec::Path(n) => Graph::path(*n)?,
        GraphSpec::File(path) => read_edge_list(path)?,
    };
    graph.spec = Some(spec.clone());
    Ok(graph)
}

fn read_edge_list(path: &Path) -> Result<Graph, GraphError> {
    let io_err = |reason: String| GraphError::Io {
        path: path.display().to_string(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| io_err(e.to_string()))?;
    let list = EdgeList::parse(&text).map_err(io_err)?;
    Graph::from_edges(list.vertex_count, &list.edges)
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| GraphError::Parse {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| err("expected `<family>:<params>`"))?;
        let sizes = || -> Result<Vec<usize>, GraphError> {
            args.split(',')
                .map(|t| {
                    let v: usize = t
                        .trim()
                        .parse()
                        .map_err(|_| err(&format!("`{}` is not a size", t.trim())))?;
                    if v == 0 {
                        return Err(err("sizes must be at least 1"));
                    }
                    Ok(v)
                })
                .collect()
        };
        let arity = |v: Vec<usize>, want: usize| -> Result<Vec<usize>, GraphError> {
            if v.len() == want {
                Ok(v)
            } else {
                Err(err(&format!("expected {want} size parameter(s)")))
            }
        };
        match kind.trim() {
            "complete" => Ok(GraphSpec::Complete(arity(sizes()?, 1)?[0])),
            "complete_bipartite" => {
                let v = arity(sizes()?, 2)?;
                Ok(GraphSpec::CompleteBipartite(v[0], v[1]))
            }
            "complete_multipartite" => Ok(GraphSpec::CompleteMultipartite(sizes()?)),
            "cycle" => Ok(GraphSpec::Cycle(arity(sizes()?, 1)?[0])),
            "path" => Ok(GraphSpec::Path(arity(sizes()?, 1)?[0])),
            "file" if !args.is_empty() => Ok(GraphSpec::File(PathBuf::from(args))),
            "file" => Err(err("missing path")),
            other => Err(err(&format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::CompleteBipartite(a, b) => write!(f, "complete_bipartite:{a},{b}"),
            GraphSpec::CompleteMultipartite(s) => write!(f, "complete_multipartite:{}", join(s)),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for GraphSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GraphSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> Graph {
        build_graph(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn complete_bipartite_degrees() {
        let g = build("complete_bipartite:2,3");
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.degrees(), &[3, 3, 2, 2, 2]);
        assert_eq!(g.bipartite_sides(), Some((2, 3)));
    }

    #[test]
    fn k6554_part_degrees() {
        let g = build("complete_multipartite:6,5,5,4");
        assert_eq!(g.vertex_count(), 20);
        let parts = g.parts().unwrap();
        let per_part: Vec<usize> = (0..4)
            .map(|p| g.degree(parts.members(p).start).unwrap())
            .collect();
        assert_eq!(per_part, vec![14, 15, 15, 16]);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn path_one_is_a_single_vertex() {
        let g = build("path:1");
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn degree_examples() {
        let g = build("complete_multipartite:2,2,1");
        assert_eq!(g.degree(4).unwrap(), 4);
        assert_eq!(g.degree(0).unwrap(), 3);
        assert!(build("complete:4").degrees().iter().all(|&d| d == 3));
        assert!(build("cycle:5").degrees().iter().all(|&d| d == 2));
        assert_eq!(
            g.degree(5),
            Err(GraphError::VertexOutOfRange {
                vertex: 5,
                count: 5
            })
        );
    }

    #[test]
    fn unsorted_parts_are_sorted_with_permutation() {
        let g = build("complete_multipartite:1,2,3");
        let parts = g.parts().unwrap();
        assert_eq!(parts.sizes(), &[3, 2, 1]);
        assert_eq!(parts.declared_index(), &[2, 1, 0]);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn edge_list_validation() {
        let k33 = build("complete_bipartite:3,3");
        assert!(k33.validate().is_valid());

        let disjoint = EdgeList::parse("0 1\n2 3\n").unwrap();
        let report = disjoint.validate();
        assert!(report.has(|i| matches!(i, Issue::Disconnected { components: 2 })));
        assert!(report.to_string().contains("disconnected"));

        let looped = EdgeList::parse("# loop\n0 1\n1 1\n").unwrap();
        let report = looped.validate();
        assert!(report.has(|i| matches!(i, Issue::SelfLoop { vertex: 1 })));
        assert!(report.to_string().contains("self-loop"));

        let dup = EdgeList::parse("0 1\n1 0\n").unwrap();
        assert!(dup
            .validate()
            .has(|i| matches!(i, Issue::DuplicateEdge { u: 0, v: 1 })));
    }

    #[test]
    fn edge_list_ids_are_remapped_densely() {
        let list = EdgeList::parse("10 30  # comment\n30 20\n").unwrap();
        assert_eq!(list.vertex_count, 3);
        assert_eq!(list.edges, vec![(0, 2), (2, 1)]);
        assert!(EdgeList::parse("1 2 3\n").is_err());
        assert!(EdgeList::parse("a b\n").is_err());
    }

    #[test]
    fn spec_parse_errors() {
        for bad in [
            "complete",
            "complete:0",
            "complete:x",
            "complete_bipartite:3",
            "hypercube:3",
            "file:",
        ] {
            assert!(
                matches!(bad.parse::<GraphSpec>(), Err(GraphError::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn spec_display_round_trips() {
        for s in [
            "complete:4",
            "complete_bipartite:2,3",
            "complete_multipartite:6,5,5,4",
            "cycle:6",
            "path:5",
            "file:edges.txt",
        ] {
            assert_eq!(s.parse::<GraphSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn degenerate_families_rejected() {
        assert!(Graph::cycle(2).is_err());
        assert!(Graph::complete_multipartite(&[3]).is_err());
        assert!(Graph::complete(0).is_err());
    }

    #[test]
    fn multipartite_pairs_adjacent_iff_different_parts() {
        let g = build("complete_multipartite:3,2,2");
        let parts = g.parts().unwrap();
        let mut deg_sum = 0;
        for u in 0..g.vertex_count() {
            deg_sum += g.degree(u).unwrap();
            for v in 0..g.vertex_count() {
                let adj = g.neighbors(u).contains(&v);
                assert_eq!(adj, parts.part_of(u) != parts.part_of(v));
            }
        }
        let by_parts: usize = parts.sizes().iter().map(|&a| a * (7 - a)).sum();
        assert_eq!(deg_sum, by_parts);
        assert_eq!(deg_sum, 2 * g.edge_count());
    }

    #[test]
    fn build_is_deterministic() {
        let spec: GraphSpec = "complete_multipartite:2,4,3".parse().unwrap();
        assert_eq!(build_graph(&spec).unwrap(), build_graph(&spec).unwrap());
    }

    #[test]
    fn file_spec_reads_edge_list() {
        let dir = std::env::temp_dir().join(format!("chipfire-graph-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p3.txt");
        std::fs::write(&path, "# path\n5 7\n7 9\n").unwrap();
        let g = build_graph(&GraphSpec::File(path.clone())).unwrap();
        assert_eq!(g.degrees(), &[1, 2, 1]);
        std::fs::write(&path, "0 1\n2 3\n").unwrap();
        let err = build_graph(&GraphSpec::File(path)).unwrap_err();
        assert!(err.to_string().contains("disconnected"));
    }
}
