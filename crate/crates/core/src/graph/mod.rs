//! Marked graphs: vertices carry the integral form, edges carry operator
//! bivectors, leaves carry vectors.

mod canon;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use canon::{automorphism_order, canonical_form, canonical_form_with_automorphisms, canonical_graph, CanonicalForm};

use crate::error::{Error, Result};

/// Operator attached to an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeMark {
    /// `[G_-G_+]`.
    GG,
    /// `[Id]` on a loop, contributing to the vertex genus.
    IdLoop,
    /// `[Π_0]`.
    Pi0,
    /// `[Id]` on an ordinary edge.
    Id,
    /// `[QG_+]`.
    QGp,
    /// `[G_+Q]`.
    GpQ,
    /// `[G_+]`.
    Gp,
    /// `[G_-]`.
    Gm,
}

impl EdgeMark {
    pub const ALL: [EdgeMark; 8] =
        [EdgeMark::GG, EdgeMark::IdLoop, EdgeMark::Pi0, EdgeMark::Id, EdgeMark::QGp, EdgeMark::GpQ, EdgeMark::Gp, EdgeMark::Gm];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeMark::GG => "GG",
            EdgeMark::IdLoop => "IDLOOP",
            EdgeMark::Pi0 => "PI0",
            EdgeMark::Id => "ID",
            EdgeMark::QGp => "QGP",
            EdgeMark::GpQ => "GPQ",
            EdgeMark::Gp => "GP",
            EdgeMark::Gm => "GM",
        }
    }

    pub(crate) fn code(self) -> u32 {
        self as u32
    }
}

impl FromStr for EdgeMark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EdgeMark::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown edge mark {s:?}")))
    }
}

impl fmt::Display for EdgeMark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Vector attached to a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LeafMark {
    /// `E_n = Σ_i e_i T_{n,i}` over the `H_0` basis; `E(0)` is the empty leaf.
    E(u32),
    /// The unit `e_1`.
    Unit,
    /// The fixed basis vector `e_i` (0-based; written `B{i+1}`).
    Basis(usize),
}

impl LeafMark {
    pub(crate) fn code(self) -> (u32, u32) {
        match self {
            LeafMark::E(n) => (0, n),
            LeafMark::Unit => (1, 0),
            LeafMark::Basis(i) => (2, i as u32),
        }
    }

    pub fn is_arrow(self) -> bool {
        matches!(self, LeafMark::E(n) if n > 0)
    }
}

impl FromStr for LeafMark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown leaf mark {s:?}"));
        if s == "UNIT" {
            Ok(LeafMark::Unit)
        } else if let Some(n) = s.strip_prefix('E') {
            n.parse().map(LeafMark::E).map_err(|_| bad())
        } else if let Some(i) = s.strip_prefix('B') {
            match i.parse::<usize>() {
                Ok(i) if i > 0 => Ok(LeafMark::Basis(i - 1)),
                _ => Err(bad()),
            }
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for LeafMark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeafMark::E(n) => write!(f, "E{n}"),
            LeafMark::Unit => write!(f, "UNIT"),
            LeafMark::Basis(i) => write!(f, "B{}", i + 1),
        }
    }
}

/// An edge between vertices `u` and `v` (0-based). The bivector's first leg
/// sits at `min(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub mark: EdgeMark,
}

impl Edge {
    pub fn new(u: usize, v: usize, mark: EdgeMark) -> Self {
        Edge { u, v, mark }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leaf {
    pub vertex: usize,
    pub mark: LeafMark,
}

impl Leaf {
    pub fn new(vertex: usize, mark: LeafMark) -> Self {
        Leaf { vertex, mark }
    }
}

/// Vertices `0..vertices`, marked edges and marked leaves.
///
/// Half-edges are implicit: edge `k` owns half-edges `2k` (at `min(u, v)`)
/// and `2k + 1` (at `max(u, v)`); leaf `l` owns half-edge `2·|edges| + l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedGraph {
    vertices: usize,
    edges: Vec<Edge>,
    leaves: Vec<Leaf>,
}

/// `(g', m')`: half the number of `IDLOOP` germs, and all other germs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexProfile {
    pub g_prime: usize,
    pub m_prime: usize,
}

/// A germ (half-edge) at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Germ {
    /// `(edge index, leg)` with leg 0 the first leg of the bivector.
    Edge(usize, u8),
    Leaf(usize),
}

impl MarkedGraph {
    pub fn new(vertices: usize, edges: Vec<Edge>, leaves: Vec<Leaf>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::Malformed("a graph needs at least one vertex".into()));
        }
        for e in &edges {
            if e.u >= vertices || e.v >= vertices {
                return Err(Error::Malformed(format!("edge endpoint out of range 1..={vertices}")));
            }
            if e.mark == EdgeMark::IdLoop && !e.is_loop() {
                return Err(Error::Malformed("IDLOOP edges must be loops".into()));
            }
        }
        if let Some(l) = leaves.iter().find(|l| l.vertex >= vertices) {
            return Err(Error::Malformed(format!("leaf at vertex {} out of range", l.vertex + 1)));
        }
        let edges = edges.into_iter().map(|e| Edge { u: e.u.min(e.v), v: e.u.max(e.v), mark: e.mark }).collect();
        Ok(MarkedGraph { vertices, edges, leaves })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len() + self.leaves.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.germs(v).len()
    }

    /// Germs at `v` in the default order: edge legs by edge index, then leaves.
    pub fn germs(&self, v: usize) -> Vec<Germ> {
        let mut out = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if e.u == v {
                out.push(Germ::Edge(k, 0));
            }
            if e.v == v {
                out.push(Germ::Edge(k, 1));
            }
        }
        for (l, leaf) in self.leaves.iter().enumerate() {
            if leaf.vertex == v {
                out.push(Germ::Leaf(l));
            }
        }
        out
    }

    pub fn germ_vertex(&self, g: Germ) -> usize {
        match g {
            Germ::Edge(k, 0) => self.edges[k].u,
            Germ::Edge(k, _) => self.edges[k].v,
            Germ::Leaf(l) => self.leaves[l].vertex,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let n = p[x];
                p[x] = r;
                x = n;
            }
            r
        }
        let mut count = self.vertices;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> MarkedGraph {
        let edges = self.edges.iter().map(|e| Edge::new(perm[e.u], perm[e.v], e.mark)).collect();
        let leaves = self.leaves.iter().map(|l| Leaf::new(perm[l.vertex], l.mark)).collect();
        MarkedGraph::new(self.vertices, edges, leaves).expect("relabeling preserves validity")
    }

    /// Same graph with edges and leaves listed in the given orders.
    pub fn reordered(&self, edge_order: &[usize], leaf_order: &[usize]) -> MarkedGraph {
        MarkedGraph {
            vertices: self.vertices,
            edges: edge_order.iter().map(|&k| self.edges[k]).collect(),
            leaves: leaf_order.iter().map(|&l| self.leaves[l]).collect(),
        }
    }

    pub fn with_leaf(&self, leaf: Leaf) -> MarkedGraph {
        let mut g = self.clone();
        g.leaves.push(leaf);
        g
    }

    pub fn with_leaf_mark(&self, l: usize, mark: LeafMark) -> MarkedGraph {
        let mut g = self.clone();
        g.leaves[l].mark = mark;
        g
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices,
            edges: self.edges.iter().map(|e| (e.u + 1, e.v + 1, e.mark.to_string())).collect(),
            leaves: self.leaves.iter().map(|l| (l.vertex + 1, l.mark.to_string())).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }
}

/// On-disk graph: `{"vertices": k, "edges": [[v, w, "GG"], ...],
/// "leaves": [[v, "E0"], ...]}` with 1-based vertex ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize, String)>,
    #[serde(default)]
    pub leaves: Vec<(usize, String)>,
}

impl GraphFile {
    pub fn build(&self) -> Result<MarkedGraph> {
        let v = |i: usize| -> Result<usize> {
            if i == 0 || i > self.vertices {
                Err(Error::Malformed(format!("vertex {i} out of range 1..={}", self.vertices)))
            } else {
                Ok(i - 1)
            }
        };
        let edges =
            self.edges.iter().map(|(a, b, m)| Ok(Edge::new(v(*a)?, v(*b)?, m.parse()?))).collect::<Result<Vec<_>>>()?;
        let leaves = self.leaves.iter().map(|(a, m)| Ok(Leaf::new(v(*a)?, m.parse()?))).collect::<Result<Vec<_>>>()?;
        MarkedGraph::new(self.vertices, edges, leaves)
    }
}

pub fn load_graph(text: &str) -> Result<MarkedGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.build()
}

/// First Betti number over non-`IDLOOP` edges plus the `IDLOOP` count.
pub fn graph_genus(g: &MarkedGraph) -> Result<usize> {
    g.require_connected()?;
    let id_loops = g.edges.iter().filter(|e| e.mark == EdgeMark::IdLoop).count();
    let others = g.edges.len() - id_loops;
    Ok(others + 1 - g.vertices + id_loops)
}

/// First Betti number over all edges.
pub fn betti_number(g: &MarkedGraph) -> Result<usize> {
    g.require_connected()?;
    Ok(g.edges.len() + 1 - g.vertices)
}

pub fn vertex_profile(g: &MarkedGraph, v: usize) -> VertexProfile {
    let id_loops = g.edges.iter().filter(|e| e.mark == EdgeMark::IdLoop && e.u == v).count();
    VertexProfile { g_prime: id_loops, m_prime: g.degree(v) - 2 * id_loops }
}

/// Result of [`is_valid_descendant_graph`]: `valid` plus the reasons it is not.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Validity {
    pub valid: bool,
    pub problems: Vec<String>,
    /// The special vertex, when one could be identified.
    pub special: Option<usize>,
}

/// Checks the defining conditions of a descendant graph of total genus
/// `genus` whose special leaf is `E(n)`, `n ≥ 1`.
pub fn is_valid_descendant_graph(g: &MarkedGraph, genus: usize, n: u32) -> Validity {
    let mut problems = Vec::new();
    if n == 0 {
        problems.push("descendant level must be at least 1".to_string());
    }
    match graph_genus(g) {
        Ok(h) if h != genus => problems.push(format!("graph genus is {h}, expected {genus}")),
        Err(e) => problems.push(e.to_string()),
        _ => {}
    }
    if let Some(e) = g.edges.iter().find(|e| !matches!(e.mark, EdgeMark::GG | EdgeMark::IdLoop)) {
        problems.push(format!("edge mark {} is not allowed", e.mark));
    }
    let arrows: Vec<&Leaf> = g.leaves.iter().filter(|l| l.mark != LeafMark::E(0)).collect();
    let mut special = None;
    match arrows.as_slice() {
        [leaf] => match leaf.mark {
            LeafMark::E(k) => {
                let v0 = leaf.vertex;
                special = Some(v0);
                let p = vertex_profile(g, v0);
                let expected = 3 * p.g_prime as i64 - 3 + p.m_prime as i64;
                if expected != k as i64 {
                    problems.push(format!(
                        "arrow level {k} differs from 3g'-3+m' = {expected} at the ({}, {})-vertex",
                        p.g_prime, p.m_prime
                    ));
                }
                if k != n {
                    problems.push(format!("arrow level {k}, expected {n}"));
                }
                for v in (0..g.vertices).filter(|&v| v != v0) {
                    let p = vertex_profile(g, v);
                    if (p.g_prime, p.m_prime) != (0, 3) {
                        problems.push(format!("vertex {} is a ({}, {})-vertex", v + 1, p.g_prime, p.m_prime));
                    }
                }
            }
            other => problems.push(format!("leaf mark {other} is not allowed")),
        },
        [] => problems.push("no leaf with arrow".to_string()),
        _ => problems.push(format!("{} leaves with arrows", arrows.len())),
    }
    Validity { valid: problems.is_empty(), problems, special }
}

/// Checks that `g` contributes to `F_genus^sm`: all vertices `(0,3)`, all
/// edges `GG`, all leaves empty.
pub fn is_valid_sm_graph(g: &MarkedGraph, genus: usize) -> bool {
    graph_genus(g).ok() == Some(genus)
        && g.edges.iter().all(|e| e.mark == EdgeMark::GG)
        && g.leaves.iter().all(|l| l.mark == LeafMark::E(0))
        && (0..g.vertices).all(|v| vertex_profile(g, v) == VertexProfile { g_prime: 0, m_prime: 3 })
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn genus_examples() {
        assert_eq!(graph_genus(&tripod()).unwrap(), 0);
        assert_eq!(graph_genus(&genus_one_vertex(1)).unwrap(), 1);
        assert_eq!(graph_genus(&theta()).unwrap(), 2);
        let two = MarkedGraph::new(2, vec![], vec![]).unwrap();
        assert!(matches!(graph_genus(&two), Err(Error::Disconnected)));
    }

    #[test]
    fn profiles() {
        assert_eq!(vertex_profile(&genus_one_vertex(1), 0), VertexProfile { g_prime: 1, m_prime: 1 });
        assert_eq!(vertex_profile(&tripod(), 0), VertexProfile { g_prime: 0, m_prime: 3 });
        let g = MarkedGraph::new(
            3,
            vec![
                Edge::new(0, 0, EdgeMark::IdLoop),
                Edge::new(0, 0, EdgeMark::IdLoop),
                Edge::new(0, 1, EdgeMark::GG),
                Edge::new(0, 2, EdgeMark::GG),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(vertex_profile(&g, 0), VertexProfile { g_prime: 2, m_prime: 2 });
    }

    #[test]
    fn descendant_validity() {
        assert!(is_valid_descendant_graph(&genus_one_vertex(1), 1, 1).valid);
        let mut leaves = vec![Leaf::new(0, LeafMark::E(1))];
        leaves.extend([Leaf::new(0, LeafMark::E(0)); 3]);
        let g = MarkedGraph::new(1, vec![], leaves.clone()).unwrap();
        assert!(is_valid_descendant_graph(&g, 0, 1).valid);
        leaves[0].mark = LeafMark::E(2);
        let bad = MarkedGraph::new(1, vec![], leaves).unwrap();
        let v = is_valid_descendant_graph(&bad, 0, 2);
        assert!(!v.valid);
        assert_eq!(v.problems.len(), 1, "{:?}", v.problems);
    }

    #[test]
    fn file_roundtrip_and_errors() {
        let g = load_graph(r#"{"vertices":2,"edges":[[1,2,"GG"],[2,2,"IDLOOP"]],"leaves":[[1,"E0"],[2,"B2"],[1,"UNIT"]]}"#).unwrap();
        assert_eq!(load_graph(&g.to_json()).unwrap(), g);
        assert!(load_graph(r#"{"vertices":2,"edges":[[1,2,"IDLOOP"]]}"#).is_err());
        assert!(load_graph(r#"{"vertices":1,"edges":[[1,2,"GG"]]}"#).is_err());
        assert!(load_graph(r#"{"vertices":1,"leaves":[[1,"X"]]}"#).is_err());
        assert!(load_graph(r#"{"vertices":1,"leaves":[[1,"B0"]]}"#).is_err());
    }
}
