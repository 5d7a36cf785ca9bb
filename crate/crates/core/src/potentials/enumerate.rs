//! Generation of the graph classes contributing to the potentials.

use std::collections::HashMap;

use num_traits::One;
use rayon::prelude::*;

use crate::graded::{int, Rational};
use crate::graph::{canonical_form_with_automorphisms, CanonicalForm, Edge, EdgeMark, Leaf, LeafMark, MarkedGraph};

/// An isomorphism class of marked graphs with its weight in a potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraphClass {
    pub graph: MarkedGraph,
    pub weight: Rational,
    pub automorphisms: u64,
}

/// `2g - 2 + L > 0`: the graphs of `F_g^sm` with `L` leaves exist.
pub fn is_stable(genus: usize, leaves: usize) -> bool {
    2 * genus + leaves > 2
}

/// Memoized generator of `F_g^sm` and `F_{g,n}` graph classes, keyed by the
/// exact number of empty leaves.
#[derive(Debug, Default)]
pub struct Enumerator {
    sm: HashMap<(usize, usize), Vec<MarkedGraph>>,
    desc: HashMap<(usize, u32, usize), Vec<MarkedGraph>>,
}

impl Enumerator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Classes of connected genus-`genus` graphs with `leaves` empty leaves,
    /// all vertices `(0,3)` and all edges `[G_-G_+]`, weighted by `1/|Aut|`.
    pub fn sm(&mut self, genus: usize, leaves: usize) -> Vec<WeightedGraphClass> {
        weigh(self.sm_graphs(genus, leaves), |_| 0)
    }

    /// Classes of descendant graphs of total genus `genus` with one arrow leaf
    /// `E(n)` and `leaves` empty leaves, weighted by `(1/12)^{g'}/|Aut|`.
    pub fn desc(&mut self, genus: usize, n: u32, leaves: usize) -> Vec<WeightedGraphClass> {
        weigh(self.desc_graphs(genus, n, leaves), |g| g.edges().iter().filter(|e| e.mark == EdgeMark::IdLoop).count())
    }

    fn sm_graphs(&mut self, genus: usize, leaves: usize) -> Vec<MarkedGraph> {
        if let Some(found) = self.sm.get(&(genus, leaves)) {
            return found.clone();
        }
        let graphs = if !is_stable(genus, leaves) {
            Vec::new()
        } else if genus == 0 && leaves == 3 {
            vec![MarkedGraph::new(1, vec![], vec![Leaf::new(0, LeafMark::E(0)); 3]).expect("valid")]
        } else if genus == 1 && leaves == 1 {
            vec![MarkedGraph::new(1, vec![Edge::new(0, 0, EdgeMark::GG)], vec![Leaf::new(0, LeafMark::E(0))]).expect("valid")]
        } else if leaves == 0 {
            let vertices = 2 * genus - 2;
            let stubs: Vec<usize> = (0..vertices).flat_map(|v| [v; 3]).collect();
            matchings_to_graphs(vertices, &stubs, &[], &[])
        } else {
            let previous = self.sm_graphs(genus, leaves - 1);
            previous.iter().flat_map(insertions).collect()
        };
        let graphs = dedupe(graphs);
        self.sm.insert((genus, leaves), graphs.clone());
        graphs
    }

    fn desc_graphs(&mut self, genus: usize, n: u32, leaves: usize) -> Vec<MarkedGraph> {
        if n == 0 {
            return Vec::new();
        }
        if let Some(found) = self.desc.get(&(genus, n, leaves)) {
            return found.clone();
        }
        let graphs = if leaves == 0 {
            desc_base(genus, n)
        } else {
            let mut out: Vec<MarkedGraph> = self.desc_graphs(genus, n, leaves - 1).iter().flat_map(insertions).collect();
            if n >= 2 {
                out.extend(self.desc_graphs(genus, n - 1, leaves - 1).iter().map(|g| grow_special_vertex(g, n)));
            } else {
                for g in self.sm_graphs(genus, leaves) {
                    for l in 0..g.leaves().len() {
                        let v = g.leaves()[l].vertex;
                        out.push(g.with_leaf_mark(l, LeafMark::E(1)).with_leaf(Leaf::new(v, LeafMark::E(0))));
                    }
                }
            }
            out
        };
        let graphs = dedupe(graphs);
        self.desc.insert((genus, n, leaves), graphs.clone());
        graphs
    }
}

fn weigh(graphs: Vec<MarkedGraph>, special_genus: impl Fn(&MarkedGraph) -> usize + Sync) -> Vec<WeightedGraphClass> {
    graphs
        .into_par_iter()
        .map(|graph| {
            let (_, automorphisms) = canonical_form_with_automorphisms(&graph);
            let twelfths = Rational::from_integer(12.into()).pow(special_genus(&graph) as i32);
            let weight = Rational::one() / (twelfths * int(automorphisms as i64));
            WeightedGraphClass { graph, weight, automorphisms }
        })
        .collect()
}

/// One representative per isomorphism class, sorted by canonical form.
fn dedupe(graphs: Vec<MarkedGraph>) -> Vec<MarkedGraph> {
    let keyed: Vec<(CanonicalForm, MarkedGraph)> =
        graphs.into_par_iter().map(|g| (canonical_form_with_automorphisms(&g).0, g)).collect();
    let mut unique: HashMap<CanonicalForm, MarkedGraph> = HashMap::new();
    for (key, g) in keyed {
        unique.entry(key).or_insert(g);
    }
    let mut out: Vec<(CanonicalForm, MarkedGraph)> = unique.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, g)| g).collect()
}

/// Every way of adding one trivalent vertex with an empty leaf: subdividing
/// a `[G_-G_+]` edge, or replacing an empty leaf by a vertex carrying two.
fn insertions(g: &MarkedGraph) -> Vec<MarkedGraph> {
    let w = g.vertex_count();
    let mut out = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        if e.mark != EdgeMark::GG {
            continue;
        }
        let mut edges = g.edges().to_vec();
        edges[k] = Edge::new(e.u, w, EdgeMark::GG);
        edges.push(Edge::new(w, e.v, EdgeMark::GG));
        let mut leaves = g.leaves().to_vec();
        leaves.push(Leaf::new(w, LeafMark::E(0)));
        out.push(MarkedGraph::new(w + 1, edges, leaves).expect("valid"));
    }
    for (l, leaf) in g.leaves().iter().enumerate() {
        if leaf.mark != LeafMark::E(0) {
            continue;
        }
        let mut edges = g.edges().to_vec();
        edges.push(Edge::new(leaf.vertex, w, EdgeMark::GG));
        let mut leaves = g.leaves().to_vec();
        leaves[l] = Leaf::new(w, LeafMark::E(0));
        leaves.push(Leaf::new(w, LeafMark::E(0)));
        out.push(MarkedGraph::new(w + 1, edges, leaves).expect("valid"));
    }
    out
}

/// Adds an empty leaf at the special vertex, raising the arrow level to `n`.
fn grow_special_vertex(g: &MarkedGraph, n: u32) -> MarkedGraph {
    let l = g.leaves().iter().position(|l| l.mark.is_arrow()).expect("descendant graphs carry an arrow");
    let v = g.leaves()[l].vertex;
    g.with_leaf_mark(l, LeafMark::E(n)).with_leaf(Leaf::new(v, LeafMark::E(0)))
}

/// Descendant graphs without empty leaves, by perfect matchings of the free
/// germs of the special vertex and the trivalent vertices.
fn desc_base(genus: usize, n: u32) -> Vec<MarkedGraph> {
    let mut out = Vec::new();
    for g_special in 0..=genus {
        // m' = n + 3 - 3g' germs besides the loops, one of them the arrow.
        let Some(m_special) = (n as usize + 3).checked_sub(3 * g_special) else { continue };
        if m_special == 0 {
            continue;
        }
        let cycle_genus = genus - g_special;
        let Some(trivalent) = (2 * cycle_genus + 1).checked_sub(m_special) else { continue };
        let vertices = trivalent + 1;
        let stubs: Vec<usize> = std::iter::repeat_n(0, m_special - 1).chain((1..vertices).flat_map(|v| [v; 3])).collect();
        let loops = vec![Edge::new(0, 0, EdgeMark::IdLoop); g_special];
        out.extend(matchings_to_graphs(vertices, &stubs, &loops, &[Leaf::new(0, LeafMark::E(n))]));
    }
    out
}

/// All connected graphs obtained by pairing `stubs` (one entry per germ,
/// naming its vertex) into `[G_-G_+]` edges, plus the given fixed edges and
/// leaves. Isomorphic duplicates are left for [`dedupe`].
fn matchings_to_graphs(vertices: usize, stubs: &[usize], fixed_edges: &[Edge], leaves: &[Leaf]) -> Vec<MarkedGraph> {
    if stubs.len() % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut used = vec![false; stubs.len()];
    let mut pairs = Vec::with_capacity(stubs.len() / 2);
    fn recurse(
        stubs: &[usize],
        used: &mut [bool],
        pairs: &mut Vec<(usize, usize)>,
        emit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        let Some(a) = used.iter().position(|u| !u) else {
            emit(pairs);
            return;
        };
        used[a] = true;
        for b in a + 1..stubs.len() {
            if used[b] {
                continue;
            }
            used[b] = true;
            pairs.push((stubs[a], stubs[b]));
            recurse(stubs, used, pairs, emit);
            pairs.pop();
            used[b] = false;
        }
        used[a] = false;
    }
    recurse(stubs, &mut used, &mut pairs, &mut |pairs| {
        let edges = fixed_edges.iter().copied().chain(pairs.iter().map(|&(u, v)| Edge::new(u, v, EdgeMark::GG))).collect();
        let g = MarkedGraph::new(vertices, edges, leaves.to_vec()).expect("valid");
        if g.is_connected() {
            out.push(g);
        }
    });
    out
}
