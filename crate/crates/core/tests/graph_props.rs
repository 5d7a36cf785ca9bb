mod common;

use dgbv_core::graph::{
    automorphism_order, canonical_form, canonical_graph, graph_genus, vertex_profile, Edge, EdgeMark, Leaf, LeafMark, MarkedGraph,
    VertexProfile,
};
use dgbv_core::potentials::Enumerator;
use rand::Rng;

const MARKS: [EdgeMark; 4] = [EdgeMark::GG, EdgeMark::IdLoop, EdgeMark::Pi0, EdgeMark::QGp];

/// Half-edge `h`: its vertex, its partner (for edge halves) and its label.
struct HalfEdges {
    vertex: Vec<usize>,
    partner: Vec<Option<usize>>,
    label: Vec<String>,
}

fn half_edges(g: &MarkedGraph) -> HalfEdges {
    let mut h = HalfEdges { vertex: vec![], partner: vec![], label: vec![] };
    for (k, e) in g.edges().iter().enumerate() {
        h.vertex.extend([e.u, e.v]);
        h.partner.extend([Some(2 * k + 1), Some(2 * k)]);
        h.label.extend([e.mark.to_string(), e.mark.to_string()]);
    }
    for l in g.leaves() {
        h.vertex.push(l.vertex);
        h.partner.push(None);
        h.label.push(l.mark.to_string());
    }
    h
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Counts bijections `f` of half-edges with `vertex(f(h)) = π(vertex(h))`,
/// equal labels, and `f(partner(h)) = partner(f(h))`, by backtracking.
fn extend(h: &HalfEdges, pi: &[usize], image: &mut Vec<Option<usize>>, used: &mut Vec<bool>, next: usize) -> u64 {
    if next == image.len() {
        return 1;
    }
    if image[next].is_some() {
        return extend(h, pi, image, used, next + 1);
    }
    let mut count = 0;
    for target in 0..image.len() {
        if used[target] || h.vertex[target] != pi[h.vertex[next]] || h.label[target] != h.label[next] {
            continue;
        }
        let mut assigned = vec![(next, target)];
        match (h.partner[next], h.partner[target]) {
            (None, None) => {}
            (Some(p), Some(tp)) => {
                if used[tp] || image[p].is_some() || h.vertex[tp] != pi[h.vertex[p]] {
                    continue;
                }
                assigned.push((p, tp));
            }
            _ => continue,
        }
        for &(s, t) in &assigned {
            image[s] = Some(t);
            used[t] = true;
        }
        count += extend(h, pi, image, used, next + 1);
        for &(s, t) in &assigned {
            image[s] = None;
            used[t] = false;
        }
    }
    count
}

fn brute_force_automorphisms(g: &MarkedGraph) -> u64 {
    let h = half_edges(g);
    let n = h.vertex.len();
    permutations(g.vertex_count())
        .iter()
        .map(|pi| extend(&h, pi, &mut vec![None; n], &mut vec![false; n], 0))
        .sum()
}

#[test]
fn relabeling_preserves_canonical_form() {
    let mut rng = common::rng(20);
    for _ in 0..200 {
        let g = common::random_graph(&mut rng, 3, &MARKS, 6, 8);
        let h = common::random_relabeling(&mut rng, &g);
        assert_eq!(canonical_form(&g), canonical_form(&h), "{}\n{}", g.to_json(), h.to_json());
        assert_eq!(canonical_graph(&g), canonical_graph(&h));
    }
}

#[test]
fn perturbed_graphs_change_canonical_form() {
    let mut rng = common::rng(21);
    for _ in 0..200 {
        let g = common::random_graph(&mut rng, 3, &MARKS, 6, 8);
        let mut leaves = g.leaves().to_vec();
        leaves.push(Leaf::new(rng.gen_range(0..g.vertex_count()), LeafMark::E(7)));
        let h = MarkedGraph::new(g.vertex_count(), g.edges().to_vec(), leaves).unwrap();
        assert_ne!(canonical_form(&g), canonical_form(&h));
    }
}

#[test]
fn automorphisms_match_brute_force_on_random_graphs() {
    let mut rng = common::rng(22);
    for _ in 0..300 {
        let g = common::random_graph(&mut rng, 2, &MARKS, 6, 7);
        assert_eq!(automorphism_order(&g), brute_force_automorphisms(&g), "{}", g.to_json());
    }
}

#[test]
fn automorphisms_match_brute_force_on_potential_graphs() {
    let mut e = Enumerator::new();
    let mut classes = Vec::new();
    for (g, l) in [(0, 3), (0, 4), (0, 5), (0, 6), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0)] {
        classes.extend(e.sm(g, l));
    }
    for (g, n, l) in [(1, 1, 0), (1, 2, 1), (0, 1, 4), (1, 1, 2), (2, 1, 0), (2, 2, 1), (2, 4, 0)] {
        classes.extend(e.desc(g, n, l));
    }
    let mut checked = 0;
    for c in classes.iter().filter(|c| c.graph.vertex_count() <= 6) {
        assert_eq!(c.automorphisms, brute_force_automorphisms(&c.graph), "{}", c.graph.to_json());
        checked += 1;
    }
    assert!(checked > 30);
}

#[test]
fn brute_force_anchors() {
    let tripod = MarkedGraph::new(1, vec![], vec![Leaf::new(0, LeafMark::E(0)); 3]).unwrap();
    let theta = MarkedGraph::new(2, vec![Edge::new(0, 1, EdgeMark::GG); 3], vec![]).unwrap();
    let dumbbell = MarkedGraph::new(
        2,
        vec![Edge::new(0, 0, EdgeMark::GG), Edge::new(0, 1, EdgeMark::GG), Edge::new(1, 1, EdgeMark::GG)],
        vec![],
    )
    .unwrap();
    assert_eq!(brute_force_automorphisms(&tripod), 6);
    assert_eq!(brute_force_automorphisms(&theta), 12);
    assert_eq!(brute_force_automorphisms(&dumbbell), 8);
}

#[test]
fn genus_zero_sm_graphs_are_trivalent_trees() {
    let mut e = Enumerator::new();
    for l in 3..=9 {
        for c in e.sm(0, l) {
            assert_eq!(graph_genus(&c.graph).unwrap(), 0);
            for v in 0..c.graph.vertex_count() {
                assert_eq!(c.graph.degree(v), 3);
                assert_eq!(vertex_profile(&c.graph, v), VertexProfile { g_prime: 0, m_prime: 3 });
            }
            assert_eq!(c.graph.edges().len() + 1, c.graph.vertex_count());
        }
    }
}

#[test]
fn profile_counts_germs() {
    let mut rng = common::rng(23);
    for _ in 0..100 {
        let g = common::random_graph(&mut rng, 2, &MARKS, 5, 6);
        for v in 0..g.vertex_count() {
            let p = vertex_profile(&g, v);
            assert_eq!(2 * p.g_prime + p.m_prime, g.degree(v));
        }
    }
}
