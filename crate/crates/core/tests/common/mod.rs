//! Random algebras, graphs and plans shared by the property suites.
#![allow(dead_code)]

use dgbv_core::algebra::{CHAlgebra, Hodge};
use dgbv_core::contraction::EvalPlan;
use dgbv_core::graded::{int, rat, GradedVector, Parity, RatMatrix, Rational};
use dgbv_core::graph::{Edge, EdgeMark, Leaf, LeafMark, MarkedGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut TestRng) -> Rational {
    let num = rng.gen_range(-3..=3);
    let den = rng.gen_range(1..=2);
    rat(num, den)
}

fn nonzero_rational(rng: &mut TestRng) -> Rational {
    loop {
        let r = small_rational(rng);
        if r != int(0) {
            return r;
        }
    }
}

/// `Λ(θ_1, θ_2) ⊗ Q[x]/(x^m)` with basis `θ^S x^a` (S ⊆ {1,2}, a < m).
/// Graded-commutative and associative by construction; everything else is
/// random: the integral (an even functional pairing the top element), the
/// odd operators, and the declared blocks, which only fix the shape of `G_+`.
/// Axioms generally fail; evaluation does not need them.
pub fn random_grassmann_algebra(rng: &mut TestRng, m: usize) -> CHAlgebra {
    let subsets: [u8; 4] = [0b00, 0b01, 0b10, 0b11];
    let basis: Vec<(u8, usize)> = (0..m).flat_map(|a| subsets.iter().map(move |&s| (s, a))).collect();
    let dim = basis.len();
    let index = |s: u8, a: usize| basis.iter().position(|&b| b == (s, a)).unwrap();
    let parity: Vec<Parity> = basis.iter().map(|&(s, _)| Parity::from_bit((s.count_ones() % 2) as u8).unwrap()).collect();

    let mut product = vec![GradedVector::zero(); dim * dim];
    for (i, &(s, a)) in basis.iter().enumerate() {
        for (j, &(t, b)) in basis.iter().enumerate() {
            if s & t != 0 || a + b >= m {
                continue;
            }
            // θ^S θ^T = sign · θ^{S∪T}: count generators in S after each in T.
            let mut swaps = 0;
            for bit in 0..2 {
                if t & (1 << bit) != 0 {
                    swaps += (s >> (bit + 1)).count_ones();
                }
            }
            let sign = if swaps % 2 == 0 { int(1) } else { int(-1) };
            product[i * dim + j].add_term(index(s | t, a + b), sign);
        }
    }

    let top = index(0b11, m - 1);
    let mut integral = vec![int(0); dim];
    integral[top] = nonzero_rational(rng);
    for (i, p) in parity.iter().enumerate() {
        if i != top && !p.is_odd() && rng.gen_bool(0.8) {
            integral[i] = small_rational(rng);
        }
    }

    let random_odd = |rng: &mut TestRng| {
        let mut mat = RatMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                if parity[i] != parity[j] && rng.gen_bool(0.5) {
                    mat[(i, j)] = small_rational(rng);
                }
            }
        }
        mat
    };
    let q = random_odd(rng);
    let gminus = random_odd(rng);

    let mut even: Vec<usize> = (0..dim).filter(|&i| !parity[i].is_odd()).collect();
    let mut odd: Vec<usize> = (0..dim).filter(|&i| parity[i].is_odd()).collect();
    even.shuffle(rng);
    odd.shuffle(rng);
    let mut blocks = Vec::new();
    let n_blocks = rng.gen_range(0..=even.len().min(odd.len()) / 2);
    for _ in 0..n_blocks {
        let (e, qe, gme, qgme) = if rng.gen_bool(0.5) {
            (even.pop().unwrap(), odd.pop().unwrap(), odd.pop().unwrap(), even.pop().unwrap())
        } else {
            (odd.pop().unwrap(), even.pop().unwrap(), even.pop().unwrap(), odd.pop().unwrap())
        };
        blocks.push([e, qe, gme, qgme]);
    }
    let mut h0: Vec<usize> = even.into_iter().chain(odd).collect();
    h0.sort();
    CHAlgebra::from_parts(parity, product, index(0, 0), q, gminus, integral, Hodge { h0, blocks }).unwrap()
}

/// Random connected graph: a random tree plus extra edges and loops, with
/// random marks and leaves. `max_pairs` bounds the number of edges.
pub fn random_graph(rng: &mut TestRng, dim: usize, marks: &[EdgeMark], max_vertices: usize, max_pairs: usize) -> MarkedGraph {
    let n = rng.gen_range(1..=max_vertices);
    let mut edges = Vec::new();
    let plain: Vec<EdgeMark> = marks.iter().copied().filter(|&m| m != EdgeMark::IdLoop).collect();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push(Edge::new(u, v, *plain.choose(rng).unwrap()));
    }
    let extra = rng.gen_range(0..=max_pairs.saturating_sub(edges.len()));
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let mark = *marks.choose(rng).unwrap();
        let v = if mark == EdgeMark::IdLoop { u } else { v };
        edges.push(Edge::new(u, v, mark));
    }
    edges.shuffle(rng);
    let leaf_marks = [LeafMark::E(0), LeafMark::E(1), LeafMark::E(2), LeafMark::Unit, LeafMark::Basis(rng.gen_range(0..dim))];
    let mut leaves = Vec::new();
    for v in 0..n {
        let count = rng.gen_range(0..=2);
        for _ in 0..count {
            leaves.push(Leaf::new(v, *leaf_marks.choose(rng).unwrap()));
        }
    }
    if leaves.is_empty() {
        leaves.push(Leaf::new(0, LeafMark::E(0)));
    }
    leaves.shuffle(rng);
    MarkedGraph::new(n, edges, leaves).unwrap()
}

/// Random plan: random spanning tree, vertex order and germ orders.
pub fn random_plan(rng: &mut TestRng, g: &MarkedGraph) -> EvalPlan {
    let mut priority: Vec<usize> = (0..g.edges().len()).collect();
    priority.shuffle(rng);
    let mut vertex_order: Vec<usize> = (0..g.vertex_count()).collect();
    vertex_order.shuffle(rng);
    let germ_order = (0..g.vertex_count())
        .map(|v| {
            let mut germs = g.germs(v);
            germs.shuffle(rng);
            germs
        })
        .collect();
    EvalPlan::with_tree_priority(g, &priority, vertex_order, Some(germ_order)).unwrap()
}

/// A random relabeling of vertices, edge order and leaf order.
pub fn random_relabeling(rng: &mut TestRng, g: &MarkedGraph) -> MarkedGraph {
    let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
    perm.shuffle(rng);
    let mut edge_order: Vec<usize> = (0..g.edges().len()).collect();
    edge_order.shuffle(rng);
    let mut leaf_order: Vec<usize> = (0..g.leaves().len()).collect();
    leaf_order.shuffle(rng);
    g.relabeled(&perm).reordered(&edge_order, &leaf_order)
}
