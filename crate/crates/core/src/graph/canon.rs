//! Canonical labeling by individualization-refinement over vertex orders,
//! and automorphism counting by orbit–stabilizer.

use super::{Edge, EdgeMark, Leaf, MarkedGraph};

/// Isomorphism invariant of a marked graph: two graphs have equal forms iff
/// some vertex bijection preserves leaf marks, loop marks and the multiset of
/// edge marks between every pair of vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|t| t.to_be_bytes()).collect()
    }
}

struct Invariants {
    leaf_codes: Vec<Vec<u32>>,
    loop_codes: Vec<Vec<u32>>,
    adj: Vec<Vec<Vec<u32>>>,
}

impl Invariants {
    fn new(g: &MarkedGraph) -> Self {
        let n = g.vertex_count();
        let mut leaf_codes = vec![Vec::new(); n];
        let mut leaf_pairs: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for l in g.leaves() {
            leaf_pairs[l.vertex].push(l.mark.code());
        }
        for (v, ps) in leaf_pairs.iter_mut().enumerate() {
            ps.sort();
            leaf_codes[v] = ps.iter().flat_map(|&(a, b)| [a, b]).collect();
        }
        let mut loop_codes = vec![Vec::new(); n];
        let mut adj = vec![vec![Vec::new(); n]; n];
        for e in g.edges() {
            if e.is_loop() {
                loop_codes[e.u].push(e.mark.code());
            } else {
                adj[e.u][e.v].push(e.mark.code());
                adj[e.v][e.u].push(e.mark.code());
            }
        }
        for v in 0..n {
            loop_codes[v].sort();
            for w in 0..n {
                adj[v][w].sort();
            }
        }
        Invariants { leaf_codes, loop_codes, adj }
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let n = order.len();
        let mut t = vec![n as u32];
        for &v in order {
            t.push(self.leaf_codes[v].len() as u32);
            t.extend(&self.leaf_codes[v]);
            t.push(self.loop_codes[v].len() as u32);
            t.extend(&self.loop_codes[v]);
        }
        for p in 0..n {
            for q in p + 1..n {
                let marks = &self.adj[order[p]][order[q]];
                if !marks.is_empty() {
                    t.extend([p as u32, q as u32, marks.len() as u32]);
                    t.extend(marks);
                }
            }
        }
        t
    }

    fn initial_partition(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let key = |v: usize| {
            let degree: usize = self.adj[v].iter().map(Vec::len).sum();
            (self.leaf_codes[v].clone(), self.loop_codes[v].clone(), degree)
        };
        let mut vs: Vec<usize> = (0..n).collect();
        vs.sort_by_key(|&v| key(v));
        split_runs(vs, key)
    }

    /// Equitable refinement: split cells by the multiset of (neighbour cell,
    /// edge marks) until stable.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        loop {
            let mut cell_of = vec![0usize; n];
            for (c, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = c;
                }
            }
            let signature = |v: usize| {
                let mut s: Vec<(usize, &Vec<u32>)> =
                    (0..n).filter(|&w| !self.adj[v][w].is_empty()).map(|w| (cell_of[w], &self.adj[v][w])).collect();
                s.sort();
                s
            };
            let before = cells.len();
            let mut next = Vec::with_capacity(before);
            for mut cell in cells {
                if cell.len() == 1 {
                    next.push(cell);
                    continue;
                }
                cell.sort_by_key(|&v| signature(v));
                next.extend(split_runs(cell, signature));
            }
            cells = next;
            if cells.len() == before {
                return cells;
            }
        }
    }
}

fn split_runs<K: PartialEq>(sorted: Vec<usize>, key: impl Fn(usize) -> K) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<K> = None;
    for v in sorted {
        let k = key(v);
        if last.as_ref() == Some(&k) {
            out.last_mut().expect("run started").push(v);
        } else {
            out.push(vec![v]);
            last = Some(k);
        }
    }
    out
}

struct Search<'a> {
    inv: &'a Invariants,
    best: Option<(Vec<u32>, Vec<usize>)>,
    ties: u64,
}

impl Search<'_> {
    fn run(&mut self, cells: Vec<Vec<usize>>) {
        let cells = self.inv.refine(cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            let tokens = self.inv.encode(&order);
            match &self.best {
                Some((b, _)) if *b < tokens => {}
                Some((b, _)) if *b == tokens => self.ties += 1,
                _ => {
                    self.best = Some((tokens, order));
                    self.ties = 1;
                }
            }
            return;
        };
        for &v in &cells[target] {
            let mut next = cells[..target].to_vec();
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            next.extend(cells[target + 1..].iter().cloned());
            self.run(next);
        }
    }
}

struct Canon {
    tokens: Vec<u32>,
    order: Vec<usize>,
    vertex_automorphisms: u64,
}

fn canonize(g: &MarkedGraph) -> Canon {
    let inv = Invariants::new(g);
    let mut search = Search { inv: &inv, best: None, ties: 0 };
    search.run(inv.initial_partition());
    let (tokens, order) = search.best.expect("at least one vertex");
    Canon { tokens, order, vertex_automorphisms: search.ties }
}

pub fn canonical_form(g: &MarkedGraph) -> CanonicalForm {
    CanonicalForm(canonize(g).tokens)
}

/// The graph relabeled into canonical vertex order, with edges and leaves
/// sorted; isomorphic graphs give identical results.
pub fn canonical_graph(g: &MarkedGraph) -> MarkedGraph {
    let c = canonize(g);
    let mut pos = vec![0; c.order.len()];
    for (p, &v) in c.order.iter().enumerate() {
        pos[v] = p;
    }
    let mut edges: Vec<Edge> = g.edges().iter().map(|e| Edge::new(pos[e.u].min(pos[e.v]), pos[e.u].max(pos[e.v]), e.mark)).collect();
    edges.sort();
    let mut leaves: Vec<Leaf> = g.leaves().iter().map(|l| Leaf::new(pos[l.vertex], l.mark)).collect();
    leaves.sort();
    MarkedGraph::new(g.vertex_count(), edges, leaves).expect("relabeling preserves validity")
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn run_lengths<T: Ord + Clone>(mut xs: Vec<T>) -> Vec<usize> {
    xs.sort();
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        let j = (i..xs.len()).find(|&j| xs[j] != xs[i]).unwrap_or(xs.len());
        out.push(j - i);
        i = j;
    }
    out
}

/// Order of the group of mark-preserving permutations of vertices and
/// half-edges that preserve attachment and pairing. Parallel edges with equal
/// marks may be swapped, loops flipped and permuted, and equally marked
/// leaves at one vertex permuted.
pub fn automorphism_order(g: &MarkedGraph) -> u64 {
    canonical_form_with_automorphisms(g).1
}

/// [`canonical_form`] and [`automorphism_order`] from a single search.
pub fn canonical_form_with_automorphisms(g: &MarkedGraph) -> (CanonicalForm, u64) {
    let c = canonize(g);
    let mut order = c.vertex_automorphisms;
    let mut parallel: Vec<(usize, usize, EdgeMark)> = Vec::new();
    for e in g.edges() {
        parallel.push((e.u, e.v, e.mark));
    }
    let mut classes: std::collections::BTreeMap<(usize, usize, EdgeMark), usize> = Default::default();
    for key in parallel {
        *classes.entry(key).or_default() += 1;
    }
    for ((u, v, _), k) in classes {
        order *= factorial(k);
        if u == v {
            order *= 1 << k;
        }
    }
    for k in run_lengths(g.leaves().to_vec()) {
        order *= factorial(k);
    }
    (CanonicalForm(c.tokens), order)
}
