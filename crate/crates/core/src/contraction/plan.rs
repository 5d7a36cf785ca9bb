//! Evaluation plans: a spanning tree, a vertex order and germ orders.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Germ, MarkedGraph};

/// How a graph is contracted. The result does not depend on the plan; plans
/// exist so that this independence can be tested.
///
/// `sign_edges` are the edges outside the spanning tree (including all
/// loops); they are expanded up front. The tree is rooted at
/// `vertex_order[0]` and processed children-first, siblings by their rank in
/// `vertex_order`. `germ_order[v]` lists the germs at `v` in the order their
/// vectors are multiplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPlan {
    pub vertex_order: Vec<usize>,
    pub germ_order: Vec<Vec<Germ>>,
    pub sign_edges: Vec<usize>,
}

/// Default plan: depth-first spanning tree from vertex 0, exploring edges in
/// listing order.
pub fn make_plan(g: &MarkedGraph) -> Result<EvalPlan> {
    g.require_connected()?;
    let order: Vec<usize> = (0..g.edges().len()).collect();
    EvalPlan::with_tree_priority(g, &order, (0..g.vertex_count()).collect(), None)
}

impl EvalPlan {
    /// Builds a plan whose spanning tree is chosen greedily from the edges in
    /// `priority` order (Kruskal without weights). Edges missing from
    /// `priority` are never tree edges. `germ_order` defaults to
    /// [`MarkedGraph::germs`].
    pub fn with_tree_priority(
        g: &MarkedGraph,
        priority: &[usize],
        vertex_order: Vec<usize>,
        germ_order: Option<Vec<Vec<Germ>>>,
    ) -> Result<EvalPlan> {
        let n = g.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut in_tree = vec![false; g.edges().len()];
        for &k in priority {
            let e = g.edges().get(k).ok_or_else(|| Error::Malformed(format!("edge {k} out of range")))?;
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
                in_tree[k] = true;
            }
        }
        let sign_edges = (0..g.edges().len()).filter(|&k| !in_tree[k]).collect();
        let germ_order = germ_order.unwrap_or_else(|| (0..n).map(|v| g.germs(v)).collect());
        let plan = EvalPlan { vertex_order, germ_order, sign_edges };
        plan.validate(g)?;
        Ok(plan)
    }

    /// Checks that the plan fits `g`.
    pub fn validate(&self, g: &MarkedGraph) -> Result<()> {
        let n = g.vertex_count();
        let bad = |msg: &str| Err(Error::Malformed(format!("evaluation plan: {msg}")));
        let mut seen = vec![false; n];
        if self.vertex_order.len() != n {
            return bad("vertex order has the wrong length");
        }
        for &v in &self.vertex_order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return bad("vertex order is not a permutation");
            }
        }
        if self.germ_order.len() != n {
            return bad("germ order has the wrong length");
        }
        for v in 0..n {
            let mut want = g.germs(v);
            let mut have = self.germ_order[v].clone();
            want.sort();
            have.sort();
            if want != have {
                return bad("germ order is not a permutation of the germs");
            }
        }
        let mut cut = vec![false; g.edges().len()];
        for &k in &self.sign_edges {
            if k >= cut.len() || std::mem::replace(&mut cut[k], true) {
                return bad("sign edges are not distinct edges");
            }
        }
        let tree: Vec<usize> = (0..cut.len()).filter(|&k| !cut[k]).collect();
        if tree.len() + 1 != n || tree.iter().any(|&k| g.edges()[k].is_loop()) {
            return bad("remaining edges do not form a spanning tree");
        }
        if self.processing_order(g).len() != n {
            return bad("remaining edges do not form a spanning tree");
        }
        Ok(())
    }

    /// Post-order traversal of the spanning tree: `(vertex, edge to parent)`.
    pub(crate) fn processing_order(&self, g: &MarkedGraph) -> Vec<(usize, Option<usize>)> {
        let n = g.vertex_count();
        let mut rank = vec![0; n];
        for (r, &v) in self.vertex_order.iter().enumerate() {
            rank[v] = r;
        }
        let mut cut = vec![false; g.edges().len()];
        for &k in &self.sign_edges {
            cut[k] = true;
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (k, e) in g.edges().iter().enumerate() {
            if !cut[k] && !e.is_loop() {
                adj[e.u].push((e.v, k));
                adj[e.v].push((e.u, k));
            }
        }
        for list in &mut adj {
            list.sort_by_key(|&(w, _)| rank[w]);
        }
        let root = self.vertex_order[0];
        let mut parent_edge: Vec<Option<usize>> = vec![None; n];
        let mut visited = vec![false; n];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, k) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent_edge[w] = Some(k);
                    children[v].push(w);
                    queue.push_back(w);
                }
            }
        }
        let mut out = Vec::with_capacity(n);
        fn post(v: usize, children: &[Vec<usize>], parent_edge: &[Option<usize>], out: &mut Vec<(usize, Option<usize>)>) {
            for &c in &children[v] {
                post(c, children, parent_edge, out);
            }
            out.push((v, parent_edge[v]));
        }
        post(root, &children, &parent_edge, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn theta_has_two_sign_edges() {
        let plan = make_plan(&theta()).unwrap();
        assert_eq!(plan.sign_edges, vec![1, 2]);
        assert_eq!(plan.processing_order(&theta()), vec![(1, Some(0)), (0, None)]);
    }

    #[test]
    fn loops_are_always_cut() {
        let plan = make_plan(&dumbbell()).unwrap();
        assert_eq!(plan.sign_edges, vec![0, 2]);
    }

    #[test]
    fn rejects_bad_plans() {
        let g = theta();
        let mut plan = make_plan(&g).unwrap();
        plan.sign_edges = vec![0, 1, 2];
        assert!(plan.validate(&g).is_err());
        let mut plan = make_plan(&g).unwrap();
        plan.vertex_order = vec![0, 0];
        assert!(plan.validate(&g).is_err());
        let mut plan = make_plan(&g).unwrap();
        plan.germ_order[0].pop();
        assert!(plan.validate(&g).is_err());
    }
}
