//! The evaluation map from marked graphs to polynomials.
//!
//! Each vertex of degree `n` carries the form `(a_1, …, a_n) ↦ ∫ a_1⋯a_n`,
//! each edge the bivector of its operator, each leaf a vector. Symbols are
//! listed in source order (edge legs in edge order, then leaves) and moved
//! into vertex/germ order with Koszul signs. With the bivector convention of
//! [`crate::algebra::DerivedOps::bivector`] this sign rule already turns every
//! closed cycle into a supertrace, so cut edges need no further factor.

mod oracle;
mod plan;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

pub use oracle::oracle_evaluate;
pub use plan::{make_plan, EvalPlan};

use crate::algebra::{bivector_with, gplus, gram, CHAlgebra};
use crate::error::{Error, Result};
use crate::graded::{permutation_sign_by, GradedVector, Monomial, Operator, Parity, Poly, RatMatrix, Rational, VarId};
use crate::graph::{EdgeMark, Germ, LeafMark, MarkedGraph};

/// Sparse vector with polynomial coefficients.
pub(crate) type PolyVec = BTreeMap<usize, Poly>;

/// Nonzero entries `(i, j, c)` of a bivector, with its parity.
#[derive(Debug, Clone)]
pub(crate) struct SparseBivector {
    pub entries: Vec<(usize, usize, Rational)>,
    pub parity: Parity,
}

/// Evaluation context: an algebra plus its edge bivectors, computed once.
#[derive(Debug, Clone)]
pub struct Evaluator {
    alg: CHAlgebra,
    bivectors: Option<HashMap<EdgeMark, SparseBivector>>,
}

pub(crate) fn mark_operator(alg: &CHAlgebra, mark: EdgeMark) -> Operator {
    let gp = gplus(alg);
    let q = alg.q();
    match mark {
        EdgeMark::GG => alg.gminus().compose(&gp),
        EdgeMark::IdLoop | EdgeMark::Id => Operator::identity(alg.parities().clone()),
        EdgeMark::Pi0 => {
            let pi4 = q.compose(&gp).add(&gp.compose(q));
            Operator::identity(alg.parities().clone()).sub(&pi4)
        }
        EdgeMark::QGp => q.compose(&gp),
        EdgeMark::GpQ => gp.compose(q),
        EdgeMark::Gp => gp,
        EdgeMark::Gm => alg.gminus().clone(),
    }
}

fn sparse(alg: &CHAlgebra, m: &RatMatrix, parity: Parity, mark: EdgeMark) -> Result<SparseBivector> {
    let n = m.rows();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = &m[(i, j)];
            if c.is_zero() {
                continue;
            }
            if alg.parity(i) + alg.parity(j) != parity {
                return Err(Error::Unsupported(format!("bivector of {mark} is not homogeneous")));
            }
            entries.push((i, j, c.clone()));
        }
    }
    Ok(SparseBivector { entries, parity })
}

/// Homogeneous components of a leaf vector: `(parity, vector)` pairs.
pub(crate) fn leaf_components(alg: &CHAlgebra, mark: LeafMark) -> Result<Vec<(Parity, PolyVec)>> {
    let mut even = PolyVec::new();
    let mut odd = PolyVec::new();
    let mut put = |i: usize, p: Poly| {
        if alg.parity(i).is_odd() {
            odd.insert(i, p);
        } else {
            even.insert(i, p);
        }
    };
    match mark {
        LeafMark::E(n) => {
            for (slot, &i) in alg.h0().iter().enumerate() {
                put(i, Poly::var(VarId::new(n, slot as u32)));
            }
        }
        LeafMark::Unit => put(alg.unit(), Poly::one()),
        LeafMark::Basis(i) => {
            if i >= alg.dim() {
                return Err(Error::Malformed(format!("leaf B{} outside a {}-dimensional algebra", i + 1, alg.dim())));
            }
            put(i, Poly::one());
        }
    }
    Ok([(Parity::Even, even), (Parity::Odd, odd)].into_iter().filter(|(_, v)| !v.is_empty()).collect())
}

/// `a · b` for vectors with polynomial coefficients.
pub(crate) fn mul_polyvec(alg: &CHAlgebra, a: &PolyVec, b: &PolyVec) -> PolyVec {
    let mut out = PolyVec::new();
    for (&i, x) in a {
        for (&j, y) in b {
            let prod = alg.mul_basis(i, j);
            if prod.is_zero() {
                continue;
            }
            let xy = x * y;
            for (k, c) in prod.iter() {
                let term = xy.scaled(c);
                let slot = out.entry(k).or_default();
                *slot += term;
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

type Key = Vec<u16>;

impl Evaluator {
    pub fn new(alg: &CHAlgebra) -> Result<Self> {
        let bivectors = match gram(alg).inverse() {
            Some(gram_inv) => {
                let mut map = HashMap::new();
                for mark in EdgeMark::ALL {
                    let op = mark_operator(alg, mark);
                    let b = bivector_with(&gram_inv, &op, false);
                    map.insert(mark, sparse(alg, &b, op.parity(), mark)?);
                }
                Some(map)
            }
            None => None,
        };
        Ok(Evaluator { alg: alg.clone(), bivectors })
    }

    pub fn algebra(&self) -> &CHAlgebra {
        &self.alg
    }

    pub(crate) fn bivector(&self, mark: EdgeMark) -> Result<&SparseBivector> {
        self.bivectors.as_ref().map(|m| &m[&mark]).ok_or(Error::Singular { what: "scalar product" })
    }

    pub fn evaluate(&self, g: &MarkedGraph) -> Result<Poly> {
        let plan = make_plan(g)?;
        self.evaluate_with_plan(g, &plan)
    }

    pub fn evaluate_with_plan(&self, g: &MarkedGraph, plan: &EvalPlan) -> Result<Poly> {
        plan.validate(g)?;
        let mut components = Vec::with_capacity(g.leaves().len());
        for leaf in g.leaves() {
            let c = leaf_components(&self.alg, leaf.mark)?;
            if c.is_empty() {
                return Ok(Poly::zero());
            }
            components.push(c);
        }
        for e in g.edges() {
            self.bivector(e.mark)?;
        }
        let schedule = Schedule::new(g, plan);
        let mut total = Poly::zero();
        let mut choice = vec![0usize; components.len()];
        loop {
            let leaves: Vec<(Parity, &PolyVec)> =
                choice.iter().zip(&components).map(|(&c, comps)| (comps[c].0, &comps[c].1)).collect();
            total += self.evaluate_branch(g, &schedule, &leaves)?;
            // Advance the mixed-radix counter over leaf parity components.
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Ok(total);
                }
                choice[k] += 1;
                if choice[k] < components[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    fn evaluate_branch(&self, g: &MarkedGraph, s: &Schedule, leaves: &[(Parity, &PolyVec)]) -> Result<Poly> {
        let alg = &self.alg;
        let par = alg.parities();
        let n_edges = g.edges().len();

        // Sign of moving whole items from source order into insertion order.
        let item_parity = |item: usize| {
            if item < n_edges {
                self.bivectors.as_ref().map_or(Parity::Even, |m| m[&g.edges()[item].mark].parity)
            } else {
                leaves[item - n_edges].0
            }
        };
        let global = permutation_sign_by(s.insertion.len(), |k| s.insertion[k], item_parity);

        let mut state: HashMap<Key, Poly> = HashMap::new();
        state.insert(Vec::new(), if global.is_minus() { -Poly::one() } else { Poly::one() });
        let mut legs: Vec<Germ> = Vec::new();

        for &k in &s.cut_edges {
            state = self.expand_edge(state, g.edges()[k].mark)?;
            legs.push(Germ::Edge(k, 0));
            legs.push(Germ::Edge(k, 1));
        }

        for step in &s.steps {
            if let Some(k) = step.parent_edge {
                state = self.expand_edge(state, g.edges()[k].mark)?;
            }
            // Conceptual sequence: [current legs before the parent edge] [leaves of v] [parent legs].
            let before = legs.len();
            if let Some(k) = step.parent_edge {
                legs.push(Germ::Edge(k, 0));
                legs.push(Germ::Edge(k, 1));
            }
            let n_leaves = step.leaves.len();
            let seq_len = legs.len() + n_leaves;
            // Position in the conceptual sequence of each state leg.
            let seq_pos = |leg_idx: usize| if leg_idx < before { leg_idx } else { leg_idx + n_leaves };
            let leaf_pos = |r: usize| before + r;

            // Target: leaves of v (germ order), edge legs of v (germ order), remaining legs.
            let mut target: Vec<usize> = Vec::with_capacity(seq_len);
            let mut leaf_order: Vec<usize> = Vec::new();
            let mut vertex_legs: Vec<usize> = Vec::new();
            for germ in &step.germs {
                match *germ {
                    Germ::Leaf(l) => {
                        let r = step.leaves.iter().position(|&x| x == l).expect("leaf of v");
                        leaf_order.push(r);
                    }
                    edge_germ => {
                        let idx = legs.iter().position(|&x| x == edge_germ).expect("edge leg present");
                        vertex_legs.push(idx);
                    }
                }
            }
            target.extend(leaf_order.iter().map(|&r| leaf_pos(r)));
            target.extend(vertex_legs.iter().map(|&i| seq_pos(i)));
            let remaining: Vec<usize> = (0..legs.len()).filter(|i| !vertex_legs.contains(i)).collect();
            target.extend(remaining.iter().map(|&i| seq_pos(i)));

            // Fused leaf product in germ order and c[k] = ∫ L·e_k.
            let fused = leaf_order.iter().map(|&r| leaves[step.leaves[r]].1).fold(None, |acc: Option<PolyVec>, v| {
                Some(match acc {
                    None => v.clone(),
                    Some(a) => mul_polyvec(alg, &a, v),
                })
            });
            let c: Vec<Poly> = match &fused {
                Some(l) => (0..alg.dim())
                    .map(|k| {
                        let mut p = Poly::zero();
                        for (&i, x) in l {
                            let r = alg.integrate(alg.mul_basis(i, k));
                            if !r.is_zero() {
                                p += x.scaled(&r);
                            }
                        }
                        p
                    })
                    .collect(),
                None => alg.integral().iter().map(|r| Poly::constant(r.clone())).collect(),
            };
            let fused_integral = fused.as_ref().map(|l| {
                let mut p = Poly::zero();
                for (&i, x) in l {
                    p += x.scaled(&alg.integral()[i]);
                }
                p
            });

            let mut products: HashMap<Vec<u16>, GradedVector> = HashMap::new();
            let mut next: HashMap<Key, Poly> = HashMap::with_capacity(state.len());
            let mut parities = vec![Parity::Even; seq_len];
            for r in 0..n_leaves {
                parities[leaf_pos(r)] = leaves[step.leaves[r]].0;
            }
            for (key, coeff) in state {
                for (idx, &b) in key.iter().enumerate() {
                    parities[seq_pos(idx)] = par[b as usize];
                }
                let sign = permutation_sign_by(seq_len, |t| target[t], |p| parities[p]);
                let value = if vertex_legs.is_empty() {
                    match &fused_integral {
                        Some(p) => p.clone(),
                        None => Poly::constant(alg.integrate_product(&[])),
                    }
                } else {
                    let idx: Vec<u16> = vertex_legs.iter().map(|&i| key[i]).collect();
                    let w = products.entry(idx).or_insert_with_key(|idx| {
                        let mut acc = GradedVector::basis(idx[0] as usize);
                        for &b in &idx[1..] {
                            acc = alg.mul(&acc, &GradedVector::basis(b as usize));
                        }
                        acc
                    });
                    if fused.is_none() {
                        Poly::constant(alg.integrate(w))
                    } else {
                        let mut p = Poly::zero();
                        for (k, x) in w.iter() {
                            if !c[k].is_zero() {
                                p += c[k].scaled(x);
                            }
                        }
                        p
                    }
                };
                if value.is_zero() {
                    continue;
                }
                let mut term = &coeff * &value;
                if sign.is_minus() {
                    term = -term;
                }
                let rest: Key = remaining.iter().map(|&i| key[i]).collect();
                let slot = next.entry(rest).or_default();
                *slot += term;
            }
            next.retain(|_, p| !p.is_zero());
            state = next;
            legs = remaining.iter().map(|&i| legs[i]).collect();
        }
        debug_assert!(legs.is_empty());
        Ok(state.remove(&Vec::new()).unwrap_or_default())
    }

    fn expand_edge(&self, state: HashMap<Key, Poly>, mark: EdgeMark) -> Result<HashMap<Key, Poly>> {
        let b = self.bivector(mark)?;
        let mut out = HashMap::with_capacity(state.len() * b.entries.len().max(1));
        for (key, coeff) in &state {
            for (i, j, c) in &b.entries {
                let mut k = key.clone();
                k.push(*i as u16);
                k.push(*j as u16);
                out.insert(k, coeff.scaled(c));
            }
        }
        Ok(out)
    }
}

/// Vertex processing schedule derived from a plan.
struct Schedule {
    /// Item source positions (edges `0..E`, leaves `E..`) in insertion order.
    insertion: Vec<usize>,
    cut_edges: Vec<usize>,
    steps: Vec<Step>,
}

struct Step {
    /// Tree edge to the parent; `None` at the root.
    parent_edge: Option<usize>,
    /// Leaves at the vertex, in listing order.
    leaves: Vec<usize>,
    germs: Vec<Germ>,
}

impl Schedule {
    fn new(g: &MarkedGraph, plan: &EvalPlan) -> Self {
        let n_edges = g.edges().len();
        let cut: Vec<usize> = plan.sign_edges.clone();
        let order = plan.processing_order(g);
        let mut insertion: Vec<usize> = cut.clone();
        let mut steps = Vec::with_capacity(order.len());
        for (v, parent_edge) in order {
            let leaves: Vec<usize> = (0..g.leaves().len()).filter(|&l| g.leaves()[l].vertex == v).collect();
            insertion.extend(leaves.iter().map(|&l| n_edges + l));
            insertion.extend(parent_edge);
            steps.push(Step { parent_edge, leaves, germs: plan.germ_order[v].clone() });
        }
        Schedule { insertion, cut_edges: cut, steps }
    }
}

/// Evaluates with the default plan.
pub fn evaluate_graph(alg: &CHAlgebra, g: &MarkedGraph) -> Result<Poly> {
    Evaluator::new(alg)?.evaluate(g)
}

pub fn evaluate_with_plan(alg: &CHAlgebra, g: &MarkedGraph, plan: &EvalPlan) -> Result<Poly> {
    Evaluator::new(alg)?.evaluate_with_plan(g, plan)
}

/// Coefficient of a monomial in `poly`; convenience for tests and reports.
pub fn coefficient(poly: &Poly, vars: &[VarId]) -> Rational {
    poly.coeff(&Monomial::from_vars(vars.iter().copied()))
}
