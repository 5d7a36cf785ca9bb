//! Brute-force evaluation by full state-sum expansion.

use num_traits::{One, Zero};

use super::mark_operator;
use crate::algebra::{bivector_of, CHAlgebra};
use crate::error::{Error, Result};
use crate::graded::{Parity, Poly, Rational, VarId};
use crate::graph::{Germ, LeafMark, MarkedGraph};

/// Evaluates `g` by summing over every assignment of basis elements to
/// half-edges, sorting the symbols into vertex order one transposition at a
/// time. Exponential; meant as a reference for small graphs.
pub fn oracle_evaluate(alg: &CHAlgebra, g: &MarkedGraph) -> Result<Poly> {
    g.require_connected()?;
    let n_edges = g.edges().len();
    let mut edge_terms: Vec<Vec<(usize, usize, Rational)>> = Vec::with_capacity(n_edges);
    for e in g.edges() {
        let b = bivector_of(alg, &mark_operator(alg, e.mark), false)?;
        let mut terms = Vec::new();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                if !b[(i, j)].is_zero() {
                    terms.push((i, j, b[(i, j)].clone()));
                }
            }
        }
        edge_terms.push(terms);
    }
    let mut leaf_terms: Vec<Vec<(usize, Poly)>> = Vec::with_capacity(g.leaves().len());
    for leaf in g.leaves() {
        leaf_terms.push(match leaf.mark {
            LeafMark::E(n) => {
                alg.h0().iter().enumerate().map(|(s, &i)| (i, Poly::var(VarId::new(n, s as u32)))).collect()
            }
            LeafMark::Unit => vec![(alg.unit(), Poly::one())],
            LeafMark::Basis(i) if i < alg.dim() => vec![(i, Poly::one())],
            LeafMark::Basis(i) => {
                return Err(Error::Malformed(format!("leaf B{} outside a {}-dimensional algebra", i + 1, alg.dim())))
            }
        });
    }

    let source_pos = |germ: Germ| match germ {
        Germ::Edge(k, leg) => 2 * k + leg as usize,
        Germ::Leaf(l) => 2 * n_edges + l,
    };
    let blocks: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| g.germs(v).into_iter().map(source_pos).collect()).collect();
    let target: Vec<usize> = blocks.iter().flatten().copied().collect();

    let mut total = Poly::zero();
    let mut symbols = vec![0usize; g.half_edge_count()];
    let mut edge_choice = vec![0usize; n_edges];
    let mut leaf_choice = vec![0usize; g.leaves().len()];
    if edge_terms.iter().any(Vec::is_empty) || leaf_terms.iter().any(Vec::is_empty) {
        return Ok(total);
    }
    loop {
        let mut coeff = Rational::one();
        for (k, &c) in edge_choice.iter().enumerate() {
            let (i, j, ref x) = edge_terms[k][c];
            symbols[2 * k] = i;
            symbols[2 * k + 1] = j;
            coeff *= x;
        }
        let mut poly = Poly::constant(coeff);
        for (l, &c) in leaf_choice.iter().enumerate() {
            let (i, ref p) = leaf_terms[l][c];
            symbols[2 * n_edges + l] = i;
            poly = &poly * p;
        }
        let sign = bubble_sign(&target, |s| alg.parity(symbols[s]));
        let mut weight = Rational::from_integer(sign.into());
        for block in &blocks {
            let idx: Vec<usize> = block.iter().map(|&s| symbols[s]).collect();
            weight *= alg.integrate_product(&idx);
            if weight.is_zero() {
                break;
            }
        }
        if !weight.is_zero() {
            total += poly.scaled(&weight);
        }
        if !advance(&mut edge_choice, |k| edge_terms[k].len()) && !advance(&mut leaf_choice, |l| leaf_terms[l].len()) {
            return Ok(total);
        }
    }
}

/// Mixed-radix increment; returns `false` (after wrapping to zero) when the
/// counter overflows.
fn advance(counter: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in 0..counter.len() {
        counter[k] += 1;
        if counter[k] < radix(k) {
            return true;
        }
        counter[k] = 0;
    }
    false
}

/// Sorts the symbols from source order into `target` order by adjacent
/// transpositions, returning ±1 from the odd-odd swaps.
fn bubble_sign(target: &[usize], parity: impl Fn(usize) -> Parity) -> i32 {
    // rank[s]: where source symbol s must end up.
    let mut rank = vec![0; target.len()];
    for (t, &s) in target.iter().enumerate() {
        rank[s] = t;
    }
    let mut seq: Vec<usize> = (0..target.len()).collect();
    let mut sign = 1;
    let mut swapped = true;
    while swapped {
        swapped = false;
        for a in 1..seq.len() {
            if rank[seq[a - 1]] > rank[seq[a]] {
                if parity(seq[a - 1]).is_odd() && parity(seq[a]).is_odd() {
                    sign = -sign;
                }
                seq.swap(a - 1, a);
                swapped = true;
            }
        }
    }
    sign
}
