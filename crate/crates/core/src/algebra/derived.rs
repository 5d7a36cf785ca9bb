use num_traits::{One, Zero};

use super::CHAlgebra;
use crate::error::{Error, Result};
use crate::graded::{Operator, Parity, RatMatrix, Rational};

/// Operators and bilinear forms derived from the defining data.
#[derive(Debug, Clone)]
pub struct DerivedOps {
    pub gplus: Operator,
    pub pi0: Operator,
    pub pi4: Operator,
    pub j: Operator,
    /// `gram[(i, j)] = ∫ e_i e_j`.
    pub gram: RatMatrix,
    pub gram_inv: RatMatrix,
    /// `gram` restricted to the `H_0` indices, in `H_0` list order.
    pub eta: RatMatrix,
    pub eta_inv: RatMatrix,
}

/// `G_+`, built blockwise: `G_+ Qe_α = e_α`, `G_+ QG_-e_α = G_-e_α`, zero on
/// `e_α`, `G_-e_α` and on `H_0`.
pub(crate) fn gplus(alg: &CHAlgebra) -> Operator {
    let n = alg.dim();
    let mut m = RatMatrix::zeros(n, n);
    for &[e, qe, gme, qgme] in &alg.hodge().blocks {
        m[(e, qe)] = One::one();
        m[(gme, qgme)] = One::one();
    }
    Operator::new(m, Parity::Odd, alg.parities().clone()).expect("square by construction")
}

pub(crate) fn gram(alg: &CHAlgebra) -> RatMatrix {
    let n = alg.dim();
    RatMatrix::from_fn(n, n, |i, j| alg.integrate(alg.mul_basis(i, j)))
}

pub fn derive_ops(alg: &CHAlgebra) -> Result<DerivedOps> {
    let basis = alg.parities().clone();
    let gplus = gplus(alg);
    let pi4 = alg.q().compose(&gplus).add(&gplus.compose(alg.q()));
    let pi0 = Operator::identity(basis.clone()).sub(&pi4);
    let j = Operator::grading(basis);
    let gram = gram(alg);
    let gram_inv = gram.inverse().ok_or(Error::Singular { what: "scalar product" })?;
    let eta = gram.select(alg.h0(), alg.h0());
    let eta_inv = eta.inverse().ok_or(Error::Singular { what: "restriction of the scalar product to H_0" })?;
    Ok(DerivedOps { gplus, pi0, pi4, j, gram, gram_inv, eta, eta_inv })
}

impl DerivedOps {
    /// The bivector `[A] = Σ_{i,k} g^{ik} (-1)^{|A||i|} e_i ⊗ A(e_k)` as the
    /// matrix of coefficients of `e_i ⊗ e_j`; with `with_j`, the bivector of
    /// `J∘A`. Contracting its first leg against `(·, x)` returns `A(x)`.
    pub fn bivector(&self, op: &Operator, with_j: bool) -> RatMatrix {
        bivector_with(&self.gram_inv, op, with_j)
    }

    /// `G_- ∘ G_+`, the operator carried by potential-graph edges.
    pub fn gg(&self, alg: &CHAlgebra) -> Operator {
        alg.gminus().compose(&self.gplus)
    }
}

pub(crate) fn bivector_with(gram_inv: &RatMatrix, op: &Operator, with_j: bool) -> RatMatrix {
    let op = if with_j { Operator::grading(op.basis().clone()).compose(op) } else { op.clone() };
    let n = op.dim();
    let odd = op.parity().is_odd();
    RatMatrix::from_fn(n, n, |i, j| {
        let mut s = Rational::zero();
        for k in 0..n {
            let g = &gram_inv[(i, k)];
            let a = op.entry(j, k);
            if !g.is_zero() && !a.is_zero() {
                s += g * a;
            }
        }
        if odd && op.basis()[i].is_odd() {
            -s
        } else {
            s
        }
    })
}

pub fn bivector_of(alg: &CHAlgebra, op: &Operator, with_j: bool) -> Result<RatMatrix> {
    let gram_inv = gram(alg).inverse().ok_or(Error::Singular { what: "scalar product" })?;
    Ok(bivector_with(&gram_inv, op, with_j))
}
