//! cH-algebras: structure constants, the odd operators `Q` and `G_-`, the
//! integral, and the declared Hodge decomposition.

mod axioms;
mod derived;
mod file;

use std::sync::Arc;

use num_traits::Zero;

pub use axioms::{check_axioms, Axiom, AxiomReport, AxiomStatus};
pub use derived::{bivector_of, derive_ops, DerivedOps};
pub(crate) use derived::{bivector_with, gplus, gram};
pub use file::{load_algebra, AlgebraFile, HodgeFile};

use crate::error::{Error, Result};
use crate::graded::{GradedVector, Operator, Parity, RatMatrix, Rational};

/// Declared Hodge decomposition `H = H_0 ⊕ ⨁_α ⟨e_α, Qe_α, G_-e_α, QG_-e_α⟩`
/// by basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hodge {
    pub h0: Vec<usize>,
    pub blocks: Vec<[usize; 4]>,
}

/// Finite-dimensional cH-algebra in a homogeneous basis `e_0, …, e_{dim-1}`
/// (0-based internally; files and user-facing output are 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CHAlgebra {
    dim: usize,
    parity: Arc<[Parity]>,
    /// `product[i * dim + j] = e_i · e_j`.
    product: Vec<GradedVector>,
    unit: usize,
    q: Operator,
    gminus: Operator,
    integral: Vec<Rational>,
    hodge: Hodge,
}

/// A single-entry change to the defining data, used by mutation tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    /// Coefficient of `e_k` in `e_i · e_j`.
    Product { i: usize, j: usize, k: usize, value: Rational },
    /// Coefficient of `e_i` in `Q e_j`.
    Q { i: usize, j: usize, value: Rational },
    /// Coefficient of `e_i` in `G_- e_j`.
    Gminus { i: usize, j: usize, value: Rational },
    /// `∫ e_i`.
    Integral { i: usize, value: Rational },
}

impl CHAlgebra {
    /// Assembles an algebra after shape checks (axioms are checked separately
    /// by [`check_axioms`]).
    pub fn from_parts(
        parity: Vec<Parity>,
        product: Vec<GradedVector>,
        unit: usize,
        q: RatMatrix,
        gminus: RatMatrix,
        integral: Vec<Rational>,
        hodge: Hodge,
    ) -> Result<Self> {
        let dim = parity.len();
        if dim == 0 {
            return Err(Error::Dimension("algebra must have positive dimension".into()));
        }
        if product.len() != dim * dim {
            return Err(Error::Dimension(format!("product table has {} entries, expected {}", product.len(), dim * dim)));
        }
        if product.iter().any(|v| v.iter().any(|(k, _)| k >= dim)) {
            return Err(Error::Dimension("product refers to a basis index out of range".into()));
        }
        if unit >= dim {
            return Err(Error::UnitIndex { index: unit + 1, dim });
        }
        if integral.len() != dim {
            return Err(Error::Dimension(format!("integral has {} entries, expected {dim}", integral.len())));
        }
        check_partition(dim, &hodge)?;
        let parity: Arc<[Parity]> = parity.into();
        let q = Operator::new(q, Parity::Odd, parity.clone())?;
        let gminus = Operator::new(gminus, Parity::Odd, parity.clone())?;
        Ok(CHAlgebra { dim, parity, product, unit, q, gminus, integral, hodge })
    }

    /// One of the algebras shipped with the crate: `trivial`, `frobenius2`,
    /// `p2` or `hodge10`.
    pub fn builtin(name: &str) -> Option<CHAlgebra> {
        let text = match name {
            "trivial" => include_str!("../../data/algebras/trivial.json"),
            "frobenius2" => include_str!("../../data/algebras/frobenius2.json"),
            "p2" => include_str!("../../data/algebras/p2.json"),
            "hodge10" => include_str!("../../data/algebras/hodge10.json"),
            _ => return None,
        };
        Some(load_algebra(text).expect("shipped algebra files are well-formed"))
    }

    /// A shipped algebra by name, or else an algebra file at that path.
    pub fn open(source: &str) -> Result<CHAlgebra> {
        match CHAlgebra::builtin(source) {
            Some(alg) => Ok(alg),
            None => load_algebra(&std::fs::read_to_string(source)?),
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 4] = ["trivial", "frobenius2", "p2", "hodge10"];

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parities(&self) -> &Arc<[Parity]> {
        &self.parity
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn q(&self) -> &Operator {
        &self.q
    }

    pub fn gminus(&self) -> &Operator {
        &self.gminus
    }

    pub fn integral(&self) -> &[Rational] {
        &self.integral
    }

    pub fn hodge(&self) -> &Hodge {
        &self.hodge
    }

    /// Basis indices of `H_0`, in declared order; position in this list is
    /// the slot of the formal variables `T_{n,slot}`.
    pub fn h0(&self) -> &[usize] {
        &self.hodge.h0
    }

    /// Position of the unit in the `H_0` list.
    pub fn unit_slot(&self) -> Option<usize> {
        self.hodge.h0.iter().position(|&i| i == self.unit)
    }

    pub fn h0_is_even(&self) -> bool {
        self.hodge.h0.iter().all(|&i| !self.parity[i].is_odd())
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &GradedVector {
        &self.product[i * self.dim + j]
    }

    pub fn mul(&self, a: &GradedVector, b: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let xy = x * y;
                for (k, c) in self.mul_basis(i, j).iter() {
                    out.add_term(k, c * &xy);
                }
            }
        }
        out
    }

    pub fn integrate(&self, v: &GradedVector) -> Rational {
        v.iter().fold(Rational::zero(), |s, (i, c)| s + c * &self.integral[i])
    }

    /// `∫ e_{i_1} ⋯ e_{i_n}`, multiplying left to right; the empty product
    /// is the unit.
    pub fn integrate_product(&self, indices: &[usize]) -> Rational {
        let Some((&first, rest)) = indices.split_first() else {
            return self.integral[self.unit].clone();
        };
        let mut acc = GradedVector::basis(first);
        for &i in rest {
            acc = self.mul(&acc, &GradedVector::basis(i));
            if acc.is_zero() {
                return Rational::zero();
            }
        }
        self.integrate(&acc)
    }

    /// The operator `x ↦ a·x`; homogeneous when `a` is.
    pub fn left_mul(&self, a: &GradedVector) -> Operator {
        let parity = a.parity(&self.parity).unwrap_or(Parity::Even);
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(a, &GradedVector::basis(j));
            for (i, c) in col.iter() {
                m[(i, j)] = c.clone();
            }
        }
        Operator::new(m, parity, self.parity.clone()).expect("square by construction")
    }

    pub fn is_h4_empty(&self) -> bool {
        self.hodge.blocks.is_empty()
    }

    pub fn mutated(&self, m: &Mutation) -> CHAlgebra {
        let mut out = self.clone();
        match m {
            Mutation::Product { i, j, k, value } => {
                let slot = &mut out.product[i * self.dim + j];
                let current = slot.get(*k);
                slot.add_term(*k, value - current);
            }
            Mutation::Q { i, j, value } => out.q = out.q.with_entry(*i, *j, value.clone()),
            Mutation::Gminus { i, j, value } => out.gminus = out.gminus.with_entry(*i, *j, value.clone()),
            Mutation::Integral { i, value } => out.integral[*i] = value.clone(),
        }
        out
    }

    /// Current value of the entry a [`Mutation`] would overwrite.
    pub fn entry(&self, m: &Mutation) -> Rational {
        match m {
            Mutation::Product { i, j, k, .. } => self.mul_basis(*i, *j).get(*k),
            Mutation::Q { i, j, .. } => self.q.entry(*i, *j).clone(),
            Mutation::Gminus { i, j, .. } => self.gminus.entry(*i, *j).clone(),
            Mutation::Integral { i, .. } => self.integral[*i].clone(),
        }
    }
}

fn check_partition(dim: usize, hodge: &Hodge) -> Result<()> {
    let mut seen = vec![false; dim];
    let all = hodge.h0.iter().chain(hodge.blocks.iter().flatten());
    for &i in all {
        if i >= dim {
            return Err(Error::Hodge(format!("index {} out of range", i + 1)));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Hodge(format!("index {} listed more than once", i + 1)));
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::Hodge(format!("index {} not covered", i + 1)));
    }
    Ok(())
}
