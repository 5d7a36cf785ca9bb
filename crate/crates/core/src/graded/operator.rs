use std::sync::Arc;

use num_traits::{One, Zero};

use super::{GradedVector, Parity, RatMatrix, Rational};
use crate::error::{Error, Result};

/// Linear operator on a graded space with a fixed homogeneous basis.
///
/// Entry `(i, j)` of the matrix is the coefficient of `e_i` in `A(e_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    matrix: RatMatrix,
    parity: Parity,
    basis: Arc<[Parity]>,
}

impl Operator {
    pub fn new(matrix: RatMatrix, parity: Parity, basis: Arc<[Parity]>) -> Result<Self> {
        if matrix.rows() != basis.len() || matrix.cols() != basis.len() {
            return Err(Error::Dimension(format!(
                "operator matrix is {}x{} on a {}-dimensional space",
                matrix.rows(),
                matrix.cols(),
                basis.len()
            )));
        }
        Ok(Operator { matrix, parity, basis })
    }

    pub fn zero(parity: Parity, basis: Arc<[Parity]>) -> Self {
        let n = basis.len();
        Operator { matrix: RatMatrix::zeros(n, n), parity, basis }
    }

    pub fn identity(basis: Arc<[Parity]>) -> Self {
        let n = basis.len();
        Operator { matrix: RatMatrix::identity(n), parity: Parity::Even, basis }
    }

    /// `J: e_i ↦ (-1)^{parity(i)} e_i`.
    pub fn grading(basis: Arc<[Parity]>) -> Self {
        let n = basis.len();
        let matrix = RatMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::from_integer(basis[i].sign().into())
            } else {
                Rational::zero()
            }
        });
        Operator { matrix, parity: Parity::Even, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn basis(&self) -> &Arc<[Parity]> {
        &self.basis
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[(i, j)]
    }

    /// The first entry violating the declared parity, as `(row, col)`.
    pub fn parity_violation(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !self.matrix[(i, j)].is_zero() && self.basis[i] != self.basis[j] + self.parity)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parity_violation().is_none()
    }

    pub fn apply(&self, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (j, c) in v.iter() {
            for i in 0..self.dim() {
                let a = &self.matrix[(i, j)];
                if !a.is_zero() {
                    out.add_term(i, a * c);
                }
            }
        }
        out
    }

    /// Image of the basis vector `e_j`.
    pub fn apply_basis(&self, j: usize) -> GradedVector {
        let mut out = GradedVector::zero();
        for i in 0..self.dim() {
            out.add_term(i, self.matrix[(i, j)].clone());
        }
        out
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Operator) -> Operator {
        self.check_same_space(rhs);
        let matrix = self.matrix.mul(&rhs.matrix).expect("same dimension");
        Operator { matrix, parity: self.parity + rhs.parity, basis: self.basis.clone() }
    }

    pub fn add(&self, rhs: &Operator) -> Operator {
        self.check_same_space(rhs);
        let matrix = self.matrix.add(&rhs.matrix).expect("same dimension");
        Operator { matrix, parity: self.parity, basis: self.basis.clone() }
    }

    pub fn sub(&self, rhs: &Operator) -> Operator {
        self.check_same_space(rhs);
        let matrix = self.matrix.sub(&rhs.matrix).expect("same dimension");
        Operator { matrix, parity: self.parity, basis: self.basis.clone() }
    }

    pub fn scaled(&self, c: &Rational) -> Operator {
        Operator { matrix: self.matrix.scaled(c), parity: self.parity, basis: self.basis.clone() }
    }

    /// Graded commutator `[A, B] = AB - (-1)^{|A||B|} BA`.
    pub fn supercommutator(&self, rhs: &Operator) -> Operator {
        let ab = self.compose(rhs);
        let ba = rhs.compose(self);
        if self.parity.is_odd() && rhs.parity.is_odd() {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn with_entry(&self, i: usize, j: usize, value: Rational) -> Operator {
        let mut out = self.clone();
        out.matrix[(i, j)] = value;
        out
    }

    fn check_same_space(&self, rhs: &Operator) {
        assert_eq!(self.basis, rhs.basis, "operators act on different graded spaces");
    }
}

/// `Σ_i (-1)^{parity(i)} A[i][i]`.
pub fn supertrace(op: &Operator) -> Rational {
    let mut s = Rational::zero();
    for i in 0..op.dim() {
        let d = op.entry(i, i);
        if op.basis[i].is_odd() {
            s -= d;
        } else {
            s += d;
        }
    }
    s
}

impl Operator {
    pub fn trace(&self) -> Rational {
        (0..self.dim()).fold(Rational::zero(), |s, i| s + self.entry(i, i))
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }
}
