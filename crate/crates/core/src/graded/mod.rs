//! Graded linear algebra over exact rationals.

mod koszul;
mod matrix;
mod operator;
mod parity;
mod poly;
mod rational;
mod vector;

pub use koszul::{koszul_sign, permutation_sign_by, Sign};
pub use matrix::RatMatrix;
pub use operator::{supertrace, Operator};
pub use parity::Parity;
pub use poly::{poly_partial, poly_truncate, Monomial, Poly, VarId};
pub use rational::{fmt_rational, int, parse_rational, rat, Rational};
pub use vector::GradedVector;
