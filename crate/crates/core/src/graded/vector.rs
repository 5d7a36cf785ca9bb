use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Parity, Rational};

/// Sparse vector in a basis whose elements carry fixed parities. Zero
/// coordinates are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedVector {
    coords: BTreeMap<usize, Rational>,
}

impl GradedVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.add_term(i, Rational::from_integer(1.into()));
        v
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        let mut v = Self::zero();
        for (i, c) in values.iter().enumerate() {
            v.add_term(i, c.clone());
        }
        v
    }

    pub fn add_term(&mut self, i: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coords.entry(i).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coords.remove(&i);
        }
    }

    pub fn get(&self, i: usize) -> Rational {
        self.coords.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coords.iter().map(|(i, c)| (*i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut v = Self::zero();
        for (i, x) in self.iter() {
            v.add_term(i, x * c);
        }
        v
    }

    pub fn add(&self, other: &GradedVector) -> Self {
        let mut v = self.clone();
        for (i, x) in other.iter() {
            v.add_term(i, x.clone());
        }
        v
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Rational> {
        (0..dim).map(|i| self.get(i)).collect()
    }

    /// The common parity of the support, `None` for zero or inhomogeneous
    /// vectors.
    pub fn parity(&self, basis: &[Parity]) -> Option<Parity> {
        let mut it = self.coords.keys().map(|&i| basis[i]);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_homogeneous(&self, basis: &[Parity]) -> bool {
        self.is_zero() || self.parity(basis).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::int;

    #[test]
    fn cancellation_removes_entries() {
        let mut v = GradedVector::basis(2);
        v.add_term(2, int(-1));
        assert!(v.is_zero());
    }

    #[test]
    fn homogeneity() {
        let basis = [Parity::Even, Parity::Odd, Parity::Odd];
        let v = GradedVector::from_dense(&[int(0), int(1), int(3)]);
        assert_eq!(v.parity(&basis), Some(Parity::Odd));
        let w = v.add(&GradedVector::basis(0));
        assert_eq!(w.parity(&basis), None);
        assert!(!w.is_homogeneous(&basis));
        assert!(GradedVector::zero().is_homogeneous(&basis));
    }
}
