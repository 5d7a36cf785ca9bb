use std::ops::{Mul, MulAssign, Neg};

use super::Parity;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(p: Parity) -> Sign {
        match p {
            Parity::Even => Sign::Plus,
            Parity::Odd => Sign::Minus,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// Koszul sign of reordering a sequence of homogeneous symbols.
///
/// `permutation[k]` is the source position of the symbol that ends up in
/// target slot `k` (0-based); `parities[s]` is the parity of the symbol at
/// source position `s`. The sign is `(-1)^t` where `t` counts the pairs of odd
/// symbols whose relative order is reversed.
pub fn koszul_sign(permutation: &[usize], parities: &[Parity]) -> Result<Sign> {
    if permutation.len() != parities.len() {
        return Err(Error::Malformed(format!(
            "permutation of length {} with {} parities",
            permutation.len(),
            parities.len()
        )));
    }
    let mut seen = vec![false; permutation.len()];
    for &p in permutation {
        if p >= seen.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Malformed(format!("{permutation:?} is not a permutation")));
        }
    }
    Ok(permutation_sign_by(permutation.len(), |k| permutation[k], |s| parities[s]))
}

/// Unchecked core of [`koszul_sign`], parameterised by closures so hot loops
/// can avoid allocating.
pub fn permutation_sign_by(
    len: usize,
    source_of: impl Fn(usize) -> usize,
    parity_of: impl Fn(usize) -> Parity,
) -> Sign {
    let mut odd_inversions = 0usize;
    for a in 0..len {
        let sa = source_of(a);
        if !parity_of(sa).is_odd() {
            continue;
        }
        for b in a + 1..len {
            let sb = source_of(b);
            if sb < sa && parity_of(sb).is_odd() {
                odd_inversions += 1;
            }
        }
    }
    if odd_inversions.is_multiple_of(2) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}
