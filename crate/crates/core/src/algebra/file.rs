use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{CHAlgebra, Hodge};
use crate::error::{Error, Result};
use crate::graded::{fmt_rational, parse_rational, GradedVector, Parity, RatMatrix, Rational};

/// A rational written either as a JSON string `"p/q"` or a JSON integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatText {
    Text(String),
    Int(i64),
}

impl RatText {
    fn value(&self) -> Result<Rational> {
        match self {
            RatText::Text(s) => parse_rational(s),
            RatText::Int(n) => Ok(Rational::from_integer((*n).into())),
        }
    }
}

impl From<&Rational> for RatText {
    fn from(r: &Rational) -> Self {
        RatText::Text(fmt_rational(r))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgeFile {
    #[serde(rename = "H0")]
    pub h0: Vec<usize>,
    #[serde(default)]
    pub blocks: Vec<[usize; 4]>,
}

/// On-disk algebra description; all indices 1-based, omitted entries zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub parity: Vec<u8>,
    pub unit: usize,
    #[serde(default)]
    pub product: Vec<(usize, usize, usize, RatText)>,
    #[serde(default, rename = "Q")]
    pub q: Vec<(usize, usize, RatText)>,
    #[serde(default, rename = "Gminus")]
    pub gminus: Vec<(usize, usize, RatText)>,
    pub integral: Vec<RatText>,
    pub hodge: HodgeFile,
}

/// Parses an algebra file and performs shape checks only.
pub fn load_algebra(text: &str) -> Result<CHAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.build()
}

impl AlgebraFile {
    pub fn build(&self) -> Result<CHAlgebra> {
        let dim = self.dim;
        if dim == 0 {
            return Err(Error::Dimension("dim must be positive".into()));
        }
        if self.parity.len() != dim {
            return Err(Error::Dimension(format!("parity has {} entries, expected {dim}", self.parity.len())));
        }
        let parity = self
            .parity
            .iter()
            .map(|&b| Parity::from_bit(b).ok_or_else(|| Error::Parse(format!("parity must be 0 or 1, got {b}"))))
            .collect::<Result<Vec<_>>>()?;
        if self.unit == 0 || self.unit > dim {
            return Err(Error::UnitIndex { index: self.unit, dim });
        }
        let idx = |i: usize, what: &str| -> Result<usize> {
            if i == 0 || i > dim {
                Err(Error::Dimension(format!("{what} index {i} out of range 1..={dim}")))
            } else {
                Ok(i - 1)
            }
        };

        let mut product = vec![GradedVector::zero(); dim * dim];
        let mut seen = HashSet::new();
        for (i, j, k, c) in &self.product {
            let (i, j, k) = (idx(*i, "product")?, idx(*j, "product")?, idx(*k, "product")?);
            if !seen.insert((i, j, k)) {
                return Err(Error::Malformed(format!("duplicate product entry ({}, {}, {})", i + 1, j + 1, k + 1)));
            }
            product[i * dim + j].add_term(k, c.value()?);
        }

        let matrix = |entries: &[(usize, usize, RatText)], what: &str| -> Result<RatMatrix> {
            let mut m = RatMatrix::zeros(dim, dim);
            let mut seen = HashSet::new();
            for (i, j, c) in entries {
                let (i, j) = (idx(*i, what)?, idx(*j, what)?);
                if !seen.insert((i, j)) {
                    return Err(Error::Malformed(format!("duplicate {what} entry ({}, {})", i + 1, j + 1)));
                }
                m[(i, j)] = c.value()?;
            }
            Ok(m)
        };
        let q = matrix(&self.q, "Q")?;
        let gminus = matrix(&self.gminus, "Gminus")?;

        if self.integral.len() != dim {
            return Err(Error::Dimension(format!("integral has {} entries, expected {dim}", self.integral.len())));
        }
        let integral = self.integral.iter().map(RatText::value).collect::<Result<Vec<_>>>()?;

        let to0 = |i: usize| -> Result<usize> {
            if i == 0 || i > dim {
                Err(Error::Hodge(format!("index {i} out of range 1..={dim}")))
            } else {
                Ok(i - 1)
            }
        };
        let h0 = self.hodge.h0.iter().map(|&i| to0(i)).collect::<Result<Vec<_>>>()?;
        let blocks = self
            .hodge
            .blocks
            .iter()
            .map(|b| Ok([to0(b[0])?, to0(b[1])?, to0(b[2])?, to0(b[3])?]))
            .collect::<Result<Vec<_>>>()?;

        CHAlgebra::from_parts(parity, product, self.unit - 1, q, gminus, integral, Hodge { h0, blocks })
    }

    pub fn from_algebra(alg: &CHAlgebra) -> AlgebraFile {
        let dim = alg.dim();
        let mut product = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for (k, c) in alg.mul_basis(i, j).iter() {
                    product.push((i + 1, j + 1, k + 1, c.into()));
                }
            }
        }
        let entries = |op: &crate::graded::Operator| {
            let mut out = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    let c = op.entry(i, j);
                    if !num_traits::Zero::is_zero(c) {
                        out.push((i + 1, j + 1, c.into()));
                    }
                }
            }
            out
        };
        AlgebraFile {
            dim,
            parity: alg.parities().iter().map(|p| p.bit()).collect(),
            unit: alg.unit() + 1,
            product,
            q: entries(alg.q()),
            gminus: entries(alg.gminus()),
            integral: alg.integral().iter().map(RatText::from).collect(),
            hodge: HodgeFile {
                h0: alg.h0().iter().map(|i| i + 1).collect(),
                blocks: alg.hodge().blocks.iter().map(|b| b.map(|i| i + 1)).collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
