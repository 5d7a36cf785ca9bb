//! Truncated potentials `F_g^sm` and `F_{g,n}` assembled from weighted graph
//! sums, and the closed-form one-point series of the one-dimensional algebra.

mod enumerate;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

pub use enumerate::{is_stable, Enumerator, WeightedGraphClass};

use crate::algebra::CHAlgebra;
use crate::contraction::Evaluator;
use crate::error::{Error, Result};
use crate::graded::{Monomial, Poly, Rational};

/// Largest leaf count the table will enumerate unless told otherwise.
pub const DEFAULT_MAX_LEAVES: usize = 12;

/// Key of a potential entry: `(genus, descendant level, leaf bound)`. Level 0
/// is `F_g^sm`.
pub type PotentialKey = (usize, u32, usize);

/// Lazily computed potentials over one algebra.
///
/// The entry `(g, n, L)` holds every monomial of `F_{g,n}` with at most `L`
/// level-0 factors. Contributions are cached per exact leaf count, so raising
/// `L` only evaluates the new graphs.
pub struct PotentialTable {
    evaluator: Evaluator,
    enumerator: Enumerator,
    max_leaves: usize,
    /// `(g, n, exact leaf count)` → contribution.
    layers: HashMap<PotentialKey, Poly>,
    classes: HashMap<PotentialKey, Vec<WeightedGraphClass>>,
    /// Injected changes, keyed by `(g, n)`; used to test the verifier.
    perturbations: BTreeMap<(usize, u32), Poly>,
}

impl PotentialTable {
    /// Potential graphs use commuting variables, so `H_0` must be even.
    pub fn new(alg: &CHAlgebra) -> Result<Self> {
        if !alg.h0_is_even() {
            return Err(Error::Unsupported("potentials need a purely even H_0 basis".into()));
        }
        Ok(PotentialTable {
            evaluator: Evaluator::new(alg)?,
            enumerator: Enumerator::new(),
            max_leaves: DEFAULT_MAX_LEAVES,
            layers: HashMap::new(),
            classes: HashMap::new(),
            perturbations: BTreeMap::new(),
        })
    }

    /// Sets the enumeration budget: requests needing more leaves fail with
    /// [`Error::Budget`].
    pub fn with_max_leaves(mut self, max_leaves: usize) -> Self {
        self.max_leaves = max_leaves;
        self
    }

    pub fn max_leaves(&self) -> usize {
        self.max_leaves
    }

    pub fn algebra(&self) -> &CHAlgebra {
        self.evaluator.algebra()
    }

    /// Weighted classes with exactly `leaves` empty leaves.
    pub fn classes(&mut self, genus: usize, n: u32, leaves: usize) -> Vec<WeightedGraphClass> {
        let key = (genus, n, leaves);
        if let Some(c) = self.classes.get(&key) {
            return c.clone();
        }
        let c = if n == 0 { self.enumerator.sm(genus, leaves) } else { self.enumerator.desc(genus, n, leaves) };
        self.classes.insert(key, c.clone());
        c
    }

    fn layer(&mut self, genus: usize, n: u32, leaves: usize) -> Result<Poly> {
        let key = (genus, n, leaves);
        if let Some(p) = self.layers.get(&key) {
            return Ok(p.clone());
        }
        let classes = self.classes(genus, n, leaves);
        let ev = &self.evaluator;
        let parts: Vec<Poly> = classes
            .par_iter()
            .map(|c| ev.evaluate(&c.graph).map(|p| p.scaled(&c.weight)))
            .collect::<Result<_>>()?;
        let sum: Poly = parts.into_iter().sum();
        self.layers.insert(key, sum.clone());
        Ok(sum)
    }

    /// `F_{g,n}` truncated to at most `max_leaves` level-0 factors.
    pub fn potential(&mut self, genus: usize, n: u32, max_leaves: usize) -> Result<Poly> {
        if max_leaves > self.max_leaves {
            return Err(Error::Budget(format!(
                "F_{{{genus},{n}}} needs graphs with {max_leaves} leaves; the budget is {}",
                self.max_leaves
            )));
        }
        let mut total = Poly::zero();
        for leaves in 0..=max_leaves {
            total += self.layer(genus, n, leaves)?;
        }
        if let Some(delta) = self.perturbations.get(&(genus, n)) {
            total += delta.filter(|m| m.small_degree() as usize <= max_leaves);
        }
        Ok(total)
    }

    /// Adds `delta · monomial` to every later read of `F_{g,n}`.
    pub fn perturb(&mut self, genus: usize, n: u32, monomial: Monomial, delta: Rational) {
        self.perturbations.entry((genus, n)).or_default().add_term(monomial, delta);
    }

    /// Drops all perturbations.
    pub fn clear_perturbations(&mut self) {
        self.perturbations.clear();
    }
}

/// `F_{g,n}` (with `F_{g,0} = F_g^sm`) up to `max_leaves` empty leaves.
pub fn compute_potential(alg: &CHAlgebra, genus: usize, n: u32, max_leaves: usize) -> Result<Poly> {
    PotentialTable::new(alg)?.with_max_leaves(max_leaves.max(DEFAULT_MAX_LEAVES)).potential(genus, n, max_leaves)
}

pub fn enumerate_sm(genus: usize, leaves: usize) -> Vec<WeightedGraphClass> {
    Enumerator::new().sm(genus, leaves)
}

pub fn enumerate_desc(genus: usize, n: u32, leaves: usize) -> Vec<WeightedGraphClass> {
    Enumerator::new().desc(genus, n, leaves)
}

fn factorial(k: u64) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// Coefficient of `T_{m,1} T_{0,1}^k` in genus `g` of
/// `T³/6 + Σ_n T_{n,1}T^{n+2}/(n+2)! + Σ_{g≥1,n} T_{3g+n-2,1}Tⁿ/(g!·24^g·n!)`
/// (for `m = 0` the monomial is `T^k`); zero for absent combinations.
pub fn kdv_coefficient(genus: u32, m: u32, k: u32) -> Rational {
    let one = || Rational::one();
    match (genus, m) {
        (0, 0) if k == 3 => one() / Rational::from_integer(6.into()),
        (0, m) if m >= 1 && k == m + 2 => one() / Rational::from_integer(factorial(k as u64)),
        (g, m) if g >= 1 && m + 2 == 3 * g + k => {
            let den = factorial(g as u64) * BigInt::from(24).pow(g) * factorial(k as u64);
            one() / Rational::from_integer(den)
        }
        _ => Rational::zero(),
    }
}
