use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::derived::{gplus, gram};
use super::CHAlgebra;
use crate::graded::{supertrace, GradedVector, Operator, Parity, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// Product, `Q`, `G_-` and the integral respect the Z2 grading.
    Grading,
    Supercommutativity,
    Associativity,
    /// `e_1` is an even two-sided unit with `Q e_1 = G_- e_1 = 0`.
    Unit,
    /// Axiom 1: `Q² = G_-² = QG_- + G_-Q = 0`.
    Nilpotency,
    /// Axiom 2: `Q`, `G_-` vanish on `H_0`; each block is `(e, Qe, G_-e, QG_-e)`.
    Hodge,
    /// Axiom 3: `Q(ab) = Q(a)b + (-1)^ã aQ(b)`.
    Leibniz,
    /// Axiom 4: the 7-term relation for `G_-`.
    SevenTerm,
    /// Axiom 5: `str(G_- ∘ a·) = (1/12) str(G_-(a)·)`.
    OneTwelfth,
    /// `∫Q(a)b = (-1)^{ã+1} ∫aQ(b)`.
    AdjointQ,
    /// `∫G_-(a)b = (-1)^ã ∫aG_-(b)`.
    AdjointGminus,
    /// `∫G_+(a)b = (-1)^ã ∫aG_+(b)`.
    AdjointGplus,
    /// `∫Π_0(a)b = ∫aΠ_0(b)`.
    AdjointPi0,
    /// `∫G_-G_+(a)b = ∫aG_-G_+(b)`.
    AdjointGminusGplus,
    NondegenerateGram,
    NondegenerateEta,
}

impl Axiom {
    pub const ALL: [Axiom; 16] = [
        Axiom::Grading,
        Axiom::Supercommutativity,
        Axiom::Associativity,
        Axiom::Unit,
        Axiom::Nilpotency,
        Axiom::Hodge,
        Axiom::Leibniz,
        Axiom::SevenTerm,
        Axiom::OneTwelfth,
        Axiom::AdjointQ,
        Axiom::AdjointGminus,
        Axiom::AdjointGplus,
        Axiom::AdjointPi0,
        Axiom::AdjointGminusGplus,
        Axiom::NondegenerateGram,
        Axiom::NondegenerateEta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Grading => "grading",
            Axiom::Supercommutativity => "supercommutativity",
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
            Axiom::Nilpotency => "nilpotency",
            Axiom::Hodge => "hodge",
            Axiom::Leibniz => "leibniz",
            Axiom::SevenTerm => "seven_term",
            Axiom::OneTwelfth => "one_twelfth",
            Axiom::AdjointQ => "adjoint_q",
            Axiom::AdjointGminus => "adjoint_gminus",
            Axiom::AdjointGplus => "adjoint_gplus",
            Axiom::AdjointPi0 => "adjoint_pi0",
            Axiom::AdjointGminusGplus => "adjoint_gminus_gplus",
            Axiom::NondegenerateGram => "nondegenerate_gram",
            Axiom::NondegenerateEta => "nondegenerate_eta",
        }
    }
}

/// Outcome for one axiom; the witness lists 1-based basis indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomStatus {
    pub axiom: Axiom,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub statuses: Vec<AxiomStatus>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.statuses.iter().all(|s| s.pass)
    }

    pub fn status(&self, axiom: Axiom) -> &AxiomStatus {
        self.statuses.iter().find(|s| s.axiom == axiom).expect("report covers every axiom")
    }

    pub fn passes(&self, axiom: Axiom) -> bool {
        self.status(axiom).pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomStatus> {
        self.statuses.iter().filter(|s| !s.pass)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statuses {
            write!(f, "{:<22} {}", s.axiom.name(), if s.pass { "pass" } else { "FAIL" })?;
            if let Some(w) = &s.witness {
                write!(f, "  witness {w:?}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn sign_if(odd: bool, v: GradedVector) -> GradedVector {
    if odd {
        v.scaled(&Rational::from_integer((-1).into()))
    } else {
        v
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// Exhaustive check of every axiom over basis tuples. Failures are reported
/// with the first offending tuple; nothing is thrown.
pub fn check_axioms(alg: &CHAlgebra) -> AxiomReport {
    let n = alg.dim();
    let par = alg.parities();
    let e = GradedVector::basis;
    let q = alg.q();
    let gm = alg.gminus();
    let gp = gplus(alg);

    let mut statuses = Vec::with_capacity(Axiom::ALL.len());
    let mut record = |axiom: Axiom, witness: Option<Vec<usize>>| {
        let witness = witness.map(|w| w.into_iter().map(|i| i + 1).collect());
        statuses.push(AxiomStatus { axiom, pass: witness.is_none(), witness });
    };

    // Grading.
    let grading = pairs(n)
        .find_map(|(i, j)| {
            alg.mul_basis(i, j).iter().find(|&(k, _)| par[k] != par[i] + par[j]).map(|(k, _)| vec![i, j, k])
        })
        .or_else(|| q.parity_violation().map(|(i, j)| vec![i, j]))
        .or_else(|| gm.parity_violation().map(|(i, j)| vec![i, j]))
        .or_else(|| (0..n).find(|&i| par[i].is_odd() && !num_traits::Zero::is_zero(&alg.integral()[i])).map(|i| vec![i]));
    record(Axiom::Grading, grading);

    // Supercommutativity.
    let supercomm = pairs(n).find(|&(i, j)| {
        let odd = par[i].is_odd() && par[j].is_odd();
        alg.mul_basis(i, j) != &sign_if(odd, alg.mul_basis(j, i).clone())
    });
    record(Axiom::Supercommutativity, supercomm.map(|(i, j)| vec![i, j]));

    // Associativity.
    let assoc = (0..n).into_par_iter().find_map_first(|i| {
        pairs(n).find_map(|(j, k)| {
            let l = alg.mul(alg.mul_basis(i, j), &e(k));
            let r = alg.mul(&e(i), alg.mul_basis(j, k));
            (l != r).then(|| vec![i, j, k])
        })
    });
    record(Axiom::Associativity, assoc);

    // Unit.
    let u = alg.unit();
    let unit = if par[u].is_odd() {
        Some(vec![u])
    } else {
        (0..n)
            .find(|&j| alg.mul_basis(u, j) != &e(j) || alg.mul_basis(j, u) != &e(j))
            .map(|j| vec![u, j])
            .or_else(|| (!q.apply_basis(u).is_zero() || !gm.apply_basis(u).is_zero()).then(|| vec![u]))
    };
    record(Axiom::Unit, unit);

    // Axiom 1.
    let nil = [q.compose(q), gm.compose(gm), q.compose(gm).add(&gm.compose(q))]
        .iter()
        .find_map(|op| pairs(n).find(|&(i, j)| !num_traits::Zero::is_zero(op.entry(i, j))).map(|(i, j)| vec![i, j]));
    record(Axiom::Nilpotency, nil);

    // Axiom 2.
    let hodge = alg
        .h0()
        .iter()
        .find(|&&i| !q.apply_basis(i).is_zero() || !gm.apply_basis(i).is_zero())
        .map(|&i| vec![i])
        .or_else(|| {
            alg.hodge().blocks.iter().find_map(|&[a, b, c, d]| {
                let ok = q.apply_basis(a) == e(b) && gm.apply_basis(a) == e(c) && q.apply_basis(c) == e(d);
                (!ok).then(|| vec![a, b, c, d])
            })
        });
    record(Axiom::Hodge, hodge);

    // Axiom 3.
    let leibniz = pairs(n).find(|&(i, j)| {
        let lhs = q.apply(alg.mul_basis(i, j));
        let rhs = alg.mul(&q.apply_basis(i), &e(j)).add(&sign_if(par[i].is_odd(), alg.mul(&e(i), &q.apply_basis(j))));
        lhs != rhs
    });
    record(Axiom::Leibniz, leibniz.map(|(i, j)| vec![i, j]));

    // Axiom 4.
    let seven = (0..n).into_par_iter().find_map_first(|i| {
        pairs(n).find_map(|(j, k)| {
            let (a, b, c) = (e(i), e(j), e(k));
            let (pa, pb) = (par[i], par[j]);
            let ab = alg.mul(&a, &b);
            let lhs = gm.apply(&alg.mul(&ab, &c));
            let terms = [
                (false, alg.mul(&gm.apply(&ab), &c)),
                ((pb.bit() * (pa.bit() + 1)) % 2 == 1, alg.mul(&b, &gm.apply(&alg.mul(&a, &c)))),
                (pa.is_odd(), alg.mul(&a, &gm.apply(&alg.mul(&b, &c)))),
                (true, alg.mul(&alg.mul(&gm.apply(&a), &b), &c)),
                (!pa.is_odd(), alg.mul(&alg.mul(&a, &gm.apply(&b)), &c)),
                (!(pa + pb).is_odd(), alg.mul(&ab, &gm.apply(&c))),
            ];
            let rhs = terms.into_iter().fold(GradedVector::zero(), |acc, (neg, t)| acc.add(&sign_if(neg, t)));
            (lhs != rhs).then(|| vec![i, j, k])
        })
    });
    record(Axiom::SevenTerm, seven);

    // Axiom 5.
    let twelfth = (0..n).find(|&i| {
        let lhs = supertrace(&gm.compose(&alg.left_mul(&e(i))));
        let rhs = supertrace(&alg.left_mul(&gm.apply_basis(i))) / Rational::from_integer(12.into());
        lhs != rhs
    });
    record(Axiom::OneTwelfth, twelfth.map(|i| vec![i]));

    // Integral adjointness.
    let int2 = |x: &GradedVector, y: &GradedVector| alg.integrate(&alg.mul(x, y));
    let adjoint = |op: &Operator, sign: &dyn Fn(Parity) -> bool| {
        pairs(n).find(|&(i, j)| {
            let l = int2(&op.apply_basis(i), &e(j));
            let r = int2(&e(i), &op.apply_basis(j));
            l != if sign(par[i]) { -r } else { r }
        })
    };
    record(Axiom::AdjointQ, adjoint(q, &|p| !p.is_odd()).map(|(i, j)| vec![i, j]));
    record(Axiom::AdjointGminus, adjoint(gm, &|p| p.is_odd()).map(|(i, j)| vec![i, j]));
    record(Axiom::AdjointGplus, adjoint(&gp, &|p| p.is_odd()).map(|(i, j)| vec![i, j]));
    let pi4 = q.compose(&gp).add(&gp.compose(q));
    let pi0 = Operator::identity(par.clone()).sub(&pi4);
    record(Axiom::AdjointPi0, adjoint(&pi0, &|_| false).map(|(i, j)| vec![i, j]));
    record(Axiom::AdjointGminusGplus, adjoint(&gm.compose(&gp), &|_| false).map(|(i, j)| vec![i, j]));

    // Non-degeneracy.
    let g = gram(alg);
    record(Axiom::NondegenerateGram, g.inverse().is_none().then(Vec::new));
    let eta = g.select(alg.h0(), alg.h0());
    let eta_bad = eta.rows() == 0 || eta.inverse().is_none();
    record(Axiom::NondegenerateEta, eta_bad.then(|| alg.h0().to_vec()));

    AxiomReport { statuses }
}
