//! Exact checks of the differential equations satisfied by the potentials.
//!
//! Each check builds `LHS − RHS` as a polynomial, with every pair of
//! contracted derivative indices summed against `η⁻¹`, and inspects it in a
//! window where both sides are complete: total degree `≤ D`, at most one
//! arrow factor. A derivative factor with `k` level-0 derivatives reads its
//! potential with `D + k` leaves, which is exactly what the window needs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{derive_ops, CHAlgebra};
use crate::error::{Error, Result};
use crate::graded::{fmt_rational, rat, supertrace, Monomial, Poly, RatMatrix, Rational, VarId};
use crate::potentials::PotentialTable;

/// The equations the verifier knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Wdvv,
    Const,
    String,
    Dilaton,
    Trr0,
    Trr1,
    Trr2,
}

impl Relation {
    pub const ALL: [Relation; 7] =
        [Relation::Wdvv, Relation::Const, Relation::String, Relation::Dilaton, Relation::Trr0, Relation::Trr1, Relation::Trr2];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Wdvv => "wdvv",
            Relation::Const => "const",
            Relation::String => "string",
            Relation::Dilaton => "dilaton",
            Relation::Trr0 => "trr0",
            Relation::Trr1 => "trr1",
            Relation::Trr2 => "trr2",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown relation {s:?}")))
    }
}

/// One named summand of the right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: &'static str,
    pub value: Poly,
}

/// The equation for one choice of free indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    /// Free indices `a, b, …` as 0-based `H_0` slots.
    pub indices: Vec<usize>,
    pub lhs: Poly,
    pub rhs: Vec<Term>,
    /// `LHS − Σ RHS` restricted to the complete window.
    pub residual: Poly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub monomial: Monomial,
    pub coefficient: Rational,
}

/// Outcome of one equation check.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub relation: Relation,
    pub genus: Option<usize>,
    pub n: Option<u32>,
    pub degree: u32,
    pub components: Vec<Component>,
    pub pass: bool,
    pub witness: Option<Witness>,
    /// Constant term of the left-hand side of the constant relation.
    pub constant: Option<Rational>,
}

impl Residual {
    fn new(relation: Relation, genus: Option<usize>, n: Option<u32>, degree: u32, components: Vec<Component>) -> Self {
        let witness = components.iter().find_map(|c| {
            c.residual.lowest_term().map(|(m, coeff)| Witness {
                indices: c.indices.clone(),
                monomial: m.clone(),
                coefficient: coeff.clone(),
            })
        });
        Residual { relation, genus, n, degree, pass: witness.is_none(), components, witness, constant: None }
    }

    /// Short name such as `trr2(n=2)` or `string(g=1)`.
    pub fn name(&self) -> String {
        match (self.genus, self.n) {
            (Some(g), _) => format!("{}(g={g})", self.relation),
            (_, Some(n)) => format!("{}(n={n})", self.relation),
            _ => self.relation.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        json!({
            "relation": self.relation.as_str(),
            "genus": self.genus,
            "n": self.n,
            "degree": self.degree,
            "pass": self.pass,
            "constant": self.constant.as_ref().map(fmt_rational),
            "witness": self.witness.as_ref().map(|w| json!({
                "indices": one_based(&w.indices),
                "monomial": Poly::term(w.monomial.clone(), Rational::one()).to_string(),
                "coefficient": fmt_rational(&w.coefficient),
            })),
            "components": self.components.iter().map(|c| json!({
                "indices": one_based(&c.indices),
                "lhs": c.lhs.to_string(),
                "rhs": c.rhs.iter().map(|t| json!({"term": t.label, "value": t.value.to_string()})).collect::<Vec<_>>(),
                "residual": c.residual.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} D={}: {}", self.name(), self.degree, if self.pass { "pass" } else { "FAIL" })?;
        if let Some(c) = &self.constant {
            write!(f, " (constant {})", fmt_rational(c))?;
        }
        if let Some(w) = &self.witness {
            let idx: Vec<String> = w.indices.iter().map(|i| (i + 1).to_string()).collect();
            write!(
                f,
                " witness [{}] {}",
                idx.join(","),
                Poly::term(w.monomial.clone(), w.coefficient.clone())
            )?;
        }
        Ok(())
    }
}

fn t0(i: usize) -> VarId {
    VarId::new(0, i as u32)
}

fn tn(n: u32, i: usize) -> VarId {
    VarId::new(n, i as u32)
}

/// Runs equation checks against a [`PotentialTable`].
pub struct Verifier {
    table: PotentialTable,
    eta: RatMatrix,
    eta_inv: RatMatrix,
    unit_slot: Option<usize>,
    str_pi0: Rational,
    potentials: HashMap<(usize, u32, usize), Poly>,
}

impl Verifier {
    pub fn new(alg: &CHAlgebra) -> Result<Self> {
        Self::from_table(PotentialTable::new(alg)?)
    }

    pub fn from_table(table: PotentialTable) -> Result<Self> {
        let alg = table.algebra();
        let ops = derive_ops(alg)?;
        Ok(Verifier {
            eta: ops.eta.clone(),
            eta_inv: ops.eta_inv.clone(),
            unit_slot: alg.unit_slot(),
            str_pi0: supertrace(&ops.pi0),
            table,
            potentials: HashMap::new(),
        })
    }

    /// The underlying table; cached potentials are dropped since the caller
    /// may perturb it.
    pub fn table_mut(&mut self) -> &mut PotentialTable {
        self.potentials.clear();
        &mut self.table
    }

    fn slots(&self) -> usize {
        self.eta.rows()
    }

    fn unit(&self) -> Result<usize> {
        self.unit_slot.ok_or_else(|| Error::Unsupported("the unit must be one of the H_0 basis vectors".into()))
    }

    fn potential(&mut self, genus: usize, n: u32, leaves: usize) -> Result<Poly> {
        if let Some(p) = self.potentials.get(&(genus, n, leaves)) {
            return Ok(p.clone());
        }
        let p = self.table.potential(genus, n, leaves)?;
        self.potentials.insert((genus, n, leaves), p.clone());
        Ok(p)
    }

    /// `∂^k F_{g,n} / ∂vars`, complete and truncated to the degree-`d` window.
    fn d(&mut self, genus: usize, n: u32, vars: &[VarId], d: u32) -> Result<Poly> {
        let level0 = vars.iter().filter(|v| !v.is_arrow()).count();
        let f = self.potential(genus, n, d as usize + level0)?;
        Ok(f.partial_many(vars).truncate(d, 1))
    }

    /// `F_g = Σ_n F_{g,n}`, complete for `leaves` level-0 factors.
    fn full_genus(&mut self, genus: usize, leaves: usize) -> Result<Poly> {
        // A graph with L empty leaves has arrow level at most 3g - 2 + L.
        let n_max = (3 * genus + leaves).saturating_sub(2) as u32;
        let mut total = Poly::zero();
        for n in 0..=n_max {
            total += self.potential(genus, n, leaves)?;
        }
        Ok(total)
    }

    fn product(factors: &[&Poly], d: u32) -> Poly {
        let mut acc = Poly::one();
        for f in factors {
            if f.is_zero() {
                return Poly::zero();
            }
            acc = (&acc * *f).truncate(d, 1);
        }
        acc
    }

    /// `Σ_{i,j} η^{ij} (f(i) · g(j))` truncated to the window.
    fn contract(&self, f: &[Poly], g: &[Poly], d: u32) -> Poly {
        let mut out = Poly::zero();
        for i in 0..self.slots() {
            for j in 0..self.slots() {
                let c = &self.eta_inv[(i, j)];
                if !c.is_zero() {
                    out += Self::product(&[&f[i], &g[j]], d).scaled(c);
                }
            }
        }
        out
    }

    fn finish(lhs: Poly, rhs: Vec<Term>, indices: Vec<usize>, d: u32) -> Component {
        let mut residual = lhs.clone();
        for t in &rhs {
            residual -= &t.value;
        }
        Component { indices, lhs, rhs, residual: residual.truncate(d, 1) }
    }

    fn third_derivatives(&mut self, d: u32) -> Result<HashMap<(usize, usize, usize), Poly>> {
        let s = self.slots();
        let mut out = HashMap::new();
        for a in 0..s {
            for b in a..s {
                for c in b..s {
                    out.insert((a, b, c), self.d(0, 0, &[t0(a), t0(b), t0(c)], d)?);
                }
            }
        }
        Ok(out)
    }

    /// WDVV for `F_0^sm`, for all `a, b, c, d`.
    pub fn wdvv(&mut self, degree: u32) -> Result<Residual> {
        let s = self.slots();
        let f3 = self.third_derivatives(degree)?;
        let get = |x: usize, y: usize, z: usize| {
            let mut k = [x, y, z];
            k.sort();
            &f3[&(k[0], k[1], k[2])]
        };
        let mut components = Vec::new();
        for a in 0..s {
            for b in 0..s {
                for c in 0..s {
                    for dd in 0..s {
                        let row = |x: usize, y: usize| (0..s).map(|i| get(x, y, i).clone()).collect::<Vec<_>>();
                        let lhs = self.contract(&row(a, b), &row(c, dd), degree);
                        let rhs = self.contract(&row(a, c), &row(b, dd), degree);
                        components.push(Self::finish(lhs, vec![Term { label: "F_aci η^ij F_jbd", value: rhs }], vec![a, b, c, dd], degree));
                    }
                }
            }
        }
        Ok(Residual::new(Relation::Wdvv, None, None, degree, components))
    }

    /// `η^{kl} F_{kli} η^{ij} F_{jmn} η^{mn}` has no nonconstant terms; the
    /// constant is reported.
    pub fn const_relation(&mut self, degree: u32) -> Result<Residual> {
        let s = self.slots();
        let f3 = self.third_derivatives(degree)?;
        let get = |x: usize, y: usize, z: usize| {
            let mut k = [x, y, z];
            k.sort();
            &f3[&(k[0], k[1], k[2])]
        };
        // v_i = η^{kl} F_{kli}
        let v: Vec<Poly> = (0..s)
            .map(|i| {
                let mut acc = Poly::zero();
                for k in 0..s {
                    for l in 0..s {
                        if !self.eta_inv[(k, l)].is_zero() {
                            acc += get(k, l, i).scaled(&self.eta_inv[(k, l)]);
                        }
                    }
                }
                acc
            })
            .collect();
        let lhs = self.contract(&v, &v, degree);
        let constant = lhs.constant_term();
        let component = Self::finish(lhs, vec![Term { label: "const", value: Poly::constant(constant.clone()) }], vec![], degree);
        let mut r = Residual::new(Relation::Const, None, None, degree, vec![component]);
        r.constant = Some(constant);
        Ok(r)
    }

    /// `∂F_g/∂T_{0,1} = Σ_{i,n} T_{n+1,i} ∂F_g/∂T_{n,i} + δ_{g,0} T_{0,i}η_{ij}T_{0,j}/2`.
    pub fn string(&mut self, genus: usize, degree: u32) -> Result<Residual> {
        let u = self.unit()?;
        let s = self.slots();
        let f = self.full_genus(genus, degree as usize + 1)?;
        let lhs = f.partial(t0(u)).truncate(degree, 1);
        let n_max = (3 * genus + degree as usize + 1).saturating_sub(2) as u32;
        let mut shift = Poly::zero();
        for i in 0..s {
            for n in 0..=n_max {
                let df = f.partial(tn(n, i)).truncate(degree.saturating_sub(1), 1);
                shift += Self::product(&[&Poly::var(tn(n + 1, i)), &df], degree);
            }
        }
        let mut rhs = vec![Term { label: "Σ T_{n+1,i} ∂F/∂T_{n,i}", value: shift }];
        if genus == 0 {
            let mut quad = Poly::zero();
            for i in 0..s {
                for j in 0..s {
                    let c = &self.eta[(i, j)];
                    if !c.is_zero() {
                        let m = Monomial::from_vars([t0(i), t0(j)]);
                        quad.add_term(m, c * rat(1, 2));
                    }
                }
            }
            rhs.push(Term { label: "T_{0,i} η_ij T_{0,j} / 2", value: quad.truncate(degree, 1) });
        }
        let component = Self::finish(lhs, rhs, vec![], degree);
        Ok(Residual::new(Relation::String, Some(genus), None, degree, vec![component]))
    }

    /// `∂F_{g,1}/∂T_{1,1} = Σ T_{0,i} ∂F_{g,0}/∂T_{0,i} + (2g−2)F_{g,0} + δ_{g,1} str(Π_0)/24`.
    pub fn dilaton(&mut self, genus: usize, degree: u32) -> Result<Residual> {
        let u = self.unit()?;
        let s = self.slots();
        let lhs = self.d(genus, 1, &[tn(1, u)], degree)?;
        let mut euler = Poly::zero();
        for i in 0..s {
            let df = self.d(genus, 0, &[t0(i)], degree)?;
            euler += Self::product(&[&Poly::var(t0(i)), &df], degree);
        }
        let f = self.d(genus, 0, &[], degree)?;
        let mut rhs = vec![
            Term { label: "Σ T_{0,i} ∂F_{g,0}/∂T_{0,i}", value: euler },
            Term { label: "(2g−2) F_{g,0}", value: f.scaled(&Rational::from_integer((2 * genus as i64 - 2).into())) },
        ];
        if genus == 1 {
            rhs.push(Term { label: "str(Π_0)/24", value: Poly::constant(&self.str_pi0 * rat(1, 24)) });
        }
        let component = Self::finish(lhs, rhs, vec![], degree);
        Ok(Residual::new(Relation::Dilaton, Some(genus), None, degree, vec![component]))
    }

    /// Genus-0 topological recursion, for all `a, b, c`.
    pub fn trr0(&mut self, n: u32, degree: u32) -> Result<Residual> {
        let s = self.slots();
        let mut components = Vec::new();
        for a in 0..s {
            let left: Vec<Poly> = (0..s).map(|i| self.d(0, n, &[tn(n, a), t0(i)], degree)).collect::<Result<_>>()?;
            for b in 0..s {
                for c in 0..s {
                    let lhs = self.d(0, n + 1, &[tn(n + 1, a), t0(b), t0(c)], degree)?;
                    let right: Vec<Poly> =
                        (0..s).map(|j| self.d(0, 0, &[t0(j), t0(b), t0(c)], degree)).collect::<Result<_>>()?;
                    let rhs = self.contract(&left, &right, degree);
                    components.push(Self::finish(lhs, vec![Term { label: "F_{0,n} η F_{0,0}", value: rhs }], vec![a, b, c], degree));
                }
            }
        }
        Ok(Residual::new(Relation::Trr0, None, Some(n), degree, components))
    }

    /// Genus-1 topological recursion, for all `a`.
    pub fn trr1(&mut self, n: u32, degree: u32) -> Result<Residual> {
        let s = self.slots();
        let df1: Vec<Poly> = (0..s).map(|j| self.d(1, 0, &[t0(j)], degree)).collect::<Result<_>>()?;
        let mut components = Vec::new();
        for a in 0..s {
            let lhs = self.d(1, n + 1, &[tn(n + 1, a)], degree)?;
            let left: Vec<Poly> = (0..s).map(|i| self.d(0, n, &[tn(n, a), t0(i)], degree)).collect::<Result<_>>()?;
            let first = self.contract(&left, &df1, degree);
            let mut second = Poly::zero();
            for i in 0..s {
                for j in 0..s {
                    let c = self.eta_inv[(i, j)].clone();
                    if !c.is_zero() {
                        second += self.d(0, n, &[tn(n, a), t0(i), t0(j)], degree)?.scaled(&c);
                    }
                }
            }
            let rhs = vec![
                Term { label: "F_{0,n} η F_{1,0}", value: first },
                Term { label: "1/24 F_{0,n} η", value: second.scaled(&rat(1, 24)) },
            ];
            components.push(Self::finish(lhs, rhs, vec![a], degree));
        }
        Ok(Residual::new(Relation::Trr1, None, Some(n), degree, components))
    }

    /// Genus-2 topological recursion with all eight right-hand terms, for all `a`.
    pub fn trr2(&mut self, n: u32, degree: u32) -> Result<Residual> {
        let s = self.slots();
        let dd = degree;
        let per_j = |v: &mut Self, genus: usize, level: u32, extra: &[VarId]| -> Result<Vec<Poly>> {
            (0..s)
                .map(|j| {
                    let mut vars = vec![tn(level, j)];
                    vars.extend_from_slice(extra);
                    v.d(genus, level, &vars, dd)
                })
                .collect()
        };
        let df20 = per_j(self, 2, 0, &[])?;
        let df21 = per_j(self, 2, 1, &[])?;
        let df10 = per_j(self, 1, 0, &[])?;
        let mut components = Vec::new();
        for a in 0..s {
            let lhs = self.d(2, n + 2, &[tn(n + 2, a)], dd)?;
            let mut terms = vec![Poly::zero(); 8];

            let g_n1: Vec<Poly> = (0..s).map(|i| self.d(0, n + 1, &[tn(n + 1, a), t0(i)], dd)).collect::<Result<_>>()?;
            terms[0] = self.contract(&g_n1, &df20, dd);
            let g_n: Vec<Poly> = (0..s).map(|i| self.d(0, n, &[tn(n, a), t0(i)], dd)).collect::<Result<_>>()?;
            terms[1] = self.contract(&g_n, &df21, dd);

            for i in 0..s {
                for j in 0..s {
                    let eij = self.eta_inv[(i, j)].clone();
                    if eij.is_zero() {
                        continue;
                    }
                    for i2 in 0..s {
                        for j2 in 0..s {
                            let e2 = self.eta_inv[(i2, j2)].clone();
                            if e2.is_zero() {
                                continue;
                            }
                            let w = &eij * &e2;
                            let f00 = self.d(0, 0, &[t0(j), t0(i2)], dd)?;
                            terms[2] -= &Self::product(&[&g_n[i], &f00, &df20[j2]], dd).scaled(&w);
                            let f3 = self.d(0, n, &[tn(n, a), t0(i), t0(i2)], dd)?;
                            terms[3] += Self::product(&[&f3, &df10[j], &df10[j2]], dd).scaled(&(&w * rat(7, 10)));
                            let f10 = self.d(1, 0, &[t0(j), t0(j2)], dd)?;
                            terms[4] += Self::product(&[&f3, &f10], dd).scaled(&(&w * rat(1, 10)));
                            let f1n = self.d(1, n, &[tn(n, a), t0(i)], dd)?;
                            let f000 = self.d(0, 0, &[t0(j), t0(i2), t0(j2)], dd)?;
                            terms[5] -= &Self::product(&[&f1n, &f000], dd).scaled(&(&w * rat(1, 240)));
                            let f4 = self.d(0, n, &[tn(n, a), t0(i), t0(j), t0(i2)], dd)?;
                            terms[6] += Self::product(&[&f4, &df10[j2]], dd).scaled(&(&w * rat(13, 240)));
                            let f5 = self.d(0, n, &[tn(n, a), t0(i), t0(j), t0(i2), t0(j2)], dd)?;
                            terms[7] += f5.scaled(&(&w * rat(1, 960)));
                        }
                    }
                }
            }
            const LABELS: [&str; 8] = [
                "F_{0,n+1} η F_{2,0}",
                "F_{0,n} η F_{2,1}",
                "−F_{0,n} η F_{0,0} η F_{2,0}",
                "7/10 F_{0,n} η F_{1,0} η F_{1,0}",
                "1/10 F_{0,n} η η F_{1,0}",
                "−1/240 F_{1,n} η F_{0,0} η",
                "13/240 F_{0,n} η η F_{1,0}",
                "1/960 F_{0,n} η η",
            ];
            let rhs = LABELS.iter().zip(terms).map(|(&label, value)| Term { label, value }).collect();
            components.push(Self::finish(lhs, rhs, vec![a], dd));
        }
        Ok(Residual::new(Relation::Trr2, None, Some(n), dd, components))
    }

    /// Runs one relation; `genus` applies to string/dilaton, `n` to the TRRs.
    pub fn check(&mut self, relation: Relation, genus: usize, n: u32, degree: u32) -> Result<Residual> {
        match relation {
            Relation::Wdvv => self.wdvv(degree),
            Relation::Const => self.const_relation(degree),
            Relation::String => self.string(genus, degree),
            Relation::Dilaton => self.dilaton(genus, degree),
            Relation::Trr0 => self.trr0(n, degree),
            Relation::Trr1 => self.trr1(n, degree),
            Relation::Trr2 => self.trr2(n, degree),
        }
    }
}

pub fn check_wdvv(alg: &CHAlgebra, degree: u32) -> Result<Residual> {
    Verifier::new(alg)?.wdvv(degree)
}

pub fn check_const_relation(alg: &CHAlgebra, degree: u32) -> Result<Residual> {
    Verifier::new(alg)?.const_relation(degree)
}

pub fn check_string(alg: &CHAlgebra, genus: usize, degree: u32) -> Result<Residual> {
    Verifier::new(alg)?.string(genus, degree)
}

pub fn check_dilaton(alg: &CHAlgebra, genus: usize, degree: u32) -> Result<Residual> {
    Verifier::new(alg)?.dilaton(genus, degree)
}

pub fn check_trr0(alg: &CHAlgebra, n: u32, degree: u32) -> Result<Residual> {
    Verifier::new(alg)?.trr0(n, degree)
}

pub fn check_trr1(alg: &CHAlgebra, n: u32, degree: u32) -> Result<Residual> {
    Verifier::new(alg)?.trr1(n, degree)
}

pub fn check_trr2(alg: &CHAlgebra, n: u32, degree: u32) -> Result<Residual> {
    Verifier::new(alg)?.trr2(n, degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::int;

    fn trivial() -> CHAlgebra {
        CHAlgebra::builtin("trivial").unwrap()
    }

    #[test]
    fn trivial_genus_one_trr_constant() {
        let r = check_trr1(&trivial(), 0, 0).unwrap();
        assert!(r.pass, "{r}");
        let c = &r.components[0];
        assert_eq!(c.lhs, Poly::constant(rat(1, 24)));
        assert_eq!(c.rhs[1].value, Poly::constant(rat(1, 24)));
        assert!(c.rhs[0].value.is_zero());
    }

    #[test]
    fn trivial_genus_two_trr_constant() {
        let r = check_trr2(&trivial(), 2, 0).unwrap();
        assert!(r.pass, "{r}");
        let c = &r.components[0];
        assert_eq!(c.lhs, Poly::constant(rat(1, 1152)));
        assert_eq!(c.rhs[5].value, Poly::constant(rat(-1, 5760)));
        assert_eq!(c.rhs[7].value, Poly::constant(rat(1, 960)));
    }

    #[test]
    fn trivial_dilaton_genus_one() {
        let r = check_dilaton(&trivial(), 1, 3).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.components[0].lhs.constant_term(), rat(1, 24));
    }

    #[test]
    fn trivial_const_is_one() {
        let r = check_const_relation(&trivial(), 4).unwrap();
        assert!(r.pass);
        assert_eq!(r.constant, Some(int(1)));
    }

    #[test]
    fn relation_names_roundtrip() {
        for r in Relation::ALL {
            assert_eq!(r.as_str().parse::<Relation>().unwrap(), r);
        }
        assert!("wdv".parse::<Relation>().is_err());
    }
}
