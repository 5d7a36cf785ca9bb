use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Formal variable `T_{level, slot}`; `slot` is a 0-based position in the
/// `H_0` basis list and is printed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub level: u32,
    pub slot: u32,
}

impl VarId {
    pub fn new(level: u32, slot: u32) -> Self {
        VarId { level, slot }
    }

    pub fn is_arrow(self) -> bool {
        self.level > 0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}_{}", self.level, self.slot + 1)
    }
}

/// Commutative monomial: variables sorted by `(level, slot)` with positive
/// exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        let mut m = Monomial::one();
        for v in vars {
            m.mul_var(v, 1);
        }
        m
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0.binary_search_by_key(&v, |&(w, _)| w).map_or(0, |k| self.0[k].1)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Number of factors with level ≥ 1.
    pub fn arrow_degree(&self) -> u32 {
        self.0.iter().filter(|(v, _)| v.is_arrow()).map(|&(_, e)| e).sum()
    }

    /// Number of factors with level 0.
    pub fn small_degree(&self) -> u32 {
        self.degree() - self.arrow_degree()
    }

    pub fn mul_var(&mut self, v: VarId, e: u32) {
        if e == 0 {
            return;
        }
        match self.0.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(k) => self.0[k].1 += e,
            Err(k) => self.0.insert(k, (v, e)),
        }
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + rhs.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), rhs.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va == vb {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    } else if va < vb {
                        out.push((va, ea));
                        a.next();
                    } else {
                        out.push((vb, eb));
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&x)) => {
                    out.push(x);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Formal derivative: `(exponent, m / v)` or `None` if `v` is absent.
    pub fn derive(&self, v: VarId) -> Option<(u32, Monomial)> {
        let k = self.0.binary_search_by_key(&v, |&(w, _)| w).ok()?;
        let e = self.0[k].1;
        let mut out = self.clone();
        if e == 1 {
            out.0.remove(k);
        } else {
            out.0[k].1 -= 1;
        }
        Some((e, out))
    }

    /// Variables with multiplicity, in canonical order.
    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with exact rational coefficients in commuting variables
/// `T_{n,i}`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scaled(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Multiplies every monomial by a fixed monomial.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect() }
    }

    /// Highest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn max_arrow_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::arrow_degree).max()
    }

    pub fn partial(&self, v: VarId) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.derive(v) {
                out.add_term(rest, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    pub fn partial_many(&self, vs: &[VarId]) -> Poly {
        vs.iter().fold(self.clone(), |p, &v| p.partial(v))
    }

    pub fn truncate(&self, total_degree: u32, arrow_degree: u32) -> Poly {
        self.filter(|m| m.degree() <= total_degree && m.arrow_degree() <= arrow_degree)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// A lowest-degree surviving term, used as a failure witness.
    pub fn lowest_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().min_by_key(|(m, _)| (m.degree(), (*m).clone()))
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

pub fn poly_partial(p: &Poly, v: VarId) -> Poly {
    p.partial(v)
}

pub fn poly_truncate(p: &Poly, total_degree: u32, arrow_degree: u32) -> Poly {
    p.truncate(total_degree, arrow_degree)
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            for (m, c) in lhs.terms {
                self.add_term(m, c);
            }
        } else {
            for (m, c) in rhs.terms {
                self.add_term(m, c);
            }
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;

    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |a, b| a + b)
    }
}

/// Canonical text form: `c*T0_1^3 + c*T1_1`, terms in monomial order,
/// coefficients always written, zero written as `0`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(c))?;
            } else {
                write!(f, "{}*{m}", fmt_rational(c))?;
            }
        }
        Ok(())
    }
}

fn parse_var(s: &str) -> Result<VarId> {
    let bad = || Error::Parse(format!("invalid variable {s:?}"));
    let rest = s.strip_prefix('T').ok_or_else(bad)?;
    let (level, slot) = rest.split_once('_').ok_or_else(bad)?;
    let level: u32 = level.parse().map_err(|_| bad())?;
    let slot: u32 = slot.parse().map_err(|_| bad())?;
    if slot == 0 {
        return Err(bad());
    }
    Ok(VarId::new(level, slot - 1))
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Poly> {
        let s = s.trim();
        let mut p = Poly::zero();
        if s == "0" {
            return Ok(p);
        }
        for term in s.split(" + ") {
            let mut parts = term.trim().split('*');
            let coeff = parse_rational(parts.next().unwrap_or(""))?;
            let mut m = Monomial::one();
            for factor in parts {
                let (v, e) = match factor.split_once('^') {
                    Some((v, e)) => {
                        let e: u32 = e.parse().map_err(|_| Error::Parse(format!("invalid exponent in {factor:?}")))?;
                        (v, e)
                    }
                    None => (factor, 1),
                };
                m.mul_var(parse_var(v)?, e);
            }
            p.add_term(m, coeff);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    vars: Vec<[u32; 2]>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    terms: Vec<JsonTerm>,
}

/// JSON form `{"terms":[{"vars":[[n,i],...],"coeff":"p/q"}]}` with 1-based
/// slots and repeated variables for powers.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm { vars: m.vars().map(|v| [v.level, v.slot + 1]).collect(), coeff: fmt_rational(c) })
            .collect();
        JsonPoly { terms }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Poly, D::Error> {
        use serde::de::Error as _;
        let raw = JsonPoly::deserialize(deserializer)?;
        let mut p = Poly::zero();
        for t in raw.terms {
            let mut m = Monomial::one();
            for [n, i] in t.vars {
                if i == 0 {
                    return Err(D::Error::custom("variable slots are 1-based"));
                }
                m.mul_var(VarId::new(n, i - 1), 1);
            }
            p.add_term(m, parse_rational(&t.coeff).map_err(D::Error::custom)?);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{int, rat};

    fn t(level: u32) -> VarId {
        VarId::new(level, 0)
    }

    fn pow(v: VarId, e: u32) -> Monomial {
        let mut m = Monomial::one();
        m.mul_var(v, e);
        m
    }

    #[test]
    fn power_rule() {
        let p = Poly::term(pow(t(0), 3), rat(1, 6));
        assert_eq!(poly_partial(&p, t(0)), Poly::term(pow(t(0), 2), rat(1, 2)));
    }

    #[test]
    fn partial_in_other_variable() {
        let p = Poly::term(pow(t(0), 3).mul(&Monomial::var(t(1))), rat(1, 6));
        assert_eq!(poly_partial(&p, t(1)), Poly::term(pow(t(0), 3), rat(1, 6)));
        assert!(poly_partial(&Poly::constant(int(5)), t(0)).is_zero());
    }

    #[test]
    fn truncation() {
        let p = Poly::term(pow(t(0), 3), int(1)) + Poly::term(pow(t(0), 7), int(1));
        assert_eq!(poly_truncate(&p, 5, 0), Poly::term(pow(t(0), 3), int(1)));
        let q = Poly::var(t(1)) * Poly::var(t(2));
        assert!(poly_truncate(&q, 10, 1).is_zero());
        let r = Poly::term(pow(t(0), 2).mul(&Monomial::var(t(1))), int(1));
        assert_eq!(poly_truncate(&r, 3, 1), r);
    }

    #[test]
    fn text_roundtrip() {
        let p = Poly::term(pow(t(0), 3), rat(1, 6))
            + Poly::term(Monomial::var(VarId::new(1, 1)), rat(-1, 24))
            + Poly::constant(int(2));
        let s = p.to_string();
        assert_eq!(s, "2 + 1/6*T0_1^3 + -1/24*T1_2");
        assert_eq!(s.parse::<Poly>().unwrap(), p);
        assert_eq!(Poly::zero().to_string(), "0");
        assert!("0".parse::<Poly>().unwrap().is_zero());
        assert!("1*T0_0".parse::<Poly>().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let p = Poly::term(pow(t(0), 2).mul(&Monomial::var(VarId::new(2, 1))), rat(3, 4));
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"terms":[{"vars":[[0,1],[0,1],[2,2]],"coeff":"3/4"}]}"#);
        assert_eq!(serde_json::from_str::<Poly>(&j).unwrap(), p);
    }

    #[test]
    fn cancellation() {
        let p = Poly::var(t(0));
        assert!((&p - &p).is_zero());
    }
}
