mod common;

use dgbv_core::algebra::CHAlgebra;
use dgbv_core::graded::{int, rat, Monomial, Poly, Rational, VarId};
use dgbv_core::potentials::PotentialTable;
use dgbv_core::verifier::{Relation, Residual, Verifier};
use dgbv_core::Error;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;

fn alg(name: &str) -> CHAlgebra {
    CHAlgebra::builtin(name).unwrap()
}

fn t(level: u32, slot: u32) -> VarId {
    VarId::new(level, slot)
}

fn assert_pass(r: &Residual) {
    assert!(r.pass, "{r}: witness {:?}", r.witness);
    for c in &r.components {
        assert!(c.residual.is_zero(), "{r}: nonzero residual for indices {:?}", c.indices);
    }
}

/// The checks of the equation suite: (relation, genus, n, D).
fn suite() -> Vec<(Relation, usize, u32, u32)> {
    let mut out = vec![(Relation::Wdvv, 0, 0, 5), (Relation::Const, 0, 0, 5)];
    for g in 0..=2 {
        let d = if g == 0 { 5 } else { 3 };
        out.push((Relation::String, g, 0, d));
        out.push((Relation::Dilaton, g, 0, d));
    }
    for n in 0..=2 {
        out.push((Relation::Trr0, 0, n, 5));
        out.push((Relation::Trr1, 0, n, 3));
        out.push((Relation::Trr2, 0, n, 3));
    }
    out
}

fn run_suite(name: &str) {
    let a = alg(name);
    let mut v = Verifier::new(&a).unwrap();
    for (r, g, n, d) in suite() {
        assert_pass(&v.check(r, g, n, d).unwrap());
    }
}

#[test]
fn equation_suite_trivial() {
    run_suite("trivial");
}

#[test]
fn equation_suite_frobenius2() {
    run_suite("frobenius2");
}

#[test]
fn equation_suite_p2() {
    run_suite("p2");
}

#[test]
fn equation_suite_hodge10() {
    run_suite("hodge10");
}

fn supertrace_term(r: &Residual) -> Rational {
    let term = r.components[0].rhs.iter().find(|t| t.label.starts_with("str")).unwrap();
    term.value.constant_term()
}

#[test]
fn worked_examples() {
    let triv = alg("trivial");
    let frob = alg("frobenius2");
    let mut v = Verifier::new(&triv).unwrap();
    assert_pass(&v.wdvv(4).unwrap());
    assert_pass(&v.string(0, 6).unwrap());
    assert_pass(&v.string(1, 5).unwrap());
    assert_pass(&v.dilaton(0, 6).unwrap());
    assert_pass(&v.trr0(0, 4).unwrap());
    assert_pass(&v.trr0(3, 4).unwrap());
    assert_pass(&v.trr1(2, 3).unwrap());
    assert_pass(&v.trr2(0, 2).unwrap());

    let c = v.const_relation(4).unwrap();
    assert_pass(&c);
    assert_eq!(c.constant, Some(int(1)));

    let dil = v.dilaton(1, 0).unwrap();
    assert_pass(&dil);
    assert_eq!(supertrace_term(&dil), rat(1, 24));

    let mut w = Verifier::new(&frob).unwrap();
    assert_pass(&w.wdvv(5).unwrap());
    assert_pass(&w.string(0, 4).unwrap());
    assert_pass(&w.trr0(1, 4).unwrap());
    assert_pass(&w.trr1(0, 3).unwrap());
    assert_pass(&w.trr2(0, 2).unwrap());
    let dil = w.dilaton(1, 3).unwrap();
    assert_pass(&dil);
    assert_eq!(supertrace_term(&dil), rat(2, 24));
    let c = w.const_relation(5).unwrap();
    assert_pass(&c);
    assert_eq!(c.constant, Some(int(0)));
}

#[test]
fn constant_term_identities() {
    let a = alg("trivial");
    let mut v = Verifier::new(&a).unwrap();
    // 1/24 = (1/12)(1/2)
    let r = v.trr1(0, 0).unwrap();
    assert_pass(&r);
    let c = &r.components[0];
    assert_eq!(c.lhs.constant_term(), rat(1, 24));
    let rhs: Rational = c.rhs.iter().map(|t| t.value.constant_term()).sum();
    assert_eq!(rhs, rat(1, 12) * rat(1, 2));
    // 1/(8·12²) = −(1/120)(1/48) + (1/120)(1/8)
    let r = v.trr2(2, 0).unwrap();
    assert_pass(&r);
    let c = &r.components[0];
    assert_eq!(c.lhs.constant_term(), rat(1, 8 * 144));
    let rhs: Rational = c.rhs.iter().map(|t| t.value.constant_term()).sum();
    assert_eq!(rhs, -rat(1, 120) * rat(1, 48) + rat(1, 120) * rat(1, 8));
}

#[test]
fn report_formatting() {
    let a = alg("trivial");
    let r = Verifier::new(&a).unwrap().trr2(2, 3).unwrap();
    assert_eq!(r.to_string(), "trr2(n=2) D=3: pass");
    let json = r.to_json();
    assert_eq!(json["pass"], serde_json::Value::Bool(true));
}

/// Potentials `(genus, level)` an equation reads.
fn inputs(r: Relation, genus: usize, n: u32) -> Vec<(usize, u32)> {
    match r {
        Relation::Wdvv | Relation::Const => vec![(0, 0)],
        Relation::String => (0..=5).map(|k| (genus, k)).collect(),
        Relation::Dilaton => vec![(genus, 0), (genus, 1)],
        Relation::Trr0 => vec![(0, n + 1), (0, n), (0, 0)],
        Relation::Trr1 => vec![(1, n + 1), (0, n), (1, 0), (0, 0)],
        Relation::Trr2 => {
            let mut v = vec![(2, n + 2), (2, 0), (2, 1), (0, n + 1), (0, n), (0, 0), (1, 0), (1, n)];
            v.sort();
            v.dedup();
            v
        }
    }
}

/// Every stable monomial of the shape of `F_{g,n}` (level-0 part of degree
/// `≤ max`, times one arrow variable of level `n` when `n ≥ 1`).
fn shapes(slots: u32, genus: usize, n: u32, max: u32) -> Vec<Monomial> {
    let mut layer = vec![Monomial::one()];
    let mut all = layer.clone();
    for _ in 0..max {
        let mut next: Vec<Monomial> = Vec::new();
        for m in &layer {
            for i in 0..slots {
                let x = m.mul(&Monomial::var(t(0, i)));
                if !next.contains(&x) {
                    next.push(x);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    let all: Vec<Monomial> = if n == 0 {
        all
    } else {
        all.iter().flat_map(|m| (0..slots).map(move |i| m.mul(&Monomial::var(t(n, i))))).collect()
    };
    all.into_iter().filter(|m| 2 * genus as u32 + m.degree() > 2).collect()
}

fn terms_differ(a: &Residual, b: &Residual) -> bool {
    a.components.iter().zip(&b.components).any(|(x, y)| {
        x.lhs != y.lhs || x.rhs.iter().zip(&y.rhs).any(|(p, q)| p.value != q.value)
    })
}

/// Inverse of the pairing on `H_0`, computed independently of the verifier.
fn eta_inverse(a: &CHAlgebra) -> Vec<Vec<Rational>> {
    let h0 = a.h0();
    let s = h0.len();
    let mut m: Vec<Vec<Rational>> = (0..s)
        .map(|i| {
            let mut row: Vec<Rational> = (0..s).map(|j| a.integrate_product(&[h0[i], h0[j]])).collect();
            row.extend((0..s).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..s {
        let p = (col..s).find(|&r| !m[r][col].is_zero()).expect("pairing is nondegenerate");
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..s {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    m.into_iter().map(|row| row[s..].to_vec()).collect()
}

/// Direct evaluation of WDVV and of the constant relation on an explicit
/// genus-0 potential: returns whether both sides agree up to degree `d`.
fn genus0_identity_holds(r: Relation, a: &CHAlgebra, f: &Poly, d: u32) -> bool {
    let s = a.h0().len() as u32;
    let eta = eta_inverse(a);
    let f3 = |x: u32, y: u32, z: u32| f.partial_many(&[t(0, x), t(0, y), t(0, z)]);
    let contract = |p: &dyn Fn(u32) -> Poly, q: &dyn Fn(u32) -> Poly| {
        let mut out = Poly::zero();
        for i in 0..s {
            for j in 0..s {
                let c = &eta[i as usize][j as usize];
                if !c.is_zero() {
                    out += (&p(i) * &q(j)).scaled(c);
                }
            }
        }
        out.truncate(d, 1)
    };
    match r {
        Relation::Wdvv => (0..s).all(|a_| {
            (0..s).all(|b| {
                (0..s).all(|c| {
                    (0..s).all(|e| {
                        contract(&|i| f3(a_, b, i), &|j| f3(j, c, e)) == contract(&|i| f3(a_, c, i), &|j| f3(j, b, e))
                    })
                })
            })
        }),
        Relation::Const => {
            let v = |i: u32| {
                let mut acc = Poly::zero();
                for k in 0..s {
                    for l in 0..s {
                        acc += f3(k, l, i).scaled(&eta[k as usize][l as usize]);
                    }
                }
                acc
            };
            let lhs = contract(&v, &v);
            let constant_only = lhs.terms().all(|(m, _)| m.degree() == 0);
            constant_only
        }
        _ => unreachable!(),
    }
}

/// Perturbs ten randomly drawn coefficients that the check actually reads
/// (the perturbation changes at least one side of the equation) and expects
/// every one to be caught. WDVV and the constant relation are nonlinear in
/// `F_0`: a perturbation may turn the potential into another solution, which
/// is then confirmed by direct evaluation. Small algebras may read fewer than
/// ten coefficients inside the window; then all of them are used.
fn mutation_sensitivity(name: &str, r: Relation, genus: usize, n: u32, d: u32, seed: u64) {
    let a = alg(name);
    let slots = a.h0().len() as u32;
    let mut v = Verifier::new(&a).unwrap();
    let base = v.check(r, genus, n, d).unwrap();
    assert_pass(&base);
    let mut candidates: Vec<(usize, u32, Monomial)> = inputs(r, genus, n)
        .into_iter()
        .flat_map(|(g, k)| shapes(slots, g, k, d + 5).into_iter().map(move |m| (g, k, m)))
        .collect();
    candidates.shuffle(&mut common::rng(seed));
    let mut caught = 0;
    let mut solutions = 0;
    for (g, k, m) in candidates {
        if caught + solutions == 10 {
            break;
        }
        v.table_mut().perturb(g, k, m.clone(), int(1));
        let res = v.check(r, genus, n, d).unwrap();
        v.table_mut().clear_perturbations();
        if !terms_differ(&res, &base) {
            continue;
        }
        if !res.pass {
            assert!(res.witness.is_some());
            caught += 1;
            continue;
        }
        assert!(
            matches!(r, Relation::Wdvv | Relation::Const),
            "{name}: perturbing F_{{{g},{k}}} by {m} went unnoticed by {res}"
        );
        let mut table = PotentialTable::new(&a).unwrap();
        let mut f = table.potential(0, 0, d as usize + 3).unwrap();
        f.add_term(m.clone(), int(1));
        assert!(genus0_identity_holds(r, &a, &f, d), "{name}: perturbing F_0 by {m} went unnoticed by {res}");
        solutions += 1;
    }
    if name == "p2" {
        assert_eq!(caught + solutions, 10, "{name} {r}: not enough readable coefficients");
    }
    assert!(caught >= 3, "{name} {r}: only {caught} of 10 perturbations were caught");
}

#[test]
fn mutations_wdvv() {
    mutation_sensitivity("p2", Relation::Wdvv, 0, 0, 4, 1);
}

#[test]
fn mutations_const() {
    mutation_sensitivity("p2", Relation::Const, 0, 0, 4, 2);
    mutation_sensitivity("trivial", Relation::Const, 0, 0, 4, 2);
}

#[test]
fn mutations_string() {
    for (name, g, d) in [("p2", 0, 4), ("p2", 1, 3), ("trivial", 2, 3), ("frobenius2", 0, 4)] {
        mutation_sensitivity(name, Relation::String, g, 0, d, 3);
    }
}

#[test]
fn mutations_dilaton() {
    for (name, g, d) in [("p2", 0, 4), ("p2", 1, 3), ("trivial", 2, 3), ("frobenius2", 1, 3)] {
        mutation_sensitivity(name, Relation::Dilaton, g, 0, d, 4);
    }
}

#[test]
fn mutations_trr0() {
    for (name, n, d) in [("p2", 0, 4), ("p2", 1, 3), ("trivial", 2, 4), ("frobenius2", 1, 4)] {
        mutation_sensitivity(name, Relation::Trr0, 0, n, d, 5);
    }
}

#[test]
fn mutations_trr1() {
    for (name, n, d) in [("p2", 0, 3), ("p2", 1, 3), ("trivial", 2, 3), ("frobenius2", 0, 3)] {
        mutation_sensitivity(name, Relation::Trr1, 0, n, d, 6);
    }
}

#[test]
fn mutations_trr2() {
    for (name, n, d) in [("p2", 0, 3), ("p2", 1, 2), ("trivial", 2, 3), ("frobenius2", 0, 2)] {
        mutation_sensitivity(name, Relation::Trr2, 0, n, d, 7);
    }
}

#[test]
fn quartic_perturbation_of_trivial_potential() {
    let a = alg("trivial");
    let mut v = Verifier::new(&a).unwrap();
    v.table_mut().perturb(0, 0, Monomial::from_vars([t(0, 0); 4]), rat(1, 24));
    let c = v.const_relation(4).unwrap();
    assert!(!c.pass);
    let w = c.witness.unwrap();
    assert_eq!(w.monomial, Monomial::var(t(0, 0)));
    assert_eq!(w.coefficient, int(2));
    // In rank one both sides of WDVV are the same product, so no potential
    // can violate it.
    assert_pass(&v.wdvv(4).unwrap());
}

#[test]
fn degree_window_is_complete() {
    for name in ["trivial", "frobenius2", "p2"] {
        let a = alg(name);
        let mut table = PotentialTable::new(&a).unwrap();
        for g in 0..=2usize {
            for n in 0..=3u32 {
                for l in 0..=4usize {
                    let small = table.potential(g, n, l).unwrap();
                    let big = table.potential(g, n, l + 2).unwrap();
                    let window = big.filter(|m| m.small_degree() as usize <= l);
                    assert_eq!(small, window, "{name} F_{{{g},{n}}} with {l} leaves");
                }
            }
        }
    }
}

#[test]
fn residuals_are_stable_under_deeper_windows() {
    let a = alg("p2");
    let mut v = Verifier::new(&a).unwrap();
    for (r, g, n, d) in [(Relation::Wdvv, 0, 0, 3), (Relation::String, 1, 0, 2), (Relation::Trr1, 0, 1, 2)] {
        let shallow = v.check(r, g, n, d).unwrap();
        let deep = v.check(r, g, n, d + 1).unwrap();
        for (s, dp) in shallow.components.iter().zip(&deep.components) {
            assert_eq!(s.lhs.truncate(d, 1), dp.lhs.truncate(d, 1));
        }
    }
}

#[test]
fn infeasible_degree_is_reported() {
    let a = alg("trivial");
    let table = PotentialTable::new(&a).unwrap().with_max_leaves(4);
    let mut v = Verifier::from_table(table).unwrap();
    assert!(matches!(v.trr2(0, 3), Err(Error::Budget(_))));
    assert!(v.wdvv(1).is_ok());
}

#[test]
fn odd_h0_is_rejected() {
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let a = common::random_grassmann_algebra(&mut rng, 1);
        if !a.h0_is_even() {
            assert!(matches!(Verifier::new(&a), Err(Error::Unsupported(_))));
            return;
        }
    }
    panic!("no algebra with odd H_0 was drawn");
}
