use dgbv_core::algebra::{derive_ops, CHAlgebra};
use dgbv_core::graded::{GradedVector, Monomial, Poly, Rational, VarId};
use dgbv_core::graph::{canonical_form, is_valid_descendant_graph, is_valid_sm_graph, vertex_profile, EdgeMark};
use dgbv_core::potentials::{enumerate_desc, enumerate_sm, Enumerator, PotentialTable, WeightedGraphClass};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn ratio(n: BigInt, d: BigInt) -> Rational {
    Rational::new(n, d)
}

fn id_loops_at_special(c: &WeightedGraphClass) -> usize {
    let special = c.graph.leaves().iter().find(|l| l.mark.is_arrow()).map(|l| l.vertex);
    special.map_or(0, |v| vertex_profile(&c.graph, v).g_prime)
}

fn check_weights(classes: &[WeightedGraphClass]) {
    for c in classes {
        let g_prime = id_loops_at_special(c);
        let scale = Rational::from_integer(BigInt::from(c.automorphisms) * BigInt::from(12).pow(g_prime as u32));
        assert_eq!(&c.weight * scale, Rational::one(), "{}", c.graph.to_json());
        assert!(BigInt::from(c.automorphisms) <= factorial(c.graph.half_edge_count() as u64));
    }
}

#[test]
fn weights_are_inverse_automorphism_orders() {
    let mut e = Enumerator::new();
    for g in 0..=3 {
        for l in 0..=5 {
            check_weights(&e.sm(g, l));
        }
    }
    for g in 0..=2 {
        for n in 1..=4 {
            for l in 0..=4 {
                check_weights(&e.desc(g, n, l));
            }
        }
    }
}

/// Trivalent trees with `L` labeled leaves number `(2L−5)!!`, so the
/// orbit-weighted count of unlabeled ones is `(2L−5)!!/L!`.
#[test]
fn tree_weights_sum_to_double_factorials() {
    let mut e = Enumerator::new();
    for l in 3..=10u64 {
        let total: Rational = e.sm(0, l as usize).iter().map(|c| c.weight.clone()).sum();
        let double_factorial: BigInt = (1..=2 * l - 5).step_by(2).map(BigInt::from).product();
        assert_eq!(total, ratio(double_factorial, factorial(l)), "L = {l}");
    }
}

#[test]
fn classes_are_valid_and_distinct() {
    let mut e = Enumerator::new();
    for g in 0..=3 {
        for l in 0..=5 {
            let classes = e.sm(g, l);
            for c in &classes {
                assert!(is_valid_sm_graph(&c.graph, g));
                assert_eq!(c.graph.leaves().len(), l);
            }
            let mut forms: Vec<_> = classes.iter().map(|c| canonical_form(&c.graph)).collect();
            forms.sort();
            forms.dedup();
            assert_eq!(forms.len(), classes.len());
        }
    }
    for g in 0..=2 {
        for n in 1..=5 {
            for l in 0..=4 {
                let classes = e.desc(g, n, l);
                for c in &classes {
                    let v = is_valid_descendant_graph(&c.graph, g, n);
                    assert!(v.valid, "{:?}", v.problems);
                    assert_eq!(c.graph.leaves().len(), l + 1);
                    assert!(c.graph.edges().iter().all(|e| matches!(e.mark, EdgeMark::GG | EdgeMark::IdLoop)));
                }
                let mut forms: Vec<_> = classes.iter().map(|c| canonical_form(&c.graph)).collect();
                forms.sort();
                forms.dedup();
                assert_eq!(forms.len(), classes.len());
            }
        }
    }
}

/// Lists do not depend on what was enumerated before, so the list for `L`
/// leaves is the same whether or not `L + 1` was requested first.
#[test]
fn enumeration_is_monotone() {
    let mut warm = Enumerator::new();
    for g in 0..=2 {
        for l in (0..=5).rev() {
            let a: Vec<_> = warm.sm(g, l).iter().map(|c| (canonical_form(&c.graph), c.weight.clone())).collect();
            let b: Vec<_> = enumerate_sm(g, l).iter().map(|c| (canonical_form(&c.graph), c.weight.clone())).collect();
            assert_eq!(a, b);
        }
        for n in 1..=3 {
            for l in (0..=4).rev() {
                let a: Vec<_> = warm.desc(g, n, l).iter().map(|c| (canonical_form(&c.graph), c.weight.clone())).collect();
                let b: Vec<_> = enumerate_desc(g, n, l).iter().map(|c| (canonical_form(&c.graph), c.weight.clone())).collect();
                assert_eq!(a, b);
            }
        }
    }
}

/// All multisets of `size` elements of `0..slots`, as exponent vectors.
fn exponent_vectors(slots: usize, size: usize) -> Vec<Vec<usize>> {
    if slots == 1 {
        return vec![vec![size]];
    }
    (0..=size)
        .flat_map(|first| {
            exponent_vectors(slots - 1, size - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// With `H_4 = ∅` only single-vertex graphs survive:
/// `F_{0,0} = ∫E_0³/3!` (the lone trivalent vertex), `F_{g≥1,0} = 0`, and for `n ≥ 1`
/// `F_{g,n} = ∫E_n E_0^K χ^g/(g!·24^g·K!)` with `K = n + 2 − 3g` and
/// `χ = Σ g^{ij} e_i e_j` the contracted identity loop.
fn direct_moments(a: &CHAlgebra, genus: usize, n: u32, max_leaves: usize) -> Poly {
    let h0 = a.h0();
    let d = derive_ops(a).unwrap();
    let mut chi = GradedVector::zero();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let c = &d.gram_inv[(i, j)];
            if !c.is_zero() {
                chi = chi.add(&a.mul(&GradedVector::basis(i), &GradedVector::basis(j)).scaled(c));
            }
        }
    }
    let mut out = Poly::zero();
    let sizes: Vec<usize> = if n == 0 {
        if genus > 0 {
            return out;
        }
        (3..=max_leaves.min(3)).collect()
    } else {
        match (n as i64 + 2 - 3 * genus as i64).try_into() {
            Ok(k) if k <= max_leaves => vec![k],
            _ => return out,
        }
    };
    let arrows: Vec<Option<usize>> = if n == 0 { vec![None] } else { (0..h0.len()).map(Some).collect() };
    for k in sizes {
        for exps in exponent_vectors(h0.len(), k) {
            for &arrow in &arrows {
                let mut v = GradedVector::basis(a.unit());
                let mut m = Monomial::one();
                let mut denom = BigInt::one();
                for (slot, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        v = a.mul(&v, &GradedVector::basis(h0[slot]));
                        m = m.mul(&Monomial::var(VarId::new(0, slot as u32)));
                    }
                    denom *= factorial(e as u64);
                }
                if let Some(j) = arrow {
                    v = a.mul(&v, &GradedVector::basis(h0[j]));
                    m = m.mul(&Monomial::var(VarId::new(n, j as u32)));
                }
                for _ in 0..genus {
                    v = a.mul(&v, &chi);
                }
                denom *= factorial(genus as u64) * BigInt::from(24).pow(genus as u32);
                out.add_term(m, a.integrate(&v) * ratio(BigInt::one(), denom));
            }
        }
    }
    out
}

#[test]
fn empty_h4_collapses_to_moments() {
    for name in ["frobenius2", "p2"] {
        let a = CHAlgebra::builtin(name).unwrap();
        assert!(a.is_h4_empty());
        let mut table = PotentialTable::new(&a).unwrap();
        for g in 0..=2 {
            for n in 0..=5 {
                let l = 5;
                assert_eq!(table.potential(g, n, l).unwrap(), direct_moments(&a, g, n, l), "{name} F_{{{g},{n}}}");
            }
        }
    }
}

#[test]
fn frobenius2_genus_one_is_the_euler_class() {
    let a = CHAlgebra::builtin("frobenius2").unwrap();
    let mut table = PotentialTable::new(&a).unwrap();
    // χ = 2e_2, so ∫E_1 χ/24 = T_{1,1}/12 and F_2 vanishes with χ² = 0.
    let f11 = table.potential(1, 1, 3).unwrap();
    assert_eq!(f11, Poly::term(Monomial::var(VarId::new(1, 0)), Rational::new(1.into(), 12.into())));
    assert!(table.potential(1, 0, 4).unwrap().is_zero());
    for n in 0..=5 {
        assert!(table.potential(2, n, 4).unwrap().is_zero());
    }
    assert_eq!(table.potential(0, 0, 3).unwrap().coeff(&Monomial::from_vars([VarId::new(0, 0), VarId::new(0, 0), VarId::new(0, 1)])), Rational::new(1.into(), 2.into()));
}
