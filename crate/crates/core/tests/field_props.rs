mod common;

use proptest::prelude::*;
use rankseq::{FieldElem, FieldTower};

fn towers() -> Vec<FieldTower> {
    [(2, 1, 8), (2, 1, 24), (2, 1, 34), (3, 1, 5), (3, 2, 3), (5, 1, 4), (2, 3, 4), (7, 1, 1)]
        .iter()
        .map(|&(p, e, m)| FieldTower::build(p, e, m).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(idx in 0usize..8, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let t = &towers()[idx];
        let (a, b, c) = (
            t.elem(a % t.size()).unwrap(),
            t.elem(b % t.size()).unwrap(),
            t.elem(c % t.size()).unwrap(),
        );
        prop_assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
        prop_assert_eq!(t.add(t.add(a, b), c), t.add(a, t.add(b, c)));
        prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
        prop_assert_eq!(t.mul(a, b), t.mul(b, a));
        prop_assert_eq!(t.add(a, t.neg(a)), FieldElem::ZERO);
        prop_assert_eq!(t.sub(t.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(t.mul(a, t.inv(a).unwrap()), FieldElem::ONE);
        }
    }

    #[test]
    fn frobenius_is_automorphism(idx in 0usize..8, a in any::<u64>(), b in any::<u64>(), j in 0i64..40) {
        let t = &towers()[idx];
        let (a, b) = (t.elem(a % t.size()).unwrap(), t.elem(b % t.size()).unwrap());
        let j = j % t.m() as i64;
        prop_assert_eq!(t.frobenius(t.mul(a, b), j), t.mul(t.frobenius(a, j), t.frobenius(b, j)));
        prop_assert_eq!(t.frobenius(t.add(a, b), j), t.add(t.frobenius(a, j), t.frobenius(b, j)));
        prop_assert_eq!(t.frobenius(a, j), t.pow(a, t.q().pow(j as u32)));
    }

    #[test]
    fn automorphisms_commute(idx in 0usize..8, a in any::<u64>(), i in -50i64..50, j in -50i64..50) {
        let t = &towers()[idx];
        let a = t.elem(a % t.size()).unwrap();
        let ij = t.frobenius(t.frobenius(a, j), i);
        prop_assert_eq!(ij, t.frobenius(t.frobenius(a, i), j));
        prop_assert_eq!(ij, t.frobenius(a, (i + j).rem_euclid(t.m() as i64)));
        prop_assert_eq!(t.frobenius(a, t.m() as i64), a);
    }

    #[test]
    fn norm_properties(idx in 0usize..8, a in any::<u64>(), b in any::<u64>()) {
        let t = &towers()[idx];
        let (a, b) = (t.elem(a % t.size()).unwrap(), t.elem(b % t.size()).unwrap());
        let na = t.norm(a);
        prop_assert!(t.in_base_field(na));
        prop_assert_eq!(t.norm(t.mul(a, b)), t.mul(na, t.norm(b)));
        prop_assert_eq!(t.norm(t.frobenius(a, 1)), na);
        prop_assert_eq!(t.norm(t.automorphism(a, 1)), t.automorphism(na, 1));
    }
}

#[test]
fn subfield_sizes() {
    for (p, e, m) in [(2, 1, 12), (3, 1, 6), (2, 2, 6), (5, 1, 4)] {
        let t = FieldTower::build(p, e, m).unwrap();
        for d in (1..=m).filter(|d| m % d == 0) {
            let count = (0..t.size())
                .filter(|&x| t.in_subfield(t.elem(x).unwrap(), d).unwrap())
                .count() as u64;
            assert_eq!(count, t.q().pow(d), "p={p} e={e} m={m} d={d}");
            assert_eq!(t.subfield_elements(d).unwrap().len() as u64, count);
        }
    }
}

#[test]
fn subfield_basis_is_independent_power_basis() {
    for (p, e, m, d) in [(2, 1, 24, 12), (2, 1, 4, 2), (3, 1, 6, 3), (2, 2, 6, 3), (3, 1, 4, 1)] {
        let t = FieldTower::build(p, e, m).unwrap();
        let b = t.subfield_basis(d).unwrap();
        assert_eq!(b.len(), d as usize);
        assert_eq!(b[0], FieldElem::ONE);
        assert!(b.iter().all(|&x| t.in_subfield(x, d).unwrap()));
        assert_eq!(rankseq::linalg::q_rank(&t, &b), d as usize);
        if d > 1 {
            let beta = b[1];
            assert_eq!(t.element_order(beta).unwrap(), t.q().pow(d) - 1);
            for w in b.windows(2) {
                assert_eq!(w[1], t.mul(w[0], beta));
            }
        }
    }
}

#[test]
fn f16_subfield_basis_satisfies_quadratic() {
    let t = FieldTower::build(2, 1, 4).unwrap();
    let b = t.subfield_basis(2).unwrap();
    let beta = b[1];
    assert_eq!(t.add(t.add(t.mul(beta, beta), beta), FieldElem::ONE), FieldElem::ZERO);
}

#[test]
fn f9_exhaustive() {
    let t = FieldTower::build(3, 1, 2).unwrap();
    let mut order8 = 0;
    for x in 1..9 {
        let a = t.elem(x).unwrap();
        assert_eq!(t.mul(a, t.inv(a).unwrap()), FieldElem::ONE);
        let ord = t.element_order(a).unwrap();
        assert_eq!(8 % ord, 0);
        let brute = (1..=8).find(|&j| t.pow(a, j) == FieldElem::ONE).unwrap();
        assert_eq!(ord, brute);
        if ord == 8 {
            order8 += 1;
            assert_eq!(t.frobenius(a, 1), t.pow(a, 3));
            assert_eq!(t.norm(a), t.pow(a, 4));
            assert_eq!(t.norm(a), t.prime_elem(2));
        }
    }
    assert_eq!(order8, 4);
}

#[test]
fn canonical_modulus_is_deterministic_and_irreducible() {
    for (p, e, m) in [(2, 1, 14), (3, 2, 4), (5, 1, 3), (2, 1, 40)] {
        let a = FieldTower::build(p, e, m).unwrap();
        let b = FieldTower::build(p, e, m).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert!(rankseq::poly::is_irreducible(a.modulus(), p));
        assert_eq!(a.modulus().len(), (e * m) as usize + 1);
    }
}

#[test]
fn labels_need_three_parts() {
    assert_eq!(FieldTower::parse_label("2^1^14").unwrap(), (2, 1, 14));
    assert!(FieldTower::parse_label("2^14").is_err());
    assert_eq!(FieldTower::build(3, 2, 5).unwrap().label(), "3^2^5");
}

#[test]
fn arithmetic_guard() {
    assert!(FieldTower::build(2, 1, 41).is_err());
    assert!(FieldTower::build(4, 1, 3).is_err());
    let t = FieldTower::build(2, 1, 30).unwrap();
    assert!(t.subfield_elements(30).unwrap_err().is_scale_guard());
}
