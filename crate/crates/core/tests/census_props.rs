mod common;

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rankseq::census::{
    self, census_in, enumerate_triples, euler_phi, gabidulin_class_count, orbit_count_x,
    sheekey_class_count, AutoSet, CensusField, CensusOptions,
};
use rankseq::codes::{self, mrd_norm_condition};
use rankseq::invariants::{distinguish, fingerprint};
use rankseq::{FieldElem, FieldTower, Verdict};

/// Totient from the prime factorization.
fn phi_by_factors(mut m: u64) -> u64 {
    let mut out = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out = out / p * (p - 1);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out = out / m * (m - 1);
    }
    out
}

#[test]
fn totient_agrees_with_factor_formula() {
    for m in 1..400 {
        assert_eq!(euler_phi(m).unwrap(), phi_by_factors(m), "m={m}");
    }
}

#[test]
fn triple_count_two_ways() {
    for n in 7..=18usize {
        let m = 2 * n as u32;
        let valid_s = (1..n as u64).filter(|&s| common::gcd(s as i64, m as i64) == 1).count();
        for k in 3..n - 2 {
            let triples = enumerate_triples(m, n, k).unwrap();
            assert_eq!(triples.len(), valid_s * k * (n - k), "n={n} k={k}");
            let distinct: HashSet<_> = triples.iter().collect();
            assert_eq!(distinct.len(), triples.len());
            assert!(triples.iter().all(|tr| tr.h < k && (1..=n - k).contains(&tr.t)));
            if let Some((_, b)) = census::reference_bounds(n, k) {
                assert_eq!(b as usize, triples.len());
            }
        }
    }
    assert_eq!(euler_phi(34).unwrap(), 16);
}

/// |X| by Burnside: the average number of valid points fixed by each group element.
fn burnside(t: &FieldTower, k: usize) -> u64 {
    let deg = t.degree() as i64;
    let valid: Vec<FieldElem> = (1..t.size())
        .map(|x| t.elem(x).unwrap())
        .filter(|&x| mrd_norm_condition(t, x, k))
        .collect();
    let fixed: usize = (0..deg)
        .map(|g| valid.iter().filter(|&&x| t.automorphism(x, g) == x).count())
        .sum();
    assert_eq!(fixed % deg as usize, 0);
    (fixed / deg as usize) as u64
}

/// |X| as the number of valid points that are the smallest encoding in their orbit.
fn orbit_minima(t: &FieldTower, k: usize) -> u64 {
    (1..t.size())
        .map(|x| t.elem(x).unwrap())
        .filter(|&x| mrd_norm_condition(t, x, k))
        .filter(|&x| (1..t.degree() as i64).all(|g| t.automorphism(x, g).enc() >= x.enc()))
        .count() as u64
}

#[test]
fn orbit_counts_three_ways() {
    for (p, e, m, k) in [(3, 1, 2, 1), (3, 1, 4, 2), (3, 1, 8, 4), (5, 1, 3, 1), (2, 2, 3, 1), (2, 2, 4, 2), (3, 2, 2, 1), (7, 1, 2, 1)] {
        let t = FieldTower::build(p, e, m).unwrap();
        let q = t.q();
        let got = orbit_count_x(q, e, m, k).unwrap();
        assert_eq!(got, burnside(&t, k), "q={q} m={m} k={k}");
        assert_eq!(got, orbit_minima(&t, k), "q={q} m={m} k={k}");
    }
    assert_eq!(orbit_count_x(3, 1, 2, 1).unwrap(), 2);
    for m in 3..10 {
        assert_eq!(orbit_count_x(2, 1, m, 1).unwrap(), 0);
    }
}

#[test]
fn class_count_shapes() {
    assert_eq!(gabidulin_class_count(8, 3).unwrap(), 2);
    for (q, m, k) in [(3, 6, 3), (3, 7, 3), (3, 8, 4), (5, 6, 3), (2, 9, 4)] {
        let c = sheekey_class_count(q, 1, m, k).unwrap();
        let half = euler_phi(m as u64).unwrap() / 2;
        assert_eq!(c % half, 0);
        assert_eq!(c, half * orbit_count_x(q, 1, m, k).unwrap());
    }
    assert_eq!(sheekey_class_count(2, 1, 9, 4).unwrap(), 0);
}

#[test]
fn census_rows_are_deterministic() {
    let opts = CensusOptions::new(2);
    for (n, k) in [(7, 3), (8, 4), (9, 5)] {
        let a = census::census_report(n, k, &opts).unwrap();
        let b = census::census_report(n, k, &opts).unwrap();
        assert_eq!((a.row.a, a.row.b, a.row.eta), (b.row.a, b.row.b, b.row.eta));
        let digests = |r: &census::CensusReport| {
            r.classes.iter().map(|c| (c.digest.clone(), c.members.clone())).collect::<Vec<_>>()
        };
        assert_eq!(digests(&a), digests(&b));
        assert!(0 < a.row.a && a.row.a <= a.row.b);
        assert_eq!(a.classes.iter().map(|c| c.members.len()).sum::<usize>(), a.row.b);
    }
}

#[test]
fn fewer_automorphisms_never_split_classes() {
    let field = CensusField::new(&CensusOptions::new(2), 9).unwrap();
    let k = 4;
    let triples = enumerate_triples(18, 9, k).unwrap();
    let full = AutoSet::GeneratorsOfM.exponents(18, 9);
    let count = |exps: &[i64]| {
        triples
            .iter()
            .map(|&tr| field.fingerprint(k, tr, exps).unwrap())
            .collect::<HashSet<_>>()
            .len()
    };
    let mut prev = count(&full);
    let mut exps = full.clone();
    while exps.len() > 1 {
        exps.pop();
        let a = count(&exps);
        assert!(a <= prev);
        prev = a;
    }
}

#[test]
fn distinct_fingerprints_are_distinguished() {
    let mut g = common::rng(30);
    for (n, k) in [(7, 3), (9, 4), (10, 5)] {
        let field = CensusField::new(&CensusOptions::new(2), n).unwrap();
        let m = 2 * n as u32;
        let exps = AutoSet::GeneratorsOfM.exponents(m, n);
        let triples = enumerate_triples(m, n, k).unwrap();
        let mut checked = 0;
        while checked < 50 {
            let pair: Vec<_> = triples.choose_multiple(&mut g, 2).copied().collect();
            let codes: Vec<_> = pair
                .iter()
                .map(|&tr| {
                    let spec = field.spec(k, tr);
                    codes::build_resolved(&field.tower, &spec, &field.alpha, &[field.eta]).unwrap()
                })
                .collect();
            let (fa, fb) = (fingerprint(&codes[0], &exps).unwrap(), fingerprint(&codes[1], &exps).unwrap());
            let verdict = distinguish(&codes[0], &codes[1], &exps).unwrap();
            assert_eq!(verdict == Verdict::Inequivalent, fa != fb);
            checked += 1;
        }
    }
}

#[test]
fn census_code_uses_subfield_alpha_and_outside_eta() {
    let field = CensusField::new(&CensusOptions::new(2), 8).unwrap();
    assert!(field.alpha.iter().all(|&a| field.tower.in_subfield(a, 8).unwrap()));
    assert!(!field.tower.in_subfield(field.eta, 8).unwrap());
    let smallest = (1..field.tower.size())
        .find(|&x| !field.tower.in_subfield(field.tower.elem(x).unwrap(), 8).unwrap())
        .unwrap();
    assert_eq!(field.eta.enc(), smallest);
}

#[test]
fn tsv_layout() {
    let rows = census::table1(7..=8, &CensusOptions::new(2)).unwrap();
    let tsv = census::format_table_tsv(&rows);
    let lines: Vec<_> = tsv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("n\\k\t3\t4"));
    assert!(lines[1].starts_with("7\t"));
    let row7: Vec<_> = lines[1].split('\t').collect();
    assert_eq!(row7.len(), 15);
    assert!(row7[1].contains(" / 36"));
    let mut single = census_in(&CensusField::new(&CensusOptions::new(2), 7).unwrap(), 3, AutoSet::GeneratorsOfN)
        .unwrap()
        .row;
    single.a += 1;
    assert!(census::format_table_tsv(&[single]).contains("k3:+1"));
}
