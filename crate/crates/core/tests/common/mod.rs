#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankseq::codes::{self, AlphaSel, EtaSel};
use rankseq::{Code, CodeSpec, Family, FieldElem, FieldTower, Mat};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tower(p: u64, e: u32, m: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::build(p, e, m).unwrap())
}

/// Uniform k-dimensional code of length n (rejection-sampled generator).
pub fn random_code<R: Rng>(t: &Arc<FieldTower>, n: usize, k: usize, rng: &mut R) -> Code {
    loop {
        let data = (0..n * k).map(|_| t.random(rng)).collect();
        let g = Mat::new(t.clone(), k, n, data).unwrap();
        if let Ok(c) = Code::from_generator(&g, None) {
            return c;
        }
    }
}

/// n entries of F_{q^m} that are F_q-independent.
pub fn random_alpha<R: Rng>(t: &FieldTower, n: usize, rng: &mut R) -> Vec<FieldElem> {
    loop {
        let v: Vec<_> = (0..n).map(|_| t.random(rng)).collect();
        if rankseq::linalg::q_rank(t, &v) == n {
            return v;
        }
    }
}

pub fn explicit(v: &[FieldElem]) -> AlphaSel {
    AlphaSel::Explicit(v.iter().map(|x| x.enc()).collect())
}

/// F_q-rank by counting the F_q-span of v: |span| = q^rank.
pub fn brute_q_rank(t: &FieldTower, v: &[FieldElem]) -> usize {
    let base: Vec<FieldElem> = (0..t.size())
        .map(|x| t.elem(x).unwrap())
        .filter(|&x| t.in_base_field(x))
        .collect();
    let mut span: HashSet<FieldElem> = HashSet::from([FieldElem::ZERO]);
    for &x in v {
        let mut next = HashSet::new();
        for &s in &span {
            for &c in &base {
                next.insert(t.add(s, t.mul(c, x)));
            }
        }
        span = next;
    }
    let mut r = 0;
    let mut size = 1usize;
    while size < span.len() {
        size *= t.q() as usize;
        r += 1;
    }
    assert_eq!(size, span.len(), "span size is a power of q");
    r
}

/// A spread of constructed instances covering all four families.
pub fn family_specs() -> Vec<CodeSpec> {
    vec![
        CodeSpec::new(Family::Gabidulin, 2, 8, 8, 3),
        CodeSpec::new(Family::Gabidulin, 2, 8, 6, 2).with_s(3),
        CodeSpec::new(Family::Gabidulin, 3, 5, 5, 2).with_s(2),
        CodeSpec::new(Family::Gabidulin, 4, 3, 3, 1).with_e(2),
        CodeSpec::new(Family::SheekeyTwisted, 3, 6, 6, 3),
        CodeSpec::new(Family::SheekeyTwisted, 2, 8, 8, 4).with_s(5),
        CodeSpec::new(Family::SheekeyTwisted, 3, 4, 4, 2).with_eta(EtaSel::Single(5)),
        CodeSpec::new(Family::GeneralizedTwisted, 2, 16, 8, 3).with_twists(vec![1], vec![2]),
        CodeSpec::new(Family::GeneralizedTwisted, 2, 12, 6, 2)
            .with_s(5)
            .with_twists(vec![0], vec![3]),
        CodeSpec::new(Family::GeneralizedTwisted, 2, 8, 8, 4).with_twists(vec![0, 2], vec![1, 3]),
        CodeSpec::new(Family::GabidulinNew, 3, 6, 6, 4),
        CodeSpec::new(Family::GabidulinNew, 2, 7, 7, 5).with_s(3),
    ]
}

pub fn family_codes() -> Vec<Code> {
    family_specs()
        .iter()
        .map(|s| codes::build(s).unwrap_or_else(|e| panic!("{s:?}: {e}")))
        .collect()
}

/// Every exponent j in [1, m) with gcd(j, m) = 1.
pub fn generators(m: u32) -> Vec<i64> {
    (1..m as i64).filter(|&j| gcd(j, m as i64) == 1).collect()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Every way the τ-sum sequence of `c` (τ = x -> x^(q^s)) breaks the
/// structural laws: bounds, S_{i+j} = S_i(S_j), plateau iff the sum is
/// defined over the fixed field, persistence, stabilization by n − k, and
/// non-increasing increments bounded by k.
pub fn sequence_law_violations(c: &Code, s: i64) -> Vec<String> {
    use rankseq::invariants::{sigma_sequence, sigma_space};
    use rankseq::linalg::row_space_equal;

    let mut bad = Vec::new();
    let (n, k) = (c.n(), c.k());
    let t = c.tower();
    let d = sigma_sequence(c, s, Some(n + 2)).dims;
    let mut check = |ok: bool, what: &str| {
        if !ok {
            bad.push(format!("{what}: s={s} dims={d:?}"));
        }
    };
    check(d[0] == k, "s_0 = k");
    for w in d.windows(2) {
        check(k <= w[0] && w[0] <= w[1] && w[1] <= n, "monotone within [k, n]");
        check(w[1] - w[0] <= k, "increment at most k");
    }
    for w in d.windows(3) {
        check(w[2] - w[1] <= w[1] - w[0], "increments non-increasing");
    }
    for i in n - k..d.len() {
        check(d[i] == d[n - k], "constant from n - k");
    }
    let mut plateau = false;
    for i in 0..d.len() - 1 {
        if plateau {
            check(d[i + 1] == d[i], "plateau persists");
        }
        let si = sigma_space(c, s, i);
        let fixed = si.gen().entries().iter().all(|&x| t.frobenius(x, s) == x);
        check((d[i] == d[i + 1]) == fixed, "plateau iff basis over the fixed field");
        plateau |= d[i] == d[i + 1];
    }
    for i in 0..3 {
        for j in 0..3 {
            let lhs = sigma_space(c, s, i + j);
            let rhs = sigma_space(&sigma_space(c, s, j), s, i);
            check(row_space_equal(lhs.gen(), rhs.gen()).unwrap(), "S_(i+j) = S_i(S_j)");
        }
    }
    check(sigma_sequence(c, s, None).dims == d[..=n - k], "default length n - k");
    bad
}
