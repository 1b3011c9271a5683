//! Frobenius-sum invariants of F_{q^m}-linear codes.
//!
//! For a code C and an automorphism τ = x -> x^(q^s), the spaces
//! S_i = C + τ(C) + … + τ^i(C) have dimensions that only depend on the
//! semilinear equivalence class of C. Collecting those sequences over a set
//! of automorphisms gives a [`Fingerprint`]; two codes with different
//! fingerprints cannot be equivalent.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codes::{self, Code, CodeSpec, Family};
use crate::error::{Error, Result};
use crate::ff::FieldTower;
use crate::linalg::{self, Mat, RowSpace};

/// Dimensions s_0, s_1, … of the τ-sums, τ = x -> x^(q^auto_exp).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaSequence {
    pub auto_exp: i64,
    pub dims: Vec<usize>,
}

impl SigmaSequence {
    pub fn get(&self, i: usize) -> Option<usize> {
        self.dims.get(i).copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FingerprintContext {
    pub q: u64,
    pub e: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
}

/// Sequences over a fixed, ascending set of automorphism exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub context: FingerprintContext,
    pub sequences: Vec<SigmaSequence>,
}

impl Fingerprint {
    /// Canonical byte serialization (compact JSON, fields in declaration order).
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("fingerprint serializes")
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_bytes()))
    }
}

/// Outcome of the one-sided equivalence test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Inequivalent,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Inequivalent => "INEQUIVALENT",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

fn context(c: &Code) -> FingerprintContext {
    let t = c.tower();
    FingerprintContext {
        q: t.q(),
        e: t.e(),
        m: t.m(),
        n: c.n(),
        k: c.k(),
    }
}

fn insert_image(rs: &mut RowSpace, gen: &Mat, tower: &FieldTower, j: i64) {
    let mut row = Vec::with_capacity(gen.cols());
    for r in gen.row_iter() {
        if rs.dim() == rs.cols() {
            return;
        }
        row.clear();
        row.extend(r.iter().map(|&x| tower.frobenius(x, j)));
        rs.insert(&row);
    }
}

/// S_i = Σ_{j=0}^{i} τ^j(C) with τ = x -> x^(q^s).
pub fn sigma_space(c: &Code, s: i64, i: usize) -> Code {
    let t = c.tower();
    let mut rs = RowSpace::from_mat(c.gen());
    for j in 1..=i {
        insert_image(&mut rs, c.gen(), t, s * j as i64);
    }
    Code::from_row_space(&rs)
}

/// (s_0, …, s_{i_max}); `i_max` defaults to n − k, after which the sequence
/// is constant.
pub fn sigma_sequence(c: &Code, s: i64, i_max: Option<usize>) -> SigmaSequence {
    let t = c.tower();
    let n = c.n();
    let i_max = i_max.unwrap_or(n - c.k());
    let mut rs = RowSpace::from_mat(c.gen());
    let mut dims = Vec::with_capacity(i_max + 1);
    dims.push(rs.dim());
    for j in 1..=i_max {
        if rs.dim() < n {
            insert_image(&mut rs, c.gen(), t, s * j as i64);
        }
        dims.push(rs.dim());
    }
    SigmaSequence { auto_exp: s, dims }
}

/// dim(C + τ^{p_1}(C) + … + τ^{p_r}(C)) for τ the q-Frobenius and
/// 0 < p_1 < … < p_r < m.
pub fn general_sum_dim(c: &Code, powers: &[i64]) -> Result<usize> {
    let m = c.tower().m() as i64;
    if powers.iter().any(|&p| p <= 0 || p >= m) {
        return Err(Error::param(format!("powers must lie in (0, {m})")));
    }
    if powers.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("powers must be strictly increasing"));
    }
    let t = c.tower();
    let mut rs = RowSpace::from_mat(c.gen());
    for &p in powers {
        insert_image(&mut rs, c.gen(), t, p);
    }
    Ok(rs.dim())
}

/// Smallest i with s_i = s_{i+1}. `n` is the code length.
pub fn stabilization_index(seq: &SigmaSequence, n: usize) -> Result<usize> {
    if let Some(i) = seq.dims.windows(2).position(|w| w[0] == w[1]) {
        return Ok(i);
    }
    match seq.dims.last() {
        // the whole ambient space cannot grow
        Some(&last) if last == n => Ok(seq.dims.len() - 1),
        _ => Err(Error::SequenceTooShort),
    }
}

pub fn fingerprint(c: &Code, auto_exps: &[i64]) -> Result<Fingerprint> {
    if auto_exps.is_empty() {
        return Err(Error::param("empty automorphism set"));
    }
    let mut exps = auto_exps.to_vec();
    exps.sort_unstable();
    if exps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::param("automorphism exponents must be distinct"));
    }
    Ok(Fingerprint {
        context: context(c),
        sequences: exps.iter().map(|&s| sigma_sequence(c, s, None)).collect(),
    })
}

fn check_compatible(a: &Code, b: &Code) -> Result<()> {
    let (ca, cb) = (context(a), context(b));
    if (ca.q, ca.e, ca.m, ca.n) != (cb.q, cb.e, cb.m, cb.n) {
        return Err(Error::ContextMismatch(format!(
            "(q,e,m,n) = ({},{},{},{}) vs ({},{},{},{})",
            ca.q, ca.e, ca.m, ca.n, cb.q, cb.e, cb.m, cb.n
        )));
    }
    Ok(())
}

/// `Inequivalent` when the fingerprints differ; never claims equivalence.
pub fn distinguish(a: &Code, b: &Code, auto_exps: &[i64]) -> Result<Verdict> {
    check_compatible(a, b)?;
    let fa = fingerprint(a, auto_exps)?;
    let fb = fingerprint(b, auto_exps)?;
    Ok(if fa == fb {
        Verdict::Unknown
    } else {
        Verdict::Inequivalent
    })
}

/// Same test with a single general power set.
pub fn distinguish_by_powers(a: &Code, b: &Code, powers: &[i64]) -> Result<Verdict> {
    check_compatible(a, b)?;
    let da = general_sum_dim(a, powers)?;
    let db = general_sum_dim(b, powers)?;
    Ok(if da == db && a.k() == b.k() {
        Verdict::Unknown
    } else {
        Verdict::Inequivalent
    })
}

/// s_1 = k + 1 under τ = x -> x^(q^s); for MRD codes this characterizes
/// equivalence to a Gabidulin code w.r.t. τ.
pub fn gabidulin_criterion(c: &Code, s: i64) -> bool {
    sigma_sequence(c, s, Some(1)).dims[1] == c.k() + 1
}

/// Predicted s_i for the code `spec` under τ = σ^{s_rel}, σ being the code's
/// own automorphism, where a closed formula is known; `None` otherwise.
pub fn closed_form_sequence(
    tower: &FieldTower,
    spec: &CodeSpec,
    s_rel: i64,
    i: usize,
) -> Option<usize> {
    let (n, k, m) = (spec.n, spec.k, tower.m() as usize);
    if i == 0 {
        return Some(k);
    }
    let l = s_rel.rem_euclid(m as i64) as usize;
    match spec.family {
        Family::Gabidulin => {
            if l <= k {
                Some((k + i * l).min(n))
            } else if l >= m - k {
                Some((k + i * (m - l)).min(n))
            } else if m == n && i == 1 {
                Some((2 * k).min(n))
            } else {
                None
            }
        }
        Family::SheekeyTwisted => {
            let eta = *spec.resolve_eta(tower).ok()?.first()?;
            if !codes::mrd_norm_condition(tower, eta, k) {
                return None;
            }
            if l == 0 {
                Some(k)
            } else if l < k {
                Some((k + i * l + 1).min(n))
            } else if l > m - k {
                Some((k + i * (m - l) + 1).min(n))
            } else if m == n && i == 1 {
                Some((2 * k).min(m))
            } else {
                None
            }
        }
        Family::GeneralizedTwisted => {
            if spec.h.len() != 1 || l != 1 % m {
                return None;
            }
            let (h, t) = (spec.h[0], spec.t[0]);
            if t == 1 || t == n - k || h == 0 || h == k - 1 {
                return None;
            }
            if m % n != 0 {
                return None;
            }
            let alpha = spec.resolve_alpha(tower).ok()?;
            let in_sub = alpha
                .iter()
                .all(|&a| tower.in_subfield(a, n as u32).unwrap_or(false));
            if !in_sub || linalg::q_rank(tower, &alpha) != n {
                return None;
            }
            let gap = (t - 1).min(n - k - t);
            if i <= gap {
                Some(k + 1 + 2 * i)
            } else {
                Some((k + 1 + gap + i).min(n))
            }
        }
        Family::GabidulinNew => (l == 1 % m).then(|| (k + i).min(n)),
    }
}

/// Closed-form predictions for i = 0..=i_max, if every term has one.
pub fn closed_form_prefix(
    tower: &FieldTower,
    spec: &CodeSpec,
    s_rel: i64,
    i_max: usize,
) -> Option<Vec<usize>> {
    (0..=i_max)
        .map(|i| closed_form_sequence(tower, spec, s_rel, i))
        .collect()
}
