//! Parameter-space censuses of one-twist codes and closed-form class counts.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{self, AlphaSel, CodeSpec, EtaSel, Family};
use crate::error::{Error, Result};
use crate::ff::{FieldElem, FieldTower, ENUM_LIMIT};
use crate::invariants::{self, Fingerprint};
use crate::nt;

/// Published lower / upper bounds for n = 7..=18, k = 3..=15 (row n, column k − 3).
const REFERENCE_BOUNDS: [&[(u32, u32)]; 12] = [
    &[(9, 36), (6, 36)],
    &[(7, 60), (7, 64), (3, 60)],
    &[(15, 54), (21, 60), (15, 60), (6, 54)],
    &[(12, 84), (14, 96), (13, 100), (7, 96), (3, 84)],
    &[(40, 120), (60, 140), (65, 150), (60, 150), (30, 140), (10, 120)],
    &[(19, 108), (18, 128), (12, 140), (12, 144), (8, 140), (6, 128), (3, 108)],
    &[
        (66, 180), (102, 216), (108, 240), (120, 252), (96, 252), (72, 240), (36, 216),
        (12, 180),
    ],
    &[
        (30, 198), (36, 240), (42, 270), (39, 288), (42, 294), (30, 288), (21, 270),
        (12, 240), (4, 198),
    ],
    &[
        (52, 144), (64, 176), (72, 200), (76, 216), (72, 224), (64, 224), (44, 216),
        (36, 200), (20, 176), (8, 144),
    ],
    &[
        (58, 312), (76, 384), (92, 440), (72, 480), (80, 504), (72, 512), (56, 504),
        (40, 480), (28, 440), (16, 384), (5, 312),
    ],
    &[
        (136, 336), (184, 416), (224, 480), (240, 528), (256, 560), (280, 576),
        (240, 576), (192, 560), (128, 528), (96, 480), (48, 416), (16, 336),
    ],
    &[
        (51, 270), (54, 336), (60, 390), (57, 432), (60, 462), (54, 480), (51, 486),
        (39, 480), (27, 462), (18, 432), (12, 390), (9, 336), (4, 270),
    ],
];

/// Published (a, b) for the cell (n, k), when the table has one.
pub fn reference_bounds(n: usize, k: usize) -> Option<(u32, u32)> {
    let row = REFERENCE_BOUNDS.get(n.checked_sub(7)?)?;
    row.get(k.checked_sub(3)?).copied()
}

/// Number of j in [1, m] coprime to m.
pub fn euler_phi(m: u64) -> Result<u64> {
    if m < 1 {
        return Err(Error::param("euler_phi needs m >= 1"));
    }
    Ok((1..=m).filter(|&j| nt::gcd(j, m) == 1).count() as u64)
}

/// One (s, h, t) choice: σ = x -> x^(q^s), twist at row h towards σ^{k-1+t}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamTriple {
    pub s: u32,
    pub h: usize,
    pub t: usize,
}

/// All (s, h, t) with 1 <= s < n, gcd(s, m) = 1, 0 <= h < k, 1 <= t <= n - k,
/// in lexicographic order.
pub fn enumerate_triples(m: u32, n: usize, k: usize) -> Result<Vec<ParamTriple>> {
    if k == 0 || k >= n {
        return Err(Error::param(format!("need 1 <= k < n, got k={k} n={n}")));
    }
    let mut out = Vec::new();
    for s in 1..n as u32 {
        if nt::gcd(s as u64, m as u64) != 1 {
            continue;
        }
        for h in 0..k {
            for t in 1..=n - k {
                out.push(ParamTriple { s, h, t });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::param(format!("no admissible s for m={m} n={n}")));
    }
    Ok(out)
}

/// Whether (n, k) lies in the tabulated range 2 < k < n − 2.
pub fn in_table_range(n: usize, k: usize) -> bool {
    k > 2 && k + 2 < n
}

/// Which automorphisms a census fingerprints against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AutoSet {
    /// x -> x^(q^j) for j in [1, m) with gcd(j, m) = 1.
    #[default]
    #[serde(rename = "m")]
    GeneratorsOfM,
    /// x -> x^(q^j) for j in [1, n) with gcd(j, n) = 1, acting on F_{q^m}.
    #[serde(rename = "n")]
    GeneratorsOfN,
}

impl AutoSet {
    pub fn exponents(self, m: u32, n: usize) -> Vec<i64> {
        let bound = match self {
            AutoSet::GeneratorsOfM => m as u64,
            AutoSet::GeneratorsOfN => n as u64,
        };
        let exps: Vec<i64> = (1..bound)
            .filter(|&j| nt::gcd(j, bound) == 1)
            .map(|j| j as i64)
            .collect();
        if exps.is_empty() {
            vec![1]
        } else {
            exps
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AutoSet::GeneratorsOfM => "m",
            AutoSet::GeneratorsOfN => "n",
        }
    }
}

impl FromStr for AutoSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(AutoSet::GeneratorsOfM),
            "n" => Ok(AutoSet::GeneratorsOfN),
            other => Err(Error::param(format!("auto set must be m or n, got {other:?}"))),
        }
    }
}

/// One cell of the census: `a` distinct fingerprints among `b` parameter
/// choices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub e: u32,
    pub m: u32,
    pub a: usize,
    pub b: usize,
    pub auto_set: AutoSet,
    /// Encoding of the η shared by every code in the cell.
    pub eta: u64,
    pub runtime_secs: f64,
    pub reference: Option<(u32, u32)>,
}

impl CensusRow {
    /// `a - reference_a`, when a reference exists.
    pub fn delta(&self) -> Option<i64> {
        self.reference.map(|(ra, _)| self.a as i64 - ra as i64)
    }

    pub fn matches_reference(&self) -> Option<bool> {
        self.reference
            .map(|(ra, rb)| ra as usize == self.a && rb as usize == self.b)
    }

    pub fn cell(&self) -> String {
        format!("{} / {}", self.a, self.b)
    }
}

/// Parameter triples sharing one fingerprint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FingerprintClass {
    pub fingerprint: Fingerprint,
    pub digest: String,
    pub members: Vec<ParamTriple>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusReport {
    pub row: CensusRow,
    pub classes: Vec<FingerprintClass>,
}

/// Census settings beyond (n, k).
#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub q: u64,
    pub e: u32,
    pub auto_set: AutoSet,
    /// Overrides the default η (smallest encoding outside F_{q^n}).
    pub eta: Option<u64>,
}

impl CensusOptions {
    pub fn new(q: u64) -> Self {
        CensusOptions {
            q,
            e: 1,
            auto_set: AutoSet::GeneratorsOfM,
            eta: None,
        }
    }

    pub fn with_auto_set(mut self, auto_set: AutoSet) -> Self {
        self.auto_set = auto_set;
        self
    }

    pub fn with_eta(mut self, eta: Option<u64>) -> Self {
        self.eta = eta;
        self
    }
}

/// Shared, immutable census inputs for one n.
pub struct CensusField {
    pub tower: Arc<FieldTower>,
    pub alpha: Vec<FieldElem>,
    pub eta: FieldElem,
    pub n: usize,
}

impl CensusField {
    /// F_{q^{2n}} with α a basis of F_{q^n} and the census η.
    pub fn new(opts: &CensusOptions, n: usize) -> Result<CensusField> {
        let p = nt::exact_root(opts.q, opts.e)
            .filter(|&p| nt::is_prime(p))
            .ok_or_else(|| Error::param(format!("q = {} is not p^{}", opts.q, opts.e)))?;
        let m = 2 * n as u32;
        let tower = Arc::new(FieldTower::build(p, opts.e, m)?);
        let alpha = tower.subfield_basis(n as u32)?;
        let eta = match opts.eta {
            Some(x) => {
                let x = tower.elem(x)?;
                if x.is_zero() {
                    return Err(Error::param("eta must be nonzero"));
                }
                x
            }
            None => codes::default_twist_eta(&tower, n as u32),
        };
        Ok(CensusField {
            tower,
            alpha,
            eta,
            n,
        })
    }

    pub fn spec(&self, k: usize, triple: ParamTriple) -> CodeSpec {
        let t = &self.tower;
        CodeSpec::new(Family::GeneralizedTwisted, t.q(), t.m(), self.n, k)
            .with_e(t.e())
            .with_s(triple.s as i64)
            .with_twists(vec![triple.h], vec![triple.t])
            .with_alpha(AlphaSel::Explicit(self.alpha.iter().map(|x| x.enc()).collect()))
            .with_eta(EtaSel::List(vec![self.eta.enc()]))
    }

    pub fn fingerprint(&self, k: usize, triple: ParamTriple, exps: &[i64]) -> Result<Fingerprint> {
        let spec = self.spec(k, triple);
        let code = codes::build_resolved(&self.tower, &spec, &self.alpha, &[self.eta])?;
        invariants::fingerprint(&code, exps)
    }
}

/// Census of one (n, k) cell inside a prepared field, with class listing.
pub fn census_in(field: &CensusField, k: usize, auto_set: AutoSet) -> Result<CensusReport> {
    let start = Instant::now();
    let n = field.n;
    let m = field.tower.m();
    let triples = enumerate_triples(m, n, k)?;
    let exps = auto_set.exponents(m, n);
    let prints: Vec<Fingerprint> = triples
        .par_iter()
        .map(|&tr| field.fingerprint(k, tr, &exps))
        .collect::<Result<_>>()?;

    let mut index: HashMap<&Fingerprint, usize> = HashMap::new();
    let mut classes: Vec<FingerprintClass> = Vec::new();
    for (fp, &tr) in prints.iter().zip(&triples) {
        let slot = *index.entry(fp).or_insert_with(|| {
            classes.push(FingerprintClass {
                fingerprint: fp.clone(),
                digest: fp.digest(),
                members: Vec::new(),
            });
            classes.len() - 1
        });
        classes[slot].members.push(tr);
    }

    let t = &field.tower;
    let row = CensusRow {
        n,
        k,
        q: t.q(),
        e: t.e(),
        m,
        a: classes.len(),
        b: triples.len(),
        auto_set,
        eta: field.eta.enc(),
        runtime_secs: start.elapsed().as_secs_f64(),
        reference: reference_bounds(n, k),
    };
    Ok(CensusReport { row, classes })
}

pub fn census_report(n: usize, k: usize, opts: &CensusOptions) -> Result<CensusReport> {
    let field = CensusField::new(opts, n)?;
    census_in(&field, k, opts.auto_set)
}

/// One cell with the default η.
pub fn census_row(q: u64, e: u32, n: usize, k: usize, auto_set: AutoSet) -> Result<CensusRow> {
    let opts = CensusOptions {
        q,
        e,
        auto_set,
        eta: None,
    };
    Ok(census_report(n, k, &opts)?.row)
}

/// Every cell 2 < k < n − 2 for each n in `ns`.
pub fn table1(ns: impl IntoIterator<Item = usize>, opts: &CensusOptions) -> Result<Vec<CensusRow>> {
    let mut rows = Vec::new();
    for n in ns {
        let field = CensusField::new(opts, n)?;
        for k in 3..n.saturating_sub(2) {
            rows.push(census_in(&field, k, opts.auto_set)?.row);
        }
    }
    Ok(rows)
}

/// Tab-separated grid with "a / b" cells (columns k = 3..=15) and a delta
/// column listing cells whose `a` differs from the reference.
pub fn format_table_tsv(rows: &[CensusRow]) -> String {
    let mut out = String::from("n\\k");
    for k in 3..=15 {
        write!(out, "\t{k}").unwrap();
    }
    out.push_str("\tdelta\n");
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.dedup();
    for n in ns {
        write!(out, "{n}").unwrap();
        let mut deltas = Vec::new();
        for k in 3..=15 {
            match rows.iter().find(|r| r.n == n && r.k == k) {
                Some(r) => {
                    write!(out, "\t{}", r.cell()).unwrap();
                    if let Some(d) = r.delta().filter(|&d| d != 0) {
                        deltas.push(format!("k{k}:{d:+}"));
                    }
                }
                None => out.push('\t'),
            }
        }
        let delta = if deltas.is_empty() {
            "-".to_string()
        } else {
            deltas.join(",")
        };
        writeln!(out, "\t{delta}").unwrap();
    }
    out
}

/// φ(m)/2 classes of Gabidulin codes of length m (1 < k < m − 1).
pub fn gabidulin_class_count(m: u32, k: usize) -> Result<u64> {
    if m < 3 || !(1 < k && k + 1 < m as usize) {
        return Err(Error::param(format!("need m >= 3 and 1 < k < m-1, got m={m} k={k}")));
    }
    Ok(euler_phi(m as u64)? / 2)
}

/// Number of orbits of Aut(F_{q^m}) on the nonzero η with N(η) ≠ (−1)^{km}.
pub fn orbit_count_x(q: u64, e: u32, m: u32, k: usize) -> Result<u64> {
    let p = nt::exact_root(q, e)
        .filter(|&p| nt::is_prime(p))
        .ok_or_else(|| Error::param(format!("q = {q} is not p^{e}")))?;
    let size = nt::checked_pow(p, e * m).unwrap_or(u128::MAX);
    if size > ENUM_LIMIT {
        return Err(Error::ScaleGuard {
            what: "field size",
            value: size,
            limit: ENUM_LIMIT,
        });
    }
    let tower = FieldTower::build(p, e, m)?;
    let mut seen = vec![false; tower.size() as usize];
    let mut orbits = 0;
    for enc in 1..tower.size() {
        if seen[enc as usize] {
            continue;
        }
        let a = tower.elem(enc)?;
        if !codes::mrd_norm_condition(&tower, a, k) {
            continue;
        }
        orbits += 1;
        let mut x = a;
        loop {
            assert!(
                codes::mrd_norm_condition(&tower, x, k),
                "automorphisms preserve the norm condition"
            );
            seen[x.enc() as usize] = true;
            x = tower.automorphism(x, 1);
            if x == a {
                break;
            }
        }
    }
    Ok(orbits)
}

/// (φ(m)/2)·|X_q(m,k)| classes of MRD twisted codes of length m (2 < k < m − 2).
pub fn sheekey_class_count(q: u64, e: u32, m: u32, k: usize) -> Result<u64> {
    if !(2 < k && k + 2 < m as usize) {
        return Err(Error::param(format!("need 2 < k < m-2, got m={m} k={k}")));
    }
    Ok(euler_phi(m as u64)? / 2 * orbit_count_x(q, e, m, k)?)
}
