//! F_{q^m}-linear rank-metric codes: the Gabidulin family and its twisted
//! variants, Moore matrices, semilinear isometries and brute-force distance.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{FieldElem, FieldTower};
use crate::linalg::{self, Mat, RowSpace};
use crate::nt;

/// Largest number of codewords `min_rank_distance_bruteforce` will visit.
pub const BRUTE_FORCE_LIMIT: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gabidulin,
    #[serde(alias = "sheekey")]
    SheekeyTwisted,
    #[serde(alias = "twisted")]
    GeneralizedTwisted,
    #[serde(alias = "new")]
    GabidulinNew,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gabidulin => "gabidulin",
            Family::SheekeyTwisted => "sheekey_twisted",
            Family::GeneralizedTwisted => "generalized_twisted",
            Family::GabidulinNew => "gabidulin_new",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "gabidulin" | "gab" => Ok(Family::Gabidulin),
            "sheekey" | "sheekey_twisted" => Ok(Family::SheekeyTwisted),
            "twisted" | "generalized_twisted" => Ok(Family::GeneralizedTwisted),
            "new" | "gabidulin_new" => Ok(Family::GabidulinNew),
            other => Err(Error::Spec(format!("unknown family {other:?}"))),
        }
    }
}

/// `"auto"` or an explicit list of element encodings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSel", into = "RawSel")]
pub enum AlphaSel {
    #[default]
    Auto,
    Explicit(Vec<u64>),
}

/// `"auto"`, one encoding, or one encoding per twist.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSel", into = "RawSel")]
pub enum EtaSel {
    #[default]
    Auto,
    Single(u64),
    List(Vec<u64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawSel {
    Word(String),
    Int(u64),
    List(Vec<u64>),
}

fn check_auto(w: &str) -> std::result::Result<(), String> {
    if w == "auto" {
        Ok(())
    } else {
        Err(format!("expected \"auto\", got {w:?}"))
    }
}

impl TryFrom<RawSel> for AlphaSel {
    type Error = String;

    fn try_from(raw: RawSel) -> std::result::Result<Self, String> {
        match raw {
            RawSel::Word(w) => check_auto(&w).map(|_| AlphaSel::Auto),
            RawSel::List(v) => Ok(AlphaSel::Explicit(v)),
            RawSel::Int(_) => Err("alpha must be \"auto\" or a list".into()),
        }
    }
}

impl From<AlphaSel> for RawSel {
    fn from(a: AlphaSel) -> RawSel {
        match a {
            AlphaSel::Auto => RawSel::Word("auto".into()),
            AlphaSel::Explicit(v) => RawSel::List(v),
        }
    }
}

impl TryFrom<RawSel> for EtaSel {
    type Error = String;

    fn try_from(raw: RawSel) -> std::result::Result<Self, String> {
        match raw {
            RawSel::Word(w) => check_auto(&w).map(|_| EtaSel::Auto),
            RawSel::Int(x) => Ok(EtaSel::Single(x)),
            RawSel::List(v) => Ok(EtaSel::List(v)),
        }
    }
}

impl From<EtaSel> for RawSel {
    fn from(e: EtaSel) -> RawSel {
        match e {
            EtaSel::Auto => RawSel::Word("auto".into()),
            EtaSel::Single(x) => RawSel::Int(x),
            EtaSel::List(v) => RawSel::List(v),
        }
    }
}

fn default_one_u32() -> u32 {
    1
}

fn default_one_i64() -> i64 {
    1
}

/// Symbolic description of one code instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub family: Family,
    pub q: u64,
    #[serde(default = "default_one_u32")]
    pub e: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    /// The code's σ is x -> x^(q^s).
    #[serde(default = "default_one_i64")]
    pub s: i64,
    #[serde(default)]
    pub alpha: AlphaSel,
    #[serde(default)]
    pub eta: EtaSel,
    #[serde(default)]
    pub h: Vec<usize>,
    #[serde(default)]
    pub t: Vec<usize>,
}

impl CodeSpec {
    pub fn new(family: Family, q: u64, m: u32, n: usize, k: usize) -> Self {
        CodeSpec {
            family,
            q,
            e: 1,
            m,
            n,
            k,
            s: 1,
            alpha: AlphaSel::Auto,
            eta: EtaSel::Auto,
            h: Vec::new(),
            t: Vec::new(),
        }
    }

    pub fn with_s(mut self, s: i64) -> Self {
        self.s = s;
        self
    }

    pub fn with_e(mut self, e: u32) -> Self {
        self.e = e;
        self
    }

    pub fn with_twists(mut self, h: Vec<usize>, t: Vec<usize>) -> Self {
        self.h = h;
        self.t = t;
        self
    }

    pub fn with_eta(mut self, eta: EtaSel) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_alpha(mut self, alpha: AlphaSel) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn from_json(s: &str) -> Result<CodeSpec> {
        serde_json::from_str(s).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// (p, e, m) of the ambient tower.
    pub fn tower_params(&self) -> Result<(u64, u32, u32)> {
        let p = nt::exact_root(self.q, self.e)
            .filter(|&p| nt::is_prime(p))
            .ok_or_else(|| Error::Spec(format!("q = {} is not p^{} for a prime p", self.q, self.e)))?;
        Ok((p, self.e, self.m))
    }

    pub fn build_tower(&self) -> Result<Arc<FieldTower>> {
        let (p, e, m) = self.tower_params()?;
        Ok(Arc::new(FieldTower::build(p, e, m)?))
    }

    /// Number of twists ℓ.
    pub fn twists(&self) -> usize {
        match self.family {
            Family::GeneralizedTwisted => self.h.len(),
            Family::SheekeyTwisted => 1,
            Family::GabidulinNew => (self.m as usize).saturating_sub(self.k),
            Family::Gabidulin => 0,
        }
    }

    /// Checks the parameter ranges that do not need field arithmetic.
    pub fn validate(&self) -> Result<()> {
        let (n, k, m) = (self.n, self.k, self.m as usize);
        if !(1 <= k && k <= n && n <= m) {
            return Err(Error::Spec(format!(
                "need 1 <= k <= n <= m, got k={k} n={n} m={m}"
            )));
        }
        let s = self.s.rem_euclid(self.m as i64) as u64;
        if nt::gcd(s, self.m as u64) != 1 {
            return Err(Error::Spec(format!(
                "s = {} does not generate Gal(F_q^{}/F_q)",
                self.s, self.m
            )));
        }
        if let AlphaSel::Explicit(a) = &self.alpha {
            if a.len() != n {
                return Err(Error::Spec(format!("alpha has {} entries, n = {n}", a.len())));
            }
        }
        match self.family {
            Family::Gabidulin => {}
            Family::SheekeyTwisted | Family::GabidulinNew => {
                if let EtaSel::List(v) = &self.eta {
                    if v.len() != 1 {
                        return Err(Error::Spec(format!("{} codes take a single eta", self.family)));
                    }
                }
                if self.family == Family::GabidulinNew && m - k > k {
                    return Err(Error::Spec(format!("gabidulin_new needs m-k <= k (m={m}, k={k})")));
                }
            }
            Family::GeneralizedTwisted => {
                let l = self.h.len();
                if l == 0 || l != self.t.len() {
                    return Err(Error::Spec(format!(
                        "need equally many h and t entries (>= 1), got {} and {}",
                        l,
                        self.t.len()
                    )));
                }
                if self.h.iter().any(|&h| h >= k) {
                    return Err(Error::Spec(format!("h entries must lie in [0, {k})")));
                }
                if self.t.iter().any(|&t| t == 0 || t > n - k) {
                    return Err(Error::Spec(format!("t entries must lie in [1, {}]", n - k)));
                }
                if !all_distinct(&self.h) || !all_distinct(&self.t) {
                    return Err(Error::Spec("h and t entries must be distinct".into()));
                }
                if let EtaSel::List(v) = &self.eta {
                    if v.len() != l {
                        return Err(Error::Spec(format!("{} eta values for {l} twists", v.len())));
                    }
                }
            }
        }
        match &self.eta {
            EtaSel::Single(0) => Err(Error::Spec("eta must be nonzero".into())),
            EtaSel::List(v) if v.contains(&0) => Err(Error::Spec("eta must be nonzero".into())),
            _ => Ok(()),
        }
    }

    /// Evaluation vector α.
    pub fn resolve_alpha(&self, tower: &FieldTower) -> Result<Vec<FieldElem>> {
        match &self.alpha {
            AlphaSel::Explicit(v) => v.iter().map(|&x| tower.elem(x)).collect(),
            AlphaSel::Auto => default_alpha(tower, self.n),
        }
    }

    /// One η per twist (empty for Gabidulin codes).
    pub fn resolve_eta(&self, tower: &FieldTower) -> Result<Vec<FieldElem>> {
        let l = self.twists();
        match (self.family, &self.eta) {
            (Family::Gabidulin, _) => Ok(Vec::new()),
            (Family::GeneralizedTwisted, EtaSel::Auto) => {
                Ok(vec![default_twist_eta(tower, self.n as u32); l])
            }
            (_, EtaSel::Auto) => Ok(vec![default_mrd_eta(tower, self.k, self.n as u32)]),
            (Family::GeneralizedTwisted, EtaSel::Single(x)) => Ok(vec![tower.elem(*x)?; l]),
            (_, EtaSel::Single(x)) => Ok(vec![tower.elem(*x)?]),
            (_, EtaSel::List(v)) => v.iter().map(|&x| tower.elem(x)).collect(),
        }
    }

    /// Copy with `alpha` and `eta` replaced by the concrete values they
    /// resolve to.
    pub fn to_explicit(&self, tower: &FieldTower) -> Result<CodeSpec> {
        let mut out = self.clone();
        out.alpha = AlphaSel::Explicit(self.resolve_alpha(tower)?.iter().map(|x| x.enc()).collect());
        let etas = self.resolve_eta(tower)?;
        out.eta = match self.family {
            Family::Gabidulin => EtaSel::Auto,
            Family::GeneralizedTwisted => EtaSel::List(etas.iter().map(|x| x.enc()).collect()),
            _ => EtaSel::Single(etas[0].enc()),
        };
        Ok(out)
    }
}

fn all_distinct(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// α = subfield basis of F_{q^n} when n | m, otherwise the first n powers of
/// the canonical primitive element of F_{q^m}.
pub fn default_alpha(tower: &FieldTower, n: usize) -> Result<Vec<FieldElem>> {
    let m = tower.m() as usize;
    if n == 0 || n > m {
        return Err(Error::Spec(format!("cannot pick {n} independent entries in degree {m}")));
    }
    if m.is_multiple_of(n) {
        tower.subfield_basis(n as u32)
    } else {
        Ok(tower.power_basis(tower.primitive_element(), n))
    }
}

/// Smallest encoding outside F_{q^n} (or outside F_q when F_{q^n} is not a
/// proper subfield).
pub fn default_twist_eta(tower: &FieldTower, n: u32) -> FieldElem {
    let m = tower.m();
    let d = if n < m && m.is_multiple_of(n) { n } else { 1 };
    (1..tower.size())
        .map(FieldElem::from_enc_unchecked)
        .find(|&a| !tower.in_subfield(a, d).expect("d divides m"))
        .unwrap_or(FieldElem::ONE)
}

/// Smallest encoding satisfying the MRD norm condition; falls back to
/// [`default_twist_eta`] when no element qualifies (q = 2).
pub fn default_mrd_eta(tower: &FieldTower, k: usize, n: u32) -> FieldElem {
    (1..tower.size())
        .map(FieldElem::from_enc_unchecked)
        .find(|&a| mrd_norm_condition(tower, a, k))
        .unwrap_or_else(|| default_twist_eta(tower, n))
}

/// N(η) ≠ (−1)^{km}, evaluated in F_q.
pub fn mrd_norm_condition(tower: &FieldTower, eta: FieldElem, k: usize) -> bool {
    let sign = if (k as u64 * tower.m() as u64).is_multiple_of(2) {
        tower.one()
    } else {
        tower.neg(tower.one())
    };
    tower.norm(eta) != sign
}

/// σ-Moore matrix: row j is σ^{s·j}(α), j < i.
pub fn moore_matrix(tower: &Arc<FieldTower>, alpha: &[FieldElem], i: usize, s: i64) -> Mat {
    let rows: Vec<Vec<FieldElem>> = (0..i)
        .map(|j| frob_vec(tower, alpha, s * j as i64))
        .collect();
    Mat::from_rows(tower.clone(), alpha.len(), &rows).expect("rows have equal length")
}

fn frob_vec(tower: &FieldTower, v: &[FieldElem], j: i64) -> Vec<FieldElem> {
    v.iter().map(|&x| tower.frobenius(x, j)).collect()
}

/// Generator rows of a family instance, with σ = x -> x^(q^s).
pub fn generator_rows(
    tower: &FieldTower,
    family: Family,
    k: usize,
    s: i64,
    alpha: &[FieldElem],
    etas: &[FieldElem],
    h: &[usize],
    t: &[usize],
) -> Vec<Vec<FieldElem>> {
    let sig = |j: usize| frob_vec(tower, alpha, s * j as i64);
    // x + c·y
    let twist = |x: Vec<FieldElem>, c: FieldElem, y: Vec<FieldElem>| -> Vec<FieldElem> {
        x.iter()
            .zip(&y)
            .map(|(&a, &b)| tower.add(a, tower.mul(c, b)))
            .collect()
    };
    match family {
        Family::Gabidulin => (0..k).map(sig).collect(),
        Family::SheekeyTwisted => {
            let mut rows: Vec<_> = (0..k).map(sig).collect();
            rows[0] = twist(sig(0), etas[0], sig(k));
            rows
        }
        Family::GeneralizedTwisted => {
            let mut rows: Vec<_> = (0..k).map(sig).collect();
            for ((&hi, &ti), &eta) in h.iter().zip(t).zip(etas) {
                rows[hi] = twist(sig(hi), eta, sig(k - 1 + ti));
            }
            rows
        }
        Family::GabidulinNew => {
            let m = tower.m() as usize;
            let eta = etas[0];
            (0..k)
                .map(|i| {
                    if i < m - k {
                        let c = tower.frobenius(eta, s * i as i64);
                        twist(sig(i), c, sig(k + i))
                    } else {
                        sig(i)
                    }
                })
                .collect()
        }
    }
}

/// An F_{q^m}-linear code, stored by its RREF generator matrix.
#[derive(Clone, Debug)]
pub struct Code {
    spec: Option<CodeSpec>,
    gen: Mat,
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.gen == other.gen
    }
}

impl Eq for Code {}

impl Code {
    /// Code spanned by the rows of `gen`, which must have full row rank.
    pub fn from_generator(gen: &Mat, spec: Option<CodeSpec>) -> Result<Code> {
        let code = Code::span(gen, spec);
        if code.k() != gen.rows() {
            return Err(Error::RankDefect {
                rank: code.k(),
                k: gen.rows(),
            });
        }
        Ok(code)
    }

    /// Code spanned by the rows of `gen`, whatever its rank.
    pub fn span(gen: &Mat, spec: Option<CodeSpec>) -> Code {
        Code {
            spec,
            gen: RowSpace::from_mat(gen).to_mat(),
        }
    }

    pub(crate) fn from_row_space(rs: &RowSpace) -> Code {
        Code {
            spec: None,
            gen: rs.to_mat(),
        }
    }

    pub fn gen(&self) -> &Mat {
        &self.gen
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.gen.tower()
    }

    pub fn spec(&self) -> Option<&CodeSpec> {
        self.spec.as_ref()
    }

    pub fn contains(&self, word: &[FieldElem]) -> bool {
        RowSpace::from_mat(&self.gen).contains(word)
    }

    /// Entrywise image under x -> x^(q^j).
    pub fn frobenius(&self, j: i64) -> Code {
        Code::span(&self.gen.frobenius(j), None)
    }

    /// Codeword `Σ coeffs[i] · g_i`.
    pub fn encode(&self, coeffs: &[FieldElem]) -> Vec<FieldElem> {
        let t = self.tower();
        let mut out = vec![t.zero(); self.n()];
        for (r, &c) in coeffs.iter().enumerate() {
            t.axpy(&mut out, t.neg(c), self.gen.row(r));
        }
        out
    }
}

/// Builds the code described by `spec` in a freshly constructed tower.
pub fn build(spec: &CodeSpec) -> Result<Code> {
    spec.validate()?;
    let tower = spec.build_tower()?;
    build_in(&tower, spec)
}

/// Builds the code described by `spec` inside an existing tower.
pub fn build_in(tower: &Arc<FieldTower>, spec: &CodeSpec) -> Result<Code> {
    let (p, e, m) = spec.tower_params()?;
    if (p, e, m) != (tower.p(), tower.e(), tower.m()) {
        return Err(Error::TowerMismatch);
    }
    spec.validate()?;
    let alpha = spec.resolve_alpha(tower)?;
    let etas = spec.resolve_eta(tower)?;
    if etas.iter().any(|x| x.is_zero()) {
        return Err(Error::Spec("eta must be nonzero".into()));
    }
    build_resolved(tower, spec, &alpha, &etas)
}

/// Builds with α and η already resolved; used by the census to avoid
/// recomputing subfield bases per instance.
pub fn build_resolved(
    tower: &Arc<FieldTower>,
    spec: &CodeSpec,
    alpha: &[FieldElem],
    etas: &[FieldElem],
) -> Result<Code> {
    let r = linalg::q_rank(tower, alpha);
    if r != spec.n || alpha.len() != spec.n {
        return Err(Error::DependentAlpha { rank: r, n: spec.n });
    }
    let rows = generator_rows(tower, spec.family, spec.k, spec.s, alpha, etas, &spec.h, &spec.t);
    let gen = Mat::from_rows(tower.clone(), spec.n, &rows)?;
    Code::from_generator(&gen, Some(spec.clone()))
}

/// Semilinear rank isometry v -> θ(λ v) A.
#[derive(Clone, Debug)]
pub struct Isometry {
    pub lambda: FieldElem,
    pub a: Mat,
    /// θ = x -> x^(p^theta_exp).
    pub theta_exp: i64,
}

impl Isometry {
    pub fn identity(tower: &Arc<FieldTower>, n: usize) -> Isometry {
        Isometry {
            lambda: FieldElem::ONE,
            a: Mat::identity(tower.clone(), n),
            theta_exp: 0,
        }
    }

    /// Uniformly random λ ≠ 0, θ, and A ∈ GL_n(q).
    pub fn random<R: Rng + ?Sized>(tower: &Arc<FieldTower>, n: usize, rng: &mut R) -> Isometry {
        let a = loop {
            let data = (0..n * n).map(|_| tower.random_base(rng)).collect();
            let a = Mat::new(tower.clone(), n, n, data).expect("n*n entries");
            if linalg::rank(&a) == n {
                break a;
            }
        };
        Isometry {
            lambda: tower.random_nonzero(rng),
            a,
            theta_exp: rng.gen_range(0..tower.degree() as i64),
        }
    }
}

/// θ(λ C) A.
pub fn apply_equivalence(code: &Code, iso: &Isometry) -> Result<Code> {
    let t = code.tower();
    let n = code.n();
    if iso.a.rows() != n || iso.a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "isometry matrix is {}x{}, code length {n}",
            iso.a.rows(),
            iso.a.cols()
        )));
    }
    if **iso.a.tower() != **t {
        return Err(Error::TowerMismatch);
    }
    if iso.lambda.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !iso.a.entries().iter().all(|&x| t.in_base_field(x)) {
        return Err(Error::NotOverBaseField);
    }
    if linalg::rank(&iso.a) != n {
        return Err(Error::Singular);
    }
    let moved = code
        .gen()
        .map(|x| t.automorphism(t.mul(iso.lambda, x), iso.theta_exp));
    let gen = moved.matmul(&iso.a)?;
    Code::from_generator(&gen, None)
}

/// Minimum rank distance by enumerating every nonzero codeword.
pub fn min_rank_distance_bruteforce(code: &Code) -> Result<usize> {
    let t = code.tower();
    let k = code.k();
    let words = nt::checked_pow(t.size(), k as u32).unwrap_or(u128::MAX);
    if words > BRUTE_FORCE_LIMIT {
        return Err(Error::ScaleGuard {
            what: "q^(m k) codewords",
            value: words,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let size = t.size();
    let mut best = code.n();
    let mut digits = vec![0u64; k];
    let mut coeffs = vec![FieldElem::ZERO; k];
    for _ in 1..words {
        // mixed-radix increment
        for d in digits.iter_mut() {
            *d += 1;
            if *d < size {
                break;
            }
            *d = 0;
        }
        for (c, &d) in coeffs.iter_mut().zip(&digits) {
            *c = t.elem(d)?;
        }
        let w = code.encode(&coeffs);
        best = best.min(linalg::q_rank(t, &w));
        if best == 1 {
            break;
        }
    }
    Ok(best)
}
