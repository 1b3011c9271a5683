//! Arithmetic in the tower F_p ⊆ F_q = F_{p^e} ⊆ F_{q^m}.
//!
//! Every element of F_{q^m} is stored by its integer encoding
//! `enc = Σ c_i p^i`, where `c_i` are the coefficients of its residue modulo
//! the canonical degree-`e·m` modulus over F_p. For p = 2 the encoding is the
//! coefficient bitmask and multiplication is carry-less; small fields use
//! log/antilog tables; everything else goes through base-p digit vectors.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nt;
use crate::poly;

/// Largest field (in elements) on which arithmetic is supported.
pub const ARITH_LIMIT: u128 = 1 << 40;
/// Largest subfield that may be enumerated element by element.
pub const ENUM_LIMIT: u128 = 1 << 24;
const TABLE_LIMIT: u64 = 1 << 16;
const MAX_DEGREE: usize = 40;

/// One element of F_{q^m}, identified by its base-p integer encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn enc(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Callers guarantee `enc` is below the field size.
    #[inline]
    pub(crate) fn from_enc_unchecked(enc: u64) -> FieldElem {
        FieldElem(enc)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct LogTables {
    log: Vec<u32>,
    exp: Vec<u64>,
}

enum Backend {
    /// p = 2. `low` is the modulus without its leading term; `frob[t-1][c][b]`
    /// is the image under x -> x^(2^t) of byte `b` placed at byte offset `c`.
    Binary { low: u64, frob: Vec<Vec<[u64; 256]>> },
    Digits,
}

/// The chain F_p ⊆ F_q ⊆ F_{q^m} with its canonical modulus. Immutable after
/// construction.
pub struct FieldTower {
    p: u64,
    e: u32,
    m: u32,
    degree: u32,
    q: u64,
    size: u64,
    modulus: Vec<u64>,
    group_factors: Vec<u64>,
    backend: Backend,
    logs: Option<LogTables>,
    primitive: FieldElem,
    base_basis: Vec<FieldElem>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.m == other.m
    }
}

impl Eq for FieldTower {}

/// Carry-less product of `a` with `b`, using a 4-bit window table for `a`.
struct BinFactor {
    tab: [u128; 16],
}

impl BinFactor {
    #[inline]
    fn new(a: u64) -> Self {
        let mut tab = [0u128; 16];
        let a = a as u128;
        tab[1] = a;
        for i in 2..16 {
            tab[i] = (tab[i >> 1] << 1) ^ if i & 1 == 1 { a } else { 0 };
        }
        BinFactor { tab }
    }

    #[inline]
    fn clmul(&self, mut b: u64) -> u128 {
        let mut r = 0u128;
        let mut shift = 0;
        while b != 0 {
            r ^= self.tab[(b & 15) as usize] << shift;
            b >>= 4;
            shift += 4;
        }
        r
    }
}

#[inline]
fn bin_reduce(mut r: u128, degree: u32, low: u64) -> u64 {
    let mask = (1u128 << degree) - 1;
    loop {
        let hi = r >> degree;
        if hi == 0 {
            return r as u64;
        }
        r &= mask;
        let mut l = low;
        while l != 0 {
            let bit = l.trailing_zeros();
            r ^= hi << bit;
            l &= l - 1;
        }
    }
}

impl FieldTower {
    /// Builds F_{p^(e·m)} with the canonical modulus: the irreducible monic
    /// polynomial of degree e·m whose lower coefficients have the smallest
    /// base-p encoding.
    pub fn build(p: u64, e: u32, m: u32) -> Result<FieldTower> {
        if !nt::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || m == 0 {
            return Err(Error::param("e and m must be positive"));
        }
        let degree = e
            .checked_mul(m)
            .ok_or_else(|| Error::param("e*m overflows"))?;
        let size = nt::checked_pow(p, degree).unwrap_or(u128::MAX);
        if size > ARITH_LIMIT || degree as usize > MAX_DEGREE {
            return Err(Error::ScaleGuard {
                what: "field size",
                value: size,
                limit: ARITH_LIMIT,
            });
        }
        let size = size as u64;
        let q = p.pow(e);
        let modulus = canonical_modulus(p, degree)?;
        let group_factors = nt::prime_factors(size - 1);

        let backend = if p == 2 {
            let low = modulus[..degree as usize]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (c << i));
            Backend::Binary {
                low,
                frob: Vec::new(),
            }
        } else {
            Backend::Digits
        };

        let mut tower = FieldTower {
            p,
            e,
            m,
            degree,
            q,
            size,
            modulus,
            group_factors,
            backend,
            logs: None,
            primitive: FieldElem::ONE,
            base_basis: vec![FieldElem::ONE],
        };

        tower.primitive = tower.find_primitive();
        if size <= TABLE_LIMIT && size > 2 {
            tower.logs = Some(tower.make_logs());
        } else if let Backend::Binary { low, .. } = tower.backend {
            let frob = tower.make_frob_tables();
            tower.backend = Backend::Binary { low, frob };
        }
        if e > 1 {
            let gamma = tower.pow(tower.primitive, (size - 1) / (q - 1));
            let mut basis = Vec::with_capacity(e as usize);
            let mut cur = FieldElem::ONE;
            for _ in 0..e {
                basis.push(cur);
                cur = tower.mul(cur, gamma);
            }
            tower.base_basis = basis;
        }
        Ok(tower)
    }

    fn find_primitive(&self) -> FieldElem {
        if self.size == 2 {
            return FieldElem::ONE;
        }
        (1..self.size)
            .map(FieldElem)
            .find(|&a| self.has_full_order(a))
            .expect("multiplicative group is cyclic")
    }

    fn has_full_order(&self, a: FieldElem) -> bool {
        let n = self.size - 1;
        self.group_factors
            .iter()
            .all(|&r| self.pow(a, n / r) != FieldElem::ONE)
    }

    fn make_logs(&self) -> LogTables {
        let n = (self.size - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; self.size as usize];
        let mut cur = FieldElem::ONE;
        for i in 0..n {
            exp.push(cur.0);
            log[cur.0 as usize] = i as u32;
            cur = self.mul(cur, self.primitive);
        }
        LogTables { log, exp }
    }

    fn make_frob_tables(&self) -> Vec<Vec<[u64; 256]>> {
        let d = self.degree as usize;
        let chunks = d.div_ceil(8);
        let mut images: Vec<u64> = (0..d).map(|i| 1u64 << i).collect();
        let mut all = Vec::with_capacity(d.saturating_sub(1));
        for _t in 1..d {
            for img in images.iter_mut() {
                *img = self.mul(FieldElem(*img), FieldElem(*img)).0;
            }
            let mut per_chunk = Vec::with_capacity(chunks);
            for c in 0..chunks {
                let mut tab = [0u64; 256];
                for b in 1..256usize {
                    let low = b.trailing_zeros() as usize;
                    let idx = 8 * c + low;
                    let img = if idx < d { images[idx] } else { 0 };
                    tab[b] = tab[b & (b - 1)] ^ img;
                }
                per_chunk.push(tab);
            }
            all.push(per_chunk);
        }
        all
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Degree of F_{q^m} over the prime field, e·m.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of elements p^(e·m).
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Monic modulus over F_p, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The canonical generator of the multiplicative group (smallest encoding).
    pub fn primitive_element(&self) -> FieldElem {
        self.primitive
    }

    /// A basis of F_q over F_p, as elements of F_{q^m}.
    pub fn base_field_basis(&self) -> &[FieldElem] {
        &self.base_basis
    }

    /// Text label `p^e^m`.
    pub fn label(&self) -> String {
        format!("{}^{}^{}", self.p, self.e, self.m)
    }

    /// Parses a `p^e^m` label; all three components are mandatory.
    pub fn parse_label(s: &str) -> Result<(u64, u32, u32)> {
        let parts: Vec<&str> = s.trim().split('^').collect();
        if parts.len() != 3 {
            return Err(Error::param(format!(
                "tower label {s:?} must have the form p^e^m"
            )));
        }
        let bad = || Error::param(format!("malformed tower label {s:?}"));
        let p = parts[0].parse().map_err(|_| bad())?;
        let e = parts[1].parse().map_err(|_| bad())?;
        let m = parts[2].parse().map_err(|_| bad())?;
        Ok((p, e, m))
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// Element with the given integer encoding.
    pub fn elem(&self, enc: u64) -> Result<FieldElem> {
        if enc >= self.size {
            return Err(Error::ElementOutOfRange(enc));
        }
        Ok(FieldElem(enc))
    }

    /// Image of the integer `c` under Z -> F_p ⊆ F_{q^m}.
    pub fn prime_elem(&self, c: u64) -> FieldElem {
        FieldElem(c % self.p)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.degree as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.degree
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::param(format!("coefficient {bad} not reduced mod p")));
        }
        let mut enc = 0u64;
        for &c in coeffs.iter().rev() {
            enc = enc * self.p + c;
        }
        Ok(FieldElem(enc))
    }

    /// Little-endian coefficient vector of length e·m.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        let mut out = vec![0u64; self.degree as usize];
        let mut x = a.0;
        for c in out.iter_mut() {
            *c = x % self.p;
            x /= self.p;
        }
        out
    }

    #[inline]
    fn decode(&self, a: FieldElem, out: &mut [u64; MAX_DEGREE]) {
        let mut x = a.0;
        for c in out.iter_mut().take(self.degree as usize) {
            *c = x % self.p;
            x /= self.p;
        }
    }

    #[inline]
    fn encode(&self, digits: &[u64]) -> FieldElem {
        let mut enc = 0u64;
        for &c in digits[..self.degree as usize].iter().rev() {
            enc = enc * self.p + c;
        }
        FieldElem(enc)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.degree == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        for i in 0..self.degree as usize {
            x[i] = (x[i] + y[i]) % self.p;
        }
        self.encode(&x)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.degree == 1 {
            return FieldElem(self.p - a.0);
        }
        let mut x = [0u64; MAX_DEGREE];
        self.decode(a, &mut x);
        for c in x.iter_mut().take(self.degree as usize) {
            *c = (self.p - *c) % self.p;
        }
        self.encode(&x)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if let Some(t) = &self.logs {
            let n = t.exp.len();
            let mut idx = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            if idx >= n {
                idx -= n;
            }
            return FieldElem(t.exp[idx]);
        }
        match &self.backend {
            Backend::Binary { low, .. } => {
                let r = BinFactor::new(a.0).clmul(b.0);
                FieldElem(bin_reduce(r, self.degree, *low))
            }
            Backend::Digits => self.mul_digits(a, b),
        }
    }

    fn mul_digits(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p;
        let d = self.degree as usize;
        if d == 1 {
            return FieldElem(nt::mul_mod(a.0, b.0, p));
        }
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = (prod[i + j] + nt::mul_mod(x[i], y[j], p)) % p;
            }
        }
        for top in (d..2 * d - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..d {
                let sub = nt::mul_mod(c, self.modulus[j], p);
                let idx = top - d + j;
                prod[idx] = (prod[idx] + p - sub) % p;
            }
        }
        self.encode(&prod)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.logs {
            let n = t.exp.len();
            let l = t.log[a.0 as usize] as usize;
            return Some(FieldElem(t.exp[(n - l) % n]));
        }
        Some(self.pow(a, self.size - 2))
    }

    pub fn pow(&self, a: FieldElem, exp: u64) -> FieldElem {
        if exp == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        if let Some(t) = &self.logs {
            let n = t.exp.len() as u128;
            let idx = (t.log[a.0 as usize] as u128 * exp as u128) % n;
            return FieldElem(t.exp[idx as usize]);
        }
        let mut acc = FieldElem::ONE;
        let mut base = a;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `a^(p^t)`: the t-th power of the absolute Frobenius, `t` taken mod e·m.
    pub fn automorphism(&self, a: FieldElem, t: i64) -> FieldElem {
        let t = t.rem_euclid(self.degree as i64) as u32;
        if t == 0 || a.0 <= 1 {
            return a;
        }
        if let Some(tab) = &self.logs {
            let n = tab.exp.len() as u128;
            let pt = self.p.pow(t) as u128;
            let idx = (tab.log[a.0 as usize] as u128 * pt) % n;
            return FieldElem(tab.exp[idx as usize]);
        }
        match &self.backend {
            Backend::Binary { frob, .. } if !frob.is_empty() => {
                let tabs = &frob[t as usize - 1];
                let mut x = a.0;
                let mut r = 0u64;
                let mut c = 0;
                while x != 0 {
                    r ^= tabs[c][(x & 0xff) as usize];
                    x >>= 8;
                    c += 1;
                }
                FieldElem(r)
            }
            _ => self.pow(a, self.p.pow(t)),
        }
    }

    /// σ^j(a) = a^(q^j) with σ the q-Frobenius; `j` is reduced mod m.
    pub fn frobenius(&self, a: FieldElem, j: i64) -> FieldElem {
        let j = j.rem_euclid(self.m as i64);
        self.automorphism(a, j * self.e as i64)
    }

    /// Relative norm N_{F_{q^m}/F_q}(a) = a^((q^m - 1)/(q - 1)).
    pub fn norm(&self, a: FieldElem) -> FieldElem {
        self.pow(a, (self.size - 1) / (self.q - 1))
    }

    fn check_divisor(&self, d: u32) -> Result<()> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, m: self.m });
        }
        Ok(())
    }

    /// Whether `a` lies in the intermediate field F_{q^d}.
    pub fn in_subfield(&self, a: FieldElem, d: u32) -> Result<bool> {
        self.check_divisor(d)?;
        Ok(self.frobenius(a, d as i64) == a)
    }

    /// Whether `a` lies in F_q.
    #[inline]
    pub fn in_base_field(&self, a: FieldElem) -> bool {
        if self.e == 1 && a.0 < self.p {
            return true;
        }
        self.frobenius(a, 1) == a
    }

    /// Whether `a` is fixed by the automorphism x -> x^(p^t).
    pub fn fixed_by(&self, a: FieldElem, t: i64) -> bool {
        self.automorphism(a, t) == a
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElem) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::ZeroElement);
        }
        let mut ord = self.size - 1;
        for &r in &self.group_factors {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == FieldElem::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    fn subfield_generator(&self, d: u32) -> (FieldElem, u64) {
        let sub = self.q.pow(d);
        let gamma = self.pow(self.primitive, (self.size - 1) / (sub - 1));
        (gamma, sub)
    }

    /// All elements of F_{q^d}, zero first, then powers of a generator.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<FieldElem>> {
        self.check_divisor(d)?;
        let sub = nt::checked_pow(self.q, d).unwrap_or(u128::MAX);
        if sub > ENUM_LIMIT {
            return Err(Error::ScaleGuard {
                what: "subfield size",
                value: sub,
                limit: ENUM_LIMIT,
            });
        }
        let (gamma, sub) = self.subfield_generator(d);
        let mut out = Vec::with_capacity(sub as usize);
        out.push(FieldElem::ZERO);
        let mut cur = FieldElem::ONE;
        for _ in 0..sub - 1 {
            out.push(cur);
            cur = self.mul(cur, gamma);
        }
        Ok(out)
    }

    /// Canonical primitive element of F_{q^d}: smallest encoding among
    /// elements of multiplicative order q^d - 1.
    pub fn subfield_primitive(&self, d: u32) -> Result<FieldElem> {
        self.check_divisor(d)?;
        if d == self.m {
            return Ok(self.primitive);
        }
        let sub = nt::checked_pow(self.q, d).unwrap_or(u128::MAX);
        if sub > ENUM_LIMIT {
            return Err(Error::ScaleGuard {
                what: "subfield size",
                value: sub,
                limit: ENUM_LIMIT,
            });
        }
        let (gamma, sub) = self.subfield_generator(d);
        let order = sub - 1;
        if order == 1 {
            return Ok(FieldElem::ONE);
        }
        let mut best: Option<FieldElem> = None;
        let mut cur = FieldElem::ONE;
        for j in 0..order {
            if nt::gcd(j, order) == 1 && best.is_none_or(|b| cur < b) {
                best = Some(cur);
            }
            cur = self.mul(cur, gamma);
        }
        Ok(best.expect("a generator exists"))
    }

    /// `(1, β, β², …, β^{d-1})` with β the canonical primitive element of F_{q^d}.
    pub fn subfield_basis(&self, d: u32) -> Result<Vec<FieldElem>> {
        let beta = self.subfield_primitive(d)?;
        Ok(self.power_basis(beta, d as usize))
    }

    /// `(1, b, …, b^{len-1})`.
    pub fn power_basis(&self, b: FieldElem, len: usize) -> Vec<FieldElem> {
        let mut out = Vec::with_capacity(len);
        let mut cur = FieldElem::ONE;
        for _ in 0..len {
            out.push(cur);
            cur = self.mul(cur, b);
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.size))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(1..self.size))
    }

    /// Uniform element of the base field F_q.
    pub fn random_base<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        for &b in &self.base_basis {
            let c = self.prime_elem(rng.gen_range(0..self.p));
            acc = self.add(acc, self.mul(c, b));
        }
        acc
    }

    /// `dst[i] -= factor * src[i]`.
    pub fn axpy(&self, dst: &mut [FieldElem], factor: FieldElem, src: &[FieldElem]) {
        debug_assert_eq!(dst.len(), src.len());
        if factor.0 == 0 {
            return;
        }
        if self.logs.is_none() {
            if let Backend::Binary { low, .. } = &self.backend {
                let f = BinFactor::new(factor.0);
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 != 0 {
                        d.0 ^= bin_reduce(f.clmul(s.0), self.degree, *low);
                    }
                }
                return;
            }
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            if s.0 != 0 {
                *d = self.sub(*d, self.mul(factor, s));
            }
        }
    }

    /// `row[i] *= factor`.
    pub fn scale(&self, row: &mut [FieldElem], factor: FieldElem) {
        for x in row.iter_mut() {
            *x = self.mul(*x, factor);
        }
    }
}

fn canonical_modulus(p: u64, degree: u32) -> Result<Vec<u64>> {
    let d = degree as usize;
    let count = p.pow(degree);
    for enc in 0..count {
        let mut f = Vec::with_capacity(d + 1);
        let mut x = enc;
        for _ in 0..d {
            f.push(x % p);
            x /= p;
        }
        f.push(1);
        if d > 1 && f[0] == 0 {
            continue;
        }
        if poly::is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    Err(Error::NoIrreducible(degree))
}
