//! Dense polynomials over a prime field, constant term first. Only what the
//! irreducibility test needs.

use crate::nt::{inv_mod, mul_mod};

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        let shift = top - df;
        for (j, &fj) in f.iter().enumerate() {
            let sub = mul_mod(c, fj, p);
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    rem(&out, f, p)
}

fn pow_rem(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, f, p);
        }
        exp >>= 1;
        if exp > 0 {
            b = mul_rem(&b, &b, f, p);
        }
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test: `f` (monic, degree d) is irreducible iff
/// gcd(x^(p^i) - x, f) = 1 for every i <= d/2.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut g = x.clone();
    for _ in 1..=d / 2 {
        g = pow_rem(&g, p, f, p);
        let mut h = g.clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        trim(&mut h);
        let common = gcd(f, &h, p);
        if common.len() != 1 {
            return false;
        }
    }
    true
}
