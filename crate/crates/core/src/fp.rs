//! Root finding for small-degree polynomials over a prime field `F_p`.
//!
//! Polynomials are coefficient vectors, lowest degree first. Fields with
//! `p < ENUMERATION_BOUND` (in particular `F_2` and `F_3`) are searched
//! exhaustively; larger fields use `gcd(f, x^p - x)` followed by
//! equal-degree splitting.

use crate::arith::{inv_mod, mulmod, powmod};

const ENUMERATION_BOUND: u64 = 1024;

type Poly = Vec<u64>;

fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn normalize(c: &[u64], p: u64) -> Poly {
    trim(c.iter().map(|&x| x % p).collect())
}

pub fn eval(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| (mulmod(acc, x, p) + a % p) % p)
}

/// Quotient of `f` by `(x - r)` assuming `f(r) = 0`.
fn deflate(f: &[u64], r: u64, p: u64) -> Poly {
    let n = f.len();
    let mut out = vec![0; n - 1];
    let mut carry = 0;
    for i in (1..n).rev() {
        carry = (f[i] + mulmod(carry, r, p)) % p;
        out[i - 1] = carry;
    }
    out
}

fn multiplicity(f: &[u64], r: u64, p: u64) -> u32 {
    let mut g = f.to_vec();
    let mut m = 0;
    while g.len() > 1 && eval(&g, r, p) == 0 {
        g = deflate(&g, r, p);
        m += 1;
    }
    m
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    let mut quo = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        quo[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - mulmod(c, bi, p)) % p;
        }
        r = trim(r);
    }
    (trim(quo), r)
}

fn monic(f: Poly, p: u64) -> Poly {
    match f.last() {
        Some(&lead) => {
            let inv = inv_mod(lead, p);
            f.into_iter().map(|c| mulmod(c, inv, p)).collect()
        }
        None => f,
    }
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(a, p)
}

/// `base^e mod m` in `F_p[x]`.
fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
    let mut result = vec![1];
    let mut b = divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            result = divrem(&mul(&result, &b, p), m, p).1;
        }
        b = divrem(&mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    result
}

/// Splits a monic product of distinct linear factors into its roots.
fn split_linear(g: &[u64], p: u64, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push((p - g[0]) % p),
        _ => {
            for shift in 0..p {
                let h = powmod_poly(&[shift, 1], (p - 1) / 2, g, p);
                let d = gcd(g, &sub(&h, &[1], p), p);
                if d.len() > 1 && d.len() < g.len() {
                    let (other, _) = divrem(g, &d, p);
                    split_linear(&d, p, out);
                    split_linear(&monic(other, p), p, out);
                    return;
                }
            }
            unreachable!("equal-degree splitting failed over F_{p}");
        }
    }
}

/// Roots of `c` in `F_p` with their multiplicities, sorted by root.
///
/// The zero polynomial and nonzero constants have no roots.
pub fn roots(c: &[u64], p: u64) -> Vec<(u64, u32)> {
    let f = normalize(c, p);
    if f.len() <= 1 {
        return Vec::new();
    }
    let mut found: Vec<u64> = Vec::new();
    if p < ENUMERATION_BOUND || p == 2 {
        found.extend((0..p).filter(|&x| eval(&f, x, p) == 0));
    } else {
        let f = monic(f.clone(), p);
        let xp = powmod_poly(&[0, 1], p, &f, p);
        let g = gcd(&f, &sub(&xp, &[0, 1], p), p);
        split_linear(&g, p, &mut found);
        found.sort_unstable();
    }
    found.into_iter().map(|r| (r, multiplicity(&f, r, p))).collect()
}

/// Whether a monic-or-not polynomial has a root in `F_p`.
pub fn has_root(c: &[u64], p: u64) -> bool {
    !roots(c, p).is_empty()
}

/// Number of distinct roots of `c` in `F_p`.
pub fn count_roots(c: &[u64], p: u64) -> usize {
    roots(c, p).len()
}

/// Discriminant of the cubic `x^3 + a x^2 + b x + c` modulo `p`.
pub fn cubic_discriminant(a: u64, b: u64, c: u64, p: u64) -> u64 {
    let m = |x: u64, y: u64| mulmod(x, y, p);
    let k = |n: u64| n % p;
    let pos = (m(m(a, a), m(b, b)) + m(k(18), m(m(a, b), c))) % p;
    let neg = (m(k(4), m(m(b, b), b)) + m(k(4), m(m(m(a, a), a), c)) + m(k(27), m(c, c))) % p;
    (pos + p - neg) % p
}

/// Modular square root for odd `p` (Tonelli-Shanks); `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| powmod(z, (p - 1) / 2, p) == p - 1).unwrap();
    let (mut m, mut c, mut t, mut r) = (s, powmod(z, q, p), powmod(a, q, p), powmod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}
