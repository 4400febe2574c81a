//! Exact rational helpers: l-adic valuations, residues, square classes,
//! integer factorization and string encoding of rationals.

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Valuation reported for zero.
pub const INFINITE_ORD: i64 = i64::MAX;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

pub fn pow_l(l: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(l), k as usize)
}

/// `l^k` as a rational, `k` may be negative.
pub fn pow_lq(l: u64, k: i64) -> BigRational {
    let p = pow_l(l, k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn ord_int(n: &BigInt, l: u64) -> i64 {
    if n.is_zero() {
        return INFINITE_ORD;
    }
    let l = BigInt::from(l);
    let mut m = n.clone();
    let mut k = 0;
    loop {
        let (quo, rem) = m.div_rem(&l);
        if !rem.is_zero() {
            return k;
        }
        m = quo;
        k += 1;
    }
}

pub fn ord(x: &BigRational, l: u64) -> i64 {
    if x.is_zero() {
        return INFINITE_ORD;
    }
    ord_int(x.numer(), l) - ord_int(x.denom(), l)
}

fn mod_big(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

/// Residue of an l-integral rational in `Z/lZ`.
pub fn residue(x: &BigRational, l: u64) -> u64 {
    residue_mod(x, l, 1)
}

/// Residue of an l-integral rational modulo `l^k`.
pub fn residue_mod(x: &BigRational, l: u64, k: u32) -> u64 {
    debug_assert!(x.is_zero() || ord(x, l) >= 0);
    let m = pow_l(l, k).to_u64().expect("modulus fits u64");
    let n = mod_big(x.numer(), m);
    let d = mod_big(x.denom(), m);
    mulmod(n, inv_mod(d, m), m)
}

/// Residue of `x / l^k` modulo `l`; `x` must have valuation at least `k`.
pub fn residue_shift(x: &BigRational, l: u64, k: u32) -> u64 {
    if x.is_zero() {
        return 0;
    }
    residue(&(x / pow_lq(l, k as i64)), l)
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse modulo `m` (any modulus, `gcd(a, m) = 1`).
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let qt = r / new_r;
        (t, new_t) = (new_t, t - qt * new_t);
        (r, new_r) = (new_r, r - qt * new_r);
    }
    assert!(r == 1, "{a} is not invertible modulo {m}");
    t.rem_euclid(m as i128) as u64
}

/// Legendre symbol `(a | p)` for an odd prime `p`; 0 when `p | a`.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn legendre_big(a: &BigInt, p: u64) -> i32 {
    legendre(mod_big(a, p), p)
}

/// Splits `x = l^k * u` with `u` an l-unit.
pub fn unit_part(x: &BigRational, l: u64) -> (i64, BigRational) {
    let k = ord(x, l);
    (k, x / pow_lq(l, k))
}

/// Whether the nonzero rational `x` is a square in `Q_l`.
pub fn is_square_qp(x: &BigRational, l: u64) -> bool {
    assert!(!x.is_zero());
    let (k, u) = unit_part(x, l);
    if k % 2 != 0 {
        return false;
    }
    if l == 2 {
        residue_mod(&u, 2, 3) == 1
    } else {
        legendre(residue(&u, l), l) == 1
    }
}

/// Exact square root of a rational, if it is a square in `Q`.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(x.numer())?;
    let d = int_sqrt_exact(x.denom())?;
    Some(BigRational::new(n, d))
}

pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

/// Prime factorization of `|n|` (n nonzero) as sorted `(prime, exponent)` pairs.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    assert!(!n.is_zero(), "factor(0)");
    let mut m = n.abs();
    let mut found: Vec<u64> = Vec::new();
    let mut p = 2u64;
    while p < (1 << 20) {
        if m.is_one() {
            break;
        }
        if let Some(small) = m.to_u64() {
            if small < p * p {
                found.push(small);
                m = BigInt::one();
                break;
            }
        }
        let bp = BigInt::from(p);
        loop {
            let (quo, rem) = m.div_rem(&bp);
            if !rem.is_zero() {
                break;
            }
            found.push(p);
            m = quo;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        match m.to_u64() {
            Some(rest) => factor_u64(rest, &mut found),
            None => return Err(Error::FactorizationTooHard(n.to_string())),
        }
    }
    found.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in found {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn prime_support(x: &BigRational) -> Result<Vec<u64>> {
    let mut ps: Vec<u64> = factor(x.numer())?
        .into_iter()
        .chain(factor(x.denom())?)
        .map(|(p, _)| p)
        .collect();
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

/// Squarefree integer representing the class of a nonzero rational in `Q*/Q*^2`.
pub fn squarefree_class(x: &BigRational) -> Result<BigInt> {
    assert!(!x.is_zero());
    let mut out = BigInt::one();
    for (p, e) in factor(x.numer())?.into_iter().chain(factor(x.denom())?) {
        if e % 2 == 1 {
            out *= p;
        }
    }
    if x.is_negative() {
        out = -out;
    }
    Ok(out)
}

/// Squarefree integer class of a product of two squarefree integers.
pub fn squarefree_product(x: &BigInt, y: &BigInt) -> BigInt {
    let g = x.gcd(y);
    (x / &g) * (y / &g)
}

pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    if n.is_zero() {
        return Ok(false);
    }
    Ok(factor(n)?.iter().all(|&(_, e)| e == 1))
}

/// Formats a rational as `"num/den"`.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `(-1)^k` helper for parity exponents.
pub fn parity_is_odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

pub fn sign_of(x: &BigRational) -> BigSign {
    x.numer().sign()
}

pub(crate) mod serde_rational {
    use super::{format_rational, parse_rational};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
