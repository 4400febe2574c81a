//! Descent via 2-isogeny over `Q`.
//!
//! For `E: y^2 = x^3 + a x^2 + b x` and `E': y^2 = x^3 - 2a x^2 + δ x`, the
//! Selmer group of `φ: E -> E'` consists of squarefree `d | δ` whose torsor
//! `d w^2 = d^2 u^4 - 2a d u^2 v^2 + δ v^4` is everywhere locally solvable;
//! the Selmer group of the dual uses `(a, b)` in place of `(-2a, δ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{factor, is_prime, is_square_qp, ord_int, pow_l, squarefree_class, squarefree_product};
use crate::curves::TwoIsogenyPair;
use crate::error::{Error, Result};
use crate::symbols::{Place, Sign};

/// Times the l-adic search precision may be doubled before giving up.
pub const MAX_DOUBLINGS: u32 = 3;
/// Default naive-height bound for the rational point search.
pub const SEARCH_HEIGHT: i64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Direction {
    /// `φ: E -> E'`, classes dividing `δ`.
    Phi,
    /// `φ̂: E' -> E`, classes dividing `b`.
    PhiHat,
}

/// `d w^2 = d^2 u^4 + A d u^2 v^2 + B v^4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torsor {
    pub d: BigInt,
    pub a: BigInt,
    pub b: BigInt,
}

impl Torsor {
    pub fn new(d: BigInt, a: BigInt, b: BigInt) -> Result<Self> {
        let ok = !d.is_zero()
            && crate::arith::is_squarefree(&d)?
            && (&b % &d).is_zero()
            && !b.is_zero()
            && !(&a * &a - BigInt::from(4) * &b).is_zero();
        if !ok {
            return Err(Error::DegenerateFamily(format!("torsor d = {d}, A = {a}, B = {b}")));
        }
        Ok(Torsor { d, a, b })
    }

    /// `d F(x, y)` as integer coefficients in `x`, for the affine chart `(x : 1)`.
    fn chart_x(&self) -> Vec<BigInt> {
        let d = &self.d;
        vec![d * &self.b, BigInt::zero(), d * d * &self.a, BigInt::zero(), d * d * d]
    }

    /// `d F(1, l t)` as a polynomial in `t`.
    fn chart_t(&self, l: u64) -> Vec<BigInt> {
        let d = &self.d;
        let l2 = pow_l(l, 2);
        let l4 = pow_l(l, 4);
        vec![d * d * d, BigInt::zero(), d * d * &self.a * l2, BigInt::zero(), d * &self.b * l4]
    }

    /// Primes where solvability is not automatic: those dividing `2 B (A^2 - 4B)`.
    pub fn bad_primes(&self) -> Result<Vec<u64>> {
        let disc = &self.a * &self.a - BigInt::from(4) * &self.b;
        let mut ps: Vec<u64> = factor(&(BigInt::from(2) * &self.b * disc))?.into_iter().map(|(p, _)| p).collect();
        ps.sort_unstable();
        Ok(ps)
    }
}

/// Taylor coefficients of `h(x0 + s y)` in `y`.
fn shift_scale(h: &[BigInt], x0: &BigInt, s: &BigInt) -> Vec<BigInt> {
    let n = h.len();
    let mut c = h.to_vec();
    // Horner-style synthetic division for the shift.
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * x0;
            c[j] += t;
        }
    }
    let mut sp = BigInt::one();
    for ci in c.iter_mut() {
        *ci *= &sp;
        sp *= s;
    }
    c
}

fn is_square_int_qp(n: &BigInt, l: u64) -> bool {
    is_square_qp(&BigRational::from_integer(n.clone()), l)
}

#[derive(Debug, PartialEq, Eq)]
enum Search {
    Yes,
    No,
    Inconclusive,
}

/// Whether `h` takes a square value (possibly 0) on `x0 + l^k Z_l`.
fn disc_search(h: &[BigInt], l: u64, x0: &BigInt, k: u32, max_k: u32) -> Search {
    let c = shift_scale(h, x0, &pow_l(l, k));
    if c[0].is_zero() {
        return Search::Yes;
    }
    let v0 = ord_int(&c[0], l);
    let higher = c[1..].iter().filter(|x| !x.is_zero()).map(|x| ord_int(x, l)).min().unwrap_or(i64::MAX);
    let need = if l == 2 { 3 } else { 1 };
    if higher >= v0 + need {
        return if is_square_int_qp(&c[0], l) { Search::Yes } else { Search::No };
    }
    if higher > v0 && v0 % 2 == 1 {
        return Search::No;
    }
    // Hensel: a simple root of h in the disc.
    if !c[1].is_zero() && v0 > 2 * ord_int(&c[1], l) {
        return Search::Yes;
    }
    if k >= max_k {
        return Search::Inconclusive;
    }
    let step = pow_l(l, k);
    let mut inconclusive = false;
    for j in 0..l {
        match disc_search(h, l, &(x0 + &step * j), k + 1, max_k) {
            Search::Yes => return Search::Yes,
            Search::Inconclusive => inconclusive = true,
            Search::No => {}
        }
    }
    if inconclusive {
        Search::Inconclusive
    } else {
        Search::No
    }
}

/// Solvability of the torsor over `Q_v`.
pub fn local_solvable(t: &Torsor, place: Place, precision: u32) -> Result<bool> {
    let l = match place {
        Place::Real => {
            let disc = &t.a * &t.a - BigInt::from(4) * &t.b;
            return Ok(t.d.is_positive() || t.b.is_negative() || (!disc.is_negative() && t.a.is_positive()));
        }
        Place::Finite(l) => l,
    };
    let x = disc_search(&t.chart_x(), l, &BigInt::zero(), 0, precision);
    if x == Search::Yes {
        return Ok(true);
    }
    let y = disc_search(&t.chart_t(l), l, &BigInt::zero(), 0, precision);
    match (x, y) {
        (_, Search::Yes) => Ok(true),
        (Search::No, Search::No) => Ok(false),
        _ => Err(Error::PrecisionExhausted { place: place.to_string(), precision }),
    }
}

/// Starting precision for the l-adic search.
pub fn initial_precision(t: &Torsor, l: u64) -> u32 {
    let disc = &t.a * &t.a - BigInt::from(4) * &t.b;
    let v = ord_int(&(BigInt::from(16) * &t.b * disc), l) as u32;
    (2 * v + 3).max(v + 10)
}

/// [`local_solvable`] with precision doubling.
pub fn local_solvable_auto(t: &Torsor, place: Place) -> Result<bool> {
    let Place::Finite(l) = place else {
        return local_solvable(t, place, 0);
    };
    let mut precision = initial_precision(t, l);
    let mut doublings = 0;
    loop {
        match local_solvable(t, place, precision) {
            Err(Error::PrecisionExhausted { .. }) if doublings < MAX_DOUBLINGS => {
                precision *= 2;
                doublings += 1;
            }
            other => return other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelmerGroup {
    pub direction: Direction,
    #[serde(serialize_with = "serialize_classes")]
    pub classes: Vec<BigInt>,
    pub dimension: u32,
}

fn serialize_classes<S: serde::Serializer>(c: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for x in c {
        match x.to_i64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Clone, Copy, Debug)]
pub struct DescentOptions {
    pub seed: u64,
    pub search_height: i64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { seed: 0, search_height: SEARCH_HEIGHT }
    }
}

/// `(A, B)` of the torsors for a direction, on the integral model of the pair.
pub fn torsor_coefficients(pair: &TwoIsogenyPair, dir: Direction) -> (BigInt, BigInt) {
    let p = pair.integral();
    match dir {
        Direction::Phi => ((BigInt::from(-2) * p.a.to_integer()), p.delta.to_integer()),
        Direction::PhiHat => (p.a.to_integer(), p.b.to_integer()),
    }
}

fn signed_squarefree_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::one()];
    for (p, _) in factor(n)? {
        let more: Vec<BigInt> = out.iter().map(|d| d * p).collect();
        out.extend(more);
    }
    let neg: Vec<BigInt> = out.iter().map(|d| -d).collect();
    out.extend(neg);
    out.sort();
    Ok(out)
}

const SQUARES_MOD_64: [bool; 64] = {
    let mut t = [false; 64];
    let mut i = 0;
    while i < 64 {
        t[(i * i) % 64] = true;
        i += 1;
    }
    t
};

/// Rational points `(x, y)` with `x = m/e^2`, `|m| <= h`, `e^2 <= h`, `x != 0`, on
/// `y^2 = x^3 + A x^2 + B x`; returns the squarefree classes of their `x`.
pub fn point_classes(a: &BigInt, b: &BigInt, h: i64) -> Result<Vec<BigInt>> {
    let (Some(a), Some(b)) = (a.to_i128(), b.to_i128()) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut e: i128 = 1;
    while e * e <= h as i128 {
        let e2 = e * e;
        for m in -(h as i128)..=(h as i128) {
            if m == 0 {
                continue;
            }
            // y^2 e^6 = m (m^2 + A m e^2 + B e^4)
            let inner = m * m + a * m * e2 + b * e2 * e2;
            let Some(val) = m.checked_mul(inner) else { continue };
            if val < 0 || !SQUARES_MOD_64[(val & 63) as usize] {
                continue;
            }
            let r = (val as f64).sqrt() as i128;
            if (r - 1..=r + 1).any(|s| s >= 0 && s * s == val) && m.gcd(&e) == 1 {
                let c = squarefree_class(&BigRational::new(m.into(), e2.into()))?;
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        e += 1;
    }
    out.sort();
    Ok(out)
}

/// The Selmer group for `dir`, checked for group closure, for the image of
/// `(0, 0)` and for containing the classes of small rational points.
pub fn selmer_group(pair: &TwoIsogenyPair, dir: Direction, opts: &DescentOptions) -> Result<SelmerGroup> {
    let (a, b) = torsor_coefficients(pair, dir);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut classes = Vec::new();
    for d in signed_squarefree_divisors(&b)? {
        let t = Torsor::new(d.clone(), a.clone(), b.clone())?;
        let mut ok = local_solvable_auto(&t, Place::Real)?;
        if ok {
            for l in t.bad_primes()? {
                if !local_solvable_auto(&t, Place::Finite(l))? {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let bad = t.bad_primes()?;
            let extra = loop {
                let l = rng.gen_range(3..1000u64);
                if is_prime(l) && !bad.contains(&l) {
                    break l;
                }
            };
            if !local_solvable_auto(&t, Place::Finite(extra))? {
                return Err(Error::NotAGroup(format!("d = {d} fails at the good prime {extra}")));
            }
            classes.push(d);
        }
    }
    for x in &classes {
        for y in &classes {
            if !classes.contains(&squarefree_product(x, y)) {
                return Err(Error::NotAGroup(format!("{x} * {y} missing")));
            }
        }
    }
    let b_class = squarefree_class(&BigRational::from_integer(b.clone()))?;
    if !classes.contains(&b_class) {
        return Err(Error::NotAGroup(format!("image {b_class} of (0, 0) missing")));
    }
    for c in point_classes(&a, &b, opts.search_height)? {
        if !classes.contains(&c) {
            return Err(Error::NotAGroup(format!("class {c} of a rational point missing")));
        }
    }
    let dimension = classes.len().trailing_zeros();
    if classes.len() != 1 << dimension {
        return Err(Error::NotAGroup(format!("order {}", classes.len())));
    }
    Ok(SelmerGroup { direction: dir, classes, dimension })
}

/// `(-1)^(dim S^φ - dim S^φ̂)`; the torsion correction vanishes since
/// `#E(Q)[φ] = #E'(Q)[φ̂] = 2`.
pub fn parity_oracle(pair: &TwoIsogenyPair, opts: &DescentOptions) -> Result<Sign> {
    let s = selmer_group(pair, Direction::Phi, opts)?;
    let s_hat = selmer_group(pair, Direction::PhiHat, opts)?;
    Ok(Sign::pow_minus_one(s.dimension as i64 - s_hat.dimension as i64))
}
