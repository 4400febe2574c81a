//! Tate's algorithm over `Z_(l)`: minimal model, Kodaira type, Tamagawa
//! number and reduction class at a finite prime.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{inv_mod, is_prime, legendre, mulmod, ord, pow_lq, residue, residue_shift, INFINITE_ORD};
use crate::curves::{ThreeIsogenyData, TwoIsogenyPair, WeierstrassModel};
use crate::error::{Error, Result};
use crate::fp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for Kodaira {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionClass {
    GoodOrdinary,
    GoodSupersingular,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

impl ReductionClass {
    pub fn is_good(self) -> bool {
        matches!(self, Self::GoodOrdinary | Self::GoodSupersingular)
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, Self::MultiplicativeSplit | Self::MultiplicativeNonsplit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Nonsplit,
}

/// Output of Tate's algorithm at a prime `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalReduction {
    pub l: u64,
    #[serde(skip)]
    pub minimal_model: WeierstrassModel,
    /// Scaling `u` of the transformation from the input to the minimal model.
    #[serde(skip)]
    pub u: BigRational,
    pub kodaira: Kodaira,
    #[serde(rename = "c")]
    pub tamagawa: u32,
    #[serde(rename = "vDelta")]
    pub v_delta_min: u32,
    #[serde(rename = "class")]
    pub class: ReductionClass,
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn has_v(x: &BigRational, l: u64, k: i64) -> bool {
    ord(x, l) >= k
}

/// Residue of `x / l^k` for `x` divisible by `l^k`.
fn shifted(x: &BigRational, l: u64, k: u32) -> u64 {
    residue_shift(x, l, k)
}

/// `b^2 + 4ac mod l`, the discriminant of `a X^2 + b X - c`.
fn quad_disc(b: u64, c: u64, a: u64, l: u64) -> u64 {
    let (b, c, a, l) = (b as u128, c as u128, a as u128, l as u128);
    ((b * b + 4 * (a * c % l)) % l) as u64
}

/// Translates by integers `r`, `t` (`u = 1`, `s = 0`).
fn shift_rt(m: &WeierstrassModel, r: &BigRational, t: &BigRational) -> WeierstrassModel {
    m.transform(&BigRational::one(), r, &BigRational::zero(), t).expect("u = 1")
}

/// Smallest `k >= 0` with `l^k` clearing every denominator of the model at `l`.
fn integrality_exponent(m: &WeierstrassModel, l: u64) -> i64 {
    let weights = [1, 2, 3, 4, 6];
    m.coefficients()
        .iter()
        .zip(weights)
        .filter(|(a, _)| !a.is_zero())
        .map(|(a, w)| {
            let v = ord(a, l);
            if v >= 0 {
                0
            } else {
                (-v + w - 1) / w
            }
        })
        .max()
        .unwrap_or(0)
}

/// Trace of Frobenius `l + 1 - #E(F_l)` for an odd prime of good reduction.
fn trace_of_frobenius(m: &WeierstrassModel, l: u64) -> i64 {
    let inv = m.invariants();
    let i4 = inv_mod(4, l);
    let i2 = inv_mod(2, l);
    let c2 = mulmod(residue(&inv.b2, l), i4, l);
    let c1 = mulmod(residue(&inv.b4, l), i2, l);
    let c0 = mulmod(residue(&inv.b6, l), i4, l);
    let f = [c0, c1, c2, 1];
    -(0..l).map(|x| legendre(fp::eval(&f, x, l), l) as i64).sum::<i64>()
}

fn good_class(m: &WeierstrassModel, l: u64) -> ReductionClass {
    let supersingular = if l <= 3 {
        ord(&m.j_invariant(), l) > 0
    } else {
        trace_of_frobenius(m, l) == 0
    };
    if supersingular {
        ReductionClass::GoodSupersingular
    } else {
        ReductionClass::GoodOrdinary
    }
}

/// Runs Tate's algorithm on `model` at the prime `l`.
pub fn tate_algorithm(model: &WeierstrassModel, l: u64) -> Result<LocalReduction> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    let k = integrality_exponent(model, l);
    let mut u_total = pow_lq(l, -k);
    let mut m = model.scale(&u_total)?;
    let lq = int(l);
    let l2 = &lq * &lq;

    loop {
        let inv = m.invariants();
        let n = ord(&inv.disc, l);
        debug_assert!(n >= 0 && n != INFINITE_ORD);
        let done = |m: WeierstrassModel, kodaira, c, class| LocalReduction {
            l,
            minimal_model: m,
            u: u_total.clone(),
            kodaira,
            tamagawa: c,
            v_delta_min: n as u32,
            class,
        };
        if n == 0 {
            let class = good_class(&m, l);
            return Ok(done(m, Kodaira::I0, 1, class));
        }

        // Move the singular point of the reduction to (0, 0).
        let (r, t) = if l == 2 {
            if has_v(&inv.b2, 2, 1) {
                let r = residue(m.a4(), 2);
                let t = (r * (1 + residue(m.a2(), 2) + residue(m.a4(), 2)) + residue(m.a6(), 2)) % 2;
                (r, t)
            } else {
                let r = residue(m.a3(), 2);
                (r, (r + residue(m.a4(), 2)) % 2)
            }
        } else if l == 3 {
            let r = if has_v(&inv.b2, 3, 1) {
                residue(&-&inv.b6, 3)
            } else {
                residue(&-(&inv.b2 * &inv.b4), 3)
            };
            (r, residue(&(m.a1() * int(r) + m.a3()), 3))
        } else {
            let r = if has_v(&inv.c4, l, 1) {
                residue(&(-&inv.b2 / int(12)), l)
            } else {
                residue(&(-(&inv.c6 + &inv.b2 * &inv.c4) / (int(12) * &inv.c4)), l)
            };
            (r, residue(&(-(m.a1() * int(r) + m.a3()) / int(2)), l))
        };
        m = shift_rt(&m, &int(r), &int(t));
        debug_assert!(has_v(m.a3(), l, 1) && has_v(m.a4(), l, 1) && has_v(m.a6(), l, 1));

        let b2 = m.invariants().b2;
        if !has_v(&b2, l, 1) {
            let split = fp::has_root(&[residue(&-m.a2(), l), residue(m.a1(), l), 1], l);
            let nn = n as u32;
            return Ok(if split {
                done(m, Kodaira::In(nn), nn, ReductionClass::MultiplicativeSplit)
            } else {
                let c = if nn.is_multiple_of(2) { 2 } else { 1 };
                done(m, Kodaira::In(nn), c, ReductionClass::MultiplicativeNonsplit)
            });
        }
        if !has_v(m.a6(), l, 2) {
            return Ok(done(m, Kodaira::II, 1, ReductionClass::Additive));
        }
        if !has_v(&m.invariants().b8, l, 3) {
            return Ok(done(m, Kodaira::III, 2, ReductionClass::Additive));
        }
        if !has_v(&m.invariants().b6, l, 3) {
            let roots = fp::has_root(&[residue(&-(m.a6() / &l2), l), shifted(m.a3(), l, 1), 1], l);
            let c = if roots { 3 } else { 1 };
            return Ok(done(m, Kodaira::IV, c, ReductionClass::Additive));
        }

        // Arrange l | a1, a2; l^2 | a3, a4; l^3 | a6.
        let (s, t) = if l == 2 {
            (int(residue(m.a2(), 2)), int(2 * shifted(m.a6(), 2, 2)))
        } else {
            let half = inv_mod(2, l);
            let s = mulmod((l - residue(m.a1(), l)) % l, half, l);
            let t = mulmod((l - shifted(m.a3(), l, 1)) % l, half, l);
            (int(s), &lq * int(t))
        };
        m = m.transform(&BigRational::one(), &BigRational::zero(), &s, &t)?;
        debug_assert!(has_v(m.a1(), l, 1) && has_v(m.a2(), l, 1));
        debug_assert!(has_v(m.a3(), l, 2) && has_v(m.a4(), l, 2) && has_v(m.a6(), l, 3));

        let cubic = [shifted(m.a6(), l, 3), shifted(m.a4(), l, 2), shifted(m.a2(), l, 1), 1];
        let roots = fp::roots(&cubic, l);
        let max_mult = roots.iter().map(|r| r.1).max().unwrap_or(1);
        if max_mult == 1 {
            let c = 1 + roots.len() as u32;
            return Ok(done(m, Kodaira::I0Star, c, ReductionClass::Additive));
        }
        let root = roots.iter().find(|r| r.1 == max_mult).unwrap().0;
        m = shift_rt(&m, &(&lq * int(root)), &BigRational::zero());

        if max_mult == 2 {
            let (c, n_star) = instar_subprocedure(&mut m, l);
            // v(Δ) = f + n + 4 with f = 2 away from 2
            debug_assert!(l == 2 || n_star as i64 == n - 6);
            return Ok(done(m, Kodaira::InStar(n_star), c, ReductionClass::Additive));
        }

        // Triple root: now l^2 | a2, l^3 | a4, l^4 | a6.
        let a3t = shifted(m.a3(), l, 2);
        let a6t = shifted(m.a6(), l, 4);
        let quad = [(l - a6t) % l, a3t, 1];
        if quad_disc(a3t, a6t, 1, l) != 0 {
            let c = if fp::has_root(&quad, l) { 3 } else { 1 };
            return Ok(done(m, Kodaira::IVStar, c, ReductionClass::Additive));
        }
        let y = if l == 2 { a6t % 2 } else { mulmod((l - a3t) % l, inv_mod(2, l), l) };
        m = shift_rt(&m, &BigRational::zero(), &(&l2 * int(y)));
        if !has_v(m.a4(), l, 4) {
            return Ok(done(m, Kodaira::IIIStar, 2, ReductionClass::Additive));
        }
        if !has_v(m.a6(), l, 6) {
            return Ok(done(m, Kodaira::IIStar, 1, ReductionClass::Additive));
        }
        m = m.scale(&lq)?;
        u_total *= &lq;
    }
}

/// Subprocedure for a double root of the auxiliary cubic at the origin.
/// Returns `(c, n)` for type `I_n*`.
fn instar_subprocedure(m: &mut WeierstrassModel, l: u64) -> (u32, u32) {
    let lq = int(l);
    let (mut ix, mut iy) = (3u32, 3u32);
    let (mut mx, mut my) = (&lq * &lq, &lq * &lq);
    let half = if l == 2 { 0 } else { inv_mod(2, l) };
    loop {
        let a2t = residue(&(m.a2() / &lq), l);
        let a3t = residue(&(m.a3() / &my), l);
        let a6t = residue(&(m.a6() / (&mx * &my)), l);
        if quad_disc(a3t, a6t, 1, l) != 0 {
            let c = if fp::has_root(&[(l - a6t) % l, a3t, 1], l) { 4 } else { 2 };
            return (c, ix + iy - 5);
        }
        let y = if l == 2 { a6t } else { mulmod((l - a3t) % l, half, l) };
        *m = shift_rt(m, &BigRational::zero(), &(&my * int(y)));
        my *= &lq;
        iy += 1;

        let a4t = residue(&(m.a4() / (&lq * &mx)), l);
        let a6t = residue(&(m.a6() / (&mx * &my)), l);
        if quad_disc(a4t, (l - a6t) % l, a2t, l) != 0 {
            let c = if fp::has_root(&[a6t, a4t, a2t], l) { 4 } else { 2 };
            return (c, ix + iy - 5);
        }
        let x = if l == 2 {
            a6t
        } else {
            mulmod((l - a4t) % l, inv_mod(2 * a2t % l, l), l)
        };
        *m = shift_rt(m, &(&mx * int(x)), &BigRational::zero());
        mx *= &lq;
        ix += 1;
    }
}

/// Whether a multiplicative place is split or nonsplit.
pub fn classify_multiplicative(red: &LocalReduction) -> Result<Splitting> {
    match red.class {
        ReductionClass::MultiplicativeSplit => Ok(Splitting::Split),
        ReductionClass::MultiplicativeNonsplit => Ok(Splitting::Nonsplit),
        _ => Err(Error::NotMultiplicative(red.l)),
    }
}

/// A pair of curves linked by a rational isogeny of prime degree.
pub trait IsogenousCurves {
    fn degree(&self) -> u64;
    fn source(&self) -> &WeierstrassModel;
    fn target(&self) -> &WeierstrassModel;
}

impl IsogenousCurves for TwoIsogenyPair {
    fn degree(&self) -> u64 {
        2
    }
    fn source(&self) -> &WeierstrassModel {
        &self.e
    }
    fn target(&self) -> &WeierstrassModel {
        &self.e_prime
    }
}

impl IsogenousCurves for ThreeIsogenyData {
    fn degree(&self) -> u64 {
        3
    }
    fn source(&self) -> &WeierstrassModel {
        &self.base
    }
    fn target(&self) -> &WeierstrassModel {
        &self.image
    }
}

/// `ord_p(c(E')/c(E))` at `l`, with `p` the isogeny degree.
pub fn tamagawa_ratio<I: IsogenousCurves>(iso: &I, l: u64) -> Result<i64> {
    let c = tate_algorithm(iso.source(), l)?.tamagawa;
    let c_prime = tate_algorithm(iso.target(), l)?.tamagawa;
    Ok(c_ord(c_prime, iso.degree()) - c_ord(c, iso.degree()))
}

pub(crate) fn c_ord(c: u32, p: u64) -> i64 {
    crate::arith::ord_int(&BigInt::from(c), p)
}
