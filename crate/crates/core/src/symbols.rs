//! Hilbert symbols on the completions of `Q`, quadratic Artin symbols, and
//! the norm criterion for `-1` in tame cyclic extensions of p-adic fields.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{is_prime, legendre, residue, residue_mod, unit_part};
use crate::error::{Error, Result};

/// A sign `±1` with multiplicative structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `(-1)^k`.
    pub fn pow_minus_one(k: i64) -> Self {
        Self::from_parity(k.rem_euclid(2) == 1)
    }

    pub fn from_bool(plus: bool) -> Self {
        Self::from_parity(!plus)
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_i8())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.to_i8())
    }
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Real,
}

impl Place {
    pub fn finite(l: u64) -> Result<Self> {
        if is_prime(l) {
            Ok(Place::Finite(l))
        } else {
            Err(Error::NotPrime(l))
        }
    }

    pub fn prime(self) -> Option<u64> {
        match self {
            Place::Finite(l) => Some(l),
            Place::Real => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(l) => write!(f, "{l}"),
            Place::Real => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "real" | "oo" => Ok(Place::Real),
            t => Place::finite(t.parse().map_err(|_| Error::Parse(format!("bad place {t:?}")))?),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn eps(u8: u64) -> u64 {
    ((u8 - 1) / 2) % 2
}

fn omega(u8: u64) -> u64 {
    ((u8 * u8 - 1) / 8) % 2
}

/// The Hilbert symbol `(x, y)_v`.
pub fn hilbert(x: &BigRational, y: &BigRational, place: Place) -> Result<Sign> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let l = match place {
        Place::Real => return Ok(Sign::from_bool(x.is_positive() || y.is_positive())),
        Place::Finite(l) => l,
    };
    let (a, u) = unit_part(x, l);
    let (b, v) = unit_part(y, l);
    if l == 2 {
        let (u, v) = (residue_mod(&u, 2, 3), residue_mod(&v, 2, 3));
        let e = eps(u) * eps(v) + a.rem_euclid(2) as u64 * omega(v) + b.rem_euclid(2) as u64 * omega(u);
        return Ok(Sign::from_parity(e % 2 == 1));
    }
    let mut s = Sign::pow_minus_one(a * b * ((l as i64 - 1) / 2 % 2));
    if b.rem_euclid(2) == 1 {
        s *= Sign::from_bool(legendre(residue(&u, l), l) == 1);
    }
    if a.rem_euclid(2) == 1 {
        s *= Sign::from_bool(legendre(residue(&v, l), l) == 1);
    }
    Ok(s)
}

pub fn hilbert_int(x: i64, y: i64, place: Place) -> Result<Sign> {
    hilbert(&BigRational::from_integer(x.into()), &BigRational::from_integer(y.into()), place)
}

/// `(-1, Q_v(sqrt d)/Q_v)`: whether `-1` is a norm from `Q_v(sqrt d)`.
pub fn artin_quadratic(d: &BigInt, place: Place) -> Result<Sign> {
    hilbert(&BigRational::from_integer(d.clone()), &BigRational::from_integer((-1).into()), place)
}

/// Symbolic data of a cyclic tame extension `F'/F` of p-adic fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalFieldDatum {
    pub p: u64,
    /// Degree of the residue field of `F` over `F_p`.
    pub f_residue: u32,
    /// Ramification index of `F'/F`.
    pub e_ram: u64,
    /// `[F' : F]`.
    pub degree: u64,
}

impl LocalFieldDatum {
    pub fn new(p: u64, f_residue: u32, e_ram: u64, degree: u64) -> Result<Self> {
        let bad = |why: &str| Err(Error::InconsistentDatum(format!("{why}: (p, f, e, deg) = ({p}, {f_residue}, {e_ram}, {degree})")));
        if p == 2 || !is_prime(p) {
            return bad("p must be an odd prime");
        }
        if f_residue == 0 || e_ram == 0 || degree == 0 {
            return bad("degrees must be positive");
        }
        if !degree.is_multiple_of(e_ram) {
            return bad("e must divide the degree");
        }
        if !(p - 1).is_multiple_of(degree) {
            return bad("the degree must divide p - 1");
        }
        Ok(LocalFieldDatum { p, f_residue, e_ram, degree })
    }
}

/// `+1` iff `-1` is a norm from `F'`: the residue field of `F` has even
/// degree, or `(p - 1)/e` is even.
pub fn lemma51(datum: &LocalFieldDatum) -> Sign {
    Sign::from_bool(datum.f_residue.is_multiple_of(2) || ((datum.p - 1) / datum.e_ram).is_multiple_of(2))
}
