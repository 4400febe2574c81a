//! Weierstrass models over `Q`, the `y^2 = x^3 + a x^2 + b x` 2-isogeny
//! family, 3-isogenies by Vélu's formulas, and quadratic twists.
//!
//! Coordinate changes follow the usual convention
//! `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`, so `Δ' = u^-12 Δ`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, is_squarefree, pow_lq, q, qi, serde_rational, squarefree_class};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// A long Weierstrass equation `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
/// with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct WeierstrassModel {
    a: [BigRational; 5],
}

#[derive(Clone, Serialize, Deserialize)]
struct RawModel {
    #[serde(with = "serde_rational")]
    a1: BigRational,
    #[serde(with = "serde_rational")]
    a2: BigRational,
    #[serde(with = "serde_rational")]
    a3: BigRational,
    #[serde(with = "serde_rational")]
    a4: BigRational,
    #[serde(with = "serde_rational")]
    a6: BigRational,
}

impl TryFrom<RawModel> for WeierstrassModel {
    type Error = Error;
    fn try_from(r: RawModel) -> Result<Self> {
        WeierstrassModel::new(r.a1, r.a2, r.a3, r.a4, r.a6)
    }
}

impl From<WeierstrassModel> for RawModel {
    fn from(m: WeierstrassModel) -> Self {
        let [a1, a2, a3, a4, a6] = m.a;
        RawModel { a1, a2, a3, a4, a6 }
    }
}

/// The standard quantities attached to a Weierstrass model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: BigRational,
    pub b4: BigRational,
    pub b6: BigRational,
    pub b8: BigRational,
    pub c4: BigRational,
    pub c6: BigRational,
    pub disc: BigRational,
    pub j: BigRational,
}

impl Invariants {
    /// Computes the invariants of `[a1, a2, a3, a4, a6]`, failing on a singular model.
    pub fn compute(a: &[BigRational; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        let b2 = a1 * a1 + q(4) * a2;
        let b4 = q(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + q(4) * a6;
        let b8 = a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - q(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + q(36) * &b2 * &b4 - q(216) * &b6;
        let disc = -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6
            + q(9) * &b2 * &b4 * &b6;
        if disc.is_zero() {
            return Err(Error::SingularModel);
        }
        let j = &c4 * &c4 * &c4 / &disc;
        Ok(Invariants { b2, b4, b6, b8, c4, c6, disc, j })
    }
}

/// A point of `E(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(BigRational, BigRational),
}

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Point::Affine(x, y)
    }
}

impl WeierstrassModel {
    pub fn new(
        a1: BigRational,
        a2: BigRational,
        a3: BigRational,
        a4: BigRational,
        a6: BigRational,
    ) -> Result<Self> {
        let a = [a1, a2, a3, a4, a6];
        Invariants::compute(&a)?;
        Ok(WeierstrassModel { a })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(q);
        Self::new(a1, a2, a3, a4, a6)
    }

    /// `y^2 = x^3 + a x^2 + b x`.
    pub fn ab(a: &BigRational, b: &BigRational) -> Result<Self> {
        Self::new(q(0), a.clone(), q(0), b.clone(), q(0))
    }

    pub fn a1(&self) -> &BigRational {
        &self.a[0]
    }
    pub fn a2(&self) -> &BigRational {
        &self.a[1]
    }
    pub fn a3(&self) -> &BigRational {
        &self.a[2]
    }
    pub fn a4(&self) -> &BigRational {
        &self.a[3]
    }
    pub fn a6(&self) -> &BigRational {
        &self.a[4]
    }

    pub fn coefficients(&self) -> &[BigRational; 5] {
        &self.a
    }

    pub fn invariants(&self) -> Invariants {
        Invariants::compute(&self.a).expect("constructed models are nonsingular")
    }

    pub fn discriminant(&self) -> BigRational {
        self.invariants().disc
    }

    pub fn j_invariant(&self) -> BigRational {
        self.invariants().j
    }

    /// Applies `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
    pub fn transform(
        &self,
        u: &BigRational,
        r: &BigRational,
        s: &BigRational,
        t: &BigRational,
    ) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::ZeroScaling);
        }
        let [a1, a2, a3, a4, a6] = &self.a;
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let n1 = (a1 + q(2) * s) / u;
        let n2 = (a2 - s * a1 + q(3) * r - s * s) / &u2;
        let n3 = (a3 + r * a1 + q(2) * t) / &u3;
        let n4 = (a4 - s * a3 + q(2) * r * a2 - (t + r * s) * a1 + q(3) * r * r - q(2) * s * t) / &u4;
        let n6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / &u6;
        Ok(WeierstrassModel { a: [n1, n2, n3, n4, n6] })
    }

    pub fn scale(&self, u: &BigRational) -> Result<Self> {
        self.transform(u, &q(0), &q(0), &q(0))
    }

    /// The isomorphic model `y^2 = x^3 + (b2/4) x^2 + (b4/2) x + b6/4`.
    pub fn completed_square(&self) -> Self {
        let inv = self.invariants();
        WeierstrassModel {
            a: [q(0), inv.b2 / q(4), q(0), inv.b4 / q(2), inv.b6 / q(4)],
        }
    }

    /// The 3-division polynomial `3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8`.
    pub fn division_poly_3(&self) -> Poly {
        let inv = self.invariants();
        Poly::new(vec![inv.b8, q(3) * inv.b6, q(3) * inv.b4, inv.b2, q(3)])
    }

    /// Right-hand side `x^3 + a2 x^2 + a4 x + a6` as a polynomial in `x`.
    pub fn cubic(&self) -> Poly {
        Poly::new(vec![self.a[4].clone(), self.a[3].clone(), self.a[1].clone(), q(1)])
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let [a1, a2, a3, a4, a6] = &self.a;
                y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6
            }
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), -y - self.a1() * x - self.a3()),
        }
    }

    pub fn add(&self, p: &Point, r: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, r) {
            (Point::Infinity, _) => return r.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, _] = &self.a;
        let (lambda, nu) = if x1 != x2 {
            let lambda = (y2 - y1) / (x2 - x1);
            let nu = (y1 * x2 - y2 * x1) / (x2 - x1);
            (lambda, nu)
        } else {
            if (y1 + y2 + a1 * x2 + a3).is_zero() {
                return Point::Infinity;
            }
            let den = q(2) * y1 + a1 * x1 + a3;
            let lambda = (q(3) * x1 * x1 + q(2) * a2 * x1 + a4 - a1 * y1) / &den;
            let nu = (-(x1 * x1 * x1) + a4 * x1 + q(2) * self.a6() - a3 * y1) / &den;
            (lambda, nu)
        };
        let x3 = &lambda * &lambda + a1 * &lambda - a2 - x1 - x2;
        let y3 = -(&lambda + a1) * &x3 - &nu - a3;
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, n: i64, p: &Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Whether `self` and `other` are isomorphic over `Q` (equal j and
    /// discriminant ratio a twelfth power compatible with `c4`, `c6`).
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        let (i, o) = (self.invariants(), other.invariants());
        if i.j != o.j {
            return false;
        }
        // u^4 = c4/c4', u^6 = c6/c6' must have a common rational solution u^2.
        let u2 = if !i.c4.is_zero() && !i.c6.is_zero() {
            (&i.c6 / &o.c6) / (&i.c4 / &o.c4)
        } else if !i.c6.is_zero() {
            match rational_cube_root(&(&i.c6 / &o.c6)) {
                Some(c) => c,
                None => return false,
            }
        } else {
            match crate::arith::rational_sqrt(&(&i.c4 / &o.c4)) {
                Some(c) => c,
                None => return false,
            }
        };
        u2.is_positive() && crate::arith::rational_sqrt(&u2).is_some()
    }
}

fn rational_cube_root(x: &BigRational) -> Option<BigRational> {
    let cbrt = |n: &BigInt| {
        let r = n.cbrt();
        (&r * &r * &r == *n).then_some(r)
    };
    Some(BigRational::new(cbrt(x.numer())?, cbrt(x.denom())?))
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "[{a1}, {a2}, {a3}, {a4}, {a6}]")
    }
}

/// The quadratic twist by `d0` of the completed-square model of `model`.
pub fn quadratic_twist(model: &WeierstrassModel, d0: &BigInt) -> Result<WeierstrassModel> {
    if d0.is_zero() || !is_squarefree(d0)? {
        return Err(Error::ZeroTwist(d0.to_string()));
    }
    let d = qi(d0);
    let cs = model.completed_square();
    let d2 = &d * &d;
    WeierstrassModel::new(q(0), cs.a2() * &d, q(0), cs.a4() * &d2, cs.a6() * &d2 * &d)
}

/// `E: y^2 = x^3 + a x^2 + b x` with its 2-isogenous curve
/// `E': y^2 = x^3 - 2a x^2 + δ x`, `δ = a^2 - 4b`, and
/// `φ(x, y) = (x + a + b/x, y - b y / x^2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoIsogenyPair {
    #[serde(with = "serde_rational")]
    pub a: BigRational,
    #[serde(with = "serde_rational")]
    pub b: BigRational,
    #[serde(skip)]
    pub delta: BigRational,
    #[serde(skip)]
    pub e: WeierstrassModel,
    #[serde(skip)]
    pub e_prime: WeierstrassModel,
}

pub fn two_isogeny_pair(a: &BigRational, b: &BigRational) -> Result<TwoIsogenyPair> {
    if a.is_zero() {
        return Err(Error::DegenerateFamily("a = 0".into()));
    }
    if b.is_zero() {
        return Err(Error::DegenerateFamily("b = 0".into()));
    }
    let delta = a * a - q(4) * b;
    if delta.is_zero() {
        return Err(Error::DegenerateFamily("a^2 = 4b".into()));
    }
    let e = WeierstrassModel::ab(a, b)?;
    let e_prime = WeierstrassModel::ab(&(q(-2) * a), &delta)?;
    Ok(TwoIsogenyPair { a: a.clone(), b: b.clone(), delta, e, e_prime })
}

impl TwoIsogenyPair {
    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        two_isogeny_pair(&q(a), &q(b))
    }

    /// The pair attached to `E'` with its own 2-torsion point `(0, 0)`;
    /// its isogenous curve is `E` scaled by `u = 1/2`.
    pub fn dual(&self) -> TwoIsogenyPair {
        two_isogeny_pair(&(q(-2) * &self.a), &self.delta).expect("dual of a valid pair is valid")
    }

    /// Image of a point of `E(Q)` under `φ`.
    pub fn phi(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, _) if x.is_zero() => Point::Infinity,
            Point::Affine(x, y) => {
                let x2 = x * x;
                Point::Affine(x + &self.a + &self.b / x, y - &self.b * y / x2)
            }
        }
    }

    /// Checks that `φ` maps `E` to `E'` as an identity of rational functions:
    /// with `y^2` replaced by `x^3 + a x^2 + b x`, both sides of the equation
    /// of `E'` agree after clearing `x^4`.
    pub fn phi_identity_holds(&self) -> bool {
        let x = Poly::x();
        let rhs_e = self.e.cubic();
        let xn = Poly::new(vec![self.b.clone(), self.a.clone(), q(1)]);
        let b_term = Poly::new(vec![-&self.b, q(0), q(1)]);
        let lhs = &rhs_e * &b_term.pow(2);
        let x2 = &x * &x;
        let x3 = &x2 * &x;
        let rhs = &(&(&x * &xn.pow(3)) - &(&x2 * &xn.pow(2)).scale(&(q(2) * &self.a)))
            + &(&x3 * &xn).scale(&self.delta);
        lhs == rhs
    }

    /// Squarefree class of `-b δ`, the class of `-Δ(E')/Δ(E)`.
    pub fn twist_correction_class(&self) -> Result<BigInt> {
        squarefree_class(&(-(&self.b * &self.delta)))
    }

    /// The integral pair `(u^2 a, u^4 b)` with the least positive integer `u`.
    pub fn integral(&self) -> TwoIsogenyPair {
        let mut u = BigInt::one();
        loop {
            let ur = qi(&u);
            let a = &self.a * &ur * &ur;
            let b = &self.b * &ur * &ur * &ur * &ur;
            if a.is_integer() && b.is_integer() {
                return two_isogeny_pair(&a, &b).expect("scaling preserves validity");
            }
            u += 1;
        }
    }
}

impl fmt::Display for TwoIsogenyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a, b) = ({}, {})", self.a, self.b)
    }
}

/// A rational 3-isogeny on the completed-square model `y^2 = f(x)` of a curve,
/// with kernel `{O, (x0, ±sqrt(d))}`, `d = f(x0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeIsogenyData {
    pub base: WeierstrassModel,
    pub kernel_x: BigRational,
    pub d: BigRational,
    /// Squarefree representative of `d` modulo squares.
    pub d_class: BigInt,
    pub image: WeierstrassModel,
    velu_v: BigRational,
    velu_u: BigRational,
}

/// Builds the Vélu 3-isogeny with kernel above `x0`; the result pulls the
/// invariant differential of the image back to that of the base.
pub fn three_isogeny(model: &WeierstrassModel, x0: &BigRational) -> Result<ThreeIsogenyData> {
    if !model.division_poly_3().eval(x0).is_zero() {
        return Err(Error::NotAKernel(format_rational(x0)));
    }
    let base = model.completed_square();
    let f = base.cubic();
    let d = f.eval(x0);
    if d.is_zero() {
        return Err(Error::NotAKernel(format_rational(x0)));
    }
    // Vélu on y^2 = x^3 + a2 x^2 + a4 x + a6 for the pair {P, -P}:
    // gx = 3 x0^2 + 2 a2 x0 + a4, v = 2 gx, u = (2 y0)^2 = 4d.
    let gx = q(3) * x0 * x0 + q(2) * base.a2() * x0 + base.a4();
    let v = q(2) * gx;
    let u = q(4) * &d;
    let w = &u + x0 * &v;
    let image = WeierstrassModel::new(
        q(0),
        base.a2().clone(),
        q(0),
        base.a4() - q(5) * &v,
        base.a6() - q(4) * base.a2() * &v - q(7) * &w,
    )?;
    let d_class = squarefree_class(&d)?;
    Ok(ThreeIsogenyData { base, kernel_x: x0.clone(), d, d_class, image, velu_v: v, velu_u: u })
}

impl ThreeIsogenyData {
    /// x-coordinate of the image of a point with x-coordinate `x`.
    pub fn map_x(&self, x: &BigRational) -> Option<BigRational> {
        let t = x - &self.kernel_x;
        if t.is_zero() {
            return None;
        }
        Some(x + &self.velu_v / &t + &self.velu_u / (&t * &t))
    }

    /// The 3-isogeny on the image whose kernel is `φ(E[3])`; its image is
    /// `base` scaled by `u = 1/3` (so `φ̂ ∘ φ` has leading coefficient 3).
    pub fn dual(&self) -> Result<ThreeIsogenyData> {
        let j = self.base.j_invariant();
        let mut fallback = None;
        for x1 in self.image.division_poly_3().rational_roots()? {
            let Ok(cand) = three_isogeny(&self.image, &x1) else {
                continue;
            };
            if cand.image.j_invariant() != j {
                continue;
            }
            let ratio = cand.image.discriminant() / self.base.discriminant();
            if ratio == pow_lq(3, 12) {
                return Ok(cand);
            }
            fallback.get_or_insert(cand);
        }
        fallback.ok_or_else(|| Error::NotAKernel("no rational dual kernel".into()))
    }
}

/// The Tate normal form `y^2 + a1 xy + a3 y = x^3`, on which `(0, 0)` has order 3.
pub fn tate_normal_form(a1: &BigRational, a3: &BigRational) -> Result<WeierstrassModel> {
    WeierstrassModel::new(a1.clone(), q(0), a3.clone(), q(0), q(0))
}

/// The 3-isogeny of the twist by `d0` of the Tate normal form `(a1, a3)`;
/// the kernel stays above `x = 0` and `d` becomes `d0^3 a3^2 / 4`.
pub fn twisted_tate_isogeny(a1: i64, a3: i64, d0: i64) -> Result<ThreeIsogenyData> {
    let base = tate_normal_form(&q(a1), &q(a3))?;
    let twisted = quadratic_twist(&base, &BigInt::from(d0))?;
    three_isogeny(&twisted, &q(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;

    #[test]
    fn invariants_of_x3_plus_x() {
        let m = WeierstrassModel::from_ints([0, 0, 0, 1, 0]).unwrap();
        let inv = m.invariants();
        assert_eq!(inv.disc, q(-64));
        assert_eq!(inv.c4, q(-48));
        assert_eq!(inv.j, q(1728));
        assert_eq!(&inv.c4 * &inv.c4 * &inv.c4 - &inv.c6 * &inv.c6, q(1728) * &inv.disc);
    }

    #[test]
    fn singular_model_rejected() {
        assert_eq!(WeierstrassModel::from_ints([0, 0, 0, 0, 0]), Err(Error::SingularModel));
        assert_eq!(WeierstrassModel::from_ints([0, 1, 0, 0, 0]), Err(Error::SingularModel));
    }

    #[test]
    fn ab_family_discriminant() {
        for (a, b) in [(1, 1), (3, -7), (-5, 2)] {
            let pair = TwoIsogenyPair::from_ints(a, b).unwrap();
            assert_eq!(pair.e.discriminant(), q(16) * &pair.delta * q(b) * q(b));
        }
    }

    #[test]
    fn transform_basics() {
        let m = WeierstrassModel::from_ints([1, -1, 1, -10, -20]).unwrap();
        assert_eq!(m.transform(&q(1), &q(0), &q(0), &q(0)).unwrap(), m);
        let t = m.transform(&q(2), &q(3), &q(-1), &qf(1, 2)).unwrap();
        assert_eq!(t.discriminant(), m.discriminant() / q(4096));
        assert_eq!(t.j_invariant(), m.j_invariant());
        assert_eq!(m.transform(&q(0), &q(0), &q(0), &q(0)), Err(Error::ZeroScaling));
        // u = 1/2 on the (a, b) family gives (4a, 16b)
        let e = WeierstrassModel::from_ints([0, 3, 0, 5, 0]).unwrap();
        assert_eq!(e.scale(&qf(1, 2)).unwrap(), WeierstrassModel::from_ints([0, 12, 0, 80, 0]).unwrap());
    }

    #[test]
    fn pair_one_one() {
        let p = TwoIsogenyPair::from_ints(1, 1).unwrap();
        assert_eq!(p.delta, q(-3));
        assert_eq!(p.e.discriminant(), q(-48));
        assert_eq!(p.e_prime, WeierstrassModel::from_ints([0, -2, 0, -3, 0]).unwrap());
        assert!(p.phi_identity_holds());
        assert!(matches!(TwoIsogenyPair::from_ints(0, 1), Err(Error::DegenerateFamily(_))));
        assert!(matches!(TwoIsogenyPair::from_ints(2, 1), Err(Error::DegenerateFamily(_))));
    }

    #[test]
    fn phi_maps_rational_points() {
        // 2-torsion point (-1, 0) on y^2 = x^3 - x^2 - 2x
        let p = TwoIsogenyPair::from_ints(-1, -2).unwrap();
        let pt = Point::new(q(-1), q(0));
        assert!(p.e.contains(&pt));
        let img = p.phi(&pt);
        assert!(p.e_prime.contains(&img));
        let p = TwoIsogenyPair::from_ints(-1, 1).unwrap();
        for pt in [Point::new(q(1), q(1)), Point::new(q(1), q(-1))] {
            assert!(p.e.contains(&pt));
            assert!(p.e_prime.contains(&p.phi(&pt)));
        }
        assert_eq!(p.phi(&Point::new(q(0), q(0))), Point::Infinity);
    }

    #[test]
    fn dual_pair_is_scaled_base() {
        let p = TwoIsogenyPair::from_ints(3, -4).unwrap();
        let dd = p.dual().dual();
        assert_eq!(dd.a, q(12));
        assert_eq!(dd.b, q(-64));
        assert_eq!(dd.e.scale(&q(2)).unwrap(), p.e);
        // φ̂ ∘ φ = [2] on points
        let p = TwoIsogenyPair::from_ints(-1, 1).unwrap();
        let pt = Point::new(q(1), q(1));
        let image = p.dual().phi(&p.phi(&pt));
        let doubled = p.e.mul(2, &pt);
        let scaled = match (image, doubled) {
            (Point::Affine(x, y), Point::Affine(x2, y2)) => (x == q(4) * x2, y == q(8) * y2),
            _ => (false, false),
        };
        assert_eq!(scaled, (true, true));
    }

    #[test]
    fn division_polynomial() {
        let m = WeierstrassModel::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(m.division_poly_3(), Poly::from_ints(&[0, 12, 0, 0, 3]));
        assert_eq!(m.division_poly_3().rational_roots().unwrap(), vec![q(0)]);
        let p = Point::new(q(0), q(1));
        assert_eq!(m.mul(3, &p), Point::Infinity);
        assert_ne!(m.mul(2, &p), Point::Infinity);
    }

    #[test]
    fn velu_on_x3_plus_1() {
        let m = WeierstrassModel::from_ints([0, 0, 0, 0, 1]).unwrap();
        let iso = three_isogeny(&m, &q(0)).unwrap();
        assert_eq!(iso.image, WeierstrassModel::from_ints([0, 0, 0, 0, -27]).unwrap());
        assert_eq!(iso.d, q(1));
        // (2, 3) has order 6 and maps to the 2-torsion point (3, 0)
        assert_eq!(iso.map_x(&q(2)), Some(q(3)));
        let dual = iso.dual().unwrap();
        assert_eq!(dual.image, WeierstrassModel::from_ints([0, 0, 0, 0, 729]).unwrap());
        assert_eq!(dual.image.scale(&q(3)).unwrap(), m);
    }

    #[test]
    fn tate_normal_form_kernel() {
        let base = tate_normal_form(&q(1), &q(1)).unwrap();
        let p = Point::new(q(0), q(0));
        assert_eq!(base.mul(3, &p), Point::Infinity);
        assert_ne!(p, Point::Infinity);
        let iso = three_isogeny(&base, &q(0)).unwrap();
        assert_eq!(iso.base.cubic(), Poly::new(vec![qf(1, 4), qf(1, 2), qf(1, 4), q(1)]));
        assert_eq!(iso.d, qf(1, 4));
        assert_eq!(iso.d_class, BigInt::from(1));
        assert!(matches!(three_isogeny(&base, &q(1)), Err(Error::NotAKernel(_))));
    }

    #[test]
    fn twisting() {
        let e = WeierstrassModel::from_ints([0, 1, 0, 1, 0]).unwrap();
        let t = quadratic_twist(&e, &BigInt::from(5)).unwrap();
        assert_eq!(t, WeierstrassModel::from_ints([0, 5, 0, 25, 0]).unwrap());
        assert_eq!(t.j_invariant(), e.j_invariant());
        assert_eq!(quadratic_twist(&e, &BigInt::from(1)).unwrap(), e);
        let tt = quadratic_twist(&t, &BigInt::from(5)).unwrap();
        assert_eq!(tt.scale(&q(5)).unwrap(), e);
        assert!(matches!(quadratic_twist(&e, &BigInt::from(0)), Err(Error::ZeroTwist(_))));
        assert!(matches!(quadratic_twist(&e, &BigInt::from(12)), Err(Error::ZeroTwist(_))));
        for d0 in [-1, 2, -3, 5] {
            let iso = twisted_tate_isogeny(1, 1, d0).unwrap();
            assert_eq!(iso.d_class, BigInt::from(d0));
        }
    }

    #[test]
    fn isomorphism_detection() {
        let m = WeierstrassModel::from_ints([1, -1, 1, -10, -20]).unwrap();
        let t = m.transform(&qf(2, 3), &q(3), &q(-1), &qf(1, 2)).unwrap();
        assert!(m.is_isomorphic(&t));
        let tw = quadratic_twist(&m, &BigInt::from(-1)).unwrap();
        assert!(!m.is_isomorphic(&tw));
    }

    #[test]
    fn json_roundtrip() {
        let m = WeierstrassModel::new(qf(1, 2), q(0), q(-3), q(7), qf(-5, 9)).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"a1":"1/2","a2":"0/1","a3":"-3/1","a4":"7/1","a6":"-5/9"}"#);
        let back: WeierstrassModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<WeierstrassModel>(
            r#"{"a1":"0","a2":"0","a3":"0","a4":"0","a6":"0"}"#
        )
        .is_err());
    }
}
