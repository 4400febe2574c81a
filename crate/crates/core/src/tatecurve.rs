//! Truncated q-series and the Tate curve `E_q: y^2 + xy = x^3 + a4(q) x + a6(q)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{format_rational, q, qf, qi, rational_sqrt};
use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 12;

/// `c_0 + c_1 q + ... + c_N q^N + O(q^(N+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c q^k`, or zero if `k` exceeds the order.
    pub fn monomial(c: BigRational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Truncates or zero-pads `coeffs` to the given order.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        QSeries { coeffs }
    }

    pub fn from_ints(c: &[i64], order: usize) -> Self {
        Self::from_coeffs(c.iter().map(|&x| q(x)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient, `None` for `O(q^(N+1))`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        QSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `1/f`, defined when `c_0 != 0`.
    pub fn inv(&self) -> Option<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return None;
        }
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = c0.recip();
        for k in 1..=n {
            let s: BigRational = (1..=k).map(|i| &self.coeffs[i] * &out[k - i]).sum();
            out[k] = -s / c0;
        }
        Some(QSeries { coeffs: out })
    }

    /// `f(g(q))` for `g` with zero constant term.
    pub fn compose(&self, g: &QSeries) -> Option<Self> {
        if !g.coeffs[0].is_zero() {
            return None;
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut out = QSeries::zero(n);
        let mut pow = QSeries::constant(q(1), n);
        for k in 0..=n {
            out = &out + &pow.scale(&self.coeffs[k]);
            pow = &pow * &g;
        }
        Some(out)
    }

    /// `f(q^m)`.
    pub fn substitute_power(&self, m: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k * m <= n {
                out.coeffs[k * m] = c.clone();
            }
        }
        out
    }

    /// Square root with the positive rational root of `c_0`, by Newton iteration.
    pub fn sqrt(&self) -> Option<Self> {
        let r0 = rational_sqrt(&self.coeffs[0])?;
        if r0.is_zero() {
            return None;
        }
        let n = self.order();
        let mut s = QSeries::constant(r0, n);
        let mut prec = 1;
        let half = qf(1, 2);
        while prec <= n {
            s = (&s + &(self * &s.inv()?)).scale(&half);
            prec *= 2;
        }
        Some(s)
    }

    /// No coefficient has a denominator divisible by `l`.
    pub fn is_l_integral(&self, l: u64) -> bool {
        let l = BigInt::from(l);
        self.coeffs.iter().all(|c| !c.denom().is_multiple_of(&l))
    }

    pub fn first_non_integral(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_integer())
    }
}

fn same_order(a: &QSeries, b: &QSeries) -> usize {
    a.order().min(b.order())
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, o: &QSeries) -> QSeries {
        let n = same_order(self, o);
        QSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect() }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, o: &QSeries) -> QSeries {
        let n = same_order(self, o);
        QSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect() }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, o: &QSeries) -> QSeries {
        let n = same_order(self, o);
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for j in 0..=n - i {
                out[i + j] += a * &o.coeffs[j];
            }
        }
        QSeries { coeffs: out }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c < &BigRational::zero() { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let mag = if a.is_one() && k > 0 { String::new() } else { format_rational(&a).trim_end_matches("/1").to_string() };
            let var = match k {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{k}"),
            };
            if first {
                write!(f, "{sign}{mag}{var}")?;
            } else {
                write!(f, " {sign} {mag}{var}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// `sum_{n >= 1} n^k q^n / (1 - q^n)`, whose `n`-th coefficient is `σ_k(n)`.
pub fn s_k(k: u32, order: usize) -> QSeries {
    let mut c = vec![BigRational::zero(); order + 1];
    for d in 1..=order {
        let dk = qi(&BigInt::from(d).pow(k));
        for m in (d..=order).step_by(d) {
            c[m] += &dk;
        }
    }
    QSeries { coeffs: c }
}

fn check_integral(s: QSeries) -> Result<QSeries> {
    match s.first_non_integral() {
        Some(n) => Err(Error::NonIntegralCoefficient(n)),
        None => Ok(s),
    }
}

/// `a4(q) = -5 s_3(q)`.
pub fn a4_series(order: usize) -> Result<QSeries> {
    check_integral(s_k(3, order).scale(&q(-5)))
}

/// `a6(q) = -(5 s_3(q) + 7 s_5(q))/12`.
pub fn a6_series(order: usize) -> Result<QSeries> {
    let s = &s_k(3, order).scale(&q(5)) + &s_k(5, order).scale(&q(7));
    check_integral(s.scale(&qf(-1, 12)))
}

/// `w/(1 - w)^2 = sum m w^m` for `w = c q^k`, `k >= 0`, `c != 1` when `k = 0`.
fn x_term(c: &BigRational, k: usize, order: usize) -> QSeries {
    let w = QSeries::monomial(c.clone(), k, order);
    let one_minus = &QSeries::constant(q(1), order) - &w;
    let d = (&one_minus * &one_minus).inv().expect("1 - w is a unit");
    &w * &d
}

/// The x-coordinate `X(u, Q)` on `E_Q` of the point with parameter `u = c q^k`,
/// with `Q = q^m` and `0 <= k < m`.
pub fn x_coordinate(c: &BigRational, k: usize, m: usize, order: usize) -> QSeries {
    assert!(k < m && !c.is_zero());
    let mut x = x_term(c, k, order);
    let c_inv = c.recip();
    let mut n = 1;
    while n * m - k <= order {
        x = &x + &x_term(c, n * m + k, order);
        x = &x + &x_term(&c_inv, n * m - k, order);
        x = &x - &x_term(&q(1), n * m, order).scale(&q(2));
        n += 1;
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TorsionCase {
    /// `u = -1` on `E_q`.
    UMinusOne,
    /// `u = q` on `E_{q^2}`.
    USqrtQ,
}

/// The 2-torsion point of `E_q` (or `E_{q^2}`), translated to `(0, 0)` on the
/// completed-square model `y^2 = x^3 + x^2/4 + a4 x + a6`.
#[derive(Clone, Debug)]
pub struct TwoTorsionSeries {
    pub case: TorsionCase,
    /// `X`, the x-coordinate on `E_q`.
    pub x: QSeries,
    /// `Y = -X/2`, the y-coordinate on `E_q`.
    pub y: QSeries,
    /// `r = -X`.
    pub r: QSeries,
    /// `a = 1/4 - 3r`.
    pub a: QSeries,
    /// `b = a4 - r/2 + 3r^2`.
    pub b: QSeries,
    /// `δ = a^2 - 4b`.
    pub delta: QSeries,
}

pub fn two_torsion_series(case: TorsionCase, order: usize) -> Result<TwoTorsionSeries> {
    let (x, a4) = match case {
        TorsionCase::UMinusOne => (x_coordinate(&q(-1), 0, 1, order), a4_series(order)?),
        TorsionCase::USqrtQ => (x_coordinate(&q(1), 1, 2, order), a4_series(order)?.substitute_power(2)),
    };
    let y = x.scale(&qf(-1, 2));
    let r = -&x;
    let one = QSeries::constant(q(1), order);
    let a = &one.scale(&qf(1, 4)) - &r.scale(&q(3));
    let b = &(&a4 - &r.scale(&qf(1, 2))) + &(&r * &r).scale(&q(3));
    let delta = &(&a * &a) - &b.scale(&q(4));
    Ok(TwoTorsionSeries { case, x, y, r, a, b, delta })
}

/// One row of the coefficient comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesRow {
    pub degree: usize,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug)]
pub struct TateCheckReport {
    pub order: usize,
    pub a4: QSeries,
    pub a6: QSeries,
    /// Case 1: the isogenous curve after `x -> 4x - 2r + 1/2`, `y -> 8y + 4x`.
    pub a4_dagger: QSeries,
    pub a6_dagger: QSeries,
    pub rows: Vec<SeriesRow>,
    /// Case 2: square roots of `a` and `δ`.
    pub sqrt_a: QSeries,
    pub sqrt_delta: QSeries,
}

fn compare(rows: &mut Vec<SeriesRow>, label: &str, expected: &QSeries, computed: &QSeries) -> Result<()> {
    for d in 0..=expected.order().min(computed.order()) {
        let (e, c) = (expected.coeff(d), computed.coeff(d));
        let row = SeriesRow { degree: d, expected: format_rational(&e), computed: format_rational(&c) };
        if e != c {
            return Err(Error::MismatchAtDegree {
                degree: d,
                expected: format!("{label}: {}", row.expected),
                computed: row.computed,
            });
        }
        rows.push(row);
    }
    Ok(())
}

/// Transforms the isogenous curve `y^2 = x^3 - 2a x^2 + δ x` of Case 1 by
/// `x -> 4x - 2r + 1/2`, `y -> 8y + 4x` and checks that the result is
/// `E_{q^2}: y^2 + xy = x^3 + a4(q^2) x + a6(q^2)`, coefficient by coefficient.
pub fn isogenous_tate_check(order: usize) -> Result<TateCheckReport> {
    if order < 8 {
        return Err(Error::Parse(format!("series order {order} is below 8")));
    }
    let a4 = a4_series(order)?;
    let a6 = a6_series(order)?;
    let t = two_torsion_series(TorsionCase::UMinusOne, order)?;
    let one = QSeries::constant(q(1), order);
    // x = u^2 x' + R, y = u^3 y' + s u^2 x' with u = 2, s = 1.
    let rr = &one.scale(&qf(1, 2)) - &t.r.scale(&q(2));
    let a2p = -&t.a.scale(&q(2));
    let s = q(1);
    let u = q(2);
    let a1_new = s.clone() * q(2) / &u;
    let a2_new = (&(&a2p + &rr.scale(&q(3))) - &one.scale(&(&s * &s))).scale(&(u.clone() * &u).recip());
    let a4_new = (&(&t.delta + &(&rr * &a2p).scale(&q(2))) + &(&rr * &rr).scale(&q(3))).scale(&q(16).recip());
    let rr2 = &rr * &rr;
    let a6_new = (&(&(&rr * &t.delta) + &(&rr2 * &a2p)) + &(&rr2 * &rr)).scale(&q(64).recip());
    let mut rows = Vec::new();
    compare(&mut rows, "a1", &QSeries::constant(q(1), 0), &QSeries::constant(a1_new, 0))?;
    compare(&mut rows, "a2", &QSeries::zero(order), &a2_new)?;
    let a4_target = a4.substitute_power(2);
    let a6_target = a6.substitute_power(2);
    compare(&mut rows, "a4", &a4_target, &a4_new)?;
    compare(&mut rows, "a6", &a6_target, &a6_new)?;
    for (s, label) in [(&a4_new, "a4"), (&a6_new, "a6")] {
        if let Some(n) = s.first_non_integral() {
            return Err(Error::MismatchAtDegree {
                degree: n,
                expected: format!("{label}: an integer"),
                computed: format_rational(&s.coeff(n)),
            });
        }
    }
    let c2 = two_torsion_series(TorsionCase::USqrtQ, order)?;
    let sqrt_a = c2.a.sqrt().ok_or_else(|| Error::MismatchAtDegree {
        degree: 0,
        expected: "a square constant term".into(),
        computed: format_rational(&c2.a.coeff(0)),
    })?;
    let sqrt_delta = c2.delta.sqrt().ok_or_else(|| Error::MismatchAtDegree {
        degree: 0,
        expected: "a square constant term".into(),
        computed: format_rational(&c2.delta.coeff(0)),
    })?;
    Ok(TateCheckReport { order, a4, a6, a4_dagger: a4_new, a6_dagger: a6_new, rows, sqrt_a, sqrt_delta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_coefficients() {
        assert_eq!(s_k(3, 4), QSeries::from_ints(&[0, 1, 9, 28, 73], 4));
        assert_eq!(s_k(5, 2), QSeries::from_ints(&[0, 1, 33], 2));
    }

    #[test]
    fn inverse_and_sqrt() {
        let f = QSeries::from_ints(&[1, 1], 6);
        let g = f.inv().unwrap();
        assert_eq!(g, QSeries::from_ints(&[1, -1, 1, -1, 1, -1, 1], 6));
        let sq = &f * &f;
        assert_eq!(sq.sqrt().unwrap(), f);
        assert!(QSeries::from_ints(&[0, 1], 3).inv().is_none());
    }

    #[test]
    fn compose_geometric() {
        // 1/(1 - q) at q -> q + q^2
        let geo = QSeries::from_ints(&[1; 6], 5);
        let g = QSeries::from_ints(&[0, 1, 1], 5);
        let h = geo.compose(&g).unwrap();
        let direct = (&QSeries::constant(q(1), 5) - &g).inv().unwrap();
        assert_eq!(h, direct);
    }

    #[test]
    fn display() {
        let s = QSeries::from_ints(&[0, -5, -45], 2);
        assert_eq!(s.to_string(), "-5q - 45q^2 + O(q^3)");
    }

    #[test]
    fn minus_one_torsion() {
        let t = two_torsion_series(TorsionCase::UMinusOne, 6).unwrap();
        assert_eq!(t.r.coeff(0), qf(1, 4));
        // coefficient of q^N is 4 times the sum of the odd divisors of N
        for (n, s) in [(1, 1), (2, 1), (3, 4), (4, 1), (5, 6), (6, 4)] {
            assert_eq!(t.r.coeff(n), q(4 * s));
        }
    }

    #[test]
    fn isogenous_curve_is_tate_curve_at_q_squared() {
        let r = isogenous_tate_check(DEFAULT_ORDER).unwrap();
        assert_eq!(r.a4_dagger.coeff(2), q(-5));
        assert_eq!(r.a6_dagger.coeff(2), q(-1));
        assert_eq!(r.a4_dagger.coeff(4), q(-45));
        assert!(r.a4_dagger.coeff(3).is_zero());
        assert_eq!(&r.sqrt_delta * &r.sqrt_delta, two_torsion_series(TorsionCase::USqrtQ, DEFAULT_ORDER).unwrap().delta);
    }
}
