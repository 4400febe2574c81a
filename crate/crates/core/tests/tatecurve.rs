use parity_core::arith::{q, qf};
use parity_core::tatecurve::{a4_series, a6_series, isogenous_tate_check, s_k, two_torsion_series, TorsionCase};
use parity_core::{BigInt, BigRational, Error, QSeries};
use proptest::prelude::*;

const N: usize = 10;

fn series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec((-20i64..=20, 1i64..=4), N + 1)
        .prop_map(|c| QSeries::from_coeffs(c.into_iter().map(|(n, d)| qf(n, d)).collect(), N))
}

fn divisible(x: &BigRational, m: i64) -> bool {
    x.is_integer() && (x.to_integer() % BigInt::from(m)) == BigInt::from(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn ring_laws(f in series(), g in series(), h in series()) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
    }

    #[test]
    fn inverse_and_root(f in series()) {
        let one = QSeries::constant(q(1), N);
        if let Some(g) = f.inv() {
            prop_assert_eq!(&f * &g, one);
        }
        let sq = &f * &f;
        if sq.coeff(0) != q(0) {
            let r = sq.sqrt().unwrap();
            prop_assert_eq!(&r * &r, sq);
        }
    }

    #[test]
    fn composition_is_associative(f in series(), g in series(), h in series()) {
        let mut g = g.coeffs().to_vec();
        g[0] = q(0);
        let g = QSeries::from_coeffs(g, N);
        let mut h = h.coeffs().to_vec();
        h[0] = q(0);
        let h = QSeries::from_coeffs(h, N);
        let left = f.compose(&g.compose(&h).unwrap()).unwrap();
        let right = f.compose(&g).unwrap().compose(&h).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn s_k_from_geometric_series() {
    let one = QSeries::constant(q(1), 15);
    for k in [3u32, 5] {
        let mut direct = QSeries::zero(15);
        for n in 1..=15 {
            let qn = QSeries::monomial(q(1), n, 15);
            let term = &qn * &(&one - &qn).inv().unwrap();
            direct = &direct + &term.scale(&q((n as i64).pow(k)));
        }
        assert_eq!(s_k(k, 15), direct);
    }
}

#[test]
fn displayed_coefficients() {
    let a4 = a4_series(5).unwrap();
    let a6 = a6_series(5).unwrap();
    for (n, (x, y)) in [(-5, -1), (-45, -23), (-140, -154), (-365, -647), (-630, -1876)].into_iter().enumerate() {
        assert_eq!(a4.coeff(n + 1), q(x));
        assert_eq!(a6.coeff(n + 1), q(y));
    }
    assert_eq!(a4.coeff(0), q(0));
    assert_eq!(a6_series(40).unwrap().first_non_integral(), None);
}

#[test]
fn minus_one_torsion_shape() {
    let t = two_torsion_series(TorsionCase::UMinusOne, N).unwrap();
    assert_eq!(t.r.coeff(0), qf(1, 4));
    assert_eq!(t.a.coeff(0), qf(-1, 2));
    assert_eq!(t.b.coeff(0), qf(1, 16));
    for n in 1..=N {
        assert!(divisible(&t.r.coeff(n), 4));
        assert!(divisible(&t.a.coeff(n), 4));
        // -2a = 1 - 8 O(q)
        assert!(divisible(&(t.a.coeff(n) * q(-2)), 8));
        assert!(t.b.coeff(n).is_integer());
    }
    assert_eq!(t.y.scale(&q(-2)), t.x);
}

#[test]
fn sqrt_q_torsion_shape() {
    let t = two_torsion_series(TorsionCase::USqrtQ, N).unwrap();
    assert_eq!((t.b.coeff(0), t.b.coeff(1)), (q(0), q(1)));
    assert_eq!(t.delta.coeff(0), qf(1, 16));
    assert_eq!(t.a.coeff(0), qf(1, 4));
    for n in 1..=N {
        assert!(divisible(&t.a.coeff(n), 2));
        assert!(t.b.coeff(n).is_integer() && t.delta.coeff(n).is_integer());
    }
    let (ra, rd) = (t.a.sqrt().unwrap(), t.delta.sqrt().unwrap());
    assert!(ra.scale(&q(2)).is_l_integral(2) && rd.scale(&q(4)).is_l_integral(2));
}

#[test]
fn isogenous_curve() {
    let r = isogenous_tate_check(8).unwrap();
    assert_eq!(r.a4_dagger.valuation(), Some(2));
    assert_eq!(r.a6_dagger.valuation(), Some(2));
    assert_eq!((r.a4_dagger.coeff(2), r.a6_dagger.coeff(2)), (q(-5), q(-1)));
    assert!(r.a4_dagger.first_non_integral().is_none() && r.a6_dagger.first_non_integral().is_none());
    assert!(matches!(isogenous_tate_check(4), Err(Error::Parse(_))));
}
