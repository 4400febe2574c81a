use parity_core::arith::{pow_lq, q, qf, rational_sqrt};
use parity_core::curves::{quadratic_twist, twisted_tate_isogeny};
use parity_core::{BigInt, BigRational, Point, TwoIsogenyPair, WeierstrassModel};
use proptest::prelude::*;

/// Rational points with small integral `x` on a model `y^2 = cubic(x)`.
fn small_points(m: &WeierstrassModel, bound: i64) -> Vec<Point> {
    (-bound..=bound)
        .filter_map(|x| {
            let x = q(x);
            let y = rational_sqrt(&m.cubic().eval(&x))?;
            Some(Point::new(x, y))
        })
        .collect()
}

fn u12(u: &BigRational) -> BigRational {
    let u2 = u * u;
    let u4 = &u2 * &u2;
    &u4 * &u4 * &u4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn change_of_coordinates(
        a in prop::array::uniform5(-15i64..=15),
        un in prop::sample::select(vec![-3i64, -1, 1, 2, 5]), ud in 1i64..=4,
        r in -6i64..=6, s in -6i64..=6, t in -6i64..=6,
    ) {
        let Ok(m) = WeierstrassModel::from_ints(a) else { return Ok(()) };
        let (u, r, s, t) = (qf(un, ud), qf(r, 3), q(s), qf(t, 2));
        let m2 = m.transform(&u, &r, &s, &t).unwrap();
        prop_assert_eq!(m2.discriminant() * u12(&u), m.discriminant());
        prop_assert_eq!(m2.j_invariant(), m.j_invariant());
        prop_assert!(m.is_isomorphic(&m2) && m2.is_isomorphic(&m));
        prop_assert!(m.is_isomorphic(&m.completed_square()));
        // (x', y') on m2 goes to x = u^2 x' + r, y = u^3 y' + s u^2 x' + t on m
        let back = m2.transform(&(q(1) / &u), &(-&r / (&u * &u)), &(-&s / &u), &((&r * &s - &t) / (&u * &u * &u))).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn twists_are_not_isomorphic(a in -12i64..=12, b in -12i64..=12, d in prop::sample::select(vec![-1i64, 2, -3, 5, 6])) {
        let Ok(m) = WeierstrassModel::from_ints([0, a, 0, b, 1]) else { return Ok(()) };
        let tw = quadratic_twist(&m, &BigInt::from(d)).unwrap();
        prop_assert_eq!(tw.j_invariant(), m.j_invariant());
        prop_assert!(!m.is_isomorphic(&tw));
        let tw2 = quadratic_twist(&tw, &BigInt::from(d)).unwrap();
        prop_assert!(m.is_isomorphic(&tw2));
    }

    #[test]
    fn phi_is_a_homomorphism_onto_the_isogenous_curve(a in -20i64..=20, b in -30i64..=30) {
        let Ok(pair) = TwoIsogenyPair::from_ints(a, b) else { return Ok(()) };
        prop_assert!(pair.phi_identity_holds());
        let pts = small_points(&pair.e, 60);
        for p in pts.iter().take(4) {
            prop_assert!(pair.e_prime.contains(&pair.phi(p)));
            for r in pts.iter().take(4) {
                let lhs = pair.phi(&pair.e.add(p, r));
                let rhs = pair.e_prime.add(&pair.phi(p), &pair.phi(r));
                prop_assert_eq!(lhs, rhs);
            }
            // the dual composed with φ is doubling, read on E scaled by 1/2
            let two_p = pair.e.mul(2, p);
            let expected = match two_p {
                Point::Infinity => Point::Infinity,
                Point::Affine(x, y) => Point::new(q(4) * x, q(8) * y),
            };
            prop_assert_eq!(pair.dual().phi(&pair.phi(p)), expected);
        }
        prop_assert_eq!(pair.phi(&Point::new(q(0), q(0))), Point::Infinity);
    }
}

proptest! {
    #[test]
    fn good_ordinary_model_at_two(a2 in -20i64..=20, k in -20i64..=20) {
        // x0 + a2 + 1/4 = 16v; E: y^2 = x^3 + a x^2 + b x with w = 1 + 4 a2
        let (a2, v) = (q(a2), q(2 * k + 1));
        let w = q(1) + q(4) * &a2;
        let a = (-&w + q(96) * &v) / q(2);
        let b = (-&w + q(64) * &v) * (-&w + q(192) * &v) / q(16);
        let Ok(pair) = parity_core::curves::two_isogeny_pair(&a, &b) else { return Ok(()) };
        // x -> 4x, y -> 4x + 8y on E'
        let m = pair.e_prime.transform(&q(2), &q(0), &q(1), &q(0)).unwrap();
        let expected = [q(1), &a2 - q(24) * &v, q(0), &v * (q(4) * &a2 - q(48) * &v + q(1)), q(0)];
        prop_assert_eq!(m.coefficients(), &expected);
        let red = parity_core::localred::tate_algorithm(&m, 2).unwrap();
        prop_assert!(red.class.is_good() && red.u == q(1));
    }
}

#[test]
fn dual_of_dual_is_a_scaling() {
    for (a, b) in [(1, 1), (3, -7), (-5, 2), (6, 5)] {
        let pair = TwoIsogenyPair::from_ints(a, b).unwrap();
        let dd = pair.dual().dual();
        assert_eq!((dd.a.clone(), dd.b.clone()), (q(4 * a), q(16 * b)));
        assert_eq!(pair.e.scale(&qf(1, 2)).unwrap(), dd.e);
        assert_eq!(pair.dual().e, pair.e_prime);
    }
}

#[test]
fn integral_pair() {
    let pair = parity_core::curves::two_isogeny_pair(&qf(1, 2), &qf(3, 8)).unwrap().integral();
    assert_eq!((pair.a.clone(), pair.b.clone()), (q(2), q(6)));
}

#[test]
fn three_isogenies_of_the_twisted_family() {
    let mut checked = 0;
    for (a1, a3, d0) in [(1, 1, 1), (1, 2, -1), (2, 3, 5), (3, -1, -3), (0, 2, 2), (-2, 5, 1)] {
        let iso = twisted_tate_isogeny(a1, a3, d0).unwrap();
        // d = d0^3 a3^2 / 4
        assert_eq!(iso.d, q(d0.pow(3) * a3 * a3) / q(4));
        assert_eq!(iso.d_class, BigInt::from(d0));
        assert!(iso.base.division_poly_3().eval(&iso.kernel_x) == q(0));
        assert_eq!(iso.map_x(&iso.kernel_x), None);
        // the kernel point has order 3
        if let Some(y0) = rational_sqrt(&iso.d) {
            let k = Point::new(iso.kernel_x.clone(), y0);
            assert_eq!(iso.base.mul(3, &k), Point::Infinity);
        }
        for p in small_points(&iso.base, 80) {
            let Point::Affine(x, _) = &p else { unreachable!() };
            let Some(x2) = iso.map_x(x) else { continue };
            assert!(rational_sqrt(&iso.image.cubic().eval(&x2)).is_some(), "{p:?} does not map into the image");
            checked += 1;
        }
        let dual = iso.dual().unwrap();
        assert_eq!(dual.image.j_invariant(), iso.base.j_invariant());
        assert_eq!(dual.image.discriminant() / iso.base.discriminant(), pow_lq(3, 12));
    }
    assert!(checked > 0);
}

#[test]
fn serde_round_trip() {
    let m = WeierstrassModel::new(qf(1, 2), q(-3), q(0), qf(-7, 9), q(11)).unwrap();
    let s = serde_json::to_string(&m).unwrap();
    assert_eq!(serde_json::from_str::<WeierstrassModel>(&s).unwrap(), m);
    // singular models do not deserialize
    let bad = r#"{"a1":"0","a2":"0","a3":"0","a4":"0","a6":"0"}"#;
    assert!(serde_json::from_str::<WeierstrassModel>(bad).is_err());
}

#[test]
fn singular_and_degenerate_inputs() {
    assert!(WeierstrassModel::from_ints([0, 0, 0, -3, 2]).is_err());
    assert!(TwoIsogenyPair::from_ints(0, 1).is_err());
    assert!(TwoIsogenyPair::from_ints(2, 1).is_err());
    assert!(TwoIsogenyPair::from_ints(2, 0).is_err());
    assert!(twisted_tate_isogeny(1, 1, 4).is_err());
}
