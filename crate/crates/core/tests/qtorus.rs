use std::sync::Arc;

use proptest::prelude::*;

use qna_core::nascalar::rational::{int, ratio};
use qna_core::nascalar::{LaurentScalar, NaField, PadicScalar, Rational};
use qna_core::qtorus::{
    gauss_norm, point_seminorm, qt_invert, torsor_act, torsor_act_base, torsor_pullback_base, NormRequest, Orientation,
    PolyRadius, QSeries, TorsorElement, Truncation, TwistData,
};

const P: i64 = 32;

fn coeff() -> impl Strategy<Value = LaurentScalar> {
    (-5i64..=5, 1i64..=4, -2i64..=2).prop_filter_map("nonzero", |(n, d, v)| {
        (n != 0).then(|| LaurentScalar::from_terms([(v, ratio(n, d))], P).unwrap())
    })
}

fn rank3() -> Arc<TwistData<LaurentScalar>> {
    TwistData::new(3, &[(1, 0, 1), (2, 0, -2), (2, 1, 3)], LaurentScalar::default_q(P)).unwrap()
}

fn series(tw: Arc<TwistData<LaurentScalar>>) -> impl Strategy<Value = QSeries<LaurentScalar>> {
    let n = tw.rank();
    prop::collection::vec((prop::collection::vec(-2i64..=2, n), coeff()), 1..5)
        .prop_map(move |terms| QSeries::from_terms(&tw, terms).unwrap())
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-6i64..=6, 1i64..=3).prop_map(|(a, b)| ratio(a, b)), n)
}

fn unimodular() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0usize..3, 1usize..3, -2i64..=2), 0..6).prop_map(|ops| {
        let mut a: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
        for (i, s, k) in ops {
            let j = (i + s) % 3;
            let row = a[j].clone();
            for (x, y) in a[i].iter_mut().zip(row) {
                *x += k * y;
            }
        }
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_norm_is_multiplicative(f in series(rank3()), g in series(rank3()), r in point(3)) {
        let r = PolyRadius::new(r);
        let lhs = gauss_norm(&f.mul(&g), &r).unwrap();
        prop_assert_eq!(lhs, gauss_norm(&f, &r).unwrap() + gauss_norm(&g, &r).unwrap());
    }

    #[test]
    fn multiplication_is_associative(f in series(rank3()), g in series(rank3()), h in series(rank3())) {
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
    }

    #[test]
    fn multiplication_distributes(f in series(rank3()), g in series(rank3()), h in series(rank3())) {
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
    }

    #[test]
    fn torsor_action_is_equivariant(
        a in unimodular(),
        lambda in prop::collection::vec(coeff(), 3),
        f in series(rank3()),
        x in point(3),
    ) {
        let g = TorsorElement::new(a, lambda, Orientation::Special).unwrap();
        let acted = torsor_act(&g, &f).unwrap();
        let pulled = torsor_pullback_base(&g, &x).unwrap();
        prop_assert_eq!(point_seminorm(&acted, &x).unwrap(), point_seminorm(&f, &pulled).unwrap());
    }

    #[test]
    fn inverse_of_a_unit_plus_small(f in series(TwistData::plane(LaurentScalar::default_q(P)).unwrap())) {
        let tw = f.twist().clone();
        let small = f.filter_terms(|e| e.iter().all(|&k| k >= 0) && e.iter().any(|&k| k > 0));
        let t = Truncation::graded(&[1, 1], 6);
        let u = QSeries::one(&tw).add(&small.scale(&LaurentScalar::t_power(3, P)));
        prop_assume!(!u.is_empty());
        let v = qt_invert(&u, &t).unwrap();
        prop_assert_eq!(u.mul_truncated(&v, &t), QSeries::one(&tw));
    }
}

#[test]
fn torsor_points_for_the_identity_matrix() {
    let q = PadicScalar::default_q(5).unwrap();
    let five = PadicScalar::from_int(5, 5).unwrap();
    let one = q.one_like();
    let g = TorsorElement::new(vec![vec![1, 0], vec![0, 1]], vec![five, one], Orientation::Special).unwrap();
    let x = [int(3), int(-1)];
    assert_eq!(torsor_act_base(&g, &x).unwrap(), torsor_pullback_base(&g, &x).unwrap());
    assert_eq!(torsor_act_base(&g, &x).unwrap(), vec![int(2), int(-1)]);
}

#[test]
fn non_unimodular_matrices_are_rejected() {
    let q = LaurentScalar::default_q(P);
    let l = vec![q.one_like(), q.one_like()];
    assert!(TorsorElement::new(vec![vec![2, 0], vec![0, 1]], l.clone(), Orientation::General).is_err());
    assert!(TorsorElement::new(vec![vec![0, 1], vec![1, 0]], l.clone(), Orientation::Special).is_err());
    assert!(TorsorElement::new(vec![vec![0, 1], vec![1, 0]], l, Orientation::General).is_ok());
}

#[test]
fn norm_request_json() {
    let req: NormRequest = serde_json::from_str(
        r#"{"series":{"twist":{"n":2,"c":[[2,1,-1]],"q":{"kind":"padic","p":5,"value":"6/1"}},
            "terms":[[[1,0],{"kind":"padic","p":5,"value":"5/1"}],[[0,2],{"kind":"padic","p":5,"value":"1/1"}]]},
            "point":["3","1/2"]}"#,
    )
    .unwrap();
    assert_eq!(serde_json::to_string(&req.evaluate().unwrap()).unwrap(), r#"{"log_norm":"2/1"}"#);
}
