use fdoa_core::model::FrameTransform;
use fdoa_core::scalar::{Extension, GaussQ};
use fdoa_core::{Frame, HomogPoly, ProjPoint, Scalar};
use proptest::prelude::*;

fn gauss() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9, -20i64..=20, 1i64..=9).prop_map(|(a, b, c, d)| {
        &Scalar::from_ratio(a, b) + &(&Scalar::from_ratio(c, d) * &Scalar::i())
    })
}

/// Elements of `Q(i)(sqrt 2)`.
fn ext2() -> impl Strategy<Value = Scalar> {
    (gauss(), gauss()).prop_map(|(a, b)| {
        let s = Extension::new(GaussQ::from_int(2)).unwrap().generator();
        &a + &(&b * &s)
    })
}

fn coords(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(-6i64..=6, n).prop_map(|v| v.into_iter().map(Scalar::from_int).collect())
}

fn linear_form(frame: Frame) -> impl Strategy<Value = HomogPoly> {
    coords(frame.nvars()).prop_map(move |c| HomogPoly::linear(frame, &c))
}

fn form(frame: Frame) -> impl Strategy<Value = HomogPoly> {
    prop::collection::vec((linear_form(frame), linear_form(frame)), 1..=3).prop_map(move |fs| {
        fs.into_iter()
            .fold(HomogPoly::one(frame), |acc, (a, b)| &acc * &(&a + &b))
    })
}

proptest! {
    #[test]
    fn field_axioms(a in ext2(), b in ext2(), c in ext2()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn square_roots_of_squares(a in gauss()) {
        let sq = &a * &a;
        let r = sq.sqrt().expect("perfect square");
        prop_assert_eq!(&r * &r, sq);
    }

    #[test]
    fn eval_is_multiplicative(p in form(Frame::U), q in form(Frame::U), x in coords(3)) {
        let prod = &p * &q;
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert_eq!(prod.degree(), p.degree() + q.degree());
        prop_assert_eq!(prod.eval_coords(&x), &p.eval_coords(&x) * &q.eval_coords(&x));
    }

    #[test]
    fn homogeneity(p in form(Frame::U), x in coords(3), l in gauss()) {
        let scaled: Vec<Scalar> = x.iter().map(|c| c * &l).collect();
        prop_assert_eq!(p.eval_coords(&scaled), &l.pow(p.degree()) * &p.eval_coords(&x));
    }

    #[test]
    fn euler_identity(p in form(Frame::W)) {
        let n = Frame::W.nvars();
        let mut sum = HomogPoly::zero(Frame::W);
        for i in 0..n {
            sum = &sum + &(&HomogPoly::var(Frame::W, i) * &p.partial(i).unwrap());
        }
        prop_assert_eq!(sum, p.scale(&Scalar::from_int(p.degree() as i64)));
    }

    #[test]
    fn frame_change_round_trip(p in form(Frame::Original), x in coords(5)) {
        let t = FrameTransform::original_to_z();
        let pz = t.pull_poly(&p).unwrap();
        prop_assert_eq!(t.inverted().pull_poly(&pz).unwrap(), p.clone());
        if x.iter().any(|c| !c.is_zero()) {
            let pt = ProjPoint::new(Frame::Original, x.clone()).unwrap();
            let zpt = fdoa_core::model::convert_point(&pt, &t).unwrap();
            prop_assert_eq!(pz.eval(&zpt).unwrap(), p.eval(&pt).unwrap());
        }
    }

    #[test]
    fn projective_equality_ignores_scale(x in coords(3), l in gauss()) {
        prop_assume!(x.iter().any(|c| !c.is_zero()) && !l.is_zero());
        let p = ProjPoint::new(Frame::U, x).unwrap();
        let q = p.scaled(&l).unwrap();
        prop_assert!(p.proj_eq(&q));
        let (pn, qn) = (p.normalized(), q.normalized());
        prop_assert_eq!(pn.coords(), qn.coords());
        prop_assert_eq!(p.canonical_text(), q.canonical_text());
    }
}
