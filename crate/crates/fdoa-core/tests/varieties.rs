use fdoa_core::maps::{alpha, beta, membership, VarietyId};
use fdoa_core::model::build_p;
use fdoa_core::singularities::{
    base_points_h, base_points_v, genus_degree, v_singularities, z_cap_g, z_singularities,
};
use fdoa_core::{Frame, ProjPoint, Scalar, Scenario};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ev(v: i64, d: (i64, i64)) -> Scenario {
    Scenario::equal_velocity(Scalar::from_int(v), Scalar::from_ratio(d.0, d.1)).unwrap()
}

#[test]
fn base_points_lie_on_every_member() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let (hs, vs) = (base_points_h(), base_points_v());
    for _ in 0..100 {
        let s = Scenario::random(&mut rng);
        for p in &hs {
            assert!(
                membership(p, &VarietyId::Hcf(s.clone())).unwrap(),
                "{p} off HC_F for {s:?}"
            );
        }
        for p in &vs {
            assert!(build_p(&s).eval(p).unwrap().is_zero(), "{p} off V");
        }
    }
}

#[test]
fn genus_matches_singularity_data() {
    for (v, d) in [(1, (1, 2)), (3, (1, 1)), (2, (7, 3)), (-1, (5, 4))] {
        let s = ev(v, d);
        for r in [v_singularities(&s).unwrap(), z_singularities(&s).unwrap()] {
            let degree = if r.variety == "V" { 4 } else { 8 };
            let data: Vec<(u32, u32)> = r
                .points
                .iter()
                .map(|p| (p.multiplicity.unwrap(), p.delta.unwrap()))
                .collect();
            assert_eq!(
                r.genus,
                Some(genus_degree(degree, &data).unwrap()),
                "{}",
                r.variety
            );
            assert_eq!(r.genus, Some(1));
        }
    }
    let r = v_singularities(&ev(1, (2, 1))).unwrap();
    assert_eq!(r.genus, Some(0));
}

#[test]
fn alpha_inverts_beta_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    use rand::Rng;
    for _ in 0..50 {
        let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-20..=20)).collect();
        let Ok(u) = ProjPoint::new(Frame::U, c.iter().map(|&x| Scalar::from_int(x)).collect())
        else {
            continue;
        };
        let Some(y) = beta(&u).unwrap().image().cloned() else {
            continue;
        };
        assert!(membership(&y, &VarietyId::Y).unwrap());
        if let Some(back) = alpha(&y).unwrap().image() {
            assert!(back.proj_eq(&u));
        }
    }
}

fn scenario() -> impl Strategy<Value = Scenario> {
    prop::array::uniform5((-9i64..=9, 1i64..=6)).prop_filter_map(
        "needs a valid generic scenario",
        |r| {
            let s = Scenario::from_ratios(r).ok()?;
            s.satisfies_no_l_factors().then_some(s)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn z_cap_g_is_bounded_and_holds_the_sensors(s in scenario()) {
        let g = z_cap_g(&s).unwrap();
        prop_assert!(g.count() <= 16);
        let exact = g.exact_points();
        for sensor in [[1, 1, 0], [1, -1, 0]] {
            let p = ProjPoint::from_ints(Frame::Plane, &sensor);
            prop_assert!(exact.iter().any(|q| q.proj_eq(&p)));
        }
        for p in &g.points {
            prop_assert!(p.radius >= 0.0);
        }
    }
}
