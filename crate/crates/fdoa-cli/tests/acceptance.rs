//! One pass/fail line per acceptance criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use fdoa_core::identities::{run_suite, IDENTITY_NAMES};
use fdoa_core::maps::{
    beta, equal_velocity_through, membership, p_point, rho_lift, rho_project, to_frame,
    CremonaSetup, VarietyId,
};
use fdoa_core::model::{build_l, build_p, build_qtilde, hcf_equations, y_equations};
use fdoa_core::poly::jacobian_rank_at;
use fdoa_core::singularities::{
    base_points_h, base_points_v, genus_degree, hc_singularities, singular_points_y,
    v_singularities, z_cap_g, z_singularities, SingularKind,
};
use fdoa_core::tracer::{equal_velocity_alpha, trace, validate_a0, Branch, TraceConfig};
use fdoa_core::{Frame, ProjPoint, Scalar, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (u32, fn() -> Check, Option<Duration>);
type GenusCase = (u32, Vec<(u32, u32)>, i64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ev(v: (i64, i64), d: (i64, i64)) -> Scenario {
    Scenario::equal_velocity(Scalar::from_ratio(v.0, v.1), Scalar::from_ratio(d.0, d.1)).unwrap()
}

fn plane(c: &[i64]) -> ProjPoint {
    ProjPoint::from_ints(Frame::Plane, c)
}

fn plane_i(c: [(i64, i64); 3]) -> ProjPoint {
    let coords = c
        .iter()
        .map(|&(re, im)| &Scalar::from_int(re) + &(&Scalar::from_int(im) * &Scalar::i()))
        .collect();
    ProjPoint::new(Frame::Plane, coords).unwrap()
}

fn criterion_1() -> Check {
    let report = run_suite(100, 0, None, None);
    ensure(report.all_passed(), || {
        format!("failed: {:?}", report.failed_identities())
    })?;
    Ok(format!("{} exact checks", report.results.len()))
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ys = singular_points_y();
    let hs = base_points_h();
    let vs = base_points_v();
    ensure(ys.len() == 4 && hs.len() == 8 && vs.len() == 6, || {
        "fixture sizes".into()
    })?;
    let yeq = y_equations(Frame::W);
    for p in &ys {
        ensure(
            membership(p, &VarietyId::Y).map_err(|e| e.to_string())?,
            || format!("{p} not on Y"),
        )?;
        let r = jacobian_rank_at(&yeq, p).map_err(|e| e.to_string())?;
        ensure(r < 2, || format!("Y is smooth at {p}"))?;
    }
    for _ in 0..20 {
        let s = Scenario::random(&mut rng);
        let heq = hcf_equations(&s, Frame::Z);
        for (i, p) in hs.iter().enumerate() {
            ensure(
                membership(p, &VarietyId::Hcf(s.clone())).map_err(|e| e.to_string())?,
                || format!("{p} not on HC_F"),
            )?;
            let r = jacobian_rank_at(&heq, p).map_err(|e| e.to_string())?;
            // The sensor points are singular on every member, the others smooth.
            let want_singular = i < 4;
            ensure((r < 3) == want_singular, || format!("rank {r} at {p}"))?;
        }
        let pp = build_p(&s);
        for (i, p) in vs.iter().enumerate() {
            ensure(
                membership(p, &VarietyId::V(s.clone())).map_err(|e| e.to_string())?,
                || format!("{p} not on V"),
            )?;
            let r = jacobian_rank_at(std::slice::from_ref(&pp), p).map_err(|e| e.to_string())?;
            let want_singular = i < 2;
            ensure((r == 0) == want_singular, || {
                format!("rank {r} at {p} on V")
            })?;
        }
    }
    Ok("18 fixtures on 20 scenarios".into())
}

fn criterion_3() -> Check {
    for (v, d) in [
        ((1, 1), (1, 2)),
        ((2, 1), (1, 3)),
        ((1, 3), (5, 2)),
        ((-3, 2), (7, 4)),
    ] {
        let s = ev(v, d);
        let h = hc_singularities(&s).map_err(|e| e.to_string())?;
        ensure(h.len() == 4, || {
            format!("HC_F({v:?},{d:?}) has {} singular points", h.len())
        })?;
        let r = v_singularities(&s).map_err(|e| e.to_string())?;
        ensure(
            r.len() == 2 && r.count_kind(SingularKind::Node) == 2,
            || format!("V({v:?},{d:?}) nodes"),
        )?;
        let z = z_singularities(&s).map_err(|e| e.to_string())?;
        let expected = [
            (plane(&[1, 1, 0]), 4),
            (plane(&[1, -1, 0]), 4),
            (plane_i([(0, 0), (1, 0), (0, 1)]), 2),
            (plane_i([(0, 0), (1, 0), (0, -1)]), 2),
            (plane_i([(1, 0), (0, 0), (0, 1)]), 2),
            (plane_i([(1, 0), (0, 0), (0, -1)]), 2),
        ];
        ensure(z.len() == 6, || {
            format!("Z({v:?},{d:?}) has {} singular points", z.len())
        })?;
        for (p, m) in &expected {
            let hit = z.points.iter().find(|sp| sp.point.proj_eq(p));
            ensure(hit.is_some_and(|sp| sp.multiplicity == Some(*m)), || {
                format!("Z misses {p} of multiplicity {m}")
            })?;
        }
    }
    for (d, extra) in [(2, [1, -1, 0, 0, -1]), (-2, [1, -1, 0, 0, 1])] {
        let h = hc_singularities(&ev((1, 1), (d, 1))).map_err(|e| e.to_string())?;
        let q = ProjPoint::from_ints(Frame::Z, &extra);
        ensure(h.len() == 5 && h.contains(&q), || {
            format!("HC_F at d = {d}v")
        })?;
    }
    for d in [1, -1] {
        let r = v_singularities(&ev((1, 1), (d, 1))).map_err(|e| e.to_string())?;
        ensure(
            r.len() == 2 && r.count_kind(SingularKind::Cusp) == 2,
            || format!("V cusps at d = {d}v"),
        )?;
    }
    for d in [2, -2] {
        let r = v_singularities(&ev((1, 1), (d, 1))).map_err(|e| e.to_string())?;
        ensure(
            r.len() == 3 && r.count_kind(SingularKind::Node) == 3,
            || format!("V nodes at d = {d}v"),
        )?;
    }
    Ok("HC_F 4/5, V 2 nodes/2 cusps/3 nodes, Z 6 points".into())
}

fn criterion_4() -> Check {
    let cases: [GenusCase; 4] = [
        (4, vec![(2, 1), (2, 1)], 1),
        (8, vec![(4, 8), (4, 8), (2, 1), (2, 1), (2, 1), (2, 1)], 1),
        (4, vec![(2, 1); 3], 0),
        (3, vec![], 1),
    ];
    for (deg, data, want) in cases {
        let g = genus_degree(deg, &data).map_err(|e| e.to_string())?;
        ensure(g == want, || {
            format!("degree {deg}: genus {g}, expected {want}")
        })?;
    }
    Ok("1, 1, 0, 1".into())
}

fn random_u(rng: &mut ChaCha8Rng) -> ProjPoint {
    loop {
        let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-9..=9)).collect();
        if c.iter().all(|&x| x != 0) && c[0].abs() != c[1].abs() {
            return ProjPoint::from_ints(Frame::U, &c);
        }
    }
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    let mut round_trips = 0;
    while done < 20 {
        let u = random_u(&mut rng);
        let Ok(s) = equal_velocity_through(&u) else {
            continue;
        };
        let root = done % 2;
        let Ok(setup) = CremonaSetup::new(&s, root) else {
            continue;
        };
        let exc = setup.exceptional_points().map_err(|e| e.to_string())?;
        ensure(exc.len() == 8, || "expected 8 exceptional points".into())?;
        for i in 0..8 {
            for j in i + 1..8 {
                ensure(!exc[i].0.proj_eq(&exc[j].0), || {
                    format!("exceptional points {i} and {j} coincide")
                })?;
            }
        }
        for j in 1..=4 {
            let hits: Vec<_> = exc
                .iter()
                .filter(|(p, _)| setup.rho(p).is_ok_and(|y| y.proj_eq(&p_point(j))))
                .collect();
            ensure(hits.len() == 2, || {
                format!("{} exceptional points map to p{j}", hits.len())
            })?;
        }
        let mut seeds: Vec<ProjPoint> = exc.into_iter().map(|(p, _)| p).collect();
        if let Ok(y) = beta(&u) {
            if let Some(y) = y.image() {
                if let Ok(q) = setup.rho_hat(y) {
                    seeds.extend(q.image().cloned());
                }
            }
        }
        let pts = setup
            .sample_points(&mut rng, &seeds, 50)
            .map_err(|e| e.to_string())?;
        let vt = VarietyId::VTilde(Box::new(setup.clone()));
        for q in &pts {
            ensure(membership(q, &vt).map_err(|e| e.to_string())?, || {
                format!("{q} not on Vtilde")
            })?;
            let y = setup.rho(q).map_err(|e| e.to_string())?;
            let back = setup.rho_hat(&y).map_err(|e| e.to_string())?;
            ensure(back.image().is_some_and(|b| b.proj_eq(q)), || {
                format!("rho_hat(rho({q})) != {q}")
            })?;
            round_trips += 1;
        }
        done += 1;
    }
    Ok(format!("20 scenarios, {round_trips} round trips"))
}

/// A random scenario together with an exact rational point of its HC_F.
fn random_hcf_point(rng: &mut ChaCha8Rng) -> (Scenario, ProjPoint) {
    loop {
        let u = random_u(rng);
        let Ok(b) = beta(&u) else { continue };
        let Some(y) = b.image().cloned() else {
            continue;
        };
        let mut c = || Scalar::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6));
        let v = [c(), c(), c(), c()];
        let make =
            |d: Scalar| Scenario::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), d);
        let (Ok(s0), Ok(s1)) = (make(Scalar::zero()), make(Scalar::one())) else {
            continue;
        };
        let a = build_qtilde(&s0, Frame::W).eval(&y).unwrap();
        let b = &build_qtilde(&s1, Frame::W).eval(&y).unwrap() - &a;
        let Some(binv) = b.inv() else { continue };
        let Ok(s) = make(-(&a * &binv)) else { continue };
        if !s.satisfies_no_l_factors() {
            continue;
        }
        return (s, to_frame(&y, Frame::Original).unwrap());
    }
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut on_g = 0;
    for _ in 0..200 {
        let (s, y) = random_hcf_point(&mut rng);
        let z = rho_project(&y, &s).map_err(|e| e.to_string())?;
        let lifts = rho_lift(&z, &s).map_err(|e| format!("lift of {z}: {e}"))?;
        let in_g = (&build_l(1, &s, Frame::Plane).eval(&z).unwrap()
            * &build_l(2, &s, Frame::Plane).eval(&z).unwrap())
            .is_zero();
        if in_g {
            on_g += 1;
            continue;
        }
        ensure(lifts.len() == 1, || format!("{} lifts of {z}", lifts.len()))?;
        ensure(lifts[0].proj_eq(&y), || format!("lift of {z} is not {y}"))?;
    }
    for (v, d) in [((1, 1), (1, 2)), ((2, 1), (3, 1)), ((1, 3), (-1, 5))] {
        let g = z_cap_g(&ev(v, d)).map_err(|e| e.to_string())?;
        let pts = g.exact_points();
        let want = [plane(&[1, 1, 0]), plane(&[1, -1, 0])];
        ensure(
            g.count() == 2 && want.iter().all(|w| pts.iter().any(|p| p.proj_eq(w))),
            || format!("Z cap G for ({v:?},{d:?}) has {} points", g.count()),
        )?;
    }
    let mut worst = 0;
    let mut n = 0;
    while n < 50 {
        let s = Scenario::random(&mut rng);
        if !s.satisfies_no_l_factors() {
            continue;
        }
        let g = z_cap_g(&s).map_err(|e| e.to_string())?;
        ensure(g.count() <= 16, || {
            format!("{} points in Z cap G", g.count())
        })?;
        worst = worst.max(g.count());
        n += 1;
    }
    Ok(format!(
        "200 samples ({on_g} on G), max |Z cap G| = {worst}"
    ))
}

fn criterion_7() -> Check {
    // Wide enough that the App loops for alpha < 1 close inside the window.
    let cfg = TraceConfig {
        window: (-8.0, 8.0, -8.0, 8.0),
        ..TraceConfig::default()
    };
    let mut last = f64::INFINITY;
    let mut diameters = Vec::new();
    let mut worst_dev = 0.0f64;
    let mut check_a0 = |s: &Scenario, r: &fdoa_core::tracer::TraceResult| -> Result<(), String> {
        let rep = validate_a0(s, r.branch(Branch::App)).map_err(|e| e.to_string())?;
        worst_dev = worst_dev.max(rep.max_deviation);
        Ok(())
    };
    for alpha in [0.25, 0.5, 0.75] {
        let s = equal_velocity_alpha(alpha).map_err(|e| e.to_string())?;
        let r = trace(&s, &cfg).map_err(|e| e.to_string())?;
        for b in Branch::ALL {
            ensure(!r.branch(b).is_empty(), || {
                format!("{} empty at alpha {alpha}", b.label())
            })?;
        }
        let clipped = r
            .touches_boundary
            .iter()
            .any(|&(b, t)| b == Branch::App && t);
        ensure(!clipped, || {
            format!("App loop at alpha {alpha} leaves the window")
        })?;
        let dia = r.branch(Branch::App).diameter();
        ensure(dia < last, || {
            format!("App diameter {dia} at alpha {alpha} not below {last}")
        })?;
        last = dia;
        diameters.push(dia);
        check_a0(&s, &r)?;
    }
    for alpha in [1.25, 1.5, 1.75] {
        let s = equal_velocity_alpha(alpha).map_err(|e| e.to_string())?;
        let r = trace(&s, &cfg).map_err(|e| e.to_string())?;
        let off = r.branch(Branch::App).off_sensor(1e-3).count();
        ensure(off == 0, || {
            format!("{off} App vertices off the sensors at alpha {alpha}")
        })?;
        check_a0(&s, &r)?;
    }
    let s = equal_velocity_alpha(2.5).map_err(|e| e.to_string())?;
    let r = trace(&s, &cfg).map_err(|e| e.to_string())?;
    let off: usize = r.branches.iter().map(|b| b.off_sensor(1e-3).count()).sum();
    ensure(off == 0, || {
        format!("{off} vertices off the sensors at alpha 2.5")
    })?;
    check_a0(&s, &r)?;
    Ok(format!(
        "App diameters {diameters:.3?}, max FDOA deviation {worst_dev:.1e}"
    ))
}

fn criterion_8() -> Check {
    for name in IDENTITY_NAMES {
        let out = Command::new(env!("CARGO_BIN_EXE_fdoa"))
            .args([
                "check-identities",
                "--n",
                "2",
                "--seed",
                "0",
                "--inject-fault",
                name,
            ])
            .output()
            .map_err(|e| e.to_string())?;
        let text = format!(
            "{}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
        ensure(out.status.code() == Some(1), || {
            format!("{name}: exit {:?}", out.status.code())
        })?;
        ensure(text.contains(&format!("identity {name} failed")), || {
            format!("{name} not named in output")
        })?;
    }
    Ok(format!("{} injected faults detected", IDENTITY_NAMES.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, criterion_1, Some(Duration::from_secs(30))),
        (2, criterion_2, Some(Duration::from_secs(5))),
        (3, criterion_3, Some(Duration::from_secs(5))),
        (4, criterion_4, None),
        (5, criterion_5, Some(Duration::from_secs(30))),
        (6, criterion_6, Some(Duration::from_secs(60))),
        (7, criterion_7, Some(Duration::from_secs(20))),
        (8, criterion_8, None),
    ];
    let mut failed = Vec::new();
    for (n, f, budget) in criteria {
        let start = Instant::now();
        let res = f();
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|b| elapsed > b);
        let (tag, detail) = match (&res, over) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; over budget {:?}", budget.unwrap())),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        println!(
            "criterion {n}: {tag} {detail} ({:.2}s)",
            elapsed.as_secs_f64()
        );
        if tag == "FAIL" {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
