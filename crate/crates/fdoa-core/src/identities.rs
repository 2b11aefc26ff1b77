//! The exact identity suite behind `check-identities`.
//!
//! Each identity is checked with zero tolerance on one scenario. A fault can
//! be injected into a named identity by perturbing one coefficient of its
//! left-hand side, which must make that identity fail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::maps::{
    alpha_polys, beta, beta_polys, equal_velocity_through, membership, vtilde_variety,
    CremonaSetup, VarietyId,
};
use crate::model::{
    build_g, build_h, build_p, build_q1_in, build_q1_q2, build_q2_in, build_qtilde,
    build_quadric_q, convert_point, reduce_radii, FrameTransform, Scenario, QTILDE_W_SCALE,
    QTILDE_Z_SCALE, QUADRIC_Z_SCALE,
};
use crate::point::ProjPoint;
use crate::poly::{Frame, HomogPoly, Monomial};
use crate::scalar::Scalar;

pub const IDENTITY_NAMES: [&str; 13] = [
    "frame_w_q1",
    "frame_w_q2",
    "frame_w_qtilde",
    "frame_z_q",
    "frame_z_q1",
    "frame_z_qtilde",
    "frame_round_trip",
    "alpha_beta",
    "beta_alpha",
    "p_pullback_alpha",
    "qtilde_beta",
    "h_factorization",
    "cremona_round_trip",
];

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub identity: &'static str,
    pub scenario_index: usize,
    pub scenario: serde_json::Value,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub scenarios: usize,
    pub results: Vec<IdentityResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&IdentityResult> {
        self.results.iter().find(|r| !r.passed)
    }

    pub fn failed_identities(&self) -> Vec<&'static str> {
        let mut v: Vec<&'static str> = self
            .results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.identity)
            .collect();
        v.dedup();
        v
    }
}

fn k(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Adds `1` to the coefficient of the highest power of the first variable.
fn perturb(p: &HomogPoly) -> HomogPoly {
    let mut m: Monomial = [0; 5];
    m[0] = p.degree() as u8;
    p + &HomogPoly::monomial(p.frame(), m, Scalar::one())
}

fn maybe(p: HomogPoly, fault: bool) -> HomogPoly {
    if fault {
        perturb(&p)
    } else {
        p
    }
}

fn equal(lhs: &HomogPoly, rhs: &HomogPoly) -> (bool, String) {
    if lhs == rhs {
        (true, String::new())
    } else {
        (
            false,
            format!("difference has {} terms", (lhs - rhs).num_terms()),
        )
    }
}

fn proportional(lhs: &HomogPoly, rhs: &HomogPoly) -> (bool, String) {
    match lhs.scalar_ratio(rhs) {
        Some(_) if !lhs.is_zero() => (true, String::new()),
        _ => (false, "not a constant multiple".into()),
    }
}

/// Rewrite rules reducing modulo `(Q, Q1)` in W: `x1^2 -> -w0 w3`, `w0 w3 -> w1 w2`.
fn y_rules_w() -> Vec<(Monomial, HomogPoly)> {
    let f = Frame::W;
    let w = |i| HomogPoly::var(f, i);
    vec![
        ([0, 0, 0, 0, 2], -(&w(0) * &w(3))),
        ([1, 0, 0, 1, 0], &w(1) * &w(2)),
    ]
}

/// `lhs_i * x_j - lhs_j * x_i` for all pairs; zero iff `lhs` is proportional to `x`.
fn cross_terms(images: &[HomogPoly], frame: Frame) -> Vec<HomogPoly> {
    let mut out = Vec::new();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            out.push(
                &(&images[i] * &HomogPoly::var(frame, j))
                    - &(&images[j] * &HomogPoly::var(frame, i)),
            );
        }
    }
    out
}

fn random_point<R: Rng>(rng: &mut R, frame: Frame) -> ProjPoint {
    loop {
        let c: Vec<Scalar> = (0..frame.nvars())
            .map(|_| Scalar::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)))
            .collect();
        if let Ok(p) = ProjPoint::new(frame, c) {
            return p;
        }
    }
}

fn check_one<R: Rng>(
    name: &'static str,
    s: &Scenario,
    rng: &mut R,
    fault: bool,
) -> Result<(bool, String)> {
    let tw = FrameTransform::original_to_w();
    let tz = FrameTransform::w_to_z();
    let (q1, q2) = build_q1_q2();
    let r = match name {
        "frame_w_q1" => equal(&maybe(tw.pull_poly(&q1)?, fault), &build_q1_in(Frame::W)),
        "frame_w_q2" => equal(&maybe(tw.pull_poly(&q2)?, fault), &build_q2_in(Frame::W)),
        "frame_w_qtilde" => equal(
            &maybe(
                tw.pull_poly(&build_qtilde(s, Frame::Original))?
                    .scale(&k(QTILDE_W_SCALE)),
                fault,
            ),
            &build_qtilde(s, Frame::W),
        ),
        "frame_z_q" => equal(
            &maybe(
                tz.pull_poly(&build_quadric_q(Frame::W))?
                    .scale(&k(QUADRIC_Z_SCALE)),
                fault,
            ),
            &build_quadric_q(Frame::Z),
        ),
        "frame_z_q1" => equal(
            &maybe(
                tz.pull_poly(&build_q1_in(Frame::W))?
                    .scale(&k(QUADRIC_Z_SCALE)),
                fault,
            ),
            &build_q1_in(Frame::Z),
        ),
        "frame_z_qtilde" => equal(
            &maybe(
                FrameTransform::original_to_z()
                    .pull_poly(&build_qtilde(s, Frame::Original))?
                    .scale(&k(QTILDE_Z_SCALE)),
                fault,
            ),
            &build_qtilde(s, Frame::Z),
        ),
        "frame_round_trip" => {
            let mut ok = true;
            for _ in 0..5 {
                let p = random_point(rng, Frame::Original);
                let z = convert_point(&p, &FrameTransform::original_to_z())?;
                let mut w = convert_point(&z, &tz.inverted())?;
                if fault {
                    let mut c = w.coords().to_vec();
                    c[0] = &c[0] + &Scalar::one();
                    w = ProjPoint::new(Frame::W, c)?;
                }
                let back = convert_point(&w, &tw.inverted())?;
                ok &= back.proj_eq(&p);
            }
            (
                ok,
                if ok {
                    String::new()
                } else {
                    "ORIGINAL -> Z -> W -> ORIGINAL moved a point".into()
                },
            )
        }
        "alpha_beta" => {
            let b = beta_polys();
            let images: Vec<HomogPoly> = alpha_polys()
                .iter()
                .map(|a| a.compose(&b))
                .collect::<Result<_>>()?;
            let images: Vec<HomogPoly> = images
                .into_iter()
                .enumerate()
                .map(|(i, p)| maybe(p, fault && i == 0))
                .collect();
            let ok = cross_terms(&images, Frame::U)
                .iter()
                .all(HomogPoly::is_zero);
            (
                ok,
                if ok {
                    String::new()
                } else {
                    "alpha(beta(u)) is not a multiple of u".into()
                },
            )
        }
        "beta_alpha" => {
            let a = alpha_polys();
            let images: Vec<HomogPoly> = beta_polys()
                .iter()
                .map(|b| b.compose(&a))
                .collect::<Result<_>>()?;
            let images: Vec<HomogPoly> = images
                .into_iter()
                .enumerate()
                .map(|(i, p)| maybe(p, fault && i == 0))
                .collect();
            let rules = y_rules_w();
            let mut ok = true;
            for c in cross_terms(&images, Frame::W) {
                ok &= c.normal_form(&rules)?.is_zero();
            }
            (
                ok,
                if ok {
                    String::new()
                } else {
                    "beta(alpha(w)) is not a multiple of w modulo (Q, Q1)".into()
                },
            )
        }
        "p_pullback_alpha" => {
            let rules = y_rules_w();
            let lhs = maybe(build_p(s).compose(&alpha_polys())?, fault).normal_form(&rules)?;
            let f = Frame::W;
            let w23 = (&HomogPoly::var(f, 2) * &HomogPoly::var(f, 3)).pow(3);
            let rhs = (&w23 * &build_qtilde(s, f)).normal_form(&rules)?;
            if rhs.is_zero() {
                equal(&lhs, &rhs)
            } else {
                proportional(&lhs, &rhs)
            }
        }
        "qtilde_beta" => {
            let lhs = maybe(build_qtilde(s, Frame::W).compose(&beta_polys())?, fault);
            let f = Frame::U;
            let rhs = &(&HomogPoly::var(f, 0) * &HomogPoly::var(f, 1)) * &build_p(s);
            if rhs.is_zero() {
                equal(&lhs, &rhs)
            } else {
                proportional(&lhs, &rhs)
            }
        }
        "h_factorization" => {
            let [g1, g2, g3, g4] = build_g(s);
            let prod = &(&g1 * &g2) * &(&g3 * &g4);
            equal(&maybe(reduce_radii(&prod)?, fault), &build_h(s))
        }
        "cremona_round_trip" => cremona_check(rng, fault)?,
        other => (false, format!("unknown identity {other}")),
    };
    Ok(r)
}

/// Builds an equal-velocity scenario through a random point `u` of the
/// plane, maps `beta(u)` through `rho_hat` and back with `rho`.
fn cremona_check<R: Rng>(rng: &mut R, fault: bool) -> Result<(bool, String)> {
    for _ in 0..50 {
        let u = random_point(rng, Frame::U);
        let Ok(s) = equal_velocity_through(&u) else {
            continue;
        };
        let Ok(setups) = CremonaSetup::both(&s) else {
            continue;
        };
        let Ok(crate::maps::MapResult::Image(y)) = beta(&u) else {
            continue;
        };
        if !membership(&y, &VarietyId::Hcf(s.clone()))? {
            return Ok((false, "beta(u) is off HC_F".into()));
        }
        for setup in &setups {
            let Some(q) = setup.rho_hat(&y)?.image().cloned() else {
                continue;
            };
            if !membership(&q, &vtilde_variety(setup))? {
                return Ok((false, "rho_hat(y) is off Vtilde".into()));
            }
            let q = if fault {
                let mut c = q.coords().to_vec();
                c[0] = &c[0] + &Scalar::one();
                ProjPoint::new(Frame::Q, c)?
            } else {
                q
            };
            if !setup.rho(&q)?.proj_eq(&y) {
                return Ok((false, "rho(rho_hat(y)) != y".into()));
            }
        }
        return Ok((true, String::new()));
    }
    Ok((false, "no admissible equal-velocity sample".into()))
}

/// Runs every identity (or the named subset) on `n` scenarios drawn from `seed`.
pub fn run_suite(n: usize, seed: u64, only: Option<&[&str]>, inject: Option<&str>) -> SuiteReport {
    let names: Vec<&'static str> = IDENTITY_NAMES
        .iter()
        .copied()
        .filter(|name| only.is_none_or(|o| o.contains(name)))
        .collect();
    let per: Vec<Vec<IdentityResult>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let s = Scenario::random(&mut rng);
            names
                .iter()
                .map(|&name| {
                    let fault = inject == Some(name);
                    let (passed, detail) = check_one(name, &s, &mut rng, fault)
                        .unwrap_or_else(|e| (false, e.to_string()));
                    IdentityResult {
                        identity: name,
                        scenario_index: i,
                        scenario: s.to_json(),
                        passed,
                        detail,
                    }
                })
                .collect()
        })
        .collect();
    SuiteReport {
        seed,
        scenarios: n,
        results: per.into_iter().flatten().collect(),
    }
}
