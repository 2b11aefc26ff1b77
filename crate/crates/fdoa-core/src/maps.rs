//! Rational maps between the varieties and exact membership tests.

use crate::error::{Error, Result};
use crate::model::{
    build_h, build_p, build_qtilde, build_quadric_q, convert_point, hcf_equations, y_equations,
    FrameTransform, Scenario,
};
use crate::point::{dedup_points, ProjPoint};
use crate::poly::{Frame, HomogPoly};
use crate::scalar::{solve_quadratic, Scalar};

/// Result of applying a rational map at a point.
#[derive(Clone, Debug)]
pub enum MapResult {
    Image(ProjPoint),
    /// All coordinate polynomials vanish; the string names the locus.
    Undefined(String),
}

impl MapResult {
    pub fn image(&self) -> Option<&ProjPoint> {
        match self {
            MapResult::Image(p) => Some(p),
            MapResult::Undefined(_) => None,
        }
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, MapResult::Undefined(_))
    }
}

fn var(frame: Frame, name: &str) -> HomogPoly {
    HomogPoly::var(frame, frame.var_index(name).expect("variable in frame"))
}

fn all_vanish(polys: &[HomogPoly], pt: &ProjPoint) -> Result<bool> {
    for p in polys {
        if !p.eval(pt)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn apply(polys: &[HomogPoly], pt: &ProjPoint) -> Vec<Scalar> {
    polys.iter().map(|p| p.eval_coords(pt.coords())).collect()
}

/// Coordinate polynomials of `alpha`: `[w3 x1, w2 x1, w2 w3]`.
pub fn alpha_polys() -> [HomogPoly; 3] {
    let f = Frame::W;
    let (w2, w3, x1) = (var(f, "w2"), var(f, "w3"), var(f, "x1"));
    [&w3 * &x1, &w2 * &x1, &w2 * &w3]
}

/// Coordinate polynomials of `beta`: `[-u0 u1^2, -u0^2 u1, u1 u2^2, u0 u2^2, u0 u1 u2]`.
pub fn beta_polys() -> [HomogPoly; 5] {
    let f = Frame::U;
    let (u0, u1, u2) = (var(f, "u0"), var(f, "u1"), var(f, "u2"));
    [
        -(&u0 * &u1.pow(2)),
        -(&u0.pow(2) * &u1),
        &u1 * &u2.pow(2),
        &u0 * &u2.pow(2),
        &u0 * &u1 * &u2,
    ]
}

/// The lines `l1..l4` of Y, as the W coordinates forced to vanish on each.
const LINES_W: [(&str, [usize; 3]); 4] = [
    ("l1", [2, 3, 4]),
    ("l2", [1, 3, 4]),
    ("l3", [0, 1, 4]),
    ("l4", [0, 2, 4]),
];

/// Names of the lines `l1..l4` containing a W-frame point.
pub fn lines_containing(pt: &ProjPoint) -> Vec<&'static str> {
    LINES_W
        .iter()
        .filter(|(_, zeros)| zeros.iter().all(|&i| pt.coord(i).is_zero()))
        .map(|(n, _)| *n)
        .collect()
}

pub fn on_y(pt: &ProjPoint) -> Result<bool> {
    all_vanish(&y_equations(pt.frame()), pt)
}

/// `alpha([w, x1]) = [w3 x1, w2 x1, w2 w3]` from Y to the U-plane.
pub fn alpha(pt: &ProjPoint) -> Result<MapResult> {
    crate::poly::check_frame(Frame::W, pt.frame())?;
    if !on_y(pt)? {
        return Err(Error::NotOnY);
    }
    let img = apply(&alpha_polys(), pt);
    match ProjPoint::new(Frame::U, img) {
        Ok(p) => Ok(MapResult::Image(p)),
        Err(_) => Ok(MapResult::Undefined(format!(
            "alpha undefined on {}",
            lines_containing(pt).join(",")
        ))),
    }
}

/// `beta([u]) = [-u0 u1^2, -u0^2 u1, u1 u2^2, u0 u2^2, u0 u1 u2]` into Y.
pub fn beta(pt: &ProjPoint) -> Result<MapResult> {
    crate::poly::check_frame(Frame::U, pt.frame())?;
    let img = apply(&beta_polys(), pt);
    match ProjPoint::new(Frame::W, img) {
        Ok(p) => Ok(MapResult::Image(p)),
        Err(_) => Ok(MapResult::Undefined(
            "beta undefined at a coordinate point".into(),
        )),
    }
}

/// Fibre of the projection `[w, x1] -> [w]` over a point of the quadric `Q`.
pub fn pi_fibre(pt: &ProjPoint) -> Result<Vec<ProjPoint>> {
    crate::poly::check_frame(Frame::P3, pt.frame())?;
    if !build_quadric_q(Frame::P3).eval(pt)?.is_zero() {
        return Err(Error::NotOnQuadric);
    }
    let c = pt.coords();
    let r2 = -(&c[0] * &c[3]);
    let lift = |r: Scalar| {
        let mut v = c.to_vec();
        v.push(r);
        ProjPoint::new(Frame::W, v).expect("nonzero")
    };
    if r2.is_zero() {
        return Ok(vec![lift(Scalar::zero())]);
    }
    let r = r2.sqrt().ok_or(Error::IrrationalFibre)?;
    Ok(vec![lift(r.clone()), lift(-r)])
}

fn on_hcf_original(pt: &ProjPoint, s: &Scenario) -> Result<bool> {
    all_vanish(&hcf_equations(s, Frame::Original), pt)
}

/// `rho([u, y1, y2, r1, r2]) = [u, y1, y2]`.
pub fn rho_project(pt: &ProjPoint, s: &Scenario) -> Result<ProjPoint> {
    crate::poly::check_frame(Frame::Original, pt.frame())?;
    if !on_hcf_original(pt, s)? {
        return Err(Error::NotOnHCF);
    }
    ProjPoint::new(Frame::Plane, pt.coords()[..3].to_vec()).map_err(|_| Error::ZeroImage)
}

/// All sign lifts `[u, y1, y2, +-R1, +-R2]` of a point of Z that satisfy `Qtilde = 0`.
///
/// Exact mode: fails with [`Error::IrrationalFibre`] when `f1` or `f2` has
/// no square root in the point's field.
pub fn rho_lift(zpt: &ProjPoint, s: &Scenario) -> Result<Vec<ProjPoint>> {
    crate::poly::check_frame(Frame::Plane, zpt.frame())?;
    if !build_h(s).eval(zpt)?.is_zero() {
        return Err(Error::NotOnZ);
    }
    let c = zpt.coords();
    let (u, y1, y2) = (&c[0], &c[1], &c[2]);
    let f1 = &(&(u - y1) * &(u - y1)) + &(y2 * y2);
    let f2 = &(&(u + y1) * &(u + y1)) + &(y2 * y2);
    let r1 = f1.sqrt().ok_or(Error::IrrationalFibre)?;
    let r2 = f2.sqrt().ok_or(Error::IrrationalFibre)?;
    let qt = build_qtilde(s, Frame::Original);
    let mut out = Vec::new();
    for (a, b) in [(1, 1), (-1, -1), (-1, 1), (1, -1)] {
        let mut v = c.to_vec();
        v.push(&r1 * &Scalar::from_int(a));
        v.push(&r2 * &Scalar::from_int(b));
        let p = ProjPoint::new(Frame::Original, v)?;
        if qt.eval(&p)?.is_zero() {
            out.push(p);
        }
    }
    Ok(dedup_points(out))
}

/// A floating-point lift of a real chart point `(1, y1, y2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatLift {
    pub coords: [f64; 5],
    pub residual: f64,
}

/// Floating-mode lift: the sign choices whose `Qtilde` residual, relative to
/// the size of its terms, is below `tol`.
pub fn rho_lift_float(y: (f64, f64), s: &Scenario, tol: f64) -> Vec<FloatLift> {
    let [v11, v12, v21, v22, d] = s.to_f64();
    let (y1, y2) = y;
    let l1 = v11 * (1.0 - y1) - v12 * y2;
    let l2 = -v21 * (1.0 + y1) - v22 * y2;
    let r1 = (1.0 - y1).hypot(y2);
    let r2 = (1.0 + y1).hypot(y2);
    let scale = l2.abs() * r1 + l1.abs() * r2 + d.abs() * r1 * r2 + f64::MIN_POSITIVE;
    let mut out: Vec<FloatLift> = Vec::new();
    for (a, b) in [(1.0, 1.0), (-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0)] {
        let (ra, rb) = (a * r1, b * r2);
        let residual = (l2 * ra - l1 * rb - d * ra * rb).abs() / scale;
        let coords = [1.0, y1, y2, ra, rb];
        if residual < tol && !out.iter().any(|l| l.coords == coords) {
            out.push(FloatLift { coords, residual });
        }
    }
    out
}

/// The Segre map `([a0, a1], [b0, b1]) -> [a0 b0, a0 b1, a1 b0, a1 b1]`.
pub fn segre(a: &ProjPoint, b: &ProjPoint) -> Result<ProjPoint> {
    crate::poly::check_frame(Frame::P1, a.frame())?;
    crate::poly::check_frame(Frame::P1, b.frame())?;
    let (a, b) = (a.coords(), b.coords());
    ProjPoint::new(
        Frame::P3,
        vec![&a[0] * &b[0], &a[0] * &b[1], &a[1] * &b[0], &a[1] * &b[1]],
    )
}

/// Local inverse of [`segre`] on `w0 != 0`: `[w0, w2]`, `[w0, w1]`.
pub fn segre_inverse(w: &ProjPoint) -> Result<(ProjPoint, ProjPoint)> {
    crate::poly::check_frame(Frame::P3, w.frame())?;
    let c = w.coords();
    if c[0].is_zero() {
        return Err(Error::ZeroImage);
    }
    Ok((
        ProjPoint::new(Frame::P1, vec![c[0].clone(), c[2].clone()])?,
        ProjPoint::new(Frame::P1, vec![c[0].clone(), c[1].clone()])?,
    ))
}

/// Data of the desingularizing Cremona construction for an equal-velocity scenario.
#[derive(Clone, Debug)]
pub struct CremonaSetup {
    pub scenario: Scenario,
    pub v: Scalar,
    pub d: Scalar,
    /// The chosen root of `d t^2 + 2 v t + d = 0`.
    pub t: Scalar,
    pub root_index: usize,
}

impl CremonaSetup {
    /// Selects root `root_index` (0 or 1) of `d t^2 + 2 v t + d`.
    pub fn new(s: &Scenario, root_index: usize) -> Result<Self> {
        let v = s
            .equal_velocity_v()
            .ok_or(Error::ScenarioNotEqualVelocity)?
            .clone();
        let d = s.d.clone();
        let d2 = &d * &d;
        let v2 = &v * &v;
        let mut bad = Vec::new();
        if d.is_zero() {
            bad.push("d = 0");
        }
        if v.is_zero() {
            bad.push("v = 0");
        }
        if d2 == v2 {
            bad.push("d^2 = v^2");
        }
        if d2 == &Scalar::from_int(4) * &v2 {
            bad.push("d^2 = 4v^2");
        }
        if !bad.is_empty() {
            return Err(Error::DegenerateParameters(bad.join(", ")));
        }
        let roots = solve_quadratic(&d, &(&Scalar::from_int(2) * &v), &d)?;
        let t = roots
            .get(root_index)
            .cloned()
            .ok_or_else(|| Error::DegenerateParameters("root index".into()))?;
        Ok(Self {
            scenario: s.clone(),
            v,
            d,
            t,
            root_index,
        })
    }

    /// Both root choices.
    pub fn both(s: &Scenario) -> Result<[Self; 2]> {
        Ok([Self::new(s, 0)?, Self::new(s, 1)?])
    }

    fn k(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    /// The plane cubic `Vtilde` in the Q frame.
    pub fn v_tilde(&self) -> HomogPoly {
        let f = Frame::Q;
        let (q0, q1, q2) = (var(f, "q0"), var(f, "q1"), var(f, "q2"));
        let (v, d, t) = (&self.v, &self.d, &self.t);
        let c = &Self::k(2) * &(&(v * t) + d);
        let lin = q1.scale(&c) + q2.scale(d);
        let t2 = t * t;
        &lin * &q2.pow(2)
            - (&q0 * &((&q1 + &q2).pow(2) + q1.pow(2).scale(&t2))).scale(&(&Self::k(2) * &(v * t)))
            + (&lin * &q0.pow(2)).scale(&t2)
    }

    /// Coordinate polynomials of `rho` (valid off `q0 q1 q2 = 0`).
    pub fn rho_polys(&self) -> [HomogPoly; 5] {
        let f = Frame::Q;
        let (q0, q1, q2) = (var(f, "q0"), var(f, "q1"), var(f, "q2"));
        let t = &self.t;
        let t2 = t * t;
        let s12 = &q1 + &q2;
        [
            -(&q0 * &q2 * s12.pow(2)),
            -(&q1 * &q2.pow(2) * &s12),
            (&q0.pow(2) * &q1 * &s12).scale(&t2),
            (&q0 * &q1.pow(2) * &q2).scale(&t2),
            (&q0 * &q1 * &q2 * &s12).scale(t),
        ]
    }

    /// Coordinate polynomials of `rho_hat`: `[w2 (t x1 - w3), t w3 x1, t x1 (t x1 - w3)]`.
    pub fn rho_hat_polys(&self) -> [HomogPoly; 3] {
        let f = Frame::W;
        let (w2, w3, x1) = (var(f, "w2"), var(f, "w3"), var(f, "x1"));
        let t = &self.t;
        let tx = x1.scale(t);
        let m = &tx - &w3;
        [&w2 * &m, (&w3 * &x1).scale(t), &tx * &m]
    }

    /// The map `rho: Vtilde -> HC_F`, extended by `[0,1,0] -> p3`, `[1,0,0] -> p4`.
    pub fn rho(&self, q: &ProjPoint) -> Result<ProjPoint> {
        crate::poly::check_frame(Frame::Q, q.frame())?;
        if !self.v_tilde().eval(q)?.is_zero() {
            return Err(Error::NotOnVariety);
        }
        if q.proj_eq(&ProjPoint::from_ints(Frame::Q, &[0, 1, 0])) {
            return Ok(p_point(3));
        }
        if q.proj_eq(&ProjPoint::from_ints(Frame::Q, &[1, 0, 0])) {
            return Ok(p_point(4));
        }
        let img = apply(&self.rho_polys(), q);
        ProjPoint::new(Frame::W, img)
            .map_err(|_| Error::DegenerateParameters("rho has no value here".into()))
    }

    /// The map `rho_hat: HC_F -> Vtilde`, undefined at `p1..p4`.
    pub fn rho_hat(&self, pt: &ProjPoint) -> Result<MapResult> {
        crate::poly::check_frame(Frame::W, pt.frame())?;
        if !all_vanish(&hcf_equations(&self.scenario, Frame::W), pt)? {
            return Err(Error::NotOnHCF);
        }
        let img = apply(&self.rho_hat_polys(), pt);
        match ProjPoint::new(Frame::Q, img) {
            Ok(p) => Ok(MapResult::Image(p)),
            Err(_) => Ok(MapResult::Undefined(
                "rho_hat undefined at a singular point p_j".into(),
            )),
        }
    }

    /// Third intersection of `Vtilde` with the chord through two distinct
    /// points of it; `None` when the chord lies in the curve.
    pub fn chord_point(&self, a: &ProjPoint, b: &ProjPoint) -> Result<Option<ProjPoint>> {
        crate::poly::check_frame(Frame::Q, a.frame())?;
        crate::poly::check_frame(Frame::Q, b.frame())?;
        if a.proj_eq(b) {
            return Err(Error::DegenerateParameters(
                "chord needs two distinct points".into(),
            ));
        }
        let f = self.v_tilde();
        if !f.eval(a)?.is_zero() || !f.eval(b)?.is_zero() {
            return Err(Error::NotOnVariety);
        }
        Ok(third_point(&f, a.coords(), b.coords()))
    }

    /// `n` distinct points of `Vtilde` off `q0 q1 q2 (q1 + q2) = 0`, grown by
    /// chords from `seeds` (points of the curve). Every chord has one end at a
    /// seed, and chord depth grows only once shallower pairs are used up so
    /// coordinates stay small.
    pub fn sample_points<R: rand::Rng>(
        &self,
        rng: &mut R,
        seeds: &[ProjPoint],
        n: usize,
    ) -> Result<Vec<ProjPoint>> {
        let f = self.v_tilde();
        for p in seeds {
            crate::poly::check_frame(Frame::Q, p.frame())?;
            if !f.eval(p)?.is_zero() {
                return Err(Error::NotOnVariety);
            }
        }
        let mut pool: Vec<ProjPoint> = dedup_points(seeds.to_vec())
            .iter()
            .map(ProjPoint::normalized)
            .collect();
        if pool.len() < 2 {
            return Err(Error::DegenerateParameters("need two seed points".into()));
        }
        let nseeds = pool.len();
        let mut depth = vec![0u8; nseeds];
        let mut limit = 2u8;
        let mut shallow: Vec<usize> = (0..nseeds).collect();
        let mut tried = std::collections::HashSet::new();
        let mut out: Vec<ProjPoint> = Vec::new();
        let mut skips = 0;
        while out.len() < n {
            if skips > 20 * shallow.len() * nseeds {
                limit += 1;
                if limit > 8 {
                    return Err(Error::DegenerateParameters("chord sampling stalled".into()));
                }
                shallow = (0..pool.len()).filter(|&i| depth[i] < limit).collect();
                skips = 0;
            }
            let ia = shallow[rng.gen_range(0..shallow.len())];
            let ib = rng.gen_range(0..nseeds);
            if ia == ib || !tried.insert((ia.min(ib), ia.max(ib))) {
                skips += 1;
                continue;
            }
            let (a, b) = (&pool[ia], &pool[ib]);
            let Some(p) = third_point(&f, a.coords(), b.coords()) else {
                continue;
            };
            if pool.iter().any(|q| q.coords() == p.coords()) {
                continue;
            }
            if depth[ia] + 1 < limit {
                shallow.push(pool.len());
            }
            depth.push(depth[ia] + 1);
            pool.push(p.clone());
            let c = p.coords();
            if c[0].is_zero() || c[1].is_zero() || c[2].is_zero() || (&c[1] + &c[2]).is_zero() {
                continue;
            }
            out.push(p);
        }
        Ok(out)
    }

    /// The eight exceptional points of `Vtilde`, each with the index `j` of
    /// the singular point `p_j` it maps to.
    pub fn exceptional_points(&self) -> Result<Vec<(ProjPoint, usize)>> {
        let (v, d, t) = (&self.v, &self.d, &self.t);
        let one = Scalar::one();
        let zero = Scalar::zero();
        let t2 = t * t;
        let q = |c: [Scalar; 3]| ProjPoint::new(Frame::Q, c.to_vec());
        let mut out = vec![
            (q([zero.clone(), one.clone(), zero.clone()])?, 3),
            (q([zero.clone(), one.clone(), &t2 - &one])?, 3),
            (q([one.clone(), zero.clone(), zero.clone()])?, 4),
        ];
        let c4 = &(t * &(&(v * t) + d)) / &(v * &(&one + &t2));
        out.push((q([one.clone(), c4, zero.clone()])?, 4));
        // d R^2 - 2 v t R + d t^2 = 0 with r = 1.
        let two = Scalar::from_int(2);
        for root in solve_quadratic(d, &-(&two * &(v * t)), &(d * &t2))? {
            out.push((q([one.clone(), zero.clone(), root])?, 1));
        }
        // On q2 = -q1 the cubic restricts to -t^2 q1 (d q1^2 + 2 v t q0 q1 + d t^2 q0^2).
        for root in solve_quadratic(d, &(&two * &(v * t)), &(d * &t2))? {
            out.push((q([one.clone(), root.clone(), -root])?, 2));
        }
        Ok(out)
    }
}

/// Third point of the cubic `f` on the line through its points `a` and `b`.
///
/// With `f(s0 a + s1 b) = s0 s1 (c2 s0 + c1 s1)`, the values at `a + b` and
/// `a - b` are `c2 + c1` and `c1 - c2`.
fn third_point(f: &HomogPoly, a: &[Scalar], b: &[Scalar]) -> Option<ProjPoint> {
    let plus: Vec<Scalar> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let minus: Vec<Scalar> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let (fp, fm) = (f.eval_coords(&plus), f.eval_coords(&minus));
    let c1 = &fp + &fm;
    let c2 = &fp - &fm;
    if c1.is_zero() && c2.is_zero() {
        return None;
    }
    let coords = a
        .iter()
        .zip(b)
        .map(|(x, y)| &(&c1 * x) - &(&c2 * y))
        .collect();
    ProjPoint::new(f.frame(), coords)
        .ok()
        .map(|p| p.normalized())
}

/// Singular points `p1..p4` of Y in the W frame.
pub fn p_point(j: usize) -> ProjPoint {
    let c: [i64; 5] = match j {
        1 => [1, 0, 0, 0, 0],
        2 => [0, 0, 0, 1, 0],
        3 => [0, 1, 0, 0, 0],
        4 => [0, 0, 1, 0, 0],
        _ => panic!("p_j is defined for j = 1..4"),
    };
    ProjPoint::from_ints(Frame::W, &c)
}

/// Varieties with exact membership tests.
#[derive(Clone, Debug)]
pub enum VarietyId {
    Y,
    Hcf(Scenario),
    V(Scenario),
    Z(Scenario),
    VTilde(Box<CremonaSetup>),
    QuadricYQ,
}

impl VarietyId {
    pub fn tag(&self) -> &'static str {
        match self {
            VarietyId::Y => "Y",
            VarietyId::Hcf(_) => "HCF",
            VarietyId::V(_) => "V",
            VarietyId::Z(_) => "Z",
            VarietyId::VTilde(_) => "VTILDE",
            VarietyId::QuadricYQ => "QUADRIC_Y_Q",
        }
    }

    pub fn canonical_frame(&self) -> Frame {
        match self {
            VarietyId::Y | VarietyId::Hcf(_) => Frame::W,
            VarietyId::V(_) => Frame::U,
            VarietyId::Z(_) => Frame::Plane,
            VarietyId::VTilde(_) => Frame::Q,
            VarietyId::QuadricYQ => Frame::P3,
        }
    }

    /// Defining polynomials in the given frame (W, Z or ORIGINAL for Y and HC_F).
    pub fn equations_in(&self, frame: Frame) -> Result<Vec<HomogPoly>> {
        let canonical = self.canonical_frame();
        match self {
            VarietyId::Y if matches!(frame, Frame::W | Frame::Z) => Ok(y_equations(frame)),
            VarietyId::Y if frame == Frame::Original => {
                let (q1, q2) = crate::model::build_q1_q2();
                Ok(vec![q1, q2])
            }
            VarietyId::Hcf(s) if matches!(frame, Frame::W | Frame::Z | Frame::Original) => {
                Ok(hcf_equations(s, frame))
            }
            _ if frame == canonical => Ok(match self {
                VarietyId::V(s) => vec![build_p(s)],
                VarietyId::Z(s) => vec![build_h(s)],
                VarietyId::VTilde(c) => vec![c.v_tilde()],
                VarietyId::QuadricYQ => vec![build_quadric_q(Frame::P3)],
                _ => unreachable!("handled above"),
            }),
            _ => Err(Error::FrameMismatch {
                expected: canonical.to_string(),
                found: frame.to_string(),
            }),
        }
    }

    pub fn equations(&self) -> Vec<HomogPoly> {
        self.equations_in(self.canonical_frame())
            .expect("canonical frame")
    }
}

/// Exact membership: every defining polynomial vanishes at `pt`.
pub fn membership(pt: &ProjPoint, variety: &VarietyId) -> Result<bool> {
    let eqs = variety.equations_in(pt.frame())?;
    all_vanish(&eqs, pt)
}

/// Converts a point of CP^4 between ORIGINAL, W and Z.
pub fn to_frame(pt: &ProjPoint, frame: Frame) -> Result<ProjPoint> {
    let t = FrameTransform::between(pt.frame(), frame).ok_or_else(|| Error::FrameMismatch {
        expected: frame.to_string(),
        found: pt.frame().to_string(),
    })?;
    convert_point(pt, &t)
}

/// The equal-velocity scenario, up to scale, whose curve `V` passes through `u`.
pub fn equal_velocity_through(u: &ProjPoint) -> Result<Scenario> {
    crate::poly::check_frame(Frame::U, u.frame())?;
    let a = build_p(&Scenario::equal_velocity(Scalar::one(), Scalar::zero())?).eval(u)?;
    let b = build_p(&Scenario::equal_velocity(Scalar::zero(), Scalar::one())?).eval(u)?;
    Scenario::equal_velocity(b, -a)
        .map_err(|_| Error::DegenerateParameters("every equal-velocity curve contains u".into()))
}

/// Shared handle used when the same setup feeds many membership checks.
pub fn vtilde_variety(setup: &CremonaSetup) -> VarietyId {
    VarietyId::VTilde(Box::new(setup.clone()))
}
