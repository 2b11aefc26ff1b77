//! Base points, singular points and line intersections of Y, HC_F, V and Z.

use num_complex::Complex64;
use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::maps::{membership, p_point, to_frame, VarietyId};
use crate::model::{
    build_h, build_l, build_p, build_qtilde, hcf_equations, y_equations, Condition, Scenario,
};
use crate::point::{dedup_points, ProjPoint};
use crate::poly::{jacobian_rank_at, Frame, HomogPoly, Monomial};
use crate::scalar::{solve_quadratic, Scalar};
use crate::univar::{binary_distinct_roots, BinaryRoot, CertifiedRoot};

/// How a singular point was classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SingularKind {
    Node,
    Cusp,
    OrdinaryDoublePointOfSurface,
    Multiplicity4,
    Unclassified,
}

/// Result of [`classify_double_point`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoublePointType {
    Node,
    Cusp,
    Other,
}

#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub point: ProjPoint,
    pub kind: SingularKind,
    pub is_real: bool,
    pub multiplicity: Option<u32>,
    pub delta: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct SingularReport {
    pub variety: String,
    pub scenario: Option<Scenario>,
    pub points: Vec<SingularPoint>,
    pub conditions: Vec<Condition>,
    pub genus: Option<i64>,
    pub notes: Vec<String>,
}

impl SingularReport {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.points.iter().any(|p| p.point.proj_eq(pt))
    }

    pub fn count_kind(&self, kind: SingularKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }

    /// One JSON object per point.
    pub fn to_json_lines(&self) -> Vec<serde_json::Value> {
        let held: Vec<&str> = self
            .conditions
            .iter()
            .filter(|c| c.holds)
            .map(|c| c.name.as_str())
            .collect();
        let failed: Vec<&str> = self
            .conditions
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.name.as_str())
            .collect();
        let scenario = self.scenario.as_ref().map(|s| s.to_json());
        self.points
            .iter()
            .map(|p| {
                json!({
                    "variety": self.variety,
                    "scenario": scenario,
                    "point": p.point.canonical_text(),
                    "kind": p.kind,
                    "is_real": p.is_real,
                    "multiplicity": p.multiplicity,
                    "delta": p.delta,
                    "conditions_held": held,
                    "conditions_failed": failed,
                    "genus": self.genus,
                })
            })
            .collect()
    }
}

fn pz(c: [i64; 5]) -> ProjPoint {
    ProjPoint::from_ints(Frame::Z, &c)
}

fn pt_with_i(frame: Frame, c: &[(i64, i64)]) -> ProjPoint {
    let coords = c
        .iter()
        .map(|&(re, im)| &Scalar::from_int(re) + &(&Scalar::from_int(im) * &Scalar::i()))
        .collect();
    ProjPoint::new(frame, coords).expect("nonzero fixture")
}

/// The four singular points `p1..p4` of Y in the W frame.
pub fn singular_points_y() -> Vec<ProjPoint> {
    (1..=4).map(p_point).collect()
}

/// The eight base points of the family HC_F in the Z frame: `p1..p4` then `[0,0,1,+-1,+-i]`.
pub fn base_points_h() -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = (1..=4)
        .map(|j| to_frame(&p_point(j), Frame::Z).expect("W to Z"))
        .collect();
    for s3 in [1, -1] {
        for sx in [1, -1] {
            out.push(pt_with_i(
                Frame::Z,
                &[(0, 0), (0, 0), (1, 0), (s3, 0), (0, sx)],
            ));
        }
    }
    out
}

/// The six base points of the family V: `[1,0,0]`, `[0,1,0]`, `[1,+-1,+-i]`.
pub fn base_points_v() -> Vec<ProjPoint> {
    let mut out = vec![
        ProjPoint::from_ints(Frame::U, &[1, 0, 0]),
        ProjPoint::from_ints(Frame::U, &[0, 1, 0]),
    ];
    for s1 in [1, -1] {
        for s2 in [1, -1] {
            out.push(pt_with_i(Frame::U, &[(1, 0), (s1, 0), (0, s2)]));
        }
    }
    out
}

/// Graded parts of `p` around `pt`: entry `m` is the degree-`m` part in the
/// affine coordinates of the chart `x_k = 1` (as a binary form in `P1`).
pub fn local_parts(p: &HomogPoly, pt: &ProjPoint) -> Result<Vec<HomogPoly>> {
    let k = pt
        .coords()
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroPoint)?;
    local_parts_in_chart(p, pt, k)
}

/// As [`local_parts`], in the chart `x_k = 1`; `pt_k` must be nonzero.
pub fn local_parts_in_chart(p: &HomogPoly, pt: &ProjPoint, k: usize) -> Result<Vec<HomogPoly>> {
    crate::poly::check_frame(p.frame(), pt.frame())?;
    let f = p.frame();
    if f.nvars() != 3 {
        return Err(Error::FrameMismatch {
            expected: "a plane frame".into(),
            found: f.to_string(),
        });
    }
    if pt.coord(k).is_zero() {
        return Err(Error::InvalidConfig(format!(
            "coordinate {k} of the point is zero"
        )));
    }
    let inv = pt.coord(k).inv().expect("nonzero");
    let a: Vec<Scalar> = pt.coords().iter().map(|c| c * &inv).collect();
    let hvar = HomogPoly::var(f, k);
    let images: Vec<HomogPoly> = (0..3)
        .map(|j| {
            if j == k {
                hvar.clone()
            } else {
                &hvar.scale(&a[j]) + &HomogPoly::var(f, j)
            }
        })
        .collect();
    let shifted = p.compose(&images)?;
    let others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let n = p.degree() as usize;
    let mut parts = vec![HomogPoly::zero(Frame::P1); n + 1];
    for (m, c) in shifted.terms() {
        let deg = m[others[0]] as usize + m[others[1]] as usize;
        let mut e: Monomial = [0; 5];
        e[0] = m[others[0]];
        e[1] = m[others[1]];
        parts[deg] = &parts[deg] + &HomogPoly::monomial(Frame::P1, e, c.clone());
    }
    Ok(parts)
}

/// Multiplicity of the plane curve `p = 0` at `pt` (0 when `pt` is off the curve).
pub fn multiplicity(p: &HomogPoly, pt: &ProjPoint) -> Result<u32> {
    let parts = local_parts(p, pt)?;
    Ok(parts
        .iter()
        .position(|q| !q.is_zero())
        .unwrap_or(parts.len()) as u32)
}

/// Node, ordinary cusp or something else, for a double point of a plane curve.
pub fn classify_double_point(p: &HomogPoly, pt: &ProjPoint) -> Result<DoublePointType> {
    let parts = local_parts(p, pt)?;
    if parts.iter().position(|q| !q.is_zero()) != Some(2) {
        return Err(Error::NotDoublePoint);
    }
    let q2 = &parts[2];
    let a = q2.coeff(&[2, 0, 0, 0, 0]);
    let b = q2.coeff(&[1, 1, 0, 0, 0]);
    let c = q2.coeff(&[0, 2, 0, 0, 0]);
    let disc = &(&b * &b) - &(&(&a * &c) * &Scalar::from_int(4));
    if !disc.is_zero() {
        return Ok(DoublePointType::Node);
    }
    // q2 = L^2; L vanishes along this direction.
    let dir = if a.is_zero() {
        vec![Scalar::one(), Scalar::zero()]
    } else {
        vec![-b, &a * &Scalar::from_int(2)]
    };
    if parts.len() > 3 && !parts[3].eval_coords(&dir).is_zero() {
        Ok(DoublePointType::Cusp)
    } else {
        Ok(DoublePointType::Other)
    }
}

/// `(d-1)(d-2)/2 - sum delta` for a plane curve of degree `d`.
pub fn genus_degree(degree: u32, sing_data: &[(u32, u32)]) -> Result<i64> {
    if degree == 0 {
        return Err(Error::InvalidConfig("degree must be at least 1".into()));
    }
    let d = degree as i64;
    let g = (d - 1) * (d - 2) / 2
        - sing_data
            .iter()
            .map(|&(_, delta)| delta as i64)
            .sum::<i64>();
    if g < 0 {
        Err(Error::NegativeGenus(g))
    } else {
        Ok(g)
    }
}

fn gradient_vanishes(p: &HomogPoly, pt: &ProjPoint) -> Result<bool> {
    if !p.eval(pt)?.is_zero() {
        return Ok(false);
    }
    Ok(p.gradient()
        .iter()
        .all(|g| g.eval_coords(pt.coords()).is_zero()))
}

/// Singular points of HC_F among the base points (and `q`, `q~` for equal velocity).
pub fn hc_singularities(s: &Scenario) -> Result<SingularReport> {
    let eqs = hcf_equations(s, Frame::Z);
    let mut candidates = base_points_h();
    let mut notes = Vec::new();
    let ev = s.equal_velocity_v().cloned();
    if ev.is_some() {
        candidates.push(pz([1, -1, 0, 0, 1]));
        candidates.push(pz([1, -1, 0, 0, -1]));
    }
    let sensors: Vec<ProjPoint> = base_points_h().into_iter().take(4).collect();
    let mut points = Vec::new();
    for c in candidates {
        if !membership(&c, &VarietyId::Hcf(s.clone()))? {
            continue;
        }
        if jacobian_rank_at(&eqs, &c)? < 3 {
            let kind = if sensors.iter().any(|p| p.proj_eq(&c)) {
                SingularKind::OrdinaryDoublePointOfSurface
            } else {
                SingularKind::Unclassified
            };
            points.push(SingularPoint {
                is_real: c.is_real(),
                point: c,
                kind,
                multiplicity: None,
                delta: None,
            });
        }
    }
    if let Some(v) = &ev {
        let d2 = &s.d * &s.d;
        if s.d.is_zero() || v.is_zero() {
            notes.push("degenerate pencil member: see pencil_components".into());
        } else if d2 == &Scalar::from_int(4) * &(v * v) {
            notes.push("d^2 = 4v^2: one extra singular point off the sensors".into());
        }
    }
    notes.push("candidates are the base points; node type on HC_F is not asserted".into());
    Ok(SingularReport {
        variety: "HC_F".into(),
        scenario: Some(s.clone()),
        points,
        conditions: s.genericity_conditions(),
        genus: None,
        notes,
    })
}

/// Singular points of the quartic V among the base points and, for equal
/// velocity, `[1,-1,1]` and `[-1,1,1]`. Requires `a1 != 0`.
pub fn v_singularities(s: &Scenario) -> Result<SingularReport> {
    if s.a1().is_zero() {
        return Err(Error::AssumptionViolated("a1 = 0".into()));
    }
    let p = build_p(s);
    let mut candidates = base_points_v();
    let ev = s.equal_velocity_v().cloned();
    if ev.is_some() {
        candidates.push(ProjPoint::from_ints(Frame::U, &[1, -1, 1]));
        candidates.push(ProjPoint::from_ints(Frame::U, &[-1, 1, 1]));
    }
    let mut points = Vec::new();
    let mut all_delta = true;
    for c in candidates {
        if !gradient_vanishes(&p, &c)? {
            continue;
        }
        let m = multiplicity(&p, &c)?;
        let (kind, delta) = if m == 2 {
            match classify_double_point(&p, &c)? {
                DoublePointType::Node => (SingularKind::Node, Some(1)),
                DoublePointType::Cusp => (SingularKind::Cusp, Some(1)),
                DoublePointType::Other => (SingularKind::Unclassified, None),
            }
        } else {
            (SingularKind::Unclassified, None)
        };
        all_delta &= delta.is_some();
        points.push(SingularPoint {
            is_real: c.is_real(),
            point: c,
            kind,
            multiplicity: Some(m),
            delta,
        });
    }
    let irreducible_case = match &ev {
        Some(v) => !v.is_zero() && !s.d.is_zero(),
        None => s.genericity_conditions().iter().all(|c| c.holds),
    };
    let genus = if all_delta && irreducible_case {
        let data: Vec<(u32, u32)> = points.iter().map(|p| (2, p.delta.unwrap())).collect();
        genus_degree(4, &data).ok()
    } else {
        None
    };
    Ok(SingularReport {
        variety: "V".into(),
        scenario: Some(s.clone()),
        points,
        conditions: s.genericity_conditions(),
        genus,
        notes: vec!["candidates are the base points and the equal-velocity extra points".into()],
    })
}

/// Basis of the kernel of the linear form with coefficients `l`.
fn kernel_basis(l: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = l.len();
    let j = l
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero linear form");
    let inv = l[j].inv().unwrap();
    (0..n)
        .filter(|&k| k != j)
        .map(|k| {
            let mut v = vec![Scalar::zero(); n];
            v[k] = Scalar::one();
            v[j] = -(&l[k] * &inv);
            v
        })
        .collect()
}

fn linear_coeffs(l: &HomogPoly) -> Vec<Scalar> {
    (0..l.frame().nvars())
        .map(|i| l.coeff_of(&[l.frame().vars()[i]]))
        .collect()
}

/// Coefficients `c_k` of `s0^k s1^(n-k)` in `p(s0 a + s1 b)`.
pub fn restrict_to_line(p: &HomogPoly, a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    let s0 = HomogPoly::var(Frame::P1, 0);
    let s1 = HomogPoly::var(Frame::P1, 1);
    let images: Vec<HomogPoly> = a
        .iter()
        .zip(b)
        .map(|(x, y)| &s0.scale(x) + &s1.scale(y))
        .collect();
    let r = p.compose(&images)?;
    let n = p.degree() as u8;
    Ok((0..=n).map(|k| r.coeff(&[k, n - k, 0, 0, 0])).collect())
}

fn combine(frame: Frame, s: &[Scalar; 2], a: &[Scalar], b: &[Scalar]) -> Result<ProjPoint> {
    ProjPoint::new(
        frame,
        a.iter()
            .zip(b)
            .map(|(x, y)| &(&s[0] * x) + &(&s[1] * y))
            .collect(),
    )
}

/// Exact common points of the line `l = 0` and the conic `q = 0` in a plane frame.
fn line_conic_points(l: &HomogPoly, q: &HomogPoly) -> Result<Vec<ProjPoint>> {
    let basis = kernel_basis(&linear_coeffs(l));
    let c = restrict_to_line(q, &basis[0], &basis[1])?;
    if c.iter().all(Scalar::is_zero) {
        return Err(Error::DegenerateParameters(
            "line is a component of the conic".into(),
        ));
    }
    let mut out = Vec::new();
    let roots: Vec<[Scalar; 2]> = if c[2].is_zero() {
        let mut r = vec![[Scalar::one(), Scalar::zero()]];
        if !c[1].is_zero() {
            r.push([-c[0].clone(), c[1].clone()]);
        }
        r
    } else {
        solve_quadratic(&c[2], &c[1], &c[0])?
            .into_iter()
            .map(|x| [x, Scalar::one()])
            .collect()
    };
    for r in roots {
        out.push(combine(l.frame(), &r, &basis[0], &basis[1])?);
    }
    Ok(dedup_points(out))
}

/// Singular points of the octic Z; requires the no-linear-factor conditions.
pub fn z_singularities(s: &Scenario) -> Result<SingularReport> {
    let bad = s.no_l_factor_violations();
    if !bad.is_empty() {
        return Err(Error::NoLFactorsViolated(bad));
    }
    let h = build_h(s);
    let f = Frame::Plane;
    let mut candidates = vec![
        ProjPoint::from_ints(f, &[1, 1, 0]),
        ProjPoint::from_ints(f, &[1, -1, 0]),
    ];
    for sign in [1, -1] {
        candidates.push(pt_with_i(f, &[(1, 0), (0, 0), (0, sign)]));
        candidates.push(pt_with_i(f, &[(0, 0), (1, 0), (0, sign)]));
    }
    let (u, y1, y2) = (
        HomogPoly::var(f, 0),
        HomogPoly::var(f, 1),
        HomogPoly::var(f, 2),
    );
    let d2 = &s.d * &s.d;
    let sp = &u + &y1;
    let sm = &u - &y1;
    let qe1 = sp.pow(2).scale(&(&(&s.v21 * &s.v21) - &d2))
        + (&sp * &y2).scale(&(&Scalar::from_int(2) * &(&s.v21 * &s.v22)))
        + y2.pow(2).scale(&(&(&s.v22 * &s.v22) - &d2));
    let qe2 = sm.pow(2).scale(&(&(&s.v11 * &s.v11) - &d2))
        - (&sm * &y2).scale(&(&Scalar::from_int(2) * &(&s.v11 * &s.v12)))
        + y2.pow(2).scale(&(&(&s.v12 * &s.v12) - &d2));
    candidates.extend(line_conic_points(&build_l(1, s, f), &qe1)?);
    candidates.extend(line_conic_points(&build_l(2, s, f), &qe2)?);
    let candidates = dedup_points(candidates);
    let equal_velocity = s.equal_velocity_v().is_some();
    let mut points = Vec::new();
    for c in candidates {
        if !gradient_vanishes(&h, &c)? {
            continue;
        }
        let m = multiplicity(&h, &c)?;
        let (kind, delta) = match m {
            4 => (
                SingularKind::Multiplicity4,
                Some(if equal_velocity { 8 } else { 6 }),
            ),
            2 => match classify_double_point(&h, &c)? {
                DoublePointType::Node => (SingularKind::Node, Some(1)),
                DoublePointType::Cusp => (SingularKind::Cusp, Some(1)),
                DoublePointType::Other => (SingularKind::Unclassified, Some(1)),
            },
            _ => (SingularKind::Unclassified, None),
        };
        points.push(SingularPoint {
            is_real: c.is_real(),
            point: c,
            kind,
            multiplicity: Some(m),
            delta,
        });
    }
    let disc1 = &(&d2 * &Scalar::from_int(4)) * &(&(&(&s.v21 * &s.v21) + &(&s.v22 * &s.v22)) - &d2);
    let disc2 = &(&d2 * &Scalar::from_int(4)) * &(&(&(&s.v11 * &s.v11) + &(&s.v12 * &s.v12)) - &d2);
    let mut notes = vec![
        format!("discriminant along L1 = 0: {}", disc1),
        format!("discriminant along L2 = 0: {}", disc2),
    ];
    let expected = if equal_velocity { 6 } else { 10 };
    let genus = if points.len() == expected && points.iter().all(|p| p.delta.is_some()) {
        let data: Vec<(u32, u32)> = points
            .iter()
            .map(|p| (p.multiplicity.unwrap(), p.delta.unwrap()))
            .collect();
        genus_degree(8, &data).ok()
    } else {
        None
    };
    if points.len() < expected {
        notes.push(format!(
            "found {} singular points, fewer than {}",
            points.len(),
            expected
        ));
    }
    notes.push("delta of the multiplicity-4 points is a fixture value".into());
    Ok(SingularReport {
        variety: "Z".into(),
        scenario: Some(s.clone()),
        points,
        conditions: s.no_l_factor_conditions(),
        genus,
        notes,
    })
}

/// Intersection of HC_F with one of the lines of Y.
#[derive(Clone, Debug)]
pub enum LineIntersection {
    Points(Vec<ProjPoint>),
    Component,
}

/// The lines `l1..l4` of Y in the Z frame, each as two spanning points.
pub fn lines_z() -> [(&'static str, [ProjPoint; 2]); 4] {
    [
        ("l1", [pz([1, 0, -1, 0, 0]), pz([0, 1, 0, -1, 0])]),
        ("l2", [pz([1, 0, -1, 0, 0]), pz([0, 1, 0, 1, 0])]),
        ("l3", [pz([1, 0, 1, 0, 0]), pz([0, 1, 0, 1, 0])]),
        ("l4", [pz([1, 0, 1, 0, 0]), pz([0, 1, 0, -1, 0])]),
    ]
}

/// `HC_F` intersected with each line of Y: two points or the whole line.
pub fn line_intersections_h(s: &Scenario) -> Result<Vec<(&'static str, LineIntersection)>> {
    let qt = build_qtilde(s, Frame::Z);
    let mut out = Vec::new();
    for (name, [a, b]) in lines_z() {
        let c = restrict_to_line(&qt, a.coords(), b.coords())?;
        if c.iter().all(Scalar::is_zero) {
            out.push((name, LineIntersection::Component));
            continue;
        }
        let roots = binary_distinct_roots(c, &[]).ok_or(Error::NoBranch)?;
        let mut pts = Vec::new();
        for r in roots {
            if let BinaryRoot::Exact(sr) = r {
                pts.push(combine(Frame::Z, &sr, a.coords(), b.coords())?);
            }
        }
        out.push((name, LineIntersection::Points(pts)));
    }
    Ok(out)
}

/// Points of V on a coordinate line, with smoothness of the non-base points.
#[derive(Clone, Debug)]
pub struct VLineIntersection {
    pub line: &'static str,
    pub points: Vec<ProjPoint>,
    pub smooth: Vec<bool>,
}

/// `V` intersected with the coordinate lines `H0, H1, H2`.
pub fn line_intersections_v(s: &Scenario) -> Result<Vec<VLineIntersection>> {
    let [a1, a2, a3, a4] = s.a();
    let mut failed = Vec::new();
    for (name, v) in [
        ("a1 != 0", &a1),
        ("a2 != 0", &a2),
        ("a3 != 0", &a3),
        ("a4 != 0", &a4),
    ] {
        if v.is_zero() {
            failed.push(name.to_string());
        }
    }
    if (&(&s.v12 * &s.v12) + &(&a2 * &a4)).is_zero() {
        failed.push("v12^2 + a2 a4 != 0".into());
    }
    if (&(&s.v22 * &s.v22) + &(&a3 * &a4)).is_zero() {
        failed.push("v22^2 + a3 a4 != 0".into());
    }
    if !failed.is_empty() {
        return Err(Error::HypothesisViolated(failed));
    }
    let p = build_p(s);
    let mut out = Vec::new();
    for (k, name) in ["H0", "H1", "H2"].into_iter().enumerate() {
        let mut l = vec![Scalar::zero(); 3];
        l[k] = Scalar::one();
        let basis = kernel_basis(&l);
        let c = restrict_to_line(&p, &basis[0], &basis[1])?;
        let roots = binary_distinct_roots(c, &[]).ok_or(Error::NoBranch)?;
        let mut points = Vec::new();
        for r in roots {
            match r {
                BinaryRoot::Exact(sr) => points.push(combine(Frame::U, &sr, &basis[0], &basis[1])?),
                BinaryRoot::Approx { .. } => {
                    return Err(Error::DegenerateParameters("inexact line root".into()))
                }
            }
        }
        let smooth = points
            .iter()
            .map(|pt| gradient_vanishes(&p, pt).map(|g| !g))
            .collect::<Result<Vec<bool>>>()?;
        out.push(VLineIntersection {
            line: name,
            points,
            smooth,
        });
    }
    Ok(out)
}

/// A point of `Z` on one of the lines `L_i = 0`.
#[derive(Clone, Debug)]
pub struct ZgPoint {
    pub line: u8,
    pub exact: Option<ProjPoint>,
    pub approx: [Complex64; 3],
    pub radius: f64,
}

/// `Z` intersected with `G = {L1 L2 = 0}`; exact where the roots are rational
/// or quadratic, otherwise isolated with certified disks.
#[derive(Clone, Debug)]
pub struct ZCapG {
    pub points: Vec<ZgPoint>,
}

impl ZCapG {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn is_exact(&self) -> bool {
        self.points.iter().all(|p| p.exact.is_some())
    }

    pub fn exact_points(&self) -> Vec<ProjPoint> {
        self.points.iter().filter_map(|p| p.exact.clone()).collect()
    }
}

fn proportional(a: &[Scalar], b: &[Scalar]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    let na = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let nb = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            worst = worst.max((a[i] * b[j] - a[j] * b[i]).norm());
        }
    }
    worst <= 1e-9 * na * nb
}

pub fn z_cap_g(s: &Scenario) -> Result<ZCapG> {
    let bad = s.no_l_factor_violations();
    if !bad.is_empty() {
        return Err(Error::NoLFactorsViolated(bad));
    }
    let h = build_h(s);
    let l1 = linear_coeffs(&build_l(1, s, Frame::Plane));
    let l2 = linear_coeffs(&build_l(2, s, Frame::Plane));
    let mut lines = vec![(
        1u8,
        l1.clone(),
        ProjPoint::from_ints(Frame::Plane, &[1, 1, 0]),
    )];
    if !proportional(&l1, &l2) {
        lines.push((2, l2, ProjPoint::from_ints(Frame::Plane, &[1, -1, 0])));
    }
    let mut points: Vec<ZgPoint> = Vec::new();
    for (idx, l, sensor) in lines {
        // The sensor image lies on its line; using it as the first basis
        // vector makes it the root at infinity.
        let a = sensor.coords().to_vec();
        let b = kernel_basis(&l)
            .into_iter()
            .find(|v| !proportional(v, &a))
            .expect("two-dimensional kernel");
        let c = restrict_to_line(&h, &a, &b)?;
        let roots = binary_distinct_roots(c, &[])
            .ok_or_else(|| Error::NoLFactorsViolated(vec![format!("L{idx} divides h")]))?;
        for r in roots {
            let zp = match r {
                BinaryRoot::Exact(sr) => {
                    let p = combine(Frame::Plane, &sr, &a, &b)?;
                    ZgPoint {
                        line: idx,
                        approx: to3(&p.to_c64()),
                        exact: Some(p),
                        radius: 0.0,
                    }
                }
                BinaryRoot::Approx {
                    ratio: CertifiedRoot { center, radius },
                } => {
                    let coords: Vec<Complex64> = a
                        .iter()
                        .zip(&b)
                        .map(|(x, y)| center * x.to_c64() + y.to_c64())
                        .collect();
                    ZgPoint {
                        line: idx,
                        exact: None,
                        approx: to3(&coords),
                        radius,
                    }
                }
            };
            let dup = points.iter().any(|q| match (&q.exact, &zp.exact) {
                (Some(x), Some(y)) => x.proj_eq(y),
                _ => close(&q.approx, &zp.approx),
            });
            if !dup {
                points.push(zp);
            }
        }
    }
    Ok(ZCapG { points })
}

fn to3(v: &[Complex64]) -> [Complex64; 3] {
    [v[0], v[1], v[2]]
}

/// Which degenerate member of the equal-velocity pencil.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegenerateCase {
    DZero,
    VZero,
}

/// A named component: defining equations plus a parametrization by `P1`.
#[derive(Clone, Debug)]
pub struct Component {
    pub name: String,
    pub variety: &'static str,
    pub frame: Frame,
    pub equations: Vec<HomogPoly>,
    pub parametrization: Vec<HomogPoly>,
}

impl Component {
    pub fn point_at(&self, s: &[Scalar; 2]) -> Result<ProjPoint> {
        ProjPoint::new(
            self.frame,
            self.parametrization
                .iter()
                .map(|p| p.eval_coords(s))
                .collect(),
        )
    }

    pub fn contains(&self, pt: &ProjPoint) -> Result<bool> {
        for e in &self.equations {
            if !e.eval(pt)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Points fixed by complex conjugation: parameters where the conjugate
    /// equations also vanish.
    pub fn real_points(&self) -> Result<Vec<ProjPoint>> {
        let mut g: Option<crate::univar::UniPoly> = None;
        let mut at_infinity = true;
        for e in &self.equations {
            let conj = e.conj().ok_or(Error::NotDegenerateCase)?;
            let restricted = conj.compose(&self.parametrization)?;
            let n = restricted.degree() as u8;
            let c: Vec<Scalar> = (0..=n)
                .map(|k| restricted.coeff(&[k, n - k, 0, 0, 0]))
                .collect();
            if c.iter().all(Scalar::is_zero) {
                continue;
            }
            at_infinity &= c.last().unwrap().is_zero();
            let (p, _) = crate::univar::binary_to_uni(c);
            g = Some(match g {
                None => p.monic(),
                Some(prev) => prev.gcd(&p),
            });
        }
        let mut params: Vec<[Scalar; 2]> = Vec::new();
        if at_infinity {
            params.push([Scalar::one(), Scalar::zero()]);
        }
        if let Some(g) = g {
            let roots = g
                .squarefree()
                .exact_roots()
                .ok_or(Error::NotDegenerateCase)?;
            params.extend(roots.into_iter().map(|r| [r, Scalar::one()]));
        }
        let pts = params
            .iter()
            .map(|sp| self.point_at(sp))
            .collect::<Result<Vec<_>>>()?;
        Ok(dedup_points(pts)
            .into_iter()
            .filter(|p| p.is_real())
            .collect())
    }
}

/// Components of a degenerate member together with the exact identities
/// showing they exhaust it.
#[derive(Clone, Debug)]
pub struct ComponentDecomposition {
    pub case: DegenerateCase,
    pub scenario: Scenario,
    pub components: Vec<Component>,
    pub cover_identities: Vec<(String, bool)>,
}

fn zvar(name: &str) -> HomogPoly {
    HomogPoly::var(Frame::Z, Frame::Z.var_index(name).unwrap())
}

fn uvar(name: &str) -> HomogPoly {
    HomogPoly::var(Frame::U, Frame::U.var_index(name).unwrap())
}

fn s_vars() -> (HomogPoly, HomogPoly) {
    (HomogPoly::var(Frame::P1, 0), HomogPoly::var(Frame::P1, 1))
}

fn comp(
    name: &str,
    variety: &'static str,
    frame: Frame,
    equations: Vec<HomogPoly>,
    param: Vec<HomogPoly>,
) -> Component {
    Component {
        name: name.into(),
        variety,
        frame,
        equations,
        parametrization: param,
    }
}

fn is_multiple(a: &HomogPoly, b: &HomogPoly) -> bool {
    a.scalar_ratio(b).is_some()
}

fn z_line_components() -> Vec<Component> {
    let (s0, s1) = s_vars();
    let zero = HomogPoly::zero(Frame::P1);
    lines_z()
        .into_iter()
        .map(|(name, [a, b])| {
            let param: Vec<HomogPoly> = (0..5)
                .map(|k| &s0.scale(a.coord(k)) + &s1.scale(b.coord(k)))
                .map(|p| if p.is_zero() { zero.clone() } else { p })
                .collect();
            let l1 = HomogPoly::linear(Frame::Z, &cross_rows(a.coords(), b.coords(), 0));
            let l2 = HomogPoly::linear(Frame::Z, &cross_rows(a.coords(), b.coords(), 1));
            comp(name, "HC_F", Frame::Z, vec![l1, l2, zvar("x")], param)
        })
        .collect()
}

/// Linear forms vanishing on the span of `a, b` inside `x = 0`: the two
/// relations `z2 = +-z0`, `z3 = +-z1`.
fn cross_rows(a: &[Scalar], b: &[Scalar], which: usize) -> Vec<Scalar> {
    let (i, j) = if which == 0 { (0, 2) } else { (1, 3) };
    let sign = if a[i].is_zero() {
        &b[j] * &b[i].inv().unwrap()
    } else {
        &a[j] * &a[i].inv().unwrap()
    };
    let mut l = vec![Scalar::zero(); 5];
    l[j] = Scalar::one();
    l[i] = -sign;
    l
}

/// Decomposes the `d = 0` or `v = 0` member of the equal-velocity pencil.
pub fn pencil_components(s: &Scenario, case: DegenerateCase) -> Result<ComponentDecomposition> {
    let v = s
        .equal_velocity_v()
        .ok_or(Error::NotDegenerateCase)?
        .clone();
    let ok = match case {
        DegenerateCase::DZero => s.d.is_zero() && !v.is_zero(),
        DegenerateCase::VZero => v.is_zero() && !s.d.is_zero(),
    };
    if !ok {
        return Err(Error::NotDegenerateCase);
    }
    let (s0, s1) = s_vars();
    let two = Scalar::from_int(2);
    let i = Scalar::i();
    let (z0, z1, z2, z3, x) = (zvar("z0"), zvar("z1"), zvar("z2"), zvar("z3"), zvar("x"));
    let (u0, u1, u2) = (uvar("u0"), uvar("u1"), uvar("u2"));
    let qt = build_qtilde(s, Frame::Z);
    let p = build_p(s);
    let ys = y_equations(Frame::Z);
    let mut components = Vec::new();
    let mut cover = Vec::new();
    // Conic parametrizations of a^2 + b^2 = c^2.
    let ca = &s0.pow(2) - &s1.pow(2);
    let cb = (&s0 * &s1).scale(&two);
    let cc = &s0.pow(2) + &s1.pow(2);
    match case {
        DegenerateCase::DZero => {
            // x^2 + z2^2 = z0^2: (z0, z2, x) = (cc, ca, cb).
            for (name, sign) in [("C1+", 1), ("C1-", -1)] {
                let sg = Scalar::from_int(sign);
                components.push(comp(
                    name,
                    "HC_F",
                    Frame::Z,
                    vec![
                        &z0 - &z1,
                        &z3 - &z2.scale(&sg),
                        &(&x.pow(2) + &z2.pow(2)) - &z0.pow(2),
                    ],
                    vec![
                        cc.clone(),
                        cc.clone(),
                        ca.clone(),
                        ca.scale(&sg),
                        cb.clone(),
                    ],
                ));
            }
            components.extend(z_line_components());
            cover.push((
                "Qtilde is a multiple of (z0 - z1) x".into(),
                is_multiple(&qt, &(&(&z0 - &z1) * &x)),
            ));
            let on_z0z1 =
                ys[0].compose(&[z0.clone(), z0.clone(), z2.clone(), z3.clone(), x.clone()])?;
            cover.push((
                "on z0 = z1, Y cuts z2^2 = z3^2".into(),
                is_multiple(&on_z0z1, &(&(&z2 - &z3) * &(&z2 + &z3))),
            ));
            let zx = HomogPoly::zero(Frame::Z);
            let on_x0: Vec<HomogPoly> = ys
                .iter()
                .map(|e| e.compose(&[z0.clone(), z1.clone(), z2.clone(), z3.clone(), zx.clone()]))
                .collect::<Result<_>>()?;
            let lines_prod = &(&(&z2 - &z0) * &(&z2 + &z0)) * &(&(&z3 - &z1) * &(&z3 + &z1));
            let span_ok = on_x0
                .iter()
                .any(|e| is_multiple(e, &(&z2.pow(2) - &z0.pow(2))))
                && lines_prod.degree() == 4;
            cover.push((
                "on x = 0, Y is the four lines z2 = +-z0, z3 = +-z1".into(),
                span_ok,
            ));
            let (pu0, pu1, pu2) = (s0.pow(2), s1.pow(2), &s0 * &s1);
            components.push(comp(
                "H",
                "V",
                Frame::U,
                vec![&u1 - &u0],
                vec![s0.clone(), s0.clone(), s1.clone()],
            ));
            components.push(comp(
                "H~",
                "V",
                Frame::U,
                vec![u2.clone()],
                vec![s0.clone(), s1.clone(), HomogPoly::zero(Frame::P1)],
            ));
            components.push(comp(
                "C",
                "V",
                Frame::U,
                vec![&u2.pow(2) - &(&u0 * &u1)],
                vec![pu0, pu1, pu2],
            ));
            let prod = &(&(&u1 - &u0) * &(&u2.pow(2) - &(&u0 * &u1))) * &u2;
            cover.push((
                "P is a multiple of (u1 - u0)(u2^2 - u0 u1) u2".into(),
                is_multiple(&p, &prod),
            ));
        }
        DegenerateCase::VZero => {
            // E1: z1^2 + z2^2 = z3^2 with x = +-i z2; E2: z0^2 + z3^2 = z2^2 with x = +-i z3.
            for (name, sign) in [("E1+", 1), ("E1-", -1)] {
                let si = &i * &Scalar::from_int(sign);
                components.push(comp(
                    name,
                    "HC_F",
                    Frame::Z,
                    vec![
                        z0.clone(),
                        &x - &z2.scale(&si),
                        &(&z1.pow(2) + &z2.pow(2)) - &z3.pow(2),
                    ],
                    vec![
                        HomogPoly::zero(Frame::P1),
                        ca.clone(),
                        cb.clone(),
                        cc.clone(),
                        cb.scale(&si),
                    ],
                ));
            }
            for (name, sign) in [("E2+", 1), ("E2-", -1)] {
                let si = &i * &Scalar::from_int(sign);
                components.push(comp(
                    name,
                    "HC_F",
                    Frame::Z,
                    vec![
                        z1.clone(),
                        &x - &z3.scale(&si),
                        &(&z0.pow(2) + &z3.pow(2)) - &z2.pow(2),
                    ],
                    vec![
                        ca.clone(),
                        HomogPoly::zero(Frame::P1),
                        cc.clone(),
                        cb.clone(),
                        cb.scale(&si),
                    ],
                ));
            }
            cover.push((
                "Qtilde is a multiple of z0 z1".into(),
                is_multiple(&qt, &(&z0 * &z1)),
            ));
            let zz = HomogPoly::zero(Frame::Z);
            let e1 = ys
                .iter()
                .map(|e| e.compose(&[zz.clone(), z1.clone(), z2.clone(), z3.clone(), x.clone()]))
                .collect::<Result<Vec<_>>>()?;
            cover.push((
                "on z0 = 0, Y forces x^2 = -z2^2".into(),
                e1.iter().any(|e| is_multiple(e, &(&x.pow(2) + &z2.pow(2)))),
            ));
            let e2 = ys
                .iter()
                .map(|e| e.compose(&[z0.clone(), zz.clone(), z2.clone(), z3.clone(), x.clone()]))
                .collect::<Result<Vec<_>>>()?;
            cover.push((
                "on z1 = 0, Y forces x^2 = -z3^2".into(),
                e2.iter().any(|e| is_multiple(e, &(&x.pow(2) + &z3.pow(2))))
                    || e2
                        .iter()
                        .zip(e2.iter().skip(1))
                        .any(|(a, b)| is_multiple(&(a - b), &(&x.pow(2) + &z3.pow(2)))),
            ));
            let mut prod = HomogPoly::one(Frame::U);
            for (name, sign, target) in [
                ("K1+", 1, 1usize),
                ("K1-", -1, 1),
                ("K2+", 1, 0),
                ("K2-", -1, 0),
            ] {
                let si = &i * &Scalar::from_int(sign);
                let base = if target == 1 { &u1 } else { &u0 };
                let eq = &u2 - &base.scale(&si);
                let third = if target == 1 {
                    s1.scale(&si)
                } else {
                    s0.scale(&si)
                };
                components.push(comp(
                    name,
                    "V",
                    Frame::U,
                    vec![eq.clone()],
                    vec![s0.clone(), s1.clone(), third],
                ));
                prod = &prod * &eq;
            }
            cover.push((
                "P is a multiple of the product of the four lines".into(),
                is_multiple(&p, &prod),
            ));
        }
    }
    Ok(ComponentDecomposition {
        case,
        scenario: s.clone(),
        components,
        cover_identities: cover,
    })
}

impl ComponentDecomposition {
    /// Checks `n` random points of each component against its own equations
    /// and the ambient variety. Returns the number of failures.
    pub fn verify_samples<R: Rng>(&self, rng: &mut R, n: usize) -> Result<usize> {
        let mut failures = 0;
        for c in &self.components {
            let variety = if c.variety == "V" {
                VarietyId::V(self.scenario.clone())
            } else {
                VarietyId::Hcf(self.scenario.clone())
            };
            for _ in 0..n {
                let sp = loop {
                    let a: i64 = rng.gen_range(-20..=20);
                    let b: i64 = rng.gen_range(-20..=20);
                    if a != 0 || b != 0 {
                        break [Scalar::from_int(a), Scalar::from_int(b)];
                    }
                };
                let pt = match c.point_at(&sp) {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                if !c.contains(&pt)? || !membership(&pt, &variety)? {
                    failures += 1;
                }
            }
        }
        Ok(failures)
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn covers(&self) -> bool {
        self.cover_identities.iter().all(|(_, ok)| *ok)
    }
}
