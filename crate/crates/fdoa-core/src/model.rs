//! Scenario parameters, the named polynomials, and frame changes.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::point::ProjPoint;
use crate::poly::{check_frame, Frame, HomogPoly, MAX_VARS};
use crate::scalar::Scalar;

/// `build_qtilde(s, W) = QTILDE_W_SCALE * (ORIGINAL form pulled back to W)`.
pub const QTILDE_W_SCALE: i64 = 4;
/// `build_qtilde(s, Z) = QTILDE_Z_SCALE * (ORIGINAL form pulled back to Z)`.
pub const QTILDE_Z_SCALE: i64 = 16;
/// Z-frame forms of `Q` and `Q1` are this multiple of the pulled-back W forms.
pub const QUADRIC_Z_SCALE: i64 = 16;

/// Velocities `v1 = (v11, v12)`, `v2 = (v21, v22)` and the FDOA value `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub v11: Scalar,
    pub v12: Scalar,
    pub v21: Scalar,
    pub v22: Scalar,
    pub d: Scalar,
    /// Physical sensor half-separation, when supplied by the user.
    pub half_separation: Option<BigRational>,
}

/// One entry of a scenario's genericity ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

fn cond(name: &str, holds: bool) -> Condition {
    Condition {
        name: name.to_string(),
        holds,
    }
}

impl Scenario {
    pub fn new(v11: Scalar, v12: Scalar, v21: Scalar, v22: Scalar, d: Scalar) -> Result<Self> {
        if [&v11, &v12, &v21, &v22, &d].iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroScenario);
        }
        Ok(Self {
            v11,
            v12,
            v21,
            v22,
            d,
            half_separation: None,
        })
    }

    pub fn from_ratios(v: [(i64, i64); 5]) -> Result<Self> {
        let s: Vec<Scalar> = v.iter().map(|&(n, d)| Scalar::from_ratio(n, d)).collect();
        Self::new(
            s[0].clone(),
            s[1].clone(),
            s[2].clone(),
            s[3].clone(),
            s[4].clone(),
        )
    }

    /// Both sensors moving with velocity `(0, v)`.
    pub fn equal_velocity(v: Scalar, d: Scalar) -> Result<Self> {
        Self::new(Scalar::zero(), v.clone(), Scalar::zero(), v, d)
    }

    /// Returns `v` when `v1 = v2 = (0, v)`.
    pub fn equal_velocity_v(&self) -> Option<&Scalar> {
        if self.v11.is_zero() && self.v21.is_zero() && self.v12 == self.v22 {
            Some(&self.v12)
        } else {
            None
        }
    }

    pub fn a1(&self) -> Scalar {
        &(&self.v11 - &self.v21) - &self.d
    }
    pub fn a2(&self) -> Scalar {
        &(&(-&self.v11) - &self.v21) + &self.d
    }
    pub fn a3(&self) -> Scalar {
        &(&self.v11 + &self.v21) + &self.d
    }
    pub fn a4(&self) -> Scalar {
        &(&(-&self.v11) + &self.v21) - &self.d
    }

    pub fn a(&self) -> [Scalar; 4] {
        [self.a1(), self.a2(), self.a3(), self.a4()]
    }

    pub fn v1_sq(&self) -> Scalar {
        &(&self.v11 * &self.v11) + &(&self.v12 * &self.v12)
    }

    pub fn v2_sq(&self) -> Scalar {
        &(&self.v21 * &self.v21) + &(&self.v22 * &self.v22)
    }

    pub fn nonzero_v1(&self) -> bool {
        !(self.v11.is_zero() && self.v12.is_zero())
    }

    pub fn nonzero_v2(&self) -> bool {
        !(self.v21.is_zero() && self.v22.is_zero())
    }

    pub fn nonzero_d(&self) -> bool {
        !self.d.is_zero()
    }

    pub fn is_real(&self) -> bool {
        [&self.v11, &self.v12, &self.v21, &self.v22, &self.d]
            .iter()
            .all(|c| c.as_rational().is_some())
    }

    /// Failed conditions of the no-linear-factor hypotheses (empty when all hold).
    pub fn no_l_factor_violations(&self) -> Vec<String> {
        self.no_l_factor_conditions()
            .into_iter()
            .filter(|c| !c.holds)
            .map(|c| c.name)
            .collect()
    }

    pub fn no_l_factor_conditions(&self) -> Vec<Condition> {
        let d2 = &self.d * &self.d;
        vec![
            cond("v1 != 0", self.nonzero_v1()),
            cond("v2 != 0", self.nonzero_v2()),
            cond("d != 0", self.nonzero_d()),
            cond("v11^2+v12^2 != 0", !self.v1_sq().is_zero()),
            cond("v21^2+v22^2 != 0", !self.v2_sq().is_zero()),
            cond(
                "v21 != 0 or v11^2-d^2 != 0",
                !self.v21.is_zero() || !(&(&self.v11 * &self.v11) - &d2).is_zero(),
            ),
            cond(
                "v11 != 0 or v21^2-d^2 != 0",
                !self.v11.is_zero() || !(&(&self.v21 * &self.v21) - &d2).is_zero(),
            ),
        ]
    }

    pub fn satisfies_no_l_factors(&self) -> bool {
        self.no_l_factor_violations().is_empty()
    }

    /// The explicit genericity inequalities used by the singularity reports.
    pub fn genericity_conditions(&self) -> Vec<Condition> {
        let [a1, a2, a3, a4] = self.a();
        let v12s = &self.v12 * &self.v12;
        let v22s = &self.v22 * &self.v22;
        let mut out = vec![
            cond("a1 != 0", !a1.is_zero()),
            cond("a2 != 0", !a2.is_zero()),
            cond("a3 != 0", !a3.is_zero()),
            cond("a4 != 0", !a4.is_zero()),
            cond("v12^2+a1*a3 != 0", !(&v12s + &(&a1 * &a3)).is_zero()),
            cond("v22^2+a1*a2 != 0", !(&v22s + &(&a1 * &a2)).is_zero()),
            cond("v12^2+a2*a4 != 0", !(&v12s + &(&a2 * &a4)).is_zero()),
            cond("v22^2+a3*a4 != 0", !(&v22s + &(&a3 * &a4)).is_zero()),
        ];
        out.extend(self.no_l_factor_conditions());
        out
    }

    /// Parses `key=value` lines (`v11, v12, v21, v22, d`, optional `a`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut vals: [Option<Scalar>; 5] = Default::default();
        let mut half = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::ScenarioParse(format!("line {}: expected key=value", lineno + 1))
            })?;
            let value = Scalar::parse(v)
                .map_err(|e| Error::ScenarioParse(format!("line {}: {e}", lineno + 1)))?;
            let slot = match k.trim() {
                "v11" => 0,
                "v12" => 1,
                "v21" => 2,
                "v22" => 3,
                "d" => 4,
                "a" => {
                    let q = value
                        .as_rational()
                        .cloned()
                        .expect("parsed literals are rational");
                    if !q.is_positive() {
                        return Err(Error::ScenarioParse("a must be positive".into()));
                    }
                    half = Some(q);
                    continue;
                }
                other => return Err(Error::ScenarioParse(format!("unknown key {other:?}"))),
            };
            vals[slot] = Some(value);
        }
        let names = ["v11", "v12", "v21", "v22", "d"];
        let mut got = Vec::new();
        for (i, v) in vals.into_iter().enumerate() {
            got.push(v.ok_or_else(|| Error::ScenarioParse(format!("missing key {}", names[i])))?);
        }
        let mut s = Self::new(
            got[0].clone(),
            got[1].clone(),
            got[2].clone(),
            got[3].clone(),
            got[4].clone(),
        )
        .map_err(|e| Error::ScenarioParse(e.to_string()))?;
        s.half_separation = half;
        Ok(s)
    }

    /// Random real rational scenario with small numerators and denominators.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        loop {
            let mut c = || Scalar::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6));
            if let Ok(s) = Self::new(c(), c(), c(), c(), c()) {
                return s;
            }
        }
    }

    /// Random scenario satisfying every genericity inequality.
    pub fn random_generic<R: Rng>(rng: &mut R) -> Self {
        loop {
            let s = Self::random(rng);
            if s.genericity_conditions().iter().all(|c| c.holds) {
                return s;
            }
        }
    }

    pub fn to_f64(&self) -> [f64; 5] {
        let f = |s: &Scalar| s.as_rational().and_then(|q| q.to_f64()).unwrap_or(f64::NAN);
        [
            f(&self.v11),
            f(&self.v12),
            f(&self.v21),
            f(&self.v22),
            f(&self.d),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "v11": self.v11.to_string(),
            "v12": self.v12.to_string(),
            "v21": self.v21.to_string(),
            "v22": self.v22.to_string(),
            "d": self.d.to_string(),
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "v1=({}, {}) v2=({}, {}) d={}",
            self.v11, self.v12, self.v21, self.v22, self.d
        )
    }
}

/// `|d| <= |v1| + |v2|`, decided exactly by squaring.
pub fn cauchy_schwarz_ok(s: &Scenario) -> Result<bool> {
    if !s.is_real() {
        return Err(Error::NonRealScenario);
    }
    let r = |x: Scalar| x.as_rational().cloned().expect("real scenario");
    let s1 = r(s.v1_sq());
    let s2 = r(s.v2_sq());
    let d2 = r(&s.d * &s.d);
    let lhs = &d2 - &s1 - &s2;
    if !lhs.is_positive() {
        return Ok(true);
    }
    let four = BigRational::from_integer(4.into());
    Ok(&lhs * &lhs <= four * s1 * s2)
}

/// Physical FDOA value at `y` with sensors at `(1, 0)` and `(-1, 0)`.
pub fn fdoa_value(y: (f64, f64), s: &Scenario) -> Result<f64> {
    let [v11, v12, v21, v22, _] = s.to_f64();
    fdoa_value_f64(y, [v11, v12, v21, v22])
}

pub(crate) fn fdoa_value_f64(y: (f64, f64), v: [f64; 4]) -> Result<f64> {
    let (e1x, e1y) = (1.0 - y.0, -y.1);
    let (e2x, e2y) = (-1.0 - y.0, -y.1);
    let n1 = e1x.hypot(e1y);
    let n2 = e2x.hypot(e2y);
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::AtSensor);
    }
    Ok((e2x * v[2] + e2y * v[3]) / n2 - (e1x * v[0] + e1y * v[1]) / n1)
}

fn rows(m: &[[i64; 5]]) -> Vec<Vec<Scalar>> {
    m.iter()
        .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
        .collect()
}

/// An invertible linear change of coordinates between two frames of CP^4.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTransform {
    pub from: Frame,
    pub to: Frame,
    /// Target coordinates as `matrix * source coordinates`.
    pub matrix: Vec<Vec<Scalar>>,
    pub inverse: Vec<Vec<Scalar>>,
}

impl FrameTransform {
    fn from_matrix(from: Frame, to: Frame, matrix: Vec<Vec<Scalar>>) -> Self {
        let inverse = linalg::inverse(&matrix).expect("frame changes are invertible");
        Self {
            from,
            to,
            matrix,
            inverse,
        }
    }

    /// `w0 = u - y1 - r1`, `w1 = -u - y1 - r2`, `w2 = -u - y1 + r2`, `w3 = u - y1 + r1`, `x1 = -y2`.
    pub fn original_to_w() -> Self {
        let m = rows(&[
            [1, -1, 0, -1, 0],
            [-1, -1, 0, 0, -1],
            [-1, -1, 0, 0, 1],
            [1, -1, 0, 1, 0],
            [0, 0, -1, 0, 0],
        ]);
        Self::from_matrix(Frame::Original, Frame::W, m)
    }

    /// `z0 = 2(w3 - w0)`, `z1 = 2(w2 - w1)`, `z2 = 2(w0 + w3)`, `z3 = 2(w1 + w2)`, `x = 4 x1`.
    pub fn w_to_z() -> Self {
        let m = rows(&[
            [-2, 0, 0, 2, 0],
            [0, -2, 2, 0, 0],
            [2, 0, 0, 2, 0],
            [0, 2, 2, 0, 0],
            [0, 0, 0, 0, 4],
        ]);
        Self::from_matrix(Frame::W, Frame::Z, m)
    }

    pub fn original_to_z() -> Self {
        let m = linalg::mat_mul(&Self::w_to_z().matrix, &Self::original_to_w().matrix);
        Self::from_matrix(Frame::Original, Frame::Z, m)
    }

    pub fn inverted(&self) -> Self {
        Self {
            from: self.to,
            to: self.from,
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// Looks up the transform between two of ORIGINAL, W, Z.
    pub fn between(from: Frame, to: Frame) -> Option<Self> {
        use Frame::*;
        let t = match (from, to) {
            (Original, W) => Self::original_to_w(),
            (W, Z) => Self::w_to_z(),
            (Original, Z) => Self::original_to_z(),
            (W, Original) => Self::original_to_w().inverted(),
            (Z, W) => Self::w_to_z().inverted(),
            (Z, Original) => Self::original_to_z().inverted(),
            (a, b) if a == b && matches!(a, Original | W | Z) => Self {
                from: a,
                to: a,
                matrix: linalg::identity(5),
                inverse: linalg::identity(5),
            },
            _ => return None,
        };
        Some(t)
    }

    /// Rewrites a polynomial in source coordinates as one in target coordinates.
    pub fn pull_poly(&self, p: &HomogPoly) -> Result<HomogPoly> {
        check_frame(self.from, p.frame())?;
        p.substitute_linear(&self.inverse, self.to)
    }
}

/// Exact image of a point under a frame change.
pub fn convert_point(pt: &ProjPoint, t: &FrameTransform) -> Result<ProjPoint> {
    check_frame(t.from, pt.frame())?;
    ProjPoint::new(t.to, linalg::mat_vec(&t.matrix, pt.coords()))
}

fn v(frame: Frame, name: &str) -> HomogPoly {
    HomogPoly::var(frame, frame.var_index(name).expect("variable in frame"))
}

fn k(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// `Q1 = (u - y1)^2 + y2^2 - r1^2`, `Q2 = (u + y1)^2 + y2^2 - r2^2`.
pub fn build_q1_q2() -> (HomogPoly, HomogPoly) {
    let f = Frame::Original;
    let (u, y1, y2, r1, r2) = (v(f, "u"), v(f, "y1"), v(f, "y2"), v(f, "r1"), v(f, "r2"));
    let q1 = (&u - &y1).pow(2) + y2.pow(2) - r1.pow(2);
    let q2 = (&u + &y1).pow(2) + y2.pow(2) - r2.pow(2);
    (q1, q2)
}

/// `Q = w0 w3 - w1 w2` in W, or `z2^2 - z0^2 - (z3^2 - z1^2)` in Z.
pub fn build_quadric_q(frame: Frame) -> HomogPoly {
    match frame {
        Frame::W => v(frame, "w0") * v(frame, "w3") - v(frame, "w1") * v(frame, "w2"),
        Frame::P3 => v(frame, "w0") * v(frame, "w3") - v(frame, "w1") * v(frame, "w2"),
        Frame::Z => {
            v(frame, "z2").pow(2) - v(frame, "z0").pow(2) - v(frame, "z3").pow(2)
                + v(frame, "z1").pow(2)
        }
        other => panic!("Q is not defined in frame {other}"),
    }
}

/// `Q1` in W (`w0 w3 + x1^2`) or Z (`x^2 + z2^2 - z0^2`).
pub fn build_q1_in(frame: Frame) -> HomogPoly {
    match frame {
        Frame::Original => build_q1_q2().0,
        Frame::W => v(frame, "w0") * v(frame, "w3") + v(frame, "x1").pow(2),
        Frame::Z => v(frame, "x").pow(2) + v(frame, "z2").pow(2) - v(frame, "z0").pow(2),
        other => panic!("Q1 is not defined in frame {other}"),
    }
}

/// `Q2` in W (`w1 w2 + x1^2`) or Z (`x^2 + z3^2 - z1^2`).
pub fn build_q2_in(frame: Frame) -> HomogPoly {
    match frame {
        Frame::Original => build_q1_q2().1,
        Frame::W => v(frame, "w1") * v(frame, "w2") + v(frame, "x1").pow(2),
        Frame::Z => v(frame, "x").pow(2) + v(frame, "z3").pow(2) - v(frame, "z1").pow(2),
        other => panic!("Q2 is not defined in frame {other}"),
    }
}

/// Defining equations `{Q, Q1}` of Y in W or Z.
pub fn y_equations(frame: Frame) -> Vec<HomogPoly> {
    vec![build_quadric_q(frame), build_q1_in(frame)]
}

/// `L1 = v11 (u - y1) - v12 y2`, `L2 = -v21 (u + y1) - v22 y2`, in ORIGINAL or PLANE.
pub fn build_l(j: u8, s: &Scenario, frame: Frame) -> HomogPoly {
    assert!(
        matches!(frame, Frame::Original | Frame::Plane),
        "L lives in ORIGINAL or PLANE"
    );
    let (u, y1, y2) = (v(frame, "u"), v(frame, "y1"), v(frame, "y2"));
    match j {
        1 => (&u - &y1).scale(&s.v11) - y2.scale(&s.v12),
        2 => (&u + &y1).scale(&-&s.v21) - y2.scale(&s.v22),
        _ => panic!("L index must be 1 or 2"),
    }
}

/// The FDOA quadric: `L2 r1 - L1 r2 - d r1 r2` in ORIGINAL, `A x1 + C` in W,
/// `A1 x + C1` in Z. The W and Z forms equal the pulled-back ORIGINAL form
/// times [`QTILDE_W_SCALE`] and [`QTILDE_Z_SCALE`].
pub fn build_qtilde(s: &Scenario, frame: Frame) -> HomogPoly {
    match frame {
        Frame::Original => {
            let (r1, r2) = (v(frame, "r1"), v(frame, "r2"));
            let l1 = build_l(1, s, frame);
            let l2 = build_l(2, s, frame);
            &l2 * &r1 - &l1 * &r2 - (&r1 * &r2).scale(&s.d)
        }
        Frame::W => {
            let (w0, w1, w2, w3, x1) = (
                v(frame, "w0"),
                v(frame, "w1"),
                v(frame, "w2"),
                v(frame, "w3"),
                v(frame, "x1"),
            );
            let [a1, a2, a3, a4] = s.a();
            let a = ((&w3 - &w0).scale(&s.v22) - (&w2 - &w1).scale(&s.v12)).scale(&k(2));
            let c = (&w0 * &w1).scale(&a1)
                + (&w0 * &w2).scale(&a2)
                + (&w1 * &w3).scale(&a3)
                + (&w2 * &w3).scale(&a4);
            &a * &x1 + c
        }
        Frame::Z => {
            let (z0, z1, z2, z3, x) = (
                v(frame, "z0"),
                v(frame, "z1"),
                v(frame, "z2"),
                v(frame, "z3"),
                v(frame, "x"),
            );
            let a1 = z0.scale(&s.v22) - z1.scale(&s.v12);
            let c1 =
                (&z0 * &z3).scale(&s.v21) - (&z1 * &z2).scale(&s.v11) - (&z0 * &z1).scale(&s.d);
            &a1 * &x + c1
        }
        other => panic!("Qtilde is not defined in frame {other}"),
    }
}

/// Defining equations `{Q, Q1, Qtilde}` of the Ho-Chen curve in W or Z.
pub fn hcf_equations(s: &Scenario, frame: Frame) -> Vec<HomogPoly> {
    match frame {
        Frame::Original => {
            let (q1, q2) = build_q1_q2();
            vec![q1, q2, build_qtilde(s, frame)]
        }
        _ => vec![
            build_quadric_q(frame),
            build_q1_in(frame),
            build_qtilde(s, frame),
        ],
    }
}

/// The plane quartic `P` defining `V(v, d)`.
pub fn build_p(s: &Scenario) -> HomogPoly {
    let f = Frame::U;
    let (u0, u1, u2) = (v(f, "u0"), v(f, "u1"), v(f, "u2"));
    let [a1, a2, a3, a4] = s.a();
    u2.pow(4).scale(&a4) + (u0.scale(&s.v22) - u1.scale(&s.v12)).scale(&k(2)) * u2.pow(3)
        - (u0.pow(2).scale(&a3) + u1.pow(2).scale(&a2)) * u2.pow(2)
        + (&u0 * &u1).scale(&k(2)) * (u1.scale(&s.v22) - u0.scale(&s.v12)) * &u2
        + (u0.pow(2) * u1.pow(2)).scale(&a1)
}

/// `P` as `X1 u0^2 + 2 v22 (u2^3 + u1^2 u2) u0 + X2 u2^2`.
pub fn build_p_grouped(s: &Scenario) -> HomogPoly {
    let f = Frame::U;
    let (u0, u1, u2) = (v(f, "u0"), v(f, "u1"), v(f, "u2"));
    let [a1, a2, a3, a4] = s.a();
    let two_v12 = &k(2) * &s.v12;
    let x1 = -u2.pow(2).scale(&a3) - (&u1 * &u2).scale(&two_v12) + u1.pow(2).scale(&a1);
    let x2 = u2.pow(2).scale(&a4) - (&u1 * &u2).scale(&two_v12) - u1.pow(2).scale(&a2);
    x1 * u0.pow(2) + (u2.pow(3) + u1.pow(2) * &u2).scale(&(&k(2) * &s.v22)) * &u0 + x2 * u2.pow(2)
}

/// `f1 = (u - y1)^2 + y2^2`, `f2 = (u + y1)^2 + y2^2` in PLANE.
pub fn build_f1_f2() -> (HomogPoly, HomogPoly) {
    let f = Frame::Plane;
    let (u, y1, y2) = (v(f, "u"), v(f, "y1"), v(f, "y2"));
    ((&u - &y1).pow(2) + y2.pow(2), (&u + &y1).pow(2) + y2.pow(2))
}

/// The FDOA octic `h = (L2^2 f1 + L1^2 f2 - d^2 f1 f2)^2 - 4 L1^2 L2^2 f1 f2`.
pub fn build_h(s: &Scenario) -> HomogPoly {
    let (f1, f2) = build_f1_f2();
    let l1s = build_l(1, s, Frame::Plane).pow(2);
    let l2s = build_l(2, s, Frame::Plane).pow(2);
    let f12 = &f1 * &f2;
    let m = &l2s * &f1 + &l1s * &f2 - f12.scale(&(&s.d * &s.d));
    m.pow(2) - (&(&l1s * &l2s) * &f12).scale(&k(4))
}

/// `g1..g4` in ORIGINAL: `g1 = L2 r1 - L1 r2 - d r1 r2` with the radii signs
/// `(+,+), (-,-), (-,+), (+,-)`.
pub fn build_g(s: &Scenario) -> [HomogPoly; 4] {
    let f = Frame::Original;
    let (r1, r2) = (v(f, "r1"), v(f, "r2"));
    let l1 = build_l(1, s, f);
    let l2 = build_l(2, s, f);
    let g = |s1: i64, s2: i64| {
        let (a, b) = (r1.scale(&k(s1)), r2.scale(&k(s2)));
        &l2 * &a - &l1 * &b - (&a * &b).scale(&s.d)
    };
    [g(1, 1), g(-1, -1), g(-1, 1), g(1, -1)]
}

/// Replaces `r1^2 -> f1`, `r2^2 -> f2` in an ORIGINAL polynomial that is even
/// in both radii, producing a PLANE polynomial.
pub fn reduce_radii(p: &HomogPoly) -> Result<HomogPoly> {
    check_frame(Frame::Original, p.frame())?;
    let (f1, f2) = build_f1_f2();
    let mut out = HomogPoly::zero(Frame::Plane);
    for (m, c) in p.terms() {
        if m[3] % 2 != 0 || m[4] % 2 != 0 {
            return Err(Error::DegreeMismatch(m[3] as u32, m[4] as u32));
        }
        let mut pm = [0u8; MAX_VARS];
        pm[..3].copy_from_slice(&m[..3]);
        let t = HomogPoly::monomial(Frame::Plane, pm, c.clone())
            * f1.pow(m[3] as u32 / 2)
            * f2.pow(m[4] as u32 / 2);
        out = out.try_add(&t)?;
    }
    Ok(out)
}

/// TDOA linear condition `r2 - r1 - b u`.
pub fn build_tdoa_l(b: &Scalar) -> Result<HomogPoly> {
    if b.is_zero() {
        return Err(Error::ZeroTDOA);
    }
    let f = Frame::Original;
    Ok(v(f, "r2") - v(f, "r1") - v(f, "u").scale(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(frame: Frame, c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(frame, c)
    }

    #[test]
    fn sensors_on_base_quadrics() {
        let (q1, q2) = build_q1_q2();
        for r in [2, -2] {
            assert!(q1
                .eval(&pt(Frame::Original, &[1, 1, 0, 0, r]))
                .unwrap()
                .is_zero());
            assert!(q2
                .eval(&pt(Frame::Original, &[1, -1, 0, r, 0]))
                .unwrap()
                .is_zero());
        }
        assert!(q1
            .eval(&pt(Frame::Original, &[1, 0, 0, 1, 5]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn a_coefficients_sum_to_zero() {
        let s = Scenario::from_ratios([(1, 2), (3, 1), (-2, 3), (5, 7), (4, 9)]).unwrap();
        let sum = s.a().iter().fold(Scalar::zero(), |acc, a| &acc + a);
        assert!(sum.is_zero());
    }

    #[test]
    fn l_forms() {
        let s = Scenario::from_ratios([(1, 1), (0, 1), (0, 1), (3, 1), (1, 1)]).unwrap();
        let f = Frame::Original;
        assert_eq!(build_l(1, &s, f), v(f, "u") - v(f, "y1"));
        assert_eq!(build_l(2, &s, f), v(f, "y2").scale(&k(-3)));
        let z = Scenario::from_ratios([(0, 1), (0, 1), (1, 1), (0, 1), (1, 1)]).unwrap();
        assert!(build_l(1, &z, f).is_zero());
    }

    #[test]
    fn transforms_round_trip() {
        for t in [
            FrameTransform::original_to_w(),
            FrameTransform::w_to_z(),
            FrameTransform::original_to_z(),
        ] {
            assert_eq!(linalg::mat_mul(&t.matrix, &t.inverse), linalg::identity(5));
        }
        let p1 = pt(Frame::W, &[1, 0, 0, 0, 0]);
        let o = convert_point(
            &p1,
            &FrameTransform::between(Frame::W, Frame::Original).unwrap(),
        )
        .unwrap();
        let expect = ProjPoint::new(
            Frame::Original,
            vec![
                Scalar::from_ratio(1, 4),
                Scalar::from_ratio(-1, 4),
                k(0),
                Scalar::from_ratio(-1, 2),
                k(0),
            ],
        )
        .unwrap();
        assert!(o.proj_eq(&expect));
        let q = pt(Frame::Z, &[1, -1, 0, 0, 1]);
        let oq = convert_point(
            &q,
            &FrameTransform::between(Frame::Z, Frame::Original).unwrap(),
        )
        .unwrap();
        assert!(oq.proj_eq(&pt(Frame::Original, &[0, 0, -1, 1, -1])));
    }

    #[test]
    fn quadric_forms_in_new_frames() {
        let (q1, q2) = build_q1_q2();
        let tw = FrameTransform::original_to_w();
        assert_eq!(tw.pull_poly(&q1).unwrap(), build_q1_in(Frame::W));
        assert_eq!(tw.pull_poly(&q2).unwrap(), build_q2_in(Frame::W));
        let tz = FrameTransform::w_to_z();
        let sixteen = k(QUADRIC_Z_SCALE);
        assert_eq!(
            tz.pull_poly(&build_quadric_q(Frame::W))
                .unwrap()
                .scale(&sixteen),
            build_quadric_q(Frame::Z)
        );
        assert_eq!(
            tz.pull_poly(&build_q1_in(Frame::W))
                .unwrap()
                .scale(&sixteen),
            build_q1_in(Frame::Z)
        );
    }

    #[test]
    fn qtilde_w_coefficients() {
        let s = Scenario::from_ratios([(1, 2), (3, 1), (-2, 3), (5, 7), (4, 9)]).unwrap();
        let qw = build_qtilde(&s, Frame::W);
        let [a1, a2, a3, a4] = s.a();
        assert_eq!(qw.coeff_of(&["w0", "w1"]), a1);
        assert_eq!(qw.coeff_of(&["w0", "w2"]), a2);
        assert_eq!(qw.coeff_of(&["w1", "w3"]), a3);
        assert_eq!(qw.coeff_of(&["w2", "w3"]), a4);
    }

    #[test]
    fn qtilde_equal_velocity_and_zero_velocity() {
        let s = Scenario::equal_velocity(k(3), k(2)).unwrap();
        let f = Frame::Z;
        let expect = (v(f, "z0") - v(f, "z1")).scale(&k(3)) * v(f, "x")
            - (v(f, "z0") * v(f, "z1")).scale(&k(2));
        assert_eq!(build_qtilde(&s, f), expect);
        let z = Scenario::equal_velocity(k(0), k(5)).unwrap();
        assert_eq!(build_qtilde(&z, f), (v(f, "z0") * v(f, "z1")).scale(&k(-5)));
    }

    #[test]
    fn p_groupings_agree() {
        let s = Scenario::from_ratios([(1, 2), (3, 1), (-2, 3), (5, 7), (4, 9)]).unwrap();
        assert_eq!(build_p(&s), build_p_grouped(&s));
    }

    #[test]
    fn p_partial_matches_expansion() {
        let s = Scenario::from_ratios([(2, 3), (-1, 1), (1, 5), (7, 2), (3, 4)]).unwrap();
        let f = Frame::U;
        let (u0, u1, u2) = (v(f, "u0"), v(f, "u1"), v(f, "u2"));
        let [a1, _, a3, _] = s.a();
        let expect = u2.pow(3).scale(&(&k(2) * &s.v22))
            - (&u0 * &u2.pow(2)).scale(&(&k(2) * &a3))
            - (&u0 * &u1 * &u2).scale(&(&k(2) * &s.v12))
            + (&u1 * &u2).scale(&k(2)) * (u1.scale(&s.v22) - u0.scale(&s.v12))
            + (&u0 * &u1.pow(2)).scale(&(&k(2) * &a1));
        assert_eq!(build_p(&s).partial(0).unwrap(), expect);
    }

    #[test]
    fn tdoa_line() {
        let f = Frame::Original;
        assert_eq!(
            build_tdoa_l(&k(1)).unwrap(),
            v(f, "r2") - v(f, "r1") - v(f, "u")
        );
        assert!(build_tdoa_l(&k(1))
            .unwrap()
            .eval(&pt(f, &[1, 0, 0, 1, 2]))
            .unwrap()
            .is_zero());
        assert!(build_tdoa_l(&k(2))
            .unwrap()
            .eval(&pt(f, &[1, 1, 0, 0, 2]))
            .unwrap()
            .is_zero());
        assert!(matches!(build_tdoa_l(&k(0)), Err(Error::ZeroTDOA)));
    }

    #[test]
    fn cauchy_schwarz_cases() {
        let one = k(1);
        assert!(!cauchy_schwarz_ok(&Scenario::equal_velocity(one.clone(), k(3)).unwrap()).unwrap());
        assert!(cauchy_schwarz_ok(&Scenario::equal_velocity(one.clone(), k(2)).unwrap()).unwrap());
        assert!(cauchy_schwarz_ok(&Scenario::equal_velocity(k(5), k(0)).unwrap()).unwrap());
        let c = Scenario::new(Scalar::i(), k(0), k(0), k(1), k(1)).unwrap();
        assert!(matches!(cauchy_schwarz_ok(&c), Err(Error::NonRealScenario)));
    }

    #[test]
    fn fdoa_symmetry_and_sensor() {
        let s = Scenario::equal_velocity(k(1), k(0)).unwrap();
        for y2 in [-2.0, -0.5, 0.3, 4.0] {
            assert!(fdoa_value((0.0, y2), &s).unwrap().abs() < 1e-15);
        }
        assert!(matches!(fdoa_value((1.0, 0.0), &s), Err(Error::AtSensor)));
    }

    #[test]
    fn scenario_parse() {
        let s = Scenario::parse("v11=0\nv12 = 1\n# comment\nv21=0\nv22=1\nd=0.5\na=3/2\n").unwrap();
        assert_eq!(s.d, Scalar::from_ratio(1, 2));
        assert!(s.equal_velocity_v().is_some());
        assert!(Scenario::parse("v11=0\nv12=1\n").is_err());
        assert!(Scenario::parse("v11=0\nv12=1\nv21=0\nv22=1\nd=x").is_err());
        assert!(Scenario::parse("v11=0\nv12=0\nv21=0\nv22=0\nd=0").is_err());
    }
}
