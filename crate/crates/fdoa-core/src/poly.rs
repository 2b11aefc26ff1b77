//! Homogeneous polynomials over [`Scalar`] in named variable frames.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::point::ProjPoint;
use crate::scalar::Scalar;

/// Maximum number of variables in any frame.
pub const MAX_VARS: usize = 5;

/// Exponent vector; unused trailing slots stay zero.
pub type Monomial = [u8; MAX_VARS];

/// Coordinate frames used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    /// `[u, y1, y2, r1, r2]`
    Original,
    /// `[u, y1, y2]`, the plane of the octic `h`.
    Plane,
    /// `[w0, w1, w2, w3, x1]`
    W,
    /// `[z0, z1, z2, z3, x]`
    Z,
    /// `[u0, u1, u2]`
    U,
    /// `[q0, q1, q2]`
    Q,
    /// `[w0, w1, w2, w3]`, the quadric `w0 w3 = w1 w2` lives here.
    P3,
    /// `[s0, s1]`
    P1,
}

impl Frame {
    pub fn vars(self) -> &'static [&'static str] {
        match self {
            Frame::Original => &["u", "y1", "y2", "r1", "r2"],
            Frame::Plane => &["u", "y1", "y2"],
            Frame::W => &["w0", "w1", "w2", "w3", "x1"],
            Frame::Z => &["z0", "z1", "z2", "z3", "x"],
            Frame::U => &["u0", "u1", "u2"],
            Frame::Q => &["q0", "q1", "q2"],
            Frame::P3 => &["w0", "w1", "w2", "w3"],
            Frame::P1 => &["s0", "s1"],
        }
    }

    pub fn nvars(self) -> usize {
        self.vars().len()
    }

    pub fn name(self) -> &'static str {
        match self {
            Frame::Original => "ORIGINAL",
            Frame::Plane => "PLANE",
            Frame::W => "W",
            Frame::Z => "Z",
            Frame::U => "U",
            Frame::Q => "Q",
            Frame::P3 => "P3",
            Frame::P1 => "P1",
        }
    }

    pub fn var_index(self, name: &str) -> Option<usize> {
        self.vars().iter().position(|v| *v == name)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn check_frame(expected: Frame, found: Frame) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::FrameMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

fn total(m: &Monomial) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// A homogeneous polynomial. The zero polynomial has no terms and degree 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    frame: Frame,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl HomogPoly {
    pub fn zero(frame: Frame) -> Self {
        Self {
            frame,
            degree: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(frame: Frame, c: Scalar) -> Self {
        Self::monomial(frame, [0; MAX_VARS], c)
    }

    pub fn one(frame: Frame) -> Self {
        Self::constant(frame, Scalar::one())
    }

    pub fn monomial(frame: Frame, exps: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(frame);
        if !c.is_zero() {
            p.degree = total(&exps);
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable with the given index.
    pub fn var(frame: Frame, idx: usize) -> Self {
        assert!(idx < frame.nvars(), "variable index out of range");
        let mut e = [0; MAX_VARS];
        e[idx] = 1;
        Self::monomial(frame, e, Scalar::one())
    }

    /// All variables of the frame, in order.
    pub fn vars(frame: Frame) -> Vec<Self> {
        (0..frame.nvars()).map(|i| Self::var(frame, i)).collect()
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(frame: Frame, coeffs: &[Scalar]) -> Self {
        assert_eq!(coeffs.len(), frame.nvars());
        let mut p = Self::zero(frame);
        for (i, c) in coeffs.iter().enumerate() {
            p = &p + &Self::var(frame, i).scale(c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, which must all share one degree.
    pub fn from_terms(
        frame: Frame,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut p = Self::zero(frame);
        for (m, c) in terms {
            p = p.try_add(&Self::monomial(frame, m, c))?;
        }
        Ok(p)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of the monomial described by variable names, e.g. `&["w0", "w1"]`.
    pub fn coeff_of(&self, vars: &[&str]) -> Scalar {
        let mut m = [0u8; MAX_VARS];
        for v in vars {
            let i = self.frame.var_index(v).expect("variable in frame");
            m[i] += 1;
        }
        self.coeff(&m)
    }

    fn insert_add(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn fix_degree(mut self) -> Self {
        self.degree = self.terms.keys().next().map(total).unwrap_or(0);
        self
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        check_frame(self.frame, o.frame)?;
        if !self.is_zero() && !o.is_zero() && self.degree != o.degree {
            return Err(Error::DegreeMismatch(self.degree, o.degree));
        }
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(*m, c.clone());
        }
        Ok(out.fix_degree())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        check_frame(self.frame, o.frame)?;
        let mut out = Self::zero(self.frame);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = [0u8; MAX_VARS];
                for k in 0..MAX_VARS {
                    m[k] = m1[k] + m2[k];
                }
                out.insert_add(m, c1 * c2);
            }
        }
        Ok(out.fix_degree())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.frame);
        }
        let terms = self.terms.iter().map(|(m, v)| (*m, v * c)).collect();
        Self {
            frame: self.frame,
            degree: self.degree,
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.frame);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a coordinate vector.
    pub fn eval_coords(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.frame.nvars(), "coordinate count");
        let n = self.frame.nvars();
        // Cache powers per variable.
        let maxe = self
            .terms
            .keys()
            .flat_map(|m| m.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<Scalar>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![Scalar::one()];
                for k in 1..=maxe {
                    v.push(&v[k - 1] * xi);
                }
                v
            })
            .collect();
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..n {
                if m[k] > 0 {
                    t = &t * &powers[k][m[k] as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Evaluates at a projective point; the frames must match.
    pub fn eval(&self, pt: &ProjPoint) -> Result<Scalar> {
        check_frame(self.frame, pt.frame())?;
        Ok(self.eval_coords(pt.coords()))
    }

    /// Floating-point evaluation.
    pub fn eval_c64(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_c64();
            for (k, &e) in m.iter().enumerate().take(self.frame.nvars()) {
                if e > 0 {
                    t *= x[k].powu(e as u32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.frame.nvars() {
            return Err(Error::UnknownVariable(var));
        }
        let mut out = Self::zero(self.frame);
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut m2 = *m;
            m2[var] -= 1;
            out.insert_add(m2, c * &Scalar::from_int(m[var] as i64));
        }
        Ok(out.fix_degree())
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.frame.nvars())
            .map(|i| self.partial(i).expect("index in range"))
            .collect()
    }

    /// Replaces variable `i` by `images[i]`; all images share one frame and degree.
    pub fn compose(&self, images: &[HomogPoly]) -> Result<Self> {
        assert_eq!(images.len(), self.frame.nvars(), "one image per variable");
        let target = images[0].frame;
        for im in images {
            check_frame(target, im.frame)?;
        }
        let n = self.frame.nvars();
        let maxe = self
            .terms
            .keys()
            .flat_map(|m| m.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<HomogPoly>> = images
            .iter()
            .map(|im| {
                let mut v = vec![HomogPoly::one(target)];
                for k in 1..=maxe {
                    v.push(&v[k - 1] * im);
                }
                v
            })
            .collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = HomogPoly::constant(target, c.clone());
            for k in 0..n {
                if m[k] > 0 {
                    t = &t * &powers[k][m[k] as usize];
                }
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Linear change of variables: source variable `i` becomes
    /// `sum_j transform[i][j] * target_j`.
    pub fn substitute_linear(&self, transform: &[Vec<Scalar>], target: Frame) -> Result<Self> {
        let n = self.frame.nvars();
        if transform.len() != n || transform.iter().any(|r| r.len() != target.nvars()) {
            return Err(Error::SingularTransform);
        }
        if linalg::determinant(transform).is_zero() {
            return Err(Error::SingularTransform);
        }
        let images: Vec<HomogPoly> = transform
            .iter()
            .map(|row| HomogPoly::linear(target, row))
            .collect();
        self.compose(&images)
    }

    /// Returns `c` with `self = c * other`, if such a constant exists.
    pub fn scalar_ratio(&self, other: &Self) -> Option<Scalar> {
        if self.frame != other.frame || self.terms.len() != other.terms.len() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::one());
        }
        let (m0, c0) = other.terms.iter().next()?;
        let ratio = &self.terms.get(m0)?.clone() / c0;
        if &other.scale(&ratio) == self {
            Some(ratio)
        } else {
            None
        }
    }

    /// Normal form with respect to rewrite rules `lead -> replacement`.
    ///
    /// Each rule replaces the monomial factor `lead` by the polynomial
    /// `replacement` of the same degree. Termination is the caller's concern;
    /// the rules used here form a Groebner basis with coprime leading terms.
    pub fn normal_form(&self, rules: &[(Monomial, HomogPoly)]) -> Result<Self> {
        let mut current = self.clone();
        loop {
            let mut changed = false;
            let mut next = Self::zero(self.frame);
            for (m, c) in &current.terms {
                let hit = rules
                    .iter()
                    .find(|(lead, _)| (0..MAX_VARS).all(|k| m[k] >= lead[k]));
                match hit {
                    Some((lead, rep)) => {
                        changed = true;
                        let mut rest = *m;
                        for k in 0..MAX_VARS {
                            rest[k] -= lead[k];
                        }
                        let t = &HomogPoly::monomial(self.frame, rest, c.clone()) * rep;
                        next = next.try_add(&t)?;
                    }
                    None => next = next.try_add(&HomogPoly::monomial(self.frame, *m, c.clone()))?,
                }
            }
            current = next;
            if !changed {
                return Ok(current);
            }
        }
    }

    /// Complex conjugate of every coefficient; `None` if some coefficient lies
    /// in a quadratic extension.
    pub fn conj(&self) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, c.conj_base()?);
        }
        Some(Self {
            frame: self.frame,
            degree: self.degree,
            terms,
        })
    }

    /// Splits off the largest monomial dividing every term: `self = m * rest`.
    pub fn split_monomial_content(&self) -> (Monomial, Self) {
        let mut m = [u8::MAX; MAX_VARS];
        for e in self.terms.keys() {
            for k in 0..MAX_VARS {
                m[k] = m[k].min(e[k]);
            }
        }
        if self.terms.is_empty() {
            return ([0; MAX_VARS], self.clone());
        }
        let deg: u32 = m.iter().map(|&e| e as u32).sum();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut r = *e;
                for k in 0..MAX_VARS {
                    r[k] -= m[k];
                }
                (r, c.clone())
            })
            .collect();
        (
            m,
            Self {
                frame: self.frame,
                degree: self.degree - deg,
                terms,
            },
        )
    }

    /// Canonical text form: terms in descending lexicographic monomial order,
    /// each written `coeff * monomial`, joined by ` + `.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let names = self.frame.vars();
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .take(names.len())
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| {
                        if e == 1 {
                            names[k].to_string()
                        } else {
                            format!("{}^{}", names[k], e)
                        }
                    })
                    .collect();
                let mono = if mono.is_empty() {
                    "1".to_string()
                } else {
                    mono.join("*")
                };
                format!("{c} * {mono}")
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a HomogPoly> for &'a HomogPoly {
    type Output = HomogPoly;
    fn add(self, o: &HomogPoly) -> HomogPoly {
        self.try_add(o).expect("compatible polynomials")
    }
}

impl<'a> Sub<&'a HomogPoly> for &'a HomogPoly {
    type Output = HomogPoly;
    fn sub(self, o: &HomogPoly) -> HomogPoly {
        self.try_add(&-o).expect("compatible polynomials")
    }
}

impl<'a> Mul<&'a HomogPoly> for &'a HomogPoly {
    type Output = HomogPoly;
    fn mul(self, o: &HomogPoly) -> HomogPoly {
        self.try_mul(o).expect("compatible polynomials")
    }
}

impl Neg for &HomogPoly {
    type Output = HomogPoly;
    fn neg(self) -> HomogPoly {
        self.scale(&Scalar::from_int(-1))
    }
}

macro_rules! owned_poly_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<HomogPoly> for HomogPoly {
            type Output = HomogPoly;
            fn $m(self, o: HomogPoly) -> HomogPoly { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a HomogPoly> for HomogPoly {
            type Output = HomogPoly;
            fn $m(self, o: &HomogPoly) -> HomogPoly { (&self).$m(o) }
        }
        impl<'a> $tr<HomogPoly> for &'a HomogPoly {
            type Output = HomogPoly;
            fn $m(self, o: HomogPoly) -> HomogPoly { self.$m(&o) }
        }
    )*};
}

owned_poly_ops!(Add add, Sub sub, Mul mul);

impl Neg for HomogPoly {
    type Output = HomogPoly;
    fn neg(self) -> HomogPoly {
        -&self
    }
}

/// Exact rank of the Jacobian of `polys` at `pt`.
pub fn jacobian_rank_at(polys: &[HomogPoly], pt: &ProjPoint) -> Result<usize> {
    let rows = jacobian_at(polys, pt)?;
    Ok(linalg::rank(&rows))
}

/// Jacobian matrix of `polys` evaluated at `pt`, after checking that `pt` lies on them.
pub fn jacobian_at(polys: &[HomogPoly], pt: &ProjPoint) -> Result<Vec<Vec<Scalar>>> {
    let mut rows = Vec::with_capacity(polys.len());
    for p in polys {
        if !p.eval(pt)?.is_zero() {
            return Err(Error::NotOnVariety);
        }
        rows.push(
            p.gradient()
                .iter()
                .map(|g| g.eval_coords(pt.coords()))
                .collect(),
        );
    }
    Ok(rows)
}

/// True iff the linear form `l` divides `p`.
pub fn linear_divides(l: &HomogPoly, p: &HomogPoly) -> bool {
    if l.frame() != p.frame() || l.degree() != 1 || l.is_zero() {
        return false;
    }
    let frame = l.frame();
    let n = frame.nvars();
    let coeffs: Vec<Scalar> = (0..n)
        .map(|i| {
            let mut m = [0u8; MAX_VARS];
            m[i] = 1;
            l.coeff(&m)
        })
        .collect();
    let k = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .expect("nonzero linear form");
    let mut images = HomogPoly::vars(frame);
    let mut solved = HomogPoly::zero(frame);
    for j in 0..n {
        if j != k {
            solved = &solved - &HomogPoly::var(frame, j).scale(&(&coeffs[j] / &coeffs[k]));
        }
    }
    images[k] = solved;
    p.compose(&images).map(|q| q.is_zero()).unwrap_or(false)
}
