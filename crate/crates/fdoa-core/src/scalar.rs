//! Gaussian rationals and their quadratic extensions.
//!
//! A [`Scalar`] is `c0 + c1*s` where `c0, c1` are Gaussian rationals and `s`
//! is a fixed square root of a non-square Gaussian rational `D`. Elements with
//! `c1 = 0` carry no extension, so they combine freely with any other scalar.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarError;

/// Exact square root of a nonnegative rational, if it is one.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Parses an exact rational from `"3/7"`, `"-2"`, `"0.25"` or `"1.5e-3"`.
pub fn parse_rational(text: &str) -> Result<BigRational, ScalarError> {
    let s = text.trim();
    let bad = || ScalarError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = BigRational::from_integer(num);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A Gaussian rational `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussQ {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(BigRational::new(n.into(), d.into()), BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Exact square root in Q(i), if one exists. The root returned has
    /// nonnegative real part (positive imaginary part when purely imaginary).
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(2.into());
        let x2 = (&n + &self.re) / &two;
        let x = rational_sqrt(&x2)?;
        if x.is_zero() {
            let y = rational_sqrt(&((&n - &self.re) / &two))?;
            return Some(Self::new(BigRational::zero(), y));
        }
        let y = &self.im / (&two * &x);
        let root = Self::new(x, y);
        debug_assert_eq!(&(&root * &root), self);
        Some(root)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Rational sign when real; `None` for non-real values.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        Some(self.re.cmp(&BigRational::zero()))
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", fmt_rational(&self.im))
        };
        if self.re.is_zero() {
            write!(f, "{im}")
        } else if self.im.is_positive() {
            write!(f, "({}+{im})", fmt_rational(&self.re))
        } else {
            write!(f, "({}{im})", fmt_rational(&self.re))
        }
    }
}

impl<'a> Add<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn add(self, o: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn sub(self, o: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn mul(self, o: &GaussQ) -> GaussQ {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussQ::new(&self.re * &o.re, BigRational::zero());
        }
        GaussQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ::new(-self.re.clone(), -self.im.clone())
    }
}

/// The field `Q(i)(s)` with `s^2 = radicand`, where `sign` picks the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    radicand: GaussQ,
    negated: bool,
}

impl Extension {
    /// Registers `sqrt(radicand)`. Fails when the radicand is already a square.
    pub fn new(radicand: GaussQ) -> Result<Arc<Self>, ScalarError> {
        if radicand.sqrt().is_some() {
            return Err(ScalarError::ReducibleMinimalPolynomial);
        }
        Ok(Arc::new(Self {
            radicand,
            negated: false,
        }))
    }

    pub fn radicand(&self) -> &GaussQ {
        &self.radicand
    }

    /// Numerical value of the generator.
    pub fn approx(&self) -> Complex64 {
        let r = self.radicand.to_c64().sqrt();
        if self.negated {
            -r
        } else {
            r
        }
    }

    /// The generator `s` as a scalar.
    pub fn generator(self: &Arc<Self>) -> Scalar {
        Scalar {
            c0: GaussQ::zero(),
            c1: GaussQ::one(),
            ext: Some(self.clone()),
        }
    }
}

/// Exact scalar: `c0 + c1*s`, with `s` the generator of an optional extension.
#[derive(Clone, Debug)]
pub struct Scalar {
    c0: GaussQ,
    c1: GaussQ,
    ext: Option<Arc<Extension>>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if let (Some(e), Some(f)) = (&self.ext, &other.ext) {
            if e.radicand != f.radicand {
                return false;
            }
        }
        let (a, b, _) = unify(self, other);
        a.0 == b.0 && a.1 == b.1
    }
}

impl Eq for Scalar {}

/// `(c0, c1)` of `c0 + c1 s`.
type Parts = (GaussQ, GaussQ);

/// Brings two scalars into one extension. Panics on incompatible extensions.
fn unify(x: &Scalar, y: &Scalar) -> (Parts, Parts, Option<Arc<Extension>>) {
    match (&x.ext, &y.ext) {
        (None, None) => (
            (x.c0.clone(), x.c1.clone()),
            (y.c0.clone(), y.c1.clone()),
            None,
        ),
        (Some(e), None) | (None, Some(e)) => (
            (x.c0.clone(), x.c1.clone()),
            (y.c0.clone(), y.c1.clone()),
            Some(e.clone()),
        ),
        (Some(e), Some(f)) => {
            if e.radicand != f.radicand {
                panic!("{}", ScalarError::NestedExtension);
            }
            let c1 = if e.negated == f.negated {
                y.c1.clone()
            } else {
                -&y.c1
            };
            (
                (x.c0.clone(), x.c1.clone()),
                (y.c0.clone(), c1),
                Some(e.clone()),
            )
        }
    }
}

impl Scalar {
    /// Whether arithmetic between `self` and `other` stays in one extension.
    pub fn compatible(&self, other: &Self) -> bool {
        match (&self.ext, &other.ext) {
            (Some(e), Some(f)) => e.radicand == f.radicand,
            _ => true,
        }
    }

    fn build(c0: GaussQ, c1: GaussQ, ext: Option<Arc<Extension>>) -> Self {
        if c1.is_zero() {
            Self { c0, c1, ext: None }
        } else {
            Self { c0, c1, ext }
        }
    }

    pub fn from_gauss(g: GaussQ) -> Self {
        Self::build(g, GaussQ::zero(), None)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussQ::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_gauss(GaussQ::from_ratio(n, d))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_gauss(GaussQ::new(q, BigRational::zero()))
    }

    pub fn complex(re: BigRational, im: BigRational) -> Self {
        Self::from_gauss(GaussQ::new(re, im))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::from_gauss(GaussQ::i())
    }

    /// Parses a real exact literal (see [`parse_rational`]).
    pub fn parse(text: &str) -> Result<Self, ScalarError> {
        parse_rational(text).map(Self::from_rational)
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    /// `k * s` for a base element `k`, in the given extension.
    pub fn times_generator(k: &GaussQ, e: &Arc<Extension>) -> Self {
        Self::build(GaussQ::zero(), k.clone(), Some(e.clone()))
    }

    pub fn is_one(&self) -> bool {
        self.c1.is_zero() && self.c0 == GaussQ::one()
    }

    /// True when the value lies in Q(i) (no extension component).
    pub fn is_base(&self) -> bool {
        self.c1.is_zero()
    }

    pub fn base(&self) -> Option<&GaussQ> {
        if self.is_base() {
            Some(&self.c0)
        } else {
            None
        }
    }

    pub fn parts(&self) -> (&GaussQ, &GaussQ) {
        (&self.c0, &self.c1)
    }

    pub fn extension(&self) -> Option<&Arc<Extension>> {
        self.ext.as_ref()
    }

    /// Exact realness test.
    ///
    /// For `c1 != 0` the value `x` is a root of `x^2 - 2 c0 x + (c0^2 - c1^2 D)`;
    /// it is real iff that polynomial is real with positive discriminant.
    pub fn is_real(&self) -> bool {
        match &self.ext {
            None => self.c0.is_real(),
            Some(e) => {
                if !self.c0.is_real() {
                    return false;
                }
                let k = &(&self.c1 * &self.c1) * &e.radicand;
                k.is_real() && k.re.is_positive()
            }
        }
    }

    /// Real rational value, when the scalar is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_base() && self.c0.is_real() {
            Some(&self.c0.re)
        } else {
            None
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match &self.ext {
            None => self.c0.inv().map(Self::from_gauss),
            Some(e) => {
                // (c0 + c1 s)(c0 - c1 s) = c0^2 - c1^2 D, nonzero because D is not a square.
                let n = &(&self.c0 * &self.c0) - &(&(&self.c1 * &self.c1) * &e.radicand);
                let ni = n.inv()?;
                Some(Self::build(
                    &self.c0 * &ni,
                    -&(&self.c1 * &ni),
                    Some(e.clone()),
                ))
            }
        }
    }

    /// Square root when it exists in Q(i); extension elements are not handled.
    pub fn sqrt_base(&self) -> Option<Self> {
        self.base()?.sqrt().map(Self::from_gauss)
    }

    /// Exact square root in the scalar's own field, if one exists.
    ///
    /// Over `Q(i)(s)`, `(a + b s)^2 = c0 + c1 s` forces
    /// `a^2 = (c0 +- sqrt(c0^2 - c1^2 D)) / 2` and `b = c1 / (2a)`.
    pub fn sqrt(&self) -> Option<Self> {
        let e = match &self.ext {
            None => return self.sqrt_base(),
            Some(e) => e.clone(),
        };
        let d = &e.radicand;
        let norm = &(&self.c0 * &self.c0) - &(&(&self.c1 * &self.c1) * d);
        let n = norm.sqrt()?;
        let half = GaussQ::from_ratio(1, 2);
        for cand in [&(&self.c0 + &n) * &half, &(&self.c0 - &n) * &half] {
            if let Some(a) = cand.sqrt() {
                if a.is_zero() {
                    continue;
                }
                let b = &self.c1 * &(&GaussQ::from_int(2) * &a).inv().expect("nonzero");
                let root = Self::build(a, b, Some(e.clone()));
                if &(&root * &root) == self {
                    return Some(root);
                }
            }
        }
        // A pure multiple of s: c1 = 0 cannot occur here, so only a = 0 remains.
        None
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        let base = self.c0.to_c64();
        match &self.ext {
            None => base,
            Some(e) => base + self.c1.to_c64() * e.approx(),
        }
    }

    /// Complex conjugate; only defined on Q(i).
    pub fn conj_base(&self) -> Option<Self> {
        self.base().map(|g| Self::from_gauss(g.conj()))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ext {
            None => write!(f, "{}", self.c0),
            Some(e) => {
                let root = if e.negated { "-sqrt" } else { "sqrt" };
                write!(f, "({} + {}*{root}({}))", self.c0, self.c1, e.radicand)
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<GaussQ> for Scalar {
    fn from(g: GaussQ) -> Self {
        Self::from_gauss(g)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.ext.is_none() && o.ext.is_none() {
            return Scalar::from_gauss(&self.c0 + &o.c0);
        }
        let (a, b, e) = unify(self, o);
        Scalar::build(&a.0 + &b.0, &a.1 + &b.1, e)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        if self.ext.is_none() && o.ext.is_none() {
            return Scalar::from_gauss(&self.c0 - &o.c0);
        }
        let (a, b, e) = unify(self, o);
        Scalar::build(&a.0 - &b.0, &a.1 - &b.1, e)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.ext.is_none() && o.ext.is_none() {
            return Scalar::from_gauss(&self.c0 * &o.c0);
        }
        let (a, b, e) = unify(self, o);
        let d = &e.as_ref().expect("extension present").radicand;
        let c0 = &(&a.0 * &b.0) + &(&(&a.1 * &b.1) * d);
        let c1 = &(&a.0 * &b.1) + &(&a.1 * &b.0);
        Scalar::build(c0, c1, e)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::build(-&self.c0, -&self.c1, self.ext.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { self.$m(&o) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);

/// Two roots of `a x^2 + b x + c = 0`.
///
/// Roots lie in Q(i) when the discriminant is a square there; otherwise a new
/// extension by the square root of the discriminant is registered. Coefficients
/// already involving an extension are accepted only when the discriminant
/// is in Q(i), since nested extensions are not supported.
pub fn solve_quadratic(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<[Scalar; 2], ScalarError> {
    if a.is_zero() {
        return Err(ScalarError::DegenerateQuadratic);
    }
    let disc = b * b - Scalar::from_int(4) * a * c;
    let two_a = Scalar::from_int(2) * a;
    let root = match disc.sqrt() {
        Some(r) => r,
        None => match disc.base() {
            Some(g) if a.ext.is_none() && b.ext.is_none() && c.ext.is_none() => {
                Extension::new(g.clone())?.generator()
            }
            _ => return Err(ScalarError::NestedExtension),
        },
    };
    let nb = -b;
    Ok([(&nb + &root) / &two_a, (&nb - &root) / &two_a])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn gaussian_sqrt_roundtrip() {
        for (re, im) in [(3, 4), (-1, 0), (0, 2), (5, -12), (9, 0), (0, -8)] {
            let g = GaussQ::new(
                BigRational::from_integer(re.into()),
                BigRational::from_integer(im.into()),
            );
            let r = g.sqrt().expect("square");
            assert_eq!(&r * &r, g);
        }
        assert!(GaussQ::from_int(2).sqrt().is_none());
        assert!(GaussQ::new(BigRational::one(), BigRational::one())
            .sqrt()
            .is_none());
    }

    #[test]
    fn parse_literals() {
        assert_eq!(Scalar::parse("0.25").unwrap(), q(1, 4));
        assert_eq!(Scalar::parse("-3/7").unwrap(), q(-3, 7));
        assert_eq!(Scalar::parse("1.5e-3").unwrap(), q(3, 2000));
        assert_eq!(Scalar::parse("2E2").unwrap(), q(200, 1));
        assert!(Scalar::parse("1/0").is_err());
        assert!(Scalar::parse("abc").is_err());
    }

    #[test]
    fn extension_reduces_products() {
        let e = Extension::new(GaussQ::from_int(2)).unwrap();
        let s = e.generator();
        assert_eq!(&s * &s, Scalar::from_int(2));
        let x = &Scalar::from_int(1) + &s;
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(x.is_real());
        let z = Extension::new(GaussQ::from_int(-3)).unwrap().generator();
        assert!(!z.is_real());
        assert!((&z * &z).is_real());
    }

    #[test]
    fn min_poly_root_vanishes() {
        // d t^2 + 2 v t + d with v = 1, d = 3 gives a complex t.
        let (d, v) = (q(3, 1), q(1, 1));
        let two_v = &q(2, 1) * &v;
        let roots = solve_quadratic(&d, &two_v, &d).unwrap();
        for t in &roots {
            let m = &(&(&d * t) * t) + &(&(&two_v * t) + &d);
            assert!(m.is_zero());
            assert!(!t.is_real());
        }
        assert_ne!(roots[0], roots[1]);
    }

    #[test]
    fn sqrt_inside_extension() {
        let s = Extension::new(GaussQ::from_int(3)).unwrap().generator();
        let x = &(&Scalar::from_int(2) + &s) * &(&Scalar::from_ratio(1, 3) - &s);
        let sq = &x * &x;
        let r = sq.sqrt().unwrap();
        assert!(r == x || r == -&x);
        assert!(s.sqrt().is_none());
        // Quadratic whose discriminant is a square only inside the extension.
        let roots = solve_quadratic(
            &Scalar::one(),
            &(&Scalar::from_int(-2) * &s),
            &Scalar::from_int(2),
        )
        .unwrap();
        assert_eq!(roots[0], &s + &Scalar::one());
        assert_eq!(roots[1], &s - &Scalar::one());
    }

    #[test]
    fn opposite_branch_extensions_combine() {
        let e = Extension::new(GaussQ::from_int(5)).unwrap();
        let f = Arc::new(Extension {
            radicand: GaussQ::from_int(5),
            negated: true,
        });
        assert_eq!(e.generator(), -f.generator());
        assert!((e.generator() + f.generator()).is_zero());
    }
}
