//! Dense univariate polynomials over [`Scalar`] and binary forms.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::scalar::{solve_quadratic, Scalar};

/// Coefficients from the constant term upward; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_c64();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Quotient and remainder; panics when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d
            .lead()
            .unwrap()
            .inv()
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return (Self::new(vec![]), self.clone());
        }
        let mut quot = vec![Scalar::zero(); n - dd];
        for k in (dd..n).rev() {
            let c = &rem[k] * &inv;
            if c.is_zero() {
                continue;
            }
            for j in 0..=dd {
                rem[k - dd + j] = &rem[k - dd + j] - &(&c * &d.coeffs[j]);
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The product of the distinct irreducible factors, made monic.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Roots of a polynomial of degree at most 2, exactly, with repetition.
    pub fn exact_roots(&self) -> Option<Vec<Scalar>> {
        match self.degree()? {
            0 => Some(vec![]),
            1 => Some(vec![-(&self.coeffs[0] / &self.coeffs[1])]),
            2 => solve_quadratic(&self.coeffs[2], &self.coeffs[1], &self.coeffs[0])
                .ok()
                .map(|r| r.to_vec()),
            _ => None,
        }
    }
}

/// A numerically isolated root with a disk guaranteed to contain a root.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub center: Complex64,
    pub radius: f64,
}

fn exact_complex(z: Complex64) -> Option<Scalar> {
    Some(Scalar::complex(
        BigRational::from_float(z.re)?,
        BigRational::from_float(z.im)?,
    ))
}

/// Aberth iteration on a squarefree polynomial, followed by inclusion disks of
/// radius `n |p(z)| / |p'(z)|` with `p` evaluated exactly at the floating
/// centers. Returns `None` unless all disks are pairwise disjoint.
pub fn isolate_roots(p: &UniPoly) -> Option<Vec<CertifiedRoot>> {
    let n = p.degree()?;
    if n == 0 {
        return Some(vec![]);
    }
    let monic = p.monic();
    let c: Vec<Complex64> = monic.coeffs.iter().map(|x| x.to_c64()).collect();
    let bound = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                bound * 0.5,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    let dp = monic.derivative();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let ratio = monic.eval_c64(z[k]) / dp.eval_c64(z[k]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    let mut roots = Vec::with_capacity(n);
    for &zk in &z {
        let exact = exact_complex(zk)?;
        let pv = monic.eval(&exact).to_c64().norm();
        let dv = dp.eval(&exact).to_c64().norm();
        if dv == 0.0 {
            return None;
        }
        roots.push(CertifiedRoot {
            center: zk,
            radius: n as f64 * pv / dv * (1.0 + 1e-12) + f64::MIN_POSITIVE,
        });
    }
    for a in 0..n {
        for b in a + 1..n {
            if (roots[a].center - roots[b].center).norm() <= roots[a].radius + roots[b].radius {
                return None;
            }
        }
    }
    Some(roots)
}

/// A root of a binary form `F(s0, s1)`, as `[s0 : s1]`.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum BinaryRoot {
    Exact([Scalar; 2]),
    Approx { ratio: CertifiedRoot },
}

/// Dehomogenizes `F(s0, s1) = sum c_k s0^k s1^(n-k)` at `s1 = 1`.
pub fn binary_to_uni(coeffs_by_s0_power: Vec<Scalar>) -> (UniPoly, usize) {
    let n = coeffs_by_s0_power.len().saturating_sub(1);
    let p = UniPoly::new(coeffs_by_s0_power);
    let drop = n - p.degree().unwrap_or(0);
    (p, drop)
}

/// Distinct roots of a nonzero binary form given by its coefficients
/// `c_k` of `s0^k s1^(n-k)`. Known exact roots `x = s0/s1` in `hints` are
/// divided out first so the remainder is often small enough to solve exactly.
pub fn binary_distinct_roots(coeffs: Vec<Scalar>, hints: &[Scalar]) -> Option<Vec<BinaryRoot>> {
    let (p, drop) = binary_to_uni(coeffs);
    if p.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    if drop > 0 {
        out.push(BinaryRoot::Exact([Scalar::one(), Scalar::zero()]));
    }
    let mut sf = p.squarefree();
    for h in hints {
        if sf.degree().unwrap_or(0) > 0 && sf.eval(h).is_zero() {
            out.push(BinaryRoot::Exact([h.clone(), Scalar::one()]));
            let lin = UniPoly::new(vec![-h.clone(), Scalar::one()]);
            sf = sf.div_rem(&lin).0;
        }
    }
    match sf.exact_roots() {
        Some(rs) => {
            for r in rs {
                out.push(BinaryRoot::Exact([r, Scalar::one()]));
            }
        }
        None => {
            for r in isolate_roots(&sf)? {
                out.push(BinaryRoot::Approx { ratio: r });
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&k| Scalar::from_int(k)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let f = p(&[2, -3, 0, 1]);
        let (q, r) = f.div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[-2, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        assert_eq!(f.squarefree(), p(&[-2, 1, 1]));
    }

    #[test]
    fn isolated_roots_of_cubic() {
        // x^3 - 2 has three simple roots.
        let roots = isolate_roots(&p(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(roots.len(), 3);
        let real = roots.iter().find(|r| r.center.im.abs() < 1e-9).unwrap();
        assert!((real.center.re - 2f64.cbrt()).abs() < 1e-12);
        assert!(roots.iter().all(|r| r.radius < 1e-10));
    }

    #[test]
    fn binary_roots_with_infinity() {
        // s1^2 (s0 - s1) (s0 + 3 s1): coefficients of s0^k s1^(4-k).
        let c: Vec<Scalar> = [-3, 2, 1, 0, 0]
            .iter()
            .map(|&k| Scalar::from_int(k))
            .collect();
        let roots = binary_distinct_roots(c, &[]).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(matches!(&roots[0], BinaryRoot::Exact([a, b]) if a.is_one() && b.is_zero()));
    }
}
