//! Points of projective space.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Frame;
use crate::scalar::Scalar;

/// A nonzero coordinate vector up to scale.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    frame: Frame,
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(frame: Frame, coords: Vec<Scalar>) -> Result<Self> {
        assert_eq!(
            coords.len(),
            frame.nvars(),
            "coordinate count for frame {frame}"
        );
        if coords.iter().all(Scalar::is_zero) {
            return Err(Error::ZeroPoint);
        }
        Ok(Self { frame, coords })
    }

    /// Convenience constructor for integer coordinates; panics on the zero vector.
    pub fn from_ints(frame: Frame, coords: &[i64]) -> Self {
        Self::new(frame, coords.iter().map(|&c| Scalar::from_int(c)).collect())
            .expect("nonzero point")
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    /// Representative with first nonzero coordinate equal to one.
    pub fn normalized(&self) -> Self {
        let k = self
            .coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero point");
        let inv = self.coords[k].inv().expect("nonzero pivot");
        Self {
            frame: self.frame,
            coords: self.coords.iter().map(|c| c * &inv).collect(),
        }
    }

    pub fn scaled(&self, lambda: &Scalar) -> Result<Self> {
        Self::new(self.frame, self.coords.iter().map(|c| c * lambda).collect())
    }

    /// Scale-blind equality.
    pub fn proj_eq(&self, other: &Self) -> bool {
        if self.frame != other.frame {
            return false;
        }
        let mixed = self
            .coords
            .iter()
            .any(|a| other.coords.iter().any(|b| !a.compatible(b)));
        if mixed {
            // Normalized coordinates from different quadratic fields agree
            // only when both are base-field values.
            let (a, b) = (self.normalized(), other.normalized());
            return a.coords == b.coords;
        }
        let n = self.coords.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = &self.coords[i] * &other.coords[j];
                let b = &self.coords[j] * &other.coords[i];
                if a != b {
                    return false;
                }
            }
        }
        // 2x2 minors vanish; also require matching zero patterns.
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a.is_zero() == b.is_zero())
    }

    /// True iff some scaling makes every coordinate real.
    pub fn is_real(&self) -> bool {
        self.normalized().coords.iter().all(Scalar::is_real)
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coords.iter().map(Scalar::to_c64).collect()
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Text of the normalized representative.
    pub fn canonical_text(&self) -> String {
        self.normalized().to_text()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Removes projective duplicates, keeping first occurrences.
pub fn dedup_points(points: Vec<ProjPoint>) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.proj_eq(&p)) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_blind_equality() {
        let p = ProjPoint::from_ints(Frame::U, &[1, 2, 3]);
        let q = p.scaled(&Scalar::from_ratio(-5, 7)).unwrap();
        assert!(p.proj_eq(&q));
        assert!(!p.proj_eq(&ProjPoint::from_ints(Frame::U, &[1, 2, 4])));
        assert!(!ProjPoint::from_ints(Frame::U, &[1, 0, 0])
            .proj_eq(&ProjPoint::from_ints(Frame::U, &[0, 1, 0])));
    }

    #[test]
    fn realness_up_to_scale() {
        let i = Scalar::i();
        let p = ProjPoint::new(
            Frame::U,
            vec![i.clone(), &i * &Scalar::from_int(2), Scalar::zero()],
        )
        .unwrap();
        assert!(p.is_real());
        let q = ProjPoint::new(Frame::U, vec![Scalar::one(), i, Scalar::zero()]).unwrap();
        assert!(!q.is_real());
    }

    #[test]
    fn points_over_different_fields() {
        let root = |n| {
            crate::scalar::Extension::new(crate::scalar::GaussQ::from_int(n))
                .unwrap()
                .generator()
        };
        let (r2, r3) = (root(2), root(3));
        let p = ProjPoint::new(Frame::U, vec![Scalar::one(), r2.clone(), Scalar::zero()]).unwrap();
        let q = ProjPoint::new(Frame::U, vec![Scalar::one(), r3, Scalar::zero()]).unwrap();
        assert!(!p.proj_eq(&q));
        let p2 = p.scaled(&r2).unwrap();
        let q2 = ProjPoint::new(
            Frame::U,
            vec![r2.clone(), Scalar::from_int(2), Scalar::zero()],
        )
        .unwrap();
        assert!(p2.proj_eq(&q2));
    }

    #[test]
    fn zero_point_rejected() {
        assert!(matches!(
            ProjPoint::new(Frame::U, vec![Scalar::zero(); 3]),
            Err(Error::ZeroPoint)
        ));
    }
}
