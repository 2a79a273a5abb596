use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real 2x2 coefficient matrix of the planar system `X' = A X`, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);
    pub const ZERO: Mat2 = Mat2::new(0.0, 0.0, 0.0, 0.0);
    /// Counter-clockwise quarter turn; `J X = X^perp`.
    pub const J: Mat2 = Mat2::new(0.0, -1.0, 1.0, 0.0);
    /// Clockwise quarter turn, `J^{-1} = -J`.
    pub const J_INV: Mat2 = Mat2::new(0.0, 1.0, -1.0, 0.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    /// Like [`Mat2::new`] but rejects NaN and infinite entries.
    pub fn checked(a11: f64, a12: f64, a21: f64, a22: f64) -> Result<Self> {
        let m = Mat2::new(a11, a12, a21, a22);
        m.ensure_finite()?;
        Ok(m)
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn to_rows(self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn diag(d1: f64, d2: f64) -> Self {
        Mat2::new(d1, 0.0, 0.0, d2)
    }

    pub fn scalar(c: f64) -> Self {
        Mat2::diag(c, c)
    }

    /// Counter-clockwise rotation by `gamma` radians.
    pub fn rotation(gamma: f64) -> Self {
        let (s, c) = gamma.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!("matrix has non-finite entries: {self}")))
        }
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn scale(&self, k: f64) -> Self {
        Mat2::new(k * self.a11, k * self.a12, k * self.a21, k * self.a22)
    }

    pub fn apply(&self, x: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * x[0] + self.a12 * x[1],
            self.a21 * x[0] + self.a22 * x[1],
        ]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.to_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value), closed form for 2x2.
    pub fn spectral_norm(&self) -> f64 {
        let f2 = self.to_array().iter().map(|v| v * v).sum::<f64>();
        let d = self.det();
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0);
        ((f2 + disc.sqrt()) / 2.0).sqrt()
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 + o.a11,
            self.a12 + o.a12,
            self.a21 + o.a21,
            self.a22 + o.a22,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checked_rejects_nan_and_inf() {
        assert!(Mat2::checked(1.0, f64::NAN, 0.0, 0.0).is_err());
        assert!(Mat2::checked(f64::INFINITY, 0.0, 0.0, 0.0).is_err());
        assert!(Mat2::checked(1.0, 2.0, 3.0, 4.0).is_ok());
    }

    #[test]
    fn j_squares_to_minus_identity() {
        assert_eq!(Mat2::J * Mat2::J, -Mat2::IDENTITY);
        assert_eq!(Mat2::J * Mat2::J_INV, Mat2::IDENTITY);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        assert!((Mat2::diag(-3.0, 2.0).spectral_norm() - 3.0).abs() < 1e-15);
        // shear [[1, 1], [0, 1]] has norm golden ratio
        let g = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((Mat2::new(1.0, 1.0, 0.0, 1.0).spectral_norm() - g).abs() < 1e-14);
    }

    #[test]
    fn rotation_composes() {
        let r = Mat2::rotation(0.3) * Mat2::rotation(0.4);
        assert!(r.max_abs_diff(&Mat2::rotation(0.7)) < 1e-15);
    }
}
