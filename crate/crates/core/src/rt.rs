//! Radial/tangential decomposition of a planar linear vector field.
//!
//! For `X = r (cos t, sin t)` the field splits as `A X = R(t) X + T(t) X^perp`
//! with two pi-periodic sinusoids
//!
//! ```text
//! R(t) = m_R + p cos(2 (t - theta_R))
//! T(t) = m_T - p sin(2 (t - theta_R))
//! ```
//!
//! The four numbers `(m_R, m_T, p, theta_R)` encode the matrix exactly,
//! so [`decompose`] and [`reconstruct`] are mutually inverse.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::angle::AngleModPi;
use crate::error::{Error, Result};
use crate::matrix::Mat2;

/// Relative threshold below which the shared amplitude `p` counts as zero.
pub const P_ZERO_REL_TOL: f64 = 1e-12;

/// Parameters of the radial (`R`) and tangential (`T`) sinusoids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RTParams {
    m_r: f64,
    m_t: f64,
    p: f64,
    theta_r: Option<AngleModPi>,
}

impl RTParams {
    /// Validating constructor: `p >= 0`, and `theta_r` present iff `p > 0`.
    pub fn new(m_r: f64, m_t: f64, p: f64, theta_r: Option<f64>) -> Result<Self> {
        if !(m_r.is_finite() && m_t.is_finite() && p.is_finite()) {
            return Err(Error::invalid("RT parameters must be finite"));
        }
        if p < 0.0 {
            return Err(Error::invalid(format!("amplitude p must be >= 0, got {p}")));
        }
        match theta_r {
            Some(t) if !t.is_finite() => Err(Error::invalid("theta_R must be finite")),
            Some(_) if p == 0.0 => Err(Error::invalid("theta_R must be absent when p = 0")),
            None if p > 0.0 => Err(Error::invalid("theta_R is required when p > 0")),
            _ => Ok(RTParams {
                m_r,
                m_t,
                p,
                theta_r: theta_r.map(AngleModPi::new),
            }),
        }
    }

    pub fn m_r(&self) -> f64 {
        self.m_r
    }

    pub fn m_t(&self) -> f64 {
        self.m_t
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn theta_r(&self) -> Option<AngleModPi> {
        self.theta_r
    }

    /// Location of the maximum of `T`, `theta_R - pi/4`.
    pub fn theta_t(&self) -> Option<AngleModPi> {
        self.theta_r.map(|t| AngleModPi::new(t.value() - FRAC_PI_4))
    }

    /// Reactivity, the maximum of `R`.
    pub fn rho1(&self) -> f64 {
        self.m_r + self.p
    }

    /// Attenuation, the minimum of `R`.
    pub fn rho2(&self) -> f64 {
        self.m_r - self.p
    }

    pub fn tau1(&self) -> f64 {
        self.m_t + self.p
    }

    pub fn tau2(&self) -> f64 {
        self.m_t - self.p
    }

    /// Largest of `|rho1|, |rho2|, |tau1|, |tau2|`: a speed scale for step sizes.
    pub fn max_speed(&self) -> f64 {
        [self.rho1(), self.rho2(), self.tau1(), self.tau2()]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    fn phase(&self) -> f64 {
        self.theta_r.map_or(0.0, AngleModPi::value)
    }

    /// `R(theta)`.
    pub fn radial(&self, theta: f64) -> f64 {
        if self.p == 0.0 {
            return self.m_r;
        }
        self.m_r + self.p * (2.0 * (theta - self.phase())).cos()
    }

    /// `T(theta)`.
    pub fn tangential(&self, theta: f64) -> f64 {
        if self.p == 0.0 {
            return self.m_t;
        }
        self.m_t - self.p * (2.0 * (theta - self.phase())).sin()
    }

    /// `R'(theta) = -2 (T(theta) - m_T)`.
    pub fn radial_derivative(&self, theta: f64) -> f64 {
        -2.0 * self.p * (2.0 * (theta - self.phase())).sin()
    }

    /// `T'(theta) = -2 (R(theta) - m_R)`.
    pub fn tangential_derivative(&self, theta: f64) -> f64 {
        -2.0 * self.p * (2.0 * (theta - self.phase())).cos()
    }
}

/// Split `A` into the parameters of its radial and tangential sinusoids.
pub fn decompose(a: &Mat2) -> Result<RTParams> {
    a.ensure_finite()?;
    let m_r = 0.5 * (a.a11 + a.a22);
    let m_t = 0.5 * (a.a21 - a.a12);
    let diff = a.a11 - a.a22;
    let sum = a.a12 + a.a21;
    let p = 0.5 * diff.hypot(sum);
    if p <= P_ZERO_REL_TOL * (1.0 + m_r.abs() + m_t.abs()) {
        return Ok(RTParams {
            m_r,
            m_t,
            p: 0.0,
            theta_r: None,
        });
    }
    let theta_r = 0.5 * sum.atan2(diff);
    Ok(RTParams {
        m_r,
        m_t,
        p,
        theta_r: Some(AngleModPi::new(theta_r)),
    })
}

/// Rebuild the matrix as `[[R(0), -T(pi/2)], [T(0), R(pi/2)]]`.
pub fn reconstruct(rt: &RTParams) -> Mat2 {
    // Expanded form of the column identities, exact at p = 0.
    let (s, c) = (2.0 * rt.phase()).sin_cos();
    let pc = rt.p * c;
    let ps = rt.p * s;
    Mat2::new(rt.m_r + pc, ps - rt.m_t, rt.m_t + ps, rt.m_r - pc)
}

/// `R(theta)` for the given parameters.
pub fn eval_radial(rt: &RTParams, theta: f64) -> f64 {
    rt.radial(theta)
}

/// `T(theta)` for the given parameters.
pub fn eval_tangential(rt: &RTParams, theta: f64) -> f64 {
    rt.tangential(theta)
}

/// `M_gamma^{-1} A M_gamma`: shifts both sinusoids left by `gamma`,
/// i.e. `R_B(theta) = R_A(theta + gamma)`.
pub fn rotate_conjugate(a: &Mat2, gamma: f64) -> Mat2 {
    Mat2::rotation(-gamma) * *a * Mat2::rotation(gamma)
}

/// `S A S` with `S = diag(1, -1)`. Negates `m_T`; `m_R` and `p` unchanged.
pub fn reflect_conjugate(a: &Mat2) -> Mat2 {
    Mat2::new(a.a11, -a.a12, -a.a21, a.a22)
}

/// Largest eigenvalue of the symmetric part `(A + A^T) / 2`, from its
/// characteristic polynomial.
pub fn symmetric_part_reactivity(a: &Mat2) -> f64 {
    let off = 0.5 * (a.a12 + a.a21);
    let h = Mat2::new(a.a11, off, off, a.a22);
    let half_tr = 0.5 * h.trace();
    let disc = (half_tr * half_tr - h.det()).max(0.0);
    let root = disc.sqrt();
    // larger root directly, smaller via Vieta when cancellation would bite
    if half_tr >= 0.0 {
        half_tr + root
    } else {
        let small = half_tr - root;
        if small == 0.0 {
            root + half_tr
        } else {
            h.det() / small
        }
    }
}
