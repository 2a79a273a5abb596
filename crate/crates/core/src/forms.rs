//! Rotation-conjugate standard forms.
//!
//! Each form rotates a distinguished angle of `R` or `T` onto the x-axis:
//! the maximum of `R` (R-centered), the maximum of `T` (T-centered), the
//! rising zero of `R` (R-zeroed) or the rising zero of `T` (T-zeroed).

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angle::minimal_rotation;
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::rt::{decompose, rotate_conjugate, RTParams};
use crate::spectra::{eigen_structure, ortho_structure, EigenStructure, OrthoStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    RCentered,
    TCentered,
    RZeroed,
    TZeroed,
}

impl FormKind {
    pub const ALL: [FormKind; 4] = [
        FormKind::RCentered,
        FormKind::TCentered,
        FormKind::RZeroed,
        FormKind::TZeroed,
    ];

    /// Short key used in reports.
    pub fn key(self) -> &'static str {
        match self {
            FormKind::RCentered => "rc",
            FormKind::TCentered => "tc",
            FormKind::RZeroed => "r0",
            FormKind::TZeroed => "t0",
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FormKind::RCentered => "R-centered",
            FormKind::TCentered => "T-centered",
            FormKind::RZeroed => "R-zeroed",
            FormKind::TZeroed => "T-zeroed",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormResult {
    pub kind: FormKind,
    pub matrix: Mat2,
    /// Conjugation angle, reduced to `(-pi/2, pi/2]`.
    pub gamma: f64,
}

fn conjugated(a: &Mat2, kind: FormKind, gamma: f64) -> StandardFormResult {
    let gamma = minimal_rotation(gamma);
    StandardFormResult {
        kind,
        matrix: rotate_conjugate(a, gamma),
        gamma,
    }
}

fn theta_r(rt: &RTParams, kind: FormKind) -> Result<f64> {
    rt.theta_r()
        .map(|t| t.value())
        .ok_or_else(|| Error::UndefinedForm(format!("{kind} form needs p > 0")))
}

/// Angle to rotate onto the x-axis for `kind`.
pub fn form_angle(a: &Mat2, kind: FormKind) -> Result<f64> {
    let rt = decompose(a)?;
    match kind {
        FormKind::RCentered => theta_r(&rt, kind),
        FormKind::TCentered => Ok(theta_r(&rt, kind)? - FRAC_PI_4),
        FormKind::RZeroed => match ortho_structure(&rt) {
            OrthoStructure::DistinctReal { phi1, .. } => Ok(phi1.value()),
            _ => Err(Error::FormInapplicable(
                "R-zeroed form needs two distinct real orthovalues".into(),
            )),
        },
        FormKind::TZeroed => match eigen_structure(&rt) {
            EigenStructure::DistinctReal { theta2, .. } => Ok(theta2.value()),
            _ => Err(Error::FormInapplicable(
                "T-zeroed form needs two distinct real eigenvalues".into(),
            )),
        },
    }
}

pub fn to_form(a: &Mat2, kind: FormKind) -> Result<StandardFormResult> {
    let gamma = form_angle(a, kind)?;
    Ok(conjugated(a, kind, gamma))
}

pub fn to_r_centered(a: &Mat2) -> Result<StandardFormResult> {
    to_form(a, FormKind::RCentered)
}

pub fn to_t_centered(a: &Mat2) -> Result<StandardFormResult> {
    to_form(a, FormKind::TCentered)
}

pub fn to_r_zeroed(a: &Mat2) -> Result<StandardFormResult> {
    to_form(a, FormKind::RZeroed)
}

pub fn to_t_zeroed(a: &Mat2) -> Result<StandardFormResult> {
    to_form(a, FormKind::TZeroed)
}

/// Closed-form template of a standard form built from the invariants of `a`.
pub fn template(a: &Mat2, kind: FormKind) -> Result<Mat2> {
    let rt = decompose(a)?;
    let (m_r, m_t) = (rt.m_r(), rt.m_t());
    // applicability is shared with to_form
    form_angle(a, kind)?;
    Ok(match kind {
        FormKind::RCentered => Mat2::new(rt.rho1(), -m_t, m_t, rt.rho2()),
        FormKind::TCentered => Mat2::new(m_r, -rt.tau2(), rt.tau1(), m_r),
        FormKind::RZeroed => match ortho_structure(&rt) {
            OrthoStructure::DistinctReal { mu1, mu2, .. } => Mat2::new(0.0, -mu2, mu1, 2.0 * m_r),
            _ => unreachable!(),
        },
        FormKind::TZeroed => match eigen_structure(&rt) {
            EigenStructure::DistinctReal {
                lambda1, lambda2, ..
            } => Mat2::new(lambda2, -2.0 * m_t, 0.0, lambda1),
            _ => unreachable!(),
        },
    })
}

/// Does `a` already satisfy the defining condition of `kind`?
///
/// Zeroed forms also require the rising-zero orientation:
/// `R'(0) = a12 + a21 >= 0` and `T'(0) = a22 - a11 >= 0`.
pub fn verify_form(a: &Mat2, kind: FormKind) -> bool {
    let Ok(rt) = decompose(a) else {
        return false;
    };
    let tol = 1e-9 * (1.0 + a.max_abs());
    match kind {
        FormKind::RCentered => (a.a11 - rt.rho1()).abs() <= tol,
        FormKind::TCentered => (a.a21 - rt.tau1()).abs() <= tol,
        FormKind::RZeroed => a.a11.abs() <= tol && a.a12 + a.a21 >= -tol,
        FormKind::TZeroed => a.a21.abs() <= tol && a.a22 - a.a11 >= -tol,
    }
}
