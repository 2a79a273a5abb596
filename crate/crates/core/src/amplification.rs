//! Maximal amplification of a reactive attractor.
//!
//! The largest growth factor is reached by the trajectory that enters the
//! reactive arc at one orthovector and leaves at the other, so
//! `ln rho_max = integral of R/T over the arc`. Three closed forms of that
//! integral are evaluated and cross-checked; the polar integrator is an
//! independent oracle that also yields `t_max`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::AngleModPi;
use crate::dynamics::{default_step, polar_step};
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::rt::{decompose, reflect_conjugate, RTParams};
use crate::spectra::{
    eigen_structure, ortho_structure, transient_summary, Classification, EigenStructure,
    OrthoStructure,
};

/// Relative agreement required between the closed forms.
pub const CLOSED_FORM_REL_TOL: f64 = 1e-9;
/// Relative agreement required between the experimental complex formula and
/// the numeric oracle.
pub const EXPERIMENTAL_REL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmpMethod {
    ClosedLambdaMu,
    ClosedMs,
    ClosedDeltas,
    #[serde(rename = "numeric")]
    NumericSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplificationResult {
    pub rho_max: f64,
    pub t_max: Option<f64>,
    pub theta_entry: Option<AngleModPi>,
    pub method: AmpMethod,
}

/// What to do when the eigenvalues are complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexPolicy {
    /// Refuse with [`Error::NeedsNumeric`].
    Strict,
    /// Use the numeric oracle.
    #[default]
    Numeric,
    /// Evaluate the m/p form with imaginary `p_R` and check it against the
    /// oracle.
    Experimental,
}

/// The three closed forms evaluated on the same matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForms {
    pub lambda_mu: f64,
    pub ms: f64,
    /// Only for distinct real eigenvalues.
    pub deltas: Option<f64>,
}

fn require_reactive_attractor(rt: &RTParams) -> Result<()> {
    let class = transient_summary(rt).classification;
    if class == Classification::ReactiveAttractor {
        Ok(())
    } else {
        Err(Error::NotReactiveAttractor(class))
    }
}

/// Decompose and reflect so that `m_T >= 0`; norms of solutions are unchanged.
fn canonical_rt(a: &Mat2) -> Result<RTParams> {
    let rt = decompose(a)?;
    require_reactive_attractor(&rt)?;
    if rt.m_t() < 0.0 {
        decompose(&reflect_conjugate(a))
    } else {
        Ok(rt)
    }
}

fn ortho_values(rt: &RTParams) -> Result<(f64, f64, f64, f64)> {
    match ortho_structure(rt) {
        OrthoStructure::DistinctReal {
            mu1,
            mu2,
            delta_r,
            p_t,
            ..
        } => Ok((mu1, mu2, delta_r, p_t)),
        other => Err(Error::Inapplicable(format!(
            "amplification needs distinct real orthovalues, got {other:?}"
        ))),
    }
}

fn finite_positive(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::numeric(format!("{what} evaluated to {v}")))
    }
}

/// Evaluate every applicable closed form. Needs real eigenvalues.
pub fn closed_forms(a: &Mat2) -> Result<ClosedForms> {
    let rt = canonical_rt(a)?;
    let (mu1, mu2, delta_r, p_t) = ortho_values(&rt)?;
    let (m_r, m_t) = (rt.m_r(), rt.m_t());
    match eigen_structure(&rt) {
        EigenStructure::DistinctReal {
            lambda1,
            lambda2,
            delta_t,
            p_r,
            ..
        } => {
            // eigenvalue/orthovalue form
            let ratio = (lambda1 * mu2 + lambda2 * mu1) / (lambda1 * mu1 + lambda2 * mu2);
            let expo = (lambda1 + lambda2) / (lambda1 - lambda2);
            let lambda_mu = (0.5 * (expo * ratio.ln() + (mu1 / mu2).ln())).exp();

            // midline/amplitude form, logs written as atanh for accuracy
            let ms = (m_r / p_r * (p_r * p_t / (-m_r * m_t)).atanh() + (p_t / m_t).atanh()).exp();

            let (r2, t2) = (2.0 * delta_r, 2.0 * delta_t);
            let base = (r2 + t2).cos() / (r2 - t2).cos();
            let expo = -r2.cos() / t2.sin();
            let tail = (t2.cos() - r2.sin()) / (t2.cos() + r2.sin());
            let deltas = (0.5 * (expo * base.ln() + tail.ln())).exp();

            Ok(ClosedForms {
                lambda_mu: finite_positive(lambda_mu, "eigen/orthovalue form")?,
                ms: finite_positive(ms, "midline/amplitude form")?,
                deltas: Some(finite_positive(deltas, "separation form")?),
            })
        }
        EigenStructure::RepeatedDefective { .. } => {
            // p_R -> 0 limit: (m_R/p_R) atanh(p_R p_T / (-m_R m_T)) -> -p_T/m_T
            let v = (-p_t / m_t + (p_t / m_t).atanh()).exp();
            let v = finite_positive(v, "defective limit")?;
            Ok(ClosedForms {
                lambda_mu: v,
                ms: v,
                deltas: None,
            })
        }
        EigenStructure::ComplexPair { .. } => Err(Error::NeedsNumeric),
        EigenStructure::RepeatedFull { .. } => Err(Error::Inapplicable(
            "scalar matrices have no reactive arc".into(),
        )),
    }
}

/// Midline/amplitude form continued to imaginary `p_R = i q`.
///
/// `(m_R/p_R) atanh(p_R x)` becomes `(m_R/q) atan(q x)` on the principal
/// branch. Not established in general, hence the oracle check in
/// [`rho_max_closed`].
pub fn complex_closed_form(a: &Mat2) -> Result<f64> {
    let rt = canonical_rt(a)?;
    let (_, _, _, p_t) = ortho_values(&rt)?;
    let q = match eigen_structure(&rt) {
        EigenStructure::ComplexPair { im, .. } => im,
        _ => return Err(Error::Inapplicable("eigenvalues are real".into())),
    };
    let (m_r, m_t) = (rt.m_r(), rt.m_t());
    let v = (m_r / q * (q * p_t / (-m_r * m_t)).atan() + (p_t / m_t).atanh()).exp();
    finite_positive(v, "complex continuation")
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Exact maximal amplification.
///
/// Real eigenvalues: the eigen/orthovalue form, after checking it against the
/// other forms. Complex eigenvalues follow `policy`.
pub fn rho_max_closed(a: &Mat2, policy: ComplexPolicy) -> Result<AmplificationResult> {
    match closed_forms(a) {
        Ok(f) => {
            let mut worst = rel_diff(f.lambda_mu, f.ms);
            if let Some(d) = f.deltas {
                worst = worst.max(rel_diff(f.lambda_mu, d));
            }
            if worst > CLOSED_FORM_REL_TOL {
                return Err(Error::numeric(format!(
                    "closed forms disagree (relative gap {worst:.3e})"
                )));
            }
            let method = if f.deltas.is_some() {
                AmpMethod::ClosedLambdaMu
            } else {
                AmpMethod::ClosedMs
            };
            Ok(AmplificationResult {
                rho_max: f.lambda_mu,
                t_max: None,
                theta_entry: None,
                method,
            })
        }
        Err(Error::NeedsNumeric) => match policy {
            ComplexPolicy::Strict => Err(Error::NeedsNumeric),
            ComplexPolicy::Numeric => rho_max_numeric(a, &NumericOptions::default()),
            ComplexPolicy::Experimental => {
                let closed = complex_closed_form(a)?;
                let numeric = rho_max_numeric(a, &NumericOptions::default())?;
                let gap = rel_diff(closed, numeric.rho_max);
                if gap > EXPERIMENTAL_REL_TOL {
                    return Err(Error::numeric(format!(
                        "complex closed form {closed} disagrees with oracle {} (relative gap {gap:.3e})",
                        numeric.rho_max
                    )));
                }
                Ok(AmplificationResult {
                    rho_max: closed,
                    t_max: numeric.t_max,
                    theta_entry: numeric.theta_entry,
                    method: AmpMethod::ClosedMs,
                })
            }
        },
        Err(e) => Err(e),
    }
}

/// Upper bound `1/cos(2 delta_R) = -p/m_R`.
pub fn rho_max_bound_ortho(a: &Mat2) -> Result<f64> {
    let rt = decompose(a)?;
    require_reactive_attractor(&rt)?;
    Ok(-rt.p() / rt.m_r())
}

/// Weaker upper bound `1/sin(2 delta_T) = p/p_R`; distinct real eigenvalues only.
pub fn rho_max_bound_eigen(a: &Mat2) -> Result<f64> {
    let rt = decompose(a)?;
    require_reactive_attractor(&rt)?;
    match eigen_structure(&rt) {
        EigenStructure::DistinctReal { p_r, .. } => Ok(rt.p() / p_r),
        other => Err(Error::Inapplicable(format!(
            "eigenvector bound needs distinct real eigenvalues, got {other:?}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericOptions {
    /// RK4 step; `None` picks `1e-4` over the fastest rate.
    pub step: Option<f64>,
    /// Cap on RK4 steps along the main trajectory.
    pub max_steps: usize,
    /// Initial angles in the safety-net sweep (complex eigenvalues only).
    pub sweep_angles: usize,
    /// Sweep step as a multiple of the main step.
    pub sweep_step_factor: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            step: None,
            max_steps: 50_000_000,
            sweep_angles: 360,
            sweep_step_factor: 10.0,
        }
    }
}

/// Bisect the sub-step length at which `theta` reaches `target`.
fn refine_crossing(rt: &RTParams, u: f64, theta: f64, h: f64, target: f64, dir: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0, h);
    let (mut u_hit, mut th_hit) = polar_step(rt, u, theta, h);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (um, tm) = polar_step(rt, u, theta, mid);
        let g = dir * (tm - target);
        if g >= 0.0 {
            hi = mid;
            (u_hit, th_hit) = (um, tm);
        } else {
            lo = mid;
        }
        if (th_hit - target).abs() <= 1e-12 || hi - lo <= f64::EPSILON * h {
            break;
        }
    }
    (hi, u_hit)
}

/// Largest `ln r` over roughly two half-turns from each of `n` initial angles.
fn sweep_peak(rt: &RTParams, n: usize, step: f64, dir: f64) -> (f64, f64) {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let theta0 = PI * i as f64 / n as f64;
            let (mut u, mut theta, mut best) = (0.0_f64, theta0, 0.0_f64);
            // two passes through the pi-periodic reactive arc
            while dir * (theta - theta0) < 2.0 * PI {
                (u, theta) = polar_step(rt, u, theta, step);
                best = best.max(u);
            }
            (best, theta0)
        })
        .reduce(|| (f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a })
}

/// Maximal amplification by integrating the polar system from the entrance
/// orthovector with `r = 1` until `r` stops setting new per-pass peaks.
pub fn rho_max_numeric(a: &Mat2, opts: &NumericOptions) -> Result<AmplificationResult> {
    let rt = decompose(a)?;
    require_reactive_attractor(&rt)?;
    let (start, end) = match ortho_structure(&rt) {
        OrthoStructure::DistinctReal { phi1, delta_r, .. } => {
            (phi1.value(), phi1.value() + 2.0 * delta_r)
        }
        other => {
            return Err(Error::Inapplicable(format!(
                "numeric amplification needs a reactive arc, got {other:?}"
            )))
        }
    };
    let step = opts.step.unwrap_or_else(|| default_step(&rt));
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    let complex = matches!(eigen_structure(&rt), EigenStructure::ComplexPair { .. });
    // T keeps the sign of m_T across the arc, so that fixes the direction
    let dir = rt.m_t().signum();
    let entry = if dir > 0.0 { start } else { end };
    let mut exit = entry + dir * (end - start);

    let (mut u, mut theta, mut t) = (0.0_f64, entry, 0.0_f64);
    let mut best: Option<(f64, f64)> = None;
    let mut steps = 0usize;
    loop {
        if steps >= opts.max_steps {
            return Err(Error::numeric(format!(
                "amplification sweep hit the step cap ({}) at t = {t}",
                opts.max_steps
            )));
        }
        let (un, thn) = polar_step(&rt, u, theta, step);
        steps += 1;
        if dir * (thn - exit) >= 0.0 {
            let (dt, u_exit) = refine_crossing(&rt, u, theta, step, exit, dir);
            let peak = (u_exit, t + dt);
            match best {
                Some((prev, _)) if peak.0 <= prev => break,
                _ => best = Some(peak),
            }
            if !complex {
                break;
            }
            // next pass through the arc, half a turn later
            exit += dir * PI;
        }
        (u, theta) = (un, thn);
        t += step;
    }
    let (mut log_peak, t_max) = best.expect("loop exits only after a recorded pass");
    let mut theta_entry = AngleModPi::new(entry);
    let mut t_max = Some(t_max);
    if complex && opts.sweep_angles > 0 {
        let (sweep, theta0) = sweep_peak(&rt, opts.sweep_angles, step * opts.sweep_step_factor, dir);
        if sweep > log_peak {
            log_peak = sweep;
            theta_entry = AngleModPi::new(theta0);
            t_max = None;
        }
    }
    Ok(AmplificationResult {
        rho_max: log_peak.exp(),
        t_max,
        theta_entry: Some(theta_entry),
        method: AmpMethod::NumericSweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Mat2 {
        Mat2::new(-1.0, -8.0, 0.0, -3.0)
    }

    #[test]
    fn reference_closed_value() {
        let r = rho_max_closed(&reference(), ComplexPolicy::Strict).unwrap();
        assert_eq!(r.method, AmpMethod::ClosedLambdaMu);
        // hand evaluation of the eigen/orthovalue form
        let s = 13f64.sqrt();
        let (m1, m2) = (4.0 + s, 4.0 - s);
        let ratio: f64 = (-m2 - 3.0 * m1) / (-m1 - 3.0 * m2);
        let hand = (ratio.powi(-2) * m1 / m2).sqrt();
        assert!((r.rho_max - hand).abs() < 1e-12);
        assert!((r.rho_max - 1.6627).abs() < 1e-4);
    }

    #[test]
    fn reflection_invariant() {
        let a = rho_max_closed(&reference(), ComplexPolicy::Strict).unwrap().rho_max;
        let b = rho_max_closed(&Mat2::new(-1.0, 8.0, 0.0, -3.0), ComplexPolicy::Strict)
            .unwrap()
            .rho_max;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn second_example_against_hand_formula() {
        let a = Mat2::new(-1.0, -5.0, 0.0, -3.0);
        let r = rho_max_closed(&a, ComplexPolicy::Strict).unwrap().rho_max;
        // p_T = sqrt(29/4 - 4)
        let pt = 3.25_f64.sqrt();
        let (l1, l2, m1, m2) = (-1.0_f64, -3.0_f64, 2.5 + pt, 2.5 - pt);
        let ratio = (l1 * m2 + l2 * m1) / (l1 * m1 + l2 * m2);
        let hand = (ratio.powf((l1 + l2) / (l1 - l2)) * m1 / m2).sqrt();
        assert!((r - hand).abs() < 1e-12);
        let n = rho_max_numeric(&a, &NumericOptions::default()).unwrap();
        assert!((n.rho_max - r).abs() / r < 1e-3);
    }

    #[test]
    fn numeric_matches_closed_on_reference() {
        let closed = rho_max_closed(&reference(), ComplexPolicy::Strict).unwrap().rho_max;
        let n = rho_max_numeric(&reference(), &NumericOptions::default()).unwrap();
        assert!((n.rho_max - closed).abs() / closed < 1e-6, "{} vs {closed}", n.rho_max);
        assert!(n.t_max.unwrap() > 0.0);
        assert_eq!(n.method, AmpMethod::NumericSweep);
    }

    #[test]
    fn bounds() {
        let s = 17f64.sqrt();
        assert!((rho_max_bound_ortho(&reference()).unwrap() - s / 2.0).abs() < 1e-12);
        assert!((rho_max_bound_eigen(&reference()).unwrap() - s).abs() < 1e-12);
        let b = rho_max_bound_eigen(&Mat2::new(-1.0, -5.0, 0.0, -3.0)).unwrap();
        assert!((b - 29f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(matches!(
            rho_max_bound_ortho(&Mat2::new(-1.0, 2.0, 2.0, -1.0)),
            Err(Error::NotReactiveAttractor(Classification::Saddle))
        ));
    }

    #[test]
    fn non_reactive_rejected() {
        let a = Mat2::new(-3.0, 0.1, 0.0, -3.0);
        assert!(matches!(
            rho_max_numeric(&a, &NumericOptions::default()),
            Err(Error::NotReactiveAttractor(Classification::NonreactiveAttractor))
        ));
        assert!(rho_max_closed(&a, ComplexPolicy::Numeric).is_err());
    }

    #[test]
    fn spiral_policies() {
        let a = Mat2::new(0.7, -4.0, 4.0, -4.7);
        assert_eq!(rho_max_closed(&a, ComplexPolicy::Strict), Err(Error::NeedsNumeric));
        let n = rho_max_closed(&a, ComplexPolicy::Numeric).unwrap();
        assert_eq!(n.method, AmpMethod::NumericSweep);
        assert!(n.rho_max >= 1.0 && n.rho_max.is_finite());
        let e = rho_max_closed(&a, ComplexPolicy::Experimental).unwrap();
        assert!((e.rho_max - n.rho_max).abs() / n.rho_max < 1e-3);
    }

    #[test]
    fn defective_limit_matches_numeric() {
        let a = crate::synthesis::attractor_with_eigenvalues(-1.0, -1.0, 2.0).unwrap();
        let c = rho_max_closed(&a, ComplexPolicy::Strict).unwrap();
        assert_eq!(c.method, AmpMethod::ClosedMs);
        let n = rho_max_numeric(&a, &NumericOptions::default()).unwrap();
        assert!((c.rho_max - n.rho_max).abs() / c.rho_max < 1e-3);
    }
}
