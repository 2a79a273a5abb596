//! Eigen- and ortho-structure read off the radial/tangential sinusoids.
//!
//! Eigendirections are the zeros of `T` (eigenvalue `R` there); orthovectors,
//! where `A V` is a multiple of `V^perp`, are the zeros of `R` (orthovalue `T`
//! there). Each structure splits into four cases by comparing the amplitude
//! `p` with `|m_T|` (eigen) or `|m_R|` (ortho).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::angle::AngleModPi;
use crate::rt::RTParams;

/// Relative band used for every case boundary (`p` vs `|m|`, zero eigenvalue).
pub const DEGENERACY_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EigenStructure {
    DistinctReal {
        lambda1: f64,
        lambda2: f64,
        theta1: AngleModPi,
        theta2: AngleModPi,
        delta_t: f64,
        p_r: f64,
    },
    ComplexPair {
        re: f64,
        im: f64,
    },
    /// Every vector is an eigenvector.
    RepeatedFull {
        lambda: f64,
    },
    /// One eigendirection only.
    RepeatedDefective {
        lambda: f64,
        theta0: AngleModPi,
    },
}

impl EigenStructure {
    /// `(lambda1, lambda2)` when both are real, `lambda1 >= lambda2`.
    pub fn real_eigenvalues(&self) -> Option<(f64, f64)> {
        match *self {
            EigenStructure::DistinctReal {
                lambda1, lambda2, ..
            } => Some((lambda1, lambda2)),
            EigenStructure::RepeatedFull { lambda }
            | EigenStructure::RepeatedDefective { lambda, .. } => Some((lambda, lambda)),
            EigenStructure::ComplexPair { .. } => None,
        }
    }

    /// Real parts of the two eigenvalues, larger first.
    pub fn real_parts(&self) -> (f64, f64) {
        match *self {
            EigenStructure::ComplexPair { re, .. } => (re, re),
            _ => self.real_eigenvalues().unwrap(),
        }
    }

    pub fn is_distinct_real(&self) -> bool {
        matches!(self, EigenStructure::DistinctReal { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrthoStructure {
    DistinctReal {
        mu1: f64,
        mu2: f64,
        phi1: AngleModPi,
        phi2: AngleModPi,
        delta_r: f64,
        p_t: f64,
    },
    /// `R` is single-signed.
    NoReal,
    /// `R` vanishes identically.
    AllOrtho {
        mu: f64,
    },
    RepeatedOrtho {
        mu: f64,
        phi0: AngleModPi,
    },
}

impl OrthoStructure {
    pub fn is_distinct_real(&self) -> bool {
        matches!(self, OrthoStructure::DistinctReal { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ReactiveAttractor,
    NonreactiveAttractor,
    AttenuatingRepeller,
    NonattenuatingRepeller,
    Saddle,
    Center,
    CircularCenter,
    Degenerate,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::ReactiveAttractor => "reactive_attractor",
            Classification::NonreactiveAttractor => "nonreactive_attractor",
            Classification::AttenuatingRepeller => "attenuating_repeller",
            Classification::NonattenuatingRepeller => "nonattenuating_repeller",
            Classification::Saddle => "saddle",
            Classification::Center => "center",
            Classification::CircularCenter => "circular_center",
            Classification::Degenerate => "degenerate",
        }
    }
}

/// Angles where `R > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReactiveSet {
    Empty,
    /// Open arc `(start, end)`; `start` in `[0, pi)`, `end` may exceed `pi`
    /// so the arc stays contiguous.
    Arc { start: f64, end: f64 },
    Full,
    /// Everything except a single direction where `R` touches zero.
    AllBut { excluded: AngleModPi },
}

impl ReactiveSet {
    pub fn contains(&self, theta: f64) -> bool {
        match *self {
            ReactiveSet::Empty => false,
            ReactiveSet::Full => true,
            ReactiveSet::AllBut { excluded } => AngleModPi::new(theta).dist(excluded) > 0.0,
            ReactiveSet::Arc { start, end } => {
                let rel = AngleModPi::new(theta - start).value();
                rel > 0.0 && rel < end - start
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransientSummary {
    pub rho1: f64,
    pub rho2: f64,
    pub reactive_set: ReactiveSet,
    pub classification: Classification,
    pub is_reactive: bool,
    pub is_attenuating: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularStability {
    Attracting,
    Repelling,
    SemiStable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularEquilibrium {
    pub angle: AngleModPi,
    pub stability: AngularStability,
}

/// Equilibria of `dtheta/dt = T(theta)` on `[0, pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularPhaseLine {
    pub equilibria: Vec<AngularEquilibrium>,
    /// `T` vanishes identically: every direction is fixed.
    pub every_angle_fixed: bool,
}

fn tol(p: f64, mid: f64) -> f64 {
    DEGENERACY_REL_TOL * (1.0 + p + mid.abs())
}

/// `sqrt(a^2 - b^2)` without squaring first.
fn sqrt_diff_sq(a: f64, b: f64) -> f64 {
    ((a - b) * (a + b)).max(0.0).sqrt()
}

/// Which of the four structural cases `p` vs `|mid|` falls into.
enum Split {
    Distinct,
    None,
    RepeatedAll,
    RepeatedOne,
}

fn split(p: f64, mid: f64) -> Split {
    let t = tol(p, mid);
    if (p - mid.abs()).abs() <= t {
        if p <= t {
            Split::RepeatedAll
        } else {
            Split::RepeatedOne
        }
    } else if p > mid.abs() {
        Split::Distinct
    } else {
        Split::None
    }
}

pub fn eigen_structure(rt: &RTParams) -> EigenStructure {
    let (m_r, m_t, p) = (rt.m_r(), rt.m_t(), rt.p());
    match split(p, m_t) {
        Split::RepeatedAll => EigenStructure::RepeatedFull { lambda: m_r },
        Split::RepeatedOne => {
            let theta_t = rt.theta_t().expect("p > 0 in defective case").value();
            // delta_T collapses to 0 (m_T < 0) or pi/2 (m_T > 0)
            let delta = if m_t > 0.0 { FRAC_PI_2 } else { 0.0 };
            EigenStructure::RepeatedDefective {
                lambda: m_r,
                theta0: AngleModPi::new(theta_t + delta),
            }
        }
        Split::Distinct => {
            let theta_t = rt.theta_t().expect("p > 0 in distinct case").value();
            let p_r = sqrt_diff_sq(p, m_t.abs());
            let delta_t = 0.5 * p_r.atan2(-m_t);
            EigenStructure::DistinctReal {
                lambda1: m_r + p_r,
                lambda2: m_r - p_r,
                theta1: AngleModPi::new(theta_t + delta_t),
                theta2: AngleModPi::new(theta_t - delta_t),
                delta_t,
                p_r,
            }
        }
        Split::None => EigenStructure::ComplexPair {
            re: m_r,
            im: sqrt_diff_sq(m_t.abs(), p),
        },
    }
}

pub fn ortho_structure(rt: &RTParams) -> OrthoStructure {
    let (m_r, m_t, p) = (rt.m_r(), rt.m_t(), rt.p());
    match split(p, m_r) {
        Split::RepeatedAll => OrthoStructure::AllOrtho { mu: m_t },
        Split::RepeatedOne => {
            let theta_r = rt.theta_r().expect("p > 0 in repeated case").value();
            let delta = if m_r > 0.0 { FRAC_PI_2 } else { 0.0 };
            OrthoStructure::RepeatedOrtho {
                mu: m_t,
                phi0: AngleModPi::new(theta_r + delta),
            }
        }
        Split::Distinct => {
            let theta_r = rt.theta_r().expect("p > 0 in distinct case").value();
            let p_t = sqrt_diff_sq(p, m_r.abs());
            let delta_r = 0.5 * p_t.atan2(-m_r);
            OrthoStructure::DistinctReal {
                mu1: m_t + p_t,
                mu2: m_t - p_t,
                phi1: AngleModPi::new(theta_r - delta_r),
                phi2: AngleModPi::new(theta_r + delta_r),
                delta_r,
                p_t,
            }
        }
        Split::None => OrthoStructure::NoReal,
    }
}

fn reactive_set(rt: &RTParams, ortho: &OrthoStructure, is_reactive: bool) -> ReactiveSet {
    match *ortho {
        OrthoStructure::DistinctReal { phi1, delta_r, .. } => ReactiveSet::Arc {
            start: phi1.value(),
            end: phi1.value() + 2.0 * delta_r,
        },
        OrthoStructure::RepeatedOrtho { phi0, .. } if rt.m_r() > 0.0 => {
            ReactiveSet::AllBut { excluded: phi0 }
        }
        OrthoStructure::NoReal if is_reactive => ReactiveSet::Full,
        _ => ReactiveSet::Empty,
    }
}

fn classify(rt: &RTParams, eigen: &EigenStructure, ortho: &OrthoStructure, reactive: bool, attenuating: bool) -> Classification {
    let zero = DEGENERACY_REL_TOL * (1.0 + rt.p() + rt.m_r().abs() + rt.m_t().abs());
    if let OrthoStructure::AllOrtho { mu } = *ortho {
        return if mu.abs() > zero {
            Classification::CircularCenter
        } else {
            Classification::Degenerate
        };
    }
    let (hi, lo) = match *eigen {
        EigenStructure::ComplexPair { re, .. } if re.abs() <= zero => {
            return Classification::Center;
        }
        _ => eigen.real_parts(),
    };
    if hi.abs() <= zero || lo.abs() <= zero {
        Classification::Degenerate
    } else if hi < 0.0 {
        if reactive {
            Classification::ReactiveAttractor
        } else {
            Classification::NonreactiveAttractor
        }
    } else if lo > 0.0 {
        if attenuating {
            Classification::AttenuatingRepeller
        } else {
            Classification::NonattenuatingRepeller
        }
    } else {
        Classification::Saddle
    }
}

pub fn transient_summary(rt: &RTParams) -> TransientSummary {
    let eigen = eigen_structure(rt);
    let ortho = ortho_structure(rt);
    let t = tol(rt.p(), rt.m_r());
    let is_reactive = rt.rho1() > t;
    let is_attenuating = rt.rho2() < -t;
    TransientSummary {
        rho1: rt.rho1(),
        rho2: rt.rho2(),
        reactive_set: reactive_set(rt, &ortho, is_reactive),
        classification: classify(rt, &eigen, &ortho, is_reactive, is_attenuating),
        is_reactive,
        is_attenuating,
    }
}

pub fn angular_phase_line(rt: &RTParams) -> AngularPhaseLine {
    let eq = |angle, stability| AngularEquilibrium { angle, stability };
    match eigen_structure(rt) {
        EigenStructure::DistinctReal { theta1, theta2, .. } => AngularPhaseLine {
            equilibria: vec![
                eq(theta1, AngularStability::Attracting),
                eq(theta2, AngularStability::Repelling),
            ],
            every_angle_fixed: false,
        },
        EigenStructure::RepeatedDefective { theta0, .. } => AngularPhaseLine {
            equilibria: vec![eq(theta0, AngularStability::SemiStable)],
            every_angle_fixed: false,
        },
        EigenStructure::RepeatedFull { .. } => AngularPhaseLine {
            equilibria: Vec::new(),
            every_angle_fixed: true,
        },
        EigenStructure::ComplexPair { .. } => AngularPhaseLine {
            equilibria: Vec::new(),
            every_angle_fixed: false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat2;
    use crate::rt::decompose;

    fn rt(a11: f64, a12: f64, a21: f64, a22: f64) -> RTParams {
        decompose(&Mat2::new(a11, a12, a21, a22)).unwrap()
    }

    #[test]
    fn saddle_eigenvalues() {
        match eigen_structure(&rt(-2.0, 1.0, 2.0, 1.0)) {
            EigenStructure::DistinctReal {
                lambda1, lambda2, ..
            } => {
                let s = 17f64.sqrt();
                assert!((lambda1 - (-1.0 + s) / 2.0).abs() < 1e-14);
                assert!((lambda2 - (-1.0 - s) / 2.0).abs() < 1e-14);
            }
            other => panic!("expected distinct real, got {other:?}"),
        }
    }

    #[test]
    fn spiral_is_complex_pair() {
        match eigen_structure(&rt(0.7, -4.0, 4.0, -4.7)) {
            EigenStructure::ComplexPair { re, im } => {
                assert!((re + 2.0).abs() < 1e-15);
                assert!((im - (6.7f64 * 1.3).sqrt()).abs() < 1e-14);
            }
            other => panic!("expected complex pair, got {other:?}"),
        }
    }

    #[test]
    fn scalar_matrix_is_repeated_full() {
        assert_eq!(
            eigen_structure(&rt(-2.5, 0.0, 0.0, -2.5)),
            EigenStructure::RepeatedFull { lambda: -2.5 }
        );
    }

    #[test]
    fn jordan_block_is_defective() {
        // [[l, 1], [0, l]] has the x-axis as its only eigendirection
        match eigen_structure(&rt(-1.0, 1.0, 0.0, -1.0)) {
            EigenStructure::RepeatedDefective { lambda, theta0 } => {
                assert_eq!(lambda, -1.0);
                assert!(theta0.dist(AngleModPi::new(0.0)) < 1e-12);
            }
            other => panic!("expected defective, got {other:?}"),
        }
        match eigen_structure(&rt(2.0, 0.0, 1.0, 2.0)) {
            EigenStructure::RepeatedDefective { theta0, .. } => {
                assert!(theta0.dist(AngleModPi::new(FRAC_PI_2)) < 1e-12);
            }
            other => panic!("expected defective, got {other:?}"),
        }
    }

    #[test]
    fn ortho_examples() {
        match ortho_structure(&rt(-1.0, -8.0, 0.0, -3.0)) {
            OrthoStructure::DistinctReal {
                mu1, mu2, delta_r, ..
            } => {
                assert!((mu1 - (4.0 + 13f64.sqrt())).abs() < 1e-14);
                assert!((mu2 - (4.0 - 13f64.sqrt())).abs() < 1e-14);
                // hand value: 0.5 * atan2(sqrt(13), 2)
                assert!((delta_r - 0.5 * 13f64.sqrt().atan2(2.0)).abs() < 1e-15);
                assert!((delta_r - 0.5321).abs() < 1e-4);
            }
            other => panic!("{other:?}"),
        }
        match ortho_structure(&rt(0.7, -4.0, 4.0, -4.7)) {
            OrthoStructure::DistinctReal { mu1, mu2, .. } => {
                assert!((mu1 - 5.814).abs() < 1e-3);
                assert!((mu2 - 2.186).abs() < 1e-3);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            ortho_structure(&rt(0.0, -1.0, 1.0, 0.0)),
            OrthoStructure::AllOrtho { mu: 1.0 }
        );
        assert_eq!(ortho_structure(&rt(-3.0, 0.1, 0.0, -3.0)), OrthoStructure::NoReal);
    }

    #[test]
    fn repeated_ortho_at_theta_r_when_attracting() {
        // m_R = -1, p = 1: R touches zero at its maximum
        let a = Mat2::new(0.0, 0.0, 0.0, -2.0);
        match ortho_structure(&decompose(&a).unwrap()) {
            OrthoStructure::RepeatedOrtho { mu, phi0 } => {
                assert_eq!(mu, 0.0);
                assert!(phi0.dist(AngleModPi::new(0.0)) < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn summaries() {
        let s = transient_summary(&rt(-1.0, -8.0, 0.0, -3.0));
        assert_eq!(s.classification, Classification::ReactiveAttractor);
        assert!((s.rho1 - (-2.0 + 17f64.sqrt())).abs() < 1e-14);
        assert!((s.rho2 - (-2.0 - 17f64.sqrt())).abs() < 1e-14);
        assert!(matches!(s.reactive_set, ReactiveSet::Arc { .. }));

        let saddle = transient_summary(&rt(-2.0, 1.0, 2.0, 1.0));
        assert_eq!(saddle.classification, Classification::Saddle);
        assert!(saddle.is_reactive && saddle.is_attenuating);

        let sym = transient_summary(&rt(-1.0, 2.0, 2.0, -1.0));
        assert_eq!(sym.rho1, 1.0);
        assert_eq!(sym.classification, Classification::Saddle);

        let id = transient_summary(&rt(1.0, 0.0, 0.0, 1.0));
        assert_eq!(id.classification, Classification::NonattenuatingRepeller);
        assert_eq!(id.reactive_set, ReactiveSet::Full);

        let j = transient_summary(&rt(0.0, -1.0, 1.0, 0.0));
        assert_eq!(j.classification, Classification::CircularCenter);
        assert_eq!(j.reactive_set, ReactiveSet::Empty);

        let center = transient_summary(&rt(1.0, -5.0, 2.0, -1.0));
        assert_eq!(center.classification, Classification::Center);

        let nonreactive = transient_summary(&rt(-3.0, 0.1, 0.0, -3.0));
        assert_eq!(nonreactive.classification, Classification::NonreactiveAttractor);
        assert_eq!(nonreactive.reactive_set, ReactiveSet::Empty);

        let zero_eig = transient_summary(&rt(1.0, 0.0, 0.0, 0.0));
        assert_eq!(zero_eig.classification, Classification::Degenerate);

        let repeller = transient_summary(&rt(1.0, 8.0, 0.0, 3.0));
        assert_eq!(repeller.classification, Classification::AttenuatingRepeller);
    }

    #[test]
    fn reactive_arc_contains_theta_r() {
        let r = rt(-1.0, -8.0, 0.0, -3.0);
        let s = transient_summary(&r);
        let th = r.theta_r().unwrap().value();
        assert!(s.reactive_set.contains(th));
        assert!(!s.reactive_set.contains(th + FRAC_PI_2));
        if let ReactiveSet::Arc { start, end } = s.reactive_set {
            assert!(r.radial(start).abs() < 1e-12);
            assert!(r.radial(end).abs() < 1e-12);
            assert!(end > start);
        }
    }

    #[test]
    fn phase_lines() {
        let r = rt(-2.0, 1.0, 2.0, 1.0);
        let line = angular_phase_line(&r);
        assert_eq!(line.equilibria.len(), 2);
        let attracting = line.equilibria[0];
        assert_eq!(attracting.stability, AngularStability::Attracting);
        let lambda1 = (-1.0 + 17f64.sqrt()) / 2.0;
        assert!((r.radial(attracting.angle.value()) - lambda1).abs() < 1e-12);
        assert!(r.tangential_derivative(attracting.angle.value()) < 0.0);
        assert!(r.tangential_derivative(line.equilibria[1].angle.value()) > 0.0);

        assert!(angular_phase_line(&rt(0.7, -4.0, 4.0, -4.7)).equilibria.is_empty());

        let all = angular_phase_line(&rt(3.0, 0.0, 0.0, 3.0));
        assert!(all.every_angle_fixed && all.equilibria.is_empty());
    }
}
