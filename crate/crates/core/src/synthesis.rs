//! Constructing matrices with prescribed reactivity, reactivity radius and
//! eigen-data. Reactivity is unbounded for any fixed eigenvalues or any fixed
//! non-orthogonal eigendirections.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::angle::normalize_mod_pi;
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::rt::rotate_conjugate;

/// Angle pairs closer than this to parallel or orthogonal are rejected.
pub const ANGLE_SEPARATION_TOL: f64 = 1e-9;

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(msg()))
    }
}

/// T-centered matrix with reactivity radius `delta_r`, eigenvector
/// separation radius `delta_t` and reactivity `rho`.
///
/// `delta_t = 0` gives a defective repeated eigenvalue.
pub fn from_deltas(delta_r: f64, delta_t: f64, rho: f64) -> Result<Mat2> {
    require(delta_r > 0.0 && delta_r < FRAC_PI_2, || {
        format!("delta_R must lie in (0, pi/2), got {delta_r}")
    })?;
    require((0.0..FRAC_PI_2).contains(&delta_t), || {
        format!("delta_T must lie in [0, pi/2), got {delta_t}")
    })?;
    require(rho > 0.0 && rho.is_finite(), || {
        format!("reactivity must be positive, got {rho}")
    })?;
    let cr = (2.0 * delta_r).cos();
    let ct = (2.0 * delta_t).cos();
    // 1 - cos(2x) = 2 sin^2(x), exact near delta_r -> 0
    let k = rho / (2.0 * delta_r.sin().powi(2));
    Ok(Mat2::new(-k * cr, k * (1.0 + ct), k * (1.0 - ct), -k * cr))
}

/// Reactive attractor with eigenvalues `lambda1 >= lambda2` (both negative)
/// and reactivity `rho`. Arguments may be given in either order.
pub fn attractor_with_eigenvalues(lambda1: f64, lambda2: f64, rho: f64) -> Result<Mat2> {
    require(lambda1.is_finite() && lambda2.is_finite(), || {
        "eigenvalues must be finite".into()
    })?;
    let (l1, l2) = if lambda1 >= lambda2 {
        (lambda1, lambda2)
    } else {
        (lambda2, lambda1)
    };
    require(l1 < 0.0, || format!("eigenvalues must be negative, got {l1}"))?;
    require(rho > 0.0 && rho.is_finite(), || {
        format!("reactivity must be positive, got {rho}")
    })?;
    let m_r = 0.5 * (l1 + l2);
    let p = rho - m_r;
    let p_r = l1 - m_r;
    let delta_r = 0.5 * ((p - m_r.abs()) * (p + m_r.abs())).sqrt().atan2(-m_r);
    let delta_t = 0.5 * p_r.atan2(((p - p_r) * (p + p_r)).sqrt());
    from_deltas(delta_r, delta_t, rho)
}

/// Reactive attractor whose eigendirections lie at angles `theta1` and
/// `theta2` (mod pi), with reactivity `rho`.
///
/// `delta_r` defaults to the midpoint of the admissible interval
/// `(0, |delta_T - pi/4|)`.
pub fn attractor_with_eigenvectors(
    theta1: f64,
    theta2: f64,
    rho: f64,
    delta_r: Option<f64>,
) -> Result<Mat2> {
    require(theta1.is_finite() && theta2.is_finite(), || {
        "angles must be finite".into()
    })?;
    require(rho > 0.0 && rho.is_finite(), || {
        format!("reactivity must be positive, got {rho}")
    })?;
    let d = normalize_mod_pi(theta1 - theta2);
    require(
        d > ANGLE_SEPARATION_TOL && d < std::f64::consts::PI - ANGLE_SEPARATION_TOL,
        || "eigendirections are parallel".into(),
    )?;
    require((d - FRAC_PI_2).abs() > ANGLE_SEPARATION_TOL, || {
        "orthogonal eigendirections cannot form a reactive attractor".into()
    })?;
    let delta_t = 0.5 * d;
    let limit = (delta_t - FRAC_PI_4).abs();
    let delta_r = match delta_r {
        Some(v) => {
            require(v > 0.0 && v < limit, || {
                format!("delta_R must lie in (0, {limit}), got {v}")
            })?;
            v
        }
        None => 0.5 * limit,
    };
    let base = from_deltas(delta_r, delta_t, rho)?;
    // base has eigendirections at +-delta_t; shift them onto theta1, theta1 - d
    Ok(rotate_conjugate(&base, delta_t - theta1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::AngleModPi;
    use crate::rt::decompose;
    use crate::spectra::{eigen_structure, transient_summary, Classification, EigenStructure};

    #[test]
    fn lemma_example() {
        let a = from_deltas(std::f64::consts::PI / 8.0, std::f64::consts::PI / 8.0, 1.0).unwrap();
        let s = 2f64.sqrt();
        let expected = Mat2::new(-1.0 - s, 3.0 + 2.0 * s, 1.0, -1.0 - s);
        assert!(a.max_abs_diff(&expected) < 1e-12, "{a}");
    }

    #[test]
    fn delta_t_zero_is_defective() {
        let a = from_deltas(std::f64::consts::PI / 8.0, 0.0, 1.0).unwrap();
        let e = eigen_structure(&decompose(&a).unwrap());
        assert!(matches!(e, EigenStructure::RepeatedDefective { .. }), "{e:?}");
    }

    #[test]
    fn wide_reactive_arc_stays_bounded() {
        let a = from_deltas(FRAC_PI_2 - 1e-9, 0.3, 2.0).unwrap();
        assert!(a.max_abs() < 3.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(from_deltas(0.0, 0.1, 1.0).is_err());
        assert!(from_deltas(0.1, FRAC_PI_2, 1.0).is_err());
        assert!(from_deltas(0.1, 0.1, -1.0).is_err());
        assert!(attractor_with_eigenvalues(0.5, -1.0, 1.0).is_err());
        assert!(attractor_with_eigenvalues(-0.5, -1.0, 0.0).is_err());
        assert!(attractor_with_eigenvectors(FRAC_PI_2, 0.0, 1.0, None).is_err());
        assert!(attractor_with_eigenvectors(0.4, 0.4, 1.0, None).is_err());
        assert!(attractor_with_eigenvectors(0.4, 0.4 + std::f64::consts::PI, 1.0, None).is_err());
        assert!(attractor_with_eigenvectors(1.0, 0.5, 1.0, Some(1.0)).is_err());
    }

    #[test]
    fn given_eigenvalues() {
        for rho in [2.1231, 1000.0] {
            let a = attractor_with_eigenvalues(-1.0, -3.0, rho).unwrap();
            let rt = decompose(&a).unwrap();
            let (l1, l2) = eigen_structure(&rt).real_eigenvalues().unwrap();
            assert!((l1 + 1.0).abs() < 1e-9 && (l2 + 3.0).abs() < 1e-9);
            assert!((rt.rho1() - rho).abs() < 1e-9 * rho);
            assert_eq!(transient_summary(&rt).classification, Classification::ReactiveAttractor);
        }
        let a = attractor_with_eigenvalues(-1.0, -1.0, 3.0).unwrap();
        let e = eigen_structure(&decompose(&a).unwrap());
        assert!(matches!(e, EigenStructure::RepeatedDefective { lambda, .. } if (lambda + 1.0).abs() < 1e-12));
    }

    #[test]
    fn given_eigenvectors() {
        use std::f64::consts::PI;
        let a = attractor_with_eigenvectors(PI / 3.0, PI / 6.0, 5.0, None).unwrap();
        let rt = decompose(&a).unwrap();
        assert!((rt.rho1() - 5.0).abs() < 1e-9);
        assert_eq!(transient_summary(&rt).classification, Classification::ReactiveAttractor);
        match eigen_structure(&rt) {
            EigenStructure::DistinctReal { theta1, theta2, .. } => {
                assert!(theta1.dist(AngleModPi::new(PI / 3.0)) < 1e-9);
                assert!(theta2.dist(AngleModPi::new(PI / 6.0)) < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }
}
