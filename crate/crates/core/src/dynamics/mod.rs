//! Trajectory integration and the closed-form matrix exponential.

mod nonaut;

pub use nonaut::{
    classify_growth, corotating_matrix, empirical_window, frame_norm_discrepancy,
    integrate_nonaut, log_norm_slope, nonaut_matrix, repulsion_window, sweep_k, Growth,
    KSweepRow, KWindow, NonautConfig, GROWTH_SLOPE_TOL,
};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::rt::RTParams;

/// Hard cap on stored samples per trajectory.
pub const MAX_SAMPLES: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    /// Polar angle accumulated continuously, not reduced.
    pub theta: f64,
}

impl Sample {
    pub fn r(&self) -> f64 {
        self.x1.hypot(self.x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4Cartesian,
    Rk4Polar,
    Rk4Nonautonomous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub step: f64,
    pub method: Method,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories hold at least the initial sample")
    }

    pub fn max_r(&self) -> f64 {
        self.samples.iter().map(Sample::r).fold(0.0, f64::max)
    }
}

/// Default RK4 step: `1e-4` divided by the fastest radial or angular rate.
pub fn default_step(rt: &RTParams) -> f64 {
    1e-4 / rt.max_speed().max(1e-12)
}

/// Sample times `0, h, 2h, ...` ending exactly at `t_end`.
pub(crate) fn time_grid(step: f64, t_end: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::invalid(format!("t_end must be positive, got {t_end}")));
    }
    let ratio = t_end / step;
    if ratio > MAX_SAMPLES as f64 {
        return Err(Error::invalid(format!(
            "t_end / step = {ratio:.3e} exceeds the sample cap {MAX_SAMPLES}"
        )));
    }
    // tolerate rounding in t_end / step so no sliver step is produced
    let n = (ratio - 1e-9).ceil().max(1.0) as usize;
    let mut ts: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
    ts.push(t_end);
    Ok(ts)
}

fn check_x0(x0: [f64; 2]) -> Result<()> {
    if !(x0[0].is_finite() && x0[1].is_finite()) {
        return Err(Error::invalid("initial point must be finite"));
    }
    if x0 == [0.0, 0.0] {
        return Err(Error::invalid("initial point must be nonzero"));
    }
    Ok(())
}

pub(crate) fn rk4<F>(f: F, t: f64, x: [f64; 2], h: f64) -> [f64; 2]
where
    F: Fn(f64, [f64; 2]) -> [f64; 2],
{
    let add = |x: [f64; 2], k: [f64; 2], s: f64| [x[0] + s * k[0], x[1] + s * k[1]];
    let k1 = f(t, x);
    let k2 = f(t + 0.5 * h, add(x, k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, add(x, k2, 0.5 * h));
    let k4 = f(t + h, add(x, k3, h));
    [
        x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Cartesian integration with continuous angle tracking.
pub(crate) fn integrate_cartesian<F>(f: F, x0: [f64; 2], step: f64, t_end: f64, method: Method) -> Result<Trajectory>
where
    F: Fn(f64, [f64; 2]) -> [f64; 2],
{
    check_x0(x0)?;
    let ts = time_grid(step, t_end)?;
    let mut samples = Vec::with_capacity(ts.len());
    let mut x = x0;
    let mut theta = x0[1].atan2(x0[0]);
    samples.push(Sample { t: 0.0, x1: x[0], x2: x[1], theta });
    for w in ts.windows(2) {
        let prev = x;
        x = rk4(&f, w[0], x, w[1] - w[0]);
        if !(x[0].is_finite() && x[1].is_finite()) {
            return Err(Error::numeric(format!("trajectory overflowed at t = {}", w[1])));
        }
        // angle swept since the last sample, always well under pi per step
        let cross = prev[0] * x[1] - prev[1] * x[0];
        let dot = prev[0] * x[0] + prev[1] * x[1];
        theta += cross.atan2(dot);
        samples.push(Sample { t: w[1], x1: x[0], x2: x[1], theta });
    }
    Ok(Trajectory { samples, step, method })
}

/// RK4 trajectory of `X' = A X`.
pub fn integrate_linear(a: &Mat2, x0: [f64; 2], step: f64, t_end: f64) -> Result<Trajectory> {
    a.ensure_finite()?;
    integrate_cartesian(|_, x| a.apply(x), x0, step, t_end, Method::Rk4Cartesian)
}

/// `e^{A t}` in closed form.
///
/// With `m = tr(A)/2` and `N = A - m I`, `N^2 = d I` where
/// `d = ((a11 - a22)/2)^2 + a12 a21`, so
/// `e^{At} = e^{mt} (c(t) I + f(t) N)` with `c, f` one of the
/// cosh/sinh, cos/sin or polynomial pairs depending on the sign of `d`.
pub fn matrix_exponential(a: &Mat2, t: f64) -> Mat2 {
    let m = 0.5 * a.trace();
    let half = 0.5 * (a.a11 - a.a22);
    let d = half * half + a.a12 * a.a21;
    let q = d * t * t;
    let (c, f) = if q.abs() < 1e-8 {
        // series of cosh(sqrt q) and sinh(sqrt q)/sqrt q
        (1.0 + q / 2.0 + q * q / 24.0, t * (1.0 + q / 6.0 + q * q / 120.0))
    } else if d > 0.0 {
        let s = d.sqrt();
        ((s * t).cosh(), (s * t).sinh() / s)
    } else {
        let w = (-d).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    };
    let n = *a - Mat2::scalar(m);
    (Mat2::scalar(c) + n.scale(f)).scale((m * t).exp())
}

/// One RK4 step of `(ln r, theta)' = (R(theta), T(theta))`.
pub(crate) fn polar_step(rt: &RTParams, u: f64, theta: f64, h: f64) -> (f64, f64) {
    let f = |th: f64| (rt.radial(th), rt.tangential(th));
    let (a1, b1) = f(theta);
    let (a2, b2) = f(theta + 0.5 * h * b1);
    let (a3, b3) = f(theta + 0.5 * h * b2);
    let (a4, b4) = f(theta + h * b3);
    (
        u + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
        theta + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4),
    )
}

/// RK4 on the polar system `r' = r R(theta)`, `theta' = T(theta)`.
///
/// `r` is carried as `ln r`, which keeps it positive and makes the radial
/// equation linear in the state.
pub fn integrate_polar(rt: &RTParams, r0: f64, theta0: f64, step: f64, t_end: f64) -> Result<Trajectory> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::invalid(format!("r0 must be positive, got {r0}")));
    }
    if !theta0.is_finite() {
        return Err(Error::invalid("theta0 must be finite"));
    }
    let ts = time_grid(step, t_end)?;
    let mut samples = Vec::with_capacity(ts.len());
    let (mut u, mut theta) = (r0.ln(), theta0);
    let push = |samples: &mut Vec<Sample>, t: f64, u: f64, theta: f64| {
        let r = u.exp();
        samples.push(Sample { t, x1: r * theta.cos(), x2: r * theta.sin(), theta });
    };
    push(&mut samples, 0.0, u, theta);
    for w in ts.windows(2) {
        (u, theta) = polar_step(rt, u, theta, w[1] - w[0]);
        push(&mut samples, w[1], u, theta);
    }
    Ok(Trajectory { samples, step, method: Method::Rk4Polar })
}

/// Time for the polar angle to sweep one full turn (`2 pi`) starting at
/// `theta0`, measured with the RK4 polar integrator and refined by bisection.
///
/// Only defined when `T` never vanishes, i.e. for complex eigenvalues.
pub fn revolution_period(rt: &RTParams, theta0: f64, step: f64) -> Result<f64> {
    if rt.m_t().abs() <= rt.p() {
        return Err(Error::Inapplicable(
            "revolution period needs a nonvanishing angular velocity".into(),
        ));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    let dir = rt.m_t().signum();
    let target = theta0 + dir * 2.0 * PI;
    let residual = |th: f64| dir * (th - target);
    let (mut t, mut theta) = (0.0, theta0);
    let max_steps = MAX_SAMPLES;
    for _ in 0..max_steps {
        let (_, next) = polar_step(rt, 0.0, theta, step);
        if residual(next) >= 0.0 {
            // bisect on the sub-step length
            let (mut lo, mut hi) = (0.0, step);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let (_, th) = polar_step(rt, 0.0, theta, mid);
                if residual(th) >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-15 * (1.0 + t) {
                    break;
                }
            }
            return Ok(t + 0.5 * (lo + hi));
        }
        theta = next;
        t += step;
    }
    Err(Error::numeric("revolution not completed within the step cap"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rt::decompose;

    #[test]
    fn grid_ends_exactly() {
        let g = time_grid(0.3, 1.0).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
        let g = time_grid(0.1, 1.0).unwrap();
        assert_eq!(g.len(), 11);
        assert!(time_grid(0.0, 1.0).is_err());
        assert!(time_grid(0.1, -1.0).is_err());
    }

    #[test]
    fn scalar_exponential() {
        let tr = integrate_linear(&Mat2::scalar(-0.5), [1.0, 0.0], 1e-3, 2.0).unwrap();
        for s in &tr.samples {
            assert!((s.x1 - (-0.5 * s.t).exp()).abs() < 1e-12);
            assert_eq!(s.x2, 0.0);
        }
    }

    #[test]
    fn rotation_stays_on_circle_and_winds() {
        let tr = integrate_linear(&Mat2::J, [1.0, 0.0], 1e-3, 10.0).unwrap();
        for s in &tr.samples {
            assert!((s.r() - 1.0).abs() < 1e-10);
            assert!((s.x1 - s.t.cos()).abs() < 1e-10);
        }
        assert!((tr.last().theta - 10.0).abs() < 1e-9);
    }

    #[test]
    fn reference_trajectory_peak() {
        let a = Mat2::new(-1.0, -8.0, 0.0, -3.0);
        let th = 0.9f64.atan2(-0.4);
        let tr = integrate_linear(&a, [th.cos(), th.sin()], 1e-3, 3.0).unwrap();
        assert!((tr.max_r() - 1.67).abs() < 0.01, "{}", tr.max_r());
    }

    #[test]
    fn exponential_cases() {
        assert_eq!(matrix_exponential(&Mat2::new(1.0, 2.0, 3.0, 4.0), 0.0), Mat2::IDENTITY);
        let e = matrix_exponential(&Mat2::J, PI / 2.0);
        assert!(e.max_abs_diff(&Mat2::J) < 1e-15);
        let e = matrix_exponential(&Mat2::diag(-1.0, -3.0), 1.0);
        assert!(e.max_abs_diff(&Mat2::diag((-1f64).exp(), (-3f64).exp())) < 1e-15);
        // Jordan block: e^{t} [[1, t], [0, 1]]
        let e = matrix_exponential(&Mat2::new(1.0, 1.0, 0.0, 1.0), 2.0);
        let et = 2f64.exp();
        assert!(e.max_abs_diff(&Mat2::new(et, 2.0 * et, 0.0, et)) < 1e-12);
    }

    #[test]
    fn semigroup() {
        let a = Mat2::new(0.3, -1.2, 2.0, -0.7);
        let (s, t) = (0.7, 1.9);
        let lhs = matrix_exponential(&a, s + t);
        let rhs = matrix_exponential(&a, s) * matrix_exponential(&a, t);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn polar_scalar_and_saddle() {
        let rt = decompose(&Mat2::scalar(0.4)).unwrap();
        let tr = integrate_polar(&rt, 2.0, 1.0, 1e-3, 1.0).unwrap();
        assert!((tr.last().r() - 2.0 * 0.4f64.exp()).abs() < 1e-12);
        assert_eq!(tr.last().theta, 1.0);

        let a = Mat2::new(-2.0, 1.0, 2.0, 1.0);
        let rt = decompose(&a).unwrap();
        let tr = integrate_polar(&rt, 1.0, 1.0, 1e-3, 20.0).unwrap();
        let th = tr.last().theta;
        // attracting angular equilibrium carries lambda1
        let lambda1 = (-1.0 + 17f64.sqrt()) / 2.0;
        assert!((rt.radial(th) - lambda1).abs() < 1e-9);
        assert!(rt.tangential(th).abs() < 1e-9);
    }

    #[test]
    fn spiral_period() {
        let rt = decompose(&Mat2::new(0.7, -4.0, 4.0, -4.7)).unwrap();
        let period = revolution_period(&rt, 0.3, 1e-4).unwrap();
        let expected = 2.0 * PI / 8.71f64.sqrt();
        assert!((period - expected).abs() < 1e-6 * expected, "{period} vs {expected}");
        let saddle = decompose(&Mat2::new(-2.0, 1.0, 2.0, 1.0)).unwrap();
        assert!(revolution_period(&saddle, 0.0, 1e-3).is_err());
    }
}
