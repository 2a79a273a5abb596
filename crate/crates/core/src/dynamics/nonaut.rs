//! Rotating coefficients: `X' = M_{kt}^{-1} A M_{kt} X`.
//!
//! In the co-rotating frame `Y = M_{kt} X` the system is autonomous,
//! `Y' = (A + kJ) Y`, and `|X| = |Y|`. Adding `kJ` lifts `T` by `k` and leaves
//! `R` alone, so the frozen attractor becomes repelling exactly when the
//! lifted `T` gains a zero inside the reactive arc: `-k` in `(mu2, mu1)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{integrate_cartesian, integrate_linear, rk4, time_grid, Method, Trajectory};
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::rt::{decompose, rotate_conjugate};
use crate::spectra::{ortho_structure, transient_summary, Classification, OrthoStructure};

/// Log-slope band treated as neither growing nor decaying.
pub const GROWTH_SLOPE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonautConfig {
    pub base: Mat2,
    pub k: f64,
}

impl NonautConfig {
    /// Requires `base` to be a reactive attractor.
    pub fn new(base: Mat2, k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::invalid("rotation rate k must be finite"));
        }
        let class = transient_summary(&decompose(&base)?).classification;
        if class != Classification::ReactiveAttractor {
            return Err(Error::NotReactiveAttractor(class));
        }
        Ok(NonautConfig { base, k })
    }
}

/// Frozen coefficient matrix at time `t`.
pub fn nonaut_matrix(cfg: &NonautConfig, t: f64) -> Mat2 {
    rotate_conjugate(&cfg.base, cfg.k * t)
}

/// `A + kJ`, the generator in the co-rotating frame.
pub fn corotating_matrix(cfg: &NonautConfig) -> Mat2 {
    cfg.base + Mat2::J.scale(cfg.k)
}

/// Open interval of rotation rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KWindow {
    pub lo: f64,
    pub hi: f64,
}

impl KWindow {
    pub fn contains(&self, k: f64) -> bool {
        self.lo < k && k < self.hi
    }
}

/// Rates `k` in `(-mu1, -mu2)` for which the rotating system repels.
pub fn repulsion_window(a: &Mat2) -> Result<KWindow> {
    let rt = decompose(a)?;
    let class = transient_summary(&rt).classification;
    if class != Classification::ReactiveAttractor {
        return Err(Error::NotReactiveAttractor(class));
    }
    match ortho_structure(&rt) {
        OrthoStructure::DistinctReal { mu1, mu2, .. } => Ok(KWindow { lo: -mu1, hi: -mu2 }),
        other => Err(Error::Inapplicable(format!(
            "reactive attractor without distinct orthovalues: {other:?}"
        ))),
    }
}

/// RK4 on `X' = B_k(t) X`.
pub fn integrate_nonaut(cfg: &NonautConfig, x0: [f64; 2], step: f64, t_end: f64) -> Result<Trajectory> {
    cfg.base.ensure_finite()?;
    integrate_cartesian(
        |t, x| nonaut_matrix(cfg, t).apply(x),
        x0,
        step,
        t_end,
        Method::Rk4Nonautonomous,
    )
}

/// Largest `| |X(t)| - |Y(t)| | / |X(t)|` between the rotating system and its
/// co-rotating reduction, sampled on the shared time grid.
pub fn frame_norm_discrepancy(cfg: &NonautConfig, x0: [f64; 2], step: f64, t_end: f64) -> Result<f64> {
    let x = integrate_nonaut(cfg, x0, step, t_end)?;
    // M_0 = I, so both frames start from x0
    let y = integrate_linear(&corotating_matrix(cfg), x0, step, t_end)?;
    Ok(x
        .samples
        .iter()
        .zip(&y.samples)
        .map(|(a, b)| (a.r() - b.r()).abs() / a.r())
        .fold(0.0, f64::max))
}

/// Least-squares slope of `ln |X(t)|` over the trailing half of `[0, t_end]`.
///
/// The state is renormalized every step so long horizons cannot overflow.
pub fn log_norm_slope(cfg: &NonautConfig, x0: [f64; 2], step: f64, t_end: f64) -> Result<f64> {
    let ts = time_grid(step, t_end)?;
    let norm = x0[0].hypot(x0[1]);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::invalid("initial point must be finite and nonzero"));
    }
    let f = |t: f64, x: [f64; 2]| nonaut_matrix(cfg, t).apply(x);
    let mut x = [x0[0] / norm, x0[1] / norm];
    let mut log_r = norm.ln();
    let t_start = 0.5 * t_end;
    let (mut n, mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for w in ts.windows(2) {
        x = rk4(f, w[0], x, w[1] - w[0]);
        let r = x[0].hypot(x[1]);
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::numeric(format!("state degenerated at t = {}", w[1])));
        }
        log_r += r.ln();
        x = [x[0] / r, x[1] / r];
        if w[1] >= t_start {
            let t = w[1];
            n += 1.0;
            st += t;
            sy += log_r;
            stt += t * t;
            sty += t * log_r;
        }
    }
    let denom = n * stt - st * st;
    if n < 2.0 || denom <= 0.0 {
        return Err(Error::invalid("too few samples in the trailing half for a slope fit"));
    }
    Ok((n * sty - st * sy) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Repelling,
    Decaying,
    Marginal,
}

pub fn classify_growth(slope: f64) -> Growth {
    if slope > GROWTH_SLOPE_TOL {
        Growth::Repelling
    } else if slope < -GROWTH_SLOPE_TOL {
        Growth::Decaying
    } else {
        Growth::Marginal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSweepRow {
    pub k: f64,
    pub log_slope: f64,
    pub growth: Growth,
}

/// Growth classification at each `k` (computed in parallel, returned in
/// input order).
pub fn sweep_k(a: &Mat2, ks: &[f64], x0: [f64; 2], step: f64, t_end: f64) -> Result<Vec<KSweepRow>> {
    NonautConfig::new(*a, 0.0)?;
    ks.par_iter()
        .map(|&k| {
            let cfg = NonautConfig::new(*a, k)?;
            let log_slope = log_norm_slope(&cfg, x0, step, t_end)?;
            Ok(KSweepRow {
                k,
                log_slope,
                growth: classify_growth(log_slope),
            })
        })
        .collect()
}

/// Empirical repelling window from rows sorted by ascending `k`.
///
/// Each edge is the midpoint between the last non-repelling and the first
/// repelling row (or vice versa); `None` when the window reaches the end of
/// the sweep or no row repels.
pub fn empirical_window(rows: &[KSweepRow]) -> (Option<f64>, Option<f64>) {
    let repels = |r: &KSweepRow| r.growth == Growth::Repelling;
    let Some(first) = rows.iter().position(repels) else {
        return (None, None);
    };
    let last = rows.iter().rposition(repels).unwrap();
    let lo = (first > 0).then(|| 0.5 * (rows[first - 1].k + rows[first].k));
    let hi = (last + 1 < rows.len()).then(|| 0.5 * (rows[last].k + rows[last + 1].k));
    (lo, hi)
}
