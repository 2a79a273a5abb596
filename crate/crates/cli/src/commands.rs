use std::io::Write;

use reactlin_core::dynamics::{
    empirical_window, integrate_linear, integrate_nonaut, integrate_polar, repulsion_window,
    sweep_k, KSweepRow, KWindow, NonautConfig, Trajectory,
};
use reactlin_core::rt::decompose;
use reactlin_core::spectra::{
    eigen_structure, ortho_structure, transient_summary, Classification, EigenStructure,
    OrthoStructure,
};
use reactlin_core::synthesis::{attractor_with_eigenvalues, attractor_with_eigenvectors, from_deltas};
use reactlin_core::{Error, Mat2};
use serde::Serialize;

use crate::output::{csv_float, csv_writer, write_json, SCHEMA_VERSION};
use crate::CliError;

pub fn portrait<W: Write>(a: &Mat2, n: usize, out: W) -> Result<(), CliError> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 angles, got {n}")).into());
    }
    let rt = decompose(a)?;
    let mut w = csv_writer(out);
    w.write_record(["theta", "R", "T", "vx", "vy"])?;
    for i in 0..n {
        let th = std::f64::consts::PI * i as f64 / n as f64;
        let v = a.apply([th.cos(), th.sin()]);
        w.write_record([th, rt.radial(th), rt.tangential(th), v[0], v[1]].map(csv_float))?;
    }
    w.flush()?;
    Ok(())
}

pub struct TrajectoryOpts {
    pub x0: [f64; 2],
    pub step: f64,
    pub t_end: f64,
    pub k: Option<f64>,
    pub polar: bool,
}

pub fn trajectory<W: Write>(a: &Mat2, o: &TrajectoryOpts, out: W) -> Result<(), CliError> {
    let tr: Trajectory = match (o.k, o.polar) {
        (Some(_), true) => {
            return Err(CliError::Usage("--polar and --k cannot be combined".into()));
        }
        (Some(k), false) => integrate_nonaut(&NonautConfig::new(*a, k)?, o.x0, o.step, o.t_end)?,
        (None, true) => {
            let r0 = o.x0[0].hypot(o.x0[1]);
            let th0 = o.x0[1].atan2(o.x0[0]);
            integrate_polar(&decompose(a)?, r0, th0, o.step, o.t_end)?
        }
        (None, false) => integrate_linear(a, o.x0, o.step, o.t_end)?,
    };
    let mut w = csv_writer(out);
    w.write_record(["t", "x1", "x2", "r", "theta_unwrapped"])?;
    for s in &tr.samples {
        w.write_record([s.t, s.x1, s.x2, s.r(), s.theta].map(csv_float))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct EmpiricalWindow {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

#[derive(Serialize)]
pub struct SweepSummary {
    pub analytic_window: KWindow,
    pub empirical_window: EmpiricalWindow,
    pub max_abs_boundary_error: Option<f64>,
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    schema_version: &'static str,
    #[serde(flatten)]
    summary: &'a SweepSummary,
    rows: &'a [KSweepRow],
}

#[derive(Serialize)]
struct SummaryDocument<'a> {
    schema_version: &'static str,
    #[serde(flatten)]
    summary: &'a SweepSummary,
}

pub struct SweepOpts {
    pub k_min: f64,
    pub k_max: f64,
    pub n: usize,
    pub step: f64,
    pub t_end: f64,
    pub json: bool,
}

pub fn sweep_summary(analytic: KWindow, rows: &[KSweepRow]) -> SweepSummary {
    let (lo, hi) = empirical_window(rows);
    let err = match (lo, hi) {
        (Some(l), Some(h)) => Some((l - analytic.lo).abs().max((h - analytic.hi).abs())),
        _ => None,
    };
    SweepSummary {
        analytic_window: analytic,
        empirical_window: EmpiricalWindow { lo, hi },
        max_abs_boundary_error: err,
    }
}

/// Returns the summary document bytes so the caller can route them.
pub fn sweep<W: Write>(a: &Mat2, o: &SweepOpts, mut out: W) -> Result<Vec<u8>, CliError> {
    if o.n < 2 || o.k_min.partial_cmp(&o.k_max) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Usage(
            "sweep needs --n >= 2 and --k-min < --k-max".into(),
        ));
    }
    let analytic = repulsion_window(a)?;
    let ks: Vec<f64> = (0..o.n)
        .map(|i| o.k_min + (o.k_max - o.k_min) * i as f64 / (o.n - 1) as f64)
        .collect();
    let rows = sweep_k(a, &ks, [1.0, 0.0], o.step, o.t_end)?;
    let summary = sweep_summary(analytic, &rows);
    if o.json {
        write_json(
            &mut out,
            &SweepDocument {
                schema_version: SCHEMA_VERSION,
                summary: &summary,
                rows: &rows,
            },
        )?;
    } else {
        let mut w = csv_writer(&mut out);
        w.write_record(["k", "log_slope", "classification"])?;
        for r in &rows {
            let class = match r.growth {
                reactlin_core::dynamics::Growth::Repelling => "repelling",
                reactlin_core::dynamics::Growth::Decaying => "decaying",
                reactlin_core::dynamics::Growth::Marginal => "marginal",
            };
            w.write_record([csv_float(r.k), csv_float(r.log_slope), class.to_string()])?;
        }
        w.flush()?;
    }
    Ok(crate::output::to_json(&SummaryDocument {
        schema_version: SCHEMA_VERSION,
        summary: &summary,
    })?)
}

#[derive(Serialize)]
pub struct Verified {
    pub quantity: &'static str,
    pub requested: f64,
    pub measured: f64,
    pub abs_error: f64,
}

fn verified(quantity: &'static str, requested: f64, measured: f64) -> Verified {
    Verified {
        quantity,
        requested,
        measured,
        abs_error: (requested - measured).abs(),
    }
}

#[derive(Serialize)]
pub struct SynthesisReport {
    pub schema_version: &'static str,
    pub mode: &'static str,
    pub matrix: [[f64; 2]; 2],
    pub classification: Classification,
    pub verification: Vec<Verified>,
}

pub enum SynthMode {
    Deltas { delta_r: f64, delta_t: f64, rho: f64 },
    Eigenvalues { lambda1: f64, lambda2: f64, rho: f64 },
    Eigenvectors { theta1: f64, theta2: f64, rho: f64, delta_r: Option<f64> },
}

fn measured_deltas(a: &Mat2) -> (Option<f64>, Option<f64>) {
    let rt = decompose(a).expect("synthesized matrices are finite");
    let dt = match eigen_structure(&rt) {
        EigenStructure::DistinctReal { delta_t, .. } => Some(delta_t),
        EigenStructure::RepeatedDefective { .. } => Some(0.0),
        _ => None,
    };
    let dr = match ortho_structure(&rt) {
        OrthoStructure::DistinctReal { delta_r, .. } => Some(delta_r),
        _ => None,
    };
    (dr, dt)
}

pub fn synthesize<W: Write>(mode: &SynthMode, mut out: W) -> Result<(), CliError> {
    let (name, a) = match *mode {
        SynthMode::Deltas { delta_r, delta_t, rho } => ("deltas", from_deltas(delta_r, delta_t, rho)?),
        SynthMode::Eigenvalues { lambda1, lambda2, rho } => {
            ("eigenvalues", attractor_with_eigenvalues(lambda1, lambda2, rho)?)
        }
        SynthMode::Eigenvectors { theta1, theta2, rho, delta_r } => {
            ("eigenvectors", attractor_with_eigenvectors(theta1, theta2, rho, delta_r)?)
        }
    };
    let rt = decompose(&a)?;
    let eig = eigen_structure(&rt);
    let mut v = Vec::new();
    match *mode {
        SynthMode::Deltas { delta_r, delta_t, rho } => {
            let (dr, dt) = measured_deltas(&a);
            v.push(verified("rho", rho, rt.rho1()));
            v.push(verified("delta_R", delta_r, dr.unwrap_or(f64::NAN)));
            v.push(verified("delta_T", delta_t, dt.unwrap_or(f64::NAN)));
        }
        SynthMode::Eigenvalues { lambda1, lambda2, rho } => {
            let (l1, l2) = eig.real_eigenvalues().unwrap_or((f64::NAN, f64::NAN));
            v.push(verified("rho", rho, rt.rho1()));
            v.push(verified("lambda1", lambda1.max(lambda2), l1));
            v.push(verified("lambda2", lambda1.min(lambda2), l2));
        }
        SynthMode::Eigenvectors { theta1, theta2, rho, .. } => {
            v.push(verified("rho", rho, rt.rho1()));
            if let EigenStructure::DistinctReal { theta1: m1, theta2: m2, .. } = eig {
                let r1 = reactlin_core::AngleModPi::new(theta1);
                let r2 = reactlin_core::AngleModPi::new(theta2);
                v.push(verified("theta1", r1.value(), r1.value() + m1.signed_diff(r1)));
                v.push(verified("theta2", r2.value(), r2.value() + m2.signed_diff(r2)));
            }
        }
    }
    write_json(
        &mut out,
        &SynthesisReport {
            schema_version: SCHEMA_VERSION,
            mode: name,
            matrix: a.to_rows(),
            classification: transient_summary(&rt).classification,
            verification: v,
        },
    )?;
    Ok(())
}
