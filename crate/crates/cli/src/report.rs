//! The `analyze` report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reactlin_core::amplification::{
    rho_max_bound_eigen, rho_max_bound_ortho, rho_max_closed, rho_max_numeric, ComplexPolicy,
    NumericOptions,
};
use reactlin_core::forms::{to_form, FormKind, StandardFormResult};
use reactlin_core::rt::{decompose, rotate_conjugate};
use reactlin_core::spectra::{
    angular_phase_line, eigen_structure, ortho_structure, transient_summary, AngularPhaseLine,
    Classification, EigenStructure, OrthoStructure, ReactiveSet,
};
use reactlin_core::{AmplificationResult, Error, Mat2, Result};
use serde::Serialize;

use crate::output::SCHEMA_VERSION;

#[derive(Serialize)]
pub struct RtBlock {
    #[serde(rename = "m_R")]
    pub m_r: f64,
    #[serde(rename = "m_T")]
    pub m_t: f64,
    pub p: f64,
    #[serde(rename = "theta_R")]
    pub theta_r: Option<f64>,
    #[serde(rename = "theta_T")]
    pub theta_t: Option<f64>,
    pub rho1: f64,
    pub rho2: f64,
    pub tau1: f64,
    pub tau2: f64,
}

#[derive(Serialize)]
pub struct TransientBlock {
    pub rho1: f64,
    pub rho2: f64,
    pub classification: Classification,
    pub is_reactive: bool,
    pub is_attenuating: bool,
    pub reactive_set: ReactiveSet,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum FormEntry {
    Form { matrix: [[f64; 2]; 2], gamma: f64 },
    Inapplicable { inapplicable: String },
}

#[derive(Serialize)]
pub struct FormsBlock {
    pub rc: FormEntry,
    pub tc: FormEntry,
    pub r0: FormEntry,
    pub t0: FormEntry,
}

#[derive(Serialize)]
pub struct Bounds {
    pub ortho: f64,
    pub eigen: Option<f64>,
}

#[derive(Serialize)]
pub struct AmplificationBlock {
    pub rho_max: f64,
    pub t_max: Option<f64>,
    pub theta_entry: Option<f64>,
    pub method: reactlin_core::AmpMethod,
    pub bounds: Bounds,
}

#[derive(Serialize)]
pub struct SelfCheck {
    pub seed: u64,
    pub rotations: usize,
    pub max_rotation_rel_dev: f64,
    pub numeric_rel_gap: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub schema_version: &'static str,
    pub matrix: [[f64; 2]; 2],
    pub rt: RtBlock,
    pub eigen: EigenStructure,
    pub ortho: OrthoStructure,
    pub transient: TransientBlock,
    pub angular_phase_line: AngularPhaseLine,
    pub standard_forms: FormsBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplification: Option<AmplificationBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_check: Option<SelfCheck>,
}

fn form_entry(r: Result<StandardFormResult>) -> FormEntry {
    match r {
        Ok(f) => FormEntry::Form {
            matrix: f.matrix.to_rows(),
            gamma: f.gamma,
        },
        Err(e) => FormEntry::Inapplicable {
            inapplicable: e.to_string(),
        },
    }
}

fn amplification(a: &Mat2, policy: ComplexPolicy) -> Result<AmplificationBlock> {
    let r: AmplificationResult = rho_max_closed(a, policy)?;
    Ok(AmplificationBlock {
        rho_max: r.rho_max,
        t_max: r.t_max,
        theta_entry: r.theta_entry.map(|t| t.value()),
        method: r.method,
        bounds: Bounds {
            ortho: rho_max_bound_ortho(a)?,
            eigen: rho_max_bound_eigen(a).ok(),
        },
    })
}

/// Rotation invariance of `rho_max` at seeded random angles, plus agreement
/// between the reported value and the numeric oracle.
fn self_check(a: &Mat2, policy: ComplexPolicy, reported: f64, seed: u64) -> Result<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotations = 8;
    let mut dev = 0.0_f64;
    for _ in 0..rotations {
        let gamma = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let v = rho_max_closed(&rotate_conjugate(a, gamma), policy)?.rho_max;
        dev = dev.max((v - reported).abs() / reported);
    }
    let numeric = rho_max_numeric(a, &NumericOptions::default())?.rho_max;
    let gap = (numeric - reported).abs() / reported;
    Ok(SelfCheck {
        seed,
        rotations,
        max_rotation_rel_dev: dev,
        numeric_rel_gap: gap,
        passed: dev <= 1e-6 && gap <= 1e-3,
    })
}

pub fn analyze(a: &Mat2, policy: ComplexPolicy, check_seed: Option<u64>) -> Result<AnalyzeReport> {
    let rt = decompose(a)?;
    let summary = transient_summary(&rt);
    let amp = if summary.classification == Classification::ReactiveAttractor {
        Some(amplification(a, policy)?)
    } else {
        None
    };
    let self_check = match (check_seed, &amp) {
        (Some(seed), Some(block)) => Some(self_check(a, policy, block.rho_max, seed)?),
        (Some(_), None) => {
            return Err(Error::NotReactiveAttractor(summary.classification));
        }
        _ => None,
    };
    Ok(AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        matrix: a.to_rows(),
        rt: RtBlock {
            m_r: rt.m_r(),
            m_t: rt.m_t(),
            p: rt.p(),
            theta_r: rt.theta_r().map(|t| t.value()),
            theta_t: rt.theta_t().map(|t| t.value()),
            rho1: rt.rho1(),
            rho2: rt.rho2(),
            tau1: rt.tau1(),
            tau2: rt.tau2(),
        },
        eigen: eigen_structure(&rt),
        ortho: ortho_structure(&rt),
        transient: TransientBlock {
            rho1: summary.rho1,
            rho2: summary.rho2,
            classification: summary.classification,
            is_reactive: summary.is_reactive,
            is_attenuating: summary.is_attenuating,
            reactive_set: summary.reactive_set,
        },
        angular_phase_line: angular_phase_line(&rt),
        standard_forms: FormsBlock {
            rc: form_entry(to_form(a, FormKind::RCentered)),
            tc: form_entry(to_form(a, FormKind::TCentered)),
            r0: form_entry(to_form(a, FormKind::RZeroed)),
            t0: form_entry(to_form(a, FormKind::TZeroed)),
        },
        amplification: amp,
        self_check,
    })
}
