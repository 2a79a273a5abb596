//! Independent checks of maximal amplification.
//!
//! * quadrature of `R/T` across the reactive arc (the log of the gain along
//!   the best trajectory), with composite Gauss-Legendre on many panels
//! * direct maximization of the operator norm `|e^{At}|` over time

mod common;

use common::{rel_err, rng};
use rand::Rng;
use reactlin_core::amplification::{
    closed_forms, complex_closed_form, rho_max_closed, rho_max_numeric, ComplexPolicy,
    NumericOptions,
};
use reactlin_core::dynamics::matrix_exponential;
use reactlin_core::rt::decompose;
use reactlin_core::spectra::{ortho_structure, OrthoStructure};
use reactlin_core::synthesis::attractor_with_eigenvalues;
use reactlin_core::Mat2;

/// `exp( integral of R/T over the reactive arc )`.
fn arc_quadrature(a: &Mat2) -> f64 {
    let rt = decompose(a).unwrap();
    let (lo, hi) = match ortho_structure(&rt) {
        OrthoStructure::DistinctReal { phi1, delta_r, .. } => (phi1.value(), phi1.value() + 2.0 * delta_r),
        other => panic!("no arc: {other:?}"),
    };
    // 5-point Gauss-Legendre
    let nodes = [
        (0.0, 128.0 / 225.0),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let panels = 4000;
    let h = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let mid = lo + (i as f64 + 0.5) * h;
        for (x, w) in nodes {
            let th = mid + 0.5 * h * x;
            total += 0.5 * h * w * rt.radial(th) / rt.tangential(th);
        }
    }
    // traversal direction follows the sign of T, making the integral positive
    total.abs().exp()
}

/// `max_t |e^{At}|_2` by a coarse scan and golden-section refinement.
fn norm_peak(a: &Mat2, t_hi: f64) -> f64 {
    let f = |t: f64| matrix_exponential(a, t).spectral_norm();
    let n = 4000;
    let (mut best_t, mut best) = (0.0, 1.0);
    for i in 1..=n {
        let t = t_hi * i as f64 / n as f64;
        let v = f(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let dt = t_hi / n as f64;
    let (mut lo, mut hi) = ((best_t - dt).max(0.0), best_t + dt);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = hi - g * (hi - lo);
        let d = lo + g * (hi - lo);
        if f(c) > f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    best.max(f(0.5 * (lo + hi)))
}

#[test]
fn fig1_three_ways() {
    let a = Mat2::new(-1.0, -8.0, 0.0, -3.0);
    let closed = rho_max_closed(&a, ComplexPolicy::Strict).unwrap().rho_max;
    assert!(rel_err(arc_quadrature(&a), closed) < 1e-10);
    assert!(rel_err(norm_peak(&a, 5.0), closed) < 1e-9);
}

#[test]
fn closed_forms_match_quadrature_and_norm_peak() {
    let mut r = rng(11);
    for _ in 0..40 {
        let l1 = r.gen_range(-3.0..-0.1);
        let l2 = r.gen_range(l1 - 3.0..l1 - 0.05);
        let rho = r.gen_range(0.1..10.0);
        let a = attractor_with_eigenvalues(l1, l2, rho).unwrap();
        let f = closed_forms(&a).unwrap();
        let quad = arc_quadrature(&a);
        assert!(rel_err(f.lambda_mu, quad) < 1e-9, "{a}: {} vs {quad}", f.lambda_mu);
        assert!(rel_err(f.ms, quad) < 1e-9);
        assert!(rel_err(f.deltas.unwrap(), quad) < 1e-9);
        let peak = norm_peak(&a, 10.0 / -l1);
        assert!(rel_err(peak, f.lambda_mu) < 1e-8, "{a}: peak {peak} vs {}", f.lambda_mu);
    }
}

#[test]
fn reactive_spiral_against_norm_peak() {
    let a = Mat2::new(0.7, -4.0, 4.0, -4.7);
    let peak = norm_peak(&a, 5.0);
    let numeric = rho_max_numeric(&a, &NumericOptions::default()).unwrap().rho_max;
    assert!(rel_err(numeric, peak) < 1e-6, "{numeric} vs {peak}");
    let continued = complex_closed_form(&a).unwrap();
    assert!(rel_err(continued, peak) < 1e-9, "{continued} vs {peak}");
    assert!(rel_err(arc_quadrature(&a), peak) < 1e-9);
}

#[test]
fn random_reactive_spirals() {
    let mut r = rng(23);
    let mut checked = 0;
    while checked < 20 {
        let a = common::random_matrix(&mut r, 5.0);
        let rt = decompose(&a).unwrap();
        let spiral = rt.m_t().abs() > rt.p() && rt.m_r() < 0.0 && rt.rho1() > 0.05;
        if !spiral {
            continue;
        }
        checked += 1;
        let peak = norm_peak(&a, 20.0 / -rt.m_r());
        let numeric = rho_max_numeric(&a, &NumericOptions::default()).unwrap().rho_max;
        assert!(rel_err(numeric, peak) < 1e-5, "{a}: {numeric} vs {peak}");
        let continued = complex_closed_form(&a).unwrap();
        assert!(rel_err(continued, peak) < 1e-8, "{a}: {continued} vs {peak}");
    }
}
