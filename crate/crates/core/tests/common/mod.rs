#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reactlin_core::Mat2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, scale: f64) -> Mat2 {
    let mut e = || rng.gen_range(-scale..scale);
    Mat2::new(e(), e(), e(), e())
}

pub fn mat_strategy() -> impl Strategy<Value = Mat2> {
    let e = -10.0f64..10.0;
    (e.clone(), e.clone(), e.clone(), e).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

/// Roots of `x^2 - tr x + det` as `(re, im)` pairs, larger real part first.
/// Independent of the radial/tangential parameters.
pub fn char_poly_roots(a: &Mat2) -> [(f64, f64); 2] {
    let tr = a.trace();
    let det = a.det();
    let h = 0.5 * tr;
    let disc = h * h - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        // larger-magnitude root first, the other via Vieta
        let big = if h >= 0.0 { h + s } else { h - s };
        let small = if big != 0.0 { det / big } else { 0.0 };
        let (hi, lo) = if big >= small { (big, small) } else { (small, big) };
        [(hi, 0.0), (lo, 0.0)]
    } else {
        let w = (-disc).sqrt();
        [(h, w), (h, -w)]
    }
}

pub fn unit(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}
