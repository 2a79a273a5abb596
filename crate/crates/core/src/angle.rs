use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An angle of period `pi`, held in `[0, pi)`.
///
/// Eigen- and orthovector directions, and the phases of the radial and
/// tangential sinusoids, are only defined up to a half turn.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleModPi(f64);

impl AngleModPi {
    pub fn new(radians: f64) -> Self {
        AngleModPi(normalize_mod_pi(radians))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Shortest signed distance from `other` to `self`, in `[-pi/2, pi/2)`.
    pub fn signed_diff(self, other: AngleModPi) -> f64 {
        wrap_half(self.0 - other.0)
    }

    /// Shortest unsigned distance on the half-turn circle, in `[0, pi/2]`.
    pub fn dist(self, other: AngleModPi) -> f64 {
        self.signed_diff(other).abs()
    }
}

impl From<AngleModPi> for f64 {
    fn from(a: AngleModPi) -> f64 {
        a.0
    }
}

impl fmt::Display for AngleModPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Reduce into `[0, pi)`.
pub fn normalize_mod_pi(x: f64) -> f64 {
    let r = x.rem_euclid(PI);
    // rem_euclid can round up to exactly PI for tiny negative inputs
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Reduce into `[-pi/2, pi/2)`.
pub fn wrap_half(x: f64) -> f64 {
    let r = normalize_mod_pi(x + PI / 2.0) - PI / 2.0;
    if r >= PI / 2.0 {
        r - PI
    } else {
        r
    }
}

/// Minimal-magnitude representative of a conjugation angle modulo `pi`,
/// in `(-pi/2, pi/2]`.
pub fn minimal_rotation(gamma: f64) -> f64 {
    let r = normalize_mod_pi(gamma);
    if r > PI / 2.0 {
        r - PI
    } else {
        r
    }
}
