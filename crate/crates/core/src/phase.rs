//! Phase arithmetic modulo 2π.

use std::f64::consts::{PI, TAU};

/// Tolerance for comparing phases modulo 2π.
pub const PHASE_TOL: f64 = 1e-10;

/// Reduces an angle to the half-open interval (−π, π].
pub fn reduce(theta: f64) -> f64 {
    let mut r = theta - TAU * (theta / TAU).round();
    if r <= -PI {
        r += TAU;
    }
    if r > PI {
        r -= TAU;
    }
    r
}

/// Distance of `theta` from the nearest multiple of 2π.
pub fn dist_mod_2pi(theta: f64) -> f64 {
    reduce(theta).abs()
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> crate::C64 {
    crate::C64::from_polar(1.0, theta)
}
