//! Physical constants (CODATA 2018) and unit conversions.
//!
//! Everything internal is strict SI. Configuration files and reports use the
//! laboratory-friendly units (µK via `E/k_B`, µm, ms, deg); the helpers here
//! are the single place where those conversions live.

use std::f64::consts::PI;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS: f64 = 1.660_539_066_60e-27;
/// Speed of light, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.806_65;

/// Energy of a temperature expressed in µK, in joules.
pub fn microkelvin(t_uk: f64) -> f64 {
    t_uk * 1e-6 * K_B
}

/// Energy in joules expressed as a temperature in µK.
pub fn as_microkelvin(energy: f64) -> f64 {
    energy / K_B * 1e6
}

pub fn micrometer(x: f64) -> f64 {
    x * 1e-6
}

pub fn millimeter(x: f64) -> f64 {
    x * 1e-3
}

pub fn nanometer(x: f64) -> f64 {
    x * 1e-9
}

pub fn millisecond(t: f64) -> f64 {
    t * 1e-3
}

pub fn microsecond(t: f64) -> f64 {
    t * 1e-6
}

pub fn degree(a: f64) -> f64 {
    a * PI / 180.0
}

/// Angular frequency of an ordinary frequency given in Hz.
pub fn angular(nu: f64) -> f64 {
    2.0 * PI * nu
}
