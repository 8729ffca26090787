//! Per-grid-point transverse width of the condensate ansatz.
//!
//! At every step and every point the width solves
//! `a Ω⁴ - b Ω - c = 0` with
//! `a = m ω⊥²/2 - 2 V∥/w²`, `b = (N U_int / 2√(2π)) |Φ|²`, `c = ħ²/2m`.
//! All three coefficients are positive, so exactly one positive root exists.
//! The hot path is a safeguarded Newton seeded by the previous width.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::units::HBAR;

const SQRT_TAU: f64 = 2.506_628_274_631_000_5; // sqrt(2π)

/// Normalized residual |aΩ⁴ - bΩ - c| / (aΩ⁴ + bΩ + c).
pub fn quartic_residual(a: f64, b: f64, c: f64, omega: f64) -> f64 {
    let p = a * omega.powi(4);
    let q = b * omega + c;
    (p - q).abs() / (p + q)
}

/// Unique positive root of `a Ω⁴ - b Ω - c = 0` (a, c > 0, b >= 0).
///
/// Newton from `seed` with a bisection safeguard; the result satisfies a
/// normalized residual below 1e-12.
pub fn quartic_positive_root(a: f64, b: f64, c: f64, seed: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!(
            "quartic leading coefficient {a:.3e} must be positive (confinement violated)"
        )));
    }
    if !(b >= 0.0 && c > 0.0) {
        return Err(Error::Domain("quartic coefficients out of range".into()));
    }
    // bracket: f(lo) < 0 < f(hi)
    let mut lo = 0.0;
    let mut hi = (2.0 * c / a).powf(0.25).max((2.0 * b / a).cbrt());
    debug_assert!(a * hi.powi(4) - b * hi - c >= 0.0);
    let mut x = if seed > 0.0 && seed <= hi { seed } else { 0.5 * hi };
    for _ in 0..100 {
        let f = a * x.powi(4) - b * x - c;
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let df = 4.0 * a * x.powi(3) - b;
        let mut next = if df != 0.0 { x - f / df } else { -1.0 };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        x = next;
        if quartic_residual(a, b, c, x) < 1e-13 {
            return Ok(x);
        }
    }
    if quartic_residual(a, b, c, x) < 1e-12 {
        Ok(x)
    } else {
        Err(Error::Numerical(format!(
            "quartic root did not converge (a={a:.3e} b={b:.3e} c={c:.3e})"
        )))
    }
}

/// Width Ω(X, Z) of the transverse Gaussian ansatz on a grid.
#[derive(Clone, Debug)]
pub struct WidthField {
    pub omega: Vec<f64>,
    /// Largest normalized quartic residual of the last solve.
    pub max_residual: f64,
}

impl WidthField {
    /// All points at the zero-density harmonic width sqrt(ħ/(m ω⊥)).
    pub fn harmonic(n: usize, mass: f64, omega_perp: f64) -> Self {
        Self {
            omega: vec![(HBAR / (mass * omega_perp)).sqrt(); n],
            max_residual: 0.0,
        }
    }
}

/// Parameters of the pointwise width equation.
#[derive(Clone, Copy, Debug)]
pub struct WidthParams {
    pub mass: f64,
    pub omega_perp: f64,
    /// N · U_int = N 4πħ²a₀/m, J·m³.
    pub interaction: f64,
    /// Half `1/w²(t)` coupling of the beam profile; `None` drops the term
    /// (used while the cloud sits in a non-optical trap).
    pub beam_waist: Option<f64>,
}

impl WidthParams {
    pub fn density_coefficient(&self) -> f64 {
        self.interaction / (2.0 * SQRT_TAU)
    }
}

/// Re-solves the width field for the current density and potential.
/// `density` holds |Φ|², `v_par` the in-plane potential sample per point.
pub fn update_width_field(
    width: &mut WidthField,
    density: &[f64],
    v_par: &[f64],
    params: &WidthParams,
) -> Result<()> {
    assert_eq!(width.omega.len(), density.len());
    assert_eq!(width.omega.len(), v_par.len());
    let a0 = 0.5 * params.mass * params.omega_perp * params.omega_perp;
    let inv_w2 = params.beam_waist.map_or(0.0, |w| 1.0 / (w * w));
    let bcoef = params.density_coefficient();
    let c = HBAR * HBAR / (2.0 * params.mass);
    let seed_default = (HBAR / (params.mass * params.omega_perp)).sqrt();

    let residual = width
        .omega
        .par_chunks_mut(8192)
        .zip(density.par_chunks(8192))
        .zip(v_par.par_chunks(8192))
        .map(|((om, rho), vp)| {
            let mut worst = 0.0f64;
            for i in 0..om.len() {
                let a = a0 - 2.0 * vp[i] * inv_w2;
                let b = bcoef * rho[i];
                let seed = if om[i] > 0.0 { om[i] } else { seed_default };
                match quartic_positive_root(a, b, c, seed) {
                    Ok(root) => {
                        om[i] = root;
                        worst = worst.max(quartic_residual(a, b, c, root));
                    }
                    Err(_) => {
                        worst = f64::INFINITY;
                    }
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    if !residual.is_finite() {
        return Err(Error::Domain(
            "width equation lost its positive root (confinement violated)".into(),
        ));
    }
    width.max_residual = residual;
    Ok(())
}
