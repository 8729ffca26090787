//! Atom, laser and guide parameter records shared by every solver.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::{ATOMIC_MASS, HBAR, SPEED_OF_LIGHT, STANDARD_GRAVITY};

/// Width conversion between a Gaussian beam waist and the sin² window
/// half-width: `l = w * sqrt(2 ln 2)`.
pub const HALFWIDTH_PER_WAIST: f64 = 1.177_410_022_515_474_7;

/// Physical constants of one atomic species.
#[derive(Clone, Debug)]
pub struct AtomSpecies {
    /// Mass, kg.
    pub mass: f64,
    /// Natural linewidth of the guiding transition, rad/s.
    pub linewidth: f64,
    /// Saturation intensity, W/m².
    pub saturation_intensity: f64,
    /// Transition angular frequency, rad/s.
    pub transition_frequency: f64,
    pub label: String,
}

impl AtomSpecies {
    pub fn new(
        mass: f64,
        linewidth: f64,
        saturation_intensity: f64,
        transition_frequency: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !(mass > 0.0 && linewidth > 0.0 && saturation_intensity > 0.0) {
            return Err(Error::Domain(
                "species mass, linewidth and saturation intensity must be positive".into(),
            ));
        }
        Ok(Self {
            mass,
            linewidth,
            saturation_intensity,
            transition_frequency,
            label: label.into(),
        })
    }

    /// ⁸⁷Rb guided on the D1 line: Γ/2π = 5.75 MHz, I_s = 4.5 mW/cm²,
    /// m = 86.909 u, ν₀ = 377.107 THz.
    pub fn rb87() -> Self {
        Self {
            mass: 86.909 * ATOMIC_MASS,
            linewidth: 2.0 * PI * 5.75e6,
            saturation_intensity: 45.0,
            transition_frequency: 2.0 * PI * 377.107e12,
            label: "Rb87".into(),
        }
    }
}

/// One laser beam, before conversion to a guide potential.
#[derive(Clone, Copy, Debug)]
pub struct BeamParams {
    /// Optical power, W.
    pub power: f64,
    /// 1/e² intensity radius, m.
    pub waist: f64,
    /// Laser angular frequency, rad/s.
    pub frequency: f64,
    /// Vacuum wavelength, m.
    pub wavelength: f64,
}

impl BeamParams {
    pub fn new(power: f64, waist: f64, wavelength: f64) -> Result<Self> {
        if !(power >= 0.0) || !(waist > 0.0) || !(wavelength > 0.0) {
            return Err(Error::Domain("beam power, waist and wavelength must be valid".into()));
        }
        Ok(Self {
            power,
            waist,
            frequency: 2.0 * PI * SPEED_OF_LIGHT / wavelength,
            wavelength,
        })
    }

    /// Beam pinned to an exact detuning from the species transition.
    pub fn with_detuning(power: f64, waist: f64, species: &AtomSpecies, detuning: f64) -> Result<Self> {
        let frequency = species.transition_frequency + detuning;
        if !(frequency > 0.0) {
            return Err(Error::Domain("detuning pushes laser frequency negative".into()));
        }
        Ok(Self {
            power,
            waist,
            frequency,
            wavelength: 2.0 * PI * SPEED_OF_LIGHT / frequency,
        })
    }

    pub fn detuning(&self, species: &AtomSpecies) -> f64 {
        self.frequency - species.transition_frequency
    }

    /// Peak intensity of the TEM₀₀ profile, 2P/(πw²).
    pub fn peak_intensity(&self) -> f64 {
        2.0 * self.power / (PI * self.waist * self.waist)
    }

    pub fn rayleigh_range(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }

    /// The beam is treated as collimated; warn when the traversed distance
    /// approaches the Rayleigh range.
    pub fn divergence_ok(&self, travel: f64) -> bool {
        travel <= self.rayleigh_range() / 3.0
    }
}

/// Depth of the dipole potential at the beam center,
/// `U = (ħΓ/2) (I/I_s) / (4δ/Γ)`. Negative (attractive) for red detuning.
pub fn dipole_depth_from_beam(species: &AtomSpecies, beam: &BeamParams) -> Result<f64> {
    let delta = beam.detuning(species);
    if delta == 0.0 {
        return Err(Error::Domain("zero detuning: dipole potential undefined".into()));
    }
    if !(beam.power >= 0.0) || !(beam.waist > 0.0) {
        return Err(Error::Domain("beam power and waist must be positive".into()));
    }
    let s = beam.peak_intensity() / species.saturation_intensity;
    Ok(0.5 * HBAR * species.linewidth * s / (4.0 * delta / species.linewidth))
}

/// Half-width of the sin² guide window for a beam waist `w`.
pub fn guide_halfwidth(waist: f64) -> Result<f64> {
    if !(waist > 0.0) {
        return Err(Error::Domain(format!("non-positive waist {waist}")));
    }
    Ok(waist * HALFWIDTH_PER_WAIST)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GuideRole {
    Vertical,
    Oblique,
}

/// One optical guide: a sin² well of given depth over a finite window.
#[derive(Clone, Copy, Debug)]
pub struct GuideSpec {
    /// Well depth, J, stored positive; the potential is `-depth` on the axis.
    pub depth: f64,
    /// Window half-width, m.
    pub half_width: f64,
    /// Angle from the vertical, rad. Zero for the vertical guide.
    pub angle: f64,
    /// Fall distance from the release point to the guide crossing, m.
    pub crossing_height: f64,
    pub role: GuideRole,
}

impl GuideSpec {
    pub fn vertical(depth: f64, half_width: f64) -> Result<Self> {
        if !(depth >= 0.0 && half_width > 0.0) {
            return Err(Error::Domain("guide depth/half-width out of range".into()));
        }
        Ok(Self {
            depth,
            half_width,
            angle: 0.0,
            crossing_height: 0.0,
            role: GuideRole::Vertical,
        })
    }

    pub fn oblique(depth: f64, half_width: f64, angle: f64, crossing_height: f64) -> Result<Self> {
        if !(depth >= 0.0 && half_width > 0.0) {
            return Err(Error::Domain("guide depth/half-width out of range".into()));
        }
        if !(angle >= 0.0 && angle < PI / 2.0) {
            return Err(Error::Domain(format!(
                "oblique angle {angle} rad outside [0, pi/2)"
            )));
        }
        if !(crossing_height >= 0.0) {
            return Err(Error::Domain("crossing height must be non-negative".into()));
        }
        Ok(Self {
            depth,
            half_width,
            angle,
            crossing_height,
            role: GuideRole::Oblique,
        })
    }

    pub fn vertical_from_waist(depth: f64, waist: f64) -> Result<Self> {
        Self::vertical(depth, guide_halfwidth(waist)?)
    }

    pub fn oblique_from_waist(depth: f64, waist: f64, angle: f64, crossing_height: f64) -> Result<Self> {
        Self::oblique(depth, guide_halfwidth(waist)?, angle, crossing_height)
    }

    pub fn waist(&self) -> f64 {
        self.half_width / HALFWIDTH_PER_WAIST
    }

    /// Harmonic frequency of the well bottom, `(π/l) sqrt(U/2m)`.
    pub fn bottom_frequency(&self, species: &AtomSpecies) -> f64 {
        PI / self.half_width * (self.depth / (2.0 * species.mass)).sqrt()
    }
}

/// Switch timing. `t_c = sqrt(2h/g)` is never a free parameter.
#[derive(Clone, Copy, Debug)]
pub struct TimingSequence {
    /// Arrival time at the crossing, s.
    pub t_c: f64,
    /// Propagation step, s.
    pub dt: f64,
    /// End of the run, s.
    pub t_final: f64,
    /// Gravitational acceleration used throughout, m/s².
    pub gravity: f64,
}

impl TimingSequence {
    pub fn new(crossing_height: f64, dt: f64, t_final: f64) -> Result<Self> {
        Self::with_gravity(crossing_height, dt, t_final, STANDARD_GRAVITY)
    }

    pub fn with_gravity(crossing_height: f64, dt: f64, t_final: f64, gravity: f64) -> Result<Self> {
        if !(crossing_height >= 0.0) {
            return Err(Error::Domain("crossing height must be non-negative".into()));
        }
        if !(gravity > 0.0) {
            return Err(Error::Domain("gravity must be positive".into()));
        }
        let t_c = (2.0 * crossing_height / gravity).sqrt();
        if !(dt > 0.0) {
            return Err(Error::Domain("time step must be positive".into()));
        }
        if !(t_final > t_c) {
            return Err(Error::Domain(format!(
                "final time {t_final} must exceed the crossing time {t_c}"
            )));
        }
        Ok(Self { t_c, dt, t_final, gravity })
    }
}

/// Advisory check of the strong-confinement assumption behind the effective
/// 2D condensate model: the perpendicular trap frequency should dominate the
/// in-plane guide frequencies `sqrt(4U/(m w²))`.
#[derive(Clone, Copy, Debug)]
pub struct ConfinementReport {
    pub ratio_vertical: f64,
    pub ratio_oblique: f64,
    pub threshold: f64,
}

impl ConfinementReport {
    pub fn pass(&self) -> bool {
        self.ratio_vertical >= self.threshold && self.ratio_oblique >= self.threshold
    }
}

pub fn validate_confinement(
    species: &AtomSpecies,
    omega_perp: f64,
    vertical: &GuideSpec,
    oblique: &GuideSpec,
    threshold: f64,
) -> ConfinementReport {
    let rate = |g: &GuideSpec| {
        let w = g.waist();
        let parallel = (4.0 * g.depth / (species.mass * w * w)).sqrt();
        if parallel == 0.0 {
            f64::INFINITY
        } else {
            omega_perp / parallel
        }
    };
    ConfinementReport {
        ratio_vertical: rate(vertical),
        ratio_oblique: rate(oblique),
        threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{as_microkelvin, microkelvin, micrometer};

    #[test]
    fn halfwidth_examples() {
        // 100 µm waist -> 117.741 µm window half-width.
        let l = guide_halfwidth(micrometer(100.0)).unwrap();
        assert!((l - 1.177_410_022_5e-4).abs() < 1e-12);
        let l2 = guide_halfwidth(micrometer(300.0)).unwrap();
        assert!((l2 - 3.532_230_067_5e-4).abs() < 1e-11);
        // homogeneity
        assert!((guide_halfwidth(2e-4).unwrap() - 2.0 * l).abs() < 1e-18);
        assert!(guide_halfwidth(0.0).is_err());
    }

    #[test]
    fn dipole_depth_examples() {
        let rb = AtomSpecies::rb87();
        // Hand evaluation with CODATA constants: P = 29.6 W, w = 100 µm,
        // delta/2pi = -95.4 THz gives U/k_B = -87.07 µK.
        let beam =
            BeamParams::with_detuning(29.6, micrometer(100.0), &rb, -2.0 * PI * 95.4e12).unwrap();
        let u = dipole_depth_from_beam(&rb, &beam).unwrap();
        assert!(u < 0.0, "red detuning must attract");
        let uk = as_microkelvin(u);
        assert!((uk + 87.067).abs() < 0.09, "got {uk} µK");

        // Zero power -> zero depth; doubling power doubles the depth.
        let b0 = BeamParams::with_detuning(0.0, 1e-4, &rb, -1e12).unwrap();
        assert_eq!(dipole_depth_from_beam(&rb, &b0).unwrap(), 0.0);
        let b1 = BeamParams::with_detuning(5.0, 1e-4, &rb, -1e12).unwrap();
        let b2 = BeamParams::with_detuning(10.0, 1e-4, &rb, -1e12).unwrap();
        let u1 = dipole_depth_from_beam(&rb, &b1).unwrap();
        let u2 = dipole_depth_from_beam(&rb, &b2).unwrap();
        assert!((u2 - 2.0 * u1).abs() < 1e-12 * u1.abs());

        // Sign follows the detuning.
        let blue = BeamParams::with_detuning(5.0, 1e-4, &rb, 1e12).unwrap();
        assert!(dipole_depth_from_beam(&rb, &blue).unwrap() > 0.0);
        let resonant = BeamParams::with_detuning(5.0, 1e-4, &rb, 0.0).unwrap();
        assert!(dipole_depth_from_beam(&rb, &resonant).is_err());
    }

    #[test]
    fn rayleigh_range_scale() {
        // 100 µm waist at 1064 nm: z_R ~ 3 cm.
        let beam = BeamParams::new(10.0, micrometer(100.0), 1.064e-6).unwrap();
        let zr = beam.rayleigh_range();
        assert!((zr - 0.0295).abs() < 0.001, "z_R = {zr}");
        assert!(beam.divergence_ok(0.009));
    }

    #[test]
    fn crossing_time() {
        // h = 10 µm -> t_c = 1.43 ms to three significant figures.
        let t = TimingSequence::new(micrometer(10.0), 1e-6, 1e-2).unwrap();
        assert!((t.t_c * 1e3 - 1.43).abs() < 0.005, "t_c = {} ms", t.t_c * 1e3);
        // ... and t_c is pinned to sqrt(2h/g) by construction.
        assert_eq!(t.t_c, (2.0 * micrometer(10.0) / t.gravity).sqrt());
        assert!(TimingSequence::new(1e-3, 1e-6, 1e-5).is_err());
    }

    #[test]
    fn confinement_ratios() {
        let rb = AtomSpecies::rb87();
        let v = GuideSpec::vertical_from_waist(microkelvin(2.2), micrometer(300.0)).unwrap();
        let o = GuideSpec::oblique_from_waist(microkelvin(8.8), micrometer(300.0), 0.9, 1e-5).unwrap();
        let rep = validate_confinement(&rb, 2.0 * PI * 500.0, &v, &o, 10.0);
        assert!(rep.pass(), "{rep:?}");
        // No trapping -> infinite ratios, PASS.
        let v0 = GuideSpec::vertical(0.0, 1e-4).unwrap();
        let o0 = GuideSpec::oblique(0.0, 1e-4, 0.5, 0.0).unwrap();
        let rep0 = validate_confinement(&rb, 1.0, &v0, &o0, 10.0);
        assert!(rep0.ratio_vertical.is_infinite() && rep0.pass());
        // Halving the waist at fixed depth halves the ratio.
        let vh = GuideSpec::vertical_from_waist(microkelvin(2.2), micrometer(150.0)).unwrap();
        let rep_h = validate_confinement(&rb, 2.0 * PI * 500.0, &vh, &o, 10.0);
        assert!((rep_h.ratio_vertical - rep.ratio_vertical / 2.0).abs() < 1e-9 * rep.ratio_vertical);
    }
}
