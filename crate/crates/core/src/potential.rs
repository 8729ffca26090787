//! Closed-form guide potentials, the rotated guide coordinate, the classical
//! fall trajectory and the assembled time-dependent potentials.
//!
//! Everything here is a pure function of its arguments; grid-filling variants
//! exist for the propagation inner loop, scalar forms for tests.

use std::f64::consts::FRAC_PI_2;

use crate::grid::Grid1d;
use crate::model::{GuideRole, GuideSpec, TimingSequence};

/// Transverse coordinate of the oblique guide,
/// `x' = x cos γ + (z + h) sin γ`.
pub fn rotated_coordinate(x: f64, z: f64, guide: &GuideSpec) -> f64 {
    let (s, c) = guide.angle.sin_cos();
    x * c + (z + guide.crossing_height) * s
}

fn well(depth: f64, half_width: f64, u: f64) -> f64 {
    if u.abs() <= half_width {
        let s = (FRAC_PI_2 * (u - half_width) / half_width).sin();
        -depth * s * s
    } else {
        0.0
    }
}

/// Vertical-guide potential at horizontal position `x`.
pub fn vertical_potential(x: f64, guide: &GuideSpec) -> f64 {
    debug_assert_eq!(guide.role, GuideRole::Vertical);
    well(guide.depth, guide.half_width, x)
}

/// Transverse well profile of either guide as a function of the distance `u`
/// from the guide axis. This is the potential whose bound states define the
/// vibrational basis.
pub fn transverse_profile(guide: &GuideSpec, u: f64) -> f64 {
    well(guide.depth, guide.half_width, u)
}

/// Oblique-guide potential at the plane point `(x, z)`.
pub fn oblique_potential(x: f64, z: f64, guide: &GuideSpec) -> f64 {
    debug_assert_eq!(guide.role, GuideRole::Oblique);
    well(guide.depth, guide.half_width, rotated_coordinate(x, z, guide))
}

/// Classical fall coordinate: free fall until `t_c`, then motion along the
/// guide axis at the conserved speed, so the vertical rate picks up a factor
/// `cos γ`.
pub fn classical_z(t: f64, timing: &TimingSequence, angle: f64) -> f64 {
    let g = timing.gravity;
    if t <= timing.t_c {
        -0.5 * g * t * t
    } else {
        let tau = timing.t_c + (t - timing.t_c) * angle.cos();
        -0.5 * g * tau * tau
    }
}

/// Time derivative of [`classical_z`].
pub fn classical_z_rate(t: f64, timing: &TimingSequence, angle: f64) -> f64 {
    let g = timing.gravity;
    if t <= timing.t_c {
        -g * t
    } else {
        let c = angle.cos();
        -g * (timing.t_c + (t - timing.t_c) * c) * c
    }
}

/// Time at which the classical trajectory reaches depth `z` (< 0).
pub fn time_at_depth(z: f64, timing: &TimingSequence, angle: f64) -> f64 {
    let g = timing.gravity;
    let tau = (-2.0 * z / g).sqrt();
    if tau <= timing.t_c {
        tau
    } else {
        timing.t_c + (tau - timing.t_c) / angle.cos()
    }
}

/// One-dimensional time-dependent potential of the semi-classical model:
/// the vertical well before the switch, the oblique well evaluated on the
/// classical trajectory after it.
pub fn semiclassical_potential(
    x: f64,
    t: f64,
    vertical: &GuideSpec,
    oblique: &GuideSpec,
    timing: &TimingSequence,
) -> f64 {
    if t <= timing.t_c {
        vertical_potential(x, vertical)
    } else {
        oblique_potential(x, classical_z(t, timing, oblique.angle), oblique)
    }
}

/// Moving-frame potential of the condensate model: coordinates `(x, z)` are
/// free-fall comoving, so the lab height is `z - g t²/2`.
pub fn bec_parallel_potential(
    x: f64,
    z: f64,
    t: f64,
    vertical: &GuideSpec,
    oblique: &GuideSpec,
    timing: &TimingSequence,
) -> f64 {
    if t <= timing.t_c {
        vertical_potential(x, vertical)
    } else {
        oblique_potential(x, z - 0.5 * timing.gravity * t * t, oblique)
    }
}

/// Scalar sample with window occupancy flags.
#[derive(Clone, Copy, Debug)]
pub struct PotentialSample {
    pub value: f64,
    pub in_vertical_window: bool,
    pub in_oblique_window: bool,
}

pub fn sample_semiclassical(
    x: f64,
    t: f64,
    vertical: &GuideSpec,
    oblique: &GuideSpec,
    timing: &TimingSequence,
) -> PotentialSample {
    let value = semiclassical_potential(x, t, vertical, oblique, timing);
    let z = classical_z(t, timing, oblique.angle);
    PotentialSample {
        value,
        in_vertical_window: t <= timing.t_c && x.abs() <= vertical.half_width,
        in_oblique_window: t > timing.t_c
            && rotated_coordinate(x, z, oblique).abs() <= oblique.half_width,
    }
}

/// Horizontal interval `[lo, hi]` occupied by the window of the active guide
/// at time `t` in the semi-classical model.
pub fn semiclassical_support(
    t: f64,
    vertical: &GuideSpec,
    oblique: &GuideSpec,
    timing: &TimingSequence,
) -> (f64, f64) {
    if t <= timing.t_c {
        (-vertical.half_width, vertical.half_width)
    } else {
        let z = classical_z(t, timing, oblique.angle);
        let (s, c) = oblique.angle.sin_cos();
        let shift = (z + oblique.crossing_height) * s;
        (
            (-oblique.half_width - shift) / c,
            (oblique.half_width - shift) / c,
        )
    }
}

/// Fills `buf` with the semi-classical potential on `grid` and returns the
/// index range `[lo, hi)` outside of which every entry is zero.
pub fn fill_semiclassical(
    buf: &mut [f64],
    grid: &Grid1d,
    t: f64,
    vertical: &GuideSpec,
    oblique: &GuideSpec,
    timing: &TimingSequence,
) -> (usize, usize) {
    assert_eq!(buf.len(), grid.n);
    let (x_lo, x_hi) = semiclassical_support(t, vertical, oblique, timing);
    let dx = grid.dx();
    let lo = (((x_lo - grid.min) / dx - 0.5).floor().max(0.0)) as usize;
    let hi = ((((x_hi - grid.min) / dx - 0.5).ceil() + 1.0) as usize).min(grid.n);
    if lo >= hi {
        return (0, 0);
    }
    buf[..lo].iter_mut().for_each(|v| *v = 0.0);
    buf[hi..].iter_mut().for_each(|v| *v = 0.0);
    if t <= timing.t_c {
        for i in lo..hi {
            buf[i] = vertical_potential(grid.x(i), vertical);
        }
    } else {
        let z = classical_z(t, timing, oblique.angle);
        for i in lo..hi {
            buf[i] = oblique_potential(grid.x(i), z, oblique);
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{degree, microkelvin, micrometer, millimeter};

    fn guides() -> (GuideSpec, GuideSpec) {
        let v = GuideSpec::vertical_from_waist(microkelvin(30.0), micrometer(100.0)).unwrap();
        let o = GuideSpec::oblique_from_waist(
            microkelvin(30.0),
            micrometer(100.0),
            degree(10.0),
            millimeter(4.0),
        )
        .unwrap();
        (v, o)
    }

    #[test]
    fn vertical_well_shape() {
        let (v, _) = guides();
        let u0 = v.depth;
        let l = v.half_width;
        assert_eq!(vertical_potential(0.0, &v), -u0);
        assert_eq!(vertical_potential(l, &v), 0.0);
        assert!(vertical_potential(-l, &v).abs() < 1e-40);
        assert!((vertical_potential(l / 2.0, &v) + u0 / 2.0).abs() < 1e-12 * u0);
        assert!(vertical_potential(1.01 * l, &v) == 0.0);
        // even in x
        for &x in &[0.3 * l, 0.77 * l, 0.999 * l] {
            assert!(
                (vertical_potential(x, &v) - vertical_potential(-x, &v)).abs() < 1e-12 * u0
            );
        }
    }

    #[test]
    fn oblique_well_shape() {
        let (_, o) = guides();
        let h = o.crossing_height;
        // crossing point sits on the axis
        assert_eq!(oblique_potential(0.0, -h, &o), -o.depth);
        // any point with x cos γ = -(z+h) sin γ is on the axis
        let z = -h - 2e-3;
        let x = -(z + h) * o.angle.tan();
        assert!((oblique_potential(x, z, &o) + o.depth).abs() < 1e-9 * o.depth);
        // window edge along x at the crossing height
        let edge = o.half_width / o.angle.cos();
        assert!(oblique_potential(edge, -h, &o).abs() < 1e-25 * o.depth);
    }

    #[test]
    fn classical_trajectory() {
        let timing = TimingSequence::new(millimeter(4.0), 1e-6, 0.1).unwrap();
        let gamma = degree(10.0);
        assert_eq!(classical_z(0.0, &timing, gamma), 0.0);
        // continuous at t_c with value -h from both branches
        let below = classical_z(timing.t_c * (1.0 - 1e-12), &timing, gamma);
        let above = classical_z(timing.t_c * (1.0 + 1e-12), &timing, gamma);
        assert!((below + millimeter(4.0)).abs() < 1e-12);
        assert!((above + millimeter(4.0)).abs() < 1e-12);
        // the fall-rate jump at t_c is exactly the factor cos γ (finite differences)
        let eps = 1e-9;
        let rate_before = (classical_z(timing.t_c, &timing, gamma)
            - classical_z(timing.t_c - eps, &timing, gamma))
            / eps;
        let rate_after = (classical_z(timing.t_c + eps, &timing, gamma)
            - classical_z(timing.t_c, &timing, gamma))
            / eps;
        assert!((rate_after / rate_before - gamma.cos()).abs() < 1e-4);
        // closed-form rate agrees with finite differences away from the switch
        let t = 1.7 * timing.t_c;
        let fd = (classical_z(t + eps, &timing, gamma) - classical_z(t - eps, &timing, gamma))
            / (2.0 * eps);
        assert!((fd - classical_z_rate(t, &timing, gamma)).abs() < 1e-5);
        // inverse
        let z = classical_z(t, &timing, gamma);
        assert!((time_at_depth(z, &timing, gamma) - t).abs() < 1e-12);
    }

    #[test]
    fn semiclassical_assembly() {
        let (v, o) = guides();
        let timing = TimingSequence::new(o.crossing_height, 1e-6, 0.1).unwrap();
        assert_eq!(semiclassical_potential(0.0, 0.0, &v, &o, &timing), -v.depth);
        // just after the switch the crossing point is the oblique axis
        let val = semiclassical_potential(0.0, timing.t_c + 1e-12, &v, &o, &timing);
        assert!((val + o.depth).abs() < 1e-6 * o.depth);
        // when the packet has fallen 7 mm below the crossing, the minimum sits
        // at x = 7 mm · tan γ
        let t = time_at_depth(-o.crossing_height - millimeter(7.0), &timing, o.angle);
        let x_min = millimeter(7.0) * o.angle.tan();
        let vmin = semiclassical_potential(x_min, t, &v, &o, &timing);
        assert!((vmin + o.depth).abs() < 1e-9 * o.depth, "minimum off-axis: {vmin}");
        assert!((x_min - 1.234e-3).abs() < 2e-6);
    }

    #[test]
    fn moving_frame_potential() {
        let (v, mut o) = guides();
        o.crossing_height = micrometer(10.0);
        let timing = TimingSequence::new(o.crossing_height, 1e-6, 0.1).unwrap();
        // identity frame transform at t = 0
        for &x in &[-5e-5, 0.0, 7e-5] {
            assert_eq!(
                bec_parallel_potential(x, 0.0, 0.0, &v, &o, &timing),
                vertical_potential(x, &v)
            );
        }
        // at t_c the lab height of the moving-frame origin is -h: on the axis
        let val = bec_parallel_potential(0.0, 0.0, timing.t_c, &v, &o, &timing);
        // t = t_c still selects the vertical branch; just above selects the oblique one
        assert_eq!(val, vertical_potential(0.0, &v));
        let val = bec_parallel_potential(0.0, 0.0, timing.t_c + 1e-9, &v, &o, &timing);
        assert!((val + o.depth).abs() < 1e-6 * o.depth);
        // a fixed moving-frame point eventually leaves the window
        let mut inside = 0;
        for k in 0..200 {
            let t = timing.t_c + 1e-4 * k as f64;
            if bec_parallel_potential(0.0, 0.0, t, &v, &o, &timing) < 0.0 {
                inside += 1;
            }
        }
        assert!(inside > 0 && inside < 200);
    }

    #[test]
    fn bounded_and_compact() {
        let (v, o) = guides();
        let timing = TimingSequence::new(o.crossing_height, 1e-6, 0.1).unwrap();
        let bound = v.depth.max(o.depth);
        for k in 0..400 {
            let t = 2.5e-4 * k as f64;
            let (lo, hi) = semiclassical_support(t, &v, &o, &timing);
            for i in -50..250 {
                let x = i as f64 * 2e-5;
                let val = semiclassical_potential(x, t, &v, &o, &timing);
                assert!(val <= 0.0 && val >= -bound);
                if val < 0.0 {
                    assert!(x >= lo && x <= hi);
                }
            }
            // support width: 2l0 before the switch, 2l1/cos γ after
            let width = hi - lo;
            let expect = if t <= timing.t_c {
                2.0 * v.half_width
            } else {
                2.0 * o.half_width / o.angle.cos()
            };
            assert!((width - expect).abs() < 1e-12);
        }
    }
}
