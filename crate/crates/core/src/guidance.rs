//! Arcsine vector-field guidance.
//!
//! Every point in the plane is assigned a desired heading: the local path
//! tangent, rotated toward the path by an arcsine-shaped offset that grows
//! from 0 on the path to pi/2 far away. A proportional law converts the
//! heading error into a turn-rate command.

#[cfg(not(feature = "std"))]
use crate::float::FloatMath;
use crate::angle::wrap_to_pi;
use crate::path::{cross_track_error, tangent_direction, PathSpec, Position2D};
use crate::SimError;
use core::f64::consts::FRAC_PI_2;

/// Gains of the guidance layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceParams {
    /// Guidance gain shaping the offset angle (per m^2).
    pub k_g: f64,
    /// Proportional heading-control gain (per second).
    pub k_psi: f64,
    /// Optional symmetric clamp on the total turn-rate command (rad/s).
    /// `None` leaves the kinematic model's turn rate unbounded.
    pub max_omega: Option<f64>,
}

impl GuidanceParams {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.k_g > 0.0 && self.k_g.is_finite()) {
            return Err(SimError::InvalidParams("k_g must be > 0"));
        }
        if !(self.k_psi > 0.0 && self.k_psi.is_finite()) {
            return Err(SimError::InvalidParams("k_psi must be > 0"));
        }
        if let Some(m) = self.max_omega {
            if !(m > 0.0) {
                return Err(SimError::InvalidParams("max_omega must be > 0 when set"));
            }
        }
        Ok(())
    }
}

/// The arcsine offset angle `pi/2 - asin(1 / (1 + k_g eps^2))`.
///
/// Even in `eps`, zero on the path, and approaching pi/2 far from it; the
/// asin argument lies in (0, 1] for every finite input.
pub fn offset_angle(k_g: f64, eps: f64) -> f64 {
    FRAC_PI_2 - (1.0 / (1.0 + k_g * eps * eps)).asin()
}

/// Desired heading at position `p`: the path tangent, offset toward the path.
///
/// Left of the path (eps <= 0) the offset subtracts, turning the field
/// rightward; right of it the offset adds. Both branches meet continuously at
/// eps = 0 where the offset vanishes.
pub fn desired_heading(path: &PathSpec, k_g: f64, p: Position2D) -> f64 {
    let eps = cross_track_error(path, p);
    let chi_p = tangent_direction(path, p);
    let chi_o = offset_angle(k_g, eps);
    if eps <= 0.0 {
        chi_p - chi_o
    } else {
        chi_p + chi_o
    }
}

/// Proportional turn-rate command `k_psi * wrap(psi_des - psi)`.
///
/// The heading error is wrapped into `(-pi, pi]` first so the command never
/// requests a turn longer than a half-circle.
pub fn heading_rate_command(k_psi: f64, psi_des: f64, psi: f64) -> f64 {
    k_psi * wrap_to_pi(psi_des - psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    const K_G: f64 = 0.05;

    #[test]
    fn offset_angle_examples() {
        assert_eq!(offset_angle(K_G, 0.0), 0.0);
        // Saturates toward pi/2 far from the path.
        assert!((offset_angle(K_G, 1e6) - FRAC_PI_2).abs() < 1e-3);
        assert!((offset_angle(K_G, -1e6) - FRAC_PI_2).abs() < 1e-3);
        // Direct evaluation: pi/2 - asin(1/6).
        assert_abs_diff_eq!(offset_angle(K_G, 10.0), FRAC_PI_2 - (1.0 / 6.0_f64).asin(), epsilon = 1e-15);
        assert_abs_diff_eq!(offset_angle(K_G, 10.0), 1.4033, epsilon = 1e-4);
    }

    #[test]
    fn desired_heading_straight_line_limits() {
        let line = PathSpec::StraightLine;
        assert_eq!(desired_heading(&line, K_G, Position2D::new(0.0, 3.0)), FRAC_PI_2);
        assert!((desired_heading(&line, K_G, Position2D::new(-1e6, 0.0)) - 0.0).abs() < 1e-3);
        assert!((desired_heading(&line, K_G, Position2D::new(1e6, 0.0)) - PI).abs() < 1e-3);
    }

    #[test]
    fn desired_heading_on_sinusoid_equals_tangent() {
        let s = PathSpec::Sinusoid { amplitude: 5.0, frequency: 0.075 };
        let p = Position2D::new(0.0, 0.0);
        assert_abs_diff_eq!(desired_heading(&s, K_G, p), 1.0_f64.atan2(0.375), epsilon = 1e-15);
    }

    #[test]
    fn desired_heading_continuous_across_the_path() {
        let h = 1e-7;
        for path in [
            PathSpec::StraightLine,
            PathSpec::Sinusoid { amplitude: 5.0, frequency: 0.075 },
        ] {
            for y in [-40.0, 0.0, 17.3] {
                let x0 = path.x_at(y);
                let left = desired_heading(&path, K_G, Position2D::new(x0 - h, y));
                let right = desired_heading(&path, K_G, Position2D::new(x0 + h, y));
                assert!((left - right).abs() < 1e-6, "jump across path at y = {y}");
            }
        }
    }

    #[test]
    fn heading_rate_examples() {
        assert_eq!(heading_rate_command(2.3, 1.0, 1.0), 0.0);
        assert_abs_diff_eq!(heading_rate_command(2.3, FRAC_PI_2, 0.0), 2.3 * FRAC_PI_2, epsilon = 1e-15);
        // Wrapped error: 0.1 vs 2pi - 0.1 is a 0.2 rad turn, not 0.2 - 2pi.
        assert_abs_diff_eq!(heading_rate_command(2.3, 0.1, 2.0 * PI - 0.1), 0.46, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn offset_angle_even_and_bounded(eps in -1e6_f64..1e6, kg in 1e-4_f64..10.0) {
            let a = offset_angle(kg, eps);
            prop_assert!((0.0..FRAC_PI_2).contains(&a));
            prop_assert!((a - offset_angle(kg, -eps)).abs() < 1e-12);
        }

        #[test]
        fn straight_line_symmetry(eps in 1e-9_f64..1e5) {
            let line = PathSpec::StraightLine;
            let plus = desired_heading(&line, K_G, Position2D::new(eps, 0.0));
            let minus = desired_heading(&line, K_G, Position2D::new(-eps, 0.0));
            prop_assert!((minus - (PI - plus)).abs() < 1e-9);
        }
    }

    #[test]
    fn straight_line_monotone_steering() {
        let line = PathSpec::StraightLine;
        let mut prev = desired_heading(&line, K_G, Position2D::new(-1e6, 0.0));
        for i in 1..=2000 {
            let eps = -1e6 + i as f64 * (2e6 / 2000.0);
            let cur = desired_heading(&line, K_G, Position2D::new(eps, 0.0));
            assert!(cur >= prev - 1e-12, "steering not monotone at eps = {eps}");
            prev = cur;
        }
    }
}
