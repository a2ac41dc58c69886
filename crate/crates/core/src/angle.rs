//! Angle normalization helpers.

use core::f64::consts::PI;

/// Wraps an angle into the half-open interval `(-pi, pi]`.
///
/// The upper boundary is inclusive so that `wrap_to_pi(PI) == PI` and
/// `wrap_to_pi(-PI) == PI`; every heading stored by the simulator satisfies
/// this convention.
pub fn wrap_to_pi(angle: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = angle % two_pi;
    if r > PI {
        r -= two_pi;
    } else if r <= -PI {
        r += two_pi;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_into_half_open_interval() {
        assert_eq!(wrap_to_pi(0.0), 0.0);
        assert_eq!(wrap_to_pi(PI), PI);
        assert_eq!(wrap_to_pi(-PI), PI);
        assert_eq!(wrap_to_pi(3.0 * PI), PI);
        assert!((wrap_to_pi(2.0 * PI - 0.1) - (-0.1)).abs() < 1e-15);
        assert!((wrap_to_pi(-2.0 * PI + 0.1) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn idempotent_on_wrapped_values() {
        for i in -100..=100 {
            let a = 0.031 * i as f64;
            let w = wrap_to_pi(a);
            assert!(w > -PI && w <= PI, "wrap({a}) = {w} out of range");
            assert_eq!(wrap_to_pi(w), w);
        }
    }
}
