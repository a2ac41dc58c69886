//! Reference-path geometry.
//!
//! Two open path families are supported: the vertical straight line `x = 0`
//! and the sinusoid `x = A sin(k y)`. Both are graphs over the ordinate `y`,
//! which keeps every query (cross-track error, tangent, arc length) a closed
//! form or a one-dimensional numeric problem.

#[cfg(not(feature = "std"))]
use crate::float::FloatMath;
use crate::SimError;
use core::f64::consts::{FRAC_PI_2, PI};

/// A reference path in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathSpec {
    /// The straight line `x = 0`, traversed toward increasing `y`.
    StraightLine,
    /// The sinusoid `x = amplitude * sin(frequency * y)`.
    ///
    /// `amplitude` is in meters, `frequency` in radians per meter; both must
    /// be positive.
    Sinusoid { amplitude: f64, frequency: f64 },
}

impl PathSpec {
    /// Checks the parameter invariants for this path.
    pub fn validate(&self) -> Result<(), SimError> {
        match *self {
            PathSpec::StraightLine => Ok(()),
            PathSpec::Sinusoid { amplitude, frequency } => {
                if !(amplitude > 0.0 && amplitude.is_finite()) {
                    return Err(SimError::InvalidParams("sinusoid amplitude must be > 0"));
                }
                if !(frequency > 0.0 && frequency.is_finite()) {
                    return Err(SimError::InvalidParams("sinusoid frequency must be > 0"));
                }
                Ok(())
            }
        }
    }

    /// The path abscissa at ordinate `y`.
    pub fn x_at(&self, y: f64) -> f64 {
        match *self {
            PathSpec::StraightLine => 0.0,
            PathSpec::Sinusoid { amplitude, frequency } => amplitude * (frequency * y).sin(),
        }
    }
}

/// A planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position2D {
    pub x: f64,
    pub y: f64,
}

impl Position2D {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Euclidean distance to another position.
    pub fn distance_to(&self, other: &Position2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Signed lateral deviation from the path, measured along the x axis at the
/// vehicle's own ordinate. Negative means left of the path.
pub fn cross_track_error(path: &PathSpec, p: Position2D) -> f64 {
    p.x - path.x_at(p.y)
}

/// Direction of the path tangent at ordinate `p.y`, in radians.
///
/// Computed as `atan2(1, dx/dy)` so the angle stays in `(0, pi)` and varies
/// continuously through points where the tangent is vertical.
pub fn tangent_direction(path: &PathSpec, p: Position2D) -> f64 {
    match *path {
        PathSpec::StraightLine => FRAC_PI_2,
        PathSpec::Sinusoid { amplitude, frequency } => {
            let slope = amplitude * frequency * (frequency * p.y).cos();
            1.0_f64.atan2(slope)
        }
    }
}

// 16-point Gauss-Legendre rule on [-1, 1].
const GL16_NODES: [f64; 16] = [
    -0.9894009349916499,
    -0.9445750230732326,
    -0.8656312023878318,
    -0.755404408355003,
    -0.6178762444026438,
    -0.45801677765722737,
    -0.2816035507792589,
    -0.09501250983763745,
    0.09501250983763745,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_WEIGHTS: [f64; 16] = [
    0.027152459411754037,
    0.062253523938647706,
    0.09515851168249259,
    0.12462897125553403,
    0.14959598881657676,
    0.16915651939500262,
    0.1826034150449236,
    0.18945061045506859,
    0.18945061045506859,
    0.1826034150449236,
    0.16915651939500262,
    0.14959598881657676,
    0.12462897125553403,
    0.09515851168249259,
    0.062253523938647706,
    0.027152459411754037,
];

/// Absolute tolerance for the arc-length quadrature.
const ARC_LENGTH_TOL: f64 = 1e-9;

fn speed_integrand(amplitude: f64, frequency: f64, t: f64) -> f64 {
    let g = amplitude * frequency * (frequency * t).cos();
    (1.0 + g * g).sqrt()
}

fn composite_gl16(amplitude: f64, frequency: f64, upper: f64, panels: u32) -> f64 {
    let h = upper / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (node, weight) in GL16_NODES.iter().zip(GL16_WEIGHTS.iter()) {
            acc += weight * speed_integrand(amplitude, frequency, mid + half * node);
        }
        total += acc * half;
    }
    total
}

/// Arc length of the path from the origin to ordinate `y`, in meters.
///
/// For the straight line this is `y` itself. For the sinusoid it is
/// `integral(0..y) sqrt(1 + (A k cos(k t))^2) dt`, evaluated by an adaptive
/// composite Gauss-Legendre rule refined until two successive panel counts
/// agree within 1e-9 absolute. Odd in `y` by construction.
pub fn arc_length(path: &PathSpec, y: f64) -> f64 {
    match *path {
        PathSpec::StraightLine => y,
        PathSpec::Sinusoid { amplitude, frequency } => {
            if y == 0.0 {
                return 0.0;
            }
            let r = y.abs();
            // Start near one panel per quarter period; the integrand is
            // analytic, so the rule converges spectrally from there.
            let mut panels = ((r * frequency / FRAC_PI_2).ceil() as u32).max(4);
            let mut coarse = composite_gl16(amplitude, frequency, r, panels);
            loop {
                let fine = composite_gl16(amplitude, frequency, r, panels * 2);
                if (fine - coarse).abs() <= ARC_LENGTH_TOL || panels >= (1 << 20) {
                    return if y < 0.0 { -fine } else { fine };
                }
                coarse = fine;
                panels *= 2;
            }
        }
    }
}

/// Golden-section tolerance (in the ordinate) for the closest-point search.
const CLOSEST_POINT_TOL: f64 = 1e-8;
/// Coarse samples across the two-period search window.
const CLOSEST_POINT_SAMPLES: usize = 1024;

/// Minimum Euclidean distance from `p` to the path.
///
/// The straight-line case is `|p.x|`. For the sinusoid the closest point is
/// searched over one spatial period on either side of `p.y` (the path is a
/// graph over `y`, so the nearest point cannot be farther than that at the
/// scales simulated): a 1024-point coarse scan followed by golden-section
/// refinement of the best bracket. Never exceeds `|cross_track_error|`.
pub fn distance_to_path(path: &PathSpec, p: Position2D) -> f64 {
    match *path {
        PathSpec::StraightLine => p.x.abs(),
        PathSpec::Sinusoid { amplitude, frequency } => {
            let dist_at = |yp: f64| -> f64 {
                (p.x - amplitude * (frequency * yp).sin()).hypot(p.y - yp)
            };
            let period = 2.0 * PI / frequency;
            let lo = p.y - period;
            let step = 2.0 * period / (CLOSEST_POINT_SAMPLES - 1) as f64;

            let mut best_idx = 0usize;
            let mut best = f64::INFINITY;
            for i in 0..CLOSEST_POINT_SAMPLES {
                let d = dist_at(lo + i as f64 * step);
                if d < best {
                    best = d;
                    best_idx = i;
                }
            }
            // The vertical drop to the curve at the query ordinate bounds the
            // answer by |epsilon|; keep it as a candidate so the bound holds
            // exactly even if the coarse grid straddles it.
            best = best.min(dist_at(p.y));

            let mut a = lo + best_idx.saturating_sub(1) as f64 * step;
            let mut b = lo + (best_idx + 1).min(CLOSEST_POINT_SAMPLES - 1) as f64 * step;
            let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
            let mut c = b - inv_phi * (b - a);
            let mut d = a + inv_phi * (b - a);
            let mut fc = dist_at(c);
            let mut fd = dist_at(d);
            while b - a > CLOSEST_POINT_TOL {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    fc = dist_at(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    fd = dist_at(d);
                }
            }
            best.min(fc).min(fd)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn sine() -> PathSpec {
        PathSpec::Sinusoid { amplitude: 5.0, frequency: 0.075 }
    }

    /// Brute-force trapezoid quadrature, independent of the GL path used by
    /// `arc_length`.
    fn trapezoid_arc_length(amplitude: f64, frequency: f64, y: f64, panels: usize) -> f64 {
        let h = y / panels as f64;
        let f = |t: f64| speed_integrand(amplitude, frequency, t);
        let mut acc = 0.5 * (f(0.0) + f(y));
        for i in 1..panels {
            acc += f(i as f64 * h);
        }
        acc * h
    }

    #[test]
    fn cross_track_error_definitions() {
        let line = PathSpec::StraightLine;
        assert_eq!(cross_track_error(&line, Position2D::new(-20.0, 5.0)), -20.0);

        let s = sine();
        let on_path = Position2D::new(5.0 * (0.075_f64 * 10.0).sin(), 10.0);
        assert_eq!(cross_track_error(&s, on_path), 0.0);
        assert_eq!(cross_track_error(&s, Position2D::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn tangent_direction_values() {
        let line = PathSpec::StraightLine;
        assert_eq!(tangent_direction(&line, Position2D::new(3.0, -7.0)), FRAC_PI_2);

        let s = sine();
        // Vertical tangent where cos(k y) = 0.
        let crest = Position2D::new(5.0, FRAC_PI_2 / 0.075);
        assert_abs_diff_eq!(tangent_direction(&s, crest), FRAC_PI_2, epsilon = 1e-12);
        // Direct arctangent evaluation at y = 0: atan2(1, 0.375).
        let at_zero = tangent_direction(&s, Position2D::new(0.0, 0.0));
        assert_abs_diff_eq!(at_zero, 1.0_f64.atan2(0.375), epsilon = 1e-15);
        assert_abs_diff_eq!(at_zero, 1.2120256565243244, epsilon = 1e-12);
    }

    #[test]
    fn tangent_direction_is_continuous_through_vertical_points() {
        let s = sine();
        let h = 1e-6;
        // Grid straddling several cos(k y) = 0 points.
        for i in 0..400 {
            let y = -2.0 * PI / 0.075 + i as f64 * (4.0 * PI / 0.075) / 400.0;
            let a = tangent_direction(&s, Position2D::new(0.0, y));
            let b = tangent_direction(&s, Position2D::new(0.0, y + h));
            assert!((a - b).abs() < 1e-4, "tangent jump at y = {y}: {a} vs {b}");
        }
    }

    #[test]
    fn arc_length_straight_line_is_identity() {
        assert_eq!(arc_length(&PathSpec::StraightLine, 7.5), 7.5);
        assert_eq!(arc_length(&PathSpec::StraightLine, -3.25), -3.25);
    }

    #[test]
    fn arc_length_degenerate_amplitude_reduces_to_y() {
        // A -> 0 makes the integrand 1; use a tiny amplitude as the limit check.
        let p = PathSpec::Sinusoid { amplitude: 1e-12, frequency: 0.075 };
        assert_abs_diff_eq!(arc_length(&p, 42.0), 42.0, epsilon = 1e-9);
    }

    #[test]
    fn arc_length_matches_trapezoid_oracle_over_one_period() {
        let y = 2.0 * PI / 0.075;
        // Frozen from the 1e7-panel trapezoid oracle; reproduced here at 1e6
        // panels (oracle error ~ h^2 ~ 7e-9 relative, well under the assert).
        let frozen = 86.6476180395007;
        let oracle = trapezoid_arc_length(5.0, 0.075, y, 1_000_000);
        assert_relative_eq!(oracle, frozen, max_relative = 1e-7);
        let got = arc_length(&sine(), y);
        assert_relative_eq!(got, frozen, max_relative = 1e-8);
    }

    #[test]
    fn distance_to_path_examples() {
        assert_eq!(distance_to_path(&PathSpec::StraightLine, Position2D::new(3.0, 99.0)), 3.0);

        let s = sine();
        let on_path = Position2D::new(5.0 * (0.075_f64 * 4.0).sin(), 4.0);
        assert!(distance_to_path(&s, on_path) < 1e-8);

        // Frozen from a 1e6-sample grid oracle with golden refinement.
        let d = distance_to_path(&s, Position2D::new(1.0, 0.0));
        assert!(d <= 1.0);
        assert_abs_diff_eq!(d, 0.9363408705637204, epsilon = 1e-7);
    }

    proptest! {
        #[test]
        fn arc_length_is_odd(y in -120.0_f64..120.0) {
            let s = sine();
            let plus = arc_length(&s, y);
            let minus = arc_length(&s, -y);
            prop_assert!((plus + minus).abs() <= 1e-9);
        }

        #[test]
        fn arc_length_strictly_increasing(y1 in -120.0_f64..120.0, dy in 1e-6_f64..40.0) {
            let s = sine();
            prop_assert!(arc_length(&s, y1 + dy) > arc_length(&s, y1));
        }

        #[test]
        fn arc_length_dominates_ordinate(y in -150.0_f64..150.0) {
            let s = sine();
            prop_assert!(arc_length(&s, y).abs() >= y.abs() - 1e-9);
        }

        #[test]
        fn on_path_points_have_zero_cross_track_error(y in -200.0_f64..200.0) {
            let s = sine();
            let p = Position2D::new(s.x_at(y), y);
            prop_assert_eq!(cross_track_error(&s, p), 0.0);
        }

        #[test]
        fn orthogonal_distance_bounded_by_cross_track_error(
            x in -40.0_f64..40.0,
            y in -100.0_f64..100.0,
        ) {
            let s = sine();
            let p = Position2D::new(x, y);
            let eps = cross_track_error(&s, p).abs();
            prop_assert!(distance_to_path(&s, p) <= eps + 1e-12);
        }
    }
}
