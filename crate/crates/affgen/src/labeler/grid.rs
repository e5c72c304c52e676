use nalgebra::Vector2;

/// Default grid spacing between candidate base placements, meters.
pub const DEFAULT_GRID_SPACING: f64 = 0.10;

/// Candidate base placements: an axis-aligned grid anchored at the target's
/// floor projection, restricted to the half-disc in front of it.
///
/// A grid point `p = target + (i*spacing, j*spacing)` is kept iff
/// `|p - target| <= reach` and `(p - target) . normal < 0`, where `normal` is
/// the approach direction (pointing from the open floor into the target), so
/// the selected half lies on the robot's side. The radius comparison carries
/// a relative slack of a few ulps so that grid coordinates rounded by the
/// `i*spacing` products match exact rational arithmetic.
///
/// Points are returned in row-major order: ascending `j`, then ascending `i`.
/// Requires `reach > 0` and `spacing > 0`.
pub fn sample_base_grid(
    target_floor: Vector2<f64>,
    normal: Vector2<f64>,
    reach: f64,
    spacing: f64,
) -> Vec<Vector2<f64>> {
    assert!(reach > 0.0, "reach must be positive");
    assert!(spacing > 0.0, "spacing must be positive");
    let n = (reach / spacing).floor() as i64 + 1;
    let r2 = reach * reach * (1.0 + 16.0 * f64::EPSILON);
    let mut out = Vec::new();
    for j in -n..=n {
        for i in -n..=n {
            let d = Vector2::new(i as f64 * spacing, j as f64 * spacing);
            if d.norm_squared() <= r2 && d.dot(&normal) < 0.0 {
                out.push(target_floor + d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact integer oracle for decimal (reach, spacing) pairs and axis
    /// normals: scale to millimeters and count lattice points.
    fn integer_count(reach_mm: i64, spacing_mm: i64) -> usize {
        let n = reach_mm / spacing_mm + 1;
        let mut count = 0;
        for j in -n..=n {
            for i in -n..=n {
                let dx = i * spacing_mm;
                let dy = j * spacing_mm;
                // normal (0, 1): keep dy < 0.
                if dx * dx + dy * dy <= reach_mm * reach_mm && dy < 0 {
                    count += 1;
                }
            }
        }
        count as usize
    }

    #[test]
    fn half_metre_reach_matches_integer_enumeration() {
        let pts = sample_base_grid(Vector2::new(0.0, 0.0), Vector2::new(0.0, 1.0), 0.5, 0.1);
        assert_eq!(integer_count(500, 100), 35);
        assert_eq!(pts.len(), 35);
        // Boundary membership: the point straight ahead at full reach is in.
        assert!(pts
            .iter()
            .any(|p| (p.x).abs() < 1e-12 && (p.y + 0.5).abs() < 1e-12));
    }

    #[test]
    fn robot_reaches_match_integer_enumeration() {
        for (reach_mm, spacing_mm) in [(850, 100), (700, 100), (800, 100), (850, 50)] {
            let pts = sample_base_grid(
                Vector2::new(1.0, 2.0),
                Vector2::new(0.0, 1.0),
                reach_mm as f64 / 1000.0,
                spacing_mm as f64 / 1000.0,
            );
            assert_eq!(
                pts.len(),
                integer_count(reach_mm, spacing_mm),
                "reach {reach_mm} mm spacing {spacing_mm} mm"
            );
        }
    }

    #[test]
    fn tiny_reach_gives_empty_set() {
        // Only the anchor cell could qualify, and it sits on the half-plane
        // boundary, which is excluded.
        let pts = sample_base_grid(Vector2::new(3.0, 1.0), Vector2::new(0.0, 1.0), 0.05, 0.1);
        assert!(pts.is_empty());
    }

    #[test]
    fn all_points_satisfy_both_conditions() {
        let t = Vector2::new(2.5, 0.3);
        let normal = Vector2::new(0.6, 0.8);
        let reach = 0.85;
        let pts = sample_base_grid(t, normal, reach, 0.1);
        assert!(!pts.is_empty());
        for p in &pts {
            let d = p - t;
            assert!(d.norm() <= reach * (1.0 + 1e-12));
            assert!(d.dot(&normal) < 0.0);
        }
        // Count agrees with an independent brute-force scan over a box.
        let mut count = 0;
        for j in -20..=20 {
            for i in -20..=20 {
                let d = Vector2::new(f64::from(i) * 0.1, f64::from(j) * 0.1);
                if d.norm_squared() <= reach * reach * (1.0 + 16.0 * f64::EPSILON)
                    && d.dot(&normal) < 0.0
                {
                    count += 1;
                }
            }
        }
        assert_eq!(pts.len(), count);
    }

    #[test]
    fn grid_is_anchored_at_the_target() {
        let t = Vector2::new(1.23, 4.56);
        for p in sample_base_grid(t, Vector2::new(0.0, 1.0), 0.3, 0.1) {
            let d = p - t;
            let i = d.x / 0.1;
            let j = d.y / 0.1;
            assert!((i - i.round()).abs() < 1e-9, "offset {d:?} is off-lattice");
            assert!((j - j.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn order_is_row_major_ascending() {
        let pts = sample_base_grid(Vector2::zeros(), Vector2::new(0.0, 1.0), 0.3, 0.1);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            assert!(a.y < b.y || (a.y == b.y && a.x < b.x), "order broken: {a:?} then {b:?}");
        }
    }
}
