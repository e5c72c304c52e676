//! 2D footprint geometry on the floor plane: oriented rectangles, overlap
//! tests against discs and other rectangles, and segment clearance queries.
//!
//! All overlap predicates treat shapes as closed sets, so exact touching
//! counts as overlap.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

/// A rectangle on the floor with arbitrary yaw (radians, counterclockwise).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedRect {
    pub center: Vector2<f64>,
    pub half_extents: Vector2<f64>,
    pub yaw: f64,
}

/// Distance from `p` to the segment `a`-`b`.
pub fn point_segment_distance(p: Vector2<f64>, a: Vector2<f64>, b: Vector2<f64>) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn orientation(a: Vector2<f64>, b: Vector2<f64>, c: Vector2<f64>) -> f64 {
    (b - a).perp(&(c - a))
}

fn on_segment(a: Vector2<f64>, b: Vector2<f64>, p: Vector2<f64>) -> bool {
    p.x >= a.x.min(b.x) - 1e-12
        && p.x <= a.x.max(b.x) + 1e-12
        && p.y >= a.y.min(b.y) - 1e-12
        && p.y <= a.y.max(b.y) + 1e-12
}

/// Closed-segment intersection test, including collinear overlap.
pub fn segments_intersect(
    p1: Vector2<f64>,
    q1: Vector2<f64>,
    p2: Vector2<f64>,
    q2: Vector2<f64>,
) -> bool {
    let d1 = orientation(p2, q2, p1);
    let d2 = orientation(p2, q2, q1);
    let d3 = orientation(p1, q1, p2);
    let d4 = orientation(p1, q1, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(p2, q2, p1))
        || (d2 == 0.0 && on_segment(p2, q2, q1))
        || (d3 == 0.0 && on_segment(p1, q1, p2))
        || (d4 == 0.0 && on_segment(p1, q1, q2))
}

/// Distance between two segments; zero when they intersect.
pub fn segment_segment_distance(
    p1: Vector2<f64>,
    q1: Vector2<f64>,
    p2: Vector2<f64>,
    q2: Vector2<f64>,
) -> f64 {
    if segments_intersect(p1, q1, p2, q2) {
        return 0.0;
    }
    // Disjoint segments attain their minimum distance at an endpoint.
    point_segment_distance(p1, p2, q2)
        .min(point_segment_distance(q1, p2, q2))
        .min(point_segment_distance(p2, p1, q1))
        .min(point_segment_distance(q2, p1, q1))
}

impl OrientedRect {
    pub fn new(center: Vector2<f64>, half_extents: Vector2<f64>, yaw: f64) -> Self {
        Self {
            center,
            half_extents,
            yaw,
        }
    }

    /// Axis-aligned rectangle (yaw 0).
    pub fn axis_aligned(center: Vector2<f64>, half_extents: Vector2<f64>) -> Self {
        Self::new(center, half_extents, 0.0)
    }

    /// Maps a world point into the rectangle's local frame, where the
    /// rectangle is axis-aligned and centered at the origin.
    fn to_local(&self, p: Vector2<f64>) -> Vector2<f64> {
        let d = p - self.center;
        let (s, c) = self.yaw.sin_cos();
        Vector2::new(c * d.x + s * d.y, -s * d.x + c * d.y)
    }

    fn from_local(&self, p: Vector2<f64>) -> Vector2<f64> {
        let (s, c) = self.yaw.sin_cos();
        self.center + Vector2::new(c * p.x - s * p.y, s * p.x + c * p.y)
    }

    /// The four corners in counterclockwise order.
    pub fn corners(&self) -> [Vector2<f64>; 4] {
        let h = self.half_extents;
        [
            self.from_local(Vector2::new(-h.x, -h.y)),
            self.from_local(Vector2::new(h.x, -h.y)),
            self.from_local(Vector2::new(h.x, h.y)),
            self.from_local(Vector2::new(-h.x, h.y)),
        ]
    }

    pub fn contains(&self, p: Vector2<f64>) -> bool {
        let l = self.to_local(p);
        l.x.abs() <= self.half_extents.x && l.y.abs() <= self.half_extents.y
    }

    /// Euclidean distance from `p` to the rectangle; zero inside.
    pub fn distance_to_point(&self, p: Vector2<f64>) -> f64 {
        let l = self.to_local(p);
        let dx = (l.x.abs() - self.half_extents.x).max(0.0);
        let dy = (l.y.abs() - self.half_extents.y).max(0.0);
        (dx * dx + dy * dy).sqrt()
    }

    /// Does a disc of `radius` around `center` touch the rectangle?
    pub fn overlaps_circle(&self, center: Vector2<f64>, radius: f64) -> bool {
        self.distance_to_point(center) <= radius
    }

    /// Rectangle-rectangle overlap by the separating-axis theorem: the four
    /// edge normals of the two rectangles are the only candidate axes.
    pub fn overlaps_rect(&self, other: &OrientedRect) -> bool {
        let axes = [
            Vector2::new(self.yaw.cos(), self.yaw.sin()),
            Vector2::new(-self.yaw.sin(), self.yaw.cos()),
            Vector2::new(other.yaw.cos(), other.yaw.sin()),
            Vector2::new(-other.yaw.sin(), other.yaw.cos()),
        ];
        let a = self.corners();
        let b = other.corners();
        for axis in axes {
            let (a_min, a_max) = project(&a, axis);
            let (b_min, b_max) = project(&b, axis);
            if a_max < b_min || b_max < a_min {
                return false;
            }
        }
        true
    }

    /// Distance from the segment `a`-`b` to the rectangle; zero when the
    /// segment touches or crosses it. A corridor of half-width `w` around
    /// the segment is clear of this rectangle iff the result exceeds `w`.
    pub fn distance_to_segment(&self, a: Vector2<f64>, b: Vector2<f64>) -> f64 {
        if self.contains(a) || self.contains(b) {
            return 0.0;
        }
        let c = self.corners();
        let mut best = f64::INFINITY;
        for i in 0..4 {
            let d = segment_segment_distance(a, b, c[i], c[(i + 1) % 4]);
            if d == 0.0 {
                return 0.0;
            }
            best = best.min(d);
        }
        best
    }
}

fn project(corners: &[Vector2<f64>; 4], axis: Vector2<f64>) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for c in corners {
        let d = c.dot(&axis);
        min = min.min(d);
        max = max.max(d);
    }
    (min, max)
}
