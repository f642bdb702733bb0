//! Planar primitives for sampled curves: segment distances and
//! horizontal-ray crossing tests on polylines. Points are complex numbers
//! (re, im) = (x, y).

use num_complex::Complex64;

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Distance from p to the segment [a, b].
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn proper_intersection(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Minimal distance between segments [a1, a2] and [b1, b2]; zero when they
/// cross. Collinear overlaps fall out of the endpoint projections.
pub fn segment_distance(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> f64 {
    if proper_intersection(a1, a2, b1, b2) {
        return 0.0;
    }
    point_segment_distance(a1, b1, b2)
        .min(point_segment_distance(a2, b1, b2))
        .min(point_segment_distance(b1, a1, a2))
        .min(point_segment_distance(b2, a1, a2))
}

/// Does the horizontal leftward ray from z cross the segment [p, q]?
///
/// Half-open in y (a crossing counts when p.im <= z.im < q.im or the
/// reverse), so a ray through a shared vertex of two chained segments is
/// counted exactly once.
pub fn leftward_ray_crosses(z: Complex64, p: Complex64, q: Complex64) -> bool {
    if (p.im <= z.im) == (q.im <= z.im) {
        return false;
    }
    let x = p.re + (z.im - p.im) * (q.re - p.re) / (q.im - p.im);
    x < z.re
}
