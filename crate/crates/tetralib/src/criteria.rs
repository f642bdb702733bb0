//! Dividing curves between the two fixed points and the checks that
//! qualify a candidate Abel function along them: side classification,
//! separation from the unit translate, monotone divergence, and
//! translation covering of the plane.
//!
//! Curves are compared as polylines with explicit tolerances; divergence
//! to +-i*infinity is tested as a finite-threshold trend with the
//! threshold recorded in the report.

use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fixpoint::{Base, FixedPointData};
use crate::geometry::{leftward_ray_crosses, point_segment_distance, segment_distance};

/// Touch tolerance for injectivity and disjointness tests on polylines.
pub const GEOMETRY_TOL: f64 = 1e-9;

/// Default trend threshold standing in for divergence of Im along a curve.
pub const DIVERGENCE_THRESHOLD: f64 = 3.0;

/// Planar curve sampled at strictly increasing parameters inside (-1, 1),
/// carrying the parameter-limit endpoints separately (they are typically
/// singular for the maps applied to the curve and are never sampled).
#[derive(Debug, Clone)]
pub struct SampledCurve {
    params: Vec<f64>,
    points: Vec<Complex64>,
    pub endpoint_a: Complex64,
    pub endpoint_b: Complex64,
}

impl SampledCurve {
    pub fn new(
        params: Vec<f64>,
        points: Vec<Complex64>,
        endpoint_a: Complex64,
        endpoint_b: Complex64,
    ) -> Result<Self> {
        if params.len() != points.len() || params.len() < 2 {
            return Err(Error::InvalidCurve(
                "need as many points as parameters, and at least two".into(),
            ));
        }
        if params[0] <= -1.0
            || *params.last().unwrap() >= 1.0
            || params.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidCurve(
                "parameters must increase strictly inside (-1, 1)".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCurve("consecutive points coincide".into()));
        }
        Ok(SampledCurve {
            params,
            points,
            endpoint_a,
            endpoint_b,
        })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The vertical segment between the two fixed points, sampled at n
/// Chebyshev-clustered parameters truncated at |t| = 1 - 1e-4. Endpoint
/// limits are the fixed points themselves.
pub fn curve_ell(fp: &FixedPointData, n: usize) -> SampledCurve {
    assert!(n >= 16, "need at least 16 samples");
    const T_EDGE: f64 = 1.0 - 1e-4;
    let params: Vec<f64> = (0..n)
        .map(|j| -T_EDGE * (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos())
        .collect();
    let points = params
        .iter()
        .map(|&t| Complex64::new(fp.l.re, fp.l.im * t))
        .collect();
    SampledCurve {
        params,
        points,
        endpoint_a: fp.l_conj,
        endpoint_b: fp.l,
    }
}

/// Image of a curve under the base map, applied pointwise (endpoints too).
pub fn push_curve(curve: &SampledCurve, base: Base) -> SampledCurve {
    SampledCurve {
        params: curve.params.clone(),
        points: curve.points.iter().map(|&z| base.exp(z)).collect(),
        endpoint_a: base.exp(curve.endpoint_a),
        endpoint_b: base.exp(curve.endpoint_b),
    }
}

/// Which check a report belongs to. A is translation covering, B is
/// separation of a curve from its unit translate, C is monotone divergence
/// along a curve; the initial-curve report validates curve geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    A,
    B,
    C,
    InitialCurve,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::A => write!(f, "A"),
            Criterion::B => write!(f, "B"),
            Criterion::C => write!(f, "C"),
            Criterion::InitialCurve => write!(f, "initial-curve"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub index: usize,
    pub location: Complex64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub passed: bool,
    pub sample_count: usize,
    pub witnesses: Vec<Witness>,
}

impl CriterionReport {
    fn conclude(criterion: Criterion, sample_count: usize, mut witnesses: Vec<Witness>) -> Self {
        witnesses.sort_by_key(|w| w.index);
        CriterionReport {
            criterion,
            passed: witnesses.is_empty(),
            sample_count,
            witnesses,
        }
    }
}

/// Segment index pairs (i, j), i <= j, where the polyline touches itself:
/// non-adjacent segments within the touch tolerance, chained segments that
/// fold back onto each other, or a degenerate (duplicated-point) segment.
fn self_touches(points: &[Complex64]) -> Vec<(usize, usize)> {
    let mut hits = Vec::new();
    if points.len() < 2 {
        return hits;
    }
    for k in 0..points.len() - 1 {
        if (points[k + 1] - points[k]).norm() < GEOMETRY_TOL {
            hits.push((k, k));
        }
    }
    let segs = points.len() - 1;
    for i in 0..segs {
        for j in (i + 1)..segs {
            let (a, b) = (points[i], points[i + 1]);
            let (c, d) = (points[j], points[j + 1]);
            let touching = if j == i + 1 {
                point_segment_distance(a, c, d) < GEOMETRY_TOL
                    || point_segment_distance(d, a, b) < GEOMETRY_TOL
            } else {
                segment_distance(a, b, c, d) < GEOMETRY_TOL
            };
            if touching {
                hits.push((i, j));
            }
        }
    }
    hits
}

fn min_polyline_gap(p: &[Complex64], q: &[Complex64]) -> (f64, usize) {
    let mut best = f64::INFINITY;
    let mut at = 0;
    for i in 0..p.len() - 1 {
        for j in 0..q.len() - 1 {
            let d = segment_distance(p[i], p[i + 1], q[j], q[j + 1]);
            if d < best {
                best = d;
                at = i;
            }
        }
    }
    (best, at)
}

/// Validate a curve as a dividing curve for the base map: the curve and its
/// pointwise image must each be injective, mutually disjoint, and pinned to
/// the fixed points at the parameter limits.
pub fn is_initial_curve(curve: &SampledCurve, base: Base) -> CriterionReport {
    let mut witnesses = Vec::new();
    let n = curve.len();

    for (endpoint, name) in [(curve.endpoint_a, "start"), (curve.endpoint_b, "end")] {
        let moved = (base.exp(endpoint) - endpoint).norm();
        if !(moved <= 1e-10) {
            witnesses.push(Witness {
                index: 0,
                location: endpoint,
                detail: format!("{name} endpoint moves by {moved:.3e} under the base map"),
            });
        }
    }

    let image: Vec<Complex64> = curve.points.iter().map(|&z| base.exp(z)).collect();
    for (i, j) in self_touches(&curve.points) {
        witnesses.push(Witness {
            index: i,
            location: curve.points[i],
            detail: format!("curve segments {i} and {j} touch"),
        });
    }
    for (i, j) in self_touches(&image) {
        witnesses.push(Witness {
            index: i,
            location: image[i],
            detail: format!("image segments {i} and {j} touch"),
        });
    }

    let (gap, at) = min_polyline_gap(&curve.points, &image);
    if gap <= GEOMETRY_TOL {
        witnesses.push(Witness {
            index: at,
            location: curve.points[at],
            detail: format!("curve and image come within {gap:.3e}"),
        });
    }

    CriterionReport::conclude(Criterion::InitialCurve, n, witnesses)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    OnCurve,
}

fn side_of(points: &[Complex64], z: Complex64) -> Side {
    let near = points
        .windows(2)
        .map(|w| point_segment_distance(z, w[0], w[1]))
        .fold(f64::INFINITY, f64::min);
    if near <= 1e-12 {
        return Side::OnCurve;
    }
    let first = points[0];
    let last = *points.last().unwrap();
    let below = Complex64::new(first.re, first.im - 1e12);
    let above = Complex64::new(last.re, last.im + 1e12);
    let mut crossings = 0usize;
    let mut prev = below;
    for &p in points.iter().chain(std::iter::once(&above)) {
        if leftward_ray_crosses(z, prev, p) {
            crossings += 1;
        }
        prev = p;
    }
    if crossings.is_multiple_of(2) {
        Side::Left
    } else {
        Side::Right
    }
}

/// Classify z against the curve extended straight down from its first
/// sample and straight up from its last. The curve must trend upward;
/// points far to the left are Left.
pub fn classify_side(curve: &SampledCurve, z: Complex64) -> Result<Side> {
    let first = curve.points[0];
    let last = *curve.points.last().unwrap();
    if !(last.im > first.im) {
        return Err(Error::InvalidCurve(
            "side classification needs an upward-trending curve".into(),
        ));
    }
    Ok(side_of(&curve.points, z))
}

fn evaluate_along<F>(
    alpha: &F,
    curve: &SampledCurve,
    witnesses: &mut Vec<Witness>,
) -> Option<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut values = Vec::with_capacity(curve.len());
    for (k, &z) in curve.points.iter().enumerate() {
        match alpha(z) {
            Ok(w) => values.push(w),
            Err(e) => witnesses.push(Witness {
                index: k,
                location: z,
                detail: format!("evaluation failed: {e}"),
            }),
        }
    }
    if values.len() == curve.len() {
        Some(values)
    } else {
        None
    }
}

fn divergence_witnesses(values: &[Complex64], threshold: f64, witnesses: &mut Vec<Witness>) {
    let n = values.len();
    for k in 0..5.min(n) {
        if !(values[k].im < -threshold) {
            witnesses.push(Witness {
                index: k,
                location: values[k],
                detail: format!(
                    "low-end trend: Im {:.6} not below -{threshold}",
                    values[k].im
                ),
            });
        }
    }
    for k in n.saturating_sub(5)..n {
        if !(values[k].im > threshold) {
            witnesses.push(Witness {
                index: k,
                location: values[k],
                detail: format!(
                    "high-end trend: Im {:.6} not above {threshold}",
                    values[k].im
                ),
            });
        }
    }
}

/// Monotone divergence along the curve: Im(alpha(curve)) must increase
/// strictly sample to sample, and the first/last five samples must clear
/// -threshold/+threshold as the finite stand-in for divergence.
pub fn check_criterion_c<F>(alpha: F, curve: &SampledCurve, threshold: f64) -> CriterionReport
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut witnesses = Vec::new();
    let Some(values) = evaluate_along(&alpha, curve, &mut witnesses) else {
        return CriterionReport::conclude(Criterion::C, curve.len(), witnesses);
    };

    for k in 0..values.len() - 1 {
        if !(values[k + 1].im - values[k].im > 1e-12) {
            witnesses.push(Witness {
                index: k + 1,
                location: values[k + 1],
                detail: format!(
                    "Im not strictly increasing: {:.9} after {:.9}",
                    values[k + 1].im,
                    values[k].im
                ),
            });
            break;
        }
    }
    divergence_witnesses(&values, threshold, &mut witnesses);
    CriterionReport::conclude(Criterion::C, curve.len(), witnesses)
}

/// Separation of the mapped curve from its unit translate: alpha(curve)
/// must be injective, stay farther than the touch tolerance from its
/// translate by +1, and show the same divergence trend as criterion C.
pub fn check_criterion_b<F>(alpha: F, curve: &SampledCurve, threshold: f64) -> CriterionReport
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut witnesses = Vec::new();
    let Some(values) = evaluate_along(&alpha, curve, &mut witnesses) else {
        return CriterionReport::conclude(Criterion::B, curve.len(), witnesses);
    };

    for (i, j) in self_touches(&values) {
        witnesses.push(Witness {
            index: i,
            location: values[i],
            detail: format!("mapped-curve segments {i} and {j} touch"),
        });
    }

    let shifted: Vec<Complex64> = values.iter().map(|w| w + 1.0).collect();
    let (gap, at) = min_polyline_gap(&values, &shifted);
    if gap <= GEOMETRY_TOL {
        witnesses.push(Witness {
            index: at,
            location: values[at],
            detail: format!("mapped curve comes within {gap:.3e} of its unit translate"),
        });
    }

    divergence_witnesses(&values, threshold, &mut witnesses);
    CriterionReport::conclude(Criterion::B, curve.len(), witnesses)
}

/// The closed sector between the fixed points: Re z >= Re L and |z| <= |L|,
/// with the fixed points themselves excluded.
#[derive(Debug, Clone)]
pub struct InitialRegionH {
    fp: FixedPointData,
}

impl InitialRegionH {
    pub fn new(fp: FixedPointData) -> Result<Self> {
        let region = InitialRegionH { fp };
        if !region.contains(Complex64::new(1.0, 0.0)) {
            return Err(Error::InvalidParams(
                "the region between the fixed points must contain 1".into(),
            ));
        }
        Ok(region)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.fp.l.re
            && z.norm() <= self.fp.l.norm()
            && (z - self.fp.l).norm() > 1e-12
            && (z - self.fp.l_conj).norm() > 1e-12
    }

    pub fn fixed_point(&self) -> &FixedPointData {
        &self.fp
    }
}

/// Axis-aligned probe window for the covering check.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

fn halton(index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index + 1;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Translation covering: every probe point w in the window must admit an
/// integer k in k_range with w - k inside the alpha-image of the region.
/// Membership is decided against the mapped boundary curve zeta: the image
/// is the set right of (or on) zeta and left of (or on) zeta + 1, the
/// translate standing in for the image of the region's curved edge.
pub fn check_covering<F>(
    alpha: F,
    region: &InitialRegionH,
    window: &Window,
    k_range: RangeInclusive<i64>,
    samples: usize,
) -> CriterionReport
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    const BOUNDARY_SAMPLES: usize = 201;
    let ell = curve_ell(region.fixed_point(), BOUNDARY_SAMPLES);
    let mut witnesses = Vec::new();
    let Some(zeta) = evaluate_along(&alpha, &ell, &mut witnesses) else {
        return CriterionReport::conclude(Criterion::A, samples, witnesses);
    };

    'pairs: for i in 0..zeta.len() {
        for j in (i + 1)..zeta.len() {
            if (zeta[i] - zeta[j]).norm() < 1e-10 {
                witnesses.push(Witness {
                    index: i,
                    location: zeta[i],
                    detail: format!("boundary samples {i} and {j} map together"),
                });
                break 'pairs;
            }
        }
    }
    if !(zeta.last().unwrap().im > zeta[0].im) {
        witnesses.push(Witness {
            index: 0,
            location: zeta[0],
            detail: "mapped boundary does not trend upward".into(),
        });
    }
    if !witnesses.is_empty() {
        return CriterionReport::conclude(Criterion::A, samples, witnesses);
    }

    let shifted: Vec<Complex64> = zeta.iter().map(|w| w + 1.0).collect();
    for s in 0..samples {
        let w = Complex64::new(
            window.x0 + (window.x1 - window.x0) * halton(s, 2),
            window.y0 + (window.y1 - window.y0) * halton(s, 3),
        );
        let covered = k_range.clone().any(|k| {
            let p = w - k as f64;
            side_of(&zeta, p) != Side::Left && side_of(&shifted, p) != Side::Right
        });
        if !covered {
            witnesses.push(Witness {
                index: s,
                location: w,
                detail: "no translate places the point in the mapped region".into(),
            });
        }
    }
    CriterionReport::conclude(Criterion::A, samples, witnesses)
}

/// The classical bounded reparameterization x + sin(2 pi x)/(4 pi).
/// Composed after any solution of the translation equation it yields
/// another solution (on the reals the derivative 1 + cos(2 pi x)/2 stays
/// positive), so it serves as the negative control for the checks.
pub fn szekeres_perturbation(w: Complex64) -> Complex64 {
    w + (w * std::f64::consts::TAU).sin() / (4.0 * std::f64::consts::PI)
}
