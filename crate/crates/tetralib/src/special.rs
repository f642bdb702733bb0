//! The 4-exponential sexp_b on the cut plane, its inverse slog_b, and
//! fractional iterates of exp_b built from the pair.
//!
//! Everything here reduces to the converged strip table: sexp shifts the
//! argument into Re in [-1/2, 1/2] and walks back out with exp_b or the
//! principal log_b, slog inverts sexp by Newton from calibrated seeds, and
//! exp_b^c(z) = sexp(c + slog(z)).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::StripTable;

/// Descent rules for the leftward (log_b) shifts inside [`sexp`].
///
/// The branch is always the principal one, -pi < Im ln <= pi; the policy only
/// caps how many descents a single evaluation may take.
#[derive(Debug, Clone, Copy)]
pub struct BranchPolicy {
    pub max_descents: usize,
}

impl Default for BranchPolicy {
    fn default() -> Self {
        BranchPolicy { max_descents: 64 }
    }
}

/// The domain C_{-2}: everything except the real ray x <= -2.
pub fn in_domain(z: Complex64) -> bool {
    !(z.im == 0.0 && z.re <= -2.0)
}

/// Evaluate sexp_b(z) from the table, with the default descent policy.
pub fn sexp(table: &StripTable, z: Complex64) -> Result<Complex64> {
    sexp_with_policy(table, z, &BranchPolicy::default())
}

/// ln(1e300); one more exp_b would leave the representable range.
const TOWER_CEIL: f64 = 690.775527898213_7;

/// Evaluate sexp_b(z), shifting by at most `policy.max_descents` logs.
pub fn sexp_with_policy(
    table: &StripTable,
    z: Complex64,
    policy: &BranchPolicy,
) -> Result<Complex64> {
    if !in_domain(z) {
        return Err(Error::OutsideDomain { z });
    }
    let max_im = table.height() - 1.0;
    if !(z.im.abs() <= max_im + 1e-12) {
        return Err(Error::DomainClipped { z, max_im });
    }
    let k = z.re.round();
    let mut v = table.evaluate(z - Complex64::new(k, 0.0))?;
    let base = table.base();
    if k >= 1.0 {
        for _ in 0..k as i64 {
            if (v * base.beta()).re > TOWER_CEIL {
                return Err(Error::Overflow { z });
            }
            v = base.exp(v);
        }
    } else if k <= -1.0 {
        let descents = (-k) as usize;
        if descents > policy.max_descents {
            return Err(Error::InvalidParams(format!(
                "evaluation at {z} needs {descents} descents; the policy allows {}",
                policy.max_descents
            )));
        }
        for _ in 0..descents {
            if v.norm_sqr() == 0.0 {
                return Err(Error::BranchViolation { at: v });
            }
            v = base.log(v);
        }
    }
    Ok(v)
}

/// Invert sexp_b: returns w with sexp(w) = z and slog(1) = 0.
///
/// The branch is the continuation of the real-axis inverse, anchored at
/// slog(1) = 0. sexp takes every value near the fixed point on a whole
/// ladder of preimages spaced by the period 2*pi*i/ln(c), so no pointwise
/// seed heuristic can pick the right one; instead w is tracked by
/// warm-started Newton along a fixed route from 1 to z (see route_legs for
/// the cut convention and hazards the routes respect). The lower half
/// plane is the conjugate of the upper.
pub fn slog(table: &StripTable, z: Complex64) -> Result<Complex64> {
    let fp = table.fixed_point();
    if z.im < 0.0 {
        return slog(table, z.conj()).map(|w| w.conj());
    }
    if (z - fp.l).norm() < 1e-9 || (z - fp.l.conj()).norm() < 1e-9 {
        return Err(Error::AtFixedPoint);
    }
    if z == Complex64::new(1.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if z.im == 0.0 {
        return slog_upper(table, z).map(|w| Complex64::new(w.re, 0.0));
    }
    slog_upper(table, z)
}

fn slog_upper(table: &StripTable, z: Complex64) -> Result<Complex64> {
    let fp = table.fixed_point();

    const GATE: f64 = 0.4;
    let offset = z - fp.l;
    let outer = if offset.norm() < GATE {
        fp.l + offset * (GATE / offset.norm())
    } else {
        z
    };

    let mut w = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for leg in route_legs(table, outer) {
        w = continue_leg(table, cur, leg, w)?;
        cur = leg;
    }
    if offset.norm() < GATE {
        w = radial_leg(table, z, outer, w)?;
    }
    Ok(w)
}

/// Does the segment [a, b] cross the leftward half-line at height
/// `line_im` with tip at `tip_re` (with a small safety margin)?
fn crosses_leftline(a: Complex64, b: Complex64, line_im: f64, tip_re: f64) -> bool {
    if (a.im <= line_im) == (b.im <= line_im) {
        return false;
    }
    let re_at = a.re + (line_im - a.im) * (b.re - a.re) / (b.im - a.im);
    re_at <= tip_re + 0.15
}

/// Polyline from 1 to `target` in the closed upper half plane.
///
/// The routes pin the branch: the cut of slog runs leftward from the fixed
/// point along Im z = Im L (mirrored in the lower half plane), and no route
/// crosses it. They also keep clear of two numerical hazards: the fixed
/// point itself, where Newton basins shrink, and the half-line
/// Im z = pi/ln b, Re z <= -2, where a near-singular sheet with w close to
/// -2 shadows the principal one and can capture a warm start.
fn route_legs(table: &StripTable, target: Complex64) -> Vec<Complex64> {
    let start = Complex64::new(1.0, 0.0);
    let l = table.fixed_point().l;
    let fun_im = std::f64::consts::PI / table.base().value().ln();
    let spine_tip = Complex64::new(-2.0, fun_im);
    let spine_far = Complex64::new(-1e9, fun_im);

    let clean = !crosses_leftline(start, target, l.im, l.re)
        && crate::geometry::point_segment_distance(l, start, target) >= 0.5
        && crate::geometry::segment_distance(start, target, spine_tip, spine_far) >= 0.8;
    if clean {
        return vec![target];
    }

    if target.im > fun_im + 1.2 || (target.im > l.im + 1.2 && target.re <= -1.0) {
        let high = (fun_im + 1.6).max(target.im);
        return vec![
            Complex64::new(start.re, high),
            Complex64::new(target.re, high),
            target,
        ];
    }

    // Around the fixed point: enter a circle about L on the lower right,
    // walk the arc to the target's bearing without wrapping past +-pi
    // (that would cross the cut), then step out radially.
    let r = (target - l).norm().clamp(0.55, 0.9);
    let entry = {
        let v = start - l;
        v.im.atan2(v.re)
    };
    let bearing = {
        let v = target - l;
        v.im.atan2(v.re)
    };
    let steps = ((bearing - entry).abs() / 0.5).ceil().max(1.0) as usize;
    let mut legs = Vec::with_capacity(steps + 2);
    for k in 0..=steps {
        let th = entry + (bearing - entry) * (k as f64 / steps as f64);
        legs.push(l + Complex64::from_polar(r, th));
    }
    legs.push(target);
    legs
}

/// Track the inverse along one straight leg by warm-started Newton. Steps
/// are capped in z-distance (relative once |z| is large) and a step that
/// moves w by more than 0.6 is rejected as a sheet hop; both guards keep
/// the walk on the sheet it started on.
fn continue_leg(
    table: &StripTable,
    from: Complex64,
    to: Complex64,
    w_start: Complex64,
) -> Result<Complex64> {
    let span = (to - from).norm();
    if span == 0.0 {
        return Ok(w_start);
    }
    let dir = (to - from) / span;
    let mut w = w_start;
    let mut done = 0.0f64;
    let mut backoff = 1.0f64;
    let mut budget = 30000usize;
    while done < span {
        let cursor = from + dir * done;
        let cap = (0.3 + 0.08 * cursor.norm()) * backoff;
        let step = cap.min(span - done);
        let next_z = from + dir * (done + step);
        let stalled = match newton_polish(table, next_z, w, 15) {
            Some(next_w) if (next_w - w).norm() <= 0.6 => {
                w = next_w;
                done += step;
                backoff = (backoff * 1.5).min(1.0);
                false
            }
            _ => {
                backoff *= 0.5;
                cap * 0.5 < 1e-9 * (1.0 + cursor.norm())
            }
        };
        budget -= 1;
        if stalled || budget == 0 {
            return Err(Error::NoConvergence {
                what: "slog continuation",
                residual: span - done,
            });
        }
    }
    Ok(w)
}

/// Walk the inverse from the gate circle to `zz` along the radius through
/// `zz`, shrinking the radius geometrically. One radius halving moves w by
/// about 0.5 near the fixed point, so warm Newton stays locked on the sheet
/// the continuation arrived on; no winding bookkeeping is needed.
fn radial_leg(
    table: &StripTable,
    zz: Complex64,
    outer: Complex64,
    w_outer: Complex64,
) -> Result<Complex64> {
    let fp = table.fixed_point();
    let offset = zz - fp.l;
    let dir = offset / offset.norm();
    let r_target = offset.norm();
    let mut r = (outer - fp.l).norm();
    let mut w = w_outer;
    let mut factor = 0.5f64;
    let mut budget = 600usize;
    while r > r_target {
        let next = (r * factor).max(r_target);
        let zr = fp.l + dir * next;
        match newton_polish(table, zr, w, 15) {
            Some(got) if (got - w).norm() <= 0.8 => {
                w = got;
                r = next;
                factor = 0.5;
            }
            _ => {
                factor = factor.sqrt();
                if 1.0 - factor < 1e-6 {
                    return Err(Error::NoConvergence {
                        what: "slog radial leg",
                        residual: r - r_target,
                    });
                }
            }
        }
        budget -= 1;
        if budget == 0 {
            return Err(Error::NoConvergence {
                what: "slog radial leg",
                residual: r - r_target,
            });
        }
    }
    newton_polish(table, zz, w, 25).ok_or(Error::NoConvergence {
        what: "slog radial leg",
        residual: 0.0,
    })
}

fn newton_polish(
    table: &StripTable,
    z: Complex64,
    seed: Complex64,
    max_iters: usize,
) -> Option<Complex64> {
    let max_im = table.height() - 1.0;
    let mut w = seed;
    for _ in 0..max_iters {
        let fw = sexp(table, w).ok()?;
        let r = fw - z;
        if r.norm() <= 1e-11 * (1.0 + z.norm()) {
            return Some(w);
        }
        let h = 1e-6;
        let left = sexp(table, w - Complex64::new(h, 0.0)).ok()?;
        let right = sexp(table, w + Complex64::new(h, 0.0)).ok()?;
        let deriv = (right - left) / (2.0 * h);
        if !deriv.is_finite() || deriv.norm() < 1e-280 {
            return None;
        }
        let mut step = r / deriv;
        if step.norm() > 0.5 {
            step *= 0.5 / step.norm();
        }
        w -= step;
        if w.im.abs() > max_im || !in_domain(w) {
            return None;
        }
    }
    None
}

/// Fractional iterate exp_b^c(z) = sexp(c + slog(z)).
pub fn iterate(table: &StripTable, c: Complex64, z: Complex64) -> Result<Complex64> {
    let w = slog(table, z)?;
    let t = c + w;
    if !in_domain(t) {
        return Err(Error::BranchViolation { at: t });
    }
    sexp(table, t)
}

/// CSV rows (c, x, y) for a family of real iterates; points where the branch
/// condition fails carry "nan" in the y column so the row count stays fixed.
pub fn emit_iterate_family(
    table: &StripTable,
    c_list: &[f64],
    x_range: (f64, f64),
    n_points: usize,
) -> String {
    let (x0, x1) = x_range;
    let mut out = String::from("c,x,y\n");
    for &c in c_list {
        for j in 0..n_points {
            let t = if n_points <= 1 {
                0.0
            } else {
                j as f64 / (n_points - 1) as f64
            };
            let x = x0 + (x1 - x0) * t;
            let y = iterate(table, Complex64::new(c, 0.0), Complex64::new(x, 0.0));
            match y {
                Ok(v) if v.im.abs() <= 1e-6 && v.re.is_finite() => {
                    out.push_str(&format!("{c:.16e},{x:.16e},{:.16e}\n", v.re));
                }
                _ => out.push_str(&format!("{c:.16e},{x:.16e},nan\n")),
            }
        }
    }
    out
}
