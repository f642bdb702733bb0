//! Solver for the tetration boundary-value problem on a vertical strip.
//!
//! The unknown is f (the would-be sexp_b) sampled on the imaginary-axis
//! segment [-iA, iA]. One sweep evaluates the Cauchy integral of f over the
//! rectangle [-1, 1] x [-A, A], whose boundary values are reconstructed from
//! the axis samples: exp_b(f) on the right edge, the principal log_b(f) on
//! the left edge, and an asymptotic model chi_inverse(kappa·e^(lambda·w)) on
//! the caps, kappa refitted from the samples each sweep. A fixed point of
//! the sweep is holomorphic in the rectangle with boundary values forced by
//! the functional equation, which pins f(z+1) = exp_b(f(z)).
//!
//! Quadrature is composite trapezoid with Euler-Maclaurin h^2 and h^4
//! endpoint corrections at the rectangle corners (the integrand is analytic
//! along each edge but the edges meet at angles, so the corrections do not
//! cancel and are the difference between ~1e-4 and ~1e-9 accuracy). Nodes
//! within distance 1 of a cap are slaved to the cap model rather than
//! updated through the integral: the quadrature's aliasing error grows like
//! e^(-2*pi*d/h) as the evaluation point approaches an edge, while the model
//! is reliable there (the true function's deviation from the regular
//! iterate decays like e^(-2*pi*Im z)).
//!
//! After the defect converges, a real shift sigma with f(sigma) = 1 is found
//! by Newton, the samples are re-expanded at the shifted points, and the
//! center node is set to exactly 1.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fixpoint::{principal_fixed_point, Base, FixedPointData};
use crate::koenigs::{chi, chi_inverse, KoenigsContext};

#[derive(Debug, Clone)]
pub struct SolverParams {
    /// Grid intervals on [-iA, iA]; the table stores n_nodes + 1 samples.
    /// Even, so that y = 0 is a sample point.
    pub n_nodes: usize,
    /// Half-height A of the rectangle.
    pub height: f64,
    /// Sup-norm defect |sweep(f) - f| at which iteration stops.
    pub tol: f64,
    pub max_iters: usize,
    /// Fraction of each sweep's update that is applied.
    pub damping: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            n_nodes: 128,
            height: 6.0,
            tol: 1e-10,
            max_iters: 5000,
            damping: 0.5,
        }
    }
}

/// Converged axis samples of sexp_b plus everything needed to evaluate it
/// off-axis through the Cauchy integral.
#[derive(Debug, Clone)]
pub struct StripTable {
    fp: FixedPointData,
    height: f64,
    n: usize,
    residual: f64,
    nodes: Vec<Complex64>,
    contour: ContourSet,
}

#[derive(Debug, Clone)]
struct ContourSet {
    /// Rectangle [-1, 1] x [-A, A]; serves Re z in [-1/2, 1/2].
    base: RectContour,
    /// Rectangle [0, 2] x [-A, A]; serves Re z near 1 for residual probes.
    shifted: RectContour,
}

#[derive(Debug, Clone)]
struct RectContour {
    edges: Vec<EdgeData>,
}

/// One directed contour edge: samples in traversal order plus the value jet
/// [F, F', F'', F'''] at both endpoints for the quadrature corrections.
#[derive(Debug, Clone)]
struct EdgeData {
    start: Complex64,
    dir: Complex64,
    step: f64,
    values: Vec<Complex64>,
    jet_start: [Complex64; 4],
    jet_end: [Complex64; 4],
}

/// Asymptotic cap model f(w) ~ chi_inverse(kappa·e^(lambda·w)).
#[derive(Debug, Clone)]
struct CapModel {
    ctx: KoenigsContext,
    kappa: Complex64,
    lambda: Complex64,
}

impl CapModel {
    fn value(&self, w: Complex64) -> Result<Complex64> {
        chi_inverse(&self.ctx, self.kappa * (self.lambda * w).exp())
    }

    /// [F, F', F'', F'''] at w by centered differences with a real step; the
    /// model varies on scale 1/|lambda| ~ 0.7, so d = 1e-2 keeps truncation
    /// and cancellation both far below the correction terms' weight.
    fn jet(&self, w: Complex64) -> Result<[Complex64; 4]> {
        let d = 1e-2;
        let fm2 = self.value(w - 2.0 * d)?;
        let fm1 = self.value(w - d)?;
        let f0 = self.value(w)?;
        let f1 = self.value(w + d)?;
        let f2 = self.value(w + 2.0 * d)?;
        let d1 = (fm2 - 8.0 * fm1 + 8.0 * f1 - f2) / (12.0 * d);
        let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * f1 - f2) / (12.0 * d * d);
        let d3 = (-fm2 + 2.0 * fm1 - 2.0 * f1 + f2) / (2.0 * d * d * d);
        Ok([f0, d1, d2, d3])
    }
}

fn h_prime(jet: &[Complex64; 4], w: Complex64, z: Complex64) -> Complex64 {
    let r = w - z;
    jet[1] / r - jet[0] / (r * r)
}

fn h_triple(jet: &[Complex64; 4], w: Complex64, z: Complex64) -> Complex64 {
    let r = w - z;
    let r2 = r * r;
    jet[3] / r - 3.0 * jet[2] / r2 + 6.0 * jet[1] / (r2 * r) - 6.0 * jet[0] / (r2 * r2)
}

fn edge_integral(e: &EdgeData, z: Complex64) -> Complex64 {
    let n = e.values.len() - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &v) in e.values.iter().enumerate() {
        let w = e.start + e.dir * (e.step * j as f64);
        let term = v / (w - z);
        acc += if j == 0 || j == n { 0.5 * term } else { term };
    }
    let w0 = e.start;
    let w1 = e.start + e.dir * (e.step * n as f64);
    let u2 = e.dir * e.dir;
    let h2 = e.step * e.step;
    let dh1 = h_prime(&e.jet_end, w1, z) - h_prime(&e.jet_start, w0, z);
    let dh3 = h_triple(&e.jet_end, w1, z) - h_triple(&e.jet_start, w0, z);
    e.dir * e.step * acc - u2 * (h2 / 12.0) * dh1 + u2 * u2 * (h2 * h2 / 720.0) * dh3
}

fn cauchy_eval(rect: &RectContour, z: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for e in &rect.edges {
        total += edge_integral(e, z);
    }
    total / Complex64::new(0.0, 2.0 * PI)
}

fn symmetrize(nodes: &mut [Complex64]) {
    let n = nodes.len() - 1;
    for j in 0..n / 2 {
        let avg = 0.5 * (nodes[n - j] + nodes[j].conj());
        nodes[n - j] = avg;
        nodes[j] = avg.conj();
    }
    nodes[n / 2] = Complex64::new(nodes[n / 2].re, 0.0);
}

/// Mean of chi(f)·e^(-lambda·iy) over the sample window [A-2, A-1] (mirrored
/// for the lower cap). The fit inherits the samples' accuracy: the wobble
/// modes it ignores are already down by e^(-2*pi*(A-2)) there.
fn fit_cap(
    ctx: &KoenigsContext,
    nodes: &[Complex64],
    height: f64,
    upper: bool,
) -> Result<CapModel> {
    let lambda = ctx.multiplier().ln();
    let n = nodes.len() - 1;
    let step = 2.0 * height / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut count = 0usize;
    for (j, &v) in nodes.iter().enumerate() {
        let y = -height + step * j as f64;
        let t = if upper { y } else { -y };
        if t >= height - 2.0 - 1e-9 && t <= height - 1.0 + 1e-9 {
            let u = chi(ctx, v)?;
            acc += u * (-lambda * Complex64::new(0.0, y)).exp();
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InvalidParams(
            "no samples in the cap fitting window; increase n_nodes".into(),
        ));
    }
    Ok(CapModel {
        ctx: ctx.clone(),
        kappa: acc / count as f64,
        lambda,
    })
}

fn fit_caps(
    ctx_up: &KoenigsContext,
    ctx_lo: &KoenigsContext,
    nodes: &[Complex64],
    height: f64,
) -> Result<(CapModel, CapModel)> {
    let mut top = fit_cap(ctx_up, nodes, height, true)?;
    let mut bot = fit_cap(ctx_lo, nodes, height, false)?;
    // conjugation symmetry of f makes the lower parameters the mirror of the
    // upper ones; averaging pins the symmetry exactly
    let kappa = 0.5 * (top.kappa + bot.kappa.conj());
    top.kappa = kappa;
    bot.kappa = kappa.conj();
    Ok((top, bot))
}

struct Workspace {
    base: Base,
    height: f64,
    n: usize,
    step: f64,
}

impl Workspace {
    fn y(&self, j: usize) -> f64 {
        -self.height + self.step * j as f64
    }

    /// Assemble the rectangle [shift-1, shift+1] x [-A, A]. shift 0 uses
    /// log_b(f) / exp_b(f) as the left/right edges; shift 1 uses f itself
    /// and exp_b(exp_b(f)).
    fn build_rect(
        &self,
        nodes: &[Complex64],
        cap_top: &CapModel,
        cap_bot: &CapModel,
        shift: i32,
    ) -> Result<RectContour> {
        let (x0, x1) = (shift as f64 - 1.0, shift as f64 + 1.0);
        let a = self.height;
        let n = self.n;

        let mut right = Vec::with_capacity(n + 1);
        let mut left = Vec::with_capacity(n + 1);
        for (j, &f) in nodes.iter().enumerate() {
            let y = self.y(j);
            if shift == 0 {
                if f.norm_sqr() == 0.0 || (f.im == 0.0 && f.re < 0.0) {
                    return Err(Error::BranchCollapse { node_y: y });
                }
                left.push(self.base.log(f));
                right.push(self.base.exp(f));
            } else {
                left.push(f);
                let e2 = self.base.exp(self.base.exp(f));
                if !e2.is_finite() {
                    return Err(Error::Overflow {
                        z: Complex64::new(x1, y),
                    });
                }
                right.push(e2);
            }
        }
        left.reverse(); // traversed downward

        let m = (2.0 / self.step).ceil() as usize;
        let cap_step = 2.0 / m as f64;
        let mut top = Vec::with_capacity(m + 1);
        let mut bot = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let t = cap_step * j as f64;
            top.push(cap_top.value(Complex64::new(x1 - t, a))?); // right to left
            bot.push(cap_bot.value(Complex64::new(x0 + t, -a))?); // left to right
        }

        let jet = |x: f64, upper: bool| -> Result<[Complex64; 4]> {
            if upper {
                cap_top.jet(Complex64::new(x, a))
            } else {
                cap_bot.jet(Complex64::new(x, -a))
            }
        };
        let tl = jet(x0, true)?;
        let tr = jet(x1, true)?;
        let bl = jet(x0, false)?;
        let br = jet(x1, false)?;

        let edges = vec![
            EdgeData {
                start: Complex64::new(x1, -a),
                dir: Complex64::new(0.0, 1.0),
                step: self.step,
                values: right,
                jet_start: br,
                jet_end: tr,
            },
            EdgeData {
                start: Complex64::new(x1, a),
                dir: Complex64::new(-1.0, 0.0),
                step: cap_step,
                values: top,
                jet_start: tr,
                jet_end: tl,
            },
            EdgeData {
                start: Complex64::new(x0, a),
                dir: Complex64::new(0.0, -1.0),
                step: self.step,
                values: left,
                jet_start: tl,
                jet_end: bl,
            },
            EdgeData {
                start: Complex64::new(x0, -a),
                dir: Complex64::new(1.0, 0.0),
                step: cap_step,
                values: bot,
                jet_start: bl,
                jet_end: br,
            },
        ];
        Ok(RectContour { edges })
    }
}

fn validate(params: &SolverParams) -> Result<()> {
    if params.n_nodes < 32 || !params.n_nodes.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "n_nodes must be even and at least 32, got {}",
            params.n_nodes
        )));
    }
    if !(params.height >= 2.0) || !params.height.is_finite() {
        return Err(Error::InvalidParams(format!(
            "height must be at least 2, got {}",
            params.height
        )));
    }
    let step = 2.0 * params.height / params.n_nodes as f64;
    if step > 0.4 {
        return Err(Error::InvalidParams(format!(
            "grid too sparse: step {step:.3} exceeds 0.4; raise n_nodes or lower height"
        )));
    }
    if !(params.tol >= 1e-14 && params.tol.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "tol must be at least 1e-14, got {}",
            params.tol
        )));
    }
    if params.max_iters == 0 {
        return Err(Error::InvalidParams("max_iters must be at least 1".into()));
    }
    if !(params.damping > 0.0 && params.damping <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "damping must lie in (0, 1], got {}",
            params.damping
        )));
    }
    Ok(())
}

pub fn solve(base: Base, params: &SolverParams) -> Result<StripTable> {
    solve_with_progress(base, params, |_, _| {})
}

pub fn solve_with_progress(
    base: Base,
    params: &SolverParams,
    mut progress: impl FnMut(usize, f64),
) -> Result<StripTable> {
    validate(params)?;
    let fp = principal_fixed_point(base)?;
    let ctx_up = KoenigsContext::new(&fp)?;
    let ctx_lo = KoenigsContext::conjugate(&fp)?;
    let n = params.n_nodes;
    let ws = Workspace {
        base,
        height: params.height,
        n,
        step: 2.0 * params.height / n as f64,
    };

    // Seed with the spiral L + (1-L)·e^(lambda·iy): equals 1 at y = 0,
    // decays to L at the multiplier's rate, and keeps Im > 0 for y > 0, so
    // the principal-log left edge is the consistent branch from the first
    // sweep on. (The regular iterate through 1 is NOT a valid seed: its
    // backward orbit passes through 2*pi*i rather than 0, so its unit-left
    // translate lives on the wrong log sheet and the first sweep's boundary
    // data comes out inconsistent by 2*pi*i along part of the left edge.)
    let lambda = ctx_up.multiplier().ln();
    let mut nodes = vec![Complex64::new(0.0, 0.0); n + 1];
    for (j, slot) in nodes.iter_mut().enumerate() {
        let y = ws.y(j);
        if y >= 0.0 {
            *slot = fp.l + (1.0 - fp.l) * (lambda * Complex64::new(0.0, y)).exp();
        }
    }
    for j in 0..n / 2 {
        nodes[j] = nodes[n - j].conj();
    }
    nodes[n / 2] = Complex64::new(1.0, 0.0);

    let cut = params.height - 1.0;
    let mut defect = f64::INFINITY;
    let mut converged = false;
    for iter in 0..params.max_iters {
        let (cap_top, cap_bot) = fit_caps(&ctx_up, &ctx_lo, &nodes, params.height)?;
        for j in 0..=n {
            let y = ws.y(j);
            if y > cut {
                nodes[j] = cap_top.value(Complex64::new(0.0, y))?;
            } else if y < -cut {
                nodes[j] = cap_bot.value(Complex64::new(0.0, y))?;
            }
        }
        let rect = ws.build_rect(&nodes, &cap_top, &cap_bot, 0)?;
        defect = 0.0;
        let mut updates = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let y = ws.y(j);
            if y.abs() <= cut {
                let t = cauchy_eval(&rect, Complex64::new(0.0, y));
                if !t.is_finite() {
                    return Err(Error::NoConvergence {
                        what: "strip sweep",
                        residual: f64::INFINITY,
                    });
                }
                defect = defect.max((t - nodes[j]).norm());
                updates.push((j, t));
            }
        }
        progress(iter, defect);
        for (j, t) in updates {
            let delta = t - nodes[j];
            nodes[j] += params.damping * delta;
        }
        symmetrize(&mut nodes);
        if defect < params.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "strip sweep",
            residual: defect,
        });
    }

    // Normalize: find real sigma with f(sigma) = 1, resample at the shifted
    // points, and make the center node exactly 1.
    let (cap_top, cap_bot) = fit_caps(&ctx_up, &ctx_lo, &nodes, params.height)?;
    let rect = ws.build_rect(&nodes, &cap_top, &cap_bot, 0)?;
    let eval_real = |s: f64| cauchy_eval(&rect, Complex64::new(s, 0.0)).re - 1.0;
    let mut sigma = 0.0f64;
    for _ in 0..30 {
        let g = eval_real(sigma);
        if g.abs() < 1e-14 {
            break;
        }
        let d = 1e-4;
        let slope = (eval_real(sigma + d) - eval_real(sigma - d)) / (2.0 * d);
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::NoConvergence {
                what: "normalization shift",
                residual: g.abs(),
            });
        }
        sigma -= g / slope;
        if sigma.abs() > 0.4 {
            return Err(Error::NoConvergence {
                what: "normalization shift",
                residual: sigma.abs(),
            });
        }
    }
    let mut shifted = vec![Complex64::new(0.0, 0.0); n + 1];
    for (j, slot) in shifted.iter_mut().enumerate() {
        let y = ws.y(j);
        let w = Complex64::new(sigma, y);
        *slot = if y > cut {
            cap_top.value(w)?
        } else if y < -cut {
            cap_bot.value(w)?
        } else {
            cauchy_eval(&rect, w)
        };
    }
    let mut nodes = shifted;
    nodes[n / 2] = Complex64::new(1.0, 0.0);
    symmetrize(&mut nodes);

    let mut table = StripTable::from_parts(base, params.height, n, 0.0, nodes)?;
    table.residual = table.measure_residual();
    Ok(table)
}

impl StripTable {
    /// Rebuild a table (and its contour data) from stored samples.
    pub fn from_parts(
        base: Base,
        height: f64,
        n: usize,
        residual: f64,
        nodes: Vec<Complex64>,
    ) -> Result<Self> {
        if nodes.len() != n + 1 {
            return Err(Error::InvalidParams(format!(
                "node count {} does not match n = {} (+1 expected)",
                nodes.len(),
                n
            )));
        }
        validate(&SolverParams {
            n_nodes: n,
            height,
            ..SolverParams::default()
        })?;
        let fp = principal_fixed_point(base)?;
        let ctx_up = KoenigsContext::new(&fp)?;
        let ctx_lo = KoenigsContext::conjugate(&fp)?;
        let (cap_top, cap_bot) = fit_caps(&ctx_up, &ctx_lo, &nodes, height)?;
        let ws = Workspace {
            base,
            height,
            n,
            step: 2.0 * height / n as f64,
        };
        let contour = ContourSet {
            base: ws.build_rect(&nodes, &cap_top, &cap_bot, 0)?,
            shifted: ws.build_rect(&nodes, &cap_top, &cap_bot, 1)?,
        };
        Ok(StripTable {
            fp,
            height,
            n,
            residual,
            nodes,
            contour,
        })
    }

    pub fn base(&self) -> Base {
        self.fp.base
    }

    pub fn fixed_point(&self) -> &FixedPointData {
        &self.fp
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn n_intervals(&self) -> usize {
        self.n
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn node_y(&self, j: usize) -> f64 {
        -self.height + 2.0 * self.height / self.n as f64 * j as f64
    }

    /// f at z for |Re z| <= 1/2, |Im z| <= A - 1, through the Cauchy
    /// integral. Exact sample hits return the stored sample, so f(0) is
    /// exactly 1.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let slack = 1e-9;
        if !z.is_finite() || z.re.abs() > 0.5 + slack || z.im.abs() > self.height - 1.0 + slack {
            return Err(Error::OutOfStrip { z });
        }
        if z.re == 0.0 {
            let t = (z.im + self.height) / (2.0 * self.height / self.n as f64);
            let j = t.round();
            if j >= 0.0 && j <= self.n as f64 && self.node_y(j as usize) == z.im {
                return Ok(self.nodes[j as usize]);
            }
        }
        Ok(cauchy_eval(&self.contour.base, z))
    }

    /// Sup over probe rows of |f(1 + iy) - exp_b(f(iy))|, the two sides
    /// computed through different contours.
    fn measure_residual(&self) -> f64 {
        let mut sup = 0.0f64;
        for (j, &f) in self.nodes.iter().enumerate() {
            let y = self.node_y(j);
            if y.abs() <= self.height - 1.0 {
                let lhs = cauchy_eval(&self.contour.shifted, Complex64::new(1.0, y));
                sup = sup.max((lhs - self.fp.base.exp(f)).norm());
            }
        }
        sup
    }
}

pub fn evaluate_strip(table: &StripTable, z: Complex64) -> Result<Complex64> {
    table.evaluate(z)
}

#[derive(Debug, Clone)]
pub struct ProbeResidual {
    pub y: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub probes: Vec<ProbeResidual>,
}

/// Functional-equation residuals |f(1 + iy) - exp_b(f(iy))| along the probe
/// rows |y| <= A - 1.
pub fn residual_report(table: &StripTable) -> ResidualReport {
    let mut probes = Vec::new();
    let mut sup = 0.0f64;
    for (j, &f) in table.nodes.iter().enumerate() {
        let y = table.node_y(j);
        if y.abs() <= table.height - 1.0 {
            let lhs = cauchy_eval(&table.contour.shifted, Complex64::new(1.0, y));
            let r = (lhs - table.fp.base.exp(f)).norm();
            sup = sup.max(r);
            probes.push(ProbeResidual { y, residual: r });
        }
    }
    ResidualReport {
        max_residual: sup,
        probes,
    }
}
