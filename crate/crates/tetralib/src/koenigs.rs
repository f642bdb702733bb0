//! Koenigs linearizing coordinate of exp_b at the principal fixed point.
//!
//! chi conjugates exp_b to multiplication by its multiplier c near L:
//! chi(b^z) = c·chi(z), chi(L) = 0, chi'(L) = 1. Backward iteration with the
//! log branch tracking L computes it outside a neighbourhood of L; inside,
//! a power series solved from the functional equation takes over. The naive
//! truncated limit c^n·(log_b^n(z) - L) alone cannot pass 1e-9 residual
//! checks in double precision: the c^n factor amplifies the orbit's rounding
//! noise to ~1e-8 before the truncation tail decays, so the series handoff
//! is what carries the accuracy.
//!
//! chi_inverse is the entire right inverse (chi о chi_inverse = id),
//! evaluated through the same series plus forward exp_b steps, and
//! regular_abel(z) = ln(chi(z))/ln(c) is the Abel function of the regular
//! iteration at L, satisfying regular_abel(b^z) = regular_abel(z) + 1.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fixpoint::{Base, FixedPointData};

const SERIES_DEGREE: usize = 24;

/// Which member of the conjugate fixed-point pair the coordinate is
/// developed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    Upper,
    Lower,
}

/// Precomputed data for evaluating the Koenigs coordinate at one fixed point.
#[derive(Debug, Clone)]
pub struct KoenigsContext {
    pub fp: FixedPointData,
    /// Backward-orbit budget before giving up.
    pub depth: usize,
    /// Home branch of log_b used in the orbit; 0 is the principal branch,
    /// which is the branch fixing both L and conj(L).
    pub branch_offset: i64,
    target: Complex64,
    c: Complex64,
    chi_series: Vec<Complex64>,
    inv_series: Vec<Complex64>,
    entry_radius: f64,
    /// Direction of chi(1); the log branch cut inside regular_abel points
    /// the opposite way so the orbit of 1 stays on one sheet.
    abel_cut_dir: Complex64,
}

fn mul_trunc(a: &[Complex64], b: &[Complex64], deg: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (i, &ai) in a.iter().enumerate().take(deg + 1) {
        if ai.norm_sqr() == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(deg + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn horner(coeffs: &[Complex64], u: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &ck in coeffs.iter().rev() {
        acc = acc * u + ck;
    }
    acc
}

/// Coefficients of P(u) = exp_b(T + u) - T = c·u + T·beta^2/2!·u^2 + ...
fn local_exp_series(base: Base, target: Complex64, deg: usize) -> Vec<Complex64> {
    let beta = base.beta();
    let mut p = vec![Complex64::new(0.0, 0.0); deg + 1];
    let mut factor = target; // T·beta^k/k! accumulated
    for k in 1..=deg {
        factor *= beta / k as f64;
        p[k] = factor;
    }
    p
}

impl KoenigsContext {
    pub fn new(fp: &FixedPointData) -> Result<Self> {
        Self::build(fp, Attachment::Upper)
    }

    /// Coordinate at conj(L); chi there is the complex conjugate mirror of
    /// the one at L.
    pub fn conjugate(fp: &FixedPointData) -> Result<Self> {
        Self::build(fp, Attachment::Lower)
    }

    pub fn build(fp: &FixedPointData, attachment: Attachment) -> Result<Self> {
        let target = match attachment {
            Attachment::Upper => fp.l,
            Attachment::Lower => fp.l_conj,
        };
        let c = target * fp.base.beta();
        let p = local_exp_series(fp.base, target, SERIES_DEGREE);

        // chi(T + u) = sum chi_m u^m from chi(P(u)+T) = c·chi(T+u):
        // chi_m = sum_{k<m} chi_k [P^k]_m / (c - c^m).
        let mut chi_coeffs = vec![Complex64::new(0.0, 0.0); SERIES_DEGREE + 1];
        chi_coeffs[1] = Complex64::new(1.0, 0.0);
        let mut p_pows: Vec<Vec<Complex64>> = Vec::with_capacity(SERIES_DEGREE + 1);
        p_pows.push(vec![Complex64::new(0.0, 0.0); SERIES_DEGREE + 1]); // P^0 unused
        p_pows.push(p.clone());
        for _ in 2..=SERIES_DEGREE {
            let next = mul_trunc(p_pows.last().unwrap(), &p, SERIES_DEGREE);
            p_pows.push(next);
        }
        for m in 2..=SERIES_DEGREE {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 1..m {
                s += chi_coeffs[k] * p_pows[k][m];
            }
            chi_coeffs[m] = s / (c - c.powi(m as i32));
        }

        // Q(u) = chi_inverse(u) - T from P(Q(u)) = Q(c·u):
        // psi_m = sum_{k>=2} P_k [Q^k]_m / (c^m - c).
        let mut q = vec![Complex64::new(0.0, 0.0); SERIES_DEGREE + 1];
        q[1] = Complex64::new(1.0, 0.0);
        for m in 2..=SERIES_DEGREE {
            let mut q_pow = q.clone(); // Q^k truncated, coefficients above m-1 not needed yet
            let mut s = Complex64::new(0.0, 0.0);
            for k in 2..=m {
                q_pow = mul_trunc(&q_pow, &q, m);
                s += p[k] * q_pow[m];
            }
            q[m] = s / (c.powi(m as i32) - c);
        }

        let tail = chi_coeffs[SERIES_DEGREE]
            .norm()
            .max(q[SERIES_DEGREE].norm())
            .max(1e-30);
        let entry_radius = (1e-19 / tail).powf(1.0 / SERIES_DEGREE as f64).min(0.12);

        let mut ctx = KoenigsContext {
            fp: *fp,
            depth: 100,
            branch_offset: 0,
            target,
            c,
            chi_series: chi_coeffs,
            inv_series: q,
            entry_radius,
            abel_cut_dir: Complex64::new(1.0, 0.0),
        };
        let chi_one = chi(&ctx, Complex64::new(1.0, 0.0))?;
        ctx.abel_cut_dir = chi_one / chi_one.norm();
        Ok(ctx)
    }

    pub fn attachment_point(&self) -> Complex64 {
        self.target
    }

    pub fn multiplier(&self) -> Complex64 {
        self.c
    }

    /// Backward step: the branch of log_b whose value is nearest the target
    /// fixed point. A branch landing exactly at 0 is inadmissible (its own
    /// log does not exist), which matters for the orbit of 1: the first step
    /// goes to 2·pi·i/ln(b) rather than dying at 0.
    fn step_towards_target(&self, w: Complex64) -> Result<Complex64> {
        if !w.is_finite() || w.norm_sqr() == 0.0 {
            return Err(Error::BasinEscape { at: w });
        }
        let beta = self.fp.base.beta();
        let principal = w.ln();
        let mut best: Option<Complex64> = None;
        for k in -2..=2i64 {
            let shift = TAU * (self.branch_offset + k) as f64;
            let cand = (principal + Complex64::new(0.0, shift)) / beta;
            if !cand.is_finite() || cand.norm_sqr() == 0.0 {
                continue;
            }
            if best.is_none_or(|b| (cand - self.target).norm() < (b - self.target).norm()) {
                best = Some(cand);
            }
        }
        best.ok_or(Error::BasinEscape { at: w })
    }
}

/// The Koenigs coordinate chi(z) = lim c^n·(log_b^n(z) - L), the log branch
/// chosen to track L at each step.
pub fn chi(ctx: &KoenigsContext, z: Complex64) -> Result<Complex64> {
    if z == ctx.target {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut w = z;
    let mut n: usize = 0;
    while (w - ctx.target).norm() > ctx.entry_radius {
        if n >= ctx.depth {
            return Err(Error::DepthInsufficient {
                last_increment: (w - ctx.target).norm(),
            });
        }
        if w.norm() > 1e100 {
            return Err(Error::BasinEscape { at: w });
        }
        w = ctx.step_towards_target(w)?;
        n += 1;
    }
    let u = w - ctx.target;
    Ok(ctx.c.powi(n as i32) * horner(&ctx.chi_series, u))
}

/// Entire right inverse of chi: chi(chi_inverse(w)) = w for every w, and
/// chi_inverse(c·w) = b^(chi_inverse(w)).
pub fn chi_inverse(ctx: &KoenigsContext, w: Complex64) -> Result<Complex64> {
    if !w.is_finite() || w.norm() > 1e100 {
        return Err(Error::OverflowEscape);
    }
    if w.norm_sqr() == 0.0 {
        return Ok(ctx.target);
    }
    let modulus = ctx.c.norm();
    let k = ((w.norm() / ctx.entry_radius).ln() / modulus.ln())
        .ceil()
        .max(0.0) as i32;
    let u = w / ctx.c.powi(k);
    let mut v = ctx.target + horner(&ctx.inv_series, u);
    for _ in 0..k {
        if (v * ctx.fp.base.beta()).re > 700.0 {
            return Err(Error::OverflowEscape);
        }
        v = ctx.fp.base.exp(v);
        if !v.is_finite() {
            return Err(Error::OverflowEscape);
        }
    }
    Ok(v)
}

/// Abel function of the regular iteration at the fixed point:
/// ln(chi(z))/ln(c) with the log cut pointing away from chi's value at 1,
/// so regular_abel(b^z) = regular_abel(z) + 1 holds on the sheet of 1.
pub fn regular_abel(ctx: &KoenigsContext, z: Complex64) -> Result<Complex64> {
    let w = chi(ctx, z)?;
    if w.norm_sqr() == 0.0 {
        return Err(Error::AtFixedPoint);
    }
    let rotated = w / ctx.abel_cut_dir;
    let ln_w =
        Complex64::new(w.norm().ln(), rotated.arg()) + ctx.abel_cut_dir.arg() * Complex64::i();
    Ok(ln_w / ctx.c.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::principal_fixed_point;

    fn ctx_e() -> KoenigsContext {
        let fp = principal_fixed_point(Base::natural()).unwrap();
        KoenigsContext::new(&fp).unwrap()
    }

    /// Deterministic pseudo-random unit complex numbers for sampling.
    struct Lcg(u64);
    impl Lcg {
        fn next_f64(&mut self) -> f64 {
            self.0 = self
                .0
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
        fn in_disk(&mut self, center: Complex64, radius: f64) -> Complex64 {
            let r = radius * self.next_f64().sqrt();
            let th = TAU * self.next_f64();
            center + Complex64::from_polar(r, th)
        }
    }

    /// Stand-alone truncated Koenigs limit, kept independent of the library
    /// path: plain orbit, plain scaling, stop at the increment's noise floor.
    /// Once the orbit freezes on the floating-point fixed point the scaled
    /// differences are exactly zero and meaningless, so iteration stops there.
    fn chi_brute(base: Base, l: Complex64, z: Complex64) -> Complex64 {
        let c = l * base.beta();
        let mut w = z;
        let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
        let mut prev = z - l;
        for n in 1..=160 {
            let principal = w.ln();
            let mut cand = Complex64::new(f64::INFINITY, 0.0);
            for k in -2..=2i64 {
                let t = (principal + Complex64::new(0.0, TAU * k as f64)) / base.beta();
                if t.norm_sqr() > 0.0 && (t - l).norm() < (cand - l).norm() {
                    cand = t;
                }
            }
            if cand == w {
                break;
            }
            w = cand;
            let phi = c.powi(n) * (w - l);
            let inc = (phi - prev).norm();
            if inc < best.0 {
                best = (inc, phi);
            }
            prev = phi;
        }
        best.1
    }

    #[test]
    fn matches_brute_force_limit() {
        let ctx = ctx_e();
        for z in [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.5),
            Complex64::new(0.2, 1.0),
            Complex64::new(2.0, 0.3),
        ] {
            let brute = chi_brute(ctx.fp.base, ctx.fp.l, z);
            let val = chi(&ctx, z).unwrap();
            assert!(
                (val - brute).norm() < 1e-6,
                "z = {z}: series {val} vs brute {brute}"
            );
        }
    }

    #[test]
    fn schroeder_equation_near_fixed_point() {
        let ctx = ctx_e();
        let mut rng = Lcg(0x9e3779b97f4a7c15);
        for _ in 0..100 {
            let z = rng.in_disk(ctx.fp.l, 0.3);
            let lhs = chi(&ctx, ctx.fp.base.exp(z)).unwrap();
            let rhs = ctx.multiplier() * chi(&ctx, z).unwrap();
            assert!((lhs - rhs).norm() <= 1e-9, "z = {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn schroeder_chain_through_one() {
        // The backward orbits of 1 and of e merge after one step, so the
        // functional equation ties their values exactly.
        let ctx = ctx_e();
        let w1 = chi(&ctx, Complex64::new(1.0, 0.0)).unwrap();
        let we = chi(&ctx, Complex64::new(std::f64::consts::E, 0.0)).unwrap();
        assert!((we - ctx.multiplier() * w1).norm() < 1e-9);
    }

    #[test]
    fn vanishes_at_fixed_point_with_unit_slope() {
        let ctx = ctx_e();
        assert_eq!(chi(&ctx, ctx.fp.l).unwrap(), Complex64::new(0.0, 0.0));
        let h = 1e-8;
        let v = chi(&ctx, ctx.fp.l + h).unwrap();
        assert!((v - h).norm() < 1e-15, "chi(L + h) = {v}");
    }

    #[test]
    fn linearity_sharpens_as_t_shrinks() {
        let ctx = ctx_e();
        let u = Complex64::new(0.6, -0.8);
        let dev = |t: f64| (chi(&ctx, ctx.fp.l + u * t).unwrap() / t - u).norm();
        let (d4, d6) = (dev(1e-4), dev(1e-6));
        assert!(d4 < 1e-3);
        assert!(d6 < 0.05 * d4, "d4 = {d4:.3e}, d6 = {d6:.3e}");
    }

    #[test]
    fn inverse_round_trips() {
        let ctx = ctx_e();
        assert_eq!(
            chi_inverse(&ctx, Complex64::new(0.0, 0.0)).unwrap(),
            ctx.fp.l
        );
        let mut rng = Lcg(7);
        for _ in 0..60 {
            let w = rng.in_disk(Complex64::new(0.0, 0.0), 1.0);
            let z = chi_inverse(&ctx, w).unwrap();
            let back = chi(&ctx, z).unwrap();
            assert!((back - w).norm() <= 1e-8, "w = {w}, z = {z}, back = {back}");
        }
    }

    #[test]
    fn inverse_recovers_one_and_base() {
        let ctx = ctx_e();
        let w1 = chi(&ctx, Complex64::new(1.0, 0.0)).unwrap();
        let z1 = chi_inverse(&ctx, w1).unwrap();
        assert!((z1 - 1.0).norm() <= 1e-8, "z1 = {z1}");
        let zb = chi_inverse(&ctx, ctx.multiplier() * w1).unwrap();
        assert!((zb - std::f64::consts::E).norm() <= 1e-8, "zb = {zb}");
    }

    #[test]
    fn abel_increments_by_one() {
        let ctx = ctx_e();
        let a1 = regular_abel(&ctx, Complex64::new(1.0, 0.0)).unwrap();
        let ae = regular_abel(&ctx, Complex64::new(std::f64::consts::E, 0.0)).unwrap();
        assert!((ae - a1 - 1.0).norm() <= 1e-8);

        // Applying exp_b rotates chi by arg(c) ~ 1.34, so points whose chi
        // sits close enough to the cut direction pick up the period
        // 2*pi*i/ln(c). Within a wedge clear of the cut the increment is
        // exactly 1; everywhere it is 1 modulo the period.
        let chi_one = chi(&ctx, Complex64::new(1.0, 0.0)).unwrap();
        for phi in [0.5, 0.9, 1.3] {
            for rho in [0.3, 1.0] {
                let w = chi_one * Complex64::from_polar(rho / chi_one.norm(), phi);
                let z = chi_inverse(&ctx, w).unwrap();
                let a = regular_abel(&ctx, z).unwrap();
                let a_next = regular_abel(&ctx, ctx.fp.base.exp(z)).unwrap();
                assert!(
                    (a_next - a - 1.0).norm() <= 1e-8,
                    "phi = {phi}, rho = {rho}"
                );
            }
        }
        let lambda = ctx.multiplier().ln();
        let mut rng = Lcg(99);
        for _ in 0..40 {
            let z = rng.in_disk(ctx.fp.l, 0.25);
            let a = regular_abel(&ctx, z).unwrap();
            let a_next = regular_abel(&ctx, ctx.fp.base.exp(z)).unwrap();
            let windings = (a_next - a - 1.0) * lambda / Complex64::new(0.0, TAU);
            let nearest = windings.re.round();
            assert!(
                (windings - nearest).norm() <= 1e-8,
                "z = {z}, windings = {windings}"
            );
        }
    }

    #[test]
    fn abel_zero_where_chi_is_one() {
        let ctx = ctx_e();
        let z = chi_inverse(&ctx, Complex64::new(1.0, 0.0)).unwrap();
        let a = regular_abel(&ctx, z).unwrap();
        assert!(a.norm() <= 1e-9, "a = {a}");
    }

    #[test]
    fn conjugate_context_mirrors() {
        let fp = principal_fixed_point(Base::new(2.0).unwrap()).unwrap();
        let upper = KoenigsContext::new(&fp).unwrap();
        let lower = KoenigsContext::conjugate(&fp).unwrap();
        let mut rng = Lcg(1234);
        for _ in 0..40 {
            let z = rng.in_disk(fp.l, 0.3);
            let a = chi(&upper, z).unwrap();
            let b = chi(&lower, z.conj()).unwrap();
            assert!((b - a.conj()).norm() <= 1e-10);
        }
    }

    #[test]
    fn fixed_point_arguments_error() {
        let ctx = ctx_e();
        assert!(matches!(
            regular_abel(&ctx, ctx.fp.l),
            Err(Error::AtFixedPoint)
        ));
        assert!(matches!(
            chi(&ctx, Complex64::new(0.0, 0.0)),
            Err(Error::BasinEscape { .. })
        ));
    }

    #[test]
    fn works_for_other_bases() {
        for b in [1.7, 2.0, 5.0] {
            let fp = principal_fixed_point(Base::new(b).unwrap()).unwrap();
            let ctx = KoenigsContext::new(&fp).unwrap();
            let mut rng = Lcg(b.to_bits());
            for _ in 0..30 {
                let z = rng.in_disk(fp.l, 0.25);
                let lhs = chi(&ctx, fp.base.exp(z)).unwrap();
                let rhs = ctx.multiplier() * chi(&ctx, z).unwrap();
                assert!((lhs - rhs).norm() <= 1e-9, "b = {b}, z = {z}");
            }
        }
    }
}
