//! Principal fixed point of the base-b exponential.
//!
//! For b > e^(1/e) the map z -> b^z has no real fixed point; the complex
//! fixed points come in conjugate pairs. The pair closest to the real axis
//! (the only one with Im(L)·ln(b) inside (0, pi)) anchors everything else in
//! this crate: the Koenigs coordinate is developed at L, and the strip solver
//! pins its cap values to L and conj(L).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest admissible base, e^(1/e). At this value the real fixed point
/// degenerates into a tangency; below it the iteration b^b^... converges on
/// the real line and the constructions here do not apply.
pub const MIN_BASE: f64 = 1.444_667_861_009_766;

/// A validated exponential base b > e^(1/e).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Base {
    value: f64,
    beta: f64,
}

impl Base {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= MIN_BASE {
            return Err(Error::BaseOutOfRange { base: value });
        }
        Ok(Base {
            value,
            beta: value.ln(),
        })
    }

    /// Base e, the natural tetration base.
    pub fn natural() -> Self {
        Base {
            value: std::f64::consts::E,
            beta: 1.0,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// ln(b), the factor turning exp_b into exp.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// exp_b(z) = b^z = e^(ln(b)·z).
    pub fn exp(&self, z: Complex64) -> Complex64 {
        (z * self.beta).exp()
    }

    /// Principal branch of log_b, with Im(ln ·) in (-pi, pi].
    pub fn log(&self, z: Complex64) -> Complex64 {
        z.ln() / self.beta
    }
}

/// Rejects bases at or below e^(1/e).
pub fn validate_base(value: f64) -> Result<Base> {
    Base::new(value)
}

/// The principal fixed point L of exp_b together with derived constants.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointData {
    pub base: Base,
    /// Fixed point in the upper half-plane, b^L = L.
    pub l: Complex64,
    /// conj(L), the mirror fixed point.
    pub l_conj: Complex64,
    /// Multiplier c = exp_b'(L) = ln(b)·L. Repelling: |c| > 1.
    pub multiplier: Complex64,
    /// Principal ln(c); the exponent governing the approach of the
    /// tetration to L high in the strip, with Re > 0 and Im in (0, pi).
    pub log_multiplier: Complex64,
    /// |b^L - L| at the returned point.
    pub residual: f64,
}

/// Multiplier of exp_b at a fixed point l: ln(b)·l.
pub fn multiplier(base: Base, l: Complex64) -> Complex64 {
    l * base.beta()
}

fn newton_leg(base: Base, seed: Complex64) -> Result<Complex64> {
    let beta = base.beta();
    let mut z = seed;
    for _ in 0..100 {
        let f = base.exp(z) - z;
        if f.norm() < 1e-14 {
            return Ok(z);
        }
        let df = base.exp(z) * beta - 1.0;
        if df.norm() < 1e-300 {
            break;
        }
        let step = f / df;
        z -= step;
        if step.norm() < 1e-15 * z.norm().max(1.0) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        what: "fixed-point Newton iteration",
        residual: (base.exp(z) - z).norm(),
    })
}

/// Locates the fixed point of z -> b^z in the upper half-plane with the
/// smallest positive imaginary part.
///
/// For b = e a Newton iteration from 0.3 + 1.3i suffices; other bases are
/// reached by continuing the b = e solution along a short path in ln(b),
/// re-solving at each stage. Deterministic: no randomness, fixed stage count.
pub fn principal_fixed_point(base: Base) -> Result<FixedPointData> {
    let seed = Complex64::new(0.3, 1.3);
    let target_lnbeta = base.beta().ln();
    // ln(beta) = 0 is base e; walk ln(beta) linearly from 0 to the target.
    let stages = (24.0 * target_lnbeta.abs()).ceil().clamp(1.0, 96.0) as usize;
    let mut l = newton_leg(Base::natural(), seed)?;
    for k in 1..=stages {
        let lnbeta = target_lnbeta * (k as f64 / stages as f64);
        let stage_base = Base {
            value: lnbeta.exp().exp(),
            beta: lnbeta.exp(),
        };
        l = newton_leg(stage_base, l)?;
    }
    l = newton_leg(base, l)?;
    if l.im < 0.0 {
        l = l.conj();
    }
    let residual = (base.exp(l) - l).norm();
    if !(l.im > 0.0) || residual > 1e-13 {
        return Err(Error::NoConvergence {
            what: "fixed-point Newton iteration",
            residual,
        });
    }
    let c = multiplier(base, l);
    debug_assert!(l.im * base.beta() < std::f64::consts::PI);
    Ok(FixedPointData {
        base,
        l,
        l_conj: l.conj(),
        multiplier: c,
        log_multiplier: c.ln(),
        residual,
    })
}
