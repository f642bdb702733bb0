//! Principal fixed point of z -> b^z for a few admissible bases.
//!
//! For every base b > e^(1/e) the map exp_b has a conjugate pair of complex
//! fixed points closest to the real axis; the one in the upper half plane is
//! L, with b^L = L. Its multiplier ln(b)*L is repelling, and the principal
//! log of the multiplier sets the period of the tetration high in the strip.

use std::f64::consts::E;

use num_complex::Complex64;
use tetralib::{principal_fixed_point, validate_base, Base};

fn main() {
    for (label, base) in [
        ("e", Base::natural()),
        ("2", Base::new(2.0).unwrap()),
        ("10", Base::new(10.0).unwrap()),
    ] {
        let fp = principal_fixed_point(base).unwrap();
        let period = Complex64::new(0.0, std::f64::consts::TAU) / fp.log_multiplier;
        println!("base {label}");
        println!("  L            = {:+.16} {:+.16}i", fp.l.re, fp.l.im);
        println!("  |b^L - L|    = {:.2e}", (base.exp(fp.l) - fp.l).norm());
        println!(
            "  multiplier   = {:+.16} {:+.16}i  (|.| = {:.6}, repelling)",
            fp.multiplier.re,
            fp.multiplier.im,
            fp.multiplier.norm()
        );
        println!("  period       = {:+.16} {:+.16}i", period.re, period.im);
        println!();
    }

    // For b = e the fixed point satisfies ln(L) = L on the principal branch,
    // so L is also a fixed point of the logarithm.
    let fp = principal_fixed_point(Base::natural()).unwrap();
    println!(
        "base e only: |ln(L) - L| = {:.2e}",
        (fp.l.ln() - fp.l).norm()
    );

    // Below the threshold e^(1/e) the real iteration converges and this
    // construction does not apply; such bases are rejected.
    let threshold = E.powf(1.0 / E);
    println!(
        "validate_base(e^(1/e) - 0.01 = {:.4}): {:?}",
        threshold - 0.01,
        validate_base(threshold - 0.01).err().unwrap()
    );
}
