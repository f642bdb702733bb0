//! Tetration sexp_b and its inverse slog_b on the slit plane.
//!
//! sexp_b extends the tower b, b^b, b^(b^b), ... to complex heights: it is
//! holomorphic on the plane slit along (-inf, -2], with sexp_b(0) = 1 and
//! sexp_b(z+1) = b^sexp_b(z). slog_b inverts it there, so slog(sexp(z)) = z
//! and sexp(slog(z)) = z wherever both sides are defined.

use num_complex::Complex64;
use tetralib::{in_domain, sexp, slog, solve, Base, SolverParams};

fn main() {
    let table_e = solve(Base::natural(), &SolverParams::default()).unwrap();
    let table_two = solve(Base::new(2.0).unwrap(), &SolverParams::default()).unwrap();

    println!("integer heights (exact tower values):");
    println!("  x   sexp_e(x)               sexp_2(x)");
    for k in -1..=3 {
        let z = Complex64::new(k as f64, 0.0);
        let ve = sexp(&table_e, z).unwrap();
        let v2 = sexp(&table_two, z).unwrap();
        println!("  {k:+}  {:<22.16} {:<22.16}", ve.re, v2.re);
    }
    println!();

    // Heights between the integers interpolate smoothly; at x -> -2+ the
    // value runs to -infinity, which is why the slit starts at -2.
    println!("real heights for base e:");
    for x in [-1.9f64, -1.5, -0.5, 0.5, 1.5, 2.5] {
        let v = sexp(&table_e, Complex64::new(x, 0.0)).unwrap();
        println!("  sexp_e({x:+.1}) = {:+.16}", v.re);
    }
    println!();

    println!("complex heights for base e:");
    for z in [
        Complex64::new(0.5, 0.5),
        Complex64::new(-1.0, 1.0),
        Complex64::new(2.0, -0.3),
        Complex64::new(0.0, 4.0),
    ] {
        let v = sexp(&table_e, z).unwrap();
        println!(
            "  sexp_e({:+.2} {:+.2}i) = {:+.16} {:+.16}i",
            z.re, z.im, v.re, v.im
        );
    }
    println!();

    // The functional equation holds off the real axis too.
    let z = Complex64::new(0.3, 1.2);
    let lhs = sexp(&table_e, z + Complex64::new(1.0, 0.0)).unwrap();
    let rhs = table_e.base().exp(sexp(&table_e, z).unwrap());
    println!(
        "|sexp(z+1) - e^sexp(z)| = {:.3e} at z = {:+.1} {:+.1}i",
        (lhs - rhs).norm(),
        z.re,
        z.im
    );
    println!();

    // slog inverts sexp; slog(1) = 0 exactly by the normalization.
    println!("super-logarithm, base e:");
    for z in [
        Complex64::new(1.0, 0.0),
        Complex64::new(std::f64::consts::E, 0.0),
        Complex64::new(10.0, 0.0),
        Complex64::new(0.5, 2.0),
        Complex64::new(-1.0, 0.5),
    ] {
        let w = slog(&table_e, z).unwrap();
        let back = sexp(&table_e, w).unwrap();
        println!(
            "  slog({:+.4} {:+.4}i) = {:+.16} {:+.16}i   |sexp(slog(z)) - z| = {:.1e}",
            z.re,
            z.im,
            w.re,
            w.im,
            (back - z).norm()
        );
    }
    println!();

    // Points on the slit are rejected before any numerics run.
    let bad = Complex64::new(-3.0, 0.0);
    println!("in_domain(-3) = {}", in_domain(bad));
    println!("sexp_e(-3): {:?}", sexp(&table_e, bad).err().unwrap());
}
