//! Fractional iterates of exp_b through the Abel function.
//!
//! With slog as Abel function, exp_b^(c)(z) = sexp_b(c + slog_b(z)) defines
//! an iterate of any complex order c: order 1 is exp_b, order -1 is log_b,
//! and the orders compose, exp^(c) after exp^(d) = exp^(c+d), wherever the
//! intermediate values stay on the slit plane.

use num_complex::Complex64;
use tetralib::{iterate, solve, Base, SolverParams};

fn main() {
    let base = Base::natural();
    let table = solve(base, &SolverParams::default()).unwrap();
    let one = Complex64::new(1.0, 0.0);

    // The half-iterate g = exp^(1/2) satisfies g(g(x)) = e^x.
    let half = Complex64::new(0.5, 0.0);
    println!("half-iterate of exp, base e:");
    println!("  x      g(x)                  g(g(x))               e^x");
    for x in [-1.0f64, 0.0, 0.5, 1.0, 2.0] {
        let z = Complex64::new(x, 0.0);
        let g = iterate(&table, half, z).unwrap();
        let gg = iterate(&table, half, g).unwrap();
        println!(
            "  {x:+.1}   {:<21.15} {:<21.15} {:<21.15}",
            g.re,
            gg.re,
            x.exp()
        );
    }
    println!();

    // Order -1 recovers the logarithm.
    println!("order -1 against ln:");
    for x in [0.5f64, 2.0, 5.0] {
        let v = iterate(&table, -one, Complex64::new(x, 0.0)).unwrap();
        println!("  exp^(-1)({x}) = {:+.15}   ln = {:+.15}", v.re, x.ln());
    }
    println!();

    // The family interpolates continuously between identity and exp.
    println!("exp^(c)(1) as c runs from 0 to 1:");
    for k in 0..=8 {
        let c = Complex64::new(k as f64 / 8.0, 0.0);
        let v = iterate(&table, c, one).unwrap();
        println!("  c = {:.3}  exp^(c)(1) = {:+.15}", c.re, v.re);
    }
    println!();

    // Orders add: a quarter twice is a half, even at a complex point.
    let z = Complex64::new(0.8, 0.4);
    let quarter = Complex64::new(0.25, 0.0);
    let twice = iterate(&table, quarter, iterate(&table, quarter, z).unwrap()).unwrap();
    let direct = iterate(&table, half, z).unwrap();
    println!(
        "|exp^(1/4)(exp^(1/4)(z)) - exp^(1/2)(z)| = {:.3e} at z = {:+.1} {:+.1}i",
        (twice - direct).norm(),
        z.re,
        z.im
    );

    // Complex order: the iterate is defined for any c on the slit plane.
    let c = Complex64::new(0.5, 0.3);
    let v = iterate(&table, c, one).unwrap();
    println!(
        "exp^({:+.1}{:+.1}i)(1) = {:+.15} {:+.15}i",
        c.re, c.im, v.re, v.im
    );
}
