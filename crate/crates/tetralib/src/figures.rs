//! CSV emitters for the standard plots: real-axis tetration curves for two
//! bases, a complex-plane grid of sexp with the mapped initial-region
//! boundary, and the real fractional-iterate family.
//!
//! All emitters print 17 significant digits and keep row counts fixed by
//! writing the literal string "nan" where evaluation fails, so downstream
//! plotting tools can rely on the shape of the file.

use num_complex::Complex64;

use crate::criteria::curve_ell;
use crate::error::Result;
use crate::solver::StripTable;
use crate::special::{emit_iterate_family, sexp, slog};

/// Iterate exponents of the standard family plot, ascending.
pub const FIG4_C_LIST: [f64; 11] = [-2.0, -1.0, -0.9, -0.5, -0.1, 0.0, 0.1, 0.5, 0.9, 1.0, 2.0];

fn cell(v: Result<Complex64>) -> String {
    match v {
        Ok(w) if w.re.is_finite() => format!("{:.16e}", w.re),
        _ => "nan".into(),
    }
}

/// Real-axis tetration for both bases: header `x,sexp_e,sexp_2` and 500
/// rows on x in [-1.99, 3] (step 0.01, so x = 0 is a grid point).
pub fn fig1_real_axis(table_e: &StripTable, table_two: &StripTable) -> String {
    let mut out = String::from("x,sexp_e,sexp_2\n");
    for j in 0..500i64 {
        let x = (j - 199) as f64 / 100.0;
        let z = Complex64::new(x, 0.0);
        out.push_str(&format!(
            "{x:.16e},{},{}\n",
            cell(sexp(table_e, z)),
            cell(sexp(table_two, z))
        ));
    }
    out
}

/// Complex-plane view of sexp: header `re,im,abs,arg` over a 101 x 101
/// grid on [-2.5, 2.5]^2. Cells on the excluded ray carry "nan".
pub fn fig3_complex_grid(table: &StripTable) -> String {
    let mut out = String::from("re,im,abs,arg\n");
    for j in 0..101i64 {
        let im = -2.5 + 5.0 * j as f64 / 100.0;
        for i in 0..101i64 {
            let re = -2.5 + 5.0 * i as f64 / 100.0;
            let (abs, arg) = match sexp(table, Complex64::new(re, im)) {
                Ok(w) if w.is_finite() => {
                    (format!("{:.16e}", w.norm()), format!("{:.16e}", w.arg()))
                }
                _ => ("nan".into(), "nan".into()),
            };
            out.push_str(&format!("{re:.16e},{im:.16e},{abs},{arg}\n"));
        }
    }
    out
}

/// Boundary of the mapped initial region: slog of the segment between the
/// fixed points (traced upward) followed by its unit translate (traced
/// back down), closing the fundamental domain of the translation.
///
/// The segment is truncated at 3e-2 of parameter from the fixed points so
/// the mapped samples stay inside tables of height >= 4.
pub fn fig3_region_boundary(table: &StripTable) -> Result<String> {
    const N: usize = 201;
    let ell = curve_ell(table.fixed_point(), N);
    let squeeze = (1.0 - 3e-2) / (1.0 - 1e-4);
    let center = Complex64::new(table.fixed_point().l.re, 0.0);
    let mut zeta = Vec::with_capacity(N);
    for &p in ell.points() {
        zeta.push(slog(table, center + (p - center) * squeeze)?);
    }
    let mut out = String::from("re,im\n");
    for w in &zeta {
        out.push_str(&format!("{:.16e},{:.16e}\n", w.re, w.im));
    }
    for w in zeta.iter().rev() {
        out.push_str(&format!("{:.16e},{:.16e}\n", w.re + 1.0, w.im));
    }
    Ok(out)
}

/// The real fractional-iterate family y = exp^(c)(x) for the standard
/// exponents, 601 points per exponent on x in [-3, 3].
pub fn fig4_iterate_family(table: &StripTable) -> String {
    emit_iterate_family(table, &FIG4_C_LIST, (-3.0, 3.0), 601)
}
