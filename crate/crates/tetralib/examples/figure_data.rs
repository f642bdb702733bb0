//! Emit the standard plot data as CSV files.
//!
//! Four artifacts: tetration along the real axis for bases e and 2, a
//! complex-plane grid of sexp_e (magnitude and phase), the boundary of the
//! region slog maps onto a unit strip, and the family of fractional
//! iterates exp^(c) on a real window. Files land in figures/ under the
//! current directory; each is a plain CSV with a header row, NaN cells
//! marking points off the domain.

use std::fs;
use std::path::Path;

use tetralib::{
    fig1_real_axis, fig3_complex_grid, fig3_region_boundary, fig4_iterate_family, solve, Base,
    SolverParams,
};

fn write(dir: &Path, name: &str, text: &str) {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    println!(
        "  {} ({} rows)",
        path.display(),
        text.lines().count().saturating_sub(1)
    );
}

fn main() {
    let params = SolverParams::default();
    let table_e = solve(Base::natural(), &params).unwrap();
    let table_two = solve(Base::new(2.0).unwrap(), &params).unwrap();

    let dir = Path::new("figures");
    fs::create_dir_all(dir).unwrap();
    println!("writing:");
    write(dir, "real_axis.csv", &fig1_real_axis(&table_e, &table_two));
    write(dir, "complex_grid.csv", &fig3_complex_grid(&table_e));
    write(
        dir,
        "region_boundary.csv",
        &fig3_region_boundary(&table_e).unwrap(),
    );
    write(dir, "iterate_family.csv", &fig4_iterate_family(&table_e));

    // A taste of the real-axis table: the curves pass (0, 1) and climb
    // towerward, base 2 below base e beyond x = 1.
    let text = fig1_real_axis(&table_e, &table_two);
    println!();
    println!("real_axis.csv around x = 0:");
    for line in text.lines().take(1).chain(text.lines().skip(198).take(4)) {
        println!("  {line}");
    }
}
