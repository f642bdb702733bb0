//! Command-line front end: solve and persist strip tables, evaluate the
//! tetration maps pointwise, verify the uniqueness criteria, and emit
//! figure data as CSV.
//!
//! Exit codes: 0 success or criteria passed, 1 criteria failed, 2 usage or
//! domain error, 3 numerical failure. Every error is a single JSON line on
//! stderr with a stable `code` field.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use tetralib::criteria::{
    check_covering, check_criterion_b, check_criterion_c, curve_ell, szekeres_perturbation,
    CriterionReport, InitialRegionH, SampledCurve, Window, DIVERGENCE_THRESHOLD,
};
use tetralib::error::{Error, Result};
use tetralib::figures::{
    fig1_real_axis, fig3_complex_grid, fig3_region_boundary, fig4_iterate_family,
};
use tetralib::fixpoint::{principal_fixed_point, Base};
use tetralib::koenigs::{chi, regular_abel, KoenigsContext};
use tetralib::solver::{solve_with_progress, SolverParams, StripTable};
use tetralib::special::{iterate, sexp, slog};
use tetralib::table_io::{load_table, save_table};

#[derive(Parser)]
#[command(name = "tetra", version, about = "Holomorphic tetration toolkit")]
struct Cli {
    /// Output format for computed values
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Significant digits in printed values (6 to 17)
    #[arg(long, global = true, default_value_t = 17, value_parser = clap::value_parser!(u8).range(6..=17))]
    digits: u8,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct TableArg {
    /// Table file; defaults to table_e.json under TETRALIB_TABLE_DIR (or .)
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the principal fixed point L of z -> b^z and its multiplier
    Fixpoint {
        /// Base b > e^(1/e); the token `e` means Euler's number exactly
        #[arg(long)]
        base: String,
    },
    /// Evaluate the Koenigs coordinate and the regular Abel function at a point
    Koenigs {
        #[arg(long)]
        base: String,
        /// Evaluation point as `re` or `re,im`
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Solve for the tetration table on a strip and persist it as JSON
    Solve {
        #[arg(long)]
        base: String,
        /// Contour nodes per edge (even)
        #[arg(long, default_value_t = 128)]
        nodes: usize,
        /// Strip half-height A; evaluation is reliable for |Im z| <= A - 1
        #[arg(long, default_value_t = 6.0)]
        height: f64,
        /// Sweep-to-sweep update tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        #[arg(long, default_value_t = 0.5)]
        damping: f64,
        /// Output path; defaults to table_<base>.json under TETRALIB_TABLE_DIR
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate sexp_b at a point
    Sexp {
        #[command(flatten)]
        table: TableArg,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Evaluate slog_b (the Abel function) at a point
    Slog {
        #[command(flatten)]
        table: TableArg,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Evaluate the fractional iterate exp_b^c at a point
    Iterate {
        #[command(flatten)]
        table: TableArg,
        /// Iteration order as `re` or `re,im`
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Run the uniqueness checks against the table's Abel function
    Verify {
        #[command(flatten)]
        table: TableArg,
        /// Which check to run: A (covering), B (separation), C (monotone
        /// divergence), or all. A needs a table solved with --height 8.
        #[arg(long, default_value = "all")]
        criterion: String,
        /// Probe points for the covering check
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Covering window as `x0,x1,y0,y1`
        #[arg(long, default_value = "-3,3,-3,3", allow_hyphen_values = true)]
        window: String,
        /// Apply the bounded sine reparameterization to the Abel function
        /// first (negative control; at least one check must then fail)
        #[arg(long)]
        perturb: Option<String>,
        /// Write the report JSON here as well as to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write figure data as CSV
    EmitFigure {
        #[command(flatten)]
        table: TableArg,
        /// fig1: real-axis curves for bases e and 2 (needs table_2.json
        /// alongside the base-e table); fig3: complex grid of sexp plus a
        /// `_boundary` sibling file; fig4: the fractional-iterate family
        #[arg(long)]
        figure: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_base(token: &str) -> Result<Base> {
    if token == "e" {
        return Ok(Base::natural());
    }
    let v: f64 = token
        .parse()
        .map_err(|_| Error::InvalidParams(format!("base {token:?} is not a number or `e`")))?;
    Base::new(v)
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let mut parts = s.split(',');
    let bad = || Error::InvalidParams(format!("expected `re` or `re,im`, got {s:?}"));
    let re: f64 = parts
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(t) => t.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn table_dir() -> PathBuf {
    std::env::var_os("TETRALIB_TABLE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn table_file_name(token: &str) -> String {
    format!("table_{token}.json")
}

/// Reject an unwritable output path before the solve, not after it.
fn probe_writable(path: &Path) -> Result<()> {
    let existed = path.exists();
    std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    if !existed {
        let _ = std::fs::remove_file(path);
    }
    Ok(())
}

fn load_table_checked(path: &Path) -> Result<StripTable> {
    if !path.exists() {
        return Err(Error::InvalidParams(format!(
            "missing table file {}; run `tetra solve` to create it",
            path.display()
        )));
    }
    load_table(path)
}

fn resolve_table(arg: &TableArg) -> Result<StripTable> {
    let path = arg
        .table
        .clone()
        .unwrap_or_else(|| table_dir().join(table_file_name("e")));
    load_table_checked(&path)
}

fn num(x: f64, digits: u8) -> String {
    format!("{:.*e}", digits as usize - 1, x)
}

fn print_value(w: Complex64, format: Format, digits: u8) {
    match format {
        Format::Json => println!(
            "{{\"re\": {}, \"im\": {}}}",
            num(w.re, digits),
            num(w.im, digits)
        ),
        Format::Csv => println!("re,im\n{},{}", num(w.re, digits), num(w.im, digits)),
    }
}

fn report_json(r: &CriterionReport, digits: u8) -> String {
    let mut out = String::new();
    write!(
        out,
        "{{\"criterion\": \"{}\", \"passed\": {}, \"sample_count\": {}, \"witnesses\": [",
        r.criterion, r.passed, r.sample_count
    )
    .unwrap();
    for (k, w) in r.witnesses.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write!(
            out,
            "{{\"index\": {}, \"location\": [{}, {}], \"detail\": {}}}",
            w.index,
            num(w.location.re, digits),
            num(w.location.im, digits),
            serde_json::to_string(&w.detail).unwrap()
        )
        .unwrap();
    }
    out.push_str("]}");
    out
}

/// Segment curve between the fixed points with the endpoint truncation
/// widened so slog output stays below the table's usable height.
fn verification_curve(table: &StripTable, n: usize) -> SampledCurve {
    let fp = table.fixed_point();
    let full = curve_ell(fp, n);
    let coef = (1.0 / fp.log_multiplier).im.abs();
    let depth = (table.height() - 2.4) / coef;
    let trunc = ((-depth).exp() / fp.l.im).clamp(1e-4, 0.05);
    if trunc <= 1e-4 {
        return full;
    }
    let squeeze = (1.0 - trunc) / (1.0 - 1e-4);
    let center = Complex64::new(fp.l.re, 0.0);
    let points = full
        .points()
        .iter()
        .map(|&p| center + (p - center) * squeeze)
        .collect();
    SampledCurve::new(full.params().to_vec(), points, fp.l_conj, fp.l).unwrap()
}

fn parse_window(s: &str) -> Result<Window> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidParams(format!("bad window {s:?}; expected x0,x1,y0,y1")))?;
    if vals.len() != 4 || vals[0] >= vals[1] || vals[2] >= vals[3] {
        return Err(Error::InvalidParams(format!(
            "bad window {s:?}; expected x0,x1,y0,y1 with x0 < x1, y0 < y1"
        )));
    }
    Ok(Window {
        x0: vals[0],
        x1: vals[1],
        y0: vals[2],
        y1: vals[3],
    })
}

fn cmd_verify(
    table: &StripTable,
    criterion: &str,
    samples: usize,
    window: &Window,
    perturb: Option<&str>,
    out: Option<&Path>,
    digits: u8,
) -> Result<i32> {
    let perturbed = match perturb {
        None => false,
        Some("szekeres") => true,
        Some(other) => {
            return Err(Error::InvalidParams(format!(
                "unknown perturbation {other:?}; only `szekeres` is available"
            )))
        }
    };
    let alpha = |z: Complex64| {
        let w = slog(table, z)?;
        Ok(if perturbed {
            szekeres_perturbation(w)
        } else {
            w
        })
    };

    let wanted: Vec<char> = match criterion {
        "A" | "a" => vec!['A'],
        "B" | "b" => vec!['B'],
        "C" | "c" => vec!['C'],
        "all" => vec!['A', 'B', 'C'],
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown criterion {other:?}; expected A, B, C or all"
            )))
        }
    };
    if wanted.contains(&'A') && table.height() < 8.0 {
        return Err(Error::InvalidParams(
            "the covering check needs the full-depth boundary curve; solve with --height 8".into(),
        ));
    }

    let mut reports = Vec::new();
    for c in wanted {
        let report = match c {
            'A' => {
                let region = InitialRegionH::new(*table.fixed_point())?;
                check_covering(alpha, &region, window, -8..=8, samples)
            }
            'B' => check_criterion_b(alpha, &verification_curve(table, 201), DIVERGENCE_THRESHOLD),
            _ => check_criterion_c(alpha, &verification_curve(table, 201), DIVERGENCE_THRESHOLD),
        };
        reports.push(report);
    }

    let body = if reports.len() == 1 {
        report_json(&reports[0], digits)
    } else {
        let items: Vec<String> = reports.iter().map(|r| report_json(r, digits)).collect();
        format!("[{}]", items.join(", "))
    };
    println!("{body}");
    if let Some(path) = out {
        std::fs::write(path, format!("{body}\n"))?;
    }
    Ok(if reports.iter().all(|r| r.passed) {
        0
    } else {
        1
    })
}

fn cmd_emit_figure(arg: &TableArg, figure: &str, out: &Path) -> Result<i32> {
    let table = resolve_table(arg)?;
    match figure {
        "fig1" => {
            let two_path = table_dir().join(table_file_name("2"));
            let table_two = load_table_checked(&two_path)?;
            std::fs::write(out, fig1_real_axis(&table, &table_two))?;
            println!(
                "{{\"written\": [{}]}}",
                serde_json::to_string(&out.display().to_string()).unwrap()
            );
        }
        "fig3" => {
            std::fs::write(out, fig3_complex_grid(&table))?;
            let stem = out.file_stem().unwrap_or_default().to_string_lossy();
            let boundary = out.with_file_name(format!("{stem}_boundary.csv"));
            std::fs::write(&boundary, fig3_region_boundary(&table)?)?;
            println!(
                "{{\"written\": [{}, {}]}}",
                serde_json::to_string(&out.display().to_string()).unwrap(),
                serde_json::to_string(&boundary.display().to_string()).unwrap()
            );
        }
        "fig4" => {
            std::fs::write(out, fig4_iterate_family(&table))?;
            println!(
                "{{\"written\": [{}]}}",
                serde_json::to_string(&out.display().to_string()).unwrap()
            );
        }
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown figure {other:?}; expected fig1, fig3 or fig4"
            )))
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<i32> {
    let digits = cli.digits;
    match &cli.cmd {
        Cmd::Fixpoint { base } => {
            let fp = principal_fixed_point(parse_base(base)?)?;
            let period = Complex64::new(0.0, std::f64::consts::TAU) / fp.log_multiplier;
            match cli.format {
                Format::Json => println!(
                    "{{\"base\": {}, \"l\": [{}, {}], \"multiplier\": [{}, {}], \"log_multiplier\": [{}, {}], \"period\": [{}, {}], \"residual\": {}}}",
                    num(fp.base.value(), digits),
                    num(fp.l.re, digits), num(fp.l.im, digits),
                    num(fp.multiplier.re, digits), num(fp.multiplier.im, digits),
                    num(fp.log_multiplier.re, digits), num(fp.log_multiplier.im, digits),
                    num(period.re, digits), num(period.im, digits),
                    num(fp.residual, digits),
                ),
                Format::Csv => println!(
                    "base,l_re,l_im,multiplier_re,multiplier_im,log_multiplier_re,log_multiplier_im,period_re,period_im,residual\n{},{},{},{},{},{},{},{},{},{}",
                    num(fp.base.value(), digits),
                    num(fp.l.re, digits), num(fp.l.im, digits),
                    num(fp.multiplier.re, digits), num(fp.multiplier.im, digits),
                    num(fp.log_multiplier.re, digits), num(fp.log_multiplier.im, digits),
                    num(period.re, digits), num(period.im, digits),
                    num(fp.residual, digits),
                ),
            }
            Ok(0)
        }
        Cmd::Koenigs { base, at } => {
            let fp = principal_fixed_point(parse_base(base)?)?;
            let ctx = KoenigsContext::new(&fp)?;
            let z = parse_complex(at)?;
            let x = chi(&ctx, z)?;
            let a = regular_abel(&ctx, z)?;
            match cli.format {
                Format::Json => println!(
                    "{{\"chi\": [{}, {}], \"abel\": [{}, {}]}}",
                    num(x.re, digits),
                    num(x.im, digits),
                    num(a.re, digits),
                    num(a.im, digits),
                ),
                Format::Csv => println!(
                    "chi_re,chi_im,abel_re,abel_im\n{},{},{},{}",
                    num(x.re, digits),
                    num(x.im, digits),
                    num(a.re, digits),
                    num(a.im, digits),
                ),
            }
            Ok(0)
        }
        Cmd::Solve {
            base,
            nodes,
            height,
            tol,
            max_iters,
            damping,
            out,
        } => {
            let b = parse_base(base)?;
            let params = SolverParams {
                n_nodes: *nodes,
                height: *height,
                tol: *tol,
                max_iters: *max_iters,
                damping: *damping,
            };
            let path = out.clone().unwrap_or_else(|| {
                let token = if base == "e" {
                    "e".into()
                } else {
                    base.clone()
                };
                table_dir().join(table_file_name(&token))
            });
            probe_writable(&path)?;
            let mut sweeps = 0usize;
            let table = solve_with_progress(b, &params, |it, upd| {
                sweeps = it;
                if it % 10 == 0 {
                    eprintln!("sweep {it}: update {upd:.3e}");
                }
            })?;
            save_table(&table, &path)?;
            println!(
                "{{\"residual\": {}, \"iterations\": {}, \"path\": {}}}",
                num(table.residual(), digits),
                sweeps,
                serde_json::to_string(&path.display().to_string()).unwrap()
            );
            Ok(0)
        }
        Cmd::Sexp { table, at } => {
            let t = resolve_table(table)?;
            print_value(sexp(&t, parse_complex(at)?)?, cli.format, digits);
            Ok(0)
        }
        Cmd::Slog { table, at } => {
            let t = resolve_table(table)?;
            print_value(slog(&t, parse_complex(at)?)?, cli.format, digits);
            Ok(0)
        }
        Cmd::Iterate { table, c, at } => {
            let t = resolve_table(table)?;
            print_value(
                iterate(&t, parse_complex(c)?, parse_complex(at)?)?,
                cli.format,
                digits,
            );
            Ok(0)
        }
        Cmd::Verify {
            table,
            criterion,
            samples,
            window,
            perturb,
            out,
        } => {
            let t = resolve_table(table)?;
            let w = parse_window(window)?;
            cmd_verify(
                &t,
                criterion,
                *samples,
                &w,
                perturb.as_deref(),
                out.as_deref(),
                digits,
            )
        }
        Cmd::EmitFigure { table, figure, out } => cmd_emit_figure(table, figure, out),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                eprintln!(
                    "{{\"code\": \"invalid_params\", \"message\": {}}}",
                    serde_json::to_string(&e.to_string()).unwrap()
                );
                std::process::exit(2);
            }
            // --help / --version
            print!("{e}");
            std::process::exit(0);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!(
                "{{\"code\": \"{}\", \"message\": {}}}",
                e.code(),
                serde_json::to_string(&e.to_string()).unwrap()
            );
            std::process::exit(e.exit_code());
        }
    }
}
