//! Table persistence: one JSON object per converged table.
//!
//! Layout: `{base, L: [re, im], A, N, residual, nodes: [[y, re, im], ...]}`
//! with nodes ascending in y and every float printed to 17 significant
//! digits, so a write/read cycle is lossless and the bytes are reproducible.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fixpoint::Base;
use crate::solver::StripTable;

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render the pinned JSON layout. Byte-deterministic for a given table.
pub fn table_to_json(table: &StripTable) -> String {
    let fp = table.fixed_point();
    let mut out = String::with_capacity(64 * table.nodes().len() + 256);
    out.push_str("{\n");
    out.push_str(&format!("  \"base\": {},\n", fmt(table.base().value())));
    out.push_str(&format!("  \"L\": [{}, {}],\n", fmt(fp.l.re), fmt(fp.l.im)));
    out.push_str(&format!("  \"A\": {},\n", fmt(table.height())));
    out.push_str(&format!("  \"N\": {},\n", table.n_intervals()));
    out.push_str(&format!("  \"residual\": {},\n", fmt(table.residual())));
    out.push_str("  \"nodes\": [\n");
    let last = table.nodes().len() - 1;
    for (j, v) in table.nodes().iter().enumerate() {
        let sep = if j == last { "" } else { "," };
        out.push_str(&format!(
            "    [{}, {}, {}]{sep}\n",
            fmt(table.node_y(j)),
            fmt(v.re),
            fmt(v.im)
        ));
    }
    out.push_str("  ]\n}\n");
    out
}

/// Write `table` to `path` in the pinned JSON layout.
pub fn save_table(table: &StripTable, path: &Path) -> Result<()> {
    fs::write(path, table_to_json(table))?;
    Ok(())
}

/// Read a table written by [`save_table`].
pub fn load_table(path: &Path) -> Result<StripTable> {
    let text = fs::read_to_string(path)?;
    table_from_json(&text)
}

fn want_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::TableFormat(format!("{what} must be a number")))
}

/// Parse table JSON and rebuild the evaluation contours.
pub fn table_from_json(text: &str) -> Result<StripTable> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::TableFormat(format!("bad JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::TableFormat("top level must be an object".into()))?;
    let field = |name: &str| {
        obj.get(name)
            .ok_or_else(|| Error::TableFormat(format!("missing field {name:?}")))
    };

    let base_value = want_f64(field("base")?, "base")?;
    let height = want_f64(field("A")?, "A")?;
    let residual = want_f64(field("residual")?, "residual")?;
    let n = field("N")?
        .as_u64()
        .ok_or_else(|| Error::TableFormat("N must be a non-negative integer".into()))?
        as usize;

    let l_arr = field("L")?
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::TableFormat("L must be [re, im]".into()))?;
    let stored_l = Complex64::new(want_f64(&l_arr[0], "L[0]")?, want_f64(&l_arr[1], "L[1]")?);

    let node_arr = field("nodes")?
        .as_array()
        .ok_or_else(|| Error::TableFormat("nodes must be an array".into()))?;
    if node_arr.len() != n + 1 {
        return Err(Error::TableFormat(format!(
            "expected {} nodes for N = {n}, found {}",
            n + 1,
            node_arr.len()
        )));
    }

    let step = 2.0 * height / n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    for (j, entry) in node_arr.iter().enumerate() {
        let triple = entry
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| Error::TableFormat(format!("node {j} must be [y, re, im]")))?;
        let y = want_f64(&triple[0], "node y")?;
        let expected = -height + step * j as f64;
        if (y - expected).abs() > 1e-9 * height.max(1.0) {
            return Err(Error::TableFormat(format!(
                "node {j} sits at y = {y}, expected the uniform grid point {expected}"
            )));
        }
        nodes.push(Complex64::new(
            want_f64(&triple[1], "node re")?,
            want_f64(&triple[2], "node im")?,
        ));
    }

    let table = StripTable::from_parts(Base::new(base_value)?, height, n, residual, nodes)?;
    let recomputed = table.fixed_point().l;
    if (recomputed - stored_l).norm() > 1e-10 {
        return Err(Error::TableFormat(format!(
            "stored fixed point {stored_l} disagrees with the recomputed value {recomputed}"
        )));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, SolverParams};
    use proptest::prelude::*;

    fn small_table() -> StripTable {
        let params = SolverParams {
            n_nodes: 64,
            height: 4.0,
            tol: 1e-9,
            max_iters: 2000,
            damping: 0.5,
        };
        solve(Base::natural(), &params).unwrap()
    }

    #[test]
    fn round_trip_is_lossless() {
        let table = small_table();
        let text = table_to_json(&table);
        let back = table_from_json(&text).unwrap();
        assert_eq!(back.n_intervals(), table.n_intervals());
        assert_eq!(back.height(), table.height());
        assert_eq!(back.residual(), table.residual());
        for (a, b) in table.nodes().iter().zip(back.nodes()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rendered_bytes_are_reproducible() {
        let table = small_table();
        assert_eq!(table_to_json(&table), table_to_json(&table));
    }

    #[test]
    fn save_and_load_through_a_file() {
        let table = small_table();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.json");
        save_table(&table, &path).unwrap();
        let back = load_table(&path).unwrap();
        assert_eq!(back.nodes(), table.nodes());
        assert_eq!(
            fs::read_to_string(&path).unwrap(),
            table_to_json(&table),
            "file content matches the in-memory rendering"
        );
    }

    #[test]
    fn missing_file_reports_io() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_table(&dir.path().join("nope.json")).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }

    #[test]
    fn loader_rejects_malformed_input() {
        let table = small_table();
        let good = table_to_json(&table);

        for (label, text) in [
            ("not JSON", "nonsense".to_string()),
            ("not an object", "[1, 2]".to_string()),
            (
                "missing field",
                good.replacen("\"residual\"", "\"unrelated\"", 1),
            ),
            ("bad L shape", good.replacen("\"L\": [", "\"L\": [1.0, ", 1)),
        ] {
            let err = table_from_json(&text).unwrap_err();
            assert!(matches!(err, Error::TableFormat(_)), "{label}: got {err:?}");
        }
    }

    #[test]
    fn loader_rejects_tampered_grid() {
        let table = small_table();
        let good = table_to_json(&table);

        let wrong_count = good.replacen("\"N\": 64", "\"N\": 62", 1);
        assert!(matches!(
            table_from_json(&wrong_count).unwrap_err(),
            Error::TableFormat(_)
        ));

        let y0 = format!("[{}", fmt(-table.height()));
        let shifted = good.replacen(&y0, &format!("[{}", fmt(-table.height() - 0.5)), 1);
        assert!(shifted != good, "substitution must hit the first node row");
        assert!(matches!(
            table_from_json(&shifted).unwrap_err(),
            Error::TableFormat(_)
        ));
    }

    #[test]
    fn loader_rejects_fixed_point_mismatch() {
        let table = small_table();
        let fp = table.fixed_point();
        let good = table_to_json(&table);
        let tampered = good.replacen(
            &format!("\"L\": [{}", fmt(fp.l.re)),
            &format!("\"L\": [{}", fmt(fp.l.re + 1e-3)),
            1,
        );
        assert!(tampered != good);
        assert!(matches!(
            table_from_json(&tampered).unwrap_err(),
            Error::TableFormat(_)
        ));
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip_any_double(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let back: f64 = fmt(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
