//! CSV input of point sets and output of sweep tables.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use mqshape_core::experiment::SweepRow;
use mqshape_core::numerics::fmt_sig17;

pub const SWEEP_HEADER: [&str; 8] =
    ["c", "max_err", "rms_err", "cond_estimate", "bound", "delta", "delta0", "preconditions_ok"];

/// Rows of a numeric CSV. A first row that does not parse as numbers is
/// taken as a header and returned separately.
pub struct NumericTable {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

/// Coordinates, and the value column when there is one.
pub type SplitPoints = (Vec<Vec<f64>>, Option<Vec<f64>>);

pub fn read_numeric(path: &Path) -> anyhow::Result<NumericTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut header = None;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("parsing {}", path.display()))?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push(v),
            Err(_) if i == 0 => header = Some(rec.iter().map(str::to_string).collect()),
            Err(e) => bail!("{}: row {}: {e}", path.display(), i + 1),
        }
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    let width = rows[0].len();
    if let Some(bad) = rows.iter().position(|r| r.len() != width) {
        bail!("{}: row {} has {} columns, expected {width}", path.display(), bad + 1, rows[bad].len());
    }
    Ok(NumericTable { header, rows })
}

/// Splits rows into coordinates and an optional value column.
///
/// A header names the value column `f`. Without one, `n` (when given) fixes the
/// number of coordinates; otherwise `has_values` decides whether the last
/// column is the value.
pub fn split_points(table: &NumericTable, n: Option<usize>, has_values: bool) -> anyhow::Result<SplitPoints> {
    let width = table.rows[0].len();
    let value_col = match &table.header {
        Some(h) => h.iter().position(|c| c.eq_ignore_ascii_case("f")),
        None => match n {
            Some(n) if n == width => None,
            Some(n) if n + 1 == width => Some(n),
            Some(n) => bail!("expected {n} or {} columns, found {width}", n + 1),
            None if has_values && width >= 2 => Some(width - 1),
            None => None,
        },
    };
    let coords = table
        .rows
        .iter()
        .map(|r| r.iter().enumerate().filter(|(i, _)| Some(*i) != value_col).map(|(_, v)| *v).collect())
        .collect();
    let values = value_col.map(|k| table.rows.iter().map(|r| r[k]).collect());
    Ok((coords, values))
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            fmt_sig17(r.c),
            fmt_sig17(r.max_err),
            fmt_sig17(r.rms_err),
            fmt_sig17(r.cond_estimate),
            r.bound.to_decimal_string(),
            fmt_sig17(r.delta),
            r.delta0.to_decimal_string(),
            r.preconditions_ok.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_evaluations<W: Write>(out: W, points: &[Vec<f64>], values: &[f64]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = points.first().map_or(0, Vec::len);
    let mut header: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    header.push("s".into());
    w.write_record(&header)?;
    for (p, v) in points.iter().zip(values) {
        let mut rec: Vec<String> = p.iter().map(|x| fmt_sig17(*x)).collect();
        rec.push(fmt_sig17(*v));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(header: Option<&[&str]>, rows: &[&[f64]]) -> NumericTable {
        NumericTable {
            header: header.map(|h| h.iter().map(|s| s.to_string()).collect()),
            rows: rows.iter().map(|r| r.to_vec()).collect(),
        }
    }

    #[test]
    fn value_column_detection() {
        let t = table(Some(&["x1", "f", "x2"]), &[&[1.0, 2.0, 3.0]]);
        let (p, v) = split_points(&t, None, false).unwrap();
        assert_eq!(p, vec![vec![1.0, 3.0]]);
        assert_eq!(v, Some(vec![2.0]));

        let t = table(None, &[&[1.0, 2.0]]);
        assert_eq!(split_points(&t, Some(2), true).unwrap().1, None);
        assert_eq!(split_points(&t, Some(1), false).unwrap().1, Some(vec![2.0]));
        assert_eq!(split_points(&t, None, true).unwrap().0, vec![vec![1.0]]);
        assert_eq!(split_points(&t, None, false).unwrap().0, vec![vec![1.0, 2.0]]);
        assert!(split_points(&t, Some(4), true).is_err());
    }

    #[test]
    fn sweep_header_is_fixed() {
        let mut buf = Vec::new();
        write_sweep(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "c,max_err,rms_err,cond_estimate,bound,delta,delta0,preconditions_ok\n");
    }
}
