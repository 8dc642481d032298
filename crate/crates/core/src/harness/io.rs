//! Matrix files, JSON reports and CSV emitters.
//!
//! Matrix file: a header line `rmt-matrix v1 <rows> <cols> <real|complex>`
//! followed by one row per line, entries separated by spaces, complex entries
//! written as `re im`. Every number is written with 17 significant digits.
//!
//! Report CSV columns: `record,label,size,trial,stream,value,relation,threshold,pass`.
//! `record` is `trial` or `verdict`. Verdict rows carry the observed value in
//! `value` so that `pass` can be recomputed from the row alone.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use super::runner::{ExperimentReport, Relation, Verdict};
use crate::ensembles::{DenseMatrix, Entries, Field};
use crate::error::{Result, RmtError};
use crate::laws::Law1D;
use crate::spectra::EmpiricalMeasure;

pub const MATRIX_MAGIC: &str = "rmt-matrix";
pub const MATRIX_VERSION: &str = "v1";
pub const REPORT_CSV_HEADER: [&str; 9] =
    ["record", "label", "size", "trial", "stream", "value", "relation", "threshold", "pass"];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| RmtError::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> RmtError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => RmtError::io(path, io),
            _ => unreachable!(),
        }
    } else {
        RmtError::Parse(format!("{}: {e}", path.display()))
    }
}

pub fn write_matrix(m: &DenseMatrix, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let (rows, cols) = (m.rows(), m.cols());
    let io = |e| RmtError::io(path, e);
    writeln!(w, "{MATRIX_MAGIC} {MATRIX_VERSION} {rows} {cols} {}", m.field().as_str()).map_err(io)?;
    for i in 0..rows {
        let mut line = String::new();
        for j in 0..cols {
            if j > 0 {
                line.push(' ');
            }
            match m.entries() {
                Entries::Real(a) => line.push_str(&num(a[i * cols + j])),
                Entries::Complex(a) => {
                    let z = a[i * cols + j];
                    line.push_str(&num(z.re));
                    line.push(' ');
                    line.push_str(&num(z.im));
                }
            }
        }
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let file = File::open(path).map_err(|e| RmtError::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let bad = |msg: String| RmtError::Parse(format!("{}: {msg}", path.display()));
    let header = lines
        .next()
        .ok_or_else(|| bad("empty file".into()))?
        .map_err(|e| RmtError::io(path, e))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 5 || parts[0] != MATRIX_MAGIC || parts[1] != MATRIX_VERSION {
        return Err(bad(format!("bad header '{header}'")));
    }
    let rows: usize = parts[2].parse().map_err(|_| bad(format!("bad row count '{}'", parts[2])))?;
    let cols: usize = parts[3].parse().map_err(|_| bad(format!("bad column count '{}'", parts[3])))?;
    let field = match parts[4] {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(bad(format!("unknown field '{other}'"))),
    };
    let per_entry = if field == Field::Real { 1 } else { 2 };
    let mut values = Vec::with_capacity(rows * cols * per_entry);
    let mut seen_rows = 0;
    for (k, line) in lines.enumerate() {
        let line = line.map_err(|e| RmtError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let before = values.len();
        for tok in line.split_whitespace() {
            values.push(
                tok.parse::<f64>()
                    .map_err(|_| bad(format!("line {}: bad number '{tok}'", k + 2)))?,
            );
        }
        if values.len() - before != cols * per_entry {
            return Err(bad(format!(
                "line {}: expected {} numbers, found {}",
                k + 2,
                cols * per_entry,
                values.len() - before
            )));
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(bad(format!("expected {rows} rows, found {seen_rows}")));
    }
    match field {
        Field::Real => DenseMatrix::from_real(rows, cols, values),
        Field::Complex => DenseMatrix::from_complex(
            rows,
            cols,
            values.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect(),
        ),
    }
}

pub fn write_report_json(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, report).map_err(|e| RmtError::Parse(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| RmtError::io(path, e))
}

pub fn read_report_json(path: &Path) -> Result<ExperimentReport> {
    let file = File::open(path).map_err(|e| RmtError::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| RmtError::Parse(format!("{}: {e}", path.display())))
}

pub fn emit_csv_report(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let e = |err| csv_error(path, err);
    w.write_record(REPORT_CSV_HEADER).map_err(e)?;
    let stat = report.config.statistic.name();
    for r in &report.records {
        w.write_record([
            "trial",
            stat,
            &r.size.to_string(),
            &r.trial.to_string(),
            &r.stream.to_string(),
            &num(r.value),
            "",
            "",
            "",
        ])
        .map_err(e)?;
    }
    for v in &report.verdicts {
        w.write_record([
            "verdict",
            &v.criterion,
            "",
            "",
            "",
            &num(v.observed),
            v.relation.symbol(),
            &num(v.threshold),
            if v.pass { "true" } else { "false" },
        ])
        .map_err(e)?;
    }
    w.flush().map_err(|err| RmtError::io(path, err))
}

/// Verdict rows of a report CSV, with the `pass` column as written.
pub fn read_csv_verdicts(path: &Path) -> Result<Vec<Verdict>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let bad = |msg: String| RmtError::Parse(format!("{}: {msg}", path.display()));
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        if &row[0] != "verdict" {
            continue;
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("bad number '{s}'")));
        out.push(Verdict {
            criterion: row[1].to_string(),
            observed: parse(&row[5])?,
            relation: Relation::parse(&row[6]).ok_or_else(|| bad(format!("bad relation '{}'", &row[6])))?,
            threshold: parse(&row[7])?,
            pass: &row[8] == "true",
        });
    }
    Ok(out)
}

/// `index,value` for a real measure, `index,re,im` for a complex one.
pub fn emit_csv_measure(mu: &EmpiricalMeasure, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let e = |err| csv_error(path, err);
    match mu {
        EmpiricalMeasure::Real(v) => {
            w.write_record(["index", "value"]).map_err(e)?;
            for (i, x) in v.iter().enumerate() {
                w.write_record([i.to_string(), num(*x)]).map_err(e)?;
            }
        }
        EmpiricalMeasure::Complex(z) => {
            w.write_record(["index", "re", "im"]).map_err(e)?;
            for (i, x) in z.iter().enumerate() {
                w.write_record([i.to_string(), num(x.re), num(x.im)]).map_err(e)?;
            }
        }
    }
    w.flush().map_err(|err| RmtError::io(path, err))
}

/// Reads a measure written by [`emit_csv_measure`].
pub fn read_csv_measure(path: &Path) -> Result<EmpiricalMeasure> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let width = r.headers().map_err(|e| csv_error(path, e))?.len();
    let bad = |s: &str| RmtError::Parse(format!("{}: bad number '{s}'", path.display()));
    let mut re = Vec::new();
    let mut im = Vec::new();
    for row in r.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        re.push(row[1].parse::<f64>().map_err(|_| bad(&row[1]))?);
        if width == 3 {
            im.push(row[2].parse::<f64>().map_err(|_| bad(&row[2]))?);
        }
    }
    if width == 3 {
        EmpiricalMeasure::from_complex(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
    } else {
        EmpiricalMeasure::from_real(re)
    }
}

/// `x,density,cdf` on `grid` evenly spaced points of the support.
pub fn emit_csv_law_table(law: &Law1D, grid: usize, path: &Path) -> Result<()> {
    if grid == 0 {
        return Err(RmtError::InvalidInput("grid must have at least one point".into()));
    }
    let mut w = csv_writer(path)?;
    let e = |err| csv_error(path, err);
    w.write_record(["x", "density", "cdf"]).map_err(e)?;
    for (x, d, c) in law.tabulate(grid) {
        w.write_record([num(x), num(d), num(c)]).map_err(e)?;
    }
    w.flush().map_err(|err| RmtError::io(path, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_ginibre, RngStream};
    use crate::laws::semicircle;
    use crate::laws::RadiusMode;
    use proptest::prelude::*;

    #[test]
    fn matrix_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut rng = RngStream::new(5, 0);
        for field in [Field::Real, Field::Complex] {
            let m = sample_ginibre(7, field, &mut rng).unwrap();
            let p = dir.path().join(format!("{}.txt", field.as_str()));
            write_matrix(&m, &p).unwrap();
            let back = read_matrix(&p).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn matrix_header_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        std::fs::write(&p, "rmt-matrix v2 1 1 real\n1\n").unwrap();
        assert!(matches!(read_matrix(&p), Err(RmtError::Parse(_))));
        std::fs::write(&p, "rmt-matrix v1 2 2 real\n1 2\n3\n").unwrap();
        assert!(matches!(read_matrix(&p), Err(RmtError::Parse(_))));
        std::fs::write(&p, "rmt-matrix v1 1 1 quaternion\n1\n").unwrap();
        assert!(matches!(read_matrix(&p), Err(RmtError::Parse(_))));
    }

    #[test]
    fn io_errors_name_the_path() {
        let p = Path::new("/nonexistent-dir/x/m.txt");
        let err = read_matrix(p).unwrap_err();
        assert!(matches!(&err, RmtError::Io { path, .. } if path == p));
        let law = semicircle(RadiusMode::Wigner2);
        assert!(matches!(emit_csv_law_table(&law, 10, p), Err(RmtError::Io { .. })));
    }

    #[test]
    fn law_table_columns() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("law.csv");
        emit_csv_law_table(&semicircle(RadiusMode::Wigner2), 5, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,density,cdf");
        assert_eq!(lines.len(), 6);
        let mid: Vec<f64> = lines[3].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(mid[0], 0.0);
        assert!((mid[1] - 1.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!((mid[2] - 0.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn measure_csv_round_trip(xs in proptest::collection::vec(-1e6f64..1e6, 1..40), complex in any::<bool>()) {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("mu.csv");
            let mu = if complex {
                EmpiricalMeasure::from_complex(xs.iter().map(|x| Complex64::new(*x, x / 3.0)).collect()).unwrap()
            } else {
                EmpiricalMeasure::from_real(xs.clone()).unwrap()
            };
            emit_csv_measure(&mu, &p).unwrap();
            prop_assert_eq!(read_csv_measure(&p).unwrap(), mu);
        }
    }
}
