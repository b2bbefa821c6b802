//! CSV input and output.
//!
//! Inputs are plain numeric tables: `#` lines are comments and a non-numeric
//! first row is taken as a header. Outputs carry a header and write floats
//! with 17 significant digits so that they parse back exactly.

use std::io::{Read, Write};

use crate::error::{invalid, Error, Result};
use crate::experiments::format_float;
use crate::geometry::PointSet;
use crate::interpolate::{CardinalTable, LebesgueReport};

/// Numeric rows of a CSV table, header and comments skipped. All rows must
/// have the same width.
pub fn read_table<R: Read>(input: R) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => {
                if let Some(first) = rows.first() {
                    if first.len() != v.len() {
                        return Err(Error::Csv(format!(
                            "record {} has {} fields, expected {}",
                            line + 1,
                            v.len(),
                            first.len()
                        )));
                    }
                }
                rows.push(v);
            }
            Err(_) if rows.is_empty() && line == 0 => continue,
            Err(e) => return Err(Error::Csv(format!("record {}: {e}", line + 1))),
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    Ok(rows)
}

/// Sites from a table whose columns are `x1..xd`, keeping the first `dim`
/// columns when `dim` is given.
pub fn read_points<R: Read>(input: R, dim: Option<usize>) -> Result<PointSet> {
    let rows = read_table(input)?;
    let width = rows[0].len();
    let d = dim.unwrap_or(width);
    if d == 0 || d > width {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: width,
        });
    }
    let coords: Vec<f64> = rows.iter().flat_map(|r| r[..d].iter().copied()).collect();
    PointSet::with_hull(d, coords)
}

/// Sites and values from a table with columns `x1..xd,f`.
pub fn read_samples<R: Read>(input: R) -> Result<(PointSet, Vec<f64>)> {
    let rows = read_table(input)?;
    let width = rows[0].len();
    if width < 2 {
        return Err(invalid(
            "data",
            "need at least one coordinate column and a value column",
        ));
    }
    let d = width - 1;
    let coords: Vec<f64> = rows.iter().flat_map(|r| r[..d].iter().copied()).collect();
    let values: Vec<f64> = rows.iter().map(|r| r[d]).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: i });
    }
    Ok((PointSet::with_hull(d, coords)?, values))
}

fn coord_header(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

fn coord_fields(x: &[f64]) -> Vec<String> {
    x.iter().map(|&v| format_float(v)).collect()
}

/// `x1..xd,pred,flag`; flagged rows have an empty prediction and flag 1.
pub fn write_predictions<W: Write>(out: W, points: &PointSet, preds: &[Option<f64>]) -> Result<()> {
    if preds.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: preds.len(),
        });
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = coord_header(points.dim());
    header.extend(["pred".to_string(), "flag".to_string()]);
    w.write_record(&header)?;
    for (x, p) in points.iter().zip(preds) {
        let mut rec = coord_fields(x);
        match p {
            Some(v) => rec.extend([format_float(*v), "0".to_string()]),
            None => rec.extend([String::new(), "1".to_string()]),
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// `x1..xd,denom,u_1..u_N` at the table's evaluation points.
pub fn write_cardinal_table<W: Write>(out: W, table: &CardinalTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let pts = table.eval_points();
    let mut header = coord_header(pts.dim());
    header.push("denom".to_string());
    header.extend((1..=table.n_centers()).map(|j| format!("u_{j}")));
    w.write_record(&header)?;
    for (i, x) in pts.iter().enumerate() {
        let mut rec = coord_fields(x);
        rec.push(format_float(table.denom()[i]));
        rec.extend(table.u_row(i).iter().map(|&v| format_float(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// `x1..xd,lebesgue_std,lebesgue_resc,defined_flag`; the rescaled value is
/// empty where its denominator vanished.
pub fn write_lebesgue<W: Write>(out: W, points: &PointSet, report: &LebesgueReport) -> Result<()> {
    if report.lambda_fn.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: report.lambda_fn.len(),
        });
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = coord_header(points.dim());
    header.extend(["lebesgue_std", "lebesgue_resc", "defined_flag"].map(String::from));
    w.write_record(&header)?;
    for (i, x) in points.iter().enumerate() {
        let mut rec = coord_fields(x);
        rec.push(format_float(report.lambda_fn[i]));
        if report.defined[i] {
            rec.extend([format_float(report.lambda_hat_fn[i]), "1".to_string()]);
        } else {
            rec.extend([String::new(), "0".to_string()]);
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, PointSet};
    use crate::interpolate::{cardinal_table, lebesgue};
    use crate::kernels::{Kernel, KernelFamily};

    #[test]
    fn reads_with_header_and_comments() {
        let text = "# produced by hand\nx1,x2,f\n0,0,1\n# middle comment\n 0.5 , 1 , 2.5\n";
        let (x, f) = read_samples(text.as_bytes()).unwrap();
        assert_eq!(x.dim(), 2);
        assert_eq!(x.coords(), &[0.0, 0.0, 0.5, 1.0]);
        assert_eq!(f, vec![1.0, 2.5]);
    }

    #[test]
    fn reads_without_header() {
        let rows = read_table("1,2\n3,4\n".as_bytes()).unwrap();
        assert_eq!(rows, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let p = read_points("1,2,9\n3,4,9\n".as_bytes(), Some(2)).unwrap();
        assert_eq!(p.coords(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn rejects_ragged_and_garbage() {
        assert!(read_table("1,2\n3\n".as_bytes()).is_err());
        assert!(read_table("1,2\nfoo,4\n".as_bytes()).is_err());
        assert!(read_table("# only comments\n".as_bytes()).is_err());
        assert!(read_samples("0\n1\n".as_bytes()).is_err());
    }

    #[test]
    fn predictions_round_trip() {
        let x = PointSet::new(1, vec![0.1, 0.7], Domain::interval(0.0, 1.0).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_predictions(&mut buf, &x, &[Some(1.0 / 3.0), None]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x1,pred,flag");
        assert!(lines[2].ends_with(",,1"));
        let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, 1.0 / 3.0);
    }

    #[test]
    fn lebesgue_and_cardinal_layout() {
        let x = PointSet::new(1, vec![0.2, 0.5, 0.8], Domain::interval(0.0, 1.0).unwrap()).unwrap();
        let e =
            PointSet::new(1, vec![0.0, 0.5, 0.95], Domain::interval(0.0, 1.0).unwrap()).unwrap();
        let k = Kernel::radial(KernelFamily::WendlandW2, 5.0, 1).unwrap();
        let t = cardinal_table(&k, &x, &e).unwrap();
        let mut buf = Vec::new();
        write_cardinal_table(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "x1,denom,u_1,u_2,u_3");
        assert_eq!(text.lines().count(), 4);

        let mut buf = Vec::new();
        write_lebesgue(&mut buf, &e, &lebesgue(&t)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x1,lebesgue_std,lebesgue_resc,defined_flag");
        // 0.0 lies outside every support of radius 0.2 around the nodes
        assert!(lines[1].ends_with(",,0"));
        assert!(lines[2].ends_with(",1"));
    }
}
