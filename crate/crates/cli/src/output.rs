//! CSV writers. Floats carry 17 significant digits so tables round-trip
//! exactly; missing values are written as `NA`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use qbattery::sweeps::SweepRow;
use qbattery::Model;

use crate::error::CliError;

pub const SERIES_HEADER: [&str; 2] = ["t", "energy"];

pub const TABLE_HEADER: [&str; 16] = [
    "model",
    "topology",
    "normalization",
    "N",
    "m",
    "beta",
    "beta_prime",
    "kappa",
    "n_max",
    "dim",
    "p_max",
    "tau",
    "e_max",
    "p_scaled",
    "cutoff_converged",
    "wall_time_s",
];

/// Marker written in the numeric columns of a failed sweep point.
pub const ERROR_MARKER: &str = "ERROR";

const NA: &str = "NA";

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_owned()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    let file = File::create(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv {
        path: path.to_owned(),
        source,
    }
}

pub fn write_series(series: &[(f64, f64)], path: &Path) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(SERIES_HEADER).map_err(csv_error(path))?;
    for &(t, e) in series {
        w.write_record([format_float(t), format_float(e)])
            .map_err(csv_error(path))?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// One table line; columns that do not apply to the model are `NA`.
pub fn table_record(row: &SweepRow) -> Vec<String> {
    let p = &row.params;
    let jch = p.model == Model::Jch;
    let na = || NA.to_owned();
    let mut rec = vec![
        p.model.to_string(),
        if jch { p.topology.to_string() } else { na() },
        if jch {
            na()
        } else {
            p.normalization.to_string()
        },
        p.n.to_string(),
        p.m.to_string(),
        format_float(p.beta),
        if jch {
            na()
        } else {
            format_float(p.beta_prime_value())
        },
        if jch { format_float(p.kappa) } else { na() },
        if jch {
            na()
        } else {
            p.photon_cutoff().to_string()
        },
    ];
    if row.is_ok() {
        rec.extend([
            row.dim.to_string(),
            format_float(row.p_max),
            row.tau.map_or_else(na, format_float),
            format_float(row.e_max),
            format_float(row.p_scaled),
        ]);
    } else {
        rec.push(na());
        rec.extend(std::iter::repeat_n(ERROR_MARKER.to_owned(), 4));
    }
    rec.push(match row.cutoff_converged {
        Some(c) => c.to_string(),
        None => na(),
    });
    rec.push(format_float(row.wall_time_s));
    rec
}

pub fn write_table(rows: &[SweepRow], path: &Path) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(TABLE_HEADER).map_err(csv_error(path))?;
    for row in rows {
        w.write_record(table_record(row)).map_err(csv_error(path))?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_text(text: &str, path: &Path) -> Result<(), CliError> {
    File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qbattery::ModelParams;

    fn row(params: ModelParams) -> SweepRow {
        SweepRow {
            label: String::new(),
            axis_value: 1.0,
            params,
            dim: 8,
            p_max: 0.1,
            tau: Some(2.0),
            e_max: 1.0,
            p_scaled: 0.05,
            cutoff_converged: None,
            wall_time_s: f64::NAN,
            error: None,
        }
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(format_float(0.05), "5.0000000000000003e-2");
        assert_eq!(format_float(f64::NAN), "NaN");
        let x = 0.1 + 0.2;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn records_match_header_width() {
        let jch = table_record(&row(ModelParams::jch(2, 1, 0.05, 0.5)));
        assert_eq!(jch.len(), TABLE_HEADER.len());
        assert_eq!(&jch[..3], ["jch", "line", "NA"]);
        assert_eq!(jch[8], "NA");
        let mut failed = row(ModelParams::dicke(2, 1, 0.5).with_n_max(10));
        failed.error = Some("boom".into());
        let rec = table_record(&failed);
        assert_eq!(rec.len(), TABLE_HEADER.len());
        assert_eq!(rec[8], "10");
        assert_eq!(rec[10], ERROR_MARKER);
    }

    #[test]
    fn empty_table_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_table(&[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            format!("{}\n", TABLE_HEADER.join(","))
        );
    }
}
