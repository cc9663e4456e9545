use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use super::experiment::RunRecord;
use super::sweep::SweepResult;
use crate::error::{Error, Result};

/// Columns of the per-(run, SBS, period) table.
pub const CSV_HEADER: [&str; 7] = [
    "seed",
    "algorithm",
    "period",
    "sbs_id",
    "mean_utility",
    "convergence_iter",
    "format_360_fraction",
];

/// Nine significant digits, plain notation for moderate magnitudes.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.8e}")
    }
}

fn serialize_err(path: &Path, e: impl ToString) -> Error {
    Error::Serialize {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// CSV bytes of the per-(run, SBS, period) table.
pub fn records_csv(records: &[RunRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        for p in &r.periods {
            for s in &p.sbs {
                w.write_record([
                    r.seed.to_string(),
                    r.algorithm.tag().to_string(),
                    p.period.to_string(),
                    s.sbs.to_string(),
                    fmt_sig(s.mean_utility),
                    s.convergence_iter.to_string(),
                    fmt_sig(s.format_360_fraction),
                ])
                .expect("in-memory write");
            }
        }
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_csv(records: &[RunRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = create(path)?;
    f.write_all(&records_csv(records))
        .and_then(|_| f.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_json<T: serde::Serialize + ?Sized>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = create(path)?;
    serde_json::to_writer(&mut f, value).map_err(|e| serialize_err(path, e))?;
    f.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json_records(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(f)).map_err(|e| serialize_err(path, e))
}

pub fn write_sweep_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "axis",
        "value",
        "algorithm",
        "seeds",
        "mean_total_success",
        "std_total_success",
        "mean_per_user_success",
        "std_per_user_success",
        "mean_convergence_iter",
        "std_convergence_iter",
    ])
    .expect("in-memory write");
    let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
    for r in &result.rows {
        w.write_record([
            r.axis.name().to_string(),
            fmt_sig(r.value),
            r.algorithm.tag().to_string(),
            r.seeds.to_string(),
            fmt_sig(r.mean_total_success),
            fmt_sig(r.std_total_success),
            fmt_sig(r.mean_per_user_success),
            fmt_sig(r.std_per_user_success),
            opt(r.mean_convergence_iter),
            opt(r.std_convergence_iter),
        ])
        .expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    let mut f = create(path)?;
    f.write_all(&bytes)
        .and_then(|_| f.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_cdf_csv(points: &[(f64, f64)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["value", "cumulative_fraction"])
        .expect("in-memory write");
    for &(v, f) in points {
        w.write_record([fmt_sig(v), fmt_sig(f)])
            .expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    let mut f = create(path)?;
    f.write_all(&bytes)
        .and_then(|_| f.flush())
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666666667");
        assert_eq!(fmt_sig(1234.56789012), "1234.56789");
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(1e20), "1.00000000e20");
        assert_eq!(fmt_sig(123456789.4), "123456789");
    }
}
