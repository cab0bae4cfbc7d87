//! CSV layouts, one per result type. Floats use Rust's shortest round-trip
//! form, so a re-export of the same result is byte-identical.
//!
//! | result | columns |
//! |---|---|
//! | [`HistogramResult`] | `bin,lower,upper,mean,std` |
//! | [`BifurcationGrid`] | `mu,bin,lower,upper,count` |
//! | [`ReturnMapData`] | `t,y_t,y_t1` (plus `y_t2` when `dims = 3`) |
//! | [`CipherDistResult`] | `source,kind,index,lower,upper,value` |
//! | [`KacReport`] | `site,predicted_measure,predicted_mean,empirical_mean,relative_error,returns` |
//! | [`BatteryExperiment`] | `test,name,n_bits,statistic,p_value,alpha,pass` |
//!
//! `CipherDistResult` rows come in three kinds: one `n0` row carrying the
//! transient bound, one `bin` row per histogram bin, and one `total` row per
//! run (`value` left empty for runs that hit `N_max`).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{
    AnalysisError, BatteryExperiment, BifurcationGrid, CipherDistResult, HistogramResult,
    KacReport, ReturnMapData,
};
use crate::prng::battery::write_reports_csv;

pub trait CsvExport {
    fn write_csv<W: Write>(&self, sink: W) -> Result<(), AnalysisError>;
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

/// Writes `result` to `path`, returning the file size.
pub fn export_csv<T: CsvExport + ?Sized>(result: &T, path: &Path) -> Result<u64, AnalysisError> {
    let mut w = BufWriter::new(File::create(path)?);
    result.write_csv(&mut w)?;
    w.flush()?;
    Ok(std::fs::metadata(path)?.len())
}

impl CsvExport for HistogramResult {
    fn write_csv<W: Write>(&self, sink: W) -> Result<(), AnalysisError> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["bin", "lower", "upper", "mean", "std"])?;
        let edges = self.edges();
        for b in 0..self.mean.len() {
            w.write_record([
                b.to_string(),
                num(edges[b]),
                num(edges[b + 1]),
                num(self.mean[b]),
                num(self.std[b]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl CsvExport for BifurcationGrid {
    fn write_csv<W: Write>(&self, sink: W) -> Result<(), AnalysisError> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["mu", "bin", "lower", "upper", "count"])?;
        let bins = self.config.x_bins as f64;
        for (mu, column) in self.mu.iter().zip(&self.counts) {
            for (b, count) in column.iter().enumerate() {
                w.write_record([
                    mu.clone(),
                    b.to_string(),
                    num(b as f64 / bins),
                    num((b + 1) as f64 / bins),
                    count.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

impl CsvExport for ReturnMapData {
    fn write_csv<W: Write>(&self, sink: W) -> Result<(), AnalysisError> {
        let mut w = csv::Writer::from_writer(sink);
        let three = self.config.dims == 3;
        if three {
            w.write_record(["t", "y_t", "y_t1", "y_t2"])?;
            for (t, (a, b, c)) in self.triples().enumerate() {
                w.write_record([t.to_string(), num(a), num(b), num(c)])?;
            }
        } else {
            w.write_record(["t", "y_t", "y_t1"])?;
            for (t, (a, b)) in self.pairs().enumerate() {
                w.write_record([t.to_string(), num(a), num(b)])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

impl CsvExport for CipherDistResult {
    fn write_csv<W: Write>(&self, sink: W) -> Result<(), AnalysisError> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["source", "kind", "index", "lower", "upper", "value"])?;
        w.write_record([&self.label, "n0", "0", "", "", &self.n0.to_string()])?;
        for (b, count) in self.histogram.iter().enumerate() {
            w.write_record([
                self.label.clone(),
                "bin".into(),
                b.to_string(),
                num(self.edges[b]),
                num(self.edges[b + 1]),
                count.to_string(),
            ])?;
        }
        for (run, total) in self.totals.iter().enumerate() {
            let value = total.map(|t| t.to_string()).unwrap_or_default();
            w.write_record([&self.label, "total", &run.to_string(), "", "", &value])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl CsvExport for [CipherDistResult] {
    /// All sources in one file, in order, under a single header.
    fn write_csv<W: Write>(&self, mut sink: W) -> Result<(), AnalysisError> {
        for (i, r) in self.iter().enumerate() {
            let mut buf = Vec::new();
            r.write_csv(&mut buf)?;
            let body = if i == 0 {
                &buf[..]
            } else {
                let header_end = buf.iter().position(|&b| b == b'\n').map_or(0, |p| p + 1);
                &buf[header_end..]
            };
            sink.write_all(body)?;
        }
        Ok(())
    }
}

impl CsvExport for KacReport {
    fn write_csv<W: Write>(&self, sink: W) -> Result<(), AnalysisError> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record([
            "site",
            "predicted_measure",
            "predicted_mean",
            "empirical_mean",
            "relative_error",
            "returns",
        ])?;
        w.write_record([
            self.site.to_string(),
            num(self.predicted_measure),
            num(self.predicted_mean),
            num(self.empirical_mean),
            num(self.relative_error),
            self.returns.to_string(),
        ])?;
        w.flush()?;
        Ok(())
    }
}

impl CsvExport for BatteryExperiment {
    fn write_csv<W: Write>(&self, sink: W) -> Result<(), AnalysisError> {
        Ok(write_reports_csv(&self.labelled_reports(), sink)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{histogram_experiment, kac_report, HistogramConfig, KacConfig};
    use crate::chaos::Precision;

    #[test]
    fn histogram_has_one_line_per_bin() {
        let r = histogram_experiment(&HistogramConfig {
            seeds: 2,
            samples: 1000,
            precision: Precision::Binary64,
            ..Default::default()
        })
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hist.csv");
        let bytes = export_csv(&r, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.len() as u64, bytes);
        assert_eq!(text.lines().count(), 501);
        assert_eq!(text.lines().next().unwrap(), "bin,lower,upper,mean,std");
        let again = dir.path().join("again.csv");
        export_csv(&r, &again).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
    }

    #[test]
    fn kac_is_one_row_of_six_columns() {
        let r = kac_report(&KacConfig {
            k: 4,
            min_returns: 50,
            precision: Precision::Binary64,
            ..Default::default()
        })
        .unwrap();
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), 6);
        assert_eq!(lines[1].split(',').count(), 6);
        assert!(lines[1].starts_with("104,"));
    }
}
