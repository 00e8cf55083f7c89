//! Deterministic output files: CSV tables and JSON reports, each embedding
//! the tool version and the configuration hash.

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::spectral::{EigenPair, TrajectoryPath};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;

/// Crate version stamped into every output.
pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Lowercase hex SHA-256 of the raw configuration text.
pub fn config_hash(raw: &str) -> String {
    let mut h = Sha256::new();
    h.update(raw.as_bytes());
    let out = h.finalize();
    let mut s = String::with_capacity(64);
    for byte in out {
        let _ = write!(s, "{byte:02x}");
    }
    s
}

/// Comment header carried by every CSV file.
pub fn csv_header(hash: &str) -> String {
    format!("# dilatlab v{} config_sha256={hash}\n", version())
}

/// 17 significant digits, sign and exponent always present.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One classified spectrum point at one working angle.
#[derive(Debug, Clone)]
pub struct SpectrumRow {
    pub phi: f64,
    pub class: &'static str,
    pub pair: EigenPair,
}

/// Spectrum table ordered by (phi, Re, Im); byte-identical across runs.
pub fn spectrum_csv(hash: &str, rows: &[SpectrumRow]) -> String {
    let mut rows: Vec<&SpectrumRow> = rows.iter().collect();
    rows.sort_by(|a, b| {
        a.phi
            .total_cmp(&b.phi)
            .then(a.pair.value.re.total_cmp(&b.pair.value.re))
            .then(a.pair.value.im.total_cmp(&b.pair.value.im))
    });
    let mut out = csv_header(hash);
    out.push_str("phi,re,im,multiplicity,residual,class,ambiguous\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(r.phi),
            fmt_f64(r.pair.value.re),
            fmt_f64(r.pair.value.im),
            r.pair.multiplicity,
            fmt_f64(r.pair.residual),
            r.class,
            r.pair.ambiguous
        );
    }
    out
}

/// Trajectory table: one row per (path, angle), paths in index order.
pub fn trajectory_csv(hash: &str, paths: &[TrajectoryPath]) -> String {
    let mut out = csv_header(hash);
    out.push_str("path,phi,re,im,multiplicity,ambiguous,complete\n");
    for (k, p) in paths.iter().enumerate() {
        for (i, (phi, z)) in p.points.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                k,
                fmt_f64(*phi),
                fmt_f64(z.re),
                fmt_f64(z.im),
                p.multiplicities[i],
                p.ambiguous,
                p.complete
            );
        }
    }
    out
}

/// One norm evaluation on the scan grid.
#[derive(Debug, Clone)]
pub struct NormRow {
    pub phi: f64,
    pub p: f64,
    pub quadrature: f64,
    /// Closed-form value where the family has one.
    pub closed_form: Option<f64>,
    /// Sign of the discrete derivative along the grid at this point.
    pub direction: i8,
}

/// Norm table ordered by (p, phi).
pub fn norms_csv(hash: &str, rows: &[NormRow]) -> String {
    let mut rows: Vec<&NormRow> = rows.iter().collect();
    rows.sort_by(|a, b| a.p.total_cmp(&b.p).then(a.phi.total_cmp(&b.phi)));
    let mut out = csv_header(hash);
    out.push_str("p,phi,quadrature,closed_form,direction\n");
    for r in rows {
        let cf = r.closed_form.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.p),
            fmt_f64(r.phi),
            fmt_f64(r.quadrature),
            cf,
            r.direction
        );
    }
    out
}

/// One right-hand-side evaluation on a parameter sweep.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub theorem: &'static str,
    pub parameter: &'static str,
    pub value: f64,
    pub rhs: f64,
    pub alpha_required: f64,
}

/// Sweep table ordered by (theorem, parameter, value).
pub fn scan_csv(hash: &str, rows: &[ScanRow]) -> String {
    let mut rows: Vec<&ScanRow> = rows.iter().collect();
    rows.sort_by(|a, b| {
        a.theorem
            .cmp(b.theorem)
            .then(a.parameter.cmp(b.parameter))
            .then(a.value.total_cmp(&b.value))
    });
    let mut out = csv_header(hash);
    out.push_str("theorem,parameter,value,rhs,alpha_required\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.theorem,
            r.parameter,
            fmt_f64(r.value),
            fmt_f64(r.rhs),
            fmt_f64(r.alpha_required)
        );
    }
    out
}

#[derive(Serialize)]
struct ReportFile<'a> {
    version: &'static str,
    config_sha256: &'a str,
    reports: &'a [BoundReport],
}

/// JSON document holding every verification report.
pub fn reports_json(hash: &str, reports: &[BoundReport]) -> String {
    let doc = ReportFile { version: version(), config_sha256: hash, reports };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serialization");
    text.push('\n');
    text
}

/// One PASS/FAIL line per report, for terminals and logs.
pub fn verify_summary(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let verdict = if r.satisfied { "PASS" } else { "FAIL" };
        let flag = if r.boundary_flag { " [near-boundary]" } else { "" };
        let undecided = if r.undecided_in_region > 0 {
            format!(" [{} undecided nearby]", r.undecided_in_region)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{verdict} {:<20} lhs={:<24} rhs={:<24} ratio={:.6}{flag}{undecided}",
            r.theorem,
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            r.ratio
        );
    }
    out
}

/// Write text to a file, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(Error::Io)?;
        }
    }
    std::fs::write(path, text).map_err(Error::Io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn row(phi: f64, re: f64, im: f64) -> SpectrumRow {
        SpectrumRow {
            phi,
            class: "isolated",
            pair: EigenPair {
                value: Complex64::new(re, im),
                multiplicity: 1,
                residual: 1e-12,
                ambiguous: false,
            },
        }
    }

    #[test]
    fn hash_is_stable_and_hex() {
        let h = config_hash("abc");
        assert_eq!(h.len(), 64);
        assert_eq!(h, config_hash("abc"));
        assert_ne!(h, config_hash("abd"));
        assert!(h.chars().all(|c| c.is_ascii_hexdigit()));
    }

    #[test]
    fn spectrum_rows_are_sorted_and_formatted() {
        let rows = vec![row(0.3, -1.0, 0.0), row(0.1, 2.0, -0.5), row(0.1, -3.0, 0.2)];
        let text = spectrum_csv("deadbeef", &rows);
        assert!(text.starts_with("# dilatlab v"));
        assert!(text.contains("config_sha256=deadbeef"));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("1.0000000000000001e-1,-3.0000000000000000e0"));
        assert!(lines[3].starts_with("1.0000000000000001e-1,2.0000000000000000e0"));
        assert!(lines[4].starts_with("2.9999999999999999e-1,-1.0000000000000000e0"));
        assert_eq!(text, spectrum_csv("deadbeef", &rows));
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.125), "-1.2500000000000000e-1");
        let third = fmt_f64(1.0 / 3.0);
        assert_eq!(third.parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn norm_rows_keep_optional_column_empty() {
        let rows = vec![NormRow { phi: 0.1, p: 2.0, quadrature: 1.5, closed_form: None, direction: 1 }];
        let text = norms_csv("00", &rows);
        let last = text.lines().last().unwrap();
        assert!(last.ends_with(",,1"), "{last}");
    }
}
