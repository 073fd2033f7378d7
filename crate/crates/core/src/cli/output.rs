use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectrum::{BranchPoint, StabilityReport, Verdict, WeightWindow};
use crate::asymptotics::Side;
use num_complex::Complex64;

/// Significant digits used for every number written by the CLI.
pub const SIG_DIGITS: usize = 12;

/// Decimal rendering with [`SIG_DIGITS`] significant digits, trailing zeros
/// removed. Very large or small magnitudes fall back to exponent notation.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if !(-7..=15).contains(&exp) {
        return format!("{sign}{}e{exp}", trim_fraction(mantissa));
    }
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to [`SIG_DIGITS`] so that JSON output is as reproducible as CSV.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().unwrap_or(x)
    } else {
        x
    }
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Minimal CSV builder: header first, then rows of preformatted cells.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchPointJson {
    pub re: f64,
    pub im: f64,
    pub mu_re: f64,
    pub mu_im: f64,
    pub in_absolute: bool,
}

impl From<&BranchPoint> for BranchPointJson {
    fn from(b: &BranchPoint) -> Self {
        Self {
            re: round_sig(b.lambda_br.re),
            im: round_sig(b.lambda_br.im),
            mu_re: round_sig(b.double_root_mu.re),
            mu_im: round_sig(b.double_root_mu.im),
            in_absolute: b.in_absolute,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightsJson {
    pub nu_minus_star: f64,
    pub nu_plus_star: f64,
    pub nu_min: Option<f64>,
    pub nu_max: Option<f64>,
    pub empty: bool,
}

/// Serialised form of a [`StabilityReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub params: ModelParams,
    pub beta_crit: Option<f64>,
    pub branch_points: Vec<BranchPointJson>,
    pub weights: WeightsJson,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

impl ReportJson {
    pub fn from_report(r: &StabilityReport) -> Self {
        let p = r.params;
        let w = &r.weights;
        Self {
            params: ModelParams {
                beta: round_sig(p.beta),
                c: round_sig(p.c),
                m: round_sig(p.m),
                eps: round_sig(p.eps),
            },
            beta_crit: r.beta_crit_effective.map(round_sig),
            branch_points: r.branch_points.iter().map(BranchPointJson::from).collect(),
            weights: WeightsJson {
                nu_minus_star: round_sig(w.nu_minus_star),
                nu_plus_star: round_sig(w.nu_plus_star),
                nu_min: w.nu_min.map(round_sig),
                nu_max: w.nu_max.map(round_sig),
                empty: w.empty,
            },
            verdict: r.verdict,
            diagnostics: r.diagnostics.clone(),
        }
    }

    /// Rebuilds a report; residuals are not serialised and come back as zero.
    pub fn to_report(&self) -> Result<StabilityReport> {
        let params = self.params.validate()?;
        let branch_points = self
            .branch_points
            .iter()
            .map(|b| BranchPoint {
                lambda_br: Complex64::new(b.re, b.im),
                double_root_mu: Complex64::new(b.mu_re, b.mu_im),
                in_absolute: b.in_absolute,
                side: Side::MinusInfinity,
                residuals: (0.0, 0.0),
            })
            .collect();
        let w = &self.weights;
        Ok(StabilityReport {
            params,
            beta_crit_effective: self.beta_crit,
            branch_points,
            weights: WeightWindow {
                nu_minus_star: w.nu_minus_star,
                nu_plus_star: w.nu_plus_star,
                nu_min: w.nu_min,
                nu_max: w.nu_max,
                empty: w.empty,
                k_max: f64::NAN,
            },
            verdict: self.verdict,
            beta_above_crit: self.beta_crit.map(|b| params.beta > b),
            diagnostics: self.diagnostics.clone(),
        })
    }

    /// Parses and re-validates a serialised report.
    pub fn parse_checked(text: &str) -> Result<StabilityReport> {
        let json: ReportJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("report JSON: {e}")))?;
        let report = json.to_report()?;
        report.check_invariants()?;
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(1.6195850247857413), "1.61958502479");
        assert_eq!(fmt_sig(-0.72603), "-0.72603");
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(1234567.0), "1234567");
        assert_eq!(fmt_sig(0.000123456789012345), "0.000123456789012");
        assert_eq!(fmt_sig(1.5e-12), "1.5e-12");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(9.99999999999951), "10");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
