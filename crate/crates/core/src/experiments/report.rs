use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Least-squares fit of log y = intercept + slope · log x.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub name: String,
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the log-space residuals
    pub residual: f64,
}

impl Fit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

pub fn fit_power_law(name: &str, x: &[f64], y: &[f64]) -> Result<Fit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::ParameterOutOfRange("power-law fit needs at least two points".into()));
    }
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::NumericalFailure(format!("{name}: power-law fit needs positive finite data")));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::NumericalFailure(format!("{name}: degenerate abscissae")));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (lx.iter().zip(&ly).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    Ok(Fit { name: name.to_string(), slope, intercept, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Tabular study output with fits and threshold checks.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub fits: Vec<Fit>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl StudyReport {
    pub fn new(name: &str, columns: &[&str]) -> StudyReport {
        StudyReport {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            fits: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn fit_named(&self, name: &str) -> Option<&Fit> {
        self.fits.iter().find(|f| f.name == name)
    }

    /// Err(NonMonotoneConvergence) listing the failed checks.
    pub fn into_result(self) -> Result<StudyReport> {
        if self.passed() {
            return Ok(self);
        }
        let failed: Vec<String> = self.checks.iter().filter(|c| !c.passed).map(|c| format!("{} ({})", c.name, c.detail)).collect();
        Err(Error::NonMonotoneConvergence(format!("{}: {}", self.name, failed.join("; "))))
    }

    pub fn csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "study: {}", self.name);
        let _ = writeln!(s, "result: {}", if self.passed() { "PASS" } else { "FAIL" });
        for f in &self.fits {
            let _ = writeln!(s, "fit {}: slope {:.6} intercept {:.6} residual {:.3e}", f.name, f.slope, f.intercept, f.residual);
        }
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// Writes `<name>.report.csv` and `<name>.report.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.report.csv", self.name));
        let txt = dir.join(format!("{}.report.txt", self.name));
        std::fs::write(&csv, self.csv())?;
        std::fs::write(&txt, self.summary())?;
        Ok((csv, txt))
    }
}

/// Header and numeric rows of a CSV written by this crate.
pub fn read_report_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_csv(text: &str) -> std::result::Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines.next().ok_or("empty file")?.split(',').map(|c| c.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| format!("row {}: {e}", i + 1)))
            .collect::<std::result::Result<_, _>>()?;
        if row.len() != header.len() {
            return Err(format!("row {} has {} cells, header has {}", i + 1, row.len(), header.len()));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exponent() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.5)).collect();
        let f = fit_power_law("t", &x, &y).unwrap();
        assert!((f.slope + 1.5).abs() < 1e-12 && f.residual < 1e-12);
        assert!((f.predict(2.0) - y[1]).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let mut r = StudyReport::new("demo", &["a", "b"]);
        r.rows.push(vec![1.0, 0.1]);
        r.rows.push(vec![2.5e-17, -3.0]);
        r.check("ok", true, "");
        let dir = tempfile::tempdir().unwrap();
        let (csv, txt) = r.write(dir.path()).unwrap();
        let (h, rows) = read_report_csv(&csv).unwrap();
        assert_eq!(h, vec!["a", "b"]);
        assert_eq!(rows, r.rows);
        assert!(std::fs::read_to_string(txt).unwrap().contains("PASS"));
    }
}
