//! JSON run reports with a fixed key order.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub angle: Option<f64>,
    pub distribution: String,
    pub signal_mass: Option<f64>,
    pub cross_mass: Option<f64>,
    pub ratio: Option<f64>,
    /// Named residuals, written in this order.
    pub residuals: Vec<(String, f64)>,
}

impl Report {
    pub fn new(distribution: impl Into<String>) -> Self {
        Self { distribution: distribution.into(), ..Self::default() }
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

/// 17 significant digits; `null` for missing or non-finite values.
fn number(out: &mut String, v: Option<f64>) {
    match v {
        Some(x) if x.is_finite() => write!(out, "{x:.16e}").unwrap(),
        _ => out.push_str("null"),
    }
}

fn string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => write!(out, "\\u{:04x}", c as u32).unwrap(),
            c => out.push(c),
        }
    }
    out.push('"');
}

pub fn to_json(reports: &[Report]) -> String {
    if reports.is_empty() {
        return "[]\n".to_string();
    }
    let mut out = String::from("[\n");
    for (i, r) in reports.iter().enumerate() {
        out.push_str("  {\"angle\": ");
        number(&mut out, r.angle);
        out.push_str(", \"distribution\": ");
        string(&mut out, &r.distribution);
        out.push_str(", \"signal_mass\": ");
        number(&mut out, r.signal_mass);
        out.push_str(", \"cross_mass\": ");
        number(&mut out, r.cross_mass);
        out.push_str(", \"ratio\": ");
        number(&mut out, r.ratio);
        out.push_str(", \"residuals\": {");
        for (k, (name, v)) in r.residuals.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            string(&mut out, name);
            out.push_str(": ");
            number(&mut out, Some(*v));
        }
        out.push_str("}}");
        out.push_str(if i + 1 < reports.len() { ",\n" } else { "\n" });
    }
    out.push_str("]\n");
    out
}

pub fn write_report(reports: &[Report], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    std::fs::write(path, to_json(reports)).map_err(|e| Error::io(path, e))
}
