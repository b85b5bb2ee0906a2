//! CSV number formatting and JSON run metadata.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

/// Seventeen significant decimal digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Formats an optional value, leaving missing entries empty.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Identifies the build that produced an output file.
pub fn build_id() -> String {
    format!(
        "{} {} ({} {})",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        std::env::consts::OS,
        std::env::consts::ARCH
    )
}

/// JSON sidecar written next to every CSV.
#[derive(Debug, Serialize)]
pub struct Sidecar<'a, C: Serialize> {
    pub command: &'a str,
    pub build: String,
    pub created_unix: u64,
    pub config: &'a C,
}

impl<'a, C: Serialize> Sidecar<'a, C> {
    pub fn new(command: &'a str, config: &'a C) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command,
            build: build_id(),
            created_unix,
            config,
        }
    }
}

/// Path of the sidecar for a CSV: `out.csv` → `out.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes `csv` to `path` and the sidecar next to it.
pub fn write_with_sidecar<C: Serialize>(
    path: &Path,
    csv: &[u8],
    command: &str,
    config: &C,
) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, csv)?;
    let meta = serde_json::to_string_pretty(&Sidecar::new(command, config))?;
    fs::write(sidecar_path(path), meta + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
        assert_eq!(fmt_opt(None), "");
    }

    #[test]
    fn sidecar_sits_next_to_csv() {
        assert_eq!(sidecar_path(Path::new("a/b.csv")), Path::new("a/b.json"));
    }
}
