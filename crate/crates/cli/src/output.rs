//! Atomic file output and the CSV layout of threshold curves.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use spanhyper_core::montecarlo::ThresholdCurve;

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Sends `bytes` to `path` when given, otherwise to stdout.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// `# key=value` metadata lines, then a header row and one row per `p`.
pub fn curve_csv(curve: &ThresholdCurve, config: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for (k, v) in curve.metadata() {
        writeln!(buf, "# {k}={v}")?;
    }
    writeln!(buf, "# config={config}")?;
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(["p", "trials", "successes", "phat", "ci_low", "ci_high"])?;
    for row in &curve.rows {
        w.write_record([
            row.p.to_string(),
            row.trials.to_string(),
            row.successes.to_string(),
            row.phat.to_string(),
            row.ci_low.to_string(),
            row.ci_high.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("flushing CSV: {}", e.error()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
