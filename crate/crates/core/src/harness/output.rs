//! CSV report files.
//!
//! Every file opens with a single `# generated <unix seconds>` comment so the
//! rest of the file is byte-identical across runs with the same config.

use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::Result;

/// Seventeen significant digits: round-trips every `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct CsvReport {
    writer: csv::Writer<File>,
}

impl CsvReport {
    /// Create `path`, write the timestamp comment, any extra comment lines,
    /// then the header row.
    pub fn create(path: &Path, comments: &[String], header: &[&str]) -> Result<Self> {
        let mut file = File::create(path)?;
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        writeln!(file, "# generated {stamp}")?;
        for c in comments {
            writeln!(file, "# {c}")?;
        }
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}
