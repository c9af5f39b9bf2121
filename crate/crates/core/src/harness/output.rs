use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{Report, ReportBody};
use crate::error::{Error, Result};

fn csv_of<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

impl Report {
    pub fn kind(&self) -> &'static str {
        self.config.experiment.kind()
    }

    /// Row table with a fixed header per report type.
    pub fn to_csv(&self) -> Result<String> {
        match &self.result {
            ReportBody::Scaling(r) => csv_of(&r.rows),
            ReportBody::LdpIid(r) => csv_of(&r.rows),
            ReportBody::LdpRestricted(r) => csv_of(&r.rows),
            ReportBody::EventProb(r) => csv_of(&r.rows),
            ReportBody::Concentration(r) => csv_of(&r.rows),
            ReportBody::XiVerify(r) => csv_of(&r.rows),
            ReportBody::Simulate(r) => csv_of(&r.rows),
        }
    }

    /// Full report, fits included, with the configuration echoed.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Writes `<kind>.csv` and `<kind>.json` into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.kind()));
        let json_path = dir.join(format!("{}.json", self.kind()));
        std::fs::write(&csv_path, self.to_csv()?)?;
        std::fs::write(&json_path, self.to_json()?)?;
        Ok((csv_path, json_path))
    }
}
