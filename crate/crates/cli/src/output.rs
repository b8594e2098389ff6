use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliResult;

/// Seventeen significant digits: enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV body, kept as the exact strings that are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "{}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner()
            .map_err(|e| crate::error::CliError::Resource(e.to_string()))
    }
}

/// Everything a run produced, plus what is needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment: String,
    pub library_version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub tables: Vec<Table>,
    /// Gates that did not hold; a nonempty list means exit code 2.
    pub failures: Vec<String>,
    pub wall_time_s: f64,
}

impl ResultRecord {
    /// The record without its wall-time field, as compared across runs.
    pub fn body(&self) -> String {
        let mut r = self.clone();
        r.wall_time_s = 0.0;
        serde_json::to_string_pretty(&r).expect("serializable")
    }
}

/// Writes `<table>.csv` for each table and `result.json` into `dir`.
pub fn write_record(dir: &Path, rec: &ResultRecord) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    for t in &rec.tables {
        fs::write(dir.join(format!("{}.csv", t.name)), t.to_csv()?)?;
    }
    let json = serde_json::to_string_pretty(rec).expect("serializable");
    fs::write(dir.join("result.json"), json + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits = s
                .split('e')
                .next()
                .unwrap()
                .chars()
                .filter(|c| c.is_ascii_digit())
                .count();
            assert_eq!(digits, 17, "{s}");
        }
    }

    #[test]
    fn csv_body() {
        let mut t = Table::new("t", &["a", "b"]);
        t.push(vec!["1".into(), num(0.5)]);
        assert_eq!(
            String::from_utf8(t.to_csv().unwrap()).unwrap(),
            "a,b\n1,5.0000000000000000e-1\n"
        );
    }
}
