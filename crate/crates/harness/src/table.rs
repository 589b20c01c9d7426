//! Numeric result tables and their CSV form.
//!
//! Every CSV starts with `#` lines carrying the tool version, the seed, a
//! SHA-256 of the parameters, and the parameters themselves, so a file can be
//! traced back to the run that produced it.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

pub const VERSION: &str = concat!("covertnet v", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub seed: u64,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    params: Vec<(String, String)>,
    notes: Vec<String>,
}

impl ResultTable {
    pub fn new(name: impl Into<String>, seed: u64, columns: &[&str]) -> Self {
        ResultTable {
            name: name.into(),
            seed,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            params: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Appends a row; panics if its width differs from the header.
    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the {} columns",
            self.columns.len()
        );
        self.rows.push(row);
    }

    pub fn param(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    /// A free-text header line, e.g. an assumed parameter value.
    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn params(&self) -> &[(String, String)] {
        &self.params
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// SHA-256 over the table name, seed, parameters and notes.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.name.as_bytes());
        h.update(b"\nseed=");
        h.update(self.seed.to_string().as_bytes());
        for (k, v) in &self.params {
            h.update(format!("\n{k}={v}").as_bytes());
        }
        for n in &self.notes {
            h.update(format!("\nnote={n}").as_bytes());
        }
        h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {VERSION}");
        let _ = writeln!(out, "# table: {}", self.name);
        let _ = writeln!(out, "# seed: {}", self.seed);
        let _ = writeln!(out, "# config-sha256: {}", self.config_hash());
        for (k, v) in &self.params {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "# note: {n}");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|x| x.to_string()))
                .expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("ASCII CSV"));
        out
    }
}
