//! JSON and CSV writers. Floats use Rust's shortest round-trip formatting so
//! every value parses back to the same bits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level layout shared by every JSON report.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, B: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub config: &'a C,
    #[serde(flatten)]
    pub body: B,
}

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub struct Csv {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            comments: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    /// `# schema_version`, `# command` and the resolved config as one JSON line.
    pub fn provenance<C: Serialize>(&mut self, command: &str, config: &C) -> &mut Self {
        self.comment(format!("schema_version={SCHEMA_VERSION}"));
        self.comment(format!("command={command}"));
        self.comment(format!(
            "config={}",
            serde_json::to_string(config).expect("config serializes")
        ))
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn numeric_row(&mut self, values: &[f64]) {
        self.row(values.iter().map(|&v| num(v)).collect());
    }

    pub fn write_to(&self, w: &mut dyn Write) -> io::Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(w, "{}", r.join(","))?;
        }
        Ok(())
    }
}

pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            match f(&mut lock).and_then(|_| lock.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["t", "x"]);
        csv.comment("seed=3");
        csv.numeric_row(&[0.0, 0.5]);
        let mut buf = Vec::new();
        csv.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# seed=3\nt,x\n0.0,0.5\n");
    }
}
