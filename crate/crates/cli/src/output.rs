//! Artifact files: a comment header followed by a CSV body, or a JSON
//! object `{meta, data}` whose rows mirror the CSV columns.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Run metadata shared by every file of one invocation.
#[derive(Debug, Clone)]
pub struct Meta {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    /// Extra `key: value` lines specific to one file.
    pub notes: Vec<(String, String)>,
}

impl Meta {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            config: BTreeMap::new(),
            seed,
            notes: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.config.insert(key.to_string(), value.to_string());
        self
    }

    fn config_line(&self) -> String {
        let pairs: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{} {}", self.command, pairs.join(" ")).trim_end().to_string()
    }

    fn header(&self, notes: &[(String, String)]) -> String {
        let mut out = format!(
            "# nanotube {VERSION}\n# config: {}\n# seed: {}\n",
            self.config_line(),
            self.seed
        );
        for (k, v) in self.notes.iter().chain(notes) {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out
    }

    fn json(&self, notes: &[(String, String)]) -> Value {
        let mut extra = Map::new();
        for (k, v) in self.notes.iter().chain(notes) {
            extra.insert(k.clone(), Value::String(v.clone()));
        }
        json!({
            "tool": "nanotube",
            "version": VERSION,
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "notes": extra,
        })
    }
}

/// A number when the token is an `i64` or a finite non-integer float,
/// otherwise a string, so that big integers survive unchanged.
fn cell(token: &str) -> Value {
    if let Ok(i) = token.parse::<i64>() {
        return Value::from(i);
    }
    let integer_like = token.bytes().all(|b| b.is_ascii_digit() || b == b'-');
    match token.parse::<f64>() {
        Ok(f) if f.is_finite() && !integer_like => Value::from(f),
        _ => Value::String(token.to_string()),
    }
}

/// Rows of a CSV body (first line is the header) as JSON objects.
pub fn csv_to_json(body: &str) -> Value {
    let mut lines = body.lines();
    let columns: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let rows: Vec<Value> = lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let mut row = Map::new();
            for (c, v) in columns.iter().zip(line.split(',')) {
                row.insert((*c).to_string(), cell(v));
            }
            Value::Object(row)
        })
        .collect();
    Value::Array(rows)
}

/// Writes `<dir>/<stem>.<ext>` and returns its path.
pub fn emit(
    dir: &Path,
    stem: &str,
    meta: &Meta,
    notes: &[(String, String)],
    body: &str,
    format: Format,
) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let text = match format {
        Format::Csv => format!("{}{body}", meta.header(notes)),
        Format::Json => {
            let doc = json!({ "meta": meta.json(notes), "data": csv_to_json(body) });
            let mut s = serde_json::to_string_pretty(&doc).map_err(io::Error::other)?;
            s.push('\n');
            s
        }
    };
    fs::write(&path, text)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_keep_big_integers() {
        assert_eq!(cell("42"), Value::from(42));
        assert_eq!(cell("0.5"), Value::from(0.5));
        assert_eq!(cell("123456789012345678901234"), Value::String("123456789012345678901234".into()));
        assert_eq!(cell("indicator"), Value::String("indicator".into()));
        assert_eq!(cell("NaN"), Value::String("NaN".into()));
    }

    #[test]
    fn csv_rows_become_objects() {
        let v = csv_to_json("k,method,value\n0,oracle,1\n1,oracle,3\n");
        assert_eq!(v, json!([{"k": 0, "method": "oracle", "value": 1}, {"k": 1, "method": "oracle", "value": 3}]));
    }

    #[test]
    fn header_lines() {
        let mut m = Meta::new("sample", 7);
        m.set("p", 5).set("n", 10);
        let h = m.header(&[("file".into(), "samples".into())]);
        assert_eq!(h, format!("# nanotube {VERSION}\n# config: sample n=10 p=5\n# seed: 7\n# file: samples\n"));
    }
}
