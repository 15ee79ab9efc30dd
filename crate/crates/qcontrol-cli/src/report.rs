//! Deterministic report emission: JSON with a fixed key order and 17
//! significant digits for every float, CSV with '.' decimal separators.
//! Everything except `wall_time_s` is a pure function of the inputs, so
//! reruns with equal seeds produce byte-identical output.

use std::fmt::Write as _;

/// One resolved configuration entry, kept in insertion order.
pub enum ConfigValue {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl ConfigValue {
    fn render(&self) -> String {
        match self {
            ConfigValue::Int(v) => v.to_string(),
            ConfigValue::Float(v) => fmt_float(*v),
            ConfigValue::Text(v) => json_string(v),
            ConfigValue::Bool(v) => v.to_string(),
            ConfigValue::Null => "null".to_string(),
        }
    }
}

/// One named quantity. Checked rows carry a threshold and pass iff
/// `value <= threshold`; recorded rows (search outcomes) carry neither.
pub struct Row {
    pub name: String,
    pub value: f64,
    pub threshold: Option<f64>,
    pub pass: Option<bool>,
}

pub struct Report {
    pub command: String,
    pub seed: u64,
    pub config: Vec<(String, ConfigValue)>,
    pub results: Vec<Row>,
    pub wall_time_s: f64,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            seed,
            config: Vec::new(),
            results: Vec::new(),
            wall_time_s: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn config(&mut self, key: &str, value: ConfigValue) {
        self.config.push((key.to_string(), value));
    }

    /// Records a checked residual; it passes when `value <= threshold`.
    pub fn push_check(&mut self, name: &str, value: f64, threshold: f64) {
        assert!(value.is_finite(), "checked value for {name} must be finite");
        self.results.push(Row {
            name: name.to_string(),
            value,
            threshold: Some(threshold),
            pass: Some(value <= threshold),
        });
    }

    /// Records a measured quantity without judging it.
    pub fn push_record(&mut self, name: &str, value: f64) {
        assert!(value.is_finite(), "recorded value for {name} must be finite");
        self.results.push(Row {
            name: name.to_string(),
            value,
            threshold: None,
            pass: None,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|row| row.pass != Some(false))
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n");
        let _ = writeln!(s, "  \"command\": {},", json_string(&self.command));
        let _ = writeln!(s, "  \"seed\": {},", self.seed);
        if self.config.is_empty() {
            s.push_str("  \"config\": {},\n");
        } else {
            s.push_str("  \"config\": {\n");
            for (i, (key, value)) in self.config.iter().enumerate() {
                let sep = if i + 1 < self.config.len() { "," } else { "" };
                let _ = writeln!(s, "    {}: {}{}", json_string(key), value.render(), sep);
            }
            s.push_str("  },\n");
        }
        if self.results.is_empty() {
            s.push_str("  \"results\": [],\n");
        } else {
            s.push_str("  \"results\": [\n");
            for (i, row) in self.results.iter().enumerate() {
                s.push_str("    {\n");
                let _ = writeln!(s, "      \"name\": {},", json_string(&row.name));
                let _ = writeln!(s, "      \"value\": {},", fmt_float(row.value));
                let threshold = match row.threshold {
                    Some(t) => fmt_float(t),
                    None => "null".to_string(),
                };
                let _ = writeln!(s, "      \"threshold\": {threshold},");
                let pass = match row.pass {
                    Some(p) => p.to_string(),
                    None => "null".to_string(),
                };
                let _ = writeln!(s, "      \"pass\": {pass}");
                let sep = if i + 1 < self.results.len() { "," } else { "" };
                let _ = writeln!(s, "    }}{sep}");
            }
            s.push_str("  ],\n");
        }
        let _ = writeln!(s, "  \"wall_time_s\": {},", fmt_float(self.wall_time_s));
        let _ = writeln!(s, "  \"version\": {}", json_string(&self.version));
        s.push('}');
        s
    }
}

/// 17 significant digits in scientific form: enough for any f64 to
/// round-trip exactly, locale-free by construction.
pub fn fmt_float(x: f64) -> String {
    assert!(x.is_finite(), "reports carry finite numbers only");
    format!("{x:.16e}")
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Renders a numeric table with a header line; commas separate fields and
/// every number uses [`fmt_float`].
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        assert_eq!(row.len(), header.len(), "CSV row width must match header");
        let line: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
