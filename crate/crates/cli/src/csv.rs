//! The fixed CSV table emitted by every subcommand.

use std::fmt::Write as _;

pub const HEADER: [&str; 13] = [
    "kind",
    "n",
    "m",
    "epsilon",
    "delta",
    "exact_fraction",
    "estimate",
    "stderr",
    "bound_name",
    "bound_value",
    "slack",
    "N",
    "seed",
];

/// One output row. `None` fields serialize as empty strings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvRow {
    pub kind: &'static str,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub exact_fraction: Option<f64>,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub bound_name: Option<String>,
    pub bound_value: Option<f64>,
    pub slack: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl CsvRow {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn opt_int<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl CsvRow {
    pub fn to_line(&self) -> String {
        [
            self.kind.to_string(),
            opt_int(self.n),
            opt_int(self.m),
            opt_float(self.epsilon),
            opt_float(self.delta),
            opt_float(self.exact_fraction),
            opt_float(self.estimate),
            opt_float(self.stderr),
            self.bound_name.clone().unwrap_or_default(),
            opt_float(self.bound_value),
            opt_float(self.slack),
            opt_int(self.samples),
            opt_int(self.seed),
        ]
        .join(",")
    }
}

/// Header plus rows, LF-terminated.
pub fn render(rows: &[CsvRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", HEADER.join(","));
    for row in rows {
        let _ = writeln!(out, "{}", row.to_line());
    }
    out
}
