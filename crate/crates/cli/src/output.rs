//! Table serialization.

use std::io::{self, Write};

use binae::experiments::{ExperimentConfig, SeriesRow, Table};
use serde::Serialize;

/// `x` with 6 significant digits, in the shortest of fixed or exponent form.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn rounded(x: f64) -> Option<f64> {
    x.is_finite().then(|| sig6(x).parse().expect("formatted number parses"))
}

pub fn write_csv<W: Write>(w: W, table: &Table) -> io::Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record([table.sweep_name.as_str(), "model", "statistic", "mean", "std", "trials"])?;
    for r in &table.rows {
        out.write_record([sig6(r.sweep), r.model.clone(), r.statistic.clone(), sig6(r.mean), sig6(r.std), r.trials.to_string()])?;
    }
    out.flush()
}

#[derive(Serialize)]
struct JsonRow<'a> {
    sweep: Option<f64>,
    model: &'a str,
    statistic: &'a str,
    mean: Option<f64>,
    std: Option<f64>,
    trials: usize,
}

impl<'a> From<&'a SeriesRow> for JsonRow<'a> {
    fn from(r: &'a SeriesRow) -> Self {
        Self {
            sweep: rounded(r.sweep),
            model: &r.model,
            statistic: &r.statistic,
            mean: rounded(r.mean),
            std: rounded(r.std),
            trials: r.trials,
        }
    }
}

#[derive(Serialize)]
struct JsonTable<'a> {
    config: &'a ExperimentConfig,
    sweep_name: &'a str,
    rows: Vec<JsonRow<'a>>,
    runtime_seconds: f64,
    version: &'static str,
}

pub fn write_json<W: Write>(mut w: W, config: &ExperimentConfig, table: &Table, runtime: f64) -> io::Result<()> {
    let doc = JsonTable {
        config,
        sweep_name: &table.sweep_name,
        rows: table.rows.iter().map(JsonRow::from).collect(),
        runtime_seconds: rounded(runtime).unwrap_or(0.0),
        version: env!("CARGO_PKG_VERSION"),
    };
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)
}

/// Row count and runtime, then the sweep value of the smallest mean of every
/// error statistic.
pub fn summary(table: &Table, runtime: f64) -> String {
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for r in table.rows.iter().filter(|r| r.statistic.contains("error")) {
        if !keys.contains(&(r.model.as_str(), r.statistic.as_str())) {
            keys.push((&r.model, &r.statistic));
        }
    }
    let mut s = format!("{}: {} rows in {}s", table.experiment, table.rows.len(), sig6(runtime));
    for (model, stat) in keys {
        let series = table.series(model, stat);
        let best = series.iter().filter(|r| r.mean.is_finite()).min_by(|a, b| a.mean.total_cmp(&b.mean));
        if let Some(b) = best {
            s.push_str(&format!("\n  {model} {stat}: min {} at {}={}", sig6(b.mean), table.sweep_name, sig6(b.sweep)));
        }
    }
    s
}
