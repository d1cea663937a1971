use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use pkp_core::expectation::ExpectationReport;
use pkp_core::oracle::{ExhaustiveReport, MonteCarloReport, SolutionCount};
use pkp_core::{ExactRational, ParameterSet};
use serde_json::{json, Value};

use crate::{CliError, OutputArgs};

pub const CSV_HEADER: [&str; 11] = [
    "variant",
    "q",
    "ell",
    "m",
    "n",
    "exact_num",
    "exact_den",
    "exact_decimal",
    "exact_minus_one_decimal",
    "heuristic_decimal",
    "ratio_decimal",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Sink {
    pub format: Format,
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(args: &OutputArgs, default: Format) -> Self {
        Sink {
            format: args.format.unwrap_or(default),
            path: args.out.clone(),
        }
    }

    pub fn emit(&self, body: String) -> Result<(), CliError> {
        match &self.path {
            Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            }),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn header(p: &ParameterSet) -> String {
    format!("{} q={} ell={} m={} n={}", p.variant, p.q, p.ell, p.m, p.n)
}

fn params_json(p: &ParameterSet) -> Value {
    json!({ "variant": p.variant.as_str(), "q": p.q, "ell": p.ell, "m": p.m, "n": p.n })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn table_row(r: &ExpectationReport, digits: u32) -> Vec<String> {
    let p = &r.params;
    vec![
        p.variant.to_string(),
        p.q.to_string(),
        p.ell.to_string(),
        p.m.to_string(),
        p.n.to_string(),
        r.exact.numer().to_string(),
        r.exact.denom().to_string(),
        r.exact.to_decimal(digits),
        r.exact_minus_one.to_decimal(digits),
        r.heuristic.to_decimal(digits),
        r.ratio().to_decimal(digits),
    ]
}

fn report_json(r: &ExpectationReport, digits: u32) -> Value {
    merge(
        params_json(&r.params),
        json!({
            "exact": r.exact.to_string(),
            "exact_decimal": r.exact.to_decimal(digits),
            "exact_minus_one": r.exact_minus_one.to_string(),
            "exact_minus_one_decimal": r.exact_minus_one.to_decimal(digits),
            "heuristic": r.heuristic.to_string(),
            "heuristic_decimal": r.heuristic.to_decimal(digits),
            "ratio": r.ratio().to_string(),
            "ratio_decimal": r.ratio().to_decimal(digits),
            "outside_validity": r.outside_validity,
            "warnings": r.warnings,
        }),
    )
}

pub fn expectation(r: &ExpectationReport, format: Format, digits: u32) -> String {
    match format {
        Format::Json => pretty(&report_json(r, digits)),
        Format::Csv => csv_text(&CSV_HEADER, &[table_row(r, digits)]),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", header(&r.params));
            if r.outside_validity {
                let _ = writeln!(s, "OUTSIDE STATED VALIDITY");
            }
            let _ = writeln!(s, "exact                       = {}", r.exact);
            let _ = writeln!(s, "exact                       ~ {}", r.exact.to_decimal(digits));
            let _ = writeln!(s, "exact - 1                   ~ {}", r.exact_minus_one.to_decimal(digits));
            let _ = writeln!(s, "heuristic m!/q^(ell n)      ~ {}", r.heuristic.to_decimal(digits));
            let _ = writeln!(s, "ratio (exact - 1)/heuristic ~ {}", r.ratio().to_decimal(digits));
            for w in &r.warnings {
                let _ = writeln!(s, "warning: {w}");
            }
            s
        }
    }
}

pub fn heuristic(p: &ParameterSet, h: &ExactRational, format: Format, digits: u32) -> String {
    match format {
        Format::Json => pretty(&merge(
            params_json(p),
            json!({ "heuristic": h.to_string(), "heuristic_decimal": h.to_decimal(digits) }),
        )),
        Format::Csv => csv_text(
            &["variant", "q", "ell", "m", "n", "heuristic_num", "heuristic_den", "heuristic_decimal"],
            &[vec![
                p.variant.to_string(),
                p.q.to_string(),
                p.ell.to_string(),
                p.m.to_string(),
                p.n.to_string(),
                h.numer().to_string(),
                h.denom().to_string(),
                h.to_decimal(digits),
            ]],
        ),
        Format::Text => format!("{}\nheuristic = {}\nheuristic ~ {}\n", header(p), h, h.to_decimal(digits)),
    }
}

pub fn count(p: &ParameterSet, c: &SolutionCount, format: Format) -> String {
    match format {
        Format::Json => pretty(&merge(
            params_json(p),
            json!({ "n_sol": c.n_sol, "enumerated": c.enumerated, "contains_secret": c.contains_secret }),
        )),
        Format::Csv => csv_text(
            &["variant", "q", "ell", "m", "n", "n_sol", "enumerated", "contains_secret"],
            &[vec![
                p.variant.to_string(),
                p.q.to_string(),
                p.ell.to_string(),
                p.m.to_string(),
                p.n.to_string(),
                c.n_sol.to_string(),
                c.enumerated.to_string(),
                c.contains_secret.to_string(),
            ]],
        ),
        Format::Text => format!(
            "{}\nn_sol           {}\nenumerated      {}\ncontains_secret {}\n",
            header(p),
            c.n_sol,
            c.enumerated,
            c.contains_secret
        ),
    }
}

fn verdict(pass: Option<bool>) -> &'static str {
    match pass {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "no closed form",
    }
}

pub fn monte_carlo(r: &MonteCarloReport, format: Format, digits: u32) -> String {
    let z = r.z_score.map(|z| format!("{z:.4}"));
    match format {
        Format::Json => pretty(&merge(
            params_json(&r.params),
            json!({
                "samples": r.samples,
                "seed": r.seed,
                "mean": r.mean.to_string(),
                "mean_decimal": r.mean.to_decimal(digits),
                "variance_estimate": r.variance_estimate.to_string(),
                "variance_decimal": r.variance_estimate.to_decimal(digits),
                "exact_reference": r.exact_reference.as_ref().map(ToString::to_string),
                "exact_decimal": r.exact_reference.as_ref().map(|e| e.to_decimal(digits)),
                "z_score": r.z_score,
                "pass": r.pass,
            }),
        )),
        Format::Csv => csv_text(
            &["variant", "q", "ell", "m", "n", "samples", "seed", "mean", "mean_decimal", "exact", "z_score", "pass"],
            &[vec![
                r.params.variant.to_string(),
                r.params.q.to_string(),
                r.params.ell.to_string(),
                r.params.m.to_string(),
                r.params.n.to_string(),
                r.samples.to_string(),
                r.seed.to_string(),
                r.mean.to_string(),
                r.mean.to_decimal(digits),
                r.exact_reference.as_ref().map(ToString::to_string).unwrap_or_default(),
                z.clone().unwrap_or_default(),
                r.pass.map(|p| p.to_string()).unwrap_or_default(),
            ]],
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", header(&r.params));
            let _ = writeln!(s, "samples   {}", r.samples);
            let _ = writeln!(s, "seed      {}", r.seed);
            let _ = writeln!(s, "mean      = {} ~ {}", r.mean, r.mean.to_decimal(digits));
            let _ = writeln!(s, "variance  ~ {}", r.variance_estimate.to_decimal(digits));
            if let Some(e) = &r.exact_reference {
                let _ = writeln!(s, "exact     = {} ~ {}", e, e.to_decimal(digits));
            }
            let _ = writeln!(s, "z         {}", z.unwrap_or_else(|| "-".into()));
            let _ = writeln!(s, "verdict   {}", verdict(r.pass));
            s
        }
    }
}

pub fn exhaustive(r: &ExhaustiveReport, formula: Option<&ExactRational>, format: Format, digits: u32) -> String {
    let agree = formula.map(|f| f == &r.expectation);
    match format {
        Format::Json => pretty(&merge(
            params_json(&r.params),
            json!({
                "points": r.points,
                "b_count": r.b_count,
                "oracle": r.expectation.to_string(),
                "oracle_decimal": r.expectation.to_decimal(digits),
                "formula": formula.map(ToString::to_string),
                "agree": agree,
            }),
        )),
        Format::Csv => csv_text(
            &["variant", "q", "ell", "m", "n", "points", "oracle", "formula", "agree"],
            &[vec![
                r.params.variant.to_string(),
                r.params.q.to_string(),
                r.params.ell.to_string(),
                r.params.m.to_string(),
                r.params.n.to_string(),
                r.points.to_string(),
                r.expectation.to_string(),
                formula.map(ToString::to_string).unwrap_or_default(),
                agree.map(|a| a.to_string()).unwrap_or_default(),
            ]],
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", header(&r.params));
            let _ = writeln!(s, "points    {} ({} choices of B)", r.points, r.b_count);
            let _ = writeln!(s, "oracle    = {} ~ {}", r.expectation, r.expectation.to_decimal(digits));
            match formula {
                Some(f) => {
                    let _ = writeln!(s, "formula   = {f}");
                    let _ = writeln!(s, "agree     {}", if agree == Some(true) { "yes" } else { "NO" });
                }
                None => {
                    let _ = writeln!(s, "formula   none for this variant with n > 1");
                }
            }
            s
        }
    }
}

pub fn table(reports: &[ExpectationReport], format: Format, digits: u32) -> String {
    match format {
        Format::Json => pretty(&Value::Array(reports.iter().map(|r| report_json(r, digits)).collect())),
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports.iter().map(|r| table_row(r, digits)).collect();
            csv_text(&CSV_HEADER, &rows)
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:<10} {:>6} {:>4} {:>4} {:>3}  {:>22} {:>22} {:>22}", "variant", "q", "ell", "m", "n", "exact", "heuristic", "ratio");
            for r in reports {
                let p = &r.params;
                let _ = writeln!(
                    s,
                    "{:<10} {:>6} {:>4} {:>4} {:>3}  {:>22} {:>22} {:>22}",
                    p.variant.as_str(),
                    p.q,
                    p.ell,
                    p.m,
                    p.n,
                    r.exact.to_decimal(digits),
                    r.heuristic.to_decimal(digits),
                    r.ratio().to_decimal(digits)
                );
            }
            s
        }
    }
}
