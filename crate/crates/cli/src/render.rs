//! Report envelope and the three output formats.

use serde_json::{Map, Value};

use crate::config::{OutputFormat, RunConfig};

pub const SCHEMA: &str = "fukaya-report/1";

/// A finished command: its result payload and whether its checks passed.
pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    pub result: Value,
    /// Raw TSV body used instead of the flattened form in tsv mode.
    pub tsv_override: Option<String>,
}

pub fn envelope(report: &Report, cfg: &RunConfig) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(SCHEMA));
    m.insert("command".into(), Value::from(report.command));
    m.insert("config".into(), cfg.to_json());
    m.insert("passed".into(), Value::from(report.passed));
    m.insert("result".into(), report.result.clone());
    Value::Object(m)
}

pub fn render(report: &Report, cfg: &RunConfig) -> String {
    let env = envelope(report, cfg);
    match cfg.output_format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&env).expect("serializable report");
            s.push('\n');
            s
        }
        OutputFormat::Tsv => {
            let mut s = String::new();
            let mut cfg_lines = String::new();
            flatten("", &env["config"], &mut cfg_lines, "config");
            for l in cfg_lines.lines() {
                s.push_str(&format!("# {l}\n"));
            }
            s.push_str(&format!("# command\t{}\n# passed\t{}\n", report.command, report.passed));
            match &report.tsv_override {
                Some(body) => s.push_str(body),
                None => flatten("", &env["result"], &mut s, "result"),
            }
            s
        }
        OutputFormat::Pretty => {
            let mut s = format!("{} ({})\n", report.command, if report.passed { "pass" } else { "FAIL" });
            s.push_str("config:\n");
            pretty(&env["config"], 1, &mut s);
            s.push_str("result:\n");
            pretty(&env["result"], 1, &mut s);
            s
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::from("-"),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String, root: &str) {
    let key = |k: &str| if prefix.is_empty() { format!("{root}.{k}") } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out, root);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let p = if prefix.is_empty() { root.to_string() } else { prefix.to_string() };
            out.push_str(&format!("{p}\t{}\n", a.iter().map(scalar).collect::<Vec<_>>().join(",")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out, root);
            }
        }
        other => {
            let p = if prefix.is_empty() { root.to_string() } else { prefix.to_string() };
            out.push_str(&format!("{p}\t{}\n", scalar(other)));
        }
    }
}

fn pretty(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty(x, depth + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|y| y.is_object() || y.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty(x, depth + 1, out);
                    }
                    _ => {
                        out.push_str(&format!("{pad}{k}: "));
                        pretty_inline(x, out);
                        out.push('\n');
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        pretty(x, depth + 1, out);
                    }
                    _ => {
                        out.push_str(&format!("{pad}- {}\n", scalar(x)));
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn pretty_inline(v: &Value, out: &mut String) {
    match v {
        Value::Array(a) => out.push_str(&format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", "))),
        other => out.push_str(&scalar(other)),
    }
}
