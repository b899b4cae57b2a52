use std::fmt::Write as _;

use serde::Serialize;

/// Outcome of one pass/fail rule.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: String,
    pub expected: String,
    pub tolerance: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub observed: String,
    pub theoretical: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Result of an experiment, serializable to CSV and JSON.
///
/// Every report embeds its parameters and master seed; re-running with the
/// same inputs reproduces it byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: Option<u64>,
    #[serde(serialize_with = "ordered_map")]
    pub parameters: Vec<(String, String)>,
    pub metrics: Vec<Metric>,
    pub checks: Vec<Check>,
    pub table: Option<Table>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: Option<u64>) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            parameters: Vec::new(),
            metrics: Vec::new(),
            checks: Vec::new(),
            table: None,
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.parameters.push((name.to_string(), value.to_string()));
        self
    }

    pub fn metric(&mut self, name: &str, observed: impl ToString, theoretical: Option<String>) -> &mut Self {
        self.metrics.push(Metric { name: name.to_string(), observed: observed.to_string(), theoretical });
        self
    }

    pub fn check(
        &mut self,
        name: &str,
        observed: impl ToString,
        expected: impl ToString,
        tolerance: impl ToString,
        pass: bool,
    ) -> &mut Self {
        self.checks.push(Check {
            name: name.to_string(),
            observed: observed.to_string(),
            expected: expected.to_string(),
            tolerance: tolerance.to_string(),
            pass,
        });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn find_metric(&self, name: &str) -> Option<&str> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.observed.as_str())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// The per-row table (if any), a blank line, then one summary row per
    /// parameter, metric, check and note under the header
    /// `experiment,kind,name,observed,expected,tolerance,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.table {
            out.push_str(&csv_line(&t.columns));
            for r in &t.rows {
                out.push_str(&csv_line(r));
            }
            out.push('\n');
        }
        let e = &self.experiment;
        out.push_str("experiment,kind,name,observed,expected,tolerance,pass\n");
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&csv_line(&[e, "param", "seed", &seed, "", "", ""]));
        for (k, v) in &self.parameters {
            out.push_str(&csv_line(&[e, "param", k, v, "", "", ""]));
        }
        for m in &self.metrics {
            let th = m.theoretical.as_deref().unwrap_or("");
            out.push_str(&csv_line(&[e, "metric", &m.name, &m.observed, th, "", ""]));
        }
        for c in &self.checks {
            let pass = if c.pass { "pass" } else { "fail" };
            out.push_str(&csv_line(&[e, "check", &c.name, &c.observed, &c.expected, &c.tolerance, pass]));
        }
        for (i, n) in self.notes.iter().enumerate() {
            out.push_str(&csv_line(&[e, "note", &i.to_string(), n, "", "", ""]));
        }
        out
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {}::{} observed={} expected={} tol={}",
                if c.pass { "PASS" } else { "FAIL" },
                self.experiment,
                c.name,
                c.observed,
                c.expected,
                c.tolerance
            );
        }
        s
    }
}

fn ordered_map<S: serde::Serializer>(pairs: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

fn csv_line<S: AsRef<str>>(fields: &[S]) -> String {
    let mut line = fields.iter().map(|f| escape(f.as_ref())).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
