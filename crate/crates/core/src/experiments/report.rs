use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};

/// Pass/fail outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub criterion: u8,
    pub id: String,
    pub anchor: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(criterion: u8, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            criterion,
            id: format!("C{criterion}"),
            anchor: anchor(criterion),
            passed,
            detail: detail.into(),
        }
    }
}

/// The statement each criterion checks.
pub fn anchor(criterion: u8) -> &'static str {
    match criterion {
        1 => "lattice volume/count envelope",
        2 => "rectangle volume/count sandwich",
        3 => "trapezium overlap bound min(alpha,1)/72",
        4 => "discrete trapezium scale",
        5 => "dyadic block compression",
        6 => "Tauberian blow-up along Perron blocks",
        7 => "weak-type bound for lacunary processes",
        8 => "orbit sampling transfer identity",
        9 => "coboundary decay estimate",
        10 => "maximal operator oracle equivalence",
        _ => "unassigned",
    }
}

/// A named metrics table; every row carries its criterion and anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub criterion: u8,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, criterion: u8, columns: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            criterion,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len(), "table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| Error::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r.iter().map(cell)).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Serialize for Table {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Map<String, Value>> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("criterion".into(), Value::from(format!("C{}", self.criterion)));
                m.insert("anchor".into(), Value::from(anchor(self.criterion)));
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert((*c).into(), v.clone());
                }
                m
            })
            .collect();
        let mut m = Map::new();
        m.insert("name".into(), Value::from(self.name.clone()));
        m.insert("columns".into(), Value::from(self.columns.clone()));
        m.insert("rows".into(), serde_json::to_value(rows).map_err(serde::ser::Error::custom)?);
        m.serialize(s)
    }
}

/// Where a reported constant comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// A constant of the underlying theory, used as given.
    Theory,
    /// Measured by this run.
    Measured,
    /// A choice made by this implementation.
    Convention,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub quantity: String,
    pub value: Value,
    pub source: Source,
    pub note: String,
}

/// A rendered figure, written under `figures/`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure {
    pub file: String,
    #[serde(skip)]
    pub svg: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    pub provenance: Vec<Provenance>,
    pub figures: Vec<Figure>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: &ExperimentConfig) -> Self {
        Self {
            experiment: experiment.into(),
            seed: config.seed,
            config: config.clone(),
            verdicts: Vec::new(),
            tables: Vec::new(),
            provenance: Vec::new(),
            figures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn provenance(&mut self, quantity: &str, value: impl Into<Value>, source: Source, note: &str) {
        self.provenance.push(Provenance {
            quantity: quantity.into(),
            value: value.into(),
            source,
            note: note.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, criterion: u8) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// 0 when every verdict passes, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            2
        }
    }

    /// Merges the verdicts, tables, provenance and figures of `other`.
    pub fn absorb(&mut self, other: ExperimentReport) {
        self.verdicts.extend(other.verdicts);
        self.tables.extend(other.tables);
        self.provenance.extend(other.provenance);
        self.figures.extend(other.figures);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Writes `report.json`, `metrics.csv` (the first table),
    /// `metrics_<name>.csv` for the others, and `figures/*.svg`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir.join("figures"))?;
        std::fs::write(dir.join("report.json"), self.to_json()?)?;
        let mut tables = self.tables.iter();
        let first = tables.next();
        let csv = match first {
            Some(t) => t.to_csv()?,
            None => String::new(),
        };
        std::fs::write(dir.join("metrics.csv"), csv)?;
        for t in tables {
            std::fs::write(dir.join(format!("metrics_{}.csv", t.name)), t.to_csv()?)?;
        }
        for f in &self.figures {
            std::fs::write(dir.join("figures").join(&f.file), &f.svg)?;
        }
        Ok(())
    }
}

/// JSON number, or `null` for non-finite values.
pub fn num(x: f64) -> Value {
    Value::from(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_csv_and_json() {
        let mut t = Table::new("demo", 1, &["delta", "ratio", "note"]);
        t.push(vec![num(50.0), num(1.25), Value::from("a,b")]);
        t.push(vec![num(100.0), num(f64::NAN), Value::Null]);
        assert_eq!(t.to_csv().unwrap(), "delta,ratio,note\n50.0,1.25,\"a,b\"\n100.0,,\n");
        let j = serde_json::to_value(&t).unwrap();
        assert_eq!(j["rows"][0]["criterion"], "C1");
        assert_eq!(j["rows"][1]["ratio"], Value::Null);
    }

    #[test]
    fn exit_codes() {
        let cfg = ExperimentConfig::with_seed(1);
        let mut r = ExperimentReport::new("x", &cfg);
        assert_eq!(r.exit_code(), 2);
        r.verdicts.push(Verdict::new(1, true, ""));
        assert_eq!(r.exit_code(), 0);
        r.verdicts.push(Verdict::new(2, false, ""));
        assert_eq!(r.exit_code(), 2);
    }
}
