use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Point;

/// Quantities recorded after one stage of a shadowing run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub max_length: f64,
    pub max_defect: f64,
    /// Horizontal and vertical parts of `max_length` for hyperbolic runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<(f64, f64)>,
    pub start: i64,
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ShadowTrace {
    pub stages: Vec<StageRecord>,
}

/// Fifteen significant digits.
pub fn fmt15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.14e}")
}

impl ShadowTrace {
    pub fn push(&mut self, record: StageRecord) {
        if let Some(last) = self.stages.last() {
            debug_assert!(record.stage > last.stage);
        }
        self.stages.push(record);
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn last(&self) -> Option<&StageRecord> {
        self.stages.last()
    }

    /// Rows `stage, max_length, max_defect`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Input(e.to_string());
        w.write_record(["stage", "max_length", "max_defect"])
            .map_err(io)?;
        for s in &self.stages {
            w.write_record([
                s.stage.to_string(),
                fmt15(s.max_length),
                fmt15(s.max_defect),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Input(e.to_string()))
    }

    /// Parse the summary columns written by [`ShadowTrace::to_csv`].
    pub fn summary_from_csv(text: &str) -> Result<Vec<(usize, f64, f64)>> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut out = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::Input(e.to_string()))?;
            let field = |k: usize| -> Result<&str> {
                rec.get(k)
                    .ok_or_else(|| Error::Input("short trace row".into()))
            };
            let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Input(e.to_string()));
            let stage = field(0)?
                .parse::<usize>()
                .map_err(|e| Error::Input(e.to_string()))?;
            out.push((stage, parse(field(1)?)?, parse(field(2)?)?));
        }
        Ok(out)
    }
}
