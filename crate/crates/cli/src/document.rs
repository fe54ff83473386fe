//! On-disk system formats: a JSON document with fields `tnorm`, `A`, `b`, or a
//! pair of headerless CSV files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use frel_core::{System, TNormKind, TNormRegistry, UnitMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub tnorm: String,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl SystemDocument {
    pub fn from_system(system: &System) -> Self {
        Self {
            tnorm: system.tnorm().name().to_string(),
            a: system.matrix().to_rows(),
            b: system.rhs().to_vec(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed system document")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Validates and builds the system. `tnorm` overrides the document's own.
    pub fn to_system(&self, tnorm: Option<&str>) -> Result<System> {
        let kind = resolve_tnorm(tnorm.unwrap_or(&self.tnorm))?;
        if self.a.is_empty() {
            bail!("A must have at least one row");
        }
        if self.b.len() != self.a.len() {
            bail!("b has {} entries but A has {} rows", self.b.len(), self.a.len());
        }
        let a = UnitMatrix::from_rows(&self.a)?;
        Ok(System::new(kind, a, self.b.clone())?)
    }

    /// Canonical text form: `tnorm`, then `A` one row per line, then `b`.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"tnorm\": {},", serde_json::to_string(&self.tnorm).unwrap());
        let _ = writeln!(out, "  \"A\": [");
        for (i, row) in self.a.iter().enumerate() {
            let sep = if i + 1 < self.a.len() { "," } else { "" };
            let _ = writeln!(out, "    {}{sep}", serde_json::to_string(row).unwrap());
        }
        let _ = writeln!(out, "  ],");
        let _ = writeln!(out, "  \"b\": {}", serde_json::to_string(&self.b).unwrap());
        out.push('}');
        out.push('\n');
        out
    }
}

pub fn resolve_tnorm(name: &str) -> Result<TNormKind> {
    let registry = TNormRegistry::builtin();
    registry.get(name).map(|t| t.kind()).map_err(|_| {
        anyhow::anyhow!("unknown t-norm `{name}` (expected one of: {})", registry.names().join(", "))
    })
}

fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("{}: bad CSV record {}", path.display(), i + 1))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field.parse::<f64>().with_context(|| {
                    format!("{}: row {}, column {}: `{field}` is not a number", path.display(), i + 1, j + 1)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Builds a document from `A.csv` (one equation per line) and `b.csv` (a
/// single column or a single row).
pub fn load_csv(a_path: &Path, b_path: &Path, tnorm: &str) -> Result<SystemDocument> {
    let a = read_csv(a_path)?;
    let b: Vec<f64> = read_csv(b_path)?.into_iter().flatten().collect();
    Ok(SystemDocument { tnorm: resolve_tnorm(tnorm)?.name().to_string(), a, b })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{"tnorm": "min", "A": [[1, 0.4], [0.7, 0.5]], "b": [0.8, 0.7]}"#;

    #[test]
    fn parses_and_validates() {
        let doc = SystemDocument::parse(EXAMPLE).unwrap();
        let s = doc.to_system(None).unwrap();
        assert_eq!((s.n(), s.m()), (2, 2));
        assert_eq!(s.tnorm(), TNormKind::Min);
        assert_eq!(doc.to_system(Some("product")).unwrap().tnorm(), TNormKind::Product);
    }

    #[test]
    fn errors_name_the_entry() {
        let doc = SystemDocument::parse(r#"{"tnorm": "min", "A": [[1, 0.4], [0.7, 1.2]], "b": [0.8, 0.7]}"#).unwrap();
        let msg = doc.to_system(None).unwrap_err().to_string();
        assert!(msg.contains("A[2][2]") && msg.contains("1.2"), "{msg}");

        let doc = SystemDocument::parse(r#"{"tnorm": "min", "A": [[1]], "b": [0.8, 0.7]}"#).unwrap();
        assert!(doc.to_system(None).unwrap_err().to_string().contains("b has 2 entries"));

        let doc = SystemDocument::parse(r#"{"tnorm": "hamacher", "A": [[1]], "b": [0.8]}"#).unwrap();
        assert!(doc.to_system(None).unwrap_err().to_string().contains("hamacher"));

        assert!(SystemDocument::parse(r#"{"tnorm": "min", "A": [[1]], "b": [0.8], "c": 1}"#).is_err());
        assert!(SystemDocument::parse(r#"{"tnorm": "min", "a": [[1]], "b": [0.8]}"#).is_err());
    }

    #[test]
    fn canonical_form_orders_fields() {
        let doc = SystemDocument::parse(EXAMPLE).unwrap();
        let text = doc.to_canonical_json();
        assert_eq!(text, "{\n  \"tnorm\": \"min\",\n  \"A\": [\n    [1.0,0.4],\n    [0.7,0.5]\n  ],\n  \"b\": [0.8,0.7]\n}\n");
        assert_eq!(SystemDocument::parse(&text).unwrap(), doc);
    }
}
