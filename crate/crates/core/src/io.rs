//! JSON jet documents and verdict reports.
//!
//! Rationals always travel as `"p/q"` strings; polynomials as lists of
//! `{i, j, c}` monomial records meaning `c · x^i y^j`.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jetflow::{s_of_m, Jet, ObstructionReport, StarJet, Verdict};
use crate::poly::{GradedPoly, HomPoly, TermRecord};
use crate::rational::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetDocument {
    pub m: usize,
    #[serde(default)]
    pub terms: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_order: Option<usize>,
}

/// Line (1-based) of the `index`-th object inside the top-level `"terms"` array.
fn term_line(text: &str, index: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    let mut last_string = String::new();
    let mut current = String::new();
    let mut in_terms = false;
    let mut seen = 0usize;
    let mut line = 1usize;
    for ch in text.chars() {
        if ch == '\n' {
            line += 1;
        }
        if in_string {
            if escaped {
                escaped = false;
                current.push(ch);
            } else if ch == '\\' {
                escaped = true;
            } else if ch == '"' {
                in_string = false;
                last_string = std::mem::take(&mut current);
            } else {
                current.push(ch);
            }
            continue;
        }
        match ch {
            '"' => in_string = true,
            '[' => {
                if depth == 1 && last_string == "terms" {
                    in_terms = true;
                }
                depth += 1;
            }
            '{' => {
                if in_terms && depth == 2 {
                    if seen == index {
                        return Some(line);
                    }
                    seen += 1;
                }
                depth += 1;
            }
            ']' | '}' => {
                depth = depth.saturating_sub(1);
                if depth == 1 {
                    in_terms = false;
                }
            }
            _ => {}
        }
    }
    None
}

pub fn parse_jet_str(text: &str) -> Result<Jet> {
    let doc: JetDocument = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let context = |idx: usize, msg: String| match term_line(text, idx) {
        Some(line) => Error::Parse(format!("line {line} (term {idx}): {msg}")),
        None => Error::Parse(format!("term {idx}: {msg}")),
    };
    jet_from_document_with(&doc, context)
}

pub fn jet_from_document(doc: &JetDocument) -> Result<Jet> {
    jet_from_document_with(doc, |idx, msg| Error::Parse(format!("term {idx}: {msg}")))
}

fn jet_from_document_with(
    doc: &JetDocument,
    context: impl Fn(usize, String) -> Error,
) -> Result<Jet> {
    let m = doc.m;
    if m < 2 {
        return Err(Error::Parse(format!("m must be >= 2, got {m}")));
    }
    let mut seen = BTreeSet::new();
    let mut tail = GradedPoly::zero();
    let mut top = 0;
    for (idx, term) in doc.terms.iter().enumerate() {
        let degree = term.i + term.j;
        if degree <= m {
            return Err(context(
                idx,
                format!(
                    "x^{} y^{} has degree {degree}, which does not exceed m = {m}",
                    term.i, term.j
                ),
            ));
        }
        if !seen.insert((term.i, term.j)) {
            return Err(context(
                idx,
                format!("duplicate monomial x^{} y^{}", term.i, term.j),
            ));
        }
        let c = parse_rational(&term.c).map_err(|e| context(idx, e.to_string()))?;
        tail.add_component(&HomPoly::monomial(degree, term.j, c));
        top = top.max(degree);
    }
    if let Some(order) = doc.declared_order {
        if order < top {
            return Err(Error::Parse(format!(
                "declared_order {order} is below the highest term degree {top}"
            )));
        }
    }
    let order = doc.declared_order.map(|n| n.max(m));
    Jet::new(m, tail, order)
}

pub fn parse_jet(path: impl AsRef<Path>) -> Result<Jet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_jet_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn jet_to_document(jet: &Jet) -> JetDocument {
    JetDocument {
        m: jet.m(),
        terms: jet.tail().to_records(),
        declared_order: jet.order(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualEntry {
    pub k: usize,
    /// Computed after an earlier failure, so it depends on the projection.
    pub conditional: bool,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictDocument {
    pub m: usize,
    pub order: Option<usize>,
    pub verdict: Verdict,
    pub first_failure: Option<usize>,
    pub residuals: Vec<ResidualEntry>,
    pub s_m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codim: Option<usize>,
}

impl VerdictDocument {
    pub fn from_report(report: &ObstructionReport, order: Option<usize>) -> Self {
        let m = report.m;
        VerdictDocument {
            m,
            order,
            verdict: report.verdict,
            first_failure: report.first_failure,
            residuals: report
                .residuals
                .iter()
                .map(|(k, r)| ResidualEntry {
                    k: *k,
                    conditional: report.is_conditional(*k),
                    terms: r.to_records(),
                })
                .collect(),
            s_m: s_of_m(m),
            codim: (m >= 5).then(|| (m - 2) * (m - 3) - 2),
        }
    }

    /// Report for a jet whose order does not reach `2m - 4`.
    pub fn too_short(m: usize, order: Option<usize>) -> Self {
        VerdictDocument {
            m,
            order,
            verdict: Verdict::Undetermined,
            first_failure: None,
            residuals: Vec::new(),
            s_m: s_of_m(m),
            codim: (m >= 5).then(|| (m - 2) * (m - 3) - 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarDocument {
    pub t11: Vec<TermRecord>,
    pub t12: Vec<TermRecord>,
    pub t21: Vec<TermRecord>,
    pub t22: Vec<TermRecord>,
}

impl StarDocument {
    pub fn from_star(t: &StarJet) -> Self {
        let [[a, b], [c, d]] = t.entries();
        StarDocument {
            t11: a.to_records(),
            t12: b.to_records(),
            t21: c.to_records(),
            t22: d.to_records(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetflow::make_fstar;
    use crate::rational::int;

    #[test]
    fn rejects_low_degree_with_line() {
        let text =
            "{\n  \"m\": 5,\n  \"terms\": [\n    {\"i\": 0, \"j\": 0, \"c\": \"1/1\"}\n  ]\n}\n";
        let err = parse_jet_str(text).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
        assert!(err.contains("does not exceed"), "{err}");
    }

    #[test]
    fn fstar_document() {
        let text = r#"{"m":5,"terms":[{"i":6,"j":0,"c":"1/1"},{"i":4,"j":2,"c":"3/1"},{"i":2,"j":4,"c":"3/1"},{"i":0,"j":6,"c":"1/1"}]}"#;
        let jet = parse_jet_str(text).unwrap();
        let fstar = make_fstar(5, &int(1)).unwrap();
        assert_eq!(jet.full(), fstar.full());
        assert_eq!(jet.order(), None);
    }

    #[test]
    fn duplicates_and_bad_rationals() {
        let dup = r#"{"m":3,"terms":[{"i":4,"j":0,"c":"1"},{"i":4,"j":0,"c":"2"}]}"#;
        assert!(parse_jet_str(dup)
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
        let bad = r#"{"m":3,"terms":[{"i":4,"j":0,"c":"1/x"}]}"#;
        assert!(parse_jet_str(bad)
            .unwrap_err()
            .to_string()
            .contains("malformed"));
        let order = r#"{"m":3,"terms":[{"i":4,"j":1,"c":"1"}],"declared_order":4}"#;
        assert!(parse_jet_str(order).is_err());
        assert!(parse_jet_str("{\"m\": 3, \"terms\": [")
            .unwrap_err()
            .to_string()
            .contains("line 1"));
    }

    #[test]
    fn empty_terms() {
        let jet = parse_jet_str(r#"{"m":7,"terms":[]}"#).unwrap();
        assert!(jet.tail().is_zero());
        assert_eq!(jet.m(), 7);
    }

    #[test]
    fn document_roundtrip() {
        let text = r#"{"m":4,"terms":[{"i":3,"j":2,"c":"-7/3"},{"i":0,"j":6,"c":"5/1"}],"declared_order":9}"#;
        let jet = parse_jet_str(text).unwrap();
        let doc = jet_to_document(&jet);
        let again = jet_from_document(&doc).unwrap();
        assert_eq!(again, jet);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"-7/3\""));
    }
}
