//! The bound report emitted by `bmat bounds` and `bmat verify`.
//!
//! JSON numbers use the shortest round-trip representation. Infinite
//! values (an overflowing bound) are written as `null` and read back as
//! `+∞`, so parsing a report and emitting it again reproduces it byte for
//! byte.

use std::fmt::Write as _;

use bmat_core::{check_sharpness_conditions, BoundQuantities, OracleResult};
use serde::{Deserialize, Serialize};

use crate::num::{sig6, sig6_list};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReportDocument {
    pub matrix_source: String,
    pub n: usize,
    pub is_b: bool,
    #[serde(with = "real")]
    pub beta: f64,
    #[serde(with = "real_vec")]
    pub beta_bar: Vec<f64>,
    #[serde(with = "real_vec")]
    pub beta_hat: Vec<f64>,
    #[serde(with = "real")]
    pub alpha: f64,
    #[serde(with = "real")]
    pub beta_hat_min: f64,
    #[serde(with = "real")]
    pub bound_gep: f64,
    #[serde(with = "real")]
    pub bound_li: f64,
    #[serde(with = "real")]
    pub bound_new: f64,
    #[serde(rename = "theorem5")]
    pub sharpness: SharpnessFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    pub timestamp: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessFlags {
    pub cond_i: bool,
    pub cond_ii: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    #[serde(with = "real")]
    pub max_norm_found: f64,
    pub argmax_d: Vec<f64>,
    pub samples: u64,
}

impl BoundReportDocument {
    pub fn new(matrix_source: &str, q: &BoundQuantities, oracle: Option<&OracleResult>) -> Self {
        let c = check_sharpness_conditions(q);
        Self {
            matrix_source: matrix_source.to_string(),
            n: q.n(),
            is_b: true,
            beta: q.beta,
            beta_bar: q.beta_bar.clone(),
            beta_hat: q.beta_hat.clone(),
            alpha: q.alpha,
            beta_hat_min: q.beta_hat_min,
            bound_gep: q.bound_gep,
            bound_li: q.bound_li,
            bound_new: q.bound_new,
            sharpness: SharpnessFlags {
                cond_i: c.cond_i,
                cond_ii: c.cond_ii,
            },
            oracle: oracle.map(|r| OracleSummary {
                max_norm_found: r.max_norm_found,
                argmax_d: r.argmax_d.as_slice().to_vec(),
                samples: r.samples_evaluated,
            }),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// `(name, bound − max_norm_found)` for each bound, when sampled.
    pub fn slacks(&self) -> Option<[(&'static str, f64); 3]> {
        let found = self.oracle.as_ref()?.max_norm_found;
        Some([
            ("gep", self.bound_gep - found),
            ("li", self.bound_li - found),
            ("new", self.bound_new - found),
        ])
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let mut s = String::new();
        let _ = writeln!(s, "matrix: {}", self.matrix_source);
        let _ = writeln!(s, "n: {}", self.n);
        let _ = writeln!(s, "B-matrix: {}", yes_no(self.is_b));
        let _ = writeln!(s, "beta: {}", sig6(self.beta));
        let _ = writeln!(s, "beta_bar: {}", sig6_list(&self.beta_bar));
        let _ = writeln!(s, "beta_hat: {}", sig6_list(&self.beta_hat));
        let _ = writeln!(s, "alpha: {}", sig6(self.alpha));
        let _ = writeln!(s, "beta_hat_min: {}", sig6(self.beta_hat_min));
        let _ = writeln!(s, "bound_gep: {}", sig6(self.bound_gep));
        let _ = writeln!(s, "bound_li: {}", sig6(self.bound_li));
        let _ = writeln!(s, "bound_new: {}", sig6(self.bound_new));
        let _ = writeln!(
            s,
            "new < gep guaranteed: cond_i={} cond_ii={}",
            yes_no(self.sharpness.cond_i),
            yes_no(self.sharpness.cond_ii)
        );
        if let Some(o) = &self.oracle {
            let _ = writeln!(s, "max_norm_found: {}", sig6(o.max_norm_found));
            let _ = writeln!(s, "argmax_d: {}", sig6_list(&o.argmax_d));
            let _ = writeln!(s, "samples: {}", o.samples);
        }
        if let Some(slacks) = self.slacks() {
            for (name, slack) in slacks {
                let _ = writeln!(s, "slack_{name}: {}", sig6(slack));
            }
        }
        s
    }

    /// Long format: one `field,index,value` row per scalar; `index` is
    /// 1-based for vector entries and empty otherwise.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("field,index,value\n");
        let mut row = |field: &str, index: Option<usize>, value: String| {
            let index = index.map(|i| (i + 1).to_string()).unwrap_or_default();
            let _ = writeln!(s, "{field},{index},{value}");
        };
        row("matrix_source", None, csv_text(&self.matrix_source));
        row("n", None, self.n.to_string());
        row("is_b", None, self.is_b.to_string());
        row("beta", None, self.beta.to_string());
        for (i, v) in self.beta_bar.iter().enumerate() {
            row("beta_bar", Some(i), v.to_string());
        }
        for (i, v) in self.beta_hat.iter().enumerate() {
            row("beta_hat", Some(i), v.to_string());
        }
        row("alpha", None, self.alpha.to_string());
        row("beta_hat_min", None, self.beta_hat_min.to_string());
        row("bound_gep", None, self.bound_gep.to_string());
        row("bound_li", None, self.bound_li.to_string());
        row("bound_new", None, self.bound_new.to_string());
        row("cond_i", None, self.sharpness.cond_i.to_string());
        row("cond_ii", None, self.sharpness.cond_ii.to_string());
        if let Some(o) = &self.oracle {
            row("max_norm_found", None, o.max_norm_found.to_string());
            for (i, v) in o.argmax_d.iter().enumerate() {
                row("argmax_d", Some(i), v.to_string());
            }
            row("samples", None, o.samples.to_string());
        }
        row("timestamp", None, self.timestamp.clone());
        row("tool_version", None, self.tool_version.clone());
        s
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Finite values as numbers, non-finite as `null`; `null` reads as `+∞`.
mod real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

mod real_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.is_finite().then_some(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(Vec::<Option<f64>>::deserialize(d)?
            .into_iter()
            .map(|x| x.unwrap_or(f64::INFINITY))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bmat_core::generators::{make_example1, make_example2};
    use bmat_core::{sample_max_norm, split_b_plus, OracleConfig, SquareMatrix};

    fn report(m: &SquareMatrix, with_oracle: bool) -> BoundReportDocument {
        let q = BoundQuantities::compute(&split_b_plus(m)).unwrap();
        let o = with_oracle.then(|| sample_max_norm(m, &OracleConfig::default()).unwrap());
        BoundReportDocument::new("test", &q, o.as_ref())
    }

    #[test]
    fn json_field_names() {
        let json = report(&SquareMatrix::identity(2), true).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in [
            "matrix_source",
            "n",
            "is_b",
            "beta",
            "beta_bar",
            "beta_hat",
            "alpha",
            "beta_hat_min",
            "bound_gep",
            "bound_li",
            "bound_new",
            "theorem5",
            "oracle",
            "timestamp",
            "tool_version",
        ] {
            assert!(keys.contains(&k), "missing {k}");
        }
        assert_eq!(keys.len(), 15);
        assert!(v["theorem5"]["cond_i"].is_boolean());
        assert!(v["oracle"]["samples"].is_u64());
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        for m in [
            make_example1(1.0).unwrap(),
            make_example2(0.8, 8.0 / 9.0).unwrap(),
        ] {
            for with_oracle in [false, true] {
                let doc = report(&m, with_oracle);
                let first = doc.to_json();
                let parsed = BoundReportDocument::from_json(&first).unwrap();
                assert_eq!(parsed, doc);
                assert_eq!(parsed.to_json(), first);
            }
        }
    }

    #[test]
    fn infinite_bounds_round_trip_through_null() {
        let mut doc = report(&SquareMatrix::identity(2), false);
        doc.bound_li = f64::INFINITY;
        doc.beta_hat[1] = f64::INFINITY;
        let json = doc.to_json();
        assert!(json.contains("\"bound_li\": null"));
        let parsed = BoundReportDocument::from_json(&json).unwrap();
        assert_eq!(parsed.bound_li, f64::INFINITY);
        assert_eq!(parsed.beta_hat[1], f64::INFINITY);
        assert_eq!(parsed.to_json(), json);
    }

    #[test]
    fn text_and_csv() {
        let doc = report(&make_example1(1.0).unwrap(), false);
        let text = doc.to_text();
        assert!(text.contains("bound_gep: 60\n"));
        assert!(text.contains("bound_li: 14.377"));
        assert!(text.contains("cond_ii=yes"));
        let csv = doc.to_csv();
        assert!(csv.starts_with("field,index,value\n"));
        assert!(csv.contains("\nbeta_bar,4,1\n"));
        assert_eq!(csv_text("a,b"), "\"a,b\"");
    }

    #[test]
    fn identity_slacks() {
        let doc = report(&SquareMatrix::identity(2), true);
        let slacks = doc.slacks().unwrap();
        assert_eq!(slacks.map(|(_, s)| s), [0.0, 1.0, 1.0]);
    }
}
