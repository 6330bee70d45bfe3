use std::io::Write;

use serde::{Deserialize, Serialize};

use super::CertifyError;
use crate::funcspace::format_f64;

/// The sample at which an inequality came closest to (or furthest past) failing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<f64>,
    pub t: f64,
    pub k: i64,
    #[serde(with = "nonfinite")]
    pub lhs: f64,
    #[serde(with = "nonfinite")]
    pub rhs: f64,
}

/// Outcome of one inequality over all samples. `worst_margin` is the largest
/// `lhs − rhs` (scaled, for relative checks); the record passes iff it is
/// at most `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub name: String,
    /// Which construction step the inequality belongs to.
    pub anchor: String,
    #[serde(with = "nonfinite")]
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub samples_checked: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Writes non-finite floats as the strings `"inf"`, `"-inf"`, `"nan"`, which
/// plain JSON numbers cannot represent.
pub mod nonfinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a float: {other}"))),
            },
        }
    }
}

/// A list of inequality records with an overall verdict.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub records: Vec<InequalityRecord>,
    pub pass: bool,
}

impl CertificationReport {
    pub fn new() -> Self {
        Self {
            records: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, r: InequalityRecord) {
        self.pass &= r.pass;
        self.records.push(r);
    }

    pub fn merge(&mut self, other: CertificationReport) {
        for r in other.records {
            self.push(r);
        }
    }

    pub fn get(&self, name: &str) -> Option<&InequalityRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InequalityRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// One row per record: name, anchor, margin, tolerance, verdict, witness.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CertifyError> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record([
            "name",
            "anchor",
            "worst_margin",
            "tolerance",
            "pass",
            "samples",
            "x",
            "t",
            "k",
        ])?;
        for r in &self.records {
            let (x, t, k) = match &r.witness {
                Some(w) => (
                    w.x.iter()
                        .map(|v| format_f64(*v))
                        .collect::<Vec<_>>()
                        .join(" "),
                    format_f64(w.t),
                    w.k.to_string(),
                ),
                None => Default::default(),
            };
            wtr.write_record([
                r.name.clone(),
                r.anchor.clone(),
                format_f64(r.worst_margin),
                format_f64(r.tolerance),
                r.pass.to_string(),
                r.samples_checked.to_string(),
                x,
                t,
                k,
            ])?;
        }
        wtr.flush().map_err(|e| CertifyError::Grid(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_margins_round_trip() {
        let mut rep = CertificationReport::new();
        rep.push(InequalityRecord {
            name: "n".into(),
            anchor: "a".into(),
            worst_margin: f64::INFINITY,
            witness: Some(Witness {
                x: vec![1.0],
                t: 0.0,
                k: 0,
                lhs: f64::NAN,
                rhs: -f64::INFINITY,
            }),
            samples_checked: 1,
            tolerance: 1e-6,
            pass: false,
        });
        let s = serde_json::to_string(&rep).unwrap();
        let back: CertificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.records[0].worst_margin, f64::INFINITY);
        assert!(back.records[0].witness.as_ref().unwrap().lhs.is_nan());
        assert!(!back.pass);
    }
}
