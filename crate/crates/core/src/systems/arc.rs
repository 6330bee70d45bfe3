use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::funcspace::format_f64;

/// One sample of a hybrid arc.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcPoint {
    pub t: f64,
    pub k: i64,
    pub x: Vec<f64>,
    pub segment: usize,
}

/// The flow interval `[t_start, t_end] × {k}` of a hybrid time domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub k: i64,
    pub t_start: f64,
    pub t_end: f64,
}

/// Why a simulation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcStatus {
    /// Flow-time or jump budget exhausted.
    Budget,
    /// The state left `C ∪ D`.
    Dead,
    /// A non-finite state was produced.
    Blowup,
}

/// JSON sidecar written next to an arc CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatusFile {
    pub status: ArcStatus,
    pub t_end: f64,
    pub k_end: i64,
    pub jumps: usize,
    pub flow_time: f64,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// A simulated solution on a hybrid time domain.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridArc {
    pub dim: usize,
    pub points: Vec<ArcPoint>,
    pub segments: Vec<Segment>,
    pub status: ArcStatus,
    pub message: Option<String>,
}

impl HybridArc {
    pub(crate) fn start(x0: &[f64], t0: f64, k0: i64) -> Self {
        Self {
            dim: x0.len(),
            points: vec![ArcPoint {
                t: t0,
                k: k0,
                x: x0.to_vec(),
                segment: 0,
            }],
            segments: vec![Segment {
                k: k0,
                t_start: t0,
                t_end: t0,
            }],
            status: ArcStatus::Budget,
            message: None,
        }
    }

    pub fn last(&self) -> &ArcPoint {
        self.points.last().expect("arcs are never empty")
    }

    pub(crate) fn push_flow(&mut self, t: f64, x: Vec<f64>) {
        let (k, segment) = (self.last().k, self.segments.len() - 1);
        self.segments[segment].t_end = t;
        self.points.push(ArcPoint { t, k, x, segment });
    }

    pub(crate) fn push_jump(&mut self, x: Vec<f64>) {
        let (t, k) = (self.last().t, self.last().k + 1);
        self.segments.push(Segment {
            k,
            t_start: t,
            t_end: t,
        });
        let segment = self.segments.len() - 1;
        self.points.push(ArcPoint { t, k, x, segment });
    }

    pub fn jumps(&self) -> usize {
        self.segments.len() - 1
    }

    pub fn flow_time(&self) -> f64 {
        self.segments.iter().map(|s| s.t_end - s.t_start).sum()
    }

    /// Checks the hybrid-time-domain invariants: consecutive indices,
    /// ordered and contiguous segment times, and samples inside their segments.
    pub fn validate_domain(&self) -> Result<(), String> {
        for (i, s) in self.segments.iter().enumerate() {
            if !(s.t_start <= s.t_end) {
                return Err(format!("segment {i} has t_start > t_end"));
            }
            if i > 0 {
                let prev = &self.segments[i - 1];
                if s.k != prev.k + 1 {
                    return Err(format!(
                        "segment {i} index {} does not follow {}",
                        s.k, prev.k
                    ));
                }
                if s.t_start != prev.t_end {
                    return Err(format!(
                        "segment {i} does not start where segment {} ends",
                        i - 1
                    ));
                }
            }
        }
        for (j, w) in self.points.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            let ok = if b.segment == a.segment {
                b.k == a.k && b.t >= a.t
            } else {
                b.segment == a.segment + 1 && b.k == a.k + 1 && b.t == a.t
            };
            if !ok {
                return Err(format!("samples {j} and {} are out of order", j + 1));
            }
        }
        for (j, p) in self.points.iter().enumerate() {
            let s = &self.segments[p.segment];
            if p.k != s.k || p.t < s.t_start || p.t > s.t_end {
                return Err(format!("sample {j} lies outside segment {}", p.segment));
            }
        }
        Ok(())
    }

    /// CSV with columns `t, k, x_1, …, x_n, segment_id`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SimError> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string(), "k".to_string()];
        header.extend((1..=self.dim).map(|i| format!("x_{i}")));
        header.push("segment_id".into());
        wtr.write_record(&header)?;
        for p in &self.points {
            let mut row = vec![format_f64(p.t), p.k.to_string()];
            row.extend(p.x.iter().map(|v| format_f64(*v)));
            row.push(p.segment.to_string());
            wtr.write_record(&row)?;
        }
        wtr.flush().map_err(|e| SimError::Io(e.to_string()))?;
        Ok(())
    }

    /// Reads the CSV written by [`HybridArc::write_csv`]; segments are
    /// rebuilt from the `segment_id` column.
    pub fn read_csv<R: Read>(r: R, status: ArcStatus) -> Result<Self, SimError> {
        let mut rdr = csv::Reader::from_reader(r);
        let width = rdr.headers()?.len();
        if width < 3 {
            return Err(SimError::Io(format!(
                "arc csv needs at least 3 columns, found {width}"
            )));
        }
        let parse_f = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| SimError::Io(format!("bad number {s:?}: {e}")))
        };
        let parse_i = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| SimError::Io(format!("bad integer {s:?}: {e}")))
        };
        let mut points: Vec<ArcPoint> = Vec::new();
        let mut segments: Vec<Segment> = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let t = parse_f(&rec[0])?;
            let k = parse_i(&rec[1])?;
            let x = (2..width - 1)
                .map(|i| parse_f(&rec[i]))
                .collect::<Result<Vec<_>, _>>()?;
            let segment = usize::try_from(parse_i(&rec[width - 1])?)
                .map_err(|_| SimError::Io("negative segment id".into()))?;
            match segment.cmp(&segments.len()) {
                std::cmp::Ordering::Less if segment + 1 == segments.len() => {
                    segments[segment].t_end = t;
                }
                std::cmp::Ordering::Equal => segments.push(Segment {
                    k,
                    t_start: t,
                    t_end: t,
                }),
                _ => return Err(SimError::Io(format!("segment ids out of order at t = {t}"))),
            }
            points.push(ArcPoint { t, k, x, segment });
        }
        if points.is_empty() {
            return Err(SimError::Io("arc csv has no samples".into()));
        }
        Ok(Self {
            dim: width - 3,
            points,
            segments,
            status,
            message: None,
        })
    }

    pub fn status_file(&self) -> StatusFile {
        let last = self.last();
        StatusFile {
            status: self.status,
            t_end: last.t,
            k_end: last.k,
            jumps: self.jumps(),
            flow_time: self.flow_time(),
            points: self.points.len(),
            message: self.message.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut arc = HybridArc::start(&[1.0, -0.5], 0.0, 0);
        arc.points.push(ArcPoint {
            t: 0.25,
            k: 0,
            x: vec![0.75, -0.25],
            segment: 0,
        });
        arc.segments[0].t_end = 0.25;
        arc.points.push(ArcPoint {
            t: 0.25,
            k: 1,
            x: vec![0.1, 0.2],
            segment: 1,
        });
        arc.segments.push(Segment {
            k: 1,
            t_start: 0.25,
            t_end: 0.25,
        });
        let mut buf = Vec::new();
        arc.write_csv(&mut buf).unwrap();
        let back = HybridArc::read_csv(buf.as_slice(), ArcStatus::Budget).unwrap();
        assert_eq!(back, arc);
    }
}
