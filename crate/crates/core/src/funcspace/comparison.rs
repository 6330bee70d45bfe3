use serde::{Deserialize, Serialize};

use super::grid::{GridFunction, RightExtension};
use super::FuncError;

/// The comparison-function classes used for scalar gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "class")]
pub enum ClassTag {
    /// Zero at zero, strictly increasing, unbounded (positive-slope linear continuation).
    Kinf,
    /// Zero at zero and positive elsewhere.
    #[serde(rename = "pd")]
    PositiveDefinite,
    /// Positive everywhere (including 0) and nondecreasing.
    IncreasingPositive,
    /// Positive definite, nondecreasing up to the peak and nonincreasing after it.
    #[serde(rename = "unimodal-pd")]
    UnimodalPd { peak: f64 },
}

/// Result of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// First node index at which a class invariant fails.
    Fail(usize),
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Checks the invariants of `tag` at every node of `f`.
pub fn classify(f: &GridFunction, tag: ClassTag) -> Result<Verdict, FuncError> {
    f.validate()?;
    let nodes = f.nodes();
    let v = f.values();
    let first_fail = |pred: &dyn Fn(usize) -> bool| (0..v.len()).find(|&i| !pred(i));

    let fail = match tag {
        ClassTag::Kinf => {
            let slope_ok = f.right_extension() == RightExtension::LinearContinuation
                && f.segment_slope(v.len() - 2) > 0.0;
            first_fail(&|i| {
                if i == 0 {
                    v[0] == 0.0
                } else {
                    v[i] > v[i - 1] && (i < v.len() - 1 || slope_ok)
                }
            })
        }
        ClassTag::PositiveDefinite => {
            first_fail(&|i| if i == 0 { v[0] == 0.0 } else { v[i] > 0.0 })
        }
        ClassTag::IncreasingPositive => first_fail(&|i| v[i] > 0.0 && (i == 0 || v[i] >= v[i - 1])),
        ClassTag::UnimodalPd { peak } => first_fail(&|i| {
            if i == 0 {
                return v[0] == 0.0;
            }
            if v[i] <= 0.0 {
                return false;
            }
            if nodes[i] <= peak {
                v[i] >= v[i - 1]
            } else if nodes[i - 1] >= peak {
                v[i] <= v[i - 1]
            } else {
                true
            }
        }),
    };
    Ok(match fail {
        None => Verdict::Pass,
        Some(i) => Verdict::Fail(i),
    })
}

/// A grid function paired with the comparison class it is asserted to belong to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonFunction {
    #[serde(flatten)]
    pub f: GridFunction,
    pub class_tag: ClassTag,
}

impl ComparisonFunction {
    /// Wraps `f` after verifying it belongs to `tag`.
    pub fn new(f: GridFunction, tag: ClassTag) -> Result<Self, FuncError> {
        match classify(&f, tag)? {
            Verdict::Pass => Ok(Self { f, class_tag: tag }),
            Verdict::Fail(i) => Err(FuncError::Class {
                expected: format!("{tag:?}"),
                node: i,
                at: f.nodes()[i],
            }),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.f.eval(s)
    }

    pub fn grid(&self) -> &GridFunction {
        &self.f
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("comparison functions always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, FuncError> {
        let raw: Self = serde_json::from_str(s).map_err(|e| FuncError::Io(e.to_string()))?;
        Self::new(raw.f, raw.class_tag)
    }
}
