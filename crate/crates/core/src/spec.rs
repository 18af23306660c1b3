//! JSON algorithm specs and branch-word parsing.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::algebra::{AlgebraError, Ln};
use crate::algorithm::{branch_matrix, AlgorithmError, Interval, SlowAlgorithm, Window};
use crate::{Matrix, Rational};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("spec needs exactly one of \"branches\" or \"partition\"")]
    Shape,
    #[error("bad branch word {0:?}: use letters L and N with an optional trailing F")]
    BadWord(String),
    #[error("bad integer {0:?}")]
    BadInteger(String),
    #[error("bad window {0:?}")]
    BadWindow(String),
    #[error("orientation e must be 1 or -1, got {0}")]
    BadOrientation(i8),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
}

/// An integer in JSON: a number, or a string for values beyond 64 bits.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    fn to_bigint(&self) -> Result<BigInt, SpecError> {
        match self {
            JsonInt::Small(n) => Ok(BigInt::from(*n)),
            JsonInt::Big(s) => s.trim().parse().map_err(|_| SpecError::BadInteger(s.clone())),
        }
    }
}

/// Serializes a big integer as a JSON number when it fits in `i64`.
pub fn int_json(n: &BigInt) -> Json {
    match i64::try_from(n) {
        Ok(k) => json!(k),
        Err(_) => json!(n.to_string()),
    }
}

pub fn matrix_json(m: &Matrix) -> Json {
    json!([[int_json(m.a()), int_json(m.b())], [int_json(m.c()), int_json(m.d())]])
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RawBranch {
    Word(String),
    Matrix([[JsonInt; 2]; 2]),
}

#[derive(Clone, Debug, Deserialize)]
struct RawCell {
    interval: [String; 2],
    e: i8,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct RawWindow {
    pub i: usize,
    pub j: usize,
    #[serde(default)]
    pub open_left: bool,
    #[serde(default)]
    pub open_right: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    branches: Option<Vec<RawBranch>>,
    #[serde(default)]
    partition: Option<Vec<RawCell>>,
    #[serde(default)]
    window: Option<RawWindow>,
}

/// A validated algorithm with its optional name and acceleration window.
#[derive(Clone, Debug)]
pub struct AlgorithmSpec {
    pub name: Option<String>,
    pub description: Option<String>,
    pub algorithm: SlowAlgorithm,
    pub window: Option<Window>,
}

/// Parses `"LNF"` into `B·F^e`. `"1"` and `"F"` stand for the empty word.
pub fn parse_branch(s: &str) -> Result<Matrix, SpecError> {
    let t = s.trim();
    let (body, flip) = match t.strip_suffix('F') {
        Some(b) => (b, true),
        None => (t, false),
    };
    let body = if body == "1" { "" } else { body };
    let word: Option<Vec<Ln>> = body.chars().map(Ln::from_char).collect();
    let word = word.ok_or_else(|| SpecError::BadWord(s.to_string()))?;
    Ok(branch_matrix(&word, flip))
}

/// Builds an algorithm from branch words such as `["L", "NLL", "NLN", "NN"]`.
pub fn algorithm_from_words<S: AsRef<str>>(words: &[S]) -> Result<SlowAlgorithm, SpecError> {
    let ms = words.iter().map(|w| parse_branch(w.as_ref())).collect::<Result<Vec<_>, _>>()?;
    Ok(SlowAlgorithm::new(ms)?)
}

/// Parses `i,j` with an optional third field `open_left`, `open_right` or
/// `open`.
pub fn parse_window(s: &str) -> Result<Window, SpecError> {
    let bad = || SpecError::BadWindow(s.to_string());
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(bad());
    }
    let i = parts[0].parse().map_err(|_| bad())?;
    let j = parts[1].parse().map_err(|_| bad())?;
    let mut w = Window::closed(i, j);
    match parts.get(2).copied() {
        None => {}
        Some("open_right") => w.open_right = true,
        Some("open_left") => w.open_left = true,
        Some("open") => {
            w.open_left = true;
            w.open_right = true;
        }
        Some(_) => return Err(bad()),
    }
    Ok(w)
}

impl AlgorithmSpec {
    pub fn from_json_str(text: &str) -> Result<AlgorithmSpec, SpecError> {
        let raw: RawSpec = serde_json::from_str(text)?;
        let algorithm = match (raw.branches, raw.partition) {
            (Some(bs), None) => {
                let ms = bs
                    .iter()
                    .map(|b| match b {
                        RawBranch::Word(w) => parse_branch(w),
                        RawBranch::Matrix([[a, b], [c, d]]) => {
                            let [a, b, c, d] = [a, b, c, d].map(|x| x.to_bigint());
                            let (a, b, c, d) = (a?, b?, c?, d?);
                            let det = (&a * &d - &b * &c).to_string();
                            Matrix::new(a, b, c, d).map_err(|_| SpecError::Algebra(AlgebraError::BadDeterminant(det)))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>();
                let ms = ms.map_err(|e| match e {
                    SpecError::Algebra(AlgebraError::BadDeterminant(det)) => {
                        let index = bs
                            .iter()
                            .position(|b| matches!(b, RawBranch::Matrix(_)) && det_of(b).as_deref() == Some(&det))
                            .unwrap_or(0);
                        SpecError::Algorithm(AlgorithmError::BadDeterminant { index, det })
                    }
                    other => other,
                })?;
                SlowAlgorithm::new(ms)?
            }
            (None, Some(cells)) => {
                let mut parsed = Vec::with_capacity(cells.len());
                for c in &cells {
                    if c.e != 1 && c.e != -1 {
                        return Err(SpecError::BadOrientation(c.e));
                    }
                    let left: Rational = c.interval[0].parse()?;
                    let right: Rational = c.interval[1].parse()?;
                    parsed.push((Interval { left, right }, c.e));
                }
                SlowAlgorithm::from_partition(&parsed)?
            }
            _ => return Err(SpecError::Shape),
        };
        let window = raw.window.map(|w| Window { i: w.i, j: w.j, open_left: w.open_left, open_right: w.open_right });
        if let Some(w) = &window {
            if w.i > w.j || w.j >= algorithm.len() {
                return Err(SpecError::BadWindow(format!("{},{}", w.i, w.j)));
            }
        }
        Ok(AlgorithmSpec { name: raw.name, description: raw.description, algorithm, window })
    }

    pub fn from_algorithm(algorithm: SlowAlgorithm) -> AlgorithmSpec {
        AlgorithmSpec { name: None, description: None, algorithm, window: None }
    }

    /// The spec in branch-word form.
    pub fn to_json(&self) -> Json {
        let mut v = json!({
            "branches": self.algorithm.branches().iter().map(|b| b.name()).collect::<Vec<_>>(),
        });
        if let Some(n) = &self.name {
            v["name"] = json!(n);
        }
        if let Some(d) = &self.description {
            v["description"] = json!(d);
        }
        if let Some(w) = &self.window {
            v["window"] = window_json(w);
        }
        v
    }
}

fn det_of(b: &RawBranch) -> Option<String> {
    match b {
        RawBranch::Matrix([[a, b], [c, d]]) => {
            let (a, b, c, d) = (a.to_bigint().ok()?, b.to_bigint().ok()?, c.to_bigint().ok()?, d.to_bigint().ok()?);
            Some((a * d - b * c).to_string())
        }
        RawBranch::Word(_) => None,
    }
}

pub fn window_json(w: &Window) -> Json {
    json!({"i": w.i, "j": w.j, "open_left": w.open_left, "open_right": w.open_right})
}

/// The partition form as JSON cells.
pub fn partition_json(t: &SlowAlgorithm) -> Json {
    Json::Array(
        t.to_partition()
            .into_iter()
            .map(|(iv, e)| json!({"interval": [iv.left.to_string(), iv.right.to_string()], "e": e}))
            .collect(),
    )
}
