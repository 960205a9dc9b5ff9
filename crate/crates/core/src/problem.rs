//! JSON problem files.
//!
//! ```json
//! {
//!   "order": 2,
//!   "coefficients": [-1.0, 0.0],
//!   "forcing": [{"c": 1.0, "m": 0, "alpha": 0.0, "beta": 0.0, "phase": "none"}],
//!   "initial_conditions": [[0.0, 1.0, 2.0], {"lower": [0.0, 1.0], "upper": [2.0, -1.0]}],
//!   "cases": "all",
//!   "r_grid": {"start": 0.0, "end": 1.0, "steps": 10},
//!   "t_end": 1.0,
//!   "t_steps": 100
//! }
//! ```
//!
//! Coefficients are listed from `a_0` upward. `cases` is either `"all"` or a list
//! such as `[[1, 2], [2, 2]]`. `r_grid.steps` counts intervals.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::fuzzy::{FuzzyNumber, RGrid};
use crate::laplace::ClosedFormSignal;
use crate::solver::{enumerate_cases, CaseVector, FivProblem, SolveOptions};

/// A schema or consistency problem, located by its JSON path.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemError {
    pub path: String,
    pub message: String,
}

impl ProblemError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ProblemError { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ProblemError {}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum CaseSelection {
    #[default]
    All,
    List(Vec<CaseVector>),
}

impl Serialize for CaseSelection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CaseSelection::All => s.serialize_str("all"),
            CaseSelection::List(cases) => cases.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CaseSelection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Word(String),
            List(Vec<CaseVector>),
        }
        match Repr::deserialize(d) {
            Ok(Repr::Word(w)) if w == "all" => Ok(CaseSelection::All),
            Ok(Repr::Word(w)) => Err(serde::de::Error::custom(format!(
                "expected \"all\" or a list of case vectors, found {w:?}"
            ))),
            Ok(Repr::List(list)) => Ok(CaseSelection::List(list)),
            Err(_) => Err(serde::de::Error::custom(
                "expected \"all\" or a list of case vectors with entries 1 or 2",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RGridSpec {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl Default for RGridSpec {
    fn default() -> Self {
        RGridSpec { start: 0.0, end: 1.0, steps: 10 }
    }
}

fn default_t_end() -> f64 {
    1.0
}

fn default_t_steps() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub order: usize,
    pub coefficients: Vec<f64>,
    #[serde(default)]
    pub forcing: ClosedFormSignal,
    pub initial_conditions: Vec<FuzzyNumber>,
    #[serde(default)]
    pub cases: CaseSelection,
    #[serde(default)]
    pub r_grid: RGridSpec,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_t_steps")]
    pub t_steps: usize,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile, ProblemError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ProblemError::at(path, e.into_inner().to_string())
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<ProblemFile, ProblemError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ProblemError::at("", format!("cannot read {}: {e}", path.display())))?;
        ProblemFile::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        let n = self.order;
        if n == 0 {
            return Err(ProblemError::at("order", "must be at least 1"));
        }
        if self.coefficients.len() != n {
            return Err(ProblemError::at(
                "coefficients",
                format!("order {n} needs {n} coefficients, found {}", self.coefficients.len()),
            ));
        }
        if let Some(i) = self.coefficients.iter().position(|a| !a.is_finite()) {
            return Err(ProblemError::at(format!("coefficients[{i}]"), "must be finite"));
        }
        if self.initial_conditions.len() != n {
            return Err(ProblemError::at(
                "initial_conditions",
                format!("order {n} needs {n} entries, found {}", self.initial_conditions.len()),
            ));
        }
        for (k, ic) in self.initial_conditions.iter().enumerate() {
            if let Err(v) = ic.validate(&RGrid::default()) {
                return Err(ProblemError::at(
                    format!("initial_conditions[{k}]"),
                    format!("not a fuzzy number: {v}"),
                ));
            }
        }
        if let CaseSelection::List(cases) = &self.cases {
            if cases.is_empty() {
                return Err(ProblemError::at("cases", "list is empty"));
            }
            if let Some(i) = cases.iter().position(|c| c.len() != n) {
                return Err(ProblemError::at(
                    format!("cases[{i}]"),
                    format!("needs {n} entries, found {}", cases[i].len()),
                ));
            }
        }
        let g = &self.r_grid;
        if !(0.0..=1.0).contains(&g.start) {
            return Err(ProblemError::at("r_grid.start", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&g.end) || g.end < g.start {
            return Err(ProblemError::at("r_grid.end", "must lie in [start, 1]"));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(ProblemError::at("t_end", "must be positive and finite"));
        }
        if self.t_steps == 0 {
            return Err(ProblemError::at("t_steps", "must be positive"));
        }
        Ok(())
    }

    pub fn problem(&self) -> FivProblem {
        FivProblem::new(
            self.coefficients.clone(),
            self.forcing.clone(),
            self.initial_conditions.clone(),
        )
        .expect("validated problem file")
    }

    pub fn case_list(&self) -> Vec<CaseVector> {
        match &self.cases {
            CaseSelection::All => enumerate_cases(self.order),
            CaseSelection::List(list) => list.clone(),
        }
    }

    pub fn r_grid(&self) -> RGrid {
        let g = &self.r_grid;
        if g.steps == 0 {
            return RGrid::range(g.start, g.start, 1);
        }
        RGrid::range(g.start, g.end, g.steps + 1)
    }

    pub fn options(&self) -> SolveOptions {
        SolveOptions { t_end: self.t_end, t_steps: self.t_steps }
    }
}
