//! Parametric fuzzy numbers.
//!
//! A fuzzy number is carried by its r-level endpoint pair `(lower(r), upper(r))`
//! for `r ∈ [0, 1]`. Arithmetic is endpoint-wise, with the usual sign rule for
//! scalar multiplication. Validity (monotone endpoints, `lower ≤ upper`) is
//! checked on a finite r-grid.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack used by every monotonicity and ordering check.
pub const VALIDITY_TOL: f64 = 1e-9;

/// Number of points in the default r-grid (`0.0, 0.1, ..., 1.0`).
pub const DEFAULT_GRID_POINTS: usize = 11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("triangular spec violates l <= c <= u: ({l}, {c}, {u})")]
    InvalidSpec { l: f64, c: f64, u: f64 },
    #[error("r-level {0} outside [0, 1]")]
    Domain(f64),
    #[error("malformed sampled levels: {0}")]
    BadSamples(String),
}

/// A sorted set of r-values in `[0, 1]` on which fuzzy properties are checked.
#[derive(Debug, Clone, PartialEq)]
pub struct RGrid(Vec<f64>);

impl RGrid {
    /// `points` evenly spaced values from 0 to 1 inclusive.
    pub fn uniform(points: usize) -> Self {
        Self::range(0.0, 1.0, points)
    }

    /// `points` evenly spaced values from `start` to `end` inclusive.
    pub fn range(start: f64, end: f64, points: usize) -> Self {
        match points {
            0 => RGrid(Vec::new()),
            1 => RGrid(vec![start]),
            _ => {
                let step = (end - start) / (points - 1) as f64;
                let mut values: Vec<f64> = (0..points).map(|i| start + step * i as f64).collect();
                // pin the last node exactly
                values[points - 1] = end;
                RGrid(values)
            }
        }
    }

    pub fn from_values(mut values: Vec<f64>) -> Result<Self, FuzzyError> {
        if let Some(&bad) = values.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(FuzzyError::Domain(bad));
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(RGrid(values))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for RGrid {
    fn default() -> Self {
        RGrid::uniform(DEFAULT_GRID_POINTS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularSpec {
    pub l: f64,
    pub c: f64,
    pub u: f64,
}

impl TriangularSpec {
    pub fn new(l: f64, c: f64, u: f64) -> Self {
        TriangularSpec { l, c, u }
    }
}

/// Endpoints affine in r: `lower(r) = a + b·r`, `upper(r) = g + h·r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineEndpoints {
    pub lower: (f64, f64),
    pub upper: (f64, f64),
}

/// Interval per r-node, linearly interpolated between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledLevels {
    r: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SampledLevels {
    fn interpolate(&self, values: &[f64], r: f64) -> f64 {
        let idx = self.r.partition_point(|&node| node <= r);
        if idx == 0 {
            return values[0];
        }
        if idx >= self.r.len() {
            return values[self.r.len() - 1];
        }
        let (r0, r1) = (self.r[idx - 1], self.r[idx]);
        let w = (r - r0) / (r1 - r0);
        values[idx - 1] + w * (values[idx] - values[idx - 1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FuzzyKind {
    Triangular(TriangularSpec),
    Affine(AffineEndpoints),
    Sampled(SampledLevels),
}

/// First failed condition found while validating endpoint functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// `lower(r1) < lower(r0)` with `r0 < r1`.
    LowerDecreasing { r0: f64, r1: f64 },
    /// `upper(r1) > upper(r0)` with `r0 < r1`.
    UpperIncreasing { r0: f64, r1: f64 },
    /// `lower(r) > upper(r)`.
    Crossed { r: f64, lower: f64, upper: f64 },
    NonFinite { r: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LowerDecreasing { r0, r1 } => {
                write!(f, "lower endpoint decreases between r={r0} and r={r1}")
            }
            Violation::UpperIncreasing { r0, r1 } => {
                write!(f, "upper endpoint increases between r={r0} and r={r1}")
            }
            Violation::Crossed { r, lower, upper } => {
                write!(f, "lower {lower} exceeds upper {upper} at r={r}")
            }
            Violation::NonFinite { r } => write!(f, "non-finite endpoint at r={r}"),
        }
    }
}

/// Checks the level-set conditions on already-evaluated endpoint values.
///
/// `levels` holds `(r, lower, upper)` sorted by increasing r.
pub fn check_levels(levels: &[(f64, f64, f64)], tol: f64) -> Result<(), Violation> {
    if let Some(&(r, _, _)) = levels.iter().find(|(_, lo, up)| !lo.is_finite() || !up.is_finite()) {
        return Err(Violation::NonFinite { r });
    }
    for pair in levels.windows(2) {
        let (r0, lo0, up0) = pair[0];
        let (r1, lo1, up1) = pair[1];
        if lo1 < lo0 - tol {
            return Err(Violation::LowerDecreasing { r0, r1 });
        }
        if up1 > up0 + tol {
            return Err(Violation::UpperIncreasing { r0, r1 });
        }
    }
    for &(r, lo, up) in levels {
        if lo > up + tol {
            return Err(Violation::Crossed { r, lower: lo, upper: up });
        }
    }
    Ok(())
}

/// Outcome of a Hukuhara difference.
#[derive(Debug, Clone, PartialEq)]
pub enum HDifference {
    Exists(FuzzyNumber),
    DoesNotExist(Violation),
}

impl HDifference {
    pub fn exists(&self) -> bool {
        matches!(self, HDifference::Exists(_))
    }

    pub fn value(self) -> Option<FuzzyNumber> {
        match self {
            HDifference::Exists(z) => Some(z),
            HDifference::DoesNotExist(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FuzzyRepr", into = "FuzzyRepr")]
pub struct FuzzyNumber {
    kind: FuzzyKind,
}

impl FuzzyNumber {
    pub fn triangular(spec: TriangularSpec) -> Result<Self, FuzzyError> {
        let TriangularSpec { l, c, u } = spec;
        if !(l <= c && c <= u) {
            return Err(FuzzyError::InvalidSpec { l, c, u });
        }
        Ok(FuzzyNumber { kind: FuzzyKind::Triangular(spec) })
    }

    pub fn crisp(value: f64) -> Self {
        FuzzyNumber { kind: FuzzyKind::Triangular(TriangularSpec::new(value, value, value)) }
    }

    /// `lower(r) = a + b·r`, `upper(r) = g + h·r`. Not validated.
    pub fn affine(a: f64, b: f64, g: f64, h: f64) -> Self {
        FuzzyNumber { kind: FuzzyKind::Affine(AffineEndpoints { lower: (a, b), upper: (g, h) }) }
    }

    /// Interval per r-node. Nodes must be strictly increasing and span `[0, 1]`.
    pub fn sampled(r: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, FuzzyError> {
        if r.len() < 2 || r.len() != lower.len() || r.len() != upper.len() {
            return Err(FuzzyError::BadSamples(format!(
                "need at least two nodes with matching lengths (r={}, lower={}, upper={})",
                r.len(),
                lower.len(),
                upper.len()
            )));
        }
        if r[0] != 0.0 || r[r.len() - 1] != 1.0 {
            return Err(FuzzyError::BadSamples("nodes must start at 0 and end at 1".into()));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FuzzyError::BadSamples("nodes must be strictly increasing".into()));
        }
        Ok(FuzzyNumber { kind: FuzzyKind::Sampled(SampledLevels { r, lower, upper }) })
    }

    pub fn kind(&self) -> &FuzzyKind {
        &self.kind
    }

    pub fn lower(&self, r: f64) -> f64 {
        match &self.kind {
            FuzzyKind::Triangular(t) => t.l + (t.c - t.l) * r,
            FuzzyKind::Affine(a) => a.lower.0 + a.lower.1 * r,
            FuzzyKind::Sampled(s) => s.interpolate(&s.lower, r),
        }
    }

    pub fn upper(&self, r: f64) -> f64 {
        match &self.kind {
            FuzzyKind::Triangular(t) => t.u - (t.u - t.c) * r,
            FuzzyKind::Affine(a) => a.upper.0 + a.upper.1 * r,
            FuzzyKind::Sampled(s) => s.interpolate(&s.upper, r),
        }
    }

    /// The closed interval `[x]^r`.
    pub fn level_set(&self, r: f64) -> Result<(f64, f64), FuzzyError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(FuzzyError::Domain(r));
        }
        Ok((self.lower(r), self.upper(r)))
    }

    /// Endpoints as affine functions of r, when they are.
    pub fn as_affine(&self) -> Option<AffineEndpoints> {
        match &self.kind {
            FuzzyKind::Triangular(t) => Some(AffineEndpoints {
                lower: (t.l, t.c - t.l),
                upper: (t.u, t.c - t.u),
            }),
            FuzzyKind::Affine(a) => Some(*a),
            FuzzyKind::Sampled(_) => None,
        }
    }

    /// True when both endpoints coincide at every r (a real number).
    pub fn is_crisp(&self) -> bool {
        match &self.kind {
            FuzzyKind::Triangular(t) => t.l == t.c && t.c == t.u,
            FuzzyKind::Affine(a) => a.lower == a.upper && a.lower.1 == 0.0,
            FuzzyKind::Sampled(s) => {
                s.lower == s.upper && s.lower.windows(2).all(|w| w[0] == w[1])
            }
        }
    }

    fn breakpoints(&self) -> Option<&[f64]> {
        match &self.kind {
            FuzzyKind::Sampled(s) => Some(&s.r),
            _ => None,
        }
    }

    /// Applies `f` endpoint-wise on a common representation of `self` and `other`.
    fn zip_endpoints(
        &self,
        other: &FuzzyNumber,
        f: impl Fn(f64, f64) -> f64,
    ) -> FuzzyNumber {
        if let (Some(x), Some(y)) = (self.as_affine(), other.as_affine()) {
            if let (FuzzyKind::Triangular(s), FuzzyKind::Triangular(t)) = (&self.kind, &other.kind) {
                return FuzzyNumber {
                    kind: FuzzyKind::Triangular(TriangularSpec::new(
                        f(s.l, t.l),
                        f(s.c, t.c),
                        f(s.u, t.u),
                    )),
                };
            }
            return FuzzyNumber::affine(
                f(x.lower.0, y.lower.0),
                f(x.lower.1, y.lower.1),
                f(x.upper.0, y.upper.0),
                f(x.upper.1, y.upper.1),
            );
        }
        let mut nodes: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .chain(other.breakpoints())
            .flatten()
            .copied()
            .collect();
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let lower = nodes.iter().map(|&r| f(self.lower(r), other.lower(r))).collect();
        let upper = nodes.iter().map(|&r| f(self.upper(r), other.upper(r))).collect();
        FuzzyNumber { kind: FuzzyKind::Sampled(SampledLevels { r: nodes, lower, upper }) }
    }

    /// Endpoint-wise sum.
    pub fn add(&self, other: &FuzzyNumber) -> FuzzyNumber {
        self.zip_endpoints(other, |a, b| a + b)
    }

    /// Scalar product; a negative factor swaps the endpoints.
    pub fn scalar_mul(&self, j: f64) -> FuzzyNumber {
        let kind = match &self.kind {
            FuzzyKind::Triangular(t) if j >= 0.0 => {
                FuzzyKind::Triangular(TriangularSpec::new(j * t.l, j * t.c, j * t.u))
            }
            FuzzyKind::Triangular(t) => {
                FuzzyKind::Triangular(TriangularSpec::new(j * t.u, j * t.c, j * t.l))
            }
            FuzzyKind::Affine(a) if j >= 0.0 => FuzzyKind::Affine(AffineEndpoints {
                lower: (j * a.lower.0, j * a.lower.1),
                upper: (j * a.upper.0, j * a.upper.1),
            }),
            FuzzyKind::Affine(a) => FuzzyKind::Affine(AffineEndpoints {
                lower: (j * a.upper.0, j * a.upper.1),
                upper: (j * a.lower.0, j * a.lower.1),
            }),
            FuzzyKind::Sampled(s) => {
                let scale = |v: &[f64]| v.iter().map(|x| j * x).collect::<Vec<_>>();
                let (lower, upper) = if j >= 0.0 {
                    (scale(&s.lower), scale(&s.upper))
                } else {
                    (scale(&s.upper), scale(&s.lower))
                };
                FuzzyKind::Sampled(SampledLevels { r: s.r.clone(), lower, upper })
            }
        };
        FuzzyNumber { kind }
    }

    /// Hukuhara difference `self ⊖ other` on the default grid.
    pub fn h_difference(&self, other: &FuzzyNumber) -> HDifference {
        self.h_difference_on(other, &RGrid::default())
    }

    /// The candidate `z` with `z.lower = x.lower - y.lower`, `z.upper = x.upper - y.upper`,
    /// kept only if it is itself a fuzzy number on `grid`.
    pub fn h_difference_on(&self, other: &FuzzyNumber, grid: &RGrid) -> HDifference {
        let candidate = self.zip_endpoints(other, |a, b| a - b);
        if let FuzzyKind::Triangular(t) = candidate.kind {
            if !(t.l <= t.c + VALIDITY_TOL && t.c <= t.u + VALIDITY_TOL) {
                // report the first grid violation for a useful message
                return match candidate.validate(grid) {
                    Err(v) => HDifference::DoesNotExist(v),
                    Ok(()) => HDifference::DoesNotExist(Violation::Crossed {
                        r: 1.0,
                        lower: t.c,
                        upper: t.c,
                    }),
                };
            }
        }
        match candidate.validate(grid) {
            Ok(()) => HDifference::Exists(candidate),
            Err(v) => HDifference::DoesNotExist(v),
        }
    }

    /// Checks monotonicity and ordering of the endpoints on `grid`.
    pub fn validate(&self, grid: &RGrid) -> Result<(), Violation> {
        let levels: Vec<_> = grid
            .points()
            .iter()
            .map(|&r| (r, self.lower(r), self.upper(r)))
            .collect();
        check_levels(&levels, VALIDITY_TOL)
    }

    pub fn is_valid(&self) -> bool {
        self.validate(&RGrid::default()).is_ok()
    }

    /// Largest endpoint gap over the default grid.
    pub fn hausdorff_distance(&self, other: &FuzzyNumber) -> f64 {
        self.hausdorff_distance_on(other, &RGrid::default())
    }

    pub fn hausdorff_distance_on(&self, other: &FuzzyNumber, grid: &RGrid) -> f64 {
        grid.points()
            .iter()
            .map(|&r| {
                let dl = (self.lower(r) - other.lower(r)).abs();
                let du = (self.upper(r) - other.upper(r)).abs();
                dl.max(du)
            })
            .fold(0.0, f64::max)
    }

    /// Endpoint-wise equality on `grid` within `tol`.
    pub fn approx_eq_on(&self, other: &FuzzyNumber, grid: &RGrid, tol: f64) -> bool {
        self.hausdorff_distance_on(other, grid) <= tol
    }
}

impl std::ops::Add for &FuzzyNumber {
    type Output = FuzzyNumber;

    fn add(self, rhs: &FuzzyNumber) -> FuzzyNumber {
        FuzzyNumber::add(self, rhs)
    }
}

impl std::ops::Mul<&FuzzyNumber> for f64 {
    type Output = FuzzyNumber;

    fn mul(self, rhs: &FuzzyNumber) -> FuzzyNumber {
        rhs.scalar_mul(self)
    }
}

impl fmt::Display for FuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FuzzyKind::Triangular(t) => write!(f, "tri({}, {}, {})", t.l, t.c, t.u),
            FuzzyKind::Affine(a) => write!(
                f,
                "({} + {}r, {} + {}r)",
                a.lower.0, a.lower.1, a.upper.0, a.upper.1
            ),
            FuzzyKind::Sampled(s) => write!(f, "sampled({} nodes)", s.r.len()),
        }
    }
}

/// Wire form: `[l, c, u]`, `{"lower":[a,b],"upper":[g,h]}`, or
/// `{"r":[..],"lower":[..],"upper":[..]}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FuzzyRepr {
    Triangular([f64; 3]),
    Sampled { r: Vec<f64>, lower: Vec<f64>, upper: Vec<f64> },
    Affine { lower: [f64; 2], upper: [f64; 2] },
}

impl TryFrom<FuzzyRepr> for FuzzyNumber {
    type Error = FuzzyError;

    fn try_from(repr: FuzzyRepr) -> Result<Self, FuzzyError> {
        match repr {
            FuzzyRepr::Triangular([l, c, u]) => FuzzyNumber::triangular(TriangularSpec::new(l, c, u)),
            FuzzyRepr::Affine { lower, upper } => {
                Ok(FuzzyNumber::affine(lower[0], lower[1], upper[0], upper[1]))
            }
            FuzzyRepr::Sampled { r, lower, upper } => FuzzyNumber::sampled(r, lower, upper),
        }
    }
}

impl From<FuzzyNumber> for FuzzyRepr {
    fn from(x: FuzzyNumber) -> Self {
        match x.kind {
            FuzzyKind::Triangular(t) => FuzzyRepr::Triangular([t.l, t.c, t.u]),
            FuzzyKind::Affine(a) => FuzzyRepr::Affine {
                lower: [a.lower.0, a.lower.1],
                upper: [a.upper.0, a.upper.1],
            },
            FuzzyKind::Sampled(s) => FuzzyRepr::Sampled { r: s.r, lower: s.lower, upper: s.upper },
        }
    }
}
