//! Laplace-domain solution of linear constant-coefficient fuzzy initial value problems
//!
//! ```text
//! y^(n)(t) = a_0 y + a_1 y' + ... + a_{n-1} y^(n-1) + g(t),   y^(k)(0) fuzzy
//! ```
//!
//! under a fixed gH-differentiability [`CaseVector`]. Entry `c[k]` of the case
//! vector is the type of the step from `y^(k)` to `y^(k+1)`: type one keeps the
//! endpoints in place, type two swaps them. Writing `U = L[y_lower]` and
//! `V = L[y_upper]`, the transform of every derivative endpoint is an affine
//! expression in `(U, V)`; the equation itself then becomes a 2×2 polynomial
//! system that is solved by Cramer's rule and inverted term by term.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy::{check_levels, FuzzyNumber, RGrid, VALIDITY_TOL};
use crate::laplace::{
    find_roots, forward_laplace, inverse_laplace_with_roots, numeric_flt, ClosedFormSignal,
    LaplaceError, Polynomial, RationalFunction, RootSet,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("case {case}: determinant of the endpoint system vanishes identically")]
    Degenerate { case: CaseVector },
    #[error("case {case}: {source}")]
    Numeric { case: CaseVector, source: LaplaceError },
    #[error(transparent)]
    Laplace(#[from] LaplaceError),
    #[error("case vector has length {found}, problem order is {expected}")]
    CaseLength { expected: usize, found: usize },
}

/// gH-differentiability type of one derivative step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Diff {
    One,
    Two,
}

impl Diff {
    pub fn index(self) -> u8 {
        match self {
            Diff::One => 1,
            Diff::Two => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct CaseVector(Vec<Diff>);

impl CaseVector {
    pub fn new(steps: Vec<Diff>) -> Self {
        CaseVector(steps)
    }

    pub fn all_one(n: usize) -> Self {
        CaseVector(vec![Diff::One; n])
    }

    pub fn all_two(n: usize) -> Self {
        CaseVector(vec![Diff::Two; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[Diff] {
        &self.0
    }

    pub fn swap_count(&self) -> usize {
        self.0.iter().filter(|&&d| d == Diff::Two).count()
    }

    /// Compact label such as `1212`.
    pub fn label(&self) -> String {
        self.0.iter().map(|d| char::from(b'0' + d.index())).collect()
    }
}

impl fmt::Display for CaseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl TryFrom<Vec<u8>> for CaseVector {
    type Error = String;

    fn try_from(v: Vec<u8>) -> Result<Self, String> {
        v.into_iter()
            .map(|d| match d {
                1 => Ok(Diff::One),
                2 => Ok(Diff::Two),
                other => Err(format!("case entries must be 1 or 2, found {other}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(CaseVector)
    }
}

impl From<CaseVector> for Vec<u8> {
    fn from(c: CaseVector) -> Self {
        c.0.into_iter().map(Diff::index).collect()
    }
}

impl FromStr for CaseVector {
    type Err = String;

    /// Accepts `1212`, `1,2,1,2`, or `(1,2,1,2)`.
    fn from_str(s: &str) -> Result<Self, String> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')' | '[' | ']'))
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                other => Err(format!("unexpected character {other:?} in case vector {s:?}")),
            })
            .collect::<Result<_, _>>()?;
        if digits.is_empty() {
            return Err(format!("empty case vector {s:?}"));
        }
        CaseVector::try_from(digits)
    }
}

/// All `2^n` case vectors in lexicographic order, `One < Two`.
pub fn enumerate_cases(n: usize) -> Vec<CaseVector> {
    (0..1usize << n)
        .map(|bits| {
            CaseVector(
                (0..n)
                    .map(|k| if bits >> (n - 1 - k) & 1 == 0 { Diff::One } else { Diff::Two })
                    .collect(),
            )
        })
        .collect()
}

/// `y^(n) = Σ a_i y^(i) + g(t)` with fuzzy initial values `y^(k)(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FivProblem {
    coefficients: Vec<f64>,
    forcing: ClosedFormSignal,
    initial_conditions: Vec<FuzzyNumber>,
}

impl FivProblem {
    pub fn new(
        coefficients: Vec<f64>,
        forcing: ClosedFormSignal,
        initial_conditions: Vec<FuzzyNumber>,
    ) -> Result<Self, SolverError> {
        let n = coefficients.len();
        if n == 0 {
            return Err(SolverError::InvalidProblem("order must be at least 1".into()));
        }
        if initial_conditions.len() != n {
            return Err(SolverError::InvalidProblem(format!(
                "order {n} needs {n} initial conditions, found {}",
                initial_conditions.len()
            )));
        }
        if let Some(i) = coefficients.iter().position(|a| !a.is_finite()) {
            return Err(SolverError::InvalidProblem(format!("coefficient a_{i} is not finite")));
        }
        for (k, ic) in initial_conditions.iter().enumerate() {
            if let Err(v) = ic.validate(&RGrid::default()) {
                return Err(SolverError::InvalidProblem(format!(
                    "initial condition for derivative {k} is not a fuzzy number: {v}"
                )));
            }
        }
        Ok(FivProblem { coefficients, forcing, initial_conditions })
    }

    /// Same as [`FivProblem::new`] but skips the fuzzy-number check on initial values.
    pub fn new_unchecked(
        coefficients: Vec<f64>,
        forcing: ClosedFormSignal,
        initial_conditions: Vec<FuzzyNumber>,
    ) -> Result<Self, SolverError> {
        let n = coefficients.len();
        if n == 0 || initial_conditions.len() != n {
            return Err(SolverError::InvalidProblem(
                "order must be at least 1 with one initial condition per derivative".into(),
            ));
        }
        Ok(FivProblem { coefficients, forcing, initial_conditions })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn forcing(&self) -> &ClosedFormSignal {
        &self.forcing
    }

    pub fn initial_conditions(&self) -> &[FuzzyNumber] {
        &self.initial_conditions
    }

    pub fn ic_endpoints(&self, r: f64) -> IcEndpoints {
        IcEndpoints {
            lower: self.initial_conditions.iter().map(|x| x.lower(r)).collect(),
            upper: self.initial_conditions.iter().map(|x| x.upper(r)).collect(),
        }
    }

    pub fn is_crisp(&self) -> bool {
        self.initial_conditions.iter().all(FuzzyNumber::is_crisp)
    }

    /// Every initial value and the forcing multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> FivProblem {
        FivProblem {
            coefficients: self.coefficients.clone(),
            forcing: self.forcing.scale(lambda),
            initial_conditions: self.initial_conditions.iter().map(|x| x.scalar_mul(lambda)).collect(),
        }
    }

    fn check_case(&self, case: &CaseVector) -> Result<(), SolverError> {
        if case.len() != self.order() {
            return Err(SolverError::CaseLength { expected: self.order(), found: case.len() });
        }
        Ok(())
    }
}

/// Initial endpoint values `y^(k)_lower(0; r)` and `y^(k)_upper(0; r)` at a fixed r.
#[derive(Debug, Clone, PartialEq)]
pub struct IcEndpoints {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// `coef_lower(p)·U + coef_upper(p)·V + Σ_k ic_lower[k](p)·y^(k)_lower(0) + ic_upper[k](p)·y^(k)_upper(0)`
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicEndpointExpr {
    pub coef_lower: Polynomial,
    pub coef_upper: Polynomial,
    pub ic_lower: Vec<Polynomial>,
    pub ic_upper: Vec<Polynomial>,
}

impl SymbolicEndpointExpr {
    fn unknown(lower: bool, n: usize) -> Self {
        let (one, zero) = (Polynomial::constant(1.0), Polynomial::zero());
        SymbolicEndpointExpr {
            coef_lower: if lower { one.clone() } else { zero.clone() },
            coef_upper: if lower { zero } else { one },
            ic_lower: vec![Polynomial::zero(); n],
            ic_upper: vec![Polynomial::zero(); n],
        }
    }

    /// `p·self - y^(k)_side(0)`
    fn step(&self, k: usize, subtract_upper: bool) -> Self {
        let p = Polynomial::monomial(1.0, 1);
        let mut next = SymbolicEndpointExpr {
            coef_lower: &self.coef_lower * &p,
            coef_upper: &self.coef_upper * &p,
            ic_lower: self.ic_lower.iter().map(|q| q * &p).collect(),
            ic_upper: self.ic_upper.iter().map(|q| q * &p).collect(),
        };
        let slot = if subtract_upper { &mut next.ic_upper[k] } else { &mut next.ic_lower[k] };
        *slot = &*slot - &Polynomial::constant(1.0);
        next
    }

    pub fn evaluate(&self, ics: &IcEndpoints) -> EndpointExpr {
        let mut known = Polynomial::zero();
        for (k, q) in self.ic_lower.iter().enumerate() {
            known = &known + &q.scale(ics.lower[k]);
        }
        for (k, q) in self.ic_upper.iter().enumerate() {
            known = &known + &q.scale(ics.upper[k]);
        }
        EndpointExpr {
            coef_lower: self.coef_lower.clone(),
            coef_upper: self.coef_upper.clone(),
            known,
        }
    }
}

/// `coef_lower(p)·U + coef_upper(p)·V + known(p)`
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointExpr {
    pub coef_lower: Polynomial,
    pub coef_upper: Polynomial,
    pub known: Polynomial,
}

impl EndpointExpr {
    fn scale(&self, a: f64) -> EndpointExpr {
        EndpointExpr {
            coef_lower: self.coef_lower.scale(a),
            coef_upper: self.coef_upper.scale(a),
            known: self.known.scale(a),
        }
    }

    fn sub(&self, o: &EndpointExpr) -> EndpointExpr {
        EndpointExpr {
            coef_lower: &self.coef_lower - &o.coef_lower,
            coef_upper: &self.coef_upper - &o.coef_upper,
            known: &self.known - &o.known,
        }
    }
}

/// Lower and upper transforms of `y^(k)` as expressions in `U`, `V`, and the
/// initial endpoint values, for `k <= case.len()`.
pub fn derivative_transform_symbolic(
    k: usize,
    case: &CaseVector,
) -> (SymbolicEndpointExpr, SymbolicEndpointExpr) {
    assert!(k <= case.len(), "derivative order {k} exceeds case length {}", case.len());
    let n = case.len();
    let mut lower = SymbolicEndpointExpr::unknown(true, n);
    let mut upper = SymbolicEndpointExpr::unknown(false, n);
    for (j, step) in case.steps().iter().take(k).enumerate() {
        let (new_lower, new_upper) = match step {
            Diff::One => (lower.step(j, false), upper.step(j, true)),
            Diff::Two => (upper.step(j, true), lower.step(j, false)),
        };
        lower = new_lower;
        upper = new_upper;
    }
    (lower, upper)
}

/// [`derivative_transform_symbolic`] with the initial endpoint values substituted.
pub fn derivative_transform(
    k: usize,
    case: &CaseVector,
    ics: &IcEndpoints,
) -> (EndpointExpr, EndpointExpr) {
    let (lower, upper) = derivative_transform_symbolic(k, case);
    (lower.evaluate(ics), upper.evaluate(ics))
}

/// `matrix · (U, V)ᵀ = rhs + forcing·(1, 1)ᵀ`
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointSystem {
    pub matrix: [[Polynomial; 2]; 2],
    pub rhs: [Polynomial; 2],
    pub forcing: RationalFunction,
}

impl EndpointSystem {
    pub fn determinant(&self) -> Polynomial {
        let m = &self.matrix;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    /// Common denominator of both solved transforms: forcing denominator times determinant.
    pub fn solution_denominator(&self) -> Polynomial {
        self.forcing.denominator() * &self.determinant()
    }

    /// Cramer's rule; `None` when the determinant vanishes identically.
    pub fn solve(&self) -> Option<(RationalFunction, RationalFunction)> {
        let det = self.determinant();
        if det.is_zero() {
            return None;
        }
        let m = &self.matrix;
        let (gn, gd) = (self.forcing.numerator(), self.forcing.denominator());
        let lower_num = &(&(&self.rhs[0] * &m[1][1]) - &(&m[0][1] * &self.rhs[1])) * gd;
        let lower_num = &lower_num + &(gn * &(&m[1][1] - &m[0][1]));
        let upper_num = &(&(&m[0][0] * &self.rhs[1]) - &(&m[1][0] * &self.rhs[0])) * gd;
        let upper_num = &upper_num + &(gn * &(&m[0][0] - &m[1][0]));
        let den = gd * &det;
        Some((
            RationalFunction::new(lower_num, den.clone()).ok()?,
            RationalFunction::new(upper_num, den).ok()?,
        ))
    }
}

/// Transformed endpoint equations at level r. A coefficient `a_i >= 0` keeps the
/// endpoints of `y^(i)` in place on the right-hand side; `a_i < 0` swaps them.
pub fn assemble_system(problem: &FivProblem, case: &CaseVector, r: f64) -> EndpointSystem {
    let n = problem.order();
    let ics = problem.ic_endpoints(r);
    let (mut row_lower, mut row_upper) = derivative_transform(n, case, &ics);
    for (i, &a) in problem.coefficients().iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let (lower_i, upper_i) = derivative_transform(i, case, &ics);
        let (to_lower, to_upper) = if a >= 0.0 { (lower_i, upper_i) } else { (upper_i, lower_i) };
        row_lower = row_lower.sub(&to_lower.scale(a));
        row_upper = row_upper.sub(&to_upper.scale(a));
    }
    EndpointSystem {
        matrix: [
            [row_lower.coef_lower, row_lower.coef_upper],
            [row_upper.coef_lower, row_upper.coef_upper],
        ],
        rhs: [row_lower.known.scale(-1.0), row_upper.known.scale(-1.0)],
        forcing: forward_laplace(problem.forcing()),
    }
}

/// Closed-form endpoints of one r-level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSolution {
    pub r: f64,
    pub lower: ClosedFormSignal,
    pub upper: ClosedFormSignal,
}

/// Largest initial time span on which the solution is a fuzzy number at every r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValidityWindow {
    Until(f64),
    /// Crisp initial data: lower and upper coincide for all time.
    Unbounded,
}

impl ValidityWindow {
    pub fn contains(&self, t: f64) -> bool {
        match self {
            ValidityWindow::Until(end) => t <= end + 1e-12,
            ValidityWindow::Unbounded => true,
        }
    }

    pub fn end(&self) -> f64 {
        match self {
            ValidityWindow::Until(end) => *end,
            ValidityWindow::Unbounded => f64::INFINITY,
        }
    }
}

impl Serialize for ValidityWindow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ValidityWindow::Until(t) => s.serialize_f64(*t),
            ValidityWindow::Unbounded => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ValidityWindow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Finite(f64),
            Flag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Finite(t) if t >= 0.0 => Ok(ValidityWindow::Until(t)),
            Repr::Finite(t) => Err(serde::de::Error::custom(format!("negative validity_T {t}"))),
            Repr::Flag(s) if s == "inf" => Ok(ValidityWindow::Unbounded),
            Repr::Flag(s) => Err(serde::de::Error::custom(format!("unknown validity_T flag {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzySolution {
    pub case: CaseVector,
    pub denominator_roots: RootSet,
    #[serde(rename = "validity_T")]
    pub validity: ValidityWindow,
    pub levels: Vec<LevelSolution>,
}

impl FuzzySolution {
    pub fn level(&self, r: f64) -> Option<&LevelSolution> {
        self.levels.iter().find(|l| (l.r - r).abs() <= 1e-12)
    }
}

/// Time span scanned for the validity window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub t_end: f64,
    pub t_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { t_end: 1.0, t_steps: 100 }
    }
}

/// Relative size under which numerator coefficients at or above the
/// denominator degree are treated as rounding noise.
const PROPER_TOL: f64 = 1e-9;

/// Solves one case on every level of `r_grid`.
pub fn solve_fivp(
    problem: &FivProblem,
    case: &CaseVector,
    r_grid: &RGrid,
    options: SolveOptions,
) -> Result<FuzzySolution, SolverError> {
    problem.check_case(case)?;
    let numeric = |source| SolverError::Numeric { case: case.clone(), source };

    let mut roots: Option<RootSet> = None;
    let mut levels = Vec::with_capacity(r_grid.len());
    for &r in r_grid.points() {
        let system = assemble_system(problem, case, r);
        let (lower, upper) =
            system.solve().ok_or_else(|| SolverError::Degenerate { case: case.clone() })?;
        // the denominator does not depend on r
        if roots.is_none() {
            roots = Some(find_roots(lower.denominator()).map_err(numeric)?);
        }
        let root_set = roots.as_ref().expect("set above");
        let lower = lower.into_strictly_proper(PROPER_TOL).map_err(numeric)?;
        let upper = upper.into_strictly_proper(PROPER_TOL).map_err(numeric)?;
        levels.push(LevelSolution {
            r,
            lower: inverse_laplace_with_roots(&lower, root_set).map_err(numeric)?,
            upper: inverse_laplace_with_roots(&upper, root_set).map_err(numeric)?,
        });
    }

    let mut solution = FuzzySolution {
        case: case.clone(),
        denominator_roots: roots.unwrap_or_default(),
        validity: ValidityWindow::Unbounded,
        levels,
    };
    if !problem.is_crisp() {
        solution.validity =
            ValidityWindow::Until(validity_window(&solution, options.t_end, options.t_steps));
    }
    Ok(solution)
}

/// Solves every case, one thread per case; results keep the order of `cases`.
pub fn solve_cases(
    problem: &FivProblem,
    cases: &[CaseVector],
    r_grid: &RGrid,
    options: SolveOptions,
) -> Vec<Result<FuzzySolution, SolverError>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .iter()
            .map(|case| scope.spawn(move || solve_fivp(problem, case, r_grid, options)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    })
}

/// Largest sampled `T <= t_end` such that at every sampled `t <= T` the levels form a
/// fuzzy number: `lower <= upper`, lower nondecreasing and upper nonincreasing in r.
/// Returns 0 when the solution is already invalid at `t = 0`.
pub fn validity_window(solution: &FuzzySolution, t_end: f64, t_steps: usize) -> f64 {
    let mut levels: Vec<&LevelSolution> = solution.levels.iter().collect();
    levels.sort_by(|a, b| a.r.total_cmp(&b.r));
    let steps = t_steps.max(1);
    let mut last_valid = None;
    for i in 0..=steps {
        let t = t_end * i as f64 / steps as f64;
        let values: Vec<_> =
            levels.iter().map(|l| (l.r, l.lower.eval(t), l.upper.eval(t))).collect();
        if check_levels(&values, VALIDITY_TOL).is_err() {
            break;
        }
        last_valid = Some(t);
    }
    last_valid.unwrap_or(0.0)
}

/// Endpoint signals of `f^(k)` for `k = 0..=case.len()`, routed through the case swaps.
pub fn routed_derivatives(
    f_lower: &ClosedFormSignal,
    f_upper: &ClosedFormSignal,
    case: &CaseVector,
) -> Vec<(ClosedFormSignal, ClosedFormSignal)> {
    let mut out = vec![(f_lower.clone(), f_upper.clone())];
    for step in case.steps() {
        let (lo, up) = out.last().expect("non-empty");
        let (dl, du) = (lo.derivative(), up.derivative());
        out.push(match step {
            Diff::One => (dl, du),
            Diff::Two => (du, dl),
        });
    }
    out
}

fn initial_values(routed: &[(ClosedFormSignal, ClosedFormSignal)], n: usize) -> IcEndpoints {
    IcEndpoints {
        lower: routed[..n].iter().map(|(l, _)| l.eval(0.0)).collect(),
        upper: routed[..n].iter().map(|(_, u)| u.eval(0.0)).collect(),
    }
}

/// Derivative theorem in closed form: the transform of each endpoint of `f^(n)`
/// (left) next to the expression built from the transforms of `f` and its initial
/// values (right), both as rational functions. Order is `n = case.len()`.
pub fn derivative_theorem_images(
    f_lower: &ClosedFormSignal,
    f_upper: &ClosedFormSignal,
    case: &CaseVector,
) -> [(RationalFunction, RationalFunction); 2] {
    let n = case.len();
    let routed = routed_derivatives(f_lower, f_upper, case);
    let ics = initial_values(&routed, n);
    let (lower_expr, upper_expr) = derivative_transform(n, case, &ics);
    let (fl, fu) = (forward_laplace(f_lower), forward_laplace(f_upper));
    let rhs = |e: &EndpointExpr| {
        let a = fl.mul_poly(&e.coef_lower);
        let b = fu.mul_poly(&e.coef_upper);
        &(&a + &b) + &RationalFunction::from_polynomial(e.known.clone())
    };
    [
        (forward_laplace(&routed[n].0), rhs(&lower_expr)),
        (forward_laplace(&routed[n].1), rhs(&upper_expr)),
    ]
}

/// Largest gap, over `p_samples`, between the quadrature transform of the
/// case-routed `n`th derivative endpoints and the derivative-theorem expression.
pub fn check_derivative_theorem(
    f_lower: &ClosedFormSignal,
    f_upper: &ClosedFormSignal,
    case: &CaseVector,
    p_samples: &[f64],
) -> Result<f64, SolverError> {
    let n = case.len();
    let routed = routed_derivatives(f_lower, f_upper, case);
    let ics = initial_values(&routed, n);
    let (lower_expr, upper_expr) = derivative_transform(n, case, &ics);
    let order = f_lower.exponential_order().max(f_upper.exponential_order()).max(0.0);
    let (dn_lower, dn_upper) = &routed[n];
    let (fl, fu) = (forward_laplace(f_lower), forward_laplace(f_upper));

    let mut worst: f64 = 0.0;
    for &p in p_samples {
        let (lhs_lower, lhs_upper) =
            numeric_flt(|t, _| dn_lower.eval(t), |t, _| dn_upper.eval(t), p, 0.0, order)?;
        let (fl_p, fu_p) = (fl.eval(p), fu.eval(p));
        let rhs = |e: &EndpointExpr| {
            e.coef_lower.eval(p) * fl_p + e.coef_upper.eval(p) * fu_p + e.known.eval(p)
        };
        worst = worst
            .max((lhs_lower - rhs(&lower_expr)).abs())
            .max((lhs_upper - rhs(&upper_expr)).abs());
    }
    Ok(worst)
}
