//! Independent check of the Laplace solver: the crisp `2n`-dimensional ODE for the
//! endpoint functions, integrated with classical fourth-order Runge–Kutta.
//!
//! State layout is `(u_0, …, u_{n-1}, v_0, …, v_{n-1})` where `u_k` and `v_k` are the
//! lower and upper endpoints of `y^(k)` at a fixed r.

use std::fmt::Write as _;

use thiserror::Error;

use crate::laplace::ClosedFormSignal;
use crate::solver::{CaseVector, Diff, FivProblem, FuzzySolution, SolverError};

pub const DEFAULT_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("integration diverged at t={t}")]
    Divergence { t: f64 },
    #[error("solution has no level r={r}")]
    MissingLevel { r: f64 },
    #[error("step count must be positive")]
    NoSteps,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// `z' = A z + g(t)·b` with `b` marking the rows that receive the forcing.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointOdeSystem {
    order: usize,
    matrix: Vec<Vec<f64>>,
    forcing: ClosedFormSignal,
    forced_rows: [usize; 2],
    initial: Vec<f64>,
}

impl EndpointOdeSystem {
    pub fn dimension(&self) -> usize {
        2 * self.order
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn initial_state(&self) -> &[f64] {
        &self.initial
    }

    fn rhs(&self, t: f64, z: &[f64], out: &mut [f64]) {
        for (row, o) in self.matrix.iter().zip(out.iter_mut()) {
            *o = row.iter().zip(z).map(|(a, x)| a * x).sum();
        }
        if !self.forcing.is_zero() {
            let g = self.forcing.eval(t);
            for &i in &self.forced_rows {
                out[i] += g;
            }
        }
    }
}

/// Endpoint system of `problem` at level `r` under `case`.
pub fn build_endpoint_ode(
    problem: &FivProblem,
    case: &CaseVector,
    r: f64,
) -> Result<EndpointOdeSystem, SolverError> {
    let n = problem.order();
    if case.len() != n {
        return Err(SolverError::CaseLength { expected: n, found: case.len() });
    }
    let (u, v) = (|k: usize| k, |k: usize| n + k);
    let mut matrix = vec![vec![0.0; 2 * n]; 2 * n];

    // rows for y^(n)_lower and y^(n)_upper, expressed in the state
    let mut top_lower = vec![0.0; 2 * n];
    let mut top_upper = vec![0.0; 2 * n];
    for (i, &a) in problem.coefficients().iter().enumerate() {
        if a >= 0.0 {
            top_lower[u(i)] += a;
            top_upper[v(i)] += a;
        } else {
            top_lower[v(i)] += a;
            top_upper[u(i)] += a;
        }
    }

    for (k, step) in case.steps().iter().enumerate() {
        let swapped = *step == Diff::Two;
        if k + 1 < n {
            let (lo, up) = if swapped { (v(k + 1), u(k + 1)) } else { (u(k + 1), v(k + 1)) };
            matrix[u(k)][lo] = 1.0;
            matrix[v(k)][up] = 1.0;
        } else if swapped {
            matrix[u(k)] = top_upper.clone();
            matrix[v(k)] = top_lower.clone();
        } else {
            matrix[u(k)] = top_lower.clone();
            matrix[v(k)] = top_upper.clone();
        }
    }

    let ics = problem.ic_endpoints(r);
    let initial = ics.lower.iter().chain(&ics.upper).copied().collect();
    Ok(EndpointOdeSystem {
        order: n,
        matrix,
        forcing: problem.forcing().clone(),
        forced_rows: [u(n - 1), v(n - 1)],
        initial,
    })
}

/// Sampled endpoint trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    order: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn lower(&self, i: usize) -> f64 {
        self.states[i][0]
    }

    pub fn upper(&self, i: usize) -> f64 {
        self.states[i][self.order]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Columns `t, u_0..u_{n-1}, v_0..v_{n-1}`, every value to 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for side in ["u", "v"] {
            for k in 0..self.order {
                let _ = write!(out, ",{side}_{k}");
            }
        }
        out.push('\n');
        for (t, state) in self.times.iter().zip(&self.states) {
            let _ = write!(out, "{t:.16e}");
            for x in state {
                let _ = write!(out, ",{x:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn rk4_integrate(
    system: &EndpointOdeSystem,
    t_end: f64,
    steps: usize,
) -> Result<Trajectory, OracleError> {
    if steps == 0 {
        return Err(OracleError::NoSteps);
    }
    let dim = system.dimension();
    let h = t_end / steps as f64;
    let mut z = system.initial.clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(z.clone());

    let (mut k1, mut k2, mut k3, mut k4) =
        (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];
    for i in 0..steps {
        let t = h * i as f64;
        system.rhs(t, &z, &mut k1);
        for j in 0..dim {
            tmp[j] = z[j] + 0.5 * h * k1[j];
        }
        system.rhs(t + 0.5 * h, &tmp, &mut k2);
        for j in 0..dim {
            tmp[j] = z[j] + 0.5 * h * k2[j];
        }
        system.rhs(t + 0.5 * h, &tmp, &mut k3);
        for j in 0..dim {
            tmp[j] = z[j] + h * k3[j];
        }
        system.rhs(t + h, &tmp, &mut k4);
        for j in 0..dim {
            z[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t_next = h * (i + 1) as f64;
        if z.iter().any(|x| !x.is_finite()) {
            return Err(OracleError::Divergence { t: t_next });
        }
        times.push(t_next);
        states.push(z.clone());
    }
    Ok(Trajectory { order: system.order, times, states })
}

/// Largest endpoint gap between the closed-form level `r` of `solution` and the
/// trajectory, over the trajectory samples inside the validity window.
pub fn compare_solution(
    solution: &FuzzySolution,
    trajectory: &Trajectory,
    r: f64,
) -> Result<f64, OracleError> {
    let level = solution.level(r).ok_or(OracleError::MissingLevel { r })?;
    let mut worst: f64 = 0.0;
    for (i, &t) in trajectory.times.iter().enumerate() {
        if !solution.validity.contains(t) {
            break;
        }
        worst = worst
            .max((level.lower.eval(t) - trajectory.lower(i)).abs())
            .max((level.upper.eval(t) - trajectory.upper(i)).abs());
    }
    Ok(worst)
}

/// Builds, integrates on `[0, t_end]`, and compares every level of `solution`.
pub fn max_oracle_gap(
    problem: &FivProblem,
    solution: &FuzzySolution,
    t_end: f64,
    steps: usize,
) -> Result<f64, OracleError> {
    let mut worst: f64 = 0.0;
    for level in &solution.levels {
        let system = build_endpoint_ode(problem, &solution.case, level.r)?;
        let trajectory = rk4_integrate(&system, t_end, steps)?;
        worst = worst.max(compare_solution(solution, &trajectory, level.r)?);
    }
    Ok(worst)
}
