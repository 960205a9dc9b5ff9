use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fuzzy_laplace::laplace::{Root, RootSet};
use fuzzy_laplace::oracle::{build_endpoint_ode, compare_solution, rk4_integrate, DEFAULT_STEPS};
use fuzzy_laplace::problem::ProblemFile;
use fuzzy_laplace::solver::{
    enumerate_cases, solve_cases, solve_fivp, CaseVector, FuzzySolution, SolverError,
    ValidityWindow,
};

/// Closed-form solutions of linear fuzzy initial value problems.
#[derive(Parser)]
#[command(name = "fuzzy-laplace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every requested case and write one JSON record per case.
    Solve {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare closed-form solutions with a Runge-Kutta integration of the endpoint system.
    Verify {
        #[arg(long)]
        problem: PathBuf,
        /// Case vector such as 1212; defaults to the cases listed in the problem file.
        #[arg(long)]
        case: Option<CaseVector>,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, env = "FUZZY_LAPLACE_TOL", default_value_t = 1e-6)]
        tol: f64,
        /// Check a stored solution file, or a directory written by `solve`, instead of re-solving.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// List the differentiability cases for a given order.
    Cases {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
        order: u32,
    },
    /// Write r-level bands of one case as CSV.
    Bands {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        case: CaseVector,
        /// Number of time samples on [0, t_end], endpoints included.
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Verification(String),
    Input(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Input(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidProblem(_) | SolverError::CaseLength { .. } => {
                Failure::Input(e.to_string())
            }
            other => Failure::Solver(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<ProblemFile, Failure> {
    ProblemFile::load(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_root(r: &Root) -> String {
    let value = if r.im == 0.0 {
        format!("{}", r.re)
    } else if r.im > 0.0 {
        format!("{}+{}i", r.re, r.im)
    } else {
        format!("{}-{}i", r.re, -r.im)
    };
    if r.multiplicity > 1 {
        format!("{value} (x{})", r.multiplicity)
    } else {
        value
    }
}

fn format_roots(roots: &RootSet) -> String {
    roots.roots().iter().map(format_root).collect::<Vec<_>>().join(", ")
}

fn format_validity(v: &ValidityWindow) -> String {
    match v {
        ValidityWindow::Until(t) => sci(*t),
        ValidityWindow::Unbounded => "inf".into(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_solve(problem_path: &Path, out: &Path) -> Result<(), Failure> {
    let file = load(problem_path)?;
    let problem = file.problem();
    let cases = file.case_list();
    let results = solve_cases(&problem, &cases, &file.r_grid(), file.options());

    fs::create_dir_all(out)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", out.display())))?;
    let mut summary = String::from("case\tvalidity_T\tdenominator_roots\n");
    for result in results {
        let solution = result?;
        let json = serde_json::to_string_pretty(&solution).expect("solution serializes");
        write_file(&out.join(format!("case_{}.json", solution.case.label())), &(json + "\n"))?;
        let _ = writeln!(
            summary,
            "{}\t{}\t{}",
            solution.case,
            format_validity(&solution.validity),
            format_roots(&solution.denominator_roots)
        );
    }
    write_file(&out.join("summary.tsv"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn read_solution(path: &Path) -> Result<FuzzySolution, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn stored_solutions(path: &Path) -> Result<Vec<FuzzySolution>, Failure> {
    if !path.is_dir() {
        return Ok(vec![read_solution(path)?]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.starts_with("case_") && name.ends_with(".json")
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Failure::Input(format!("no case_*.json files in {}", path.display())));
    }
    files.iter().map(|p| read_solution(p)).collect()
}

fn cmd_verify(
    problem_path: &Path,
    case: Option<CaseVector>,
    steps: usize,
    tol: f64,
    solution_path: Option<&Path>,
) -> Result<(), Failure> {
    let file = load(problem_path)?;
    let problem = file.problem();
    if steps == 0 {
        return Err(Failure::Input("--steps must be positive".into()));
    }
    let mut solutions = match solution_path {
        Some(path) => stored_solutions(path)?,
        None => {
            let cases = match &case {
                Some(c) => vec![c.clone()],
                None => file.case_list(),
            };
            let results = solve_cases(&problem, &cases, &file.r_grid(), file.options());
            results.into_iter().collect::<Result<Vec<_>, _>>()?
        }
    };
    if let Some(c) = &case {
        solutions.retain(|s| &s.case == c);
        if solutions.is_empty() {
            return Err(Failure::Input(format!("no stored solution for case {c}")));
        }
    }

    let mut report = String::from("case\tr\tmax_error\tstatus\n");
    let mut failures = 0usize;
    for solution in &solutions {
        for level in &solution.levels {
            let system = build_endpoint_ode(&problem, &solution.case, level.r)?;
            let trajectory = rk4_integrate(&system, file.t_end, steps)
                .map_err(|e| Failure::Solver(format!("case {}: {e}", solution.case)))?;
            let error = compare_solution(solution, &trajectory, level.r)
                .map_err(|e| Failure::Solver(e.to_string()))?;
            let ok = error <= tol;
            if !ok {
                failures += 1;
            }
            let _ = writeln!(
                report,
                "{}\t{}\t{}\t{}",
                solution.case,
                level.r,
                sci(error),
                if ok { "ok" } else { "FAIL" }
            );
        }
    }
    print!("{report}");
    if failures > 0 {
        return Err(Failure::Verification(format!(
            "{failures} level(s) exceed tolerance {tol:e}"
        )));
    }
    Ok(())
}

fn cmd_cases(order: u32) {
    for case in enumerate_cases(order as usize) {
        println!("{case}");
    }
}

fn bands_csv(file: &ProblemFile, solution: &FuzzySolution, samples: usize) -> String {
    let mut csv = String::from("case,r,t,y_lower,y_upper\n");
    let denom = samples.saturating_sub(1).max(1) as f64;
    for level in &solution.levels {
        for i in 0..samples {
            let t = file.t_end * i as f64 / denom;
            if solution.validity.contains(t) {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    solution.case,
                    sci(level.r),
                    sci(t),
                    sci(level.lower.eval(t)),
                    sci(level.upper.eval(t))
                );
            } else {
                let _ = writeln!(csv, "{},{},{},,", solution.case, sci(level.r), sci(t));
            }
        }
    }
    if let ValidityWindow::Until(end) = solution.validity {
        if end < file.t_end {
            let _ = writeln!(csv, "# validity_T={}", sci(end));
        }
    }
    csv
}

fn cmd_bands(
    problem_path: &Path,
    case: &CaseVector,
    samples: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let file = load(problem_path)?;
    if samples == 0 {
        return Err(Failure::Input("--samples must be positive".into()));
    }
    let solution = solve_fivp(&file.problem(), case, &file.r_grid(), file.options())?;
    let csv = bands_csv(&file, &solution, samples);
    match out {
        Some(path) => write_file(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { problem, out } => cmd_solve(problem, out),
        Command::Verify { problem, case, steps, tol, solution } => {
            cmd_verify(problem, case.clone(), *steps, *tol, solution.as_deref())
        }
        Command::Cases { order } => {
            cmd_cases(*order);
            Ok(())
        }
        Command::Bands { problem, case, samples, out } => {
            cmd_bands(problem, case, *samples, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
