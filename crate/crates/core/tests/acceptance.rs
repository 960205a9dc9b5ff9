//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use fuzzy_laplace::fuzzy::{check_levels, FuzzyNumber, RGrid, TriangularSpec};
use fuzzy_laplace::laplace::{
    forward_laplace, inverse_laplace, partial_fractions, ClosedFormSignal, Polynomial,
    RationalFunction, SignalTerm,
};
use fuzzy_laplace::oracle::{build_endpoint_ode, compare_solution, rk4_integrate};
use fuzzy_laplace::problem::ProblemFile;
use fuzzy_laplace::solver::{
    check_derivative_theorem, derivative_theorem_images, enumerate_cases, solve_fivp, CaseVector,
    FivProblem, FuzzySolution, SolveOptions,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn golden(name: &str) -> ProblemFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name);
    ProblemFile::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn tri(l: f64, c: f64, u: f64) -> FuzzyNumber {
    FuzzyNumber::triangular(TriangularSpec::new(l, c, u)).unwrap()
}

/// Worst endpoint gap against RK4 over every level, restricted to the validity window.
fn oracle_gap(problem: &FivProblem, solution: &FuzzySolution, steps: usize) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for level in &solution.levels {
        let system =
            build_endpoint_ode(problem, &solution.case, level.r).map_err(|e| e.to_string())?;
        let traj = rk4_integrate(&system, 1.0, steps).map_err(|e| e.to_string())?;
        worst = worst.max(compare_solution(solution, &traj, level.r).map_err(|e| e.to_string())?);
    }
    Ok(worst)
}

/// Classical RK4 on `y^(n) = Σ a_i y^(i)` written as a first-order system.
fn scalar_rk4(coefficients: &[f64], initial: &[f64], t_end: f64, steps: usize) -> Vec<(f64, f64)> {
    let n = coefficients.len();
    let field = |z: &[f64]| -> Vec<f64> {
        let mut d: Vec<f64> = z[1..].to_vec();
        d.push(coefficients.iter().zip(z).map(|(a, y)| a * y).sum());
        d
    };
    let h = t_end / steps as f64;
    let mut z = initial.to_vec();
    let mut out = vec![(0.0, z[0])];
    for i in 0..steps {
        let k1 = field(&z);
        let k2 = field(&(0..n).map(|j| z[j] + 0.5 * h * k1[j]).collect::<Vec<_>>());
        let k3 = field(&(0..n).map(|j| z[j] + 0.5 * h * k2[j]).collect::<Vec<_>>());
        let k4 = field(&(0..n).map(|j| z[j] + h * k3[j]).collect::<Vec<_>>());
        for j in 0..n {
            z[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        out.push((h * (i + 1) as f64, z[0]));
    }
    out
}

fn minus_problem_all_one() -> Outcome {
    let file = golden("fourth_order_minus.json");
    let problem = file.problem();
    let start = Instant::now();
    let solution =
        solve_fivp(&problem, &CaseVector::all_one(4), &RGrid::default(), SolveOptions::default())
            .map_err(|e| e.to_string())?;
    let gap = oracle_gap(&problem, &solution, 10_000)?;
    let elapsed = start.elapsed();
    let detail = format!("max error {gap:.3e}, {:.2} s", elapsed.as_secs_f64());
    if gap <= 1e-6 && elapsed < Duration::from_secs(10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn minus_problem_every_case() -> Outcome {
    let file = golden("fourth_order_minus.json");
    let problem = file.problem();
    let cases = enumerate_cases(4);
    if cases.len() != 16 {
        return Err(format!("{} cases enumerated", cases.len()));
    }
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for case in &cases {
        let solution = solve_fivp(&problem, case, &RGrid::default(), SolveOptions::default())
            .map_err(|e| e.to_string())?;
        let gap = oracle_gap(&problem, &solution, 10_000)?;
        if gap > 1e-6 {
            failures.push(format!("{case}: {gap:.3e}"));
        }
        worst = worst.max(gap);
    }
    if failures.is_empty() {
        Ok(format!("16 cases, max error {worst:.3e}"))
    } else {
        Err(failures.join("; "))
    }
}

fn crisp_reduction() -> Outcome {
    let file = golden("fourth_order_plus.json");
    let problem = file.problem();
    let core: Vec<f64> = problem.initial_conditions().iter().map(|x| x.lower(1.0)).collect();
    let reference = scalar_rk4(problem.coefficients(), &core, 1.0, 10_000);
    let at = |t: f64| reference.iter().find(|(s, _)| (s - t).abs() < 1e-12).unwrap().1;
    let grid = RGrid::from_values(vec![1.0]).unwrap();
    let (mut spread, mut gap): (f64, f64) = (0.0, 0.0);
    for case in enumerate_cases(4) {
        let solution =
            solve_fivp(&problem, &case, &grid, SolveOptions::default()).map_err(|e| e.to_string())?;
        let level = solution.level(1.0).ok_or("missing r = 1")?;
        for t in [0.25, 0.5, 1.0] {
            let (lo, up) = (level.lower.eval(t), level.upper.eval(t));
            spread = spread.max((lo - up).abs());
            gap = gap.max((lo - at(t)).abs()).max((up - at(t)).abs());
        }
    }
    let detail = format!("|lower - upper| {spread:.3e}, error vs crisp RK4 {gap:.3e}");
    if spread <= 1e-9 && gap <= 1e-6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Initial values of the signal whose transform is `num/den`, read off the
/// expansion in powers of `1/p`.
fn initial_values_of(num: &Polynomial, den: &Polynomial, count: usize) -> Vec<f64> {
    let d = den.degree().unwrap();
    let lead = den.leading();
    let mut remainder: Vec<f64> = (0..=d).map(|k| num.coeff(k)).collect();
    let mut out = Vec::with_capacity(count);
    // y^(k)(0) is the coefficient of p^{-(k+1)}
    for _ in 0..count {
        let c = remainder[d - 1] / lead;
        out.push(c);
        // remainder <- p * (remainder - c * den / p) truncated to degree d
        let mut next = vec![0.0; d + 1];
        for k in 0..d {
            let shifted = remainder[k] - c * den.coeff(k + 1);
            next[k + 1] = shifted;
        }
        next[0] = 0.0;
        remainder = next;
    }
    out
}

fn golden_inversion() -> Outcome {
    let num = Polynomial::new(vec![-1.0, 1.0]);
    let den = Polynomial::new(vec![0.0, 0.0, -1.0, -1.0, 1.0]);
    let f = RationalFunction::new(num.clone(), den.clone()).unwrap();
    let signal = inverse_laplace(&f).map_err(|e| e.to_string())?;
    let value = signal.eval(1.0);

    let s5 = 5f64.sqrt();
    let closed = |t: f64| {
        t - 2.0 + 2.0 * (t / 2.0).exp() * (s5 * t / 2.0).cosh()
            - 4.0 / s5 * (t / 2.0).exp() * (s5 * t / 2.0).sinh()
    };
    // y'''' = y''' + y'' with the initial values encoded in the numerator
    let ics = initial_values_of(&num, &den, 4);
    let rk4 = scalar_rk4(&[0.0, 0.0, 1.0, 1.0], &ics, 1.0, 10_000).last().unwrap().1;
    let round_trip = forward_laplace(&signal);

    let (e_rk4, e_closed) = ((value - rk4).abs(), (value - closed(1.0)).abs());
    let detail = format!(
        "y(1) = {value:.12}, |vs RK4| {e_rk4:.2e}, |vs hyperbolic form| {e_closed:.2e}, round trip {}",
        if round_trip.cross_equal(&f, 1e-9) { "ok" } else { "mismatch" }
    );
    if e_rk4 <= 1e-8 && e_closed <= 1e-8 && round_trip.cross_equal(&f, 1e-9) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn derivative_theorem_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in RGrid::default().points().iter().copied() {
        let lower = ClosedFormSignal::new(vec![SignalTerm::exp(1.0 + r, 0, 1.0)]);
        let upper = ClosedFormSignal::new(vec![SignalTerm::exp(2.0 - r, 0, 1.0)]);
        for case in enumerate_cases(2) {
            let gap = check_derivative_theorem(&lower, &upper, &case, &[2.0, 3.0, 5.0])
                .map_err(|e| e.to_string())?;
            worst = worst.max(gap);
        }
    }
    let cube = ClosedFormSignal::new(vec![SignalTerm::exp(1.0, 3, 0.0)]);
    let exact = enumerate_cases(3).iter().all(|case| {
        derivative_theorem_images(&cube, &cube, case)
            .iter()
            .all(|(lhs, rhs)| lhs.cross_equal(rhs, 0.0))
    });
    let detail = format!(
        "second order max discrepancy {worst:.3e}, third order on t^3 {}",
        if exact { "exact" } else { "inexact" }
    );
    if worst <= 1e-6 && exact {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Strictly proper rational function with simple roots in the open left half plane.
fn random_stable_rational(rng: &mut StdRng) -> RationalFunction {
    let degree = rng.gen_range(1..=6);
    let mut den = Polynomial::constant(1.0);
    let mut placed: Vec<(f64, f64)> = Vec::new();
    let far_enough = |re: f64, im: f64, placed: &[(f64, f64)]| {
        placed.iter().all(|&(a, b)| ((a - re).powi(2) + (b - im).powi(2)).sqrt() > 0.1)
    };
    let mut d = 0;
    while d < degree {
        if degree - d >= 2 && rng.gen_bool(0.5) {
            let (re, im) = (rng.gen_range(-3.0..-0.1), rng.gen_range(0.2..3.0));
            if far_enough(re, im, &placed) {
                placed.push((re, im));
                den = &den * &Polynomial::new(vec![re * re + im * im, -2.0 * re, 1.0]);
                d += 2;
            }
        } else {
            let re = rng.gen_range(-4.0..-0.1);
            if far_enough(re, 0.0, &placed) {
                placed.push((re, 0.0));
                den = &den * &Polynomial::linear_root(re);
                d += 1;
            }
        }
    }
    let num: Vec<f64> = (0..degree).map(|_| rng.gen_range(-2.0..2.0)).collect();
    RationalFunction::new(Polynomial::new(num), den).unwrap()
}

fn transform_round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut worst_trip, mut worst_pf): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let f = random_stable_rational(&mut rng);
        let pf = partial_fractions(&f).map_err(|e| e.to_string())?;
        worst_pf = worst_pf.max(pf.recombine().relative_coefficient_gap(&f));
        let back = forward_laplace(&inverse_laplace(&f).map_err(|e| e.to_string())?);
        worst_trip = worst_trip.max(back.relative_coefficient_gap(&f));
    }
    let detail =
        format!("100 functions, round trip {worst_trip:.3e}, recombination {worst_pf:.3e}");
    if worst_trip <= 1e-9 && worst_pf <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn golden_validity() -> Outcome {
    let mut checked = 0usize;
    for name in ["fourth_order_plus.json", "fourth_order_forced.json", "fourth_order_minus.json"] {
        let file = golden(name);
        let problem = file.problem();
        let grid = file.r_grid();
        for case in file.case_list() {
            let solution = solve_fivp(&problem, &case, &grid, file.options())
                .map_err(|e| format!("{name} {case}: {e}"))?;
            for i in 0..=file.t_steps {
                let t = file.t_end * i as f64 / file.t_steps as f64;
                if !solution.validity.contains(t) {
                    break;
                }
                let levels: Vec<_> = solution
                    .levels
                    .iter()
                    .map(|l| (l.r, l.lower.eval(t), l.upper.eval(t)))
                    .collect();
                check_levels(&levels, 1e-9)
                    .map_err(|v| format!("{name} case {case} t={t}: {v}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (case, t) slices over 3 problems"))
}

fn fuzzy_properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(42);
    let random_tri = |rng: &mut StdRng| {
        let mut v = [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)];
        v.sort_by(f64::total_cmp);
        tri(v[0], v[1], v[2])
    };
    let tol = 1e-12;
    let mut failures = Vec::new();
    for i in 0..1000 {
        let (u, v, w, z) =
            (random_tri(&mut rng), random_tri(&mut rng), random_tri(&mut rng), random_tri(&mut rng));
        let k: f64 = rng.gen_range(-5.0..5.0);
        let d = |a: &FuzzyNumber, b: &FuzzyNumber| a.hausdorff_distance(b);

        let translation = (d(&u.add(&w), &v.add(&w)) - d(&u, &v)).abs();
        let homogeneity = (d(&u.scalar_mul(k), &v.scalar_mul(k)) - k.abs() * d(&u, &v)).abs();
        let subadditivity = d(&u.add(&v), &w.add(&z)) - (d(&u, &w) + d(&v, &z));
        let symmetric = (d(&u, &v) - d(&v, &u)).abs();
        let round_trip = match u.add(&v).h_difference(&v).value() {
            Some(x) => d(&x, &u),
            None => f64::INFINITY,
        };
        let neg = u.scalar_mul(-k.abs());
        let sign_rule = RGrid::default()
            .points()
            .iter()
            .map(|&r| {
                let (lo, up) = (u.lower(r), u.upper(r));
                (neg.lower(r) + k.abs() * up).abs().max((neg.upper(r) + k.abs() * lo).abs())
            })
            .fold(0.0, f64::max);
        let scale = 1.0 + d(&u, &v).max(d(&w, &z)) * (1.0 + k.abs());
        let checks = [
            ("translation", translation / scale),
            ("homogeneity", homogeneity / scale),
            ("subadditivity", subadditivity / scale),
            ("symmetry", symmetric),
            ("H-difference round trip", round_trip / scale),
            ("scalar sign rule", sign_rule / scale),
        ];
        for (name, err) in checks {
            if err > tol {
                failures.push(format!("sample {i} {name}: {err:.3e}"));
            }
        }
        if !(u.add(&v).is_valid() && neg.is_valid() && d(&u, &u) == 0.0) {
            failures.push(format!("sample {i}: closure or identity"));
        }
    }
    if failures.is_empty() {
        Ok("1000 samples, 7 properties each".into())
    } else {
        Err(format!("{} violations, first: {}", failures.len(), failures[0]))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("fourth_order_minus all-one case vs RK4 oracle", minus_problem_all_one),
        ("fourth_order_minus all 16 cases vs RK4 oracle", minus_problem_every_case),
        ("fourth_order_plus crisp reduction at r = 1", crisp_reduction),
        ("inverse transform of (p-1)/(p^4-p^3-p^2) at t = 1", golden_inversion),
        ("derivative theorem second and third order", derivative_theorem_suite),
        ("transform round trip on random stable rationals", transform_round_trip),
        ("fuzzy validity on golden solutions", golden_validity),
        ("fuzzy metric and algebra properties", fuzzy_properties),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run)
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
