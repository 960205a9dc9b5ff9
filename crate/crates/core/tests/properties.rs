use fuzzy_laplace::fuzzy::{FuzzyNumber, RGrid, TriangularSpec};
use fuzzy_laplace::laplace::{
    find_roots, forward_laplace, inverse_laplace, numeric_flt, partial_fractions, ClosedFormSignal, Phase,
    Polynomial, RationalFunction, SignalTerm,
};
use fuzzy_laplace::solver::{
    derivative_transform_symbolic, enumerate_cases, solve_fivp, CaseVector, FivProblem,
    SolveOptions,
};
use proptest::prelude::*;

fn triangular() -> impl Strategy<Value = FuzzyNumber> {
    prop::array::uniform3(-20.0f64..20.0).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        FuzzyNumber::triangular(TriangularSpec::new(v[0], v[1], v[2])).unwrap()
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Distinct left-half-plane real roots and conjugate pairs, total degree in 1..=6.
fn stable_denominator() -> impl Strategy<Value = Polynomial> {
    (
        prop::collection::vec(-4.0f64..-0.2, 0..=3),
        prop::collection::vec((-3.0f64..-0.2, 0.3f64..3.0), 0..=1),
    )
        .prop_filter("needs a root", |(re, pairs)| !re.is_empty() || !pairs.is_empty())
        .prop_filter("roots must be separated", |(re, _)| {
            re.iter().enumerate().all(|(i, a)| re[..i].iter().all(|b| (a - b).abs() > 0.2))
        })
        .prop_map(|(re, pairs)| {
            let mut den = Polynomial::from_roots(&re);
            for (a, b) in pairs {
                den = &den * &Polynomial::new(vec![a * a + b * b, -2.0 * a, 1.0]);
            }
            den
        })
}

fn strictly_proper() -> impl Strategy<Value = RationalFunction> {
    stable_denominator().prop_flat_map(|den| {
        let d = den.degree().unwrap();
        prop::collection::vec(-2.0f64..2.0, d).prop_map(move |num| {
            RationalFunction::new(Polynomial::new(num), den.clone()).unwrap()
        })
    })
}

fn small_problem() -> impl Strategy<Value = FivProblem> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-2.0f64..2.0, n),
                prop::collection::vec(triangular_small(), n),
                -1.0f64..1.0,
            )
        })
        .prop_map(|(coefficients, ics, g)| {
            FivProblem::new(coefficients, ClosedFormSignal::constant(g), ics).unwrap()
        })
}

fn triangular_small() -> impl Strategy<Value = FuzzyNumber> {
    (-3.0f64..3.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(c, dl, du)| {
        FuzzyNumber::triangular(TriangularSpec::new(c - dl, c, c + du)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_is_commutative_and_associative(u in triangular(), v in triangular(), w in triangular()) {
        let grid = RGrid::default();
        prop_assert!(u.add(&v).approx_eq_on(&v.add(&u), &grid, 1e-12));
        prop_assert!(u.add(&v).add(&w).approx_eq_on(&u.add(&v.add(&w)), &grid, 1e-12));
    }

    #[test]
    fn scalar_multiplication_keeps_validity(u in triangular(), k in -10.0f64..10.0) {
        let scaled = u.scalar_mul(k);
        prop_assert!(scaled.is_valid());
        for &r in RGrid::default().points() {
            let (lo, up) = (u.lower(r), u.upper(r));
            let expected = if k >= 0.0 { (k * lo, k * up) } else { (k * up, k * lo) };
            prop_assert!(close(scaled.lower(r), expected.0, 1e-12));
            prop_assert!(close(scaled.upper(r), expected.1, 1e-12));
        }
    }

    #[test]
    fn hausdorff_is_a_translation_invariant_metric(u in triangular(), v in triangular(), w in triangular()) {
        let d = |a: &FuzzyNumber, b: &FuzzyNumber| a.hausdorff_distance(b);
        prop_assert_eq!(d(&u, &u), 0.0);
        prop_assert!(close(d(&u, &v), d(&v, &u), 1e-12));
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w) + 1e-12);
        prop_assert!(close(d(&u.add(&w), &v.add(&w)), d(&u, &v), 1e-12));
    }

    #[test]
    fn h_difference_inverts_addition(u in triangular(), v in triangular()) {
        let back = u.add(&v).h_difference(&v).value();
        prop_assert!(back.is_some());
        prop_assert!(back.unwrap().approx_eq_on(&u, &RGrid::default(), 1e-12));
    }

    #[test]
    fn partial_fractions_recombine(f in strictly_proper()) {
        let pf = partial_fractions(&f).unwrap();
        prop_assert!(pf.recombine().relative_coefficient_gap(&f) <= 1e-9);
    }

    #[test]
    fn forward_inverts_inverse(f in strictly_proper()) {
        let back = forward_laplace(&inverse_laplace(&f).unwrap());
        prop_assert!(back.relative_coefficient_gap(&f) <= 1e-9, "{} vs {}", back, f);
    }

    #[test]
    fn inverse_inverts_forward(c in -2.0f64..2.0, m in 0u32..3, alpha in -2.0f64..1.0, beta in 0.5f64..3.0, cos in any::<bool>()) {
        let phase = if cos { Phase::Cos } else { Phase::Sin };
        let s = ClosedFormSignal::new(vec![SignalTerm::new(c, m, alpha, beta, phase), SignalTerm::exp(1.0, 0, -0.5)]);
        let back = inverse_laplace(&forward_laplace(&s)).unwrap();
        for &t in &[0.0, 0.4, 1.1, 2.0] {
            prop_assert!(close(back.eval(t), s.eval(t), 1e-8), "t={}", t);
        }
    }

    #[test]
    fn roots_reproduce_polynomial(roots in prop::collection::vec(-3.0f64..3.0, 1..6)) {
        let p = Polynomial::from_roots(&roots);
        let found = find_roots(&p).unwrap();
        prop_assert_eq!(found.total_multiplicity(), roots.len());
        for root in found.roots() {
            let residual = p.eval_complex(root.value()).norm();
            prop_assert!(residual <= 1e-8 * (1.0 + p.norm_inf()), "residual {}", residual);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn solutions_start_at_the_initial_values(problem in small_problem(), pick in any::<prop::sample::Index>()) {
        let cases = enumerate_cases(problem.order());
        let case = pick.get(&cases);
        let grid = RGrid::uniform(5);
        let sol = solve_fivp(&problem, case, &grid, SolveOptions::default()).unwrap();
        for level in &sol.levels {
            let (lo, up) = problem.initial_conditions()[0].level_set(level.r).unwrap();
            prop_assert!((level.lower.eval(0.0) - lo).abs() <= 1e-9);
            prop_assert!((level.upper.eval(0.0) - up).abs() <= 1e-9);
        }
    }

    #[test]
    fn solutions_are_linear_in_the_data(problem in small_problem(), lambda in 0.1f64..4.0, pick in any::<prop::sample::Index>()) {
        let cases = enumerate_cases(problem.order());
        let case = pick.get(&cases);
        let grid = RGrid::uniform(3);
        let a = solve_fivp(&problem, case, &grid, SolveOptions::default()).unwrap();
        let b = solve_fivp(&problem.scaled(lambda), case, &grid, SolveOptions::default()).unwrap();
        for (la, lb) in a.levels.iter().zip(&b.levels) {
            for &t in &[0.2, 0.7] {
                prop_assert!(close(lambda * la.lower.eval(t), lb.lower.eval(t), 1e-8));
                prop_assert!(close(lambda * la.upper.eval(t), lb.upper.eval(t), 1e-8));
            }
        }
    }

    #[test]
    fn crisp_data_gives_one_solution_for_every_case(coefficients in prop::collection::vec(-2.0f64..2.0, 1..=3), seed in prop::collection::vec(-3.0f64..3.0, 3)) {
        let n = coefficients.len();
        let ics = seed[..n].iter().map(|&x| FuzzyNumber::crisp(x)).collect();
        let problem = FivProblem::new(coefficients, ClosedFormSignal::zero(), ics).unwrap();
        let grid = RGrid::uniform(2);
        let base = solve_fivp(&problem, &CaseVector::all_one(n), &grid, SolveOptions::default()).unwrap();
        for case in enumerate_cases(n) {
            let sol = solve_fivp(&problem, &case, &grid, SolveOptions::default()).unwrap();
            for (l, b) in sol.levels.iter().zip(&base.levels) {
                for &t in &[0.3, 1.0] {
                    prop_assert!(close(l.lower.eval(t), b.lower.eval(t), 1e-8), "case {}", case);
                    prop_assert!(close(l.upper.eval(t), l.lower.eval(t), 1e-8), "case {}", case);
                }
            }
        }
    }

    #[test]
    fn leading_term_follows_swap_parity(n in 1usize..=6, pick in any::<prop::sample::Index>()) {
        let cases = enumerate_cases(n);
        let case = pick.get(&cases);
        let (lower, _) = derivative_transform_symbolic(n, case);
        let on_upper = case.swap_count() % 2 == 1;
        let pn = Polynomial::monomial(1.0, n);
        if on_upper {
            prop_assert_eq!(&lower.coef_upper, &pn);
            prop_assert!(lower.coef_lower.is_zero());
        } else {
            prop_assert_eq!(&lower.coef_lower, &pn);
            prop_assert!(lower.coef_upper.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_multiplication_composes(u in triangular(), j in -5.0f64..5.0, k in -5.0f64..5.0) {
        let grid = RGrid::default();
        prop_assert!(u.scalar_mul(k).scalar_mul(j).approx_eq_on(&u.scalar_mul(j * k), &grid, 1e-12 * (1.0 + 25.0 * 20.0)));
    }

    #[test]
    fn sums_stay_ordered(u in triangular(), v in triangular()) {
        let s = u.add(&v);
        for &r in RGrid::default().points() {
            prop_assert!(s.lower(r) <= s.upper(r) + 1e-12 * (1.0 + s.upper(r).abs()));
        }
    }

    #[test]
    fn quadrature_agrees_with_closed_form_transform(c in -2.0f64..2.0, m in 0u32..3, alpha in -1.5f64..1.0, beta in 0.0f64..3.0, p_gap in 0.5f64..4.0) {
        let s = ClosedFormSignal::new(vec![SignalTerm::new(c, m, alpha, beta, Phase::Cos), SignalTerm::exp(0.5, 0, 0.0)]);
        let order = s.exponential_order().max(0.0);
        let p = order + p_gap;
        let (lo, up) = numeric_flt(|t, _| s.eval(t), |t, _| s.eval(t), p, 0.0, order).unwrap();
        let exact = forward_laplace(&s).eval(p);
        prop_assert!((lo - exact).abs() <= 1e-6 && (up - exact).abs() <= 1e-6, "{} vs {}", lo, exact);
    }
}
