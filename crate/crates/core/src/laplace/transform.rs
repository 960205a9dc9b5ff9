//! Partial fractions and the closed-form Laplace transform pair.

use num_complex::Complex64;

use super::poly::{cmul, Polynomial};
use super::rational::RationalFunction;
use super::roots::{find_roots, RootSet};
use super::signal::{ClosedFormSignal, Phase, SignalTerm};
use super::LaplaceError;

/// `coef / (p - root)^power`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialFractionTerm {
    pub root: Complex64,
    pub power: usize,
    pub coef: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub terms: Vec<PartialFractionTerm>,
    pub roots: RootSet,
}

impl PartialFractions {
    /// Sums the terms back over `Π (p - root)^multiplicity`.
    pub fn recombine(&self) -> RationalFunction {
        let one = Complex64::new(1.0, 0.0);
        let linear = |z: Complex64| vec![-z, one];
        let mut den = vec![one];
        for r in self.roots.roots() {
            for _ in 0..r.multiplicity {
                den = cmul(&den, &linear(r.value()));
            }
        }
        let mut num = vec![Complex64::new(0.0, 0.0); den.len()];
        for term in &self.terms {
            let mut part = vec![term.coef];
            for r in self.roots.roots() {
                let power = if r.value() == term.root {
                    r.multiplicity - term.power
                } else {
                    r.multiplicity
                };
                for _ in 0..power {
                    part = cmul(&part, &linear(r.value()));
                }
            }
            for (k, c) in part.into_iter().enumerate() {
                num[k] += c;
            }
        }
        let re = |v: Vec<Complex64>| Polynomial::new(v.into_iter().map(|c| c.re).collect());
        RationalFunction::new(re(num), re(den)).expect("monic product denominator")
    }
}

/// Partial-fraction expansion of a strictly proper rational function.
pub fn partial_fractions(f: &RationalFunction) -> Result<PartialFractions, LaplaceError> {
    ensure_strictly_proper(f)?;
    let roots = find_roots(f.denominator())?;
    let terms = partial_fractions_with_roots(f, &roots)?;
    Ok(PartialFractions { terms, roots })
}

fn ensure_strictly_proper(f: &RationalFunction) -> Result<(), LaplaceError> {
    if f.is_strictly_proper() {
        Ok(())
    } else {
        Err(LaplaceError::Improper {
            numerator_degree: f.numerator().degree().unwrap_or(0),
            denominator_degree: f.denominator().degree().unwrap_or(0),
        })
    }
}

/// Expansion against an already computed root set of the (monic) denominator.
///
/// For a root `ρ` of multiplicity `m`, the coefficients are the first `m` Taylor
/// coefficients of `N(p) / Q(p)` at `ρ`, with `Q = D / (p - ρ)^m` built from the
/// remaining roots.
pub fn partial_fractions_with_roots(
    f: &RationalFunction,
    roots: &RootSet,
) -> Result<Vec<PartialFractionTerm>, LaplaceError> {
    ensure_strictly_proper(f)?;
    let den_degree = f.denominator().degree().unwrap_or(0);
    if roots.total_multiplicity() != den_degree {
        return Err(LaplaceError::NumericFailure {
            reason: format!(
                "root multiplicities sum to {} but denominator has degree {den_degree}",
                roots.total_multiplicity()
            ),
            residual: f.denominator().clone(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(den_degree);
    for (i, root) in roots.roots().iter().enumerate() {
        let rho = root.value();
        let m = root.multiplicity;

        let mut q = vec![Complex64::new(1.0, 0.0)];
        for (j, other) in roots.roots().iter().enumerate() {
            if i == j {
                continue;
            }
            let shift = [rho - other.value(), Complex64::new(1.0, 0.0)];
            for _ in 0..other.multiplicity {
                q = cmul(&q, &shift);
                q.truncate(m);
            }
        }
        q.resize(m, zero);

        let mut n = f.numerator().taylor_at(rho);
        n.resize(m.max(n.len()), zero);
        n.truncate(m);

        let mut series = vec![zero; m];
        for k in 0..m {
            let mut acc = n[k];
            for j in 1..=k {
                acc -= q[j] * series[k - j];
            }
            series[k] = acc / q[0];
        }
        for (k, coef) in series.into_iter().enumerate() {
            out.push(PartialFractionTerm { root: rho, power: m - k, coef });
        }
    }
    Ok(out)
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Time-domain signal of a strictly proper rational function.
pub fn inverse_laplace(f: &RationalFunction) -> Result<ClosedFormSignal, LaplaceError> {
    ensure_strictly_proper(f)?;
    if f.numerator().is_zero() {
        return Ok(ClosedFormSignal::zero());
    }
    let roots = find_roots(f.denominator())?;
    inverse_laplace_with_roots(f, &roots)
}

/// Inversion reusing a precomputed root set of `f`'s denominator.
pub fn inverse_laplace_with_roots(
    f: &RationalFunction,
    roots: &RootSet,
) -> Result<ClosedFormSignal, LaplaceError> {
    if f.numerator().is_zero() {
        return Ok(ClosedFormSignal::zero());
    }
    let terms = partial_fractions_with_roots(f, roots)?;
    Ok(signal_from_terms(&terms))
}

/// Real root `ρ`, power `j`: `c/(j-1)! · t^{j-1} e^{ρt}`.
/// Conjugate pair `α ± iβ`: `t^{j-1}/(j-1)! · e^{αt} (2Re c · cos βt - 2Im c · sin βt)`.
pub fn signal_from_terms(terms: &[PartialFractionTerm]) -> ClosedFormSignal {
    let mut out = Vec::with_capacity(terms.len() * 2);
    for term in terms {
        let m = (term.power - 1) as u32;
        let k = factorial(term.power - 1);
        let (alpha, beta) = (term.root.re, term.root.im);
        if beta == 0.0 {
            out.push(SignalTerm::exp(term.coef.re / k, m, alpha));
        } else if beta > 0.0 {
            out.push(SignalTerm::new(2.0 * term.coef.re / k, m, alpha, beta, Phase::Cos));
            out.push(SignalTerm::new(-2.0 * term.coef.im / k, m, alpha, beta, Phase::Sin));
        }
    }
    ClosedFormSignal::new(out)
}

/// Laplace image of a closed-form signal, summed over the least common denominator.
pub fn forward_laplace(s: &ClosedFormSignal) -> RationalFunction {
    // group by pole (alpha, beta), tracking the highest power of t
    let mut groups: Vec<(f64, f64, u32, Vec<&SignalTerm>)> = Vec::new();
    for term in s.terms() {
        let (alpha, beta) = (term.alpha + 0.0, term.beta + 0.0);
        match groups.iter_mut().find(|g| g.0 == alpha && g.1 == beta) {
            Some(g) => {
                g.2 = g.2.max(term.m);
                g.3.push(term);
            }
            None => groups.push((alpha, beta, term.m, vec![term])),
        }
    }

    let mut acc = RationalFunction::zero();
    for (alpha, beta, max_m, terms) in groups {
        let factor = if beta == 0.0 {
            Polynomial::linear_root(alpha)
        } else {
            Polynomial::new(vec![alpha * alpha + beta * beta, -2.0 * alpha, 1.0])
        };
        let pow = |k: u32| (0..k).fold(Polynomial::constant(1.0), |p, _| &p * &factor);
        let mut num = Polynomial::zero();
        for t in terms {
            let image = match t.phase {
                Phase::None => Polynomial::constant(1.0),
                Phase::Cos | Phase::Sin => {
                    // (p - alpha + i beta)^{m+1}
                    let base = [Complex64::new(-alpha, beta), Complex64::new(1.0, 0.0)];
                    let mut z = vec![Complex64::new(1.0, 0.0)];
                    for _ in 0..=t.m {
                        z = cmul(&z, &base);
                    }
                    let part = z
                        .iter()
                        .map(|c| if t.phase == Phase::Cos { c.re } else { c.im })
                        .collect();
                    Polynomial::new(part)
                }
            };
            let scaled = image.scale(t.c * factorial(t.m as usize));
            num = &num + &(&scaled * &pow(max_m - t.m));
        }
        let group = RationalFunction::new(num, pow(max_m + 1)).expect("nonzero power");
        acc = &acc + &group;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    fn rf(n: &[f64], d: &[f64]) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d)).unwrap()
    }

    fn find(pf: &PartialFractions, root: f64, power: usize) -> Complex64 {
        pf.terms
            .iter()
            .find(|t| (t.root - Complex64::new(root, 0.0)).norm() < 1e-9 && t.power == power)
            .map(|t| t.coef)
            .unwrap()
    }

    #[test]
    fn pf_of_inverse_square() {
        let pf = partial_fractions(&rf(&[1.0], &[0.0, 0.0, 1.0])).unwrap();
        assert!((find(&pf, 0.0, 2) - 1.0).norm() < 1e-14);
        assert!(find(&pf, 0.0, 1).norm() < 1e-14);
    }

    #[test]
    fn pf_cover_up() {
        // 1/((p-1)(p-2))
        let pf = partial_fractions(&rf(&[1.0], &[2.0, -3.0, 1.0])).unwrap();
        assert!((find(&pf, 1.0, 1) + 1.0).norm() < 1e-12);
        assert!((find(&pf, 2.0, 1) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn pf_golden_denominator() {
        // (p-1)/(p^4 - p^3 - p^2) = -2/p + 1/p^2 + (2p-3)/(p^2-p-1)
        let f = rf(&[-1.0, 1.0], &[0.0, 0.0, -1.0, -1.0, 1.0]);
        let pf = partial_fractions(&f).unwrap();
        assert!((find(&pf, 0.0, 1) + 2.0).norm() < 1e-12);
        assert!((find(&pf, 0.0, 2) - 1.0).norm() < 1e-12);
        let s5 = 5f64.sqrt();
        for phi in [(1.0 + s5) / 2.0, (1.0 - s5) / 2.0] {
            // residue of (2p-3)/(p^2-p-1) at phi is (2phi-3)/(2phi-1)
            let expected = (2.0 * phi - 3.0) / (2.0 * phi - 1.0);
            assert!((find(&pf, phi, 1) - expected).norm() < 1e-12);
        }
        assert!(pf.recombine().relative_coefficient_gap(&f) < 1e-12);
    }

    #[test]
    fn improper_input_is_rejected() {
        let f = rf(&[0.0, 0.0, 1.0], &[1.0, 1.0]);
        assert!(matches!(partial_fractions(&f), Err(LaplaceError::Improper { .. })));
        assert!(matches!(inverse_laplace(&f), Err(LaplaceError::Improper { .. })));
    }

    #[test]
    fn inverse_basic_pairs() {
        let t = inverse_laplace(&rf(&[1.0], &[0.0, 0.0, 1.0])).unwrap();
        for &x in &[0.0, 0.5, 2.0] {
            assert!((t.eval(x) - x).abs() < 1e-14);
        }
        let e = inverse_laplace(&rf(&[1.0], &[-0.7, 1.0])).unwrap();
        assert!((e.eval(1.3) - (0.7f64 * 1.3).exp()).abs() < 1e-13);
        let sin = inverse_laplace(&rf(&[1.0], &[1.0, 0.0, 1.0])).unwrap();
        assert!((sin.eval(0.9) - 0.9f64.sin()).abs() < 1e-14);
        assert!(sin.terms().iter().all(|t| t.phase != Phase::None));
    }

    #[test]
    fn inverse_golden_matches_hyperbolic_form() {
        let f = rf(&[-1.0, 1.0], &[0.0, 0.0, -1.0, -1.0, 1.0]);
        let s = inverse_laplace(&f).unwrap();
        let s5 = 5f64.sqrt();
        for &t in &[0.0, 0.3, 1.0, 2.5] {
            let h = s5 * t / 2.0;
            let expected =
                t - 2.0 + 2.0 * (t / 2.0).exp() * h.cosh() - 4.0 / s5 * (t / 2.0).exp() * h.sinh();
            assert!((s.eval(t) - expected).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn forward_table() {
        let t = ClosedFormSignal::new(vec![SignalTerm::exp(1.0, 1, 0.0)]);
        assert!(forward_laplace(&t).cross_equal(&rf(&[1.0], &[0.0, 0.0, 1.0]), 1e-15));
        let e = ClosedFormSignal::new(vec![SignalTerm::exp(1.0, 0, 3.0)]);
        assert!(forward_laplace(&e).cross_equal(&rf(&[1.0], &[-3.0, 1.0]), 1e-15));
        let te = ClosedFormSignal::new(vec![SignalTerm::exp(1.0, 1, 2.0)]);
        let f = forward_laplace(&te);
        assert!(f.cross_equal(&rf(&[1.0], &[4.0, -4.0, 1.0]), 1e-15));
        assert_eq!(f.denominator().degree(), Some(2));
        let cos = ClosedFormSignal::new(vec![SignalTerm::new(1.0, 0, -1.0, 2.0, Phase::Cos)]);
        // (p+1)/((p+1)^2+4)
        assert!(forward_laplace(&cos).cross_equal(&rf(&[1.0, 1.0], &[5.0, 2.0, 1.0]), 1e-15));
        let tsin = ClosedFormSignal::new(vec![SignalTerm::new(1.0, 1, 0.0, 1.0, Phase::Sin)]);
        // 2p/(p^2+1)^2
        assert!(forward_laplace(&tsin).cross_equal(&rf(&[0.0, 2.0], &[1.0, 0.0, 2.0, 0.0, 1.0]), 1e-15));
    }

    #[test]
    fn forward_uses_least_common_denominator() {
        let s = ClosedFormSignal::new(vec![
            SignalTerm::exp(1.0, 0, 1.0),
            SignalTerm::exp(2.0, 1, 1.0),
            SignalTerm::exp(-1.0, 0, 0.0),
        ]);
        assert_eq!(forward_laplace(&s).denominator().degree(), Some(3));
    }

    #[test]
    fn repeated_complex_poles_round_trip() {
        // 1/(p^2+1)^2 -> (sin t - t cos t)/2
        let f = rf(&[1.0], &[1.0, 0.0, 2.0, 0.0, 1.0]);
        let s = inverse_laplace(&f).unwrap();
        for &t in &[0.2, 1.0, 3.0] {
            assert!((s.eval(t) - (t.sin() - t * t.cos()) / 2.0).abs() < 1e-12);
        }
        assert!(forward_laplace(&s).relative_coefficient_gap(&f) < 1e-12);
    }
}
