//! Polynomial roots with multiplicities.
//!
//! Multiplicities come from a square-free decomposition (Yun's algorithm with a
//! tolerant Euclidean gcd). Each square-free factor is solved by Aberth–Ehrlich
//! simultaneous iteration and polished with Newton steps, so repeated roots are
//! located as simple roots of their factor instead of as an ill-conditioned
//! cluster. Exact zero roots are split off before anything else.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::LaplaceError;

const MAX_ITERATIONS: usize = 500;
/// Relative size below which a Euclidean remainder counts as zero.
const GCD_TOL: f64 = 1e-9;
/// Roots closer than `CLUSTER_RADIUS · (1 + |root|)` are merged.
pub const CLUSTER_RADIUS: f64 = 1e-8;
/// Imaginary parts below `REAL_TOL · (1 + |root|)` are snapped to zero.
const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

impl Root {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn is_real(&self) -> bool {
        self.im == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Multiplicity of the root nearest to `z`, if one lies within `tol`.
    pub fn multiplicity_near(&self, z: Complex64, tol: f64) -> Option<usize> {
        self.roots
            .iter()
            .find(|r| (r.value() - z).norm() <= tol)
            .map(|r| r.multiplicity)
    }
}

/// All complex roots of `poly` with multiplicities.
pub fn find_roots(poly: &Polynomial) -> Result<RootSet, LaplaceError> {
    let degree = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(LaplaceError::NumericFailure {
                reason: "root finding needs degree >= 1".into(),
                residual: poly.clone(),
            })
        }
    };
    // real roots and upper-half-plane representatives of conjugate pairs
    let mut real: Vec<(Complex64, usize)> = Vec::new();
    let mut upper: Vec<(Complex64, usize)> = Vec::new();

    let zeros = poly.coeffs().iter().take_while(|&&c| c == 0.0).count();
    if zeros > 0 {
        real.push((Complex64::new(0.0, 0.0), zeros));
    }
    let rest = Polynomial::new(poly.coeffs()[zeros..].to_vec()).monic();

    if rest.degree().unwrap_or(0) >= 1 {
        for (factor, mult) in square_free_factors(&rest) {
            let (re, up) = pair_conjugates(simple_roots(&factor)?, poly)?;
            real.extend(re.into_iter().map(|x| (Complex64::new(x, 0.0), mult)));
            upper.extend(up.into_iter().map(|z| (z, mult)));
        }
    }

    let mut roots: Vec<Root> = merge_clusters(real)
        .into_iter()
        .map(|(z, m)| Root { re: z.re, im: 0.0, multiplicity: m })
        .collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut pairs = merge_clusters(upper);
    pairs.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    for (z, m) in pairs {
        roots.push(Root { re: z.re, im: z.im, multiplicity: m });
        roots.push(Root { re: z.re, im: -z.im, multiplicity: m });
    }
    let set = RootSet { roots };
    debug_assert_eq!(set.total_multiplicity(), degree);
    Ok(set)
}

fn normalized(p: &Polynomial) -> Polynomial {
    let n = p.norm_inf();
    if n == 0.0 {
        p.clone()
    } else {
        p.scale(1.0 / n)
    }
}

/// Monic gcd; remainders below `GCD_TOL` (relative) count as zero.
pub(crate) fn approx_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut x = normalized(a);
    let mut y = normalized(b);
    if x.degree() < y.degree() {
        std::mem::swap(&mut x, &mut y);
    }
    loop {
        if y.is_zero() {
            return x.monic();
        }
        if y.degree() == Some(0) {
            return Polynomial::constant(1.0);
        }
        let (_, rem) = x.div_rem(&y);
        if rem.norm_inf() <= GCD_TOL * x.norm_inf().max(y.norm_inf()) {
            return y.monic();
        }
        x = y;
        y = normalized(&rem);
    }
}

/// `a - b`, or exactly zero when the difference is rounding noise relative to the operands.
fn negligible_difference(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let d = a - b;
    if d.norm_inf() <= GCD_TOL * a.norm_inf().max(b.norm_inf()) {
        Polynomial::zero()
    } else {
        d
    }
}

fn exact_quotient(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.div_rem(b).0
}

/// Yun's square-free decomposition of a monic polynomial: `(factor, multiplicity)` pairs.
///
/// Falls back to treating `poly` as square-free when the recombined product does not
/// reproduce it.
pub(crate) fn square_free_factors(poly: &Polynomial) -> Vec<(Polynomial, usize)> {
    let fallback = vec![(poly.clone(), 1)];
    let deriv = poly.derivative();
    let c = approx_gcd(poly, &deriv);
    if c.degree() == Some(0) {
        return fallback;
    }
    let mut w = exact_quotient(poly, &c);
    let mut y = exact_quotient(&deriv, &c);
    let mut z = negligible_difference(&y, &w.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while w.degree().unwrap_or(0) >= 1 && i <= poly.degree().unwrap_or(0) {
        let g = approx_gcd(&w, &z);
        if g.degree().unwrap_or(0) >= 1 {
            out.push((g.clone(), i));
        }
        w = exact_quotient(&w, &g);
        y = exact_quotient(&z, &g);
        z = negligible_difference(&y, &w.derivative());
        i += 1;
    }

    let total: usize = out.iter().map(|(f, m)| f.degree().unwrap_or(0) * m).sum();
    if total != poly.degree().unwrap_or(0) {
        return fallback;
    }
    let mut product = Polynomial::constant(1.0);
    for (f, m) in &out {
        for _ in 0..*m {
            product = &product * f;
        }
    }
    let err = (&product - poly).norm_inf();
    if err > 1e-7 * poly.norm_inf().max(1.0) {
        return fallback;
    }
    out
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of a square-free polynomial by Aberth–Ehrlich iteration plus Newton polish.
fn simple_roots(poly: &Polynomial) -> Result<Vec<Complex64>, LaplaceError> {
    let poly = poly.monic();
    let n = poly.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Complex64::new(-poly.coeff(0), 0.0)]);
    }
    let coeffs: Vec<Complex64> = poly.coeffs().iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let abs_coeffs: Vec<f64> = poly.coeffs().iter().map(|c| c.abs()).collect();

    // initial guesses on a circle around the centroid
    let center = -poly.coeff(n - 1) / n as f64;
    let shifted = Polynomial::new(
        poly.taylor_at(Complex64::new(center, 0.0)).iter().map(|c| c.re).collect(),
    );
    let radius = (0..n)
        .map(|k| (shifted.coeff(k).abs()).powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(&coeffs, z[i]);
            let bound = abs_coeffs
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * z[i].norm() + c);
            if p.norm() <= 4.0 * f64::EPSILON * bound {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
            } else {
                let bump = Complex64::new(1e-3, 1e-3) * (1.0 + z[i].norm());
                z[i] += bump;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }
    if !done.iter().all(|&d| d) {
        return Err(LaplaceError::NumericFailure {
            reason: format!("Aberth iteration did not converge in {MAX_ITERATIONS} sweeps"),
            residual: poly,
        });
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner_with_derivative(&coeffs, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let next = *zi - p / dp;
            if !next.is_finite() {
                break;
            }
            *zi = next;
        }
    }
    Ok(z)
}

fn merge_clusters(found: Vec<(Complex64, usize)>) -> Vec<(Complex64, usize)> {
    let mut merged: Vec<(Complex64, usize)> = Vec::with_capacity(found.len());
    for (z, m) in found {
        match merged
            .iter_mut()
            .find(|(w, _)| (*w - z).norm() <= CLUSTER_RADIUS * (1.0 + z.norm()))
        {
            Some((w, mw)) => {
                *w = (*w * *mw as f64 + z * m as f64) / (*mw + m) as f64;
                *mw += m;
            }
            None => merged.push((z, m)),
        }
    }
    merged
}

/// Splits the roots of one real square-free factor into real roots (near-real ones
/// snapped to the axis) and upper-half-plane representatives, each averaged with the
/// closest lower-half-plane partner so that conjugates are exact.
fn pair_conjugates(
    found: Vec<Complex64>,
    poly: &Polynomial,
) -> Result<(Vec<f64>, Vec<Complex64>), LaplaceError> {
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in found {
        if z.im.abs() <= REAL_TOL * (1.0 + z.norm()) {
            real.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    let unpaired = || LaplaceError::NumericFailure {
        reason: "complex roots do not pair into conjugates".into(),
        residual: poly.clone(),
    };
    if upper.len() != lower.len() {
        return Err(unpaired());
    }
    let mut pairs = Vec::with_capacity(upper.len());
    for z in upper {
        let idx = lower
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.conj() - z).norm().total_cmp(&(b.1.conj() - z).norm()))
            .map(|(i, _)| i)
            .ok_or_else(unpaired)?;
        let w = lower.swap_remove(idx);
        pairs.push(Complex64::new(0.5 * (z.re + w.re), 0.5 * (z.im - w.im)));
    }
    Ok((real, pairs))
}
