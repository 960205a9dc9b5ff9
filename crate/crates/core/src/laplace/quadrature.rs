//! Numeric fuzzy Laplace transform by adaptive Gauss–Kronrod quadrature, and the
//! absolute-value classification of fuzzy-valued functions.

use super::LaplaceError;

/// Required bound on the neglected tail `∫_T^∞`.
pub const TAIL_TOL: f64 = 1e-10;
const ABS_TOL: f64 = 1e-13;
const MAX_DEPTH: u32 = 40;
const INITIAL_PANELS: usize = 64;

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for Kronrod nodes 1, 3, 5, 7
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let centre = f(mid);
    let mut kronrod = KRONROD_WEIGHTS[7] * centre;
    let mut gauss = GAUSS_WEIGHTS[3] * centre;
    for i in 0..7 {
        let dx = half * KRONROD_NODES[i];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gauss_kronrod(f, a, b);
    if err <= tol || depth >= MAX_DEPTH {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive(f, a, mid, 0.5 * tol, depth + 1) + adaptive(f, mid, b, 0.5 * tol, depth + 1)
}

/// `∫_a^b f(t) dt` to roughly `ABS_TOL` per initial panel.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let width = (b - a) / INITIAL_PANELS as f64;
    (0..INITIAL_PANELS)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == INITIAL_PANELS { b } else { lo + width };
            adaptive(&f, lo, hi, ABS_TOL, 0)
        })
        .sum()
}

/// Truncation point for a function of exponential order `order` at transform variable `p`.
pub fn truncation_point(p: f64, order: f64) -> f64 {
    (40.0 / (p - order)).max(40.0)
}

fn transform_endpoint(
    f: impl Fn(f64) -> f64,
    p: f64,
    horizon: f64,
) -> Result<f64, LaplaceError> {
    let weighted = |t: f64| (-p * t).exp() * f(t);
    // the integrand must have died out at the horizon
    let tail = weighted(horizon).abs().max(weighted(0.5 * horizon).abs() * (-0.5 * horizon).exp());
    if !tail.is_finite() || tail * horizon > TAIL_TOL {
        return Err(LaplaceError::Divergence { p, horizon, tail });
    }
    let value = integrate(weighted, 0.0, horizon);
    if !value.is_finite() {
        return Err(LaplaceError::Divergence { p, horizon, tail: value });
    }
    Ok(value)
}

/// Lower and upper Laplace transforms at `p` of the r-level endpoints of a
/// fuzzy-valued function of declared exponential order `order`.
pub fn numeric_flt(
    lower: impl Fn(f64, f64) -> f64,
    upper: impl Fn(f64, f64) -> f64,
    p: f64,
    r: f64,
    order: f64,
) -> Result<(f64, f64), LaplaceError> {
    if !(p > order) {
        return Err(LaplaceError::OrderViolation { p, order });
    }
    let horizon = truncation_point(p, order);
    let lo = transform_endpoint(|t| lower(t, r), p, horizon)?;
    let up = transform_endpoint(|t| upper(t, r), p, horizon)?;
    Ok((lo, up))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsoluteClass {
    /// `lower(t; r) >= 0` everywhere sampled.
    Absolute1,
    /// `upper(t; r) <= 0` everywhere sampled.
    Absolute2,
    Neither,
}

/// Sign classification of a fuzzy-valued function on a `t × r` sample grid.
/// The identically-zero function counts as `Absolute1`.
pub fn classify_absolute(
    lower: impl Fn(f64, f64) -> f64,
    upper: impl Fn(f64, f64) -> f64,
    t_grid: &[f64],
    r_grid: &[f64],
) -> AbsoluteClass {
    let samples = || t_grid.iter().flat_map(|&t| r_grid.iter().map(move |&r| (t, r)));
    if samples().all(|(t, r)| lower(t, r) >= 0.0) {
        AbsoluteClass::Absolute1
    } else if samples().all(|(t, r)| upper(t, r) <= 0.0) {
        AbsoluteClass::Absolute2
    } else {
        AbsoluteClass::Neither
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_kronrod_exact_for_polynomials() {
        let v = integrate(|t| t * t * t - 2.0 * t, 0.0, 2.0);
        assert!((v - 0.0).abs() < 1e-13);
        let w = integrate(|t| t.powi(6), -1.0, 1.0);
        assert!((w - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn flt_of_fuzzy_exponential() {
        // (1+r, 2-r) e^t at p=2, r=0 -> (1, 2)
        let (lo, up) = numeric_flt(
            |t, r| (1.0 + r) * t.exp(),
            |t, r| (2.0 - r) * t.exp(),
            2.0,
            0.0,
            1.0,
        )
        .unwrap();
        assert!((lo - 1.0).abs() < 1e-8);
        assert!((up - 2.0).abs() < 1e-8);
    }

    #[test]
    fn flt_of_constant_and_ramp() {
        let (lo, up) = numeric_flt(|_, _| 1.0, |_, _| 1.0, 1.0, 0.5, 0.0).unwrap();
        assert!((lo - 1.0).abs() < 1e-8 && (up - 1.0).abs() < 1e-8);
        for &r in &[0.0, 0.3, 1.0] {
            let (lo, up) = numeric_flt(|t, r| r * t, |t, r| (2.0 - r) * t, 2.0, r, 0.0).unwrap();
            assert!((lo - r / 4.0).abs() < 1e-8);
            assert!((up - (2.0 - r) / 4.0).abs() < 1e-8);
        }
    }

    #[test]
    fn flt_divergence_is_reported() {
        let gauss_growth = |t: f64, _r: f64| (t * t).exp();
        assert!(matches!(
            numeric_flt(gauss_growth, gauss_growth, 2.0, 0.0, 1.0),
            Err(LaplaceError::Divergence { .. })
        ));
        assert!(matches!(
            numeric_flt(|t, _| t.exp(), |t, _| t.exp(), 0.5, 0.0, 1.0),
            Err(LaplaceError::OrderViolation { .. })
        ));
    }

    #[test]
    fn absolute_classes() {
        let ts: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let rs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        assert_eq!(
            classify_absolute(|t, r| (1.0 + r) * t.exp(), |t, r| (2.0 - r) * t.exp(), &ts, &rs),
            AbsoluteClass::Absolute1
        );
        assert_eq!(classify_absolute(|_, _| 0.0, |_, _| 0.0, &ts, &rs), AbsoluteClass::Absolute1);
        assert_eq!(
            classify_absolute(|_, r| -2.0 + r, |_, _| -1.0, &ts, &rs),
            AbsoluteClass::Absolute2
        );
        assert_eq!(
            classify_absolute(|_, r| r - 1.0, |_, r| 1.0 - r, &ts, &rs),
            AbsoluteClass::Neither
        );
    }
}
