use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    None,
    Cos,
    Sin,
}

/// `c · t^m · e^{alpha·t} · phase(beta·t)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalTerm {
    pub c: f64,
    pub m: u32,
    pub alpha: f64,
    pub beta: f64,
    pub phase: Phase,
}

impl SignalTerm {
    pub fn new(c: f64, m: u32, alpha: f64, beta: f64, phase: Phase) -> Self {
        SignalTerm { c, m, alpha, beta, phase }
    }

    /// `c · t^m · e^{alpha·t}`
    pub fn exp(c: f64, m: u32, alpha: f64) -> Self {
        SignalTerm::new(c, m, alpha, 0.0, Phase::None)
    }

    /// Canonical form: `beta >= 0`, no oscillation tag when `beta == 0`.
    /// `None` when the term vanishes identically.
    fn normalized(self) -> Option<SignalTerm> {
        let mut t = self;
        if t.beta < 0.0 {
            t.beta = -t.beta;
            if t.phase == Phase::Sin {
                t.c = -t.c;
            }
        }
        match t.phase {
            Phase::None => t.beta = 0.0,
            Phase::Cos if t.beta == 0.0 => t.phase = Phase::None,
            Phase::Sin if t.beta == 0.0 => return None,
            _ => {}
        }
        if t.c == 0.0 {
            return None;
        }
        Some(t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let osc = match self.phase {
            Phase::None => 1.0,
            Phase::Cos => (self.beta * t).cos(),
            Phase::Sin => (self.beta * t).sin(),
        };
        self.c * t.powi(self.m as i32) * (self.alpha * t).exp() * osc
    }
}

/// Finite sum of exponential-polynomial terms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<SignalTerm>", into = "Vec<SignalTerm>")]
pub struct ClosedFormSignal {
    terms: Vec<SignalTerm>,
}

impl From<Vec<SignalTerm>> for ClosedFormSignal {
    fn from(terms: Vec<SignalTerm>) -> Self {
        ClosedFormSignal::new(terms)
    }
}

impl From<ClosedFormSignal> for Vec<SignalTerm> {
    fn from(s: ClosedFormSignal) -> Self {
        s.terms
    }
}

impl ClosedFormSignal {
    pub fn new(terms: Vec<SignalTerm>) -> Self {
        ClosedFormSignal { terms: terms.into_iter().filter_map(SignalTerm::normalized).collect() }
    }

    pub fn zero() -> Self {
        ClosedFormSignal { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        ClosedFormSignal::new(vec![SignalTerm::exp(c, 0, 0.0)])
    }

    pub fn terms(&self) -> &[SignalTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Direct summation in term order.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for term in &self.terms {
            acc += term.eval(t);
        }
        acc
    }

    pub fn scale(&self, k: f64) -> ClosedFormSignal {
        ClosedFormSignal::new(
            self.terms.iter().map(|t| SignalTerm { c: t.c * k, ..*t }).collect(),
        )
    }

    pub fn add(&self, other: &ClosedFormSignal) -> ClosedFormSignal {
        ClosedFormSignal::new(self.terms.iter().chain(other.terms.iter()).copied().collect())
    }

    pub fn derivative(&self) -> ClosedFormSignal {
        let mut out = Vec::with_capacity(self.terms.len() * 3);
        for t in &self.terms {
            if t.m > 0 {
                out.push(SignalTerm { c: t.c * t.m as f64, m: t.m - 1, ..*t });
            }
            out.push(SignalTerm { c: t.c * t.alpha, ..*t });
            match t.phase {
                Phase::None => {}
                Phase::Cos => out.push(SignalTerm { c: -t.c * t.beta, phase: Phase::Sin, ..*t }),
                Phase::Sin => out.push(SignalTerm { c: t.c * t.beta, phase: Phase::Cos, ..*t }),
            }
        }
        ClosedFormSignal::new(out)
    }

    /// Largest real growth rate over the terms (`-inf` for the zero signal).
    pub fn exponential_order(&self) -> f64 {
        self.terms.iter().map(|t| t.alpha).fold(f64::NEG_INFINITY, f64::max)
    }
}

impl fmt::Display for ClosedFormSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.c)?;
            if t.m > 0 {
                write!(f, "·t^{}", t.m)?;
            }
            if t.alpha != 0.0 {
                write!(f, "·e^({}t)", t.alpha)?;
            }
            match t.phase {
                Phase::None => {}
                Phase::Cos => write!(f, "·cos({}t)", t.beta)?,
                Phase::Sin => write!(f, "·sin({}t)", t.beta)?,
            }
        }
        Ok(())
    }
}
