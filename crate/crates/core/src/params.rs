use crate::error::{Error, Result};

/// Exponents and data size of the semilinear problem.
///
/// `s` is the auxiliary Sobolev order used for the negative-order
/// homogeneous norm that the solver records alongside the L² norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub n: usize,
    pub p: f64,
    pub gamma: f64,
    pub q: f64,
    pub epsilon: f64,
    pub s: f64,
}

impl ProblemParams {
    pub fn new(n: usize, p: f64, gamma: f64, q: f64, epsilon: f64) -> Result<Self> {
        let params = Self {
            n,
            p,
            gamma,
            q,
            epsilon,
            s: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = s;
        self
    }

    /// Every violated constraint, not just the first.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let nf = self.n as f64;
        if !(1..=4).contains(&self.n) {
            out.push(format!("n must satisfy 1 <= n <= 4, got {}", self.n));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            out.push(format!("p must satisfy p > 1, got {}", self.p));
        }
        if !(self.gamma >= 0.0 && self.gamma < nf) {
            out.push(format!(
                "gamma must satisfy 0 <= gamma < n = {}, got {}",
                self.n, self.gamma
            ));
        }
        if !(self.q > 0.0 && self.q < nf / 2.0) {
            out.push(format!(
                "q must satisfy 0 < q < n/2 = {}, got {}",
                nf / 2.0,
                self.q
            ));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            out.push(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !self.s.is_finite() {
            out.push(format!("s must be finite, got {}", self.s));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(v.join("; ")))
        }
    }
}
