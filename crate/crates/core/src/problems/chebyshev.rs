//! Chebyshev trial polynomial fitting.
//!
//! A polynomial of degree `n` must stay inside the band `|f(x)| <= 1` on
//! `[-1, 1]` and must not fall below (for odd `n` on the left flank: rise
//! above) the Chebyshev polynomial `T_n` on the flanks `1 <= |x| <= 1.2`.
//! The objective is the total area by which the graph leaves that region,
//! integrated with the composite trapezoid rule. `T_n` itself scores zero.

use crate::error::{Error, Result};
use crate::problem::{Bounds, Problem};

pub const DEFAULT_DEGREE: usize = 8;
pub const DEFAULT_RESOLUTION: usize = 1000;
pub const COEFFICIENT_BOUND: f64 = 512.0;
pub const FLANK_EDGE: f64 = 1.2;
pub const SUCCESS_THRESHOLD: f64 = 1e-5;

/// `T_n(x)` by the three-term recurrence.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Power-basis coefficients of `T_n`, ascending powers.
pub fn chebyshev_coefficients(n: usize) -> Vec<f64> {
    let mut prev = vec![0.0; n + 1];
    prev[0] = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0; n + 1];
    cur[1] = 1.0;
    for _ in 1..n {
        let mut next = vec![0.0; n + 1];
        for k in 0..n {
            next[k + 1] += 2.0 * cur[k];
        }
        for k in 0..=n {
            next[k] -= prev[k];
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Horner evaluation, ascending coefficients.
pub fn polynomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

#[derive(Debug, Clone)]
struct Segment {
    xs: Vec<f64>,
    /// Lower envelope on the flanks, `None` for the central band.
    envelope: Option<Vec<f64>>,
    sign: f64,
    h: f64,
}

#[derive(Debug, Clone)]
pub struct ChebyshevProblem {
    degree: usize,
    resolution: usize,
    bounds: Bounds,
    segments: Vec<Segment>,
}

impl ChebyshevProblem {
    pub fn new(degree: usize, resolution: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ConfigInvalid("degree must be positive".into()));
        }
        if resolution < 2 {
            return Err(Error::ConfigInvalid("resolution must be at least 2".into()));
        }
        let grid = |a: f64, b: f64| -> Vec<f64> {
            (0..resolution)
                .map(|k| a + (b - a) * k as f64 / (resolution - 1) as f64)
                .collect()
        };
        let flank = |a: f64, b: f64| {
            let xs = grid(a, b);
            let envelope: Vec<f64> = xs.iter().map(|&x| chebyshev_t(degree, x)).collect();
            let sign = chebyshev_t(degree, a.abs().max(b.abs()) * a.signum()).signum();
            Segment {
                xs,
                envelope: Some(envelope),
                sign,
                h: (b - a) / (resolution - 1) as f64,
            }
        };
        let segments = vec![
            flank(-FLANK_EDGE, -1.0),
            Segment {
                xs: grid(-1.0, 1.0),
                envelope: None,
                sign: 1.0,
                h: 2.0 / (resolution - 1) as f64,
            },
            flank(1.0, FLANK_EDGE),
        ];
        Ok(Self {
            degree,
            resolution,
            bounds: Bounds::uniform(degree + 1, -COEFFICIENT_BOUND, COEFFICIENT_BOUND)?,
            segments,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Integrated exceedance of the polynomial with the given coefficients.
    pub fn try_objective(&self, coeffs: &[f64]) -> Result<f64> {
        if coeffs.len() != self.degree + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.degree + 1,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(self.area(coeffs))
    }

    fn area(&self, coeffs: &[f64]) -> f64 {
        let mut total = 0.0;
        for seg in &self.segments {
            let excess = |k: usize| {
                let f = polynomial(coeffs, seg.xs[k]);
                match &seg.envelope {
                    None => (f.abs() - 1.0).max(0.0),
                    Some(env) => (seg.sign * (env[k] - f)).max(0.0),
                }
            };
            let n = seg.xs.len();
            let mut sum = 0.5 * (excess(0) + excess(n - 1));
            for k in 1..n - 1 {
                sum += excess(k);
            }
            total += sum * seg.h;
        }
        total
    }
}

impl Default for ChebyshevProblem {
    fn default() -> Self {
        Self::new(DEFAULT_DEGREE, DEFAULT_RESOLUTION).expect("valid defaults")
    }
}

impl Problem for ChebyshevProblem {
    fn name(&self) -> &str {
        "chebyshev"
    }

    fn dimension(&self) -> usize {
        self.degree + 1
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn objective(&self, genes: &[f64]) -> f64 {
        self.area(genes)
    }

    fn default_threshold(&self) -> f64 {
        SUCCESS_THRESHOLD
    }
}
