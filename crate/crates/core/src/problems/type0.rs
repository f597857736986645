//! The single narrow-peak "type 0" function, `y0 (pi/2 - atan(|x - x0| / r0))`.
//!
//! It is a maximization task; the solver sees the gap to the known peak
//! height, `y0 atan(|x - x0| / r0)`, which is zero only at `x0`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::problem::{Bounds, Problem};
use crate::rng::RngStream;

pub const VARIABLE_BOUND: f64 = 400.0;
pub const MAX_PEAK_HEIGHT: f64 = 50.0;
pub const SUCCESS_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct Type0Problem {
    x0: Vec<f64>,
    y0: f64,
    r0: f64,
    bounds: Bounds,
}

impl Type0Problem {
    pub fn new(x0: Vec<f64>, y0: f64, r0: f64) -> Result<Self> {
        if !(r0 > 0.0) {
            return Err(Error::ConfigInvalid("r0 must be positive".into()));
        }
        let bounds = Bounds::uniform(x0.len(), -VARIABLE_BOUND, VARIABLE_BOUND)?;
        if !bounds.contains(&x0) {
            return Err(Error::ConfigInvalid("peak outside the search box".into()));
        }
        Ok(Self { x0, y0, r0, bounds })
    }

    /// Peak position uniform in the box, height `u(0, 50)`, `r0 = 1`.
    pub fn random_instance(dim: usize, rng: &mut RngStream) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ConfigInvalid("dimension must be at least 1".into()));
        }
        let x0 = (0..dim)
            .map(|_| rng.uniform(-VARIABLE_BOUND, VARIABLE_BOUND))
            .collect();
        let y0 = rng.uniform(0.0, MAX_PEAK_HEIGHT);
        Self::new(x0, y0, 1.0)
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn peak(&self) -> f64 {
        self.y0 * FRAC_PI_2
    }

    fn distance(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.x0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// The function value itself.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.y0 * (FRAC_PI_2 - (self.distance(x) / self.r0).atan())
    }

    /// Distance below the peak height.
    pub fn gap(&self, x: &[f64]) -> f64 {
        self.y0 * (self.distance(x) / self.r0).atan()
    }
}

impl Problem for Type0Problem {
    fn name(&self) -> &str {
        "type0"
    }

    fn dimension(&self) -> usize {
        self.x0.len()
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn objective(&self, genes: &[f64]) -> f64 {
        self.gap(genes)
    }

    fn default_threshold(&self) -> f64 {
        SUCCESS_THRESHOLD
    }
}
