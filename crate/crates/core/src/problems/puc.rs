//! Periodic unit cell reconstruction.
//!
//! Fiber centers inside an `H1 x H2` cell are placed so that the cell's
//! second-order intensity function `K(r)` reproduces a reference curve
//! `K0(r)` at a handful of radii. Distances use the nearest periodic image.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::problem::{Bounds, Problem};

pub const SUCCESS_THRESHOLD: f64 = 6e-5;
pub const DEFAULT_RADII: usize = 10;
/// Fiber radius of the bundled reference configuration.
pub const DEFAULT_FIBER_RADIUS: f64 = 3.0;

/// Bundled synthetic reference: ten fibers in a cell of side 25.8.
pub const BUILTIN_REFERENCE: &str = include_str!("../../data/puc_reference.txt");

/// Squared nearest-image distance on the torus.
fn periodic_dist2(a: (f64, f64), b: (f64, f64), h1: f64, h2: f64) -> f64 {
    let mut dx = (a.0 - b.0).abs() % h1;
    let mut dy = (a.1 - b.1).abs() % h2;
    dx = dx.min(h1 - dx);
    dy = dy.min(h2 - dy);
    dx * dx + dy * dy
}

fn check_cell(h1: f64, h2: f64) -> Result<()> {
    if !(h1 > 0.0 && h2 > 0.0) {
        return Err(Error::DegenerateCell(h1, h2));
    }
    Ok(())
}

/// `K(r_i) = A / N^2 * sum_k I_k(r_i)`, where `I_k(r)` counts the other
/// points within distance `r` of point `k`.
pub fn ripley_k(points: &[(f64, f64)], cell: (f64, f64), radii: &[f64]) -> Result<Vec<f64>> {
    let (h1, h2) = cell;
    check_cell(h1, h2)?;
    let mut counts = vec![0u64; radii.len()];
    let r2: Vec<f64> = radii.iter().map(|r| r * r).collect();
    for (k, a) in points.iter().enumerate() {
        for b in &points[k + 1..] {
            let d2 = periodic_dist2(*a, *b, h1, h2);
            for (c, lim) in counts.iter_mut().zip(&r2) {
                if d2 <= *lim {
                    // the pair counts once for each of its two endpoints
                    *c += 2;
                }
            }
        }
    }
    let n = points.len() as f64;
    let scale = if points.is_empty() { 0.0 } else { h1 * h2 / (n * n) };
    Ok(counts.into_iter().map(|c| scale * c as f64).collect())
}

/// `N_m` uniform radii `H/2 * i / N_m`, `i = 1..=N_m`, with `H = min(H1, H2)`.
pub fn uniform_radii(count: usize, h1: f64, h2: f64) -> Vec<f64> {
    let half = 0.5 * h1.min(h2);
    (1..=count).map(|i| half * i as f64 / count as f64).collect()
}

/// Pairs interleaved coordinates `x1, y1, x2, y2, ...` into points.
pub fn points_from_genes(genes: &[f64]) -> Vec<(f64, f64)> {
    genes.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

#[derive(Debug, Clone)]
pub struct PucProblem {
    n: usize,
    h1: f64,
    h2: f64,
    fiber_radius: f64,
    radii: Vec<f64>,
    k0: Vec<f64>,
    reference: Vec<(f64, f64)>,
    bounds: Bounds,
}

impl PucProblem {
    /// Builds the problem from a reference configuration; `K0` is the
    /// reference's own `K` at the given radii.
    pub fn from_reference(
        reference: Vec<(f64, f64)>,
        h1: f64,
        h2: f64,
        radii: Vec<f64>,
        fiber_radius: f64,
    ) -> Result<Self> {
        check_cell(h1, h2)?;
        if reference.is_empty() {
            return Err(Error::ConfigInvalid("reference has no fibers".into()));
        }
        let half = 0.5 * h1.min(h2);
        if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && *r <= half)) {
            return Err(Error::ConfigInvalid(format!("radii must lie in (0, {half}]")));
        }
        if reference
            .iter()
            .any(|(x, y)| !(0.0..=h1).contains(x) || !(0.0..=h2).contains(y))
        {
            return Err(Error::ConfigInvalid("reference point outside the cell".into()));
        }
        let k0 = ripley_k(&reference, (h1, h2), &radii)?;
        let n = reference.len();
        let (lower, upper): (Vec<f64>, Vec<f64>) =
            (0..n).flat_map(|_| [(0.0, h1), (0.0, h2)]).unzip();
        Ok(Self {
            n,
            h1,
            h2,
            fiber_radius,
            radii,
            k0,
            reference,
            bounds: Bounds::new(lower, upper)?,
        })
    }

    /// Parses the reference format: a header line `N H1 H2`, then `N` lines `x y`.
    pub fn parse_reference(text: &str) -> Result<(Vec<(f64, f64)>, f64, f64)> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty reference file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("header must be `N H1 H2`, got `{header}`")));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad fiber count `{}`", fields[0])))?;
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{s}`")))
        };
        let (h1, h2) = (num(fields[1])?, num(fields[2])?);
        let mut points = Vec::with_capacity(n);
        for line in lines.by_ref().take(n) {
            let xy: Vec<&str> = line.split_whitespace().collect();
            if xy.len() != 2 {
                return Err(Error::Parse(format!("expected `x y`, got `{line}`")));
            }
            points.push((num(xy[0])?, num(xy[1])?));
        }
        if points.len() != n {
            return Err(Error::Parse(format!("expected {n} points, found {}", points.len())));
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing lines after the point list".into()));
        }
        Ok((points, h1, h2))
    }

    pub fn from_reference_text(text: &str, radii_count: usize, fiber_radius: f64) -> Result<Self> {
        let (points, h1, h2) = Self::parse_reference(text)?;
        let radii = uniform_radii(radii_count, h1, h2);
        Self::from_reference(points, h1, h2, radii, fiber_radius)
    }

    pub fn from_reference_file(path: &Path, radii_count: usize, fiber_radius: f64) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_reference_text(&text, radii_count, fiber_radius)
    }

    /// Bundled ten-fiber reference with ten radii.
    pub fn builtin() -> Self {
        Self::from_reference_text(BUILTIN_REFERENCE, DEFAULT_RADII, DEFAULT_FIBER_RADIUS)
            .expect("bundled reference is valid")
    }

    pub fn fibers(&self) -> usize {
        self.n
    }

    pub fn cell(&self) -> (f64, f64) {
        (self.h1, self.h2)
    }

    pub fn fiber_radius(&self) -> f64 {
        self.fiber_radius
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn k0(&self) -> &[f64] {
        &self.k0
    }

    pub fn reference(&self) -> &[(f64, f64)] {
        &self.reference
    }

    /// Reference configuration flattened into genes.
    pub fn reference_genes(&self) -> Vec<f64> {
        self.reference.iter().flat_map(|&(x, y)| [x, y]).collect()
    }

    /// Fiber area fraction of the cell.
    pub fn volume_fraction(&self) -> f64 {
        self.n as f64 * PI * self.fiber_radius * self.fiber_radius / (self.h1 * self.h2)
    }

    /// `K` of the configuration encoded by `genes`.
    pub fn k_of(&self, genes: &[f64]) -> Vec<f64> {
        ripley_k(&points_from_genes(genes), (self.h1, self.h2), &self.radii)
            .expect("cell validated at construction")
    }

    /// `sum_i ((K0(r_i) - K(r_i)) / (pi r_i^2))^2`.
    pub fn mismatch(&self, k: &[f64]) -> f64 {
        self.k0
            .iter()
            .zip(k)
            .zip(&self.radii)
            .map(|((k0, k), r)| {
                let d = (k0 - k) / (PI * r * r);
                d * d
            })
            .sum()
    }

    pub fn try_objective(&self, genes: &[f64]) -> Result<f64> {
        if genes.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                got: genes.len(),
            });
        }
        Ok(self.mismatch(&self.k_of(genes)))
    }
}

impl Problem for PucProblem {
    fn name(&self) -> &str {
        "puc"
    }

    fn dimension(&self) -> usize {
        2 * self.n
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn objective(&self, genes: &[f64]) -> f64 {
        self.mismatch(&self.k_of(genes))
    }

    fn default_threshold(&self) -> f64 {
        SUCCESS_THRESHOLD
    }
}
