//! Differential evolution with best-individual attraction.
//!
//! Each chromosome gets one candidate replacement per generation,
//! `ch_i + F1 (ch_p - ch_q) + F2 (ch_best - ch_i)` on the coordinates of a
//! random subset `Lambda` and a copy of `ch_i` elsewhere. The candidate
//! replaces its parent only on strict improvement. There is no mutation and
//! no fitness-based parent selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Bounds, Chromosome, Evaluator, Halt, Population};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    pub pop_size: usize,
    pub f1: f64,
    pub f2: f64,
    /// Per-coordinate probability of joining `Lambda`.
    pub cr: f64,
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 {
            return Err(Error::PopulationTooSmall {
                needed: 4,
                got: self.pop_size,
            });
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::ConfigInvalid(format!("DE CR = {} outside [0, 1]", self.cr)));
        }
        if !(self.f1.is_finite() && self.f2.is_finite()) {
            return Err(Error::ConfigInvalid("DE F1/F2 must be finite".into()));
        }
        Ok(())
    }
}

/// Draws `Lambda`: each coordinate independently with probability `cr`,
/// one random coordinate when the draw comes out empty.
pub fn draw_lambda(n: usize, cr: f64, rng: &mut RngStream) -> Vec<bool> {
    let mut mask: Vec<bool> = (0..n).map(|_| rng.unit() < cr).collect();
    if !mask.iter().any(|&m| m) {
        mask[rng.index(n)] = true;
    }
    mask
}

/// The differential operator with explicit partners and coordinate mask.
pub fn differential(
    parent: &[f64],
    p: &[f64],
    q: &[f64],
    best: &[f64],
    lambda: &[bool],
    f1: f64,
    f2: f64,
) -> Chromosome {
    parent
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            if lambda[j] {
                x + f1 * (p[j] - q[j]) + f2 * (best[j] - x)
            } else {
                x
            }
        })
        .collect::<Vec<_>>()
        .into()
}

/// Candidate replacement of member `i`; `p`, `q` are drawn distinct from
/// each other and from `i`. The result is clamped to `bounds`.
pub fn de_offspring(
    i: usize,
    population: &[Chromosome],
    best: usize,
    cfg: &DeConfig,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Result<Chromosome> {
    if population.len() < 3 {
        return Err(Error::PopulationTooSmall {
            needed: 3,
            got: population.len(),
        });
    }
    let pq = rng.distinct_indices(population.len(), 2, &[i]);
    let parent = &population[i];
    let lambda = draw_lambda(parent.len(), cfg.cr, rng);
    let mut child = differential(
        parent,
        &population[pq[0]],
        &population[pq[1]],
        &population[best],
        &lambda,
        cfg.f1,
        cfg.f2,
    );
    bounds.clamp_in_place(&mut child);
    Ok(child)
}

/// One synchronous generation: every candidate is built from the population
/// as it stood at the start of the generation.
pub fn de_generation(
    pop: &mut Population,
    cfg: &DeConfig,
    ev: &mut Evaluator<'_>,
    rng: &mut RngStream,
) -> std::result::Result<(), Halt> {
    let best = pop.best_index();
    let mut replacements = Vec::new();
    let mut halted = None;
    for i in 0..pop.len() {
        let child = de_offspring(i, &pop.members, best, cfg, ev.bounds(), rng)
            .expect("population size validated");
        match ev.evaluate(&child) {
            Ok(f) => {
                if f < pop.fitness[i] {
                    replacements.push((i, child, f));
                }
            }
            Err(h) => {
                halted = Some(h);
                break;
            }
        }
    }
    for (i, c, f) in replacements {
        pop.members[i] = c;
        pop.fitness[i] = f;
    }
    match halted {
        Some(h) => Err(h),
        None => Ok(()),
    }
}

/// Runs until the evaluator reports success or an exhausted budget.
pub fn optimize(cfg: &DeConfig, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> Result<()> {
    cfg.validate()?;
    let Ok(mut pop) = Population::random(cfg.pop_size, ev, rng) else {
        return Ok(());
    };
    while de_generation(&mut pop, cfg, ev, rng).is_ok() {}
    Ok(())
}
