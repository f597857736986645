//! Real-coded augmented simulated annealing.
//!
//! A real-coded GA whose replacements are governed by the Metropolis rule.
//! Parents come from normalized geometric ranking, children from a pool of
//! eight real-valued operators picked by fixed probabilities. A child that
//! duplicates a population member (within `precision`) is discarded before
//! evaluation. The temperature drops by `T_mult` after every stage of
//! `success_max` acceptances or `counter_max` steps; once it falls below
//! `T_min` the worse half of the population is re-randomized and the
//! temperature returns to `T_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Bounds, Chromosome, Evaluator, Halt, Population};
use crate::rng::RngStream;

/// The eight real-valued operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    UniformMutation,
    BoundaryMutation,
    NonUniformMutation,
    MultiNonUniformMutation,
    SimpleCrossover,
    SimpleArithmeticCrossover,
    WholeArithmeticCrossover,
    HeuristicCrossover,
}

impl Operator {
    pub const ALL: [Operator; 8] = [
        Self::UniformMutation,
        Self::BoundaryMutation,
        Self::NonUniformMutation,
        Self::MultiNonUniformMutation,
        Self::SimpleCrossover,
        Self::SimpleArithmeticCrossover,
        Self::WholeArithmeticCrossover,
        Self::HeuristicCrossover,
    ];

    /// Number of parents consumed.
    pub fn arity(self) -> usize {
        match self {
            Self::UniformMutation
            | Self::BoundaryMutation
            | Self::NonUniformMutation
            | Self::MultiNonUniformMutation => 1,
            Self::SimpleCrossover | Self::SimpleArithmeticCrossover | Self::WholeArithmeticCrossover => 2,
            Self::HeuristicCrossover => 3,
        }
    }
}

/// Identity tolerance of step 4a.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Precision {
    Uniform(f64),
    /// One grid step per variable.
    Grid,
    PerVariable(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasaConfig {
    pub pop_size: usize,
    /// Probability of selecting the best individual.
    pub q: f64,
    /// Operator probabilities in `Operator::ALL` order.
    pub op_probs: [f64; 8],
    /// Shape parameter of non-uniform mutation.
    pub b: f64,
    pub t_frac: f64,
    pub t_frac_min: f64,
    pub t_mult: f64,
    pub success_max: usize,
    pub counter_max: usize,
    pub num_heu_max: usize,
    pub precision: Precision,
}

impl RasaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 3 {
            return Err(Error::PopulationTooSmall {
                needed: 3,
                got: self.pop_size,
            });
        }
        if self.op_probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::ConfigInvalid("negative operator probability".into()));
        }
        let sum: f64 = self.op_probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::ConfigInvalid(format!("operator probabilities sum to {sum}")));
        }
        if !(self.t_mult > 0.0 && self.t_mult < 1.0) {
            return Err(Error::ConfigInvalid(format!("T_mult = {} outside (0, 1)", self.t_mult)));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::ConfigInvalid(format!("q = {} outside (0, 1)", self.q)));
        }
        if !(self.t_frac > 0.0 && self.t_frac_min > 0.0 && self.t_frac_min < self.t_frac) {
            return Err(Error::ConfigInvalid("need 0 < T_frac_min < T_frac".into()));
        }
        if self.success_max == 0 || self.counter_max == 0 {
            return Err(Error::ConfigInvalid("success_max and counter_max must be positive".into()));
        }
        Ok(())
    }
}

/// `p_r = q' (1 - q)^(r - 1)`, `q' = q / (1 - (1 - q)^size)`, rank `r = 1` best.
pub fn rank_probabilities(q: f64, size: usize) -> Vec<f64> {
    let norm = q / (1.0 - (1.0 - q).powi(size as i32));
    (0..size).map(|r| norm * (1.0 - q).powi(r as i32)).collect()
}

/// Samples a rank (0 = best) from the normalized geometric distribution.
pub fn sample_rank(q: f64, size: usize, rng: &mut RngStream) -> usize {
    if size <= 1 {
        return 0;
    }
    // inverse CDF of the truncated geometric distribution
    let u = rng.unit();
    let tail = 1.0 - (1.0 - q).powi(size as i32);
    let r = ((1.0 - u * tail).ln() / (1.0 - q).ln()).floor() as usize;
    r.min(size - 1)
}

/// Population index picked by normalized geometric ranking.
pub fn geometric_rank_select(fitness: &[f64], q: f64, rng: &mut RngStream) -> usize {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|a, b| fitness[*a].total_cmp(&fitness[*b]));
    order[sample_rank(q, fitness.len(), rng)]
}

/// Accept iff `u(0, 1) <= exp((old - new) / T)`.
pub fn metropolis_replace(old: f64, new: f64, t: f64, rng: &mut RngStream) -> bool {
    if new <= old {
        return true;
    }
    rng.unit() <= ((old - new) / t).exp()
}

fn identical(a: &[f64], b: &[f64], precision: &[f64]) -> bool {
    a.iter().zip(b).zip(precision).all(|((x, y), p)| (x - y).abs() < *p)
}

/// True when some member matches `candidate` within `precision[j]` in every coordinate.
pub fn identity_guard(candidate: &[f64], members: &[Chromosome], precision: &[f64]) -> bool {
    members.iter().any(|m| identical(m, candidate, precision))
}

/// The guard as applied to a replacement: the parent about to be replaced
/// is ignored, since overwriting it cannot create a duplicate.
pub fn duplicates_other_member(candidate: &[f64], members: &[Chromosome], parent: usize, precision: &[f64]) -> bool {
    members
        .iter()
        .enumerate()
        .any(|(i, m)| i != parent && identical(m, candidate, precision))
}

/// State shared by the operators: box and temperature ratio.
pub struct OperatorContext<'a> {
    pub bounds: &'a Bounds,
    /// `T_t / T_0`.
    pub temperature_ratio: f64,
    pub b: f64,
    pub num_heu_max: usize,
}

pub fn uniform_mutation(c: &[f64], ctx: &OperatorContext<'_>, rng: &mut RngStream) -> Chromosome {
    let k = rng.index(c.len());
    let mut out: Chromosome = c.to_vec().into();
    out[k] = rng.uniform(ctx.bounds.lower()[k], ctx.bounds.upper()[k]);
    out
}

/// Sets one coordinate to its lower bound when `p < 0.5`, upper otherwise.
pub fn boundary_mutation_at(c: &[f64], k: usize, p: f64, bounds: &Bounds) -> Chromosome {
    let mut out: Chromosome = c.to_vec().into();
    out[k] = if p < 0.5 { bounds.lower()[k] } else { bounds.upper()[k] };
    out
}

pub fn boundary_mutation(c: &[f64], ctx: &OperatorContext<'_>, rng: &mut RngStream) -> Chromosome {
    let k = rng.index(c.len());
    let p = rng.unit();
    boundary_mutation_at(c, k, p, ctx.bounds)
}

fn non_uniform_step(x: f64, k: usize, ctx: &OperatorContext<'_>, rng: &mut RngStream) -> f64 {
    let p = rng.unit();
    let f = rng.unit() * ctx.temperature_ratio.powf(ctx.b);
    if p < 0.5 {
        x + (ctx.bounds.lower()[k] - x) * f
    } else {
        x + (ctx.bounds.upper()[k] - x) * f
    }
}

pub fn non_uniform_mutation(c: &[f64], ctx: &OperatorContext<'_>, rng: &mut RngStream) -> Chromosome {
    let k = rng.index(c.len());
    let mut out: Chromosome = c.to_vec().into();
    out[k] = non_uniform_step(c[k], k, ctx, rng);
    out
}

pub fn multi_non_uniform_mutation(c: &[f64], ctx: &OperatorContext<'_>, rng: &mut RngStream) -> Chromosome {
    c.iter()
        .enumerate()
        .map(|(k, &x)| non_uniform_step(x, k, ctx, rng))
        .collect::<Vec<_>>()
        .into()
}

/// Swaps the tails from 1-based cut position `k` on.
pub fn simple_crossover_at(a: &[f64], b: &[f64], k: usize) -> (Chromosome, Chromosome) {
    let cut = k.saturating_sub(1).min(a.len());
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x[cut..].copy_from_slice(&b[cut..]);
    y[cut..].copy_from_slice(&a[cut..]);
    (x.into(), y.into())
}

pub fn simple_crossover(a: &[f64], b: &[f64], rng: &mut RngStream) -> (Chromosome, Chromosome) {
    let k = rng.int_inclusive(1, a.len() as i64) as usize;
    simple_crossover_at(a, b, k)
}

/// Convex blend of the coordinates selected by `mask` with weight `p`.
pub fn arithmetic_crossover_with(a: &[f64], b: &[f64], p: f64, mask: impl Fn(usize) -> bool) -> (Chromosome, Chromosome) {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    for l in 0..a.len() {
        if mask(l) {
            x[l] = p * a[l] + (1.0 - p) * b[l];
            y[l] = p * b[l] + (1.0 - p) * a[l];
        }
    }
    (x.into(), y.into())
}

pub fn simple_arithmetic_crossover(a: &[f64], b: &[f64], rng: &mut RngStream) -> (Chromosome, Chromosome) {
    let k = rng.index(a.len());
    let p = rng.unit();
    arithmetic_crossover_with(a, b, p, |l| l == k)
}

pub fn whole_arithmetic_crossover(a: &[f64], b: &[f64], rng: &mut RngStream) -> (Chromosome, Chromosome) {
    let p = rng.unit();
    arithmetic_crossover_with(a, b, p, |_| true)
}

/// `CH_i + p (CH_j - CH_k)`, redrawing `p` until the child is inside the
/// box. After `num_heu_max` failures the first parent is returned unchanged.
pub fn heuristic_crossover(
    i: &[f64],
    j: &[f64],
    k: &[f64],
    ctx: &OperatorContext<'_>,
    rng: &mut RngStream,
) -> Chromosome {
    for _ in 0..ctx.num_heu_max.max(1) {
        let p = rng.unit();
        let child: Vec<f64> = i
            .iter()
            .zip(j.iter().zip(k))
            .map(|(a, (b, c))| a + p * (b - c))
            .collect();
        if ctx.bounds.contains(&child) {
            return child.into();
        }
    }
    i.to_vec().into()
}

/// Orders the heuristic parents `[i, j, k]` so that `j` is at least as fit
/// as `k`: the difference then points from the worse towards the fitter one.
pub fn orient_heuristic(chosen: &mut [usize], fitness: &[f64]) {
    if chosen.len() == 3 && fitness[chosen[2]] < fitness[chosen[1]] {
        chosen.swap(1, 2);
    }
}

/// Picks an operator by cumulative probability.
pub fn pick_operator(probs: &[f64; 8], rng: &mut RngStream) -> Operator {
    let u = rng.unit();
    let mut acc = 0.0;
    for (op, p) in Operator::ALL.iter().zip(probs) {
        acc += p;
        if u < acc {
            return *op;
        }
    }
    // rounding slack: last operator with positive probability
    let last = probs.iter().rposition(|p| *p > 0.0).unwrap_or(7);
    Operator::ALL[last]
}

/// Applies `op` to the selected parents; child `c` replaces parent `c`.
pub fn apply_operator(
    op: Operator,
    parents: &[&[f64]],
    ctx: &OperatorContext<'_>,
    rng: &mut RngStream,
) -> Vec<Chromosome> {
    match op {
        Operator::UniformMutation => vec![uniform_mutation(parents[0], ctx, rng)],
        Operator::BoundaryMutation => vec![boundary_mutation(parents[0], ctx, rng)],
        Operator::NonUniformMutation => vec![non_uniform_mutation(parents[0], ctx, rng)],
        Operator::MultiNonUniformMutation => vec![multi_non_uniform_mutation(parents[0], ctx, rng)],
        Operator::SimpleCrossover => {
            let (x, y) = simple_crossover(parents[0], parents[1], rng);
            vec![x, y]
        }
        Operator::SimpleArithmeticCrossover => {
            let (x, y) = simple_arithmetic_crossover(parents[0], parents[1], rng);
            vec![x, y]
        }
        Operator::WholeArithmeticCrossover => {
            let (x, y) = whole_arithmetic_crossover(parents[0], parents[1], rng);
            vec![x, y]
        }
        Operator::HeuristicCrossover => vec![heuristic_crossover(parents[0], parents[1], parents[2], ctx, rng)],
    }
}

/// Temperature bookkeeping of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealState {
    pub t: f64,
    pub t_max: f64,
    pub t_min: f64,
    pub accepted: usize,
    pub steps: usize,
}

impl AnnealState {
    /// `T_max = T_frac F_avg`, `T_min = T_frac_min F_avg`, with `F_avg` the
    /// absolute mean of the initial fitness (taken as 1 when it is zero).
    pub fn from_fitness(fitness: &[f64], cfg: &RasaConfig) -> Self {
        let mean = (fitness.iter().sum::<f64>() / fitness.len() as f64).abs();
        let scale = if mean > 0.0 && mean.is_finite() { mean } else { 1.0 };
        let t_max = cfg.t_frac * scale;
        Self {
            t: t_max,
            t_max,
            t_min: cfg.t_frac_min * scale,
            accepted: 0,
            steps: 0,
        }
    }

    pub fn stage_done(&self, cfg: &RasaConfig) -> bool {
        self.accepted >= cfg.success_max || self.steps >= cfg.counter_max
    }

    /// Cools by `T_mult`; returns true when reannealing is due.
    pub fn cool(&mut self, t_mult: f64) -> bool {
        self.t *= t_mult;
        self.accepted = 0;
        self.steps = 0;
        self.t < self.t_min
    }

    pub fn reanneal(&mut self) {
        self.t = self.t_max;
        self.accepted = 0;
        self.steps = 0;
    }
}

fn precision_vector(p: &Precision, ev: &Evaluator<'_>) -> Vec<f64> {
    let dim = ev.dimension();
    match p {
        Precision::Uniform(x) => vec![*x; dim],
        Precision::PerVariable(v) => v.clone(),
        Precision::Grid => match ev.problem().encoding() {
            crate::problem::Encoding::Grid { steps } => steps,
            crate::problem::Encoding::Continuous => vec![0.0; dim],
        },
    }
}

/// Operator dispatch counts, for diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RasaStats {
    pub dispatched: [u64; 8],
    pub vetoed: u64,
    pub accepted: u64,
    pub reannealings: u64,
}

/// Replaces the worse half of the population by fresh random members.
fn reanneal_population(pop: &mut Population, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> std::result::Result<(), Halt> {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|a, b| pop.fitness[*a].total_cmp(&pop.fitness[*b]));
    let keep = pop.len() - pop.len() / 2;
    for &i in &order[keep..] {
        let c = ev.bounds().sample(rng);
        let f = ev.evaluate(&c)?;
        pop.members[i] = c;
        pop.fitness[i] = f;
    }
    Ok(())
}

fn one_step(
    pop: &mut Population,
    cfg: &RasaConfig,
    state: &mut AnnealState,
    precision: &[f64],
    ev: &mut Evaluator<'_>,
    rng: &mut RngStream,
    stats: &mut RasaStats,
) -> std::result::Result<(), Halt> {
    state.steps += 1;
    let op = pick_operator(&cfg.op_probs, rng);
    stats.dispatched[op as usize] += 1;
    let mut chosen: Vec<usize> = Vec::with_capacity(3);
    while chosen.len() < op.arity() {
        let idx = geometric_rank_select(&pop.fitness, cfg.q, rng);
        if !chosen.contains(&idx) || pop.len() < op.arity() {
            chosen.push(idx);
        }
    }
    if op == Operator::HeuristicCrossover {
        orient_heuristic(&mut chosen, &pop.fitness);
    }
    let ctx = OperatorContext {
        bounds: ev.bounds(),
        temperature_ratio: state.t / state.t_max,
        b: cfg.b,
        num_heu_max: cfg.num_heu_max,
    };
    let parents: Vec<&[f64]> = chosen.iter().map(|&i| pop.members[i].genes()).collect();
    let children = apply_operator(op, &parents, &ctx, rng);
    for (child, &parent) in children.into_iter().zip(&chosen) {
        let f = ev.evaluate(&child)?;
        if duplicates_other_member(&child, &pop.members, parent, precision) {
            stats.vetoed += 1;
            continue;
        }
        if metropolis_replace(pop.fitness[parent], f, state.t, rng) {
            pop.members[parent] = child;
            pop.fitness[parent] = f;
            state.accepted += 1;
            stats.accepted += 1;
        }
    }
    Ok(())
}

/// Full annealing loop; returns dispatch statistics.
pub fn optimize_with_stats(cfg: &RasaConfig, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> Result<RasaStats> {
    cfg.validate()?;
    let precision = precision_vector(&cfg.precision, ev);
    if precision.len() != ev.dimension() {
        return Err(Error::DimensionMismatch {
            expected: ev.dimension(),
            got: precision.len(),
        });
    }
    let mut stats = RasaStats::default();
    let Ok(mut pop) = Population::random(cfg.pop_size, ev, rng) else {
        return Ok(stats);
    };
    let mut state = AnnealState::from_fitness(&pop.fitness, cfg);
    loop {
        while !state.stage_done(cfg) {
            if one_step(&mut pop, cfg, &mut state, &precision, ev, rng, &mut stats).is_err() {
                return Ok(stats);
            }
        }
        if state.cool(cfg.t_mult) {
            stats.reannealings += 1;
            if reanneal_population(&mut pop, ev, rng).is_err() {
                return Ok(stats);
            }
            state.reanneal();
        }
    }
}

pub fn optimize(cfg: &RasaConfig, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> Result<()> {
    optimize_with_stats(cfg, ev, rng).map(|_| ())
}
