//! Shared optimization abstractions: chromosomes, bounds, encodings, the
//! evaluation budget and the counting evaluator every algorithm runs through.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Fixed-length vector of decision variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chromosome(Vec<f64>);

impl Chromosome {
    pub fn new(genes: Vec<f64>) -> Self {
        Self(genes)
    }

    pub fn genes(&self) -> &[f64] {
        &self.0
    }

    pub fn into_genes(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for Chromosome {
    fn from(genes: Vec<f64>) -> Self {
        Self(genes)
    }
}

impl Deref for Chromosome {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Chromosome {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// Per-variable box constraints, `lower[j] < upper[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidBounds(format!(
                "{} lower vs {} upper entries",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::InvalidBounds("zero-dimensional box".into()));
        }
        for (j, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::InvalidBounds(format!("variable {j}: [{l}, {u}]")));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `[lo, hi]` for every one of `dim` variables.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, j: usize) -> f64 {
        self.upper[j] - self.lower[j]
    }

    pub fn contains(&self, genes: &[f64]) -> bool {
        genes.len() == self.dim()
            && genes
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(g, (l, u))| (l..=u).contains(&g))
    }

    pub fn clamp_in_place(&self, genes: &mut [f64]) {
        for ((g, l), u) in genes.iter_mut().zip(&self.lower).zip(&self.upper) {
            *g = g.max(*l).min(*u);
        }
    }

    /// Uniform random point of the box.
    pub fn sample(&self, rng: &mut RngStream) -> Chromosome {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| rng.uniform(*l, *u))
            .collect::<Vec<_>>()
            .into()
    }
}

/// `min(U, max(L, gene))` per coordinate.
pub fn clamp(c: &Chromosome, bounds: &Bounds) -> Chromosome {
    let mut out = c.clone();
    bounds.clamp_in_place(&mut out);
    out
}

/// How a problem's variables are discretized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Encoding {
    Continuous,
    /// Variable `j` may only take multiples of `steps[j]`.
    Grid { steps: Vec<f64> },
}

/// Rounds every gene to the nearest multiple of its grid step, then clamps.
pub fn snap_to_grid(c: &Chromosome, steps: &[f64], bounds: &Bounds) -> Chromosome {
    let mut out = c.clone();
    snap_in_place(&mut out, steps, bounds);
    out
}

pub(crate) fn snap_in_place(genes: &mut [f64], steps: &[f64], bounds: &Bounds) {
    for (j, (g, s)) in genes.iter_mut().zip(steps).enumerate() {
        // pick the grid index inside the box first, so that clamping only
        // absorbs representation error and a second snap changes nothing
        let lo = (bounds.lower()[j] / s - 1e-9).ceil();
        let hi = (bounds.upper()[j] / s + 1e-9).floor();
        let k = (*g / s).round().clamp(lo, hi.max(lo));
        *g = (s * k).clamp(bounds.lower()[j], bounds.upper()[j]);
    }
}

/// Objective-function contract. All problems are minimized.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn dimension(&self) -> usize;

    fn bounds(&self) -> &Bounds;

    fn encoding(&self) -> Encoding {
        Encoding::Continuous
    }

    /// Objective value of an in-bounds (and, for grid problems, snapped) point.
    fn objective(&self, genes: &[f64]) -> f64;

    /// Default success threshold: a run succeeds once `value < threshold`.
    fn default_threshold(&self) -> f64;
}

/// Caps the number of objective invocations of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationBudget {
    max_calls: u64,
    calls_used: u64,
}

impl EvaluationBudget {
    pub fn new(max_calls: u64) -> Self {
        Self {
            max_calls,
            calls_used: 0,
        }
    }

    pub fn with_used(max_calls: u64, calls_used: u64) -> Self {
        Self {
            max_calls,
            calls_used: calls_used.min(max_calls),
        }
    }

    pub fn max_calls(&self) -> u64 {
        self.max_calls
    }

    pub fn calls_used(&self) -> u64 {
        self.calls_used
    }

    pub fn remaining(&self) -> u64 {
        self.max_calls - self.calls_used
    }

    pub fn exhausted(&self) -> bool {
        self.calls_used >= self.max_calls
    }

    fn consume(&mut self) -> Result<()> {
        if self.exhausted() {
            return Err(Error::BudgetExhausted);
        }
        self.calls_used += 1;
        Ok(())
    }
}

/// Evaluates `c` on `problem`, charging exactly one call to `budget`.
///
/// Grid-encoded problems see the snapped point; every problem sees a clamped one.
pub fn evaluate(problem: &dyn Problem, c: &[f64], budget: &mut EvaluationBudget) -> Result<f64> {
    let dim = problem.dimension();
    if c.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: c.len(),
        });
    }
    budget.consume()?;
    let mut point = c.to_vec();
    prepare(problem, &mut point);
    Ok(problem.objective(&point))
}

fn prepare(problem: &dyn Problem, point: &mut [f64]) {
    match problem.encoding() {
        Encoding::Continuous => problem.bounds().clamp_in_place(point),
        Encoding::Grid { steps } => snap_in_place(point, &steps, problem.bounds()),
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    Budget,
    Solved,
}

/// One point of a convergence trace: best value after `calls` evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub calls: u64,
    pub best: f64,
}

/// Counting evaluator owned by a single run. It is the only route from an
/// algorithm to the objective, so the call count it reports is exact.
pub struct Evaluator<'a> {
    problem: &'a dyn Problem,
    budget: EvaluationBudget,
    threshold: f64,
    steps: Option<Vec<f64>>,
    best_value: f64,
    best: Option<Chromosome>,
    calls_at_success: Option<u64>,
    trace: Vec<TracePoint>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a dyn Problem, budget: EvaluationBudget, threshold: f64) -> Self {
        let steps = match problem.encoding() {
            Encoding::Continuous => None,
            Encoding::Grid { steps } => Some(steps),
        };
        Self {
            problem,
            budget,
            threshold,
            steps,
            best_value: f64::INFINITY,
            best: None,
            calls_at_success: None,
            trace: Vec::new(),
        }
    }

    pub fn problem(&self) -> &'a dyn Problem {
        self.problem
    }

    pub fn bounds(&self) -> &'a Bounds {
        self.problem.bounds()
    }

    pub fn dimension(&self) -> usize {
        self.problem.dimension()
    }

    pub fn budget(&self) -> &EvaluationBudget {
        &self.budget
    }

    pub fn calls(&self) -> u64 {
        self.budget.calls_used()
    }

    pub fn solved(&self) -> bool {
        self.calls_at_success.is_some()
    }

    pub fn best_value(&self) -> f64 {
        self.best_value
    }

    pub fn best(&self) -> Option<&Chromosome> {
        self.best.as_ref()
    }

    /// Evaluates one candidate. Refuses once the target has been reached or
    /// the budget is spent.
    pub fn evaluate(&mut self, genes: &[f64]) -> Result<f64, Halt> {
        assert_eq!(genes.len(), self.problem.dimension(), "chromosome length");
        if self.solved() {
            return Err(Halt::Solved);
        }
        if self.budget.consume().is_err() {
            return Err(Halt::Budget);
        }
        let mut point = genes.to_vec();
        match &self.steps {
            None => self.problem.bounds().clamp_in_place(&mut point),
            Some(steps) => snap_in_place(&mut point, steps, self.problem.bounds()),
        }
        let value = self.problem.objective(&point);
        if value < self.best_value {
            self.best_value = value;
            self.best = Some(point.into());
            self.trace.push(TracePoint {
                calls: self.budget.calls_used(),
                best: value,
            });
        }
        if value < self.threshold && self.calls_at_success.is_none() {
            self.calls_at_success = Some(self.budget.calls_used());
        }
        Ok(value)
    }

    pub fn into_record(self, seed: u64) -> RunRecord {
        RunRecord {
            seed,
            success: self.calls_at_success.is_some(),
            calls_at_success: self.calls_at_success,
            calls_used: self.budget.calls_used(),
            best_value: self.best_value,
            best_chromosome: self.best,
            trace: self.trace,
        }
    }
}

/// Outcome of one optimization trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub success: bool,
    pub calls_at_success: Option<u64>,
    pub calls_used: u64,
    pub best_value: f64,
    /// Absent only when the budget allowed no evaluation at all.
    pub best_chromosome: Option<Chromosome>,
    #[serde(skip)]
    pub trace: Vec<TracePoint>,
}

impl RunRecord {
    /// Fitness calls charged to this run: the call that first met the target
    /// for a success, the whole spent budget otherwise.
    pub fn calls(&self) -> u64 {
        self.calls_at_success.unwrap_or(self.calls_used)
    }
}

/// Evaluated population shared by the population-based algorithms.
#[derive(Debug, Clone, Default)]
pub struct Population {
    pub members: Vec<Chromosome>,
    pub fitness: Vec<f64>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, c: Chromosome, f: f64) {
        self.members.push(c);
        self.fitness.push(f);
    }

    /// Index of the lowest objective value (first one on ties).
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for (i, f) in self.fitness.iter().enumerate() {
            if *f < self.fitness[best] {
                best = i;
            }
        }
        best
    }

    pub fn best_fitness(&self) -> f64 {
        self.fitness[self.best_index()]
    }

    /// Uniform random population of `size` members, evaluated one by one.
    pub fn random(size: usize, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> Result<Self, Halt> {
        let mut pop = Population::default();
        for _ in 0..size {
            let c = ev.bounds().sample(rng);
            let f = ev.evaluate(&c)?;
            pop.push(c, f);
        }
        Ok(pop)
    }
}
