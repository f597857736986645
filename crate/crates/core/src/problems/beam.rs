//! Reinforced concrete beam layout priced in CZK.
//!
//! One interior span of a continuous beam under uniform load. The span is
//! split into three bending parts (left end, middle, right end) that share
//! one top and one bottom bar diameter but carry their own bar counts, and
//! into three shear parts with their own stirrup spacing and a common
//! stirrup diameter. The objective is material cost plus one quadratic
//! penalty `w (phi / phi_max)^2` per violated limit. Limits cover bending,
//! ductility, bar spacing, two corner bars per face, shear, stirrup
//! spacing, span/depth ratio and part lengths.
//!
//! Design variables (18, all on grids):
//!
//! | index | variable                          | range         | step  |
//! |-------|-----------------------------------|---------------|-------|
//! | 0     | width `b` [m]                     | 0.15 .. 0.45  | 0.025 |
//! | 1     | height `h` [m]                    | 0.15 .. 0.85  | 0.025 |
//! | 2, 3  | top / bottom bar profile index    | 0 .. 15       | 1     |
//! | 4..=6 | top bar counts (left, mid, right) | 0 .. 15       | 1     |
//! | 7..=9 | bottom bar counts                 | 0 .. 15       | 1     |
//! | 10    | stirrup profile index             | 0 .. 3        | 1     |
//! | 11..=13 | stirrup spacings [m]            | 0.05 .. 0.40  | 0.025 |
//! | 14, 15 | left / right bending part length [m] | 0 .. 4     | 0.025 |
//! | 16, 17 | left / right shear part length [m]   | 0 .. 4     | 0.025 |

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Bounds, Encoding, Problem};

/// Longitudinal bar profiles [mm].
pub const BAR_DIAMETERS_MM: [f64; 16] = [
    6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 22.0, 25.0, 28.0, 32.0, 36.0, 40.0, 45.0, 50.0,
];
/// Stirrup profiles [mm].
pub const STIRRUP_DIAMETERS_MM: [f64; 4] = [6.0, 8.0, 10.0, 12.0];

pub const DIMENSION: usize = 18;
pub const GRID_STEP: f64 = 0.025;

const COVER: f64 = 0.03;
const STEEL_DENSITY: f64 = 7850.0;
const CONCRETE_WEIGHT: f64 = 25.0;
const DEAD_LOAD_FACTOR: f64 = 1.35;
/// `f_ck = 25 MPa` over `gamma_c = 1.5`, in kPa.
const F_CD: f64 = 25_000.0 / 1.5;
const F_CK_MPA: f64 = 25.0;
/// `f_yk = 500 MPa` over `gamma_s = 1.15`, in kPa.
const F_YD: f64 = 500_000.0 / 1.15;
const MAX_NEUTRAL_AXIS_RATIO: f64 = 0.45;
const MIN_CLEAR_SPACING: f64 = 0.02;
const SPAN_DEPTH_LIMIT: f64 = 26.0;
const MAX_STIRRUP_SPACING_RATIO: f64 = 0.75;
const STIRRUP_HOOKS: f64 = 0.2;
/// Bars per face needed to hold the stirrup corners.
const MIN_BARS_PER_FACE: f64 = 2.0;
/// Ratio reported for a limit whose capacity is zero.
const RATIO_CAP: f64 = 10.0;

pub const VAR_B: usize = 0;
pub const VAR_H: usize = 1;
pub const VAR_TOP_DIA: usize = 2;
pub const VAR_BOT_DIA: usize = 3;
pub const VAR_TOP_COUNT: usize = 4;
pub const VAR_BOT_COUNT: usize = 7;
pub const VAR_STIRRUP_DIA: usize = 10;
pub const VAR_SPACING: usize = 11;
pub const VAR_BEND_LEN: usize = 14;
pub const VAR_SHEAR_LEN: usize = 16;

/// Economic and loading parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamParams {
    /// Span between supports [m].
    pub span: f64,
    /// Design line load without self-weight [kN/m].
    pub load: f64,
    /// Concrete price [CZK / m^3].
    pub concrete_price: f64,
    /// Steel price [CZK / kg].
    pub steel_price: f64,
    /// Penalty weight `w_i`, shared by all limits [CZK].
    pub penalty_weight: f64,
}

impl Default for BeamParams {
    fn default() -> Self {
        Self {
            span: 6.0,
            load: 45.0,
            concrete_price: 3000.0,
            steel_price: 30.0,
            penalty_weight: 1000.0,
        }
    }
}

/// Limits checked for every design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Limit {
    Hogging(usize),
    Sagging(usize),
    Ductility(usize),
    CornerBars(usize),
    TopSpacing(usize),
    BottomSpacing(usize),
    Shear(usize),
    ShearCrushing(usize),
    StirrupSpacing(usize),
    Deflection,
    BendingParts,
    ShearParts,
}

/// One checked limit: demand `phi` against its allowable value `phi_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub limit: Limit,
    pub ratio: f64,
}

/// Penalty term of one limit: zero when satisfied, `w ratio^2` otherwise.
pub fn penalty(weight: f64, ratio: f64) -> f64 {
    if ratio <= 1.0 {
        0.0
    } else {
        weight * ratio * ratio
    }
}

fn ratio(demand: f64, capacity: f64) -> f64 {
    if demand <= 0.0 {
        0.0
    } else if capacity <= 0.0 {
        RATIO_CAP
    } else {
        (demand / capacity).min(RATIO_CAP)
    }
}

/// Decoded design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub b: f64,
    pub h: f64,
    pub top_dia: f64,
    pub bot_dia: f64,
    pub top_counts: [u32; 3],
    pub bot_counts: [u32; 3],
    pub stirrup_dia: f64,
    pub spacings: [f64; 3],
    pub bend_ends: [f64; 2],
    pub shear_ends: [f64; 2],
}

fn catalog(table: &[f64], idx: f64) -> f64 {
    let i = (idx.round().max(0.0) as usize).min(table.len() - 1);
    table[i] / 1000.0
}

fn count(x: f64) -> u32 {
    x.round().clamp(0.0, 15.0) as u32
}

impl Design {
    pub fn from_genes(g: &[f64]) -> Self {
        Self {
            b: g[VAR_B],
            h: g[VAR_H],
            top_dia: catalog(&BAR_DIAMETERS_MM, g[VAR_TOP_DIA]),
            bot_dia: catalog(&BAR_DIAMETERS_MM, g[VAR_BOT_DIA]),
            top_counts: [0, 1, 2].map(|k| count(g[VAR_TOP_COUNT + k])),
            bot_counts: [0, 1, 2].map(|k| count(g[VAR_BOT_COUNT + k])),
            stirrup_dia: catalog(&STIRRUP_DIAMETERS_MM, g[VAR_STIRRUP_DIA]),
            spacings: [0, 1, 2].map(|k| g[VAR_SPACING + k]),
            bend_ends: [g[VAR_BEND_LEN], g[VAR_BEND_LEN + 1]],
            shear_ends: [g[VAR_SHEAR_LEN], g[VAR_SHEAR_LEN + 1]],
        }
    }
}

fn bar_area(d: f64) -> f64 {
    PI * d * d / 4.0
}

/// Splits `[0, span]` into left / middle / right parts from the two end
/// lengths. Ends that overlap squeeze the middle part to zero length.
fn parts(span: f64, ends: [f64; 2]) -> [(f64, f64); 3] {
    let x1 = ends[0].min(span);
    let x2 = (span - ends[1]).max(x1);
    [(0.0, x1), (x1, x2), (x2, span)]
}

/// Cost breakdown and limit checks of one design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub concrete_volume: f64,
    pub steel_weight: f64,
    pub cost: f64,
    pub checks: Vec<Check>,
    pub penalty: f64,
}

impl Assessment {
    pub fn total(&self) -> f64 {
        self.cost + self.penalty
    }
}

#[derive(Debug, Clone)]
pub struct BeamProblem {
    params: BeamParams,
    bounds: Bounds,
    steps: Vec<f64>,
    threshold: f64,
}

impl BeamProblem {
    /// `threshold` is the success price; pass `f64::NEG_INFINITY` when unused.
    pub fn new(params: BeamParams, threshold: f64) -> Result<Self> {
        if !(params.span > 0.0 && params.load >= 0.0) {
            return Err(Error::ConfigInvalid("span must be positive, load non-negative".into()));
        }
        if !(params.concrete_price >= 0.0 && params.steel_price >= 0.0 && params.penalty_weight >= 0.0) {
            return Err(Error::ConfigInvalid("prices and weights must be non-negative".into()));
        }
        let mut lower = vec![0.0; DIMENSION];
        let mut upper = vec![0.0; DIMENSION];
        let mut steps = vec![1.0; DIMENSION];
        let mut set = |j: usize, lo: f64, hi: f64, step: f64| {
            lower[j] = lo;
            upper[j] = hi;
            steps[j] = step;
        };
        set(VAR_B, 0.15, 0.45, GRID_STEP);
        set(VAR_H, 0.15, 0.85, GRID_STEP);
        set(VAR_TOP_DIA, 0.0, 15.0, 1.0);
        set(VAR_BOT_DIA, 0.0, 15.0, 1.0);
        for k in 0..3 {
            set(VAR_TOP_COUNT + k, 0.0, 15.0, 1.0);
            set(VAR_BOT_COUNT + k, 0.0, 15.0, 1.0);
            set(VAR_SPACING + k, 0.05, 0.40, GRID_STEP);
        }
        set(VAR_STIRRUP_DIA, 0.0, 3.0, 1.0);
        for k in 0..2 {
            set(VAR_BEND_LEN + k, 0.0, 4.0, GRID_STEP);
            set(VAR_SHEAR_LEN + k, 0.0, 4.0, GRID_STEP);
        }
        Ok(Self {
            params,
            bounds: Bounds::new(lower, upper)?,
            steps,
            threshold,
        })
    }

    pub fn params(&self) -> &BeamParams {
        &self.params
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// Design line load including factored self-weight [kN/m].
    fn line_load(&self, d: &Design) -> f64 {
        self.params.load + DEAD_LOAD_FACTOR * CONCRETE_WEIGHT * d.b * d.h
    }

    pub fn assess(&self, genes: &[f64]) -> Assessment {
        let d = Design::from_genes(genes);
        let p = &self.params;
        let span = p.span;
        let q = self.line_load(&d);
        // interior span, both ends fully restrained
        let moment = |x: f64| q * x * (span - x) / 2.0 - q * span * span / 12.0;
        let shear = |x: f64| q * (span / 2.0 - x);

        let bend = parts(span, d.bend_ends);
        let shear_parts = parts(span, d.shear_ends);
        let mut checks = Vec::with_capacity(24);

        let a_top = bar_area(d.top_dia);
        let a_bot = bar_area(d.bot_dia);
        let d_top = d.h - COVER - d.stirrup_dia - d.top_dia / 2.0;
        let d_bot = d.h - COVER - d.stirrup_dia - d.bot_dia / 2.0;

        let capacity = |n: u32, area: f64, depth: f64| -> (f64, f64) {
            let a_s = n as f64 * area;
            if depth <= 0.0 || a_s == 0.0 {
                return (0.0, 0.0);
            }
            let x = a_s * F_YD / (0.8 * d.b * F_CD);
            (a_s * F_YD * (depth - 0.4 * x).max(0.0), x / depth)
        };
        let required_width = |n: u32, dia: f64| -> f64 {
            let n = n as f64;
            2.0 * (COVER + d.stirrup_dia) + n * dia + (n - 1.0).max(0.0) * dia.max(MIN_CLEAR_SPACING)
        };

        let mut steel_volume = 0.0;
        for (k, &(x1, x2)) in bend.iter().enumerate() {
            let len = x2 - x1;
            let mid = (span / 2.0).clamp(x1, x2);
            let sagging = moment(mid).max(0.0);
            let hogging = (-moment(x1).min(moment(x2))).max(0.0);
            let (m_top, xi_top) = capacity(d.top_counts[k], a_top, d_top);
            let (m_bot, xi_bot) = capacity(d.bot_counts[k], a_bot, d_bot);
            let active = len > 0.0;
            let gate = |r: f64| if active { r } else { 0.0 };
            checks.push(Check { limit: Limit::Hogging(k), ratio: gate(ratio(hogging, m_top)) });
            checks.push(Check { limit: Limit::Sagging(k), ratio: gate(ratio(sagging, m_bot)) });
            checks.push(Check {
                limit: Limit::Ductility(k),
                ratio: gate(xi_top.max(xi_bot) / MAX_NEUTRAL_AXIS_RATIO),
            });
            let fewest = d.top_counts[k].min(d.bot_counts[k]) as f64;
            checks.push(Check {
                limit: Limit::CornerBars(k),
                ratio: gate(ratio(MIN_BARS_PER_FACE, fewest)),
            });
            if d.top_counts[k] > 0 {
                checks.push(Check {
                    limit: Limit::TopSpacing(k),
                    ratio: gate(required_width(d.top_counts[k], d.top_dia) / d.b),
                });
            }
            if d.bot_counts[k] > 0 {
                checks.push(Check {
                    limit: Limit::BottomSpacing(k),
                    ratio: gate(required_width(d.bot_counts[k], d.bot_dia) / d.b),
                });
            }
            steel_volume += len * (d.top_counts[k] as f64 * a_top + d.bot_counts[k] as f64 * a_bot);
        }

        let depth = d_top.min(d_bot);
        let z = 0.9 * depth.max(0.0);
        let a_sw = 2.0 * bar_area(d.stirrup_dia);
        let stirrup_length = (2.0 * (d.b - 2.0 * COVER) + 2.0 * (d.h - 2.0 * COVER)).max(0.0) + STIRRUP_HOOKS;
        let nu = 0.6 * (1.0 - F_CK_MPA / 250.0);
        let v_max = d.b * z * nu * F_CD / 2.0;
        for (k, &(x1, x2)) in shear_parts.iter().enumerate() {
            let len = x2 - x1;
            let s = d.spacings[k];
            let v_ed = shear(x1).abs().max(shear(x2).abs());
            let v_rd = a_sw / s * z * F_YD;
            let active = len > 0.0;
            let gate = |r: f64| if active { r } else { 0.0 };
            checks.push(Check { limit: Limit::Shear(k), ratio: gate(ratio(v_ed, v_rd)) });
            checks.push(Check { limit: Limit::ShearCrushing(k), ratio: gate(ratio(v_ed, v_max)) });
            checks.push(Check {
                limit: Limit::StirrupSpacing(k),
                ratio: gate(ratio(s, MAX_STIRRUP_SPACING_RATIO * depth)),
            });
            if active {
                let stirrups = (len / s - 1e-9).ceil();
                steel_volume += stirrups * stirrup_length * bar_area(d.stirrup_dia);
            }
        }
        checks.push(Check {
            limit: Limit::Deflection,
            ratio: if depth > 0.0 { span / depth / SPAN_DEPTH_LIMIT } else { RATIO_CAP },
        });
        checks.push(Check {
            limit: Limit::BendingParts,
            ratio: (d.bend_ends[0] + d.bend_ends[1]) / span,
        });
        checks.push(Check {
            limit: Limit::ShearParts,
            ratio: (d.shear_ends[0] + d.shear_ends[1]) / span,
        });

        let concrete_volume = d.b * d.h * span - steel_volume;
        let steel_weight = steel_volume * STEEL_DENSITY;
        let cost = concrete_volume * p.concrete_price + steel_weight * p.steel_price;
        let penalty_sum = checks
            .iter()
            .map(|c| penalty(p.penalty_weight, c.ratio))
            .sum();
        Assessment {
            concrete_volume,
            steel_weight,
            cost,
            checks,
            penalty: penalty_sum,
        }
    }
}

impl Default for BeamProblem {
    fn default() -> Self {
        Self::new(BeamParams::default(), f64::NEG_INFINITY).expect("valid defaults")
    }
}

impl Problem for BeamProblem {
    fn name(&self) -> &str {
        "beam"
    }

    fn dimension(&self) -> usize {
        DIMENSION
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn encoding(&self) -> Encoding {
        Encoding::Grid {
            steps: self.steps.clone(),
        }
    }

    fn objective(&self, genes: &[f64]) -> f64 {
        self.assess(genes).total()
    }

    fn default_threshold(&self) -> f64 {
        self.threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A hand-sized feasible layout: 0.3 x 0.55 section, 20 mm bars, 10 mm stirrups.
    fn feasible() -> Vec<f64> {
        let mut g = vec![0.0; DIMENSION];
        g[VAR_B] = 0.3;
        g[VAR_H] = 0.55;
        g[VAR_TOP_DIA] = 7.0;
        g[VAR_BOT_DIA] = 7.0;
        g[VAR_TOP_COUNT..VAR_TOP_COUNT + 3].copy_from_slice(&[4.0, 2.0, 4.0]);
        g[VAR_BOT_COUNT..VAR_BOT_COUNT + 3].copy_from_slice(&[2.0, 3.0, 2.0]);
        g[VAR_STIRRUP_DIA] = 2.0;
        g[VAR_SPACING..VAR_SPACING + 3].copy_from_slice(&[0.15, 0.3, 0.15]);
        g[VAR_BEND_LEN..VAR_BEND_LEN + 2].copy_from_slice(&[1.5, 1.5]);
        g[VAR_SHEAR_LEN..VAR_SHEAR_LEN + 2].copy_from_slice(&[1.5, 1.5]);
        g
    }

    #[test]
    fn feasible_design_costs_exactly_its_materials() {
        let p = BeamProblem::default();
        let a = p.assess(&feasible());
        let failing: Vec<_> = a.checks.iter().filter(|c| c.ratio > 1.0).collect();
        assert!(failing.is_empty(), "{failing:?}");
        assert_eq!(a.penalty, 0.0);
        assert_eq!(p.objective(&feasible()), a.cost);
    }

    #[test]
    fn penalty_branches() {
        assert_eq!(penalty(1000.0, 0.7), 0.0);
        assert_eq!(penalty(1000.0, 1.0), 0.0);
        assert_eq!(penalty(1000.0, 2.0), 4000.0);
    }

    #[test]
    fn unreinforced_minimum_section_cost_by_hand() {
        let p = BeamProblem::default();
        let mut g = vec![0.0; DIMENSION];
        g[VAR_B] = 0.15;
        g[VAR_H] = 0.15;
        g[VAR_SPACING..VAR_SPACING + 3].copy_from_slice(&[0.4, 0.4, 0.4]);
        g[VAR_SHEAR_LEN..VAR_SHEAR_LEN + 2].copy_from_slice(&[1.0, 1.0]);
        let a = p.assess(&g);
        // 6 mm stirrups: parts of 1, 4 and 1 m at 0.4 m -> 3 + 10 + 3 stirrups
        let perimeter = 2.0 * 0.09 + 2.0 * 0.09 + 0.2;
        let stirrup_volume = 16.0 * perimeter * PI * 0.006 * 0.006 / 4.0;
        let concrete = 0.15 * 0.15 * 6.0 - stirrup_volume;
        let expected = concrete * 3000.0 + stirrup_volume * 7850.0 * 30.0;
        assert!((a.cost - expected).abs() < 1e-9, "{} vs {expected}", a.cost);
        assert!((a.concrete_volume * 3000.0 - (0.15 * 0.15 * 6.0 - stirrup_volume) * 3000.0).abs() < 1e-9);
        // no bending capacity at all: hogging and sagging checks hit the cap
        assert!(a.penalty >= 2.0 * 1000.0 * RATIO_CAP * RATIO_CAP);
        assert!(p.objective(&g).is_finite());
    }

    #[test]
    fn adding_a_bar_to_a_feasible_design_costs_more() {
        let p = BeamProblem::default();
        let base = feasible();
        let before = p.objective(&base);
        for j in [VAR_TOP_COUNT, VAR_TOP_COUNT + 1, VAR_BOT_COUNT + 1, VAR_BOT_COUNT + 2] {
            let mut g = base.clone();
            g[j] += 1.0;
            assert!(p.objective(&g) > before, "variable {j}");
        }
    }

    #[test]
    fn overlapping_end_parts_are_penalized() {
        let p = BeamProblem::default();
        let mut g = feasible();
        g[VAR_BEND_LEN] = 4.0;
        g[VAR_BEND_LEN + 1] = 4.0;
        let a = p.assess(&g);
        let c = a.checks.iter().find(|c| c.limit == Limit::BendingParts).unwrap();
        assert!((c.ratio - 8.0 / 6.0).abs() < 1e-12);
        assert!(a.penalty > 0.0);
    }

    #[test]
    fn a_single_bar_per_face_is_penalized() {
        let p = BeamProblem::default();
        let mut g = feasible();
        g[VAR_BOT_COUNT + 1] = 1.0;
        let a = p.assess(&g);
        let c = a.checks.iter().find(|c| c.limit == Limit::CornerBars(1)).unwrap();
        assert_eq!(c.ratio, 2.0);
        assert!(a.penalty >= 4000.0);
        // a part of zero length needs no bars
        g[VAR_BEND_LEN] = 0.0;
        g[VAR_TOP_COUNT] = 0.0;
        let a = p.assess(&g);
        assert_eq!(a.checks.iter().find(|c| c.limit == Limit::CornerBars(0)).unwrap().ratio, 0.0);
    }

    #[test]
    fn grid_has_eighteen_variables() {
        let p = BeamProblem::default();
        assert_eq!(p.dimension(), 18);
        match p.encoding() {
            Encoding::Grid { steps } => assert_eq!(steps.len(), 18),
            Encoding::Continuous => panic!("beam must be grid encoded"),
        }
    }
}
