//! Parameter presets as flat `key = value` text with `[section]` headers.
//!
//! Algorithm sections are `[de.<problem>]`, `[sade.<problem>]`,
//! `[rasa.beam]`, `[rasa.others]` and `[iasa.<problem>]`; problem sections
//! are `[problem.<problem>]`. Numeric values may be plain numbers,
//! percentages (`19%`) or multiples of `dim`, `pop_size` or `max_calls`
//! (`10*dim`). Loading a file or applying an override only ever replaces
//! existing entries, so a misspelt key is an error rather than a silent no-op.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::algo::{
    AlgorithmConfig, AlgorithmKind, DeConfig, IasaConfig, IasaPrecision, Precision, RasaConfig, SadeConfig,
};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::problems::{BeamParams, BeamProblem, ChebyshevProblem, ProblemKind, PucProblem, Type0Problem};
use crate::rng::RngStream;

pub const DEFAULT_PRESETS: &str = r#"# evobench presets

[de.chebyshev]
pop_size = 10*dim
F1 = 0.85
F2 = 0.85
CR = 1

[de.type0]
pop_size = 10*dim
F1 = 0.85
F2 = 0.85
CR = 1

[de.beam]
pop_size = 11*dim
F1 = 0.85
F2 = 0.85
CR = 0.1

[de.puc]
pop_size = 10*dim
F1 = 0.75
F2 = 0.75
CR = 1

[sade.chebyshev]
pop_size = 10*dim
CR = 0.44
radioactivity = 0
MR = 0.5
local_range = 0.25%

[sade.type0]
pop_size = 25*dim
CR = 0.1
radioactivity = 0.05
MR = 0.5
local_range = 0.25%

[sade.beam]
pop_size = 10*dim
CR = 0.3
radioactivity = 0.05
MR = 0.5
local_range = 0.25%

[sade.puc]
pop_size = 10*dim
CR = 0.2
radioactivity = 0.3
MR = 0.5
local_range = 0.25%

[rasa.beam]
pop_size = 64
q = 0.04
p_uni_mut = 0.525
p_bnd_mut = 0.125
p_nun_mut = 0.125
p_mnu_mut = 0.125
p_smp_crs = 0.025
p_sar_crs = 0.025
p_war_crs = 0.025
p_heu_crs = 0.025
b = 0.25
T_frac = 1e-2
T_frac_min = 1e-4
T_mult = 0.9
num_success_max = 10*pop_size
num_counter_max = 50*pop_size
num_heu_max = 20
precision = grid

[rasa.others]
pop_size = 32
q = 0.04
p_uni_mut = 0.05
p_bnd_mut = 0.05
p_nun_mut = 0.05
p_mnu_mut = 0.05
p_smp_crs = 0.15
p_sar_crs = 0.15
p_war_crs = 0.15
p_heu_crs = 0.35
b = 2.0
T_frac = 1e-10
T_frac_min = 1e-14
T_mult = 0.9
num_success_max = 10*pop_size
num_counter_max = 50*pop_size
num_heu_max = 20
precision = 1e-4

[iasa.chebyshev]
OldSize = 80
NewSize = 5
T_max = 1e-5
T_min = 1e-7
SuccessMax = 1000
CounterMax = 5000
TminAtCallsRate = 19%
CrossoverProb = 97%
CR = 0.5
MaxCalls = max_calls
precision = 1e-3

[iasa.type0]
OldSize = 900
NewSize = 600
T_max = 1e-5
T_min = 1e-10
SuccessMax = 1000
CounterMax = 5000
TminAtCallsRate = 100%
CrossoverProb = 92%
CR = 0.6
MaxCalls = max_calls
precision = 1e-6

[iasa.beam]
OldSize = 180
NewSize = 250
T_max = 1e-4
T_min = 1e-5
SuccessMax = 1000
CounterMax = 5000
TminAtCallsRate = 25%
CrossoverProb = 60%
CR = 1.3
MaxCalls = max_calls
precision = grid

[iasa.puc]
OldSize = 200
NewSize = 100
T_max = 1e-1
T_min = 1e-5
SuccessMax = 1000
CounterMax = 5000
TminAtCallsRate = 20%
CrossoverProb = 90%
CR = 1.0
MaxCalls = max_calls
precision = 1e-3

[problem.chebyshev]
threshold = 1e-5
max_calls = 100000
degree = 8
resolution = 1000

[problem.type0]
threshold = 1e-3
max_calls = 5000000

[problem.beam]
max_calls = 1000000
reference_best = 3601.832909
target_margin = 0.5%
span = 6
load = 45
concrete_price = 3000
steel_price = 30
penalty_weight = 1000

[problem.puc]
threshold = 6e-5
max_calls = 400000
reference = builtin
radii = 10
fiber_radius = 3
"#;

#[derive(Debug, Clone, PartialEq)]
struct Section {
    name: String,
    entries: Vec<(String, String)>,
}

/// Success threshold and evaluation cap of one problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Termination {
    pub threshold: f64,
    pub max_calls: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Presets {
    sections: Vec<Section>,
}

impl Default for Presets {
    fn default() -> Self {
        Self::parse_raw(DEFAULT_PRESETS).expect("built-in presets parse")
    }
}

fn parse_error(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// Evaluates `number`, `number%`, `name`, or `number*name`.
fn eval_expr(expr: &str, vars: &[(&str, f64)]) -> std::result::Result<f64, String> {
    let expr = expr.trim();
    let number = |s: &str| -> std::result::Result<f64, String> {
        let s = s.trim();
        if let Some(p) = s.strip_suffix('%') {
            return p.trim().parse::<f64>().map(|v| v / 100.0).map_err(|_| format!("bad percentage `{s}`"));
        }
        s.parse::<f64>().map_err(|_| format!("bad number `{s}`"))
    };
    let var = |s: &str| -> std::result::Result<f64, String> {
        let s = s.trim();
        vars.iter()
            .find(|(n, _)| *n == s)
            .map(|(_, v)| *v)
            .ok_or_else(|| format!("unknown name `{s}`"))
    };
    let value = match expr.split_once('*') {
        Some((a, b)) => number(a)? * var(b)?,
        None if expr.starts_with(|c: char| c.is_ascii_alphabetic()) => var(expr)?,
        None => number(expr)?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{expr}` is not finite"))
    }
}

/// Splits `section.key` at its last dot.
fn split_path(path: &str) -> Result<(&str, &str)> {
    path.rsplit_once('.')
        .filter(|(s, k)| !s.is_empty() && !k.is_empty())
        .ok_or_else(|| Error::ConfigInvalid(format!("`{path}` is not of the form section.key")))
}

struct View<'a> {
    section: &'a Section,
    vars: Vec<(&'static str, f64)>,
}

impl View<'_> {
    fn raw(&self, key: &str) -> Result<&str> {
        self.section
            .entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::ConfigInvalid(format!("missing {}.{key}", self.section.name)))
    }

    fn num(&self, key: &str) -> Result<f64> {
        eval_expr(self.raw(key)?, &self.vars)
            .map_err(|m| Error::ConfigInvalid(format!("{}.{key}: {m}", self.section.name)))
    }

    fn count(&self, key: &str) -> Result<usize> {
        let v = self.num(key)?;
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::ConfigInvalid(format!(
                "{}.{key} = {v} is not a non-negative integer",
                self.section.name
            )));
        }
        Ok(v as usize)
    }
}

impl Presets {
    fn parse_raw(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| parse_error(i + 1, "unterminated section header"))?
                    .trim();
                if name.is_empty() {
                    return Err(parse_error(i + 1, "empty section name"));
                }
                sections.push(Section {
                    name: name.to_string(),
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_error(i + 1, format!("expected key = value, got `{line}`")))?;
            let section = sections
                .last_mut()
                .ok_or_else(|| parse_error(i + 1, "entry before any section header"))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(parse_error(i + 1, "empty key"));
            }
            section.entries.push((key.to_string(), value.to_string()));
        }
        Ok(Self { sections })
    }

    /// Defaults overlaid with the entries of `text`.
    pub fn from_text(text: &str) -> Result<Self> {
        let overlay = Self::parse_raw(text)?;
        let mut presets = Self::default();
        for s in &overlay.sections {
            for (k, v) in &s.entries {
                presets.set(&format!("{}.{k}", s.name), v)?;
            }
        }
        presets.validate()?;
        Ok(presets)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn get(&self, path: &str) -> Option<&str> {
        let (section, key) = split_path(path).ok()?;
        self.sections
            .iter()
            .find(|s| s.name == section)?
            .entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Replaces `section.key`; unknown sections and keys are rejected.
    pub fn set(&mut self, path: &str, value: &str) -> Result<()> {
        let (section, key) = split_path(path)?;
        let s = self
            .sections
            .iter_mut()
            .find(|s| s.name == section)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown section `{section}`")))?;
        let entry = s
            .entries
            .iter_mut()
            .find(|(k, _)| k == key)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown key `{key}` in [{section}]")))?;
        entry.1 = value.trim().to_string();
        Ok(())
    }

    /// Applies `key=value` overrides in order and re-validates.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::ConfigInvalid(format!("override `{o}` is not key=value")))?;
            self.set(k.trim(), v)?;
        }
        self.validate()
    }

    /// Resolves every algorithm/problem pair once, surfacing bad values early.
    pub fn validate(&self) -> Result<()> {
        for p in ProblemKind::ALL {
            self.termination(p)?;
            for a in AlgorithmKind::ALL {
                self.algorithm(a, p, 10)?.validate()?;
            }
        }
        Ok(())
    }

    /// The whole preset text, or only the sections of one algorithm.
    pub fn dump(&self, only: Option<AlgorithmKind>) -> String {
        let mut out = String::from("# evobench presets\n");
        for s in &self.sections {
            if let Some(a) = only {
                if s.name.split('.').next() != Some(a.as_str()) {
                    continue;
                }
            }
            let _ = writeln!(out, "\n[{}]", s.name);
            for (k, v) in &s.entries {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    fn section(&self, name: &str) -> Result<&Section> {
        self.sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::ConfigInvalid(format!("missing section [{name}]")))
    }

    fn view(&self, name: &str, vars: Vec<(&'static str, f64)>) -> Result<View<'_>> {
        Ok(View {
            section: self.section(name)?,
            vars,
        })
    }

    pub fn termination(&self, problem: ProblemKind) -> Result<Termination> {
        let v = self.view(&format!("problem.{problem}"), Vec::new())?;
        let max_calls = v.count("max_calls")? as u64;
        if max_calls == 0 {
            return Err(Error::ConfigInvalid(format!("problem.{problem}.max_calls must be positive")));
        }
        let threshold = match problem {
            ProblemKind::Beam => v.num("reference_best")? * (1.0 + v.num("target_margin")?),
            _ => v.num("threshold")?,
        };
        Ok(Termination { threshold, max_calls })
    }

    pub fn de(&self, problem: ProblemKind, dim: usize) -> Result<DeConfig> {
        let v = self.view(&format!("de.{problem}"), vec![("dim", dim as f64)])?;
        Ok(DeConfig {
            pop_size: v.count("pop_size")?,
            f1: v.num("F1")?,
            f2: v.num("F2")?,
            cr: v.num("CR")?,
        })
    }

    pub fn sade(&self, problem: ProblemKind, dim: usize) -> Result<SadeConfig> {
        let v = self.view(&format!("sade.{problem}"), vec![("dim", dim as f64)])?;
        Ok(SadeConfig {
            pop_size: v.count("pop_size")?,
            cr: v.num("CR")?,
            radioactivity: v.num("radioactivity")?,
            mr: v.num("MR")?,
            local_range: v.num("local_range")?,
        })
    }

    pub fn rasa(&self, problem: ProblemKind, dim: usize) -> Result<RasaConfig> {
        let name = if problem == ProblemKind::Beam { "rasa.beam" } else { "rasa.others" };
        let mut v = self.view(name, vec![("dim", dim as f64)])?;
        let pop_size = v.count("pop_size")?;
        v.vars.push(("pop_size", pop_size as f64));
        let keys = [
            "p_uni_mut", "p_bnd_mut", "p_nun_mut", "p_mnu_mut", "p_smp_crs", "p_sar_crs", "p_war_crs", "p_heu_crs",
        ];
        let mut op_probs = [0.0; 8];
        for (p, k) in op_probs.iter_mut().zip(keys) {
            *p = v.num(k)?;
        }
        let precision = match v.raw("precision")? {
            "grid" => Precision::Grid,
            _ => Precision::Uniform(v.num("precision")?),
        };
        Ok(RasaConfig {
            pop_size,
            q: v.num("q")?,
            op_probs,
            b: v.num("b")?,
            t_frac: v.num("T_frac")?,
            t_frac_min: v.num("T_frac_min")?,
            t_mult: v.num("T_mult")?,
            success_max: v.count("num_success_max")?,
            counter_max: v.count("num_counter_max")?,
            num_heu_max: v.count("num_heu_max")?,
            precision,
        })
    }

    pub fn iasa(&self, problem: ProblemKind, dim: usize) -> Result<IasaConfig> {
        let term = self.termination(problem)?;
        let v = self.view(
            &format!("iasa.{problem}"),
            vec![("dim", dim as f64), ("max_calls", term.max_calls as f64)],
        )?;
        let precision = match v.raw("precision")? {
            "grid" => IasaPrecision::Grid,
            _ => IasaPrecision::Uniform(v.num("precision")?),
        };
        Ok(IasaConfig {
            old_size: v.count("OldSize")?,
            new_size: v.count("NewSize")?,
            t_max: v.num("T_max")?,
            t_min: v.num("T_min")?,
            success_max: v.count("SuccessMax")?,
            counter_max: v.count("CounterMax")?,
            tmin_at_calls_rate: v.num("TminAtCallsRate")?,
            max_calls: v.count("MaxCalls")? as u64,
            crossover_prob: v.num("CrossoverProb")?,
            cr: v.num("CR")?,
            precision,
        })
    }

    pub fn algorithm(&self, algo: AlgorithmKind, problem: ProblemKind, dim: usize) -> Result<AlgorithmConfig> {
        Ok(match algo {
            AlgorithmKind::De => AlgorithmConfig::De(self.de(problem, dim)?),
            AlgorithmKind::Sade => AlgorithmConfig::Sade(self.sade(problem, dim)?),
            AlgorithmKind::Rasa => AlgorithmConfig::Rasa(self.rasa(problem, dim)?),
            AlgorithmKind::Iasa => AlgorithmConfig::Iasa(self.iasa(problem, dim)?),
        })
    }

    pub fn beam_params(&self) -> Result<BeamParams> {
        let v = self.view("problem.beam", Vec::new())?;
        Ok(BeamParams {
            span: v.num("span")?,
            load: v.num("load")?,
            concrete_price: v.num("concrete_price")?,
            steel_price: v.num("steel_price")?,
            penalty_weight: v.num("penalty_weight")?,
        })
    }

    /// Resolves everything needed to instantiate `problem` for each run.
    pub fn problem_setup(&self, problem: ProblemKind, dim: usize) -> Result<ProblemSetup> {
        let term = self.termination(problem)?;
        let v = self.view(&format!("problem.{problem}"), Vec::new())?;
        let shared: Option<Arc<dyn Problem>> = match problem {
            ProblemKind::Chebyshev => Some(Arc::new(ChebyshevProblem::new(v.count("degree")?, v.count("resolution")?)?)),
            ProblemKind::Type0 => {
                if dim == 0 {
                    return Err(Error::ConfigInvalid("type0 needs dim >= 1".into()));
                }
                None
            }
            ProblemKind::Beam => Some(Arc::new(BeamProblem::new(self.beam_params()?, term.threshold)?)),
            ProblemKind::Puc => {
                let radii = v.count("radii")?;
                let fiber = v.num("fiber_radius")?;
                let p = match v.raw("reference")? {
                    "builtin" => PucProblem::from_reference_text(crate::problems::puc::BUILTIN_REFERENCE, radii, fiber)?,
                    path => PucProblem::from_reference_file(Path::new(path), radii, fiber)?,
                };
                Some(Arc::new(p))
            }
        };
        let dim = shared.as_ref().map_or(dim, |p| p.dimension());
        Ok(ProblemSetup {
            kind: problem,
            dim,
            termination: term,
            shared,
        })
    }
}

/// A problem ready to hand out one instance per run.
#[derive(Clone)]
pub struct ProblemSetup {
    pub kind: ProblemKind,
    /// Actual dimension (fixed by the model for all but type-0).
    pub dim: usize,
    pub termination: Termination,
    shared: Option<Arc<dyn Problem>>,
}

impl ProblemSetup {
    /// The run's problem instance; type-0 draws a fresh peak from `rng`.
    pub fn instance(&self, rng: &mut RngStream) -> Result<Arc<dyn Problem>> {
        match &self.shared {
            Some(p) => Ok(Arc::clone(p)),
            None => Ok(Arc::new(Type0Problem::random_instance(self.dim, rng)?)),
        }
    }
}
