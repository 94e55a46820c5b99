// SPDX-License-Identifier: Apache-2.0

//! Design-space exploration: cartesian sweeps over configuration values,
//! switching points against the equivalent 2D design, and γ trade-off curves.
//!
//! Sweep axes name locations in the configuration document, e.g.
//! `design.dies[*].technology`, `usage.t_app` or
//! `technology_overrides.7nm.defect_density_d0`. Paths that do not start with
//! a top-level key are taken relative to `design`. Three names are special:
//!
//! * `gamma` sets the evaluation's γ instead of a document value,
//! * `technology` sets the node of every die,
//! * `n_dies` resizes the die list by repeating the last die.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::carbon::{CarbonBreakdown, GammaBasis};
use crate::error::{Error, Result};
use crate::geometry::area_2d;
use crate::params::{load_config, Config, DesignSpec, FabEnvironment, Integration, Registry};
use crate::pipeline::{embodied_carbon, evaluate, EvalOptions, Evaluation};

pub const DEFAULT_SWEEP_CAP: usize = 1_000_000;
/// Points of the logarithmic scan that brackets a switching point.
pub const PRESCAN_POINTS: usize = 17;
pub const DEFAULT_REL_TOL: f64 = 1e-3;

const TOP_LEVEL: [&str; 4] = ["design", "technology_overrides", "environment", "usage"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    pub path: String,
    pub values: Vec<Value>,
}

impl SweepAxis {
    pub fn new(path: impl Into<String>, values: Vec<Value>) -> Self {
        Self {
            path: path.into(),
            values,
        }
    }

    /// Parses `path=v1,v2,...`. Values that parse as JSON (numbers, booleans)
    /// keep that type; anything else is a string.
    pub fn parse(text: &str) -> Result<Self> {
        let (path, values) = text.split_once('=').ok_or_else(|| Error::InvalidValue {
            path: text.to_string(),
            message: "axis must be given as path=v1,v2,...".into(),
        })?;
        let values: Vec<Value> = values
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string())))
            .collect();
        if values.is_empty() {
            return Err(Error::InvalidValue {
                path: path.to_string(),
                message: "axis has no values".into(),
            });
        }
        Ok(Self::new(path.trim(), values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepOptions {
    pub eval: EvalOptions,
    pub cap: usize,
    /// Also evaluate the equivalent monolithic 2D design of every row.
    pub baseline: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            eval: EvalOptions::default(),
            cap: DEFAULT_SWEEP_CAP,
            baseline: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub values: Vec<Value>,
    pub integration: Integration,
    pub n_dies: usize,
    pub evaluation: Evaluation,
    pub baseline: Option<CarbonBreakdown>,
}

/// Where embodied carbon of the design crosses that of its 2D equivalent
/// between two rows adjacent along the last axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCrossing {
    /// Index of the first of the two rows.
    pub row: usize,
    /// Linearly interpolated value of the last axis.
    pub axis_value: f64,
    pub integration: Integration,
    /// True when the design becomes cheaper than 2D past the crossing.
    pub becomes_cheaper: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axes: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub switching_points: Vec<SweepCrossing>,
}

#[derive(Debug, Clone, PartialEq)]
enum Seg {
    Key(String),
    Index(usize),
    All,
}

fn parse_path(path: &str) -> Result<Vec<Seg>> {
    let bad = || Error::UnresolvablePath(path.to_string());
    let mut segs = Vec::new();
    for part in path.split('.') {
        let (key, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if key.is_empty() {
            return Err(bad());
        }
        segs.push(Seg::Key(key.to_string()));
        while !rest.is_empty() {
            let close = rest.find(']').ok_or_else(bad)?;
            let inner = &rest[1..close];
            segs.push(if inner == "*" {
                Seg::All
            } else {
                Seg::Index(inner.parse().map_err(|_| bad())?)
            });
            rest = &rest[close + 1..];
            if !rest.is_empty() && !rest.starts_with('[') {
                return Err(bad());
            }
        }
    }
    Ok(segs)
}

/// Fully qualified form of an axis path.
pub fn qualify_path(path: &str) -> String {
    let head = path.split(['.', '[']).next().unwrap_or("");
    if TOP_LEVEL.contains(&head) || matches!(path, "gamma" | "technology" | "n_dies") {
        path.to_string()
    } else {
        format!("design.{path}")
    }
}

fn set_at(node: &mut Value, segs: &[Seg], value: &Value, path: &str) -> Result<()> {
    let Some((first, rest)) = segs.split_first() else {
        *node = value.clone();
        return Ok(());
    };
    let bad = || Error::UnresolvablePath(path.to_string());
    match first {
        Seg::Key(k) => {
            let map = node.as_object_mut().ok_or_else(bad)?;
            if !map.contains_key(k) {
                if rest.is_empty() || matches!(rest[0], Seg::Key(_)) {
                    map.insert(k.clone(), Value::Object(Default::default()));
                } else {
                    return Err(bad());
                }
            }
            set_at(map.get_mut(k).expect("inserted"), rest, value, path)
        }
        Seg::Index(i) => {
            let item = node.as_array_mut().and_then(|a| a.get_mut(*i)).ok_or_else(bad)?;
            set_at(item, rest, value, path)
        }
        Seg::All => {
            let items = node.as_array_mut().ok_or_else(bad)?;
            if items.is_empty() {
                return Err(bad());
            }
            items.iter_mut().try_for_each(|item| set_at(item, rest, value, path))
        }
    }
}

fn resize_dies(doc: &mut Value, value: &Value) -> Result<()> {
    let bad = |message: &str| Error::InvalidValue {
        path: "n_dies".into(),
        message: message.to_string(),
    };
    let n = value
        .as_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| bad("expected a positive integer"))? as usize;
    let design = doc
        .get_mut("design")
        .and_then(Value::as_object_mut)
        .ok_or_else(|| Error::UnresolvablePath("n_dies".into()))?;
    for key in ["dies", "area_ratios"] {
        if let Some(list) = design.get_mut(key).and_then(Value::as_array_mut) {
            let last = list.last().cloned().ok_or_else(|| bad("die list is empty"))?;
            list.resize(n, last);
        }
    }
    Ok(())
}

/// Sets one axis value in a configuration document. `gamma` is not a
/// document value and is ignored here.
pub fn apply_axis(doc: &mut Value, path: &str, value: &Value) -> Result<()> {
    match path {
        "gamma" => Ok(()),
        "n_dies" => resize_dies(doc, value),
        "technology" | "node" => apply_axis(doc, "design.dies[*].technology", value),
        _ => {
            let full = qualify_path(path);
            set_at(doc, &parse_path(&full)?, value, path)
        }
    }
}

fn normalize_indices(path: &str) -> String {
    let mut out = String::with_capacity(path.len());
    let mut in_brackets = false;
    for c in path.chars() {
        match c {
            '[' => {
                in_brackets = true;
                out.push_str("[*");
            }
            ']' => {
                in_brackets = false;
                out.push(']');
            }
            _ if in_brackets => {}
            _ => out.push(c),
        }
    }
    out
}

fn gamma_value(value: &Value) -> Result<f64> {
    value
        .as_f64()
        .filter(|g| *g >= 0.0 && g.is_finite())
        .ok_or_else(|| Error::OutOfRange {
            path: "gamma".into(),
            value: value.as_f64().unwrap_or(f64::NAN),
            bound: "[0, inf)".into(),
        })
}

/// Mixed-radix decomposition of a row index; the last axis varies fastest.
fn combination(mut index: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &size) in out.iter_mut().zip(sizes).rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

/// Evaluates every combination of axis values, in row-major order.
pub fn sweep(template: &Value, registry: &Registry, axes: &[SweepAxis], opts: &SweepOptions) -> Result<SweepResult> {
    let sizes: Vec<usize> = axes.iter().map(|a| a.values.len()).collect();
    if let Some(a) = axes.iter().find(|a| a.values.is_empty()) {
        return Err(Error::InvalidValue {
            path: a.path.clone(),
            message: "axis has no values".into(),
        });
    }
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .unwrap_or(usize::MAX);
    if total > opts.cap {
        return Err(Error::CapExceeded {
            size: total,
            cap: opts.cap,
        });
    }
    for axis in axes {
        if !matches!(axis.path.as_str(), "gamma" | "n_dies" | "technology" | "node") {
            parse_path(&qualify_path(&axis.path))?;
        }
    }

    let row = |index: usize| -> Result<SweepRow> {
        let picks = combination(index, &sizes);
        let mut doc = template.clone();
        let mut eval = opts.eval;
        let mut values = Vec::with_capacity(axes.len());
        for (axis, &pick) in axes.iter().zip(&picks) {
            let value = &axis.values[pick];
            if axis.path == "gamma" {
                eval.gamma = gamma_value(value)?;
            }
            apply_axis(&mut doc, &axis.path, value)?;
            values.push(value.clone());
        }
        let cfg = load_config(&doc, registry).map_err(|e| match e {
            Error::UnknownField { path } => {
                let unknown = normalize_indices(&path);
                match axes
                    .iter()
                    .find(|a| normalize_indices(&qualify_path(&a.path)) == unknown)
                {
                    Some(a) => Error::UnresolvablePath(a.path.clone()),
                    None => Error::UnknownField { path },
                }
            }
            other => other,
        })?;
        let evaluation = evaluate(&cfg.design, &cfg.environment, &eval)?;
        let baseline = if opts.baseline {
            Some(evaluate(&cfg.design.equivalent_2d(), &cfg.environment, &eval)?.carbon)
        } else {
            None
        };
        Ok(SweepRow {
            values,
            integration: cfg.design.integration,
            n_dies: cfg.design.n_dies(),
            evaluation,
            baseline,
        })
    };

    let rows: Vec<SweepRow> = (0..total).into_par_iter().map(row).collect::<Result<Vec<_>>>()?;
    let switching_points = if opts.baseline {
        crossings(&rows, sizes.last().copied().unwrap_or(1))
    } else {
        Vec::new()
    };
    Ok(SweepResult {
        axes: axes.iter().map(|a| a.path.clone()).collect(),
        rows,
        switching_points,
    })
}

fn crossings(rows: &[SweepRow], last_axis: usize) -> Vec<SweepCrossing> {
    let mut out = Vec::new();
    if last_axis < 2 {
        return out;
    }
    let diff = |r: &SweepRow| {
        r.baseline
            .as_ref()
            .map(|b| r.evaluation.carbon.c_embodied_overall - b.c_embodied_overall)
    };
    for i in 0..rows.len() - 1 {
        if (i + 1) % last_axis == 0 {
            continue;
        }
        let (a, b) = (&rows[i], &rows[i + 1]);
        let (Some(da), Some(db)) = (diff(a), diff(b)) else {
            continue;
        };
        let (Some(xa), Some(xb)) = (
            a.values.last().and_then(Value::as_f64),
            b.values.last().and_then(Value::as_f64),
        ) else {
            continue;
        };
        if (da > 0.0) != (db > 0.0) {
            out.push(SweepCrossing {
                row: i,
                axis_value: xa + (xb - xa) * da / (da - db),
                integration: a.integration,
                becomes_cheaper: db <= 0.0,
            });
        }
    }
    out
}

/// Outcome of a switching-point search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Crossing {
    /// Cheaper over the whole range; reported as 0.
    Always,
    /// Never cheaper on the range; reported as infinity.
    Never,
    At(f64),
}

impl Crossing {
    /// 0 for [`Crossing::Always`], infinity for [`Crossing::Never`].
    pub fn value(self) -> f64 {
        match self {
            Crossing::Always => 0.0,
            Crossing::Never => f64::INFINITY,
            Crossing::At(g) => g,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchSearch {
    pub crossing: Crossing,
    /// Pre-scan points `(x, f(x))`.
    pub scan: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

/// Finds the smallest `x` in `[lo, hi]` where `f` turns negative.
///
/// A 17-point logarithmic scan brackets the first sign change, then
/// geometric bisection narrows it until `hi/lo ≤ 1 + rel_tol`.
pub fn find_switching_point<F>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<SwitchSearch>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidValue {
            path: "range".into(),
            message: format!("search range [{lo}, {hi}] must satisfy 0 < lo < hi"),
        });
    }
    let ratio = (hi / lo).ln();
    let xs: Vec<f64> = (0..PRESCAN_POINTS)
        .map(|k| match k {
            0 => lo,
            k if k == PRESCAN_POINTS - 1 => hi,
            k => lo * (ratio * k as f64 / (PRESCAN_POINTS - 1) as f64).exp(),
        })
        .collect();
    let ys: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let scan: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    let cheaper: Vec<bool> = ys.iter().map(|&y| y < 0.0).collect();
    let changes = cheaper.windows(2).filter(|w| w[0] != w[1]).count();
    let mut warnings = Vec::new();
    if changes > 1 {
        warnings.push(format!(
            "{changes} sign changes on the scan; reporting the smallest crossing"
        ));
    }
    if cheaper[0] {
        return Ok(SwitchSearch {
            crossing: Crossing::Always,
            scan,
            warnings,
        });
    }
    let Some(k) = cheaper.iter().position(|&c| c) else {
        return Ok(SwitchSearch {
            crossing: Crossing::Never,
            scan,
            warnings,
        });
    };
    let (mut a, mut b) = (xs[k - 1], xs[k]);
    while b / a > 1.0 + rel_tol {
        let mid = (a * b).sqrt();
        if f(mid)? < 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(SwitchSearch {
        crossing: Crossing::At((a * b).sqrt()),
        scan,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchingPoint {
    pub integration: Integration,
    pub node: String,
    pub n_dies: usize,
    pub crossing: Crossing,
    /// 2D-equivalent gate count at the crossing (0 or infinity when none).
    pub gate_count: f64,
    /// Equivalent 2D die area at the crossing (cm²).
    pub area_2d: f64,
    pub search: SwitchSearch,
}

/// Embodied carbon of `design` minus that of its 2D equivalent, with both
/// holding `gates` 2D-equivalent gates.
pub fn embodied_gap(design: &DesignSpec, env: &FabEnvironment, gates: f64) -> Result<f64> {
    let spec = design.with_total_gate_count(gates);
    Ok(embodied_carbon(&spec, env)? - embodied_carbon(&spec.equivalent_2d(), env)?)
}

/// Smallest 2D-equivalent gate count in `range` at which `design` has lower
/// embodied carbon than the same logic on one 2D die.
pub fn switching_point(
    design: &DesignSpec,
    env: &FabEnvironment,
    range: (f64, f64),
    rel_tol: f64,
) -> Result<SwitchingPoint> {
    let search = find_switching_point(|g| embodied_gap(design, env, g), range.0, range.1, rel_tol)?;
    let gate_count = search.crossing.value();
    let tech = &design.dies[0].technology;
    Ok(SwitchingPoint {
        integration: design.integration,
        node: tech.node_name.clone(),
        n_dies: design.n_dies(),
        crossing: search.crossing,
        gate_count,
        area_2d: if gate_count.is_finite() {
            area_2d(gate_count, tech)
        } else {
            gate_count
        },
        search,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoRow {
    pub design: String,
    pub gamma: f64,
    pub c_operational: f64,
    pub c_embodied_amortized: f64,
    pub c_total: f64,
    pub tcdp: f64,
    /// tCDP divided by the reference design's tCDP at γ = 1.
    pub normalized_tcdp: f64,
}

/// tCDP of every design at every γ, normalized to the reference design at
/// γ = 1.
pub fn gamma_pareto(
    designs: &[(String, Config)],
    gammas: &[f64],
    reference: usize,
    basis: GammaBasis,
) -> Result<Vec<ParetoRow>> {
    if reference >= designs.len() {
        return Err(Error::InvalidValue {
            path: "reference".into(),
            message: format!("reference {reference} but only {} designs", designs.len()),
        });
    }
    if let Some(&g) = gammas.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
        return Err(Error::OutOfRange {
            path: "gamma".into(),
            value: g,
            bound: "[0, inf)".into(),
        });
    }
    let opts = EvalOptions { gamma: 1.0, basis };
    let evaluated: Vec<(CarbonBreakdown, f64)> = designs
        .par_iter()
        .map(|(_, cfg)| evaluate(&cfg.design, &cfg.environment, &opts).map(|e| (e.carbon, cfg.design.usage.delay)))
        .collect::<Result<_>>()?;
    let (ref_carbon, ref_delay) = &evaluated[reference];
    let norm = ref_carbon.with_gamma(1.0, *ref_delay).metrics.tcdp;
    let mut rows = Vec::with_capacity(designs.len() * gammas.len());
    for ((label, _), (carbon, delay)) in designs.iter().zip(&evaluated) {
        for &gamma in gammas {
            let at = carbon.with_gamma(gamma, *delay);
            rows.push(ParetoRow {
                design: label.clone(),
                gamma,
                c_operational: at.c_operational,
                c_embodied_amortized: at.c_embodied_amortized,
                c_total: at.c_total,
                tcdp: at.metrics.tcdp,
                normalized_tcdp: at.metrics.tcdp / norm,
            });
        }
    }
    Ok(rows)
}
