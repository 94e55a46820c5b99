// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use carbon3d_core::carbon::{dies_per_wafer, GammaBasis};
use carbon3d_core::explorer::{
    gamma_pareto, sweep, switching_point, Crossing, SweepAxis, SweepOptions, DEFAULT_REL_TOL,
};
use carbon3d_core::geometry::{avg_wire_length, tsv_count_f2b, RentPair};
use carbon3d_core::params::Stacking;
use carbon3d_core::params::{load_config, Config, Integration, Registry};
use carbon3d_core::pipeline::{evaluate, EvalOptions};
use carbon3d_core::report::{read_csv_rows, sweep_report};
use carbon3d_core::yieldmodel::{compose_25d, compose_3d, die_yield_negbin};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn registry() -> Registry {
    Registry::bundled().unwrap()
}

fn usage() -> Value {
    json!({"t_app": 8760.0, "t_exe": 43800.0, "power_density": 0.2, "delay": 1e-3})
}

/// Embodied carbon of a monolithic die evaluated directly from the closed
/// forms, without the library's geometry, yield or carbon modules.
fn direct_2d(cfg: &Config) -> f64 {
    let spec = &cfg.design;
    let env = &cfg.environment;
    let die = &spec.dies[0];
    let t = &die.technology;
    let (area, layers) = match (die.explicit_area, die.explicit_beol) {
        (Some(a), Some(l)) => (a, l as usize),
        _ => {
            let n = die.gate_count.or(spec.gate_count).unwrap();
            let a = n * t.beta * t.lambda * t.lambda;
            let w = &die.wiring;
            let p = w.rent_p;
            let lbar = 2.0 / 9.0 * (1.0 - 4f64.powf(p - 1.0)) / (1.0 - n.powf(p - 1.0))
                * ((7.0 * n.powf(p - 0.5) - 1.0) / (4f64.powf(p - 0.5) - 1.0)
                    - (1.0 - n.powf(p - 1.5)) / (1.0 - 4f64.powf(p - 1.5)));
            let demand =
                w.fanout_fo * n * lbar * (t.beta * t.lambda * t.lambda).sqrt() * w.wire_pitch_omega / w.utilization_eta;
            let needed = (demand / a).ceil().max(1.0);
            let max = t.max_beol_layers as f64;
            match die.explicit_beol {
                Some(l) => (a, l as usize),
                None if needed > max => (demand / max, t.max_beol_layers as usize),
                None => (a, needed as usize),
            }
        }
    };
    let epa = t.epa_feol + t.epa_mol + t.epa_beol_per_layer[..layers].iter().sum::<f64>();
    let d = env.wafer_diameter;
    let wafer_area = PI * (d / 2.0) * (d / 2.0);
    let c_wafer = (env.ci_fab * epa + t.gpa + t.mpa) * wafer_area;
    let dpw = (wafer_area / area - PI * d / (2.0 * area).sqrt()).floor().max(1.0);
    let y = (1.0 + area * t.defect_density_d0 / t.cluster_alpha).powf(-t.cluster_alpha);
    c_wafer / (dpw * y) + spec.packaging.cpa_packaging * spec.packaging.s_package_25d * area
}

fn criterion_1(rng: &mut ChaCha8Rng) -> Outcome {
    let reg = registry();
    let nodes = reg.node_names();
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let node = *nodes.choose(rng).unwrap();
        let max = reg.resolve_technology(node).unwrap().max_beol_layers;
        let die = if k % 2 == 0 {
            json!({"technology": node, "area": rng.gen_range(0.05..4.0), "beol_layers": rng.gen_range(1..=max)})
        } else {
            json!({"technology": node, "gate_count": 10f64.powf(rng.gen_range(7.0..10.0))})
        };
        let doc = json!({"design": {"integration": "mono_2d", "dies": [die]}, "usage": usage()});
        let mut cfg = load_config(&doc, &reg).map_err(|e| e.to_string())?;
        let t = &mut cfg.design.dies[0].technology;
        t.epa_feol = rng.gen_range(0.24..0.56);
        t.epa_mol = rng.gen_range(0.0..0.3);
        t.gpa = rng.gen_range(0.0..0.5);
        t.mpa = rng.gen_range(0.0..1.0);
        t.defect_density_d0 = rng.gen_range(0.0..0.5);
        t.cluster_alpha = rng.gen_range(0.5..10.0);
        cfg.environment.ci_fab = rng.gen_range(0.03..0.7);
        cfg.environment.wafer_diameter = *[20.0, 30.0, 45.0].choose(rng).unwrap();
        cfg.design.packaging.cpa_packaging = rng.gen_range(0.0..0.3);
        cfg.design.packaging.s_package_25d = rng.gen_range(1.0..5.0);
        let ev = evaluate(&cfg.design, &cfg.environment, &EvalOptions::default()).map_err(|e| e.to_string())?;
        let direct = direct_2d(&cfg);
        worst = worst.max(rel(ev.carbon.c_embodied_overall, direct));
    }
    let msg = format!("max relative error {worst:.2e} over 100 random sets (limit 1e-12)");
    if worst < 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Outcome {
    let oracles: Value = serde_json::from_str(include_str!("data/oracles.json")).unwrap();
    let s = &oracles["scalars"];
    let reference = |key: &str| -> f64 { s[key]["raw"].as_str().unwrap().parse().unwrap() };
    let mut failures = Vec::new();
    let mut notes = Vec::new();

    let dpw = dies_per_wafer(30.0, 1.0).unwrap();
    notes.push(format!("DPW={dpw}"));
    if dpw != 640 || reference("dpw_30cm_1cm2").floor() as u64 != 640 {
        failures.push(format!("dies_per_wafer(30, 1) = {dpw}, expected 640"));
    }
    let y = die_yield_negbin(1.0, 0.1, 3.0);
    notes.push(format!("Y={y:.6}"));
    if (y - 0.9063).abs() > 5e-5 || (reference("negbin_a1_d01_alpha3") - 0.9063).abs() > 5e-5 {
        failures.push(format!("negbin(1, 0.1, 3) = {y}, expected 0.9063 ± 5e-5"));
    }
    let x = tsv_count_f2b(1e6, 1e6, &RentPair::uniform(1.0, 4.0, 0.6));
    let raw = reference("rent_symmetric_k4_p06_1e6");
    notes.push(format!("X_TSV={x} (reference raw {raw:.4})"));
    if x != 7711 {
        failures.push(format!(
            "symmetric Rent TSV count = {x}, expected 7711; the reference raw value is {raw:.6}, whose ceiling is {}",
            raw.ceil()
        ));
    }
    let l = avg_wire_length(0.6, 4.0);
    notes.push(format!("L={l:.4}"));
    if (l - 10.30).abs() > 0.01 || (reference("avg_wire_length_p06_n4") - 10.30).abs() > 0.01 {
        failures.push(format!("average wire length = {l}, expected 10.30 ± 0.01"));
    }
    if failures.is_empty() {
        Ok(notes.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Outcome {
    let mut perfect_cases = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=5);
        let all_perfect = rng.gen_bool(0.1);
        let dies: Vec<f64> = (0..n)
            .map(|_| {
                if all_perfect || rng.gen_bool(0.1) {
                    1.0
                } else {
                    rng.gen_range(0.01..1.0)
                }
            })
            .collect();
        let bonds: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.5..=1.0)).collect();
        let d2w = compose_3d(Stacking::D2W, &dies, &bonds).map_err(|e| e.to_string())?;
        let w2w = compose_3d(Stacking::W2W, &dies, &bonds).map_err(|e| e.to_string())?;
        let perfect = dies.iter().all(|&y| y == 1.0);
        perfect_cases += perfect as usize;
        if w2w.effective_die_y.iter().zip(&d2w.effective_die_y).any(|(w, d)| w > d) {
            return Err(format!("W2W above D2W for dies {dies:?}, bonds {bonds:?}"));
        }
        if (w2w.effective_die_y == d2w.effective_die_y) != perfect {
            return Err(format!("equality does not match all-perfect dies for {dies:?}"));
        }
        let sub = rng.gen_range(0.5..=1.0);
        let bonds_25: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=1.0)).collect();
        let mut all = vec![d2w, w2w];
        for integ in [Integration::MCM, Integration::InFOChipFirst] {
            all.push(compose_25d(integ, &dies, &[], sub).map_err(|e| e.to_string())?);
        }
        for integ in [Integration::InFOChipLast, Integration::SiInterposer] {
            all.push(compose_25d(integ, &dies, &bonds_25, sub).map_err(|e| e.to_string())?);
        }
        for ctx in &all {
            let ys = ctx
                .effective_die_y
                .iter()
                .chain(&ctx.effective_bond_y)
                .chain([&ctx.substrate_y]);
            if let Some(y) = ys.into_iter().find(|&&y| !(y > 0.0 && y <= 1.0)) {
                return Err(format!("composed yield {y} outside (0, 1]"));
            }
        }
    }
    Ok(format!(
        "1000 vectors ({perfect_cases} with all dies perfect), 6 schemes each"
    ))
}

/// Random design with explicit die areas and BEOL counts so that every
/// parameter can be perturbed on its own.
fn random_design(rng: &mut ChaCha8Rng, reg: &Registry) -> Config {
    let integ = *Integration::ALL.choose(rng).unwrap();
    let nodes = reg.node_names();
    let n = match integ {
        Integration::Mono2D => 1,
        Integration::M3D => 2,
        _ => rng.gen_range(2..=4),
    };
    let node = *nodes.choose(rng).unwrap();
    let dies: Vec<Value> = (0..n)
        .map(|_| {
            let node = if integ.is_3d() {
                node
            } else {
                *nodes.choose(rng).unwrap()
            };
            let max = reg.resolve_technology(node).unwrap().max_beol_layers;
            json!({"technology": node, "area": rng.gen_range(0.05..3.0), "beol_layers": rng.gen_range(1..max)})
        })
        .collect();
    let mut design = json!({"integration": integ, "dies": dies});
    if integ.is_bonded_3d() {
        design["facing"] = json!(if n == 2 && rng.gen_bool(0.5) { "f2f" } else { "f2b" });
        design["stacking"] = json!(if rng.gen_bool(0.5) { "d2w" } else { "w2w" });
        design["signal_count_f2f"] = json!(rng.gen_range(0..200_000u64));
    }
    if integ == Integration::SiInterposer && rng.gen_bool(0.5) {
        design["bonding"] = json!({"profile": "micro", "interposer_yield_y": rng.gen_range(0.5..1.0)});
    }
    let doc = json!({
        "design": design,
        "environment": {"ci_fab": rng.gen_range(0.03..0.7), "ci_use": rng.gen_range(0.03..0.7)},
        "usage": {"t_app": rng.gen_range(100.0..8760.0), "t_exe": 43800.0,
                  "power_density": rng.gen_range(0.01..1.0), "delay": rng.gen_range(1e-4..1.0)}
    });
    load_config(&doc, reg).unwrap()
}

fn embodied(cfg: &Config) -> Result<f64, String> {
    evaluate(&cfg.design, &cfg.environment, &EvalOptions::default())
        .map(|e| e.carbon.c_embodied_overall)
        .map_err(|e| e.to_string())
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Outcome {
    let reg = registry();
    let mut counts = std::collections::BTreeMap::<&str, usize>::new();
    for _ in 0..500 {
        let base = random_design(rng, &reg);
        let before = embodied(&base)?;
        let mut next = base.clone();
        let i = rng.gen_range(0..next.design.n_dies());
        let choices = [
            "area",
            "d0",
            "beol",
            "cpa_packaging",
            "bond_yield",
            "rdl_yield",
            "interposer_yield",
        ];
        let what = *choices.choose(rng).unwrap();
        // +1 for nondecreasing parameters, -1 for yields
        let direction = match what {
            "area" => {
                let f = 1.0 + rng.gen_range(0.0..0.5);
                if next.design.integration == Integration::M3D {
                    next.design
                        .dies
                        .iter_mut()
                        .for_each(|d| d.explicit_area = d.explicit_area.map(|a| a * f));
                } else {
                    let a = next.design.dies[i].explicit_area.unwrap();
                    next.design.dies[i].explicit_area = Some(a * f);
                }
                1.0
            }
            "d0" => {
                next.design.dies[i].technology.defect_density_d0 += rng.gen_range(0.0..0.3);
                1.0
            }
            "beol" => {
                let d = &mut next.design.dies[i];
                let b = d.explicit_beol.unwrap();
                d.explicit_beol = Some(rng.gen_range(b..=d.technology.max_beol_layers));
                1.0
            }
            "cpa_packaging" => {
                next.design.packaging.cpa_packaging += rng.gen_range(0.0..0.2);
                1.0
            }
            "bond_yield" => {
                let y = next.design.bonding.bond_yield_y;
                next.design.bonding.bond_yield_y = rng.gen_range(y..=1.0);
                -1.0
            }
            "rdl_yield" => {
                let y = next.design.bonding.rdl_yield_y;
                next.design.bonding.rdl_yield_y = rng.gen_range(y..=1.0);
                -1.0
            }
            _ => {
                let y = next.design.bonding.interposer_yield_y.unwrap_or(0.3);
                next.design.bonding.interposer_yield_y = Some(rng.gen_range(y..=1.0));
                -1.0
            }
        };
        // interposer yield given explicitly: compare against the explicit base
        let before = if what == "interposer_yield" && base.design.bonding.interposer_yield_y.is_none() {
            let mut b = base.clone();
            b.design.bonding.interposer_yield_y = Some(0.3);
            embodied(&b)?
        } else {
            before
        };
        let after = embodied(&next)?;
        if direction * (after - before) < -1e-12 * before.abs() {
            return Err(format!(
                "{what} perturbation of {} moved embodied carbon the wrong way: {before} -> {after}",
                base.design.integration
            ));
        }
        *counts.entry(what).or_default() += 1;
    }
    Ok(format!("500 perturbations {counts:?}"))
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Outcome {
    let reg = registry();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let cfg = random_design(rng, &reg);
        let at = |gamma: f64| {
            evaluate(
                &cfg.design,
                &cfg.environment,
                &EvalOptions {
                    gamma,
                    basis: GammaBasis::Amortized,
                },
            )
            .map(|e| e.carbon)
            .map_err(|e| e.to_string())
        };
        let (c0, c1, c2) = (at(0.0)?, at(1.0)?, at(2.0)?);
        let slope = c1.c_total - c0.c_total;
        worst = worst
            .max(rel(c0.c_total + 2.0 * slope, c2.c_total))
            .max(rel(c0.c_total, c0.c_operational))
            .max(rel(slope, c0.c_embodied_amortized));
    }
    let msg = format!("max relative deviation {worst:.2e} over 50 designs (limit 1e-12)");
    if worst < 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn linear_fixture(signals: u64, s_3d: f64, s_25d: f64) -> Config {
    let mut doc: Value = serde_json::from_str(include_str!("data/linear_switch.json")).unwrap();
    doc["design"]["signal_count_f2f"] = json!(signals);
    doc["design"]["packaging"]["s_package_3d"] = json!(s_3d);
    doc["design"]["packaging"]["s_package_25d"] = json!(s_25d);
    load_config(&doc, &registry()).unwrap()
}

/// Closed-form crossing of the linear fixture:
/// C_2D = a·g, C_3D = b·g + c.
fn linear_crossing(cfg: &Config) -> f64 {
    let t = &cfg.design.dies[0].technology;
    let env = &cfg.environment;
    let pkg = &cfg.design.packaging;
    let gate = t.beta * t.lambda * t.lambda;
    let k = env.ci_fab * (t.epa_feol + t.epa_mol + t.epa_beol_per_layer[0]) + t.gpa + t.mpa;
    let bond = env.ci_bonding * cfg.design.bonding.epa_d2w;
    let tsv = cfg.design.signal_count_f2f as f64 * t.via_pitch * t.via_pitch;
    let a = (k + pkg.cpa_packaging * pkg.s_package_25d) * gate;
    let b = (k + pkg.cpa_packaging * pkg.s_package_3d / 2.0 + bond / 2.0) * gate;
    let c = tsv * (k + pkg.cpa_packaging * pkg.s_package_3d + bond);
    c / (a - b)
}

fn criterion_6() -> Outcome {
    let range = (1e6, 1e12);
    let crossing = linear_fixture(100_000, 1.0, 4.0);
    let expected = linear_crossing(&crossing);
    let found =
        switching_point(&crossing.design, &crossing.environment, range, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
    let Crossing::At(g) = found.crossing else {
        return Err(format!("no crossing found, expected {expected:.6e}"));
    };
    let err = rel(g, expected);
    if err >= 1e-3 {
        return Err(format!(
            "crossing {g:.6e} vs closed form {expected:.6e} (rel {err:.2e})"
        ));
    }
    let always = linear_fixture(0, 1.0, 4.0);
    let a = switching_point(&always.design, &always.environment, range, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
    let never = linear_fixture(100_000, 2.0, 1.0);
    let n = switching_point(&never.design, &never.environment, range, DEFAULT_REL_TOL).map_err(|e| e.to_string())?;
    if a.gate_count != 0.0 {
        return Err(format!("all-cheaper fixture gave {}", a.gate_count));
    }
    if n.gate_count != f64::INFINITY {
        return Err(format!("never-cheaper fixture gave {}", n.gate_count));
    }
    Ok(format!(
        "crossing {g:.6e} vs closed form {expected:.6e} (rel {err:.2e}); always-cheaper -> 0; never-cheaper -> inf"
    ))
}

fn trend_config(reg: &Registry, integration: &str, node: &str, area: f64) -> Config {
    let t = reg.resolve_technology(node).unwrap();
    let gates = area / (t.beta * t.lambda * t.lambda);
    let n = if integration == "mono_2d" { 1 } else { 2 };
    let dies: Vec<Value> = (0..n).map(|_| json!({"technology": node})).collect();
    let doc = json!({
        "design": {"integration": integration, "gate_count": gates, "dies": dies},
        "usage": usage()
    });
    load_config(&doc, reg).unwrap()
}

fn criterion_7() -> Outcome {
    let reg = registry();
    let areas = [0.25, 0.5, 1.0, 2.0, 4.0];
    let nodes = ["28nm", "14nm", "7nm"];
    let mut beaten = 0;
    for node in nodes {
        for area in areas {
            let c = |integ: &str| embodied(&trend_config(&reg, integ, node, area));
            let micro = c("micro_3d")?;
            let hybrid = c("hybrid_3d")?;
            let m3d = c("m3d")?;
            if hybrid > micro || m3d > micro {
                return Err(format!(
                    "{node}, {area} cm²: hybrid {hybrid:.4}, m3d {m3d:.4} vs micro {micro:.4}"
                ));
            }
            let first = c("info_chip_first")?;
            let last = c("info_chip_last")?;
            if first < last {
                return Err(format!(
                    "{node}, {area} cm²: chip-first {first:.4} < chip-last {last:.4}"
                ));
            }
            let designs: Vec<(String, Config)> = ["mono_2d", "micro_3d", "hybrid_3d", "m3d"]
                .iter()
                .map(|i| (i.to_string(), trend_config(&reg, i, node, area)))
                .collect();
            let rows = gamma_pareto(&designs, &[0.1], 0, GammaBasis::Amortized).map_err(|e| e.to_string())?;
            let base = rows[0].normalized_tcdp;
            if rows[1..].iter().any(|r| r.normalized_tcdp < base) {
                beaten += 1;
            } else {
                return Err(format!(
                    "{node}, {area} cm²: no 3D design beats 2D on tCDP at gamma 0.1"
                ));
            }
        }
    }
    Ok(format!(
        "15 points: hybrid, m3d <= micro; chip-first >= chip-last; 3D beats 2D at gamma 0.1 at {beaten}/15"
    ))
}

fn closure_sweep() -> (Value, Vec<SweepAxis>) {
    let template = json!({
        "design": {"integration": "micro_3d", "gate_count": 1e9,
                   "dies": [{"technology": "7nm"}, {"technology": "7nm"}]},
        "usage": usage()
    });
    let integrations: Vec<Value> = [
        "micro_3d",
        "hybrid_3d",
        "m3d",
        "mcm",
        "info_chip_first",
        "info_chip_last",
        "si_interposer",
    ]
    .iter()
    .map(|s| json!(s))
    .collect();
    let axes = vec![
        SweepAxis::new("integration", integrations),
        SweepAxis::new("technology", vec![json!("28nm"), json!("7nm"), json!("3nm")]),
        SweepAxis::new("gate_count", vec![json!(1e8), json!(1e9), json!(5e9)]),
    ];
    (template, axes)
}

fn criterion_8() -> Outcome {
    let (template, axes) = closure_sweep();
    let opts = SweepOptions {
        baseline: true,
        ..Default::default()
    };
    let result = sweep(&template, &registry(), &axes, &opts).map_err(|e| e.to_string())?;
    for row in &result.rows {
        let c = &row.evaluation.carbon;
        if c.c_embodied_overall != c.c_die + c.c_bonding + c.c_packaging + c.c_substrate {
            return Err(format!("closure broken for {:?}", row.values));
        }
        if c.c_die != c.dies.iter().map(|d| d.c_die).sum::<f64>() {
            return Err(format!("per-die sum broken for {:?}", row.values));
        }
    }
    let report = sweep_report(&result, "acceptance".into());
    let bytes = report.to_csv().map_err(|e| e.to_string())?;
    let (header, rows) = read_csv_rows(&bytes).map_err(|e| e.to_string())?;
    if rows.len() != report.rows.len() || header.len() != report.columns.len() {
        return Err(format!(
            "CSV shape {}x{} vs {}x{}",
            rows.len(),
            header.len(),
            report.rows.len(),
            report.columns.len()
        ));
    }
    let mut compared = 0;
    for (parsed, original) in rows.iter().zip(&report.rows) {
        for (text, cell) in parsed.iter().zip(original) {
            if let Some(v) = cell.as_f64() {
                let back: f64 = text.parse().map_err(|_| format!("unparseable {text:?}"))?;
                if rel(back, v) > 5e-9 {
                    return Err(format!("{text} vs {v}"));
                }
                compared += 1;
            }
        }
    }
    Ok(format!(
        "{} rows closed exactly; {compared} CSV numbers match to 9 significant digits",
        result.rows.len()
    ))
}

fn criterion_9() -> Outcome {
    let template = json!({
        "design": {"integration": "hybrid_3d", "gate_count": 1e9,
                   "dies": [{"technology": "7nm"}, {"technology": "7nm"}]},
        "usage": usage()
    });
    let values = |lo: f64, step: f64| (0..10).map(|i| json!(lo + step * i as f64)).collect::<Vec<_>>();
    let axes = vec![
        SweepAxis::new("gate_count", values(1e8, 4e8)),
        SweepAxis::new("environment.ci_fab", values(0.05, 0.06)),
        SweepAxis::new("usage.t_app", values(1000.0, 3000.0)),
    ];
    let run = || -> Result<Vec<u8>, String> {
        let r = sweep(&template, &registry(), &axes, &SweepOptions::default()).map_err(|e| e.to_string())?;
        sweep_report(&r, "acceptance".into())
            .to_csv()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    let rows = a
        .split(|&c| c == b'\n')
        .filter(|l| !l.is_empty() && l[0] != b'#')
        .count()
        - 1;
    if rows != 1000 {
        return Err(format!("expected 1000 rows, got {rows}"));
    }
    if a == b {
        Ok(format!("two 1000-row sweeps, {} identical CSV bytes", a.len()))
    } else {
        Err("CSV output differs between runs".into())
    }
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca7b);
    let criteria: Vec<(&str, Outcome)> = vec![
        ("2D reduction", criterion_1(&mut rng)),
        ("formula oracles", criterion_2()),
        ("yield composition", criterion_3(&mut rng)),
        ("monotonicity", criterion_4(&mut rng)),
        ("gamma affinity", criterion_5(&mut rng)),
        ("switching points", criterion_6()),
        ("default-fixture trends", criterion_7()),
        ("closure and CSV round trip", criterion_8()),
        ("determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in criteria.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS  {}  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
