// SPDX-License-Identifier: Apache-2.0

//! Embodied, operational and total carbon, and the CDP/CEP/tCDP metrics.
//!
//! All results are in kg CO₂-equivalent.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::StackGeometry;
use crate::params::{
    BondingProfile, DesignSpec, FabEnvironment, Integration, Stacking, TechnologyProfile, UsageProfile,
};
use crate::yieldmodel::YieldContext;

/// Which embodied figure γ multiplies in the total.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaBasis {
    #[default]
    Amortized,
    Overall,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaferCost {
    /// Fab energy per wafer area (kWh/cm²).
    pub epa_total: f64,
    pub c_wafer: f64,
    pub wafer_area: f64,
}

/// Carbon of one die (or M3D tier).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DieCarbon {
    pub wafer: WaferCost,
    pub dpw: u64,
    pub yield_y: f64,
    pub c_die: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub cdp: f64,
    pub cep: f64,
    pub tcdp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarbonBreakdown {
    pub dies: Vec<DieCarbon>,
    pub c_die: f64,
    pub c_bonding: f64,
    pub c_packaging: f64,
    pub c_substrate: f64,
    pub c_embodied_overall: f64,
    /// Operational energy over the application run-time (kWh).
    pub energy: f64,
    pub c_operational: f64,
    pub c_embodied_amortized: f64,
    pub gamma: f64,
    pub gamma_basis: GammaBasis,
    pub c_total: f64,
    pub metrics: Metrics,
}

/// Embodied terms only; see [`amortize_and_total`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Embodied {
    pub dies: Vec<DieCarbon>,
    pub c_die: f64,
    pub c_bonding: f64,
    pub c_packaging: f64,
    pub c_substrate: f64,
    pub c_embodied_overall: f64,
    pub warnings: Vec<String>,
}

/// Unfloored gross dies per wafer `π(d/2)²/A − πd/√(2A)`.
pub fn dies_per_wafer_raw(wafer_diameter: f64, die_area: f64) -> f64 {
    let r = wafer_diameter / 2.0;
    PI * r * r / die_area - PI * wafer_diameter / (2.0 * die_area).sqrt()
}

/// Gross dies per wafer, at least 1 for any die that fits on the wafer.
///
/// A die fits when a square of its area fits inside the wafer circle,
/// `A ≤ d²/2`.
pub fn dies_per_wafer(wafer_diameter: f64, die_area: f64) -> Result<u64> {
    if !(die_area > 0.0) {
        return Err(Error::NonPositiveArea(die_area));
    }
    if die_area > wafer_diameter * wafer_diameter / 2.0 {
        return Err(Error::DieLargerThanWafer {
            area: die_area,
            diameter: wafer_diameter,
        });
    }
    Ok(dies_per_wafer_raw(wafer_diameter, die_area).floor().max(1.0) as u64)
}

fn fab_energy(tech: &TechnologyProfile, front_end: bool, beol_layers: u32) -> Result<f64> {
    if beol_layers > tech.max_beol_layers || beol_layers as usize > tech.epa_beol_per_layer.len() {
        return Err(Error::LayerCountExceedsProfile {
            node: tech.node_name.clone(),
            layers: beol_layers,
            max: tech.max_beol_layers.min(tech.epa_beol_per_layer.len() as u32),
        });
    }
    let front = if front_end { tech.epa_feol + tech.epa_mol } else { 0.0 };
    Ok(front + tech.epa_beol_per_layer[..beol_layers as usize].iter().sum::<f64>())
}

fn wafer_cost(tech: &TechnologyProfile, front_end: bool, beol_layers: u32, env: &FabEnvironment) -> Result<WaferCost> {
    let epa_total = fab_energy(tech, front_end, beol_layers)?;
    let wafer_area = env.wafer_area();
    let materials = if front_end { tech.gpa + tech.mpa } else { 0.0 };
    Ok(WaferCost {
        epa_total,
        c_wafer: (env.ci_fab * epa_total + materials) * wafer_area,
        wafer_area,
    })
}

/// Carbon of one processed wafer: FEOL, MOL and `beol_layers` metal layers,
/// plus direct gas and material emissions.
pub fn wafer_carbon(tech: &TechnologyProfile, beol_layers: u32, env: &FabEnvironment) -> Result<WaferCost> {
    wafer_cost(tech, true, beol_layers, env)
}

/// Bonding carbon per wafer for D2W or W2W.
pub fn bonding_wafer_carbon(
    stacking: Stacking,
    bonding: &BondingProfile,
    env: &FabEnvironment,
    wafer_area: f64,
) -> f64 {
    env.ci_bonding * bonding.epa(stacking) * wafer_area
}

/// Die, bonding, packaging and substrate carbon of a design.
pub fn embodied_breakdown(
    spec: &DesignSpec,
    geom: &StackGeometry,
    yields: &YieldContext,
    env: &FabEnvironment,
) -> Result<Embodied> {
    let n = spec.n_dies();
    if geom.dies.len() != n || yields.effective_die_y.len() != n {
        return Err(Error::CardinalityMismatch {
            what: "die",
            expected: n,
            got: geom.dies.len().min(yields.effective_die_y.len()),
        });
    }
    let mut warnings = Vec::new();
    let mut dpw_of = |area: f64, what: &str| -> Result<u64> {
        let dpw = dies_per_wafer(env.wafer_diameter, area)?;
        if dies_per_wafer_raw(env.wafer_diameter, area) < 1.0 {
            warnings.push(format!(
                "{what}: {area} cm² leaves less than one gross die per wafer; using 1"
            ));
        }
        Ok(dpw)
    };

    let m3d_beol = geom.dies.iter().map(|d| d.beol_layers).max().unwrap_or(0);
    let mut dies = Vec::with_capacity(n);
    for i in 0..n {
        let tech = &spec.dies[i].technology;
        let g = &geom.dies[i];
        let wafer = if spec.integration == Integration::M3D {
            // each tier pays its own front end; the shared metal stack is
            // built once, on top
            let layers = if i == 0 { m3d_beol } else { 0 };
            wafer_cost(tech, true, layers, env)?
        } else {
            wafer_carbon(tech, g.beol_layers, env)?
        };
        let dpw = dpw_of(g.total_area, &format!("die {i}"))?;
        let yield_y = yields.effective_die_y[i];
        dies.push(DieCarbon {
            wafer,
            dpw,
            yield_y,
            c_die: wafer.c_wafer / (dpw as f64 * yield_y),
        });
    }
    let c_die: f64 = dies.iter().map(|d| d.c_die).sum();
    let c_packaging = spec.packaging.cpa_packaging * geom.package_area;

    let wafer_area = env.wafer_area();
    let (c_bonding, c_substrate) = match spec.integration {
        Integration::Micro3D | Integration::Hybrid3D => {
            let per_wafer = bonding_wafer_carbon(spec.stacking, &spec.bonding, env, wafer_area);
            let bonding = (0..n - 1)
                .map(|i| per_wafer / (dies[i + 1].dpw as f64 * yields.effective_bond_y[i]))
                .sum();
            (bonding, 0.0)
        }
        Integration::InFOChipFirst => (0.0, spec.bonding.cpa_rdl * geom.substrate_area / yields.substrate_y),
        Integration::InFOChipLast => {
            let bond_y: f64 = yields.effective_bond_y.first().copied().unwrap_or(1.0);
            (
                spec.bonding.cpa_bonding_info * geom.substrate_area / bond_y,
                spec.bonding.cpa_rdl * geom.substrate_area / yields.substrate_y,
            )
        }
        Integration::SiInterposer => {
            let ip = spec.interposer.as_ref().ok_or_else(|| Error::MissingField {
                path: "design.interposer".into(),
            })?;
            let dpw = dpw_of(geom.substrate_area, "interposer")? as f64;
            let per_wafer = bonding_wafer_carbon(Stacking::D2W, &spec.bonding, env, wafer_area);
            let bonding = per_wafer / dpw * yields.effective_bond_y.iter().map(|y| 1.0 / y).sum::<f64>();
            let wafer = wafer_carbon(&ip.technology, ip.beol_layers, env)?;
            (bonding, wafer.c_wafer / (dpw * yields.substrate_y))
        }
        Integration::Mono2D | Integration::M3D | Integration::MCM => (0.0, 0.0),
    };
    Ok(Embodied {
        c_embodied_overall: c_die + c_bonding + c_packaging + c_substrate,
        dies,
        c_die,
        c_bonding,
        c_packaging,
        c_substrate,
        warnings,
    })
}

/// Operational energy (kWh): the override when present, otherwise power
/// density × active area × run-time.
pub fn operational_energy(usage: &UsageProfile, active_area: f64) -> f64 {
    match usage.energy_override {
        Some(e) => e,
        None => usage.power_density.unwrap_or(0.0) * active_area * usage.t_app / 1000.0,
    }
}

pub fn operational_carbon(usage: &UsageProfile, active_area: f64, env: &FabEnvironment) -> f64 {
    env.ci_use * operational_energy(usage, active_area)
}

pub fn metrics(c_embodied: f64, c_total: f64, delay: f64, energy: f64) -> Metrics {
    Metrics {
        cdp: c_embodied * delay,
        cep: c_embodied * energy,
        tcdp: c_total * delay,
    }
}

/// Completes a breakdown with the amortized embodied carbon, the γ-weighted
/// total and the metrics. CDP and CEP use the amortized embodied carbon.
pub fn amortize_and_total(
    embodied: Embodied,
    usage: &UsageProfile,
    energy: f64,
    c_operational: f64,
    gamma: f64,
    basis: GammaBasis,
) -> CarbonBreakdown {
    let c_embodied_amortized = if usage.t_app == usage.t_exe {
        embodied.c_embodied_overall
    } else {
        embodied.c_embodied_overall * usage.t_app / usage.t_exe
    };
    let weighted = match basis {
        GammaBasis::Amortized => c_embodied_amortized,
        GammaBasis::Overall => embodied.c_embodied_overall,
    };
    let c_total = c_operational + gamma * weighted;
    CarbonBreakdown {
        dies: embodied.dies,
        c_die: embodied.c_die,
        c_bonding: embodied.c_bonding,
        c_packaging: embodied.c_packaging,
        c_substrate: embodied.c_substrate,
        c_embodied_overall: embodied.c_embodied_overall,
        energy,
        c_operational,
        c_embodied_amortized,
        gamma,
        gamma_basis: basis,
        c_total,
        metrics: metrics(c_embodied_amortized, c_total, usage.delay, energy),
    }
}

impl CarbonBreakdown {
    /// The same breakdown re-weighted with another γ.
    pub fn with_gamma(&self, gamma: f64, delay: f64) -> CarbonBreakdown {
        let weighted = match self.gamma_basis {
            GammaBasis::Amortized => self.c_embodied_amortized,
            GammaBasis::Overall => self.c_embodied_overall,
        };
        let c_total = self.c_operational + gamma * weighted;
        CarbonBreakdown {
            gamma,
            c_total,
            metrics: metrics(self.c_embodied_amortized, c_total, delay, self.energy),
            ..self.clone()
        }
    }
}
