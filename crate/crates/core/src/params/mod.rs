// SPDX-License-Identifier: Apache-2.0

//! Design, technology and environment parameters.
//!
//! Everything here is plain immutable data in canonical units: cm for
//! lengths, cm² for areas, kWh for energy, kg CO₂ for emissions, hours for
//! lifetimes and seconds for task delay. [`load_config`] turns a JSON
//! configuration document into validated profiles, resolving technology nodes
//! and bonding/packaging technologies against a fixture [`Registry`].

mod config;
mod registry;
pub mod units;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use config::{load_config, load_config_file, Config};
pub use registry::{NodeFixture, Registry, FIXTURES_ENV};

/// Default IO-driver area overhead ratio when a profile does not give one.
pub const DEFAULT_IO_OVERHEAD_RATIO: f64 = 0.1;

/// Per-node fab parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechnologyProfile {
    pub node_name: String,
    /// Feature size (cm).
    pub lambda: f64,
    /// Empirical scaling term; `beta * lambda²` is the average area per gate.
    pub beta: f64,
    pub epa_feol: f64,
    pub epa_mol: f64,
    /// Fab energy of each BEOL metal layer, bottom layer first (kWh/cm²).
    pub epa_beol_per_layer: Vec<f64>,
    pub max_beol_layers: u32,
    /// Direct fab gas emissions (kg CO₂/cm²).
    pub gpa: f64,
    /// Material procurement emissions (kg CO₂/cm²).
    pub mpa: f64,
    pub defect_density_d0: f64,
    pub cluster_alpha: f64,
    /// TSV dimension (cm).
    pub via_pitch: f64,
    #[serde(default = "default_io_overhead")]
    pub io_overhead_ratio: f64,
}

fn default_io_overhead() -> f64 {
    DEFAULT_IO_OVERHEAD_RATIO
}

impl TechnologyProfile {
    /// Average area of one gate, `beta * lambda²` (cm²).
    pub fn gate_area(&self) -> f64 {
        self.beta * self.lambda * self.lambda
    }

    /// Side length of the average gate footprint (cm).
    pub fn gate_pitch(&self) -> f64 {
        self.gate_area().sqrt()
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        positive(path, "lambda", self.lambda)?;
        positive(path, "beta", self.beta)?;
        non_negative(path, "epa_feol", self.epa_feol)?;
        non_negative(path, "epa_mol", self.epa_mol)?;
        for (j, e) in self.epa_beol_per_layer.iter().enumerate() {
            non_negative(path, &format!("epa_beol_per_layer[{j}]"), *e)?;
        }
        if self.max_beol_layers < 1 {
            return Err(out_of_range(path, "max_beol_layers", 0.0, ">= 1"));
        }
        if (self.epa_beol_per_layer.len() as u32) < self.max_beol_layers {
            return Err(Error::InvalidValue {
                path: join(path, "epa_beol_per_layer"),
                message: format!(
                    "{} layer energies listed but max_beol_layers is {}",
                    self.epa_beol_per_layer.len(),
                    self.max_beol_layers
                ),
            });
        }
        non_negative(path, "gpa", self.gpa)?;
        non_negative(path, "mpa", self.mpa)?;
        non_negative(path, "defect_density_d0", self.defect_density_d0)?;
        positive(path, "cluster_alpha", self.cluster_alpha)?;
        non_negative(path, "via_pitch", self.via_pitch)?;
        within(path, "io_overhead_ratio", self.io_overhead_ratio, 0.0, 1.0)?;
        Ok(())
    }

    /// Checks the surveyed ranges that bundled fixtures are expected to honor.
    pub fn survey_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, v: f64, lo: f64, hi: f64| {
            if !(lo..=hi).contains(&v) {
                out.push(format!("{}: {name} = {v} outside [{lo}, {hi}]", self.node_name));
            }
        };
        check("epa_feol", self.epa_feol, 0.24, 0.56);
        check("epa_mol", self.epa_mol, 0.08, 0.23);
        for e in &self.epa_beol_per_layer {
            check("epa_beol_per_layer", *e, 0.6, 1.81);
        }
        check("gpa", self.gpa, 0.1, 0.5);
        check("via_pitch", self.via_pitch, 4e-4, 20e-4);
        check("io_overhead_ratio", self.io_overhead_ratio, 0.0, 1.0);
        match node_size_nm(&self.node_name) {
            Some(nm) => check("node size (nm)", nm, 3.0, 28.0),
            None => out.push(format!("{}: node name is not of the form <n>nm", self.node_name)),
        }
        out
    }
}

/// Parses `"7nm"` into `7.0`.
pub fn node_size_nm(name: &str) -> Option<f64> {
    name.trim().strip_suffix("nm")?.trim().parse().ok()
}

/// Grid carbon intensities and wafer size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FabEnvironment {
    pub ci_fab: f64,
    pub ci_use: f64,
    pub ci_bonding: f64,
    /// Wafer diameter (cm).
    pub wafer_diameter: f64,
}

impl FabEnvironment {
    /// Wafer area π(d/2)² (cm²).
    pub fn wafer_area(&self) -> f64 {
        let r = self.wafer_diameter / 2.0;
        std::f64::consts::PI * r * r
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        non_negative(path, "ci_fab", self.ci_fab)?;
        non_negative(path, "ci_use", self.ci_use)?;
        non_negative(path, "ci_bonding", self.ci_bonding)?;
        positive(path, "wafer_diameter", self.wafer_diameter)
    }

    pub fn survey_violations(&self) -> Vec<String> {
        [
            ("ci_fab", self.ci_fab),
            ("ci_use", self.ci_use),
            ("ci_bonding", self.ci_bonding),
        ]
        .into_iter()
        .filter(|(_, v)| !(0.030..=0.700).contains(v))
        .map(|(k, v)| format!("environment: {k} = {v} outside [0.03, 0.7]"))
        .collect()
    }
}

/// Rent's-rule and wiring parameters of one die.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WiringParameters {
    pub rent_k: f64,
    pub rent_p: f64,
    pub rent_alpha: f64,
    pub fanout_fo: f64,
    /// Wire pitch (cm).
    pub wire_pitch_omega: f64,
    pub utilization_eta: f64,
}

impl WiringParameters {
    pub fn validate(&self, path: &str) -> Result<()> {
        positive(path, "rent_k", self.rent_k)?;
        if !(self.rent_p > 0.0 && self.rent_p < 1.0) {
            return Err(out_of_range(path, "rent_p", self.rent_p, "(0, 1)"));
        }
        positive(path, "rent_alpha", self.rent_alpha)?;
        positive(path, "fanout_fo", self.fanout_fo)?;
        positive(path, "wire_pitch_omega", self.wire_pitch_omega)?;
        if !(self.utilization_eta > 0.0 && self.utilization_eta <= 1.0) {
            return Err(out_of_range(path, "utilization_eta", self.utilization_eta, "(0, 1]"));
        }
        Ok(())
    }
}

/// Bonding and 2.5D substrate parameters of one bonding technology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BondingProfile {
    pub epa_d2w: f64,
    pub epa_w2w: f64,
    /// InFO chip-to-RDL bonding carbon per area (kg CO₂/cm²).
    pub cpa_bonding_info: f64,
    /// RDL substrate carbon per area (kg CO₂/cm²).
    pub cpa_rdl: f64,
    /// Standalone yield of one bonding interface.
    pub bond_yield_y: f64,
    pub rdl_yield_y: f64,
    /// Standalone silicon interposer yield; computed from the interposer
    /// node's defect density when absent.
    #[serde(default)]
    pub interposer_yield_y: Option<f64>,
}

impl BondingProfile {
    pub fn epa(&self, stacking: Stacking) -> f64 {
        match stacking {
            Stacking::W2W => self.epa_w2w,
            Stacking::D2W | Stacking::NA => self.epa_d2w,
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        non_negative(path, "epa_d2w", self.epa_d2w)?;
        non_negative(path, "epa_w2w", self.epa_w2w)?;
        non_negative(path, "cpa_bonding_info", self.cpa_bonding_info)?;
        non_negative(path, "cpa_rdl", self.cpa_rdl)?;
        unit_yield(path, "bond_yield_y", self.bond_yield_y)?;
        unit_yield(path, "rdl_yield_y", self.rdl_yield_y)?;
        if let Some(y) = self.interposer_yield_y {
            unit_yield(path, "interposer_yield_y", y)?;
        }
        Ok(())
    }

    pub fn survey_violations(&self, name: &str) -> Vec<String> {
        [("epa_d2w", self.epa_d2w), ("epa_w2w", self.epa_w2w)]
            .into_iter()
            .filter(|(_, v)| !(0.9..=2.75).contains(v))
            .map(|(k, v)| format!("bonding {name}: {k} = {v} outside [0.9, 2.75]"))
            .collect()
    }
}

/// Package technology parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackagingProfile {
    pub cpa_packaging: f64,
    pub s_package_3d: f64,
    pub s_package_25d: f64,
    pub s_substrate_25d: f64,
}

impl PackagingProfile {
    pub fn validate(&self, path: &str) -> Result<()> {
        non_negative(path, "cpa_packaging", self.cpa_packaging)?;
        for (k, v) in [
            ("s_package_3d", self.s_package_3d),
            ("s_package_25d", self.s_package_25d),
            ("s_substrate_25d", self.s_substrate_25d),
        ] {
            if !(v >= 1.0) {
                return Err(out_of_range(path, k, v, ">= 1"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Integration {
    #[serde(rename = "mono_2d", alias = "2d", alias = "mono2d")]
    Mono2D,
    #[serde(rename = "micro_3d", alias = "micro")]
    Micro3D,
    #[serde(rename = "hybrid_3d", alias = "hybrid")]
    Hybrid3D,
    #[serde(rename = "m3d")]
    M3D,
    #[serde(rename = "mcm")]
    MCM,
    #[serde(rename = "info_chip_first", alias = "info_1")]
    InFOChipFirst,
    #[serde(rename = "info_chip_last", alias = "info_2")]
    InFOChipLast,
    #[serde(rename = "si_interposer", alias = "si_int")]
    SiInterposer,
}

impl Integration {
    pub const ALL: [Integration; 8] = [
        Integration::Mono2D,
        Integration::Micro3D,
        Integration::Hybrid3D,
        Integration::M3D,
        Integration::MCM,
        Integration::InFOChipFirst,
        Integration::InFOChipLast,
        Integration::SiInterposer,
    ];

    /// Vertically stacked (micro-bump, hybrid bond or monolithic).
    pub fn is_3d(self) -> bool {
        matches!(self, Self::Micro3D | Self::Hybrid3D | Self::M3D)
    }

    /// Side-by-side chiplets on a unifying substrate.
    pub fn is_25d(self) -> bool {
        matches!(
            self,
            Self::MCM | Self::InFOChipFirst | Self::InFOChipLast | Self::SiInterposer
        )
    }

    /// Stacks of separately fabricated dies joined by a bonding step.
    pub fn is_bonded_3d(self) -> bool {
        matches!(self, Self::Micro3D | Self::Hybrid3D)
    }

    pub fn has_io_overhead(self) -> bool {
        self == Self::Micro3D || self.is_25d()
    }

    /// Bonding technology whose profile applies by default.
    pub fn default_bonding(self) -> &'static str {
        match self {
            Self::Hybrid3D => "hybrid",
            _ => "micro",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Mono2D => "mono_2d",
            Self::Micro3D => "micro_3d",
            Self::Hybrid3D => "hybrid_3d",
            Self::M3D => "m3d",
            Self::MCM => "mcm",
            Self::InFOChipFirst => "info_chip_first",
            Self::InFOChipLast => "info_chip_last",
            Self::SiInterposer => "si_interposer",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        serde_json::from_value(serde_json::Value::String(name.to_string())).ok()
    }
}

impl fmt::Display for Integration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Facing {
    F2F,
    F2B,
    NA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stacking {
    D2W,
    W2W,
    NA,
}

/// One die (or M3D tier) of a design, resolved against its technology.
#[derive(Debug, Clone, PartialEq)]
pub struct DieSpec {
    pub gate_count: Option<f64>,
    pub explicit_area: Option<f64>,
    pub explicit_beol: Option<u32>,
    pub technology: TechnologyProfile,
    pub wiring: WiringParameters,
}

/// Usage phase of the device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsageProfile {
    /// Application run-time (hours).
    pub t_app: f64,
    /// Overall execution lifetime (hours).
    pub t_exe: f64,
    /// Power density while running (W/cm²).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_density: Option<f64>,
    /// Operational energy supplied by an external estimator (kWh).
    #[serde(default, rename = "energy", skip_serializing_if = "Option::is_none")]
    pub energy_override: Option<f64>,
    /// Time per task (s).
    #[serde(default = "default_delay")]
    pub delay: f64,
}

fn default_delay() -> f64 {
    1.0
}

impl UsageProfile {
    pub fn validate(&self, path: &str) -> Result<()> {
        positive(path, "t_app", self.t_app)?;
        positive(path, "t_exe", self.t_exe)?;
        if self.t_app > self.t_exe {
            return Err(Error::InvalidCombination(format!(
                "{}: t_app ({} h) exceeds t_exe ({} h)",
                path, self.t_app, self.t_exe
            )));
        }
        match (self.power_density, self.energy_override) {
            (None, None) => {
                return Err(Error::MissingField {
                    path: join(path, "power_density"),
                })
            }
            (pd, e) => {
                if let Some(pd) = pd {
                    non_negative(path, "power_density", pd)?;
                }
                if let Some(e) = e {
                    non_negative(path, "energy", e)?;
                }
            }
        }
        positive(path, "delay", self.delay)
    }
}

/// Silicon interposer manufacturing parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct InterposerSpec {
    pub technology: TechnologyProfile,
    pub beol_layers: u32,
}

/// Fully resolved 2D/2.5D/3D design.
///
/// Dies are ordered top of stack first: die 0 is farthest from the package,
/// the last die sits on the package substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    pub integration: Integration,
    pub facing: Facing,
    pub stacking: Stacking,
    /// 2D-equivalent gate count partitioned over the dies.
    pub gate_count: Option<f64>,
    pub area_ratios: Option<Vec<f64>>,
    /// Signals routed to the package through the bottom die of an F2F stack.
    pub signal_count_f2f: u64,
    pub dies: Vec<DieSpec>,
    pub bonding_name: String,
    pub bonding: BondingProfile,
    pub packaging_name: String,
    pub packaging: PackagingProfile,
    pub interposer: Option<InterposerSpec>,
    pub usage: UsageProfile,
}

impl DesignSpec {
    pub fn n_dies(&self) -> usize {
        self.dies.len()
    }

    /// Gate count of each die, where one can be determined.
    pub fn die_gate_counts(&self) -> Vec<Option<f64>> {
        match self.gate_count {
            Some(total) => {
                let n = self.dies.len();
                match &self.area_ratios {
                    Some(r) => {
                        let sum: f64 = r.iter().sum();
                        r.iter().map(|ri| Some(total * ri / sum)).collect()
                    }
                    None => vec![Some(total / n as f64); n],
                }
            }
            None => self.dies.iter().map(|d| d.gate_count).collect(),
        }
    }

    /// True when every die uses the same technology profile.
    pub fn is_homogeneous(&self) -> bool {
        self.dies.windows(2).all(|w| w[0].technology == w[1].technology)
    }

    /// The same design with its 2D-equivalent gate count replaced by `gates`;
    /// per-die gate counts and explicit areas are dropped.
    pub fn with_total_gate_count(&self, gates: f64) -> DesignSpec {
        let mut out = self.clone();
        out.gate_count = Some(gates);
        for die in &mut out.dies {
            die.gate_count = None;
            die.explicit_area = None;
        }
        out
    }

    /// Monolithic 2D design with the same total logic, technology of the top
    /// die, packaging and usage.
    pub fn equivalent_2d(&self) -> DesignSpec {
        let counts = self.die_gate_counts();
        let top = &self.dies[0];
        let gate_count = if counts.iter().all(Option::is_some) {
            Some(counts.iter().flatten().sum())
        } else {
            None
        };
        let explicit_area = if gate_count.is_none() {
            Some(
                self.dies
                    .iter()
                    .zip(&counts)
                    .map(|(d, g)| match (d.explicit_area, g) {
                        (Some(a), _) => a,
                        (None, Some(g)) => g * d.technology.gate_area(),
                        (None, None) => 0.0,
                    })
                    .sum(),
            )
        } else {
            None
        };
        let explicit_beol = if gate_count.is_none() {
            self.dies.iter().filter_map(|d| d.explicit_beol).max()
        } else {
            None
        };
        DesignSpec {
            integration: Integration::Mono2D,
            facing: Facing::NA,
            stacking: Stacking::NA,
            gate_count: None,
            area_ratios: None,
            signal_count_f2f: 0,
            dies: vec![DieSpec {
                gate_count,
                explicit_area,
                explicit_beol,
                technology: top.technology.clone(),
                wiring: top.wiring.clone(),
            }],
            bonding_name: self.bonding_name.clone(),
            bonding: self.bonding.clone(),
            packaging_name: self.packaging_name.clone(),
            packaging: self.packaging.clone(),
            interposer: None,
            usage: self.usage.clone(),
        }
    }

    /// Checks every structural invariant of the design.
    pub fn validate(&self) -> Result<()> {
        let n = self.dies.len();
        let integ = self.integration;
        match integ {
            Integration::Mono2D if n != 1 => {
                return Err(Error::InvalidCombination(format!(
                    "mono_2d designs have exactly one die, got {n}"
                )))
            }
            Integration::M3D if n != 2 => {
                return Err(Error::InvalidCombination(format!(
                    "m3d stacks have exactly 2 tiers, got {n}"
                )))
            }
            _ if integ != Integration::Mono2D && n < 2 => {
                return Err(Error::InvalidCombination(format!(
                    "{integ} needs at least 2 dies, got {n}"
                )))
            }
            _ => {}
        }
        let na_expected = !integ.is_3d();
        if na_expected != (self.facing == Facing::NA) || na_expected != (self.stacking == Stacking::NA) {
            return Err(Error::InvalidCombination(format!(
                "{integ} with facing {:?} and stacking {:?}; facing/stacking apply to 3D stacks only",
                self.facing, self.stacking
            )));
        }
        if self.facing == Facing::F2F && n != 2 {
            return Err(Error::InvalidCombination(format!(
                "F2F stacks hold at most 2 dies, got {n}"
            )));
        }
        if let Some(g) = self.gate_count {
            positive("design", "gate_count", g)?;
            if self.dies.iter().any(|d| d.gate_count.is_some()) {
                return Err(Error::InvalidCombination(
                    "gate_count given both for the design and for individual dies".into(),
                ));
            }
        }
        if let Some(r) = &self.area_ratios {
            if r.len() != n {
                return Err(Error::RatioMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
            for (i, ri) in r.iter().enumerate() {
                positive("design", &format!("area_ratios[{i}]"), *ri)?;
            }
        }
        for (i, die) in self.dies.iter().enumerate() {
            let path = format!("design.dies[{i}]");
            let has_gates = self.gate_count.is_some() || die.gate_count.is_some();
            if let Some(g) = die.gate_count {
                positive(&path, "gate_count", g)?;
            }
            if let Some(a) = die.explicit_area {
                positive(&path, "area", a)?;
            }
            if !has_gates && die.explicit_area.is_none() {
                return Err(Error::MissingField {
                    path: join(&path, "gate_count"),
                });
            }
            if !has_gates && die.explicit_beol.is_none() {
                return Err(Error::MissingField {
                    path: join(&path, "beol_layers"),
                });
            }
            if let Some(b) = die.explicit_beol {
                if b < 1 || b > die.technology.max_beol_layers {
                    return Err(Error::LayerCountExceedsProfile {
                        node: die.technology.node_name.clone(),
                        layers: b,
                        max: die.technology.max_beol_layers,
                    });
                }
            }
            die.technology
                .validate(&format!("technology_overrides.{}", die.technology.node_name))?;
            die.wiring.validate(&join(&path, "wiring"))?;
        }
        self.bonding.validate("design.bonding")?;
        self.packaging.validate("design.packaging")?;
        match (&self.interposer, integ) {
            (Some(ip), Integration::SiInterposer) => {
                ip.technology.validate("design.interposer")?;
                if ip.beol_layers > ip.technology.max_beol_layers {
                    return Err(Error::LayerCountExceedsProfile {
                        node: ip.technology.node_name.clone(),
                        layers: ip.beol_layers,
                        max: ip.technology.max_beol_layers,
                    });
                }
            }
            (None, Integration::SiInterposer) => {
                return Err(Error::MissingField {
                    path: "design.interposer".into(),
                })
            }
            (Some(_), _) => {
                return Err(Error::InvalidCombination(format!(
                    "interposer parameters given for {integ}"
                )))
            }
            (None, _) => {}
        }
        self.usage.validate("usage")
    }
}

pub(crate) fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn out_of_range(path: &str, key: &str, value: f64, bound: &str) -> Error {
    Error::OutOfRange {
        path: join(path, key),
        value,
        bound: bound.to_string(),
    }
}

fn positive(path: &str, key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(out_of_range(path, key, v, "(0, inf)"))
    }
}

fn non_negative(path: &str, key: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(out_of_range(path, key, v, "[0, inf)"))
    }
}

fn within(path: &str, key: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(out_of_range(path, key, v, &format!("[{lo}, {hi}]")))
    }
}

fn unit_yield(path: &str, key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(out_of_range(path, key, v, "(0, 1]"))
    }
}
