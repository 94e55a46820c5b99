// SPDX-License-Identifier: Apache-2.0

//! Die, package and substrate areas and BEOL layer counts derived from gate
//! counts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{DesignSpec, Facing, Integration, PackagingProfile, TechnologyProfile, WiringParameters};

/// Area breakdown of one die. `total_area` is always the exact sum of the
/// gate, TSV and IO terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DieGeometry {
    pub gate_area: f64,
    pub tsv_area: f64,
    pub io_area: f64,
    pub total_area: f64,
    /// Zero until [`stack_geometry`] estimates it.
    pub beol_layers: u32,
    pub tsv_count: u64,
    pub gate_count: Option<f64>,
    /// Set when the die was enlarged to fit its wiring in the available layers.
    pub area_adjusted: bool,
}

impl DieGeometry {
    fn new(gate_area: f64, tsv_count: u64, tsv_area: f64, io_area: f64, gate_count: Option<f64>) -> Self {
        Self {
            gate_area,
            tsv_area,
            io_area,
            total_area: gate_area + tsv_area + io_area,
            beol_layers: 0,
            tsv_count,
            gate_count,
            area_adjusted: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StackGeometry {
    pub dies: Vec<DieGeometry>,
    pub package_area: f64,
    /// RDL or silicon interposer area; zero when the design has no unifying
    /// substrate.
    pub substrate_area: f64,
    /// Gate area of the same logic as a single 2D die.
    pub equivalent_2d_area: f64,
    pub warnings: Vec<String>,
}

impl StackGeometry {
    pub fn total_die_area(&self) -> f64 {
        self.dies.iter().map(|d| d.total_area).sum()
    }
}

/// 2D die area `N_g · β · λ²` (cm²).
pub fn area_2d(gate_count: f64, tech: &TechnologyProfile) -> f64 {
    gate_count * tech.beta * tech.lambda * tech.lambda
}

/// Splits a 2D gate area over `n` dies, evenly or in proportion to `ratios`.
pub fn partition_gate_area(a_2d: f64, n: usize, ratios: Option<&[f64]>) -> Result<Vec<f64>> {
    match ratios {
        None => Ok(vec![a_2d / n as f64; n]),
        Some(r) if r.len() != n => Err(Error::RatioMismatch {
            expected: n,
            got: r.len(),
        }),
        Some(r) => {
            let sum: f64 = r.iter().sum();
            Ok(r.iter().map(|ri| a_2d * ri / sum).collect())
        }
    }
}

/// Rent's-rule coefficients for a pair of vertically adjacent dies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RentPair {
    pub alpha: f64,
    /// Coefficient and exponent of the two dies taken together.
    pub k_pair: f64,
    pub p_pair: f64,
    pub k_i: f64,
    pub p_i: f64,
    pub k_j: f64,
    pub p_j: f64,
}

impl RentPair {
    /// Both dies share one set of coefficients.
    pub fn uniform(alpha: f64, k: f64, p: f64) -> Self {
        Self {
            alpha,
            k_pair: k,
            p_pair: p,
            k_i: k,
            p_i: p,
            k_j: k,
            p_j: p,
        }
    }

    /// Pair coefficients are the mean of the two dies' coefficients.
    pub fn from_dies(upper: &WiringParameters, lower: &WiringParameters) -> Self {
        Self {
            alpha: (upper.rent_alpha + lower.rent_alpha) / 2.0,
            k_pair: (upper.rent_k + lower.rent_k) / 2.0,
            p_pair: (upper.rent_p + lower.rent_p) / 2.0,
            k_i: upper.rent_k,
            p_i: upper.rent_p,
            k_j: lower.rent_k,
            p_j: lower.rent_p,
        }
    }
}

/// External terminals of an `n`-gate block, `k·n·(1 − n^(p−1))`.
fn rent_terminals(k: f64, n: f64, p: f64) -> f64 {
    -k * n * ((p - 1.0) * n.ln()).exp_m1()
}

/// Unrounded F2B TSV estimate between dies of `n_i` and `n_j` gates.
pub fn rent_tsv_raw(n_i: f64, n_j: f64, rent: &RentPair) -> f64 {
    rent.alpha
        * (rent_terminals(rent.k_pair, n_i + n_j, rent.p_pair)
            - rent_terminals(rent.k_i, n_i, rent.p_i)
            - rent_terminals(rent.k_j, n_j, rent.p_j))
}

/// Number of F2B connection TSVs between two adjacent dies, rounded up.
///
/// Negative estimates clamp to zero, and a die of a single gate has no block
/// to partition, so it gets no TSVs.
pub fn tsv_count_f2b(n_i: f64, n_j: f64, rent: &RentPair) -> u64 {
    if n_i <= 1.0 || n_j <= 1.0 {
        return 0;
    }
    ceil_count(rent_tsv_raw(n_i, n_j, rent))
}

/// Rounds a physical resource count up, ignoring floating-point residue just
/// above an integer.
pub fn ceil_count(x: f64) -> u64 {
    if !(x > 0.0) {
        return 0;
    }
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// Average wire length of an `n`-gate die in gate pitches.
pub fn avg_wire_length(rent_p: f64, n: f64) -> f64 {
    let ln4 = 4f64.ln();
    let ln_n = n.ln();
    let lead = ((rent_p - 1.0) * ln4).exp_m1() / ((rent_p - 1.0) * ln_n).exp_m1();
    let first = (7.0 * ((rent_p - 0.5) * ln_n).exp() - 1.0) / ((rent_p - 0.5) * ln4).exp_m1();
    let second = ((rent_p - 1.5) * ln_n).exp_m1() / ((rent_p - 1.5) * ln4).exp_m1();
    2.0 / 9.0 * lead * (first - second)
}

/// Total wiring demand `f.o. · N_g · L̄ · ω / η` (cm²·layers).
pub fn routing_demand(fanout: f64, gate_count: f64, wire_length: f64, pitch: f64, utilization: f64) -> f64 {
    fanout * gate_count * wire_length * pitch / utilization
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeolEstimate {
    pub layers: u32,
    /// Die area after fitting the wiring into at most `max_layers` layers.
    pub adjusted_area: f64,
    pub clamped: bool,
}

/// Layers needed to route `demand` on a die of `area`, capped at `max_layers`
/// by growing the die.
pub fn layers_for_area(demand: f64, area: f64, max_layers: u32) -> Result<BeolEstimate> {
    if !(area > 0.0) {
        return Err(Error::NonPositiveArea(area));
    }
    let layers = ceil_count(demand / area).max(1);
    if layers > max_layers as u64 {
        Ok(BeolEstimate {
            layers: max_layers,
            adjusted_area: demand / max_layers as f64,
            clamped: true,
        })
    } else {
        Ok(BeolEstimate {
            layers: layers as u32,
            adjusted_area: area,
            clamped: false,
        })
    }
}

/// BEOL layer count of a die, from its explicit value or from Rent's-rule
/// wire length. The wire length is converted to cm through the gate pitch
/// `√(β·λ²)`.
pub fn beol_layers(
    gate_count: Option<f64>,
    explicit: Option<u32>,
    tech: &TechnologyProfile,
    wiring: &WiringParameters,
    area: f64,
) -> Result<BeolEstimate> {
    if !(area > 0.0) {
        return Err(Error::NonPositiveArea(area));
    }
    if let Some(layers) = explicit {
        return Ok(BeolEstimate {
            layers,
            adjusted_area: area,
            clamped: false,
        });
    }
    let n = gate_count.ok_or_else(|| Error::MissingField {
        path: "beol_layers".into(),
    })?;
    let length = avg_wire_length(wiring.rent_p, n);
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::NonPositiveWireLength(length));
    }
    let demand = routing_demand(
        wiring.fanout_fo,
        n,
        length * tech.gate_pitch(),
        wiring.wire_pitch_omega,
        wiring.utilization_eta,
    );
    layers_for_area(demand, area, tech.max_beol_layers)
}

/// Gate areas of every die before any overhead.
fn gate_areas(spec: &DesignSpec, counts: &[Option<f64>]) -> Result<Vec<f64>> {
    let n = spec.n_dies();
    let mut areas = match spec.gate_count {
        Some(total) if spec.is_homogeneous() => {
            partition_gate_area(area_2d(total, &spec.dies[0].technology), n, spec.area_ratios.as_deref())?
        }
        _ => spec
            .dies
            .iter()
            .zip(counts)
            .map(|(d, g)| g.map_or(0.0, |g| area_2d(g, &d.technology)))
            .collect(),
    };
    for (area, die) in areas.iter_mut().zip(&spec.dies) {
        if let Some(a) = die.explicit_area {
            *area = a;
        }
    }
    Ok(areas)
}

/// Per-die areas with TSV and IO-driver overheads; BEOL layers are not yet
/// estimated.
pub fn die_areas(spec: &DesignSpec) -> Result<Vec<DieGeometry>> {
    let n = spec.n_dies();
    let integ = spec.integration;
    match integ {
        Integration::M3D if n != 2 => {
            return Err(Error::UnsupportedConfiguration(format!(
                "m3d with {n} tiers; only 2-tier stacks are modeled"
            )))
        }
        Integration::Mono2D if n != 1 => return Err(Error::UnsupportedConfiguration(format!("mono_2d with {n} dies"))),
        _ if n == 0 => return Err(Error::UnsupportedConfiguration("design has no dies".into())),
        _ => {}
    }
    let counts = spec.die_gate_counts();
    let gates = gate_areas(spec, &counts)?;
    let io = |i: usize| {
        if integ.has_io_overhead() {
            spec.dies[i].technology.io_overhead_ratio * gates[i]
        } else {
            0.0
        }
    };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let tech = &spec.dies[i].technology;
        let (tsv_count, tsv_area) = if integ.is_bonded_3d() {
            match spec.facing {
                Facing::F2F if i == n - 1 => {
                    let x = spec.signal_count_f2f;
                    (x, x as f64 * tech.via_pitch * tech.via_pitch)
                }
                Facing::F2B if i + 1 < n => match (counts[i], counts[i + 1]) {
                    (Some(ni), Some(nj)) => {
                        let rent = RentPair::from_dies(&spec.dies[i].wiring, &spec.dies[i + 1].wiring);
                        let x = tsv_count_f2b(ni, nj, &rent);
                        (x, x as f64 * tech.via_pitch * tech.via_pitch)
                    }
                    _ => (0, 0.0),
                },
                _ => (0, 0.0),
            }
        } else {
            (0, 0.0)
        };
        out.push(DieGeometry::new(gates[i], tsv_count, tsv_area, io(i), counts[i]));
    }
    Ok(out)
}

/// Package footprint: scaled largest die for 3D stacks, scaled die sum for
/// 2.5D and monolithic 2D.
pub fn package_area(integration: Integration, packaging: &PackagingProfile, dies: &[DieGeometry]) -> f64 {
    if integration.is_3d() {
        let largest = dies.iter().map(|d| d.total_area).fold(0.0, f64::max);
        packaging.s_package_3d * largest
    } else {
        packaging.s_package_25d * dies.iter().map(|d| d.total_area).sum::<f64>()
    }
}

/// RDL or silicon interposer area; zero for designs without one.
pub fn substrate_area(integration: Integration, packaging: &PackagingProfile, dies: &[DieGeometry]) -> f64 {
    match integration {
        Integration::InFOChipFirst | Integration::InFOChipLast | Integration::SiInterposer => {
            packaging.s_substrate_25d * dies.iter().map(|d| d.total_area).sum::<f64>()
        }
        _ => 0.0,
    }
}

/// Full geometry of a design: areas, BEOL layers (growing dies whose wiring
/// does not fit), package and substrate.
pub fn stack_geometry(spec: &DesignSpec) -> Result<StackGeometry> {
    let mut dies = die_areas(spec)?;
    let mut warnings = Vec::new();
    if spec.integration.is_bonded_3d() && spec.facing == Facing::F2B {
        if let Some(i) = dies.iter().position(|d| d.gate_count.is_none()) {
            warnings.push(format!(
                "die {i} has no gate count; F2B TSVs touching it are not estimated"
            ));
        }
    }
    let equivalent_2d_area = match spec.gate_count {
        Some(total) if spec.is_homogeneous() && spec.dies.iter().all(|d| d.explicit_area.is_none()) => {
            area_2d(total, &spec.dies[0].technology)
        }
        _ => dies.iter().map(|d| d.gate_area).sum(),
    };
    for (i, (geom, die)) in dies.iter_mut().zip(&spec.dies).enumerate() {
        let est = beol_layers(
            geom.gate_count,
            die.explicit_beol,
            &die.technology,
            &die.wiring,
            geom.gate_area,
        )?;
        geom.beol_layers = est.layers;
        if est.clamped {
            geom.gate_area = est.adjusted_area;
            geom.total_area = geom.gate_area + geom.tsv_area + geom.io_area;
            geom.area_adjusted = true;
            warnings.push(format!(
                "die {i}: wiring needs more than {} BEOL layers; area grown to {:.6} cm²",
                die.technology.max_beol_layers, geom.total_area
            ));
        }
    }
    let package_area = package_area(spec.integration, &spec.packaging, &dies);
    let substrate_area = substrate_area(spec.integration, &spec.packaging, &dies);
    Ok(StackGeometry {
        dies,
        package_area,
        substrate_area,
        equivalent_2d_area,
        warnings,
    })
}
