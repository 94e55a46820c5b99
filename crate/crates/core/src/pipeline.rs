// SPDX-License-Identifier: Apache-2.0

//! Full evaluation of one design.

use serde::Serialize;

use crate::carbon::{amortize_and_total, embodied_breakdown, operational_energy, CarbonBreakdown, GammaBasis};
use crate::error::Result;
use crate::geometry::{stack_geometry, StackGeometry};
use crate::params::{DesignSpec, FabEnvironment};
use crate::yieldmodel::{compose_for, YieldContext};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalOptions {
    pub gamma: f64,
    pub basis: GammaBasis,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            basis: GammaBasis::Amortized,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub geometry: StackGeometry,
    pub yields: YieldContext,
    pub carbon: CarbonBreakdown,
    pub warnings: Vec<String>,
}

/// Geometry, yields and carbon of `spec`.
pub fn evaluate(spec: &DesignSpec, env: &FabEnvironment, opts: &EvalOptions) -> Result<Evaluation> {
    let geometry = stack_geometry(spec)?;
    let yields = compose_for(spec, &geometry)?;
    let mut embodied = embodied_breakdown(spec, &geometry, &yields, env)?;
    let mut warnings = geometry.warnings.clone();
    warnings.append(&mut embodied.warnings);
    let energy = operational_energy(&spec.usage, geometry.total_die_area());
    let c_operational = env.ci_use * energy;
    let carbon = amortize_and_total(embodied, &spec.usage, energy, c_operational, opts.gamma, opts.basis);
    Ok(Evaluation {
        geometry,
        yields,
        carbon,
        warnings,
    })
}

/// Embodied carbon only, for searches that evaluate many variants.
pub fn embodied_carbon(spec: &DesignSpec, env: &FabEnvironment) -> Result<f64> {
    let geometry = stack_geometry(spec)?;
    let yields = compose_for(spec, &geometry)?;
    Ok(embodied_breakdown(spec, &geometry, &yields, env)?.c_embodied_overall)
}
