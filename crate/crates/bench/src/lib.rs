// SPDX-License-Identifier: Apache-2.0

//! Workloads shared by the benchmarks.

use carbon3d_core::explorer::SweepAxis;
use carbon3d_core::{load_config, Config, Registry};
use serde_json::{json, Value};

/// Two-die design document on 7nm with 10⁹ gates.
pub fn design_document(integration: &str) -> Value {
    let dies = if integration == "mono_2d" {
        json!([{"technology": "7nm"}])
    } else {
        json!([{"technology": "7nm"}, {"technology": "7nm"}])
    };
    json!({
        "design": {"integration": integration, "gate_count": 1e9, "dies": dies},
        "usage": {"t_app": 8760.0, "t_exe": 43800.0, "power_density": 0.2, "delay": 1e-3}
    })
}

pub fn design(registry: &Registry, integration: &str) -> Config {
    load_config(&design_document(integration), registry).expect("bench designs are valid")
}

/// `points³` rows over gate count, fab carbon intensity and lifetime.
pub fn sweep_axes(points: usize) -> Vec<SweepAxis> {
    let span = |lo: f64, hi: f64| -> Vec<Value> {
        (0..points)
            .map(|i| json!(lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64))
            .collect()
    };
    vec![
        SweepAxis::new("gate_count", span(1e8, 1e10)),
        SweepAxis::new("environment.ci_fab", span(0.05, 0.7)),
        SweepAxis::new("usage.t_app", span(1000.0, 8760.0)),
    ]
}
