// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::units::canonicalize;
use super::{
    join, BondingProfile, DesignSpec, DieSpec, FabEnvironment, Facing, Integration, InterposerSpec, PackagingProfile,
    Registry, Stacking, TechnologyProfile, UsageProfile, WiringParameters,
};
use crate::error::{Error, Result};

const TOP_LEVEL_KEYS: [&str; 4] = ["design", "technology_overrides", "environment", "usage"];
const DEFAULT_INTERPOSER_NODE: &str = "28nm";
const DEFAULT_INTERPOSER_BEOL: u32 = 4;

/// A validated design together with the fab environment it is built in.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub design: DesignSpec,
    pub environment: FabEnvironment,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignDoc {
    integration: Integration,
    #[serde(default)]
    facing: Option<Facing>,
    #[serde(default)]
    stacking: Option<Stacking>,
    #[serde(default)]
    gate_count: Option<f64>,
    #[serde(default)]
    area_ratios: Option<Vec<f64>>,
    #[serde(default)]
    signal_count_f2f: u64,
    dies: Vec<DieDoc>,
    #[serde(default)]
    bonding: Option<Value>,
    #[serde(default)]
    packaging: Option<Value>,
    #[serde(default)]
    interposer: Option<InterposerDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DieDoc {
    technology: String,
    #[serde(default)]
    gate_count: Option<f64>,
    #[serde(default)]
    area: Option<f64>,
    #[serde(default)]
    beol_layers: Option<u32>,
    #[serde(default)]
    wiring: Option<Map<String, Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InterposerDoc {
    #[serde(default)]
    technology: Option<String>,
    #[serde(default)]
    beol_layers: Option<u32>,
}

/// Reads and validates a configuration file.
pub fn load_config_file(path: impl AsRef<Path>, registry: &Registry) -> Result<Config> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidValue {
        path: path.as_ref().display().to_string(),
        message: e.to_string(),
    })?;
    load_config(&doc, registry)
}

/// Validates a configuration document and resolves it against `registry`.
///
/// Either the whole document resolves into a [`Config`] whose invariants all
/// hold, or a typed error naming the offending key is returned.
pub fn load_config(document: &Value, registry: &Registry) -> Result<Config> {
    let mut doc = document.clone();
    let top = doc.as_object().ok_or_else(|| Error::InvalidValue {
        path: "$".into(),
        message: "configuration must be a JSON object".into(),
    })?;
    if let Some(key) = top.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
        return Err(Error::UnknownField { path: key.clone() });
    }
    canonicalize(&mut doc)?;
    let top = doc.as_object().expect("checked above");

    let overrides: BTreeMap<String, Map<String, Value>> = match top.get("technology_overrides") {
        Some(v) => typed(v.clone(), "technology_overrides")?,
        None => BTreeMap::new(),
    };
    let environment: FabEnvironment = {
        let mut base = serde_json::to_value(registry.environment())?;
        if let Some(v) = top.get("environment") {
            merge(&mut base, object(v, "environment")?);
        }
        typed(base, "environment")?
    };
    environment.validate("environment")?;

    let usage: UsageProfile = match top.get("usage") {
        Some(v) => typed(v.clone(), "usage")?,
        None => return Err(Error::MissingField { path: "usage".into() }),
    };

    let design_doc: DesignDoc = match top.get("design") {
        Some(v) => typed(v.clone(), "design")?,
        None => return Err(Error::MissingField { path: "design".into() }),
    };

    let resolver = Resolver {
        registry,
        overrides: &overrides,
    };

    let mut dies = Vec::with_capacity(design_doc.dies.len());
    for (i, die) in design_doc.dies.into_iter().enumerate() {
        let path = format!("design.dies[{i}]");
        let technology = resolver.technology(&die.technology)?;
        let wiring = resolver.wiring(&die.technology, die.wiring.as_ref(), &join(&path, "wiring"))?;
        dies.push(DieSpec {
            gate_count: die.gate_count,
            explicit_area: die.area,
            explicit_beol: die.beol_layers,
            technology,
            wiring,
        });
    }

    let integration = design_doc.integration;
    let n = dies.len();
    let facing = design_doc.facing.unwrap_or(if integration.is_3d() {
        if n == 2 {
            Facing::F2F
        } else {
            Facing::F2B
        }
    } else {
        Facing::NA
    });
    let stacking = design_doc.stacking.unwrap_or(if integration.is_3d() {
        Stacking::D2W
    } else {
        Stacking::NA
    });

    let (bonding_name, bonding) = resolve_profile::<BondingProfile>(
        design_doc.bonding.as_ref(),
        integration.default_bonding(),
        "design.bonding",
        |name| registry.bonding(name).and_then(|p| Ok(serde_json::to_value(p)?)),
    )?;
    let default_packaging = registry.default_packaging().unwrap_or("pcbga");
    let (packaging_name, packaging) = resolve_profile::<PackagingProfile>(
        design_doc.packaging.as_ref(),
        default_packaging,
        "design.packaging",
        |name| registry.packaging(name).and_then(|p| Ok(serde_json::to_value(p)?)),
    )?;

    let interposer = match (integration, design_doc.interposer) {
        (Integration::SiInterposer, doc) => {
            let (node, layers) = match doc {
                Some(d) => (d.technology, d.beol_layers),
                None => (None, None),
            };
            let node = node.unwrap_or_else(|| DEFAULT_INTERPOSER_NODE.to_string());
            let technology = resolver.technology(&node)?;
            let beol_layers = layers.unwrap_or(DEFAULT_INTERPOSER_BEOL.min(technology.max_beol_layers));
            Some(InterposerSpec {
                technology,
                beol_layers,
            })
        }
        (_, Some(_)) => {
            return Err(Error::InvalidCombination(format!(
                "design.interposer given for {integration}"
            )))
        }
        (_, None) => None,
    };

    let design = DesignSpec {
        integration,
        facing,
        stacking,
        gate_count: design_doc.gate_count,
        area_ratios: design_doc.area_ratios,
        signal_count_f2f: design_doc.signal_count_f2f,
        dies,
        bonding_name,
        bonding,
        packaging_name,
        packaging,
        interposer,
        usage,
    };
    design.validate()?;
    Ok(Config { design, environment })
}

impl Config {
    /// Serializes the resolved configuration back into a document that
    /// reloads to an identical `Config` against any registry.
    ///
    /// Technology profiles are emitted in `technology_overrides` keyed by node
    /// name, so two dies sharing a node name must share the profile.
    pub fn to_document(&self) -> Value {
        let d = &self.design;
        let mut nodes = Map::new();
        let mut dies = Vec::new();
        for die in &d.dies {
            nodes.insert(
                die.technology.node_name.clone(),
                serde_json::to_value(&die.technology).expect("plain data"),
            );
            let mut obj = Map::new();
            obj.insert("technology".into(), json!(die.technology.node_name));
            if let Some(g) = die.gate_count {
                obj.insert("gate_count".into(), json!(g));
            }
            if let Some(a) = die.explicit_area {
                obj.insert("area".into(), json!(a));
            }
            if let Some(b) = die.explicit_beol {
                obj.insert("beol_layers".into(), json!(b));
            }
            obj.insert("wiring".into(), serde_json::to_value(&die.wiring).expect("plain data"));
            dies.push(Value::Object(obj));
        }
        let mut design = Map::new();
        design.insert("integration".into(), json!(d.integration));
        design.insert("facing".into(), json!(d.facing));
        design.insert("stacking".into(), json!(d.stacking));
        if let Some(g) = d.gate_count {
            design.insert("gate_count".into(), json!(g));
        }
        if let Some(r) = &d.area_ratios {
            design.insert("area_ratios".into(), json!(r));
        }
        design.insert("signal_count_f2f".into(), json!(d.signal_count_f2f));
        design.insert("dies".into(), Value::Array(dies));
        design.insert("bonding".into(), named_profile(&d.bonding_name, &d.bonding));
        design.insert("packaging".into(), named_profile(&d.packaging_name, &d.packaging));
        if let Some(ip) = &d.interposer {
            nodes.insert(
                ip.technology.node_name.clone(),
                serde_json::to_value(&ip.technology).expect("plain data"),
            );
            design.insert(
                "interposer".into(),
                json!({"technology": ip.technology.node_name, "beol_layers": ip.beol_layers}),
            );
        }
        json!({
            "design": design,
            "technology_overrides": nodes,
            "environment": self.environment,
            "usage": d.usage,
        })
    }
}

fn named_profile<T: serde::Serialize>(name: &str, profile: &T) -> Value {
    let mut v = serde_json::to_value(profile).expect("plain data");
    v.as_object_mut()
        .expect("profiles serialize as objects")
        .insert("profile".into(), json!(name));
    v
}

struct Resolver<'a> {
    registry: &'a Registry,
    overrides: &'a BTreeMap<String, Map<String, Value>>,
}

impl Resolver<'_> {
    fn technology(&self, node: &str) -> Result<TechnologyProfile> {
        let path = format!("technology_overrides.{node}");
        let over = self.overrides.get(node);
        let mut base = match self.registry.node(node) {
            Ok(fixture) => serde_json::to_value(&fixture.technology)?,
            Err(e) => match over {
                Some(_) => json!({ "node_name": node }),
                None => return Err(e),
            },
        };
        if let Some(o) = over {
            merge(&mut base, o);
        }
        let profile: TechnologyProfile = typed(base, &path)?;
        if profile.node_name != node {
            return Err(Error::InvalidValue {
                path: join(&path, "node_name"),
                message: format!("`{}` does not match the key `{node}`", profile.node_name),
            });
        }
        profile.validate(&path)?;
        Ok(profile)
    }

    fn wiring(&self, node: &str, die_wiring: Option<&Map<String, Value>>, path: &str) -> Result<WiringParameters> {
        let mut base = match self.registry.node(node) {
            Ok(fixture) => serde_json::to_value(&fixture.default_wiring)?,
            Err(_) => Value::Object(Map::new()),
        };
        if let Some(w) = die_wiring {
            merge(&mut base, w);
        }
        typed(base, path)
    }
}

fn resolve_profile<T: DeserializeOwned>(
    doc: Option<&Value>,
    default_name: &str,
    path: &str,
    lookup: impl Fn(&str) -> Result<Value>,
) -> Result<(String, T)> {
    let (name, overrides) = match doc {
        None => (default_name.to_string(), Map::new()),
        Some(Value::String(name)) => (name.clone(), Map::new()),
        Some(Value::Object(obj)) => {
            let mut obj = obj.clone();
            let name = match obj.remove("profile") {
                Some(Value::String(s)) => s,
                Some(_) => {
                    return Err(Error::InvalidValue {
                        path: join(path, "profile"),
                        message: "expected a profile name".into(),
                    })
                }
                None => default_name.to_string(),
            };
            (name, obj)
        }
        Some(_) => {
            return Err(Error::InvalidValue {
                path: path.to_string(),
                message: "expected a profile name or an object".into(),
            })
        }
    };
    let mut base = match lookup(&name) {
        Ok(v) => v,
        // a fully inline profile may carry a name the registry does not know
        Err(e @ Error::UnknownProfile { .. }) if overrides.is_empty() => return Err(e),
        Err(Error::UnknownProfile { .. }) => Value::Object(Map::new()),
        Err(e) => return Err(e),
    };
    merge(&mut base, &overrides);
    Ok((name, typed(base, path)?))
}

fn object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::InvalidValue {
        path: path.to_string(),
        message: "expected an object".into(),
    })
}

fn merge(base: &mut Value, overrides: &Map<String, Value>) {
    if let Value::Object(b) = base {
        for (k, v) in overrides {
            b.insert(k.clone(), v.clone());
        }
    }
}

/// Deserializes `value`, mapping serde failures to path-qualified errors.
fn typed<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.inner().to_string();
        let mut path = prefix.to_string();
        let sub = e.path().to_string();
        if sub != "." {
            path = join(&path, &sub);
        }
        let quoted = inner.split('`').nth(1).map(str::to_string);
        if inner.starts_with("missing field") {
            let field = quoted.unwrap_or_default();
            Error::MissingField {
                path: join(&path, &field),
            }
        } else if inner.starts_with("unknown field") {
            let field = quoted.unwrap_or_default();
            if path.ends_with(&field) {
                Error::UnknownField { path }
            } else {
                Error::UnknownField {
                    path: join(&path, &field),
                }
            }
        } else {
            Error::InvalidValue { path, message: inner }
        }
    })
}
