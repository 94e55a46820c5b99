// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{node_size_nm, BondingProfile, FabEnvironment, PackagingProfile, TechnologyProfile, WiringParameters};
use crate::error::{Error, Result};

/// Environment variable naming a fixture directory that replaces the bundled set.
pub const FIXTURES_ENV: &str = "CARBON3D_FIXTURES";

const BUNDLED_NODES: &[(&str, &str)] = &[
    ("3nm.json", include_str!("../../fixtures/nodes/3nm.json")),
    ("5nm.json", include_str!("../../fixtures/nodes/5nm.json")),
    ("7nm.json", include_str!("../../fixtures/nodes/7nm.json")),
    ("10nm.json", include_str!("../../fixtures/nodes/10nm.json")),
    ("14nm.json", include_str!("../../fixtures/nodes/14nm.json")),
    ("28nm.json", include_str!("../../fixtures/nodes/28nm.json")),
];
const BUNDLED_ENVIRONMENT: &str = include_str!("../../fixtures/environment.json");
const BUNDLED_BONDING: &str = include_str!("../../fixtures/bonding.json");
const BUNDLED_PACKAGING: &str = include_str!("../../fixtures/packaging.json");

/// One `nodes/<node>.json` fixture file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeFixture {
    pub technology: TechnologyProfile,
    pub default_wiring: WiringParameters,
}

/// Fixture set that configuration documents are resolved against.
#[derive(Debug, Clone)]
pub struct Registry {
    nodes: BTreeMap<String, NodeFixture>,
    bonding: BTreeMap<String, BondingProfile>,
    packaging: BTreeMap<String, PackagingProfile>,
    environment: FabEnvironment,
    source: Option<PathBuf>,
}

fn parse<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Fixture {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

impl Registry {
    /// The fixture set compiled into the library.
    pub fn bundled() -> Result<Self> {
        let mut nodes = BTreeMap::new();
        for (file, text) in BUNDLED_NODES {
            let path = Path::new("nodes").join(file);
            let node: NodeFixture = parse(text, &path)?;
            nodes.insert(node.technology.node_name.clone(), node);
        }
        Self::assemble(
            nodes,
            parse(BUNDLED_BONDING, Path::new("bonding.json"))?,
            parse(BUNDLED_PACKAGING, Path::new("packaging.json"))?,
            parse(BUNDLED_ENVIRONMENT, Path::new("environment.json"))?,
            None,
        )
    }

    /// Loads `nodes/*.json` from `dir`. `environment.json`, `bonding.json`
    /// and `packaging.json` fall back to the bundled copies when absent.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let node_dir = dir.join("nodes");
        let entries = fs::read_dir(&node_dir).map_err(|e| Error::Fixture {
            path: node_dir.clone(),
            message: e.to_string(),
        })?;
        let mut files: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut nodes = BTreeMap::new();
        for path in files {
            let text = fs::read_to_string(&path)?;
            let node: NodeFixture = parse(&text, &path)?;
            nodes.insert(node.technology.node_name.clone(), node);
        }
        let load = |name: &str, bundled: &str| -> Result<(String, PathBuf)> {
            let path = dir.join(name);
            if path.exists() {
                Ok((fs::read_to_string(&path)?, path))
            } else {
                Ok((bundled.to_string(), PathBuf::from(name)))
            }
        };
        let (bonding, bonding_path) = load("bonding.json", BUNDLED_BONDING)?;
        let (packaging, packaging_path) = load("packaging.json", BUNDLED_PACKAGING)?;
        let (environment, environment_path) = load("environment.json", BUNDLED_ENVIRONMENT)?;
        Self::assemble(
            nodes,
            parse(&bonding, &bonding_path)?,
            parse(&packaging, &packaging_path)?,
            parse(&environment, &environment_path)?,
            Some(dir.to_path_buf()),
        )
    }

    /// The directory named by `CARBON3D_FIXTURES`, or the bundled set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(FIXTURES_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(dir),
            _ => Self::bundled(),
        }
    }

    fn assemble(
        nodes: BTreeMap<String, NodeFixture>,
        bonding: BTreeMap<String, BondingProfile>,
        packaging: BTreeMap<String, PackagingProfile>,
        environment: FabEnvironment,
        source: Option<PathBuf>,
    ) -> Result<Self> {
        let origin = |name: &str| source.clone().unwrap_or_default().join(name);
        for (name, node) in &nodes {
            let path = origin(&format!("nodes/{name}.json"));
            let wrap = |e: Error| Error::Fixture {
                path: path.clone(),
                message: e.to_string(),
            };
            node.technology.validate("technology").map_err(wrap)?;
            node.default_wiring.validate("default_wiring").map_err(wrap)?;
        }
        for (name, b) in &bonding {
            b.validate(name).map_err(|e| Error::Fixture {
                path: origin("bonding.json"),
                message: e.to_string(),
            })?;
        }
        for (name, p) in &packaging {
            p.validate(name).map_err(|e| Error::Fixture {
                path: origin("packaging.json"),
                message: e.to_string(),
            })?;
        }
        environment.validate("environment").map_err(|e| Error::Fixture {
            path: origin("environment.json"),
            message: e.to_string(),
        })?;
        Ok(Self {
            nodes,
            bonding,
            packaging,
            environment,
            source,
        })
    }

    pub fn resolve_technology(&self, node_name: &str) -> Result<&TechnologyProfile> {
        self.node(node_name).map(|n| &n.technology)
    }

    pub fn node(&self, node_name: &str) -> Result<&NodeFixture> {
        self.nodes
            .get(node_name)
            .ok_or_else(|| Error::UnknownNode(node_name.to_string()))
    }

    pub fn bonding(&self, name: &str) -> Result<&BondingProfile> {
        self.bonding.get(name).ok_or_else(|| Error::UnknownProfile {
            kind: "bonding",
            name: name.to_string(),
        })
    }

    pub fn packaging(&self, name: &str) -> Result<&PackagingProfile> {
        self.packaging.get(name).ok_or_else(|| Error::UnknownProfile {
            kind: "packaging",
            name: name.to_string(),
        })
    }

    pub fn environment(&self) -> &FabEnvironment {
        &self.environment
    }

    /// Node names ordered from the largest feature size to the smallest.
    pub fn node_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.nodes.keys().map(String::as_str).collect();
        names.sort_by(|a, b| {
            let key = |n: &str| node_size_nm(n).unwrap_or(f64::INFINITY);
            key(b).total_cmp(&key(a)).then_with(|| a.cmp(b))
        });
        names
    }

    pub fn bonding_names(&self) -> impl Iterator<Item = &str> {
        self.bonding.keys().map(String::as_str)
    }

    pub fn packaging_names(&self) -> impl Iterator<Item = &str> {
        self.packaging.keys().map(String::as_str)
    }

    /// Default package technology: `pcbga` when present, else the first listed.
    pub fn default_packaging(&self) -> Option<&str> {
        if self.packaging.contains_key("pcbga") {
            Some("pcbga")
        } else {
            self.packaging.keys().next().map(String::as_str)
        }
    }

    /// Directory the fixtures were read from; `None` for the bundled set.
    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    /// Values that fall outside the published survey ranges.
    pub fn survey_violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .nodes
            .values()
            .flat_map(|n| n.technology.survey_violations())
            .collect();
        for (name, b) in &self.bonding {
            out.extend(b.survey_violations(name));
        }
        out.extend(self.environment.survey_violations());
        out
    }
}
