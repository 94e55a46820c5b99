// SPDX-License-Identifier: Apache-2.0

//! Unit canonicalization for configuration documents.
//!
//! Numeric fields may be given either as a bare number, which is taken to be
//! in the canonical unit (cm, cm², kWh, kg CO₂, hours for lifetimes, seconds
//! for delay), or as a string carrying a unit such as `"10 um"`,
//! `"400 g/kWh"` or `"5 years"`. [`canonicalize`] rewrites every such string
//! in place before the document is deserialized.

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Base {
    None,
    Length,
    Area,
    Energy,
    Mass,
    Hours,
    Seconds,
    Power,
}

/// Physical dimension of a configuration field, as numerator over denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dimension {
    num: Base,
    den: Base,
}

impl Dimension {
    pub const LENGTH: Self = Self::new(Base::Length, Base::None);
    pub const AREA: Self = Self::new(Base::Area, Base::None);
    pub const ENERGY: Self = Self::new(Base::Energy, Base::None);
    pub const ENERGY_PER_AREA: Self = Self::new(Base::Energy, Base::Area);
    pub const MASS_PER_AREA: Self = Self::new(Base::Mass, Base::Area);
    pub const PER_AREA: Self = Self::new(Base::None, Base::Area);
    pub const CARBON_INTENSITY: Self = Self::new(Base::Mass, Base::Energy);
    pub const POWER_DENSITY: Self = Self::new(Base::Power, Base::Area);
    pub const LIFETIME: Self = Self::new(Base::Hours, Base::None);
    pub const DELAY: Self = Self::new(Base::Seconds, Base::None);

    const fn new(num: Base, den: Base) -> Self {
        Self { num, den }
    }

    /// Dimension of a configuration key, if it carries one.
    pub fn of_field(key: &str) -> Option<Self> {
        Some(match key {
            "lambda" | "via_pitch" | "wire_pitch_omega" | "wafer_diameter" => Self::LENGTH,
            "area" => Self::AREA,
            "energy" => Self::ENERGY,
            "epa_feol" | "epa_mol" | "epa_beol_per_layer" | "epa_d2w" | "epa_w2w" => Self::ENERGY_PER_AREA,
            "gpa" | "mpa" | "cpa_bonding_info" | "cpa_rdl" | "cpa_packaging" => Self::MASS_PER_AREA,
            "defect_density_d0" => Self::PER_AREA,
            "ci_fab" | "ci_use" | "ci_bonding" => Self::CARBON_INTENSITY,
            "power_density" => Self::POWER_DENSITY,
            "t_app" | "t_exe" => Self::LIFETIME,
            "delay" => Self::DELAY,
            _ => return None,
        })
    }
}

fn factor(unit: &str, base: Base) -> Option<f64> {
    let unit = unit.trim();
    let f = match base {
        Base::None => match unit {
            "" | "1" => 1.0,
            _ => return None,
        },
        Base::Length => match unit {
            "nm" => 1e-7,
            "um" | "µm" | "μm" => 1e-4,
            "mm" => 0.1,
            "cm" => 1.0,
            "m" => 100.0,
            _ => return None,
        },
        Base::Area => match unit {
            "um2" | "um^2" | "µm2" | "µm²" | "μm²" => 1e-8,
            "mm2" | "mm^2" | "mm²" => 1e-2,
            "cm2" | "cm^2" | "cm²" => 1.0,
            "m2" | "m^2" | "m²" => 1e4,
            _ => return None,
        },
        Base::Energy => match unit {
            "J" => 1.0 / 3.6e6,
            "kJ" => 1.0 / 3.6e3,
            "MJ" => 1.0 / 3.6,
            "Wh" => 1e-3,
            "kWh" => 1.0,
            "MWh" => 1e3,
            _ => return None,
        },
        Base::Mass => match unit {
            "g" | "gCO2" | "gCO2e" => 1e-3,
            "kg" | "kgCO2" | "kgCO2e" => 1.0,
            "t" | "tCO2" | "tCO2e" => 1e3,
            _ => return None,
        },
        Base::Hours => match unit {
            "s" => 1.0 / 3600.0,
            "min" => 1.0 / 60.0,
            "h" | "hour" | "hours" => 1.0,
            "d" | "day" | "days" => 24.0,
            "y" | "yr" | "year" | "years" => 8760.0,
            _ => return None,
        },
        Base::Seconds => match unit {
            "ns" => 1e-9,
            "us" | "µs" => 1e-6,
            "ms" => 1e-3,
            "s" => 1.0,
            "h" => 3600.0,
            _ => return None,
        },
        Base::Power => match unit {
            "mW" => 1e-3,
            "W" => 1.0,
            "kW" => 1e3,
            _ => return None,
        },
    };
    Some(f)
}

/// Parses `"<number> <unit>"` into the canonical unit of `dim`.
pub fn parse_quantity(text: &str, dim: Dimension) -> std::result::Result<f64, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(i, c)| !(c.is_ascii_digit() || c == '.' || c == '+' || c == '-' || ((c == 'e' || c == 'E') && i > 0)))
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (number, unit) = text.split_at(split);
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse a number from {text:?}"))?;
    let unit = unit.trim();
    let (num_unit, den_unit) = match unit.split_once('/') {
        Some((n, d)) => (n, d),
        None if dim.den == Base::None => (unit, ""),
        None => return Err(format!("unit {unit:?} is missing a denominator")),
    };
    if unit.is_empty() {
        return Ok(value);
    }
    let num = factor(num_unit, dim.num).ok_or_else(|| format!("unrecognized unit {unit:?}"))?;
    let den = if dim.den == Base::None {
        if !den_unit.is_empty() {
            return Err(format!("unrecognized unit {unit:?}"));
        }
        1.0
    } else {
        factor(den_unit, dim.den).ok_or_else(|| format!("unrecognized unit {unit:?}"))?
    };
    Ok(value * num / den)
}

/// Replaces unit-bearing strings with canonical numbers throughout `doc`.
pub fn canonicalize(doc: &mut Value) -> Result<()> {
    walk(doc, "")
}

fn walk(value: &mut Value, path: &str) -> Result<()> {
    match value {
        Value::Object(map) => {
            for (key, child) in map.iter_mut() {
                let child_path = if path.is_empty() {
                    key.clone()
                } else {
                    format!("{path}.{key}")
                };
                match Dimension::of_field(key) {
                    Some(dim) => convert(child, dim, &child_path)?,
                    None => walk(child, &child_path)?,
                }
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter_mut().enumerate() {
                walk(child, &format!("{path}[{i}]"))?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn convert(value: &mut Value, dim: Dimension, path: &str) -> Result<()> {
    match value {
        Value::String(text) => {
            let v = parse_quantity(text, dim).map_err(|message| Error::InvalidValue {
                path: path.to_string(),
                message,
            })?;
            *value = serde_json::json!(v);
        }
        Value::Array(items) => {
            for (i, item) in items.iter_mut().enumerate() {
                convert(item, dim, &format!("{path}[{i}]"))?;
            }
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1e-300)
    }

    #[test]
    fn lengths_and_areas() {
        assert!(close(parse_quantity("10 um", Dimension::LENGTH).unwrap(), 1e-3));
        assert!(close(parse_quantity("7nm", Dimension::LENGTH).unwrap(), 7e-7));
        assert!(close(parse_quantity("100 mm2", Dimension::AREA).unwrap(), 1.0));
        assert!(close(parse_quantity("2.5", Dimension::AREA).unwrap(), 2.5));
    }

    #[test]
    fn compound_units() {
        assert!(close(
            parse_quantity("400 g/kWh", Dimension::CARBON_INTENSITY).unwrap(),
            0.4
        ));
        assert!(close(
            parse_quantity("500 Wh/cm2", Dimension::ENERGY_PER_AREA).unwrap(),
            0.5
        ));
        assert!(close(parse_quantity("0.001 /mm2", Dimension::PER_AREA).unwrap(), 0.1));
        assert!(close(
            parse_quantity("1e-2 W/mm2", Dimension::POWER_DENSITY).unwrap(),
            1.0
        ));
    }

    #[test]
    fn lifetimes() {
        assert!(close(parse_quantity("5 years", Dimension::LIFETIME).unwrap(), 43800.0));
        assert!(close(parse_quantity("2 ms", Dimension::DELAY).unwrap(), 2e-3));
    }

    #[test]
    fn rejects_wrong_dimension() {
        assert!(parse_quantity("3 kg", Dimension::LENGTH).is_err());
        assert!(parse_quantity("3 kWh", Dimension::ENERGY_PER_AREA).is_err());
        assert!(parse_quantity("abc", Dimension::LENGTH).is_err());
    }

    #[test]
    fn canonicalize_walks_nested_documents() {
        let mut doc = json!({
            "environment": {"ci_fab": "300 g/kWh", "wafer_diameter": "300 mm"},
            "design": {"dies": [{"area": "50 mm2"}, {"area": 0.25}]},
            "technology_overrides": {"7nm": {"epa_beol_per_layer": ["1000 Wh/cm2", 0.8]}}
        });
        canonicalize(&mut doc).unwrap();
        assert_eq!(doc["environment"]["wafer_diameter"], json!(30.0));
        assert!(close(doc["environment"]["ci_fab"].as_f64().unwrap(), 0.3));
        assert!(close(doc["design"]["dies"][0]["area"].as_f64().unwrap(), 0.5));
        assert_eq!(doc["design"]["dies"][1]["area"], json!(0.25));
        assert_eq!(
            doc["technology_overrides"]["7nm"]["epa_beol_per_layer"],
            json!([1.0, 0.8])
        );
    }

    #[test]
    fn canonicalize_reports_path() {
        let mut doc = json!({"environment": {"ci_use": "12 parsecs"}});
        let err = canonicalize(&mut doc).unwrap_err();
        assert!(err.to_string().contains("environment.ci_use"), "{err}");
    }
}
