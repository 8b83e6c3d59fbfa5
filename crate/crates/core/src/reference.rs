//! Bundled reference designs (`xband-4pole`, `xband-8pole`, `yband-4pole`).

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::config::FilterConfig;
use crate::io::toml_error;

const BUNDLED: &[(&str, &str)] = &[
    ("xband-4pole", include_str!("../data/designs/xband-4pole.toml")),
    ("xband-8pole", include_str!("../data/designs/xband-8pole.toml")),
    ("yband-4pole", include_str!("../data/designs/yband-4pole.toml")),
];

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Dimension {
    pub label: String,
    pub value: f64,
}

/// Published values and physical dimensions attached to a bundled design.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReferenceData {
    pub waveguide: String,
    pub note: String,
    pub q_e: f64,
    pub k: Vec<f64>,
    pub dimensions_mm: Vec<Dimension>,
    #[serde(default)]
    pub mode_matching_dimensions_mm: Vec<Dimension>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDesign {
    pub config: FilterConfig,
    pub reference: ReferenceData,
}

#[derive(Deserialize)]
struct ReferenceOnly {
    reference: ReferenceData,
}

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// Raw config text of a bundled design.
pub fn bundled_config_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn bundled(name: &str) -> Result<ReferenceDesign> {
    let text = bundled_config_text(name).ok_or_else(|| Error::UnknownPreset {
        name: name.to_string(),
        available: bundled_names().into_iter().map(String::from).collect(),
    })?;
    let config = FilterConfig::parse(text)?;
    let reference = toml::from_str::<ReferenceOnly>(text)
        .map_err(|e| toml_error(e, text))?
        .reference;
    Ok(ReferenceDesign { config, reference })
}
