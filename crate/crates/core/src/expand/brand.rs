use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Dose-form suffixes stripped from names before lookup ("Hidil Cap" -> "hidil").
const FORM_SUFFIXES: [&str; 8] = ["cap", "caps", "capsule", "capsules", "tab", "tabs", "tablet", "tablets"];

#[derive(Debug, Error)]
pub enum BrandMapError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("brand map JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("brand {0:?} has no ingredients")]
    NoIngredients(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrandEntry {
    pub ingredients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_dose_form: Option<String>,
}

/// Brand or abbreviated name to active ingredients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BrandMap {
    entries: BTreeMap<String, BrandEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolutionStatus {
    Resolved,
    Passthrough,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub status: ResolutionStatus,
    pub values: Vec<String>,
}

fn normalize(name: &str) -> String {
    crate::text::squash(name)
}

/// Normalized name with a trailing dose-form word removed, if any.
fn strip_suffix(norm: &str) -> Option<&str> {
    let (head, last) = norm.rsplit_once(' ')?;
    FORM_SUFFIXES.contains(&last).then_some(head)
}

impl BrandMap {
    pub fn new(entries: BTreeMap<String, BrandEntry>) -> Result<Self, BrandMapError> {
        let mut out = BTreeMap::new();
        for (k, v) in entries {
            let ingredients: Vec<String> = v
                .ingredients
                .iter()
                .map(|i| i.trim().to_string())
                .filter(|i| !i.is_empty())
                .collect();
            if ingredients.is_empty() {
                return Err(BrandMapError::NoIngredients(k));
            }
            out.insert(normalize(&k), BrandEntry { ingredients, ..v });
        }
        Ok(BrandMap { entries: out })
    }

    pub fn from_json(json: &str) -> Result<Self, BrandMapError> {
        Self::new(serde_json::from_str(json)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BrandMapError> {
        let path = path.as_ref();
        let json = std::fs::read_to_string(path).map_err(|source| BrandMapError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&json)
    }

    pub fn shipped() -> Self {
        Self::from_json(crate::data::BRAND_MAP_JSON).expect("shipped brand map is valid")
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// A copy without `name` (matched after normalization).
    pub fn without(&self, name: &str) -> Self {
        let mut entries = self.entries.clone();
        entries.remove(&normalize(name));
        BrandMap { entries }
    }

    /// A copy with `entry` added under `name`, replacing any existing entry.
    pub fn with(&self, name: &str, entry: BrandEntry) -> Self {
        let mut entries = self.entries.clone();
        entries.insert(normalize(name), entry);
        BrandMap { entries }
    }

    /// Exact normalized name first, then with a trailing form suffix removed.
    pub fn lookup(&self, name: &str) -> Option<&BrandEntry> {
        let norm = normalize(name);
        self.entries
            .get(&norm)
            .or_else(|| strip_suffix(&norm).and_then(|h| self.entries.get(h)))
    }
}

/// Map a medication name to its ingredients; a miss passes the surface through unchanged.
pub fn resolve_ingredient(name: &str, brands: &BrandMap) -> Resolution {
    match brands.lookup(name) {
        Some(e) => Resolution {
            status: ResolutionStatus::Resolved,
            values: e.ingredients.clone(),
        },
        None => Resolution {
            status: ResolutionStatus::Passthrough,
            values: vec![name.to_string()],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_brand() {
        let r = resolve_ingredient("Thyrosit", &BrandMap::shipped());
        assert_eq!(r.status, ResolutionStatus::Resolved);
        assert_eq!(r.values, ["levothyroxine"]);
    }

    #[test]
    fn held_out_brand_passes_through() {
        let map = BrandMap::shipped().without("hidil");
        let r = resolve_ingredient("HIDIL", &map);
        assert_eq!(r.status, ResolutionStatus::Passthrough);
        assert_eq!(r.values, ["HIDIL"]);
    }

    #[test]
    fn combination_product() {
        let r = resolve_ingredient("Sulfamethoxazole/Trimethoprim", &BrandMap::shipped());
        assert_eq!(r.values, ["sulfamethoxazole", "trimethoprim"]);
    }

    #[test]
    fn strips_form_suffix() {
        let r = resolve_ingredient("Hidil Cap", &BrandMap::shipped());
        assert_eq!(r.values, ["gemfibrozil"]);
        let r = resolve_ingredient("Mevalotin  Pretect", &BrandMap::shipped());
        assert_eq!(r.values, ["pravastatin"]);
    }

    #[test]
    fn empty_ingredients_rejected() {
        assert!(BrandMap::from_json(r#"{"x":{"ingredients":[" "]}}"#).is_err());
    }
}
