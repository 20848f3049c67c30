use super::manifest::{sha256_hex, InputDigest};
use crate::evalkit::EquivalenceLexicon;
use crate::expand::BrandMap;
use crate::sigparse::SigLexicon;
use anyhow::{Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Optional JSON file naming resource paths; relative paths resolve against the file's directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub lexicon: Option<PathBuf>,
    #[serde(default)]
    pub brand_map: Option<PathBuf>,
    #[serde(default)]
    pub equivalence: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(skip)]
    pub digest: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Config =
            serde_json::from_str(&content).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.lexicon, &mut cfg.brand_map, &mut cfg.equivalence].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.digest = Some(sha256_hex(content.as_bytes()));
        Ok(cfg)
    }
}

/// Lexicons in effect for one command, plus digests of the files they came from.
pub struct Resources {
    pub lex: SigLexicon,
    pub brands: BrandMap,
    pub eq: EquivalenceLexicon,
    pub inputs: Vec<InputDigest>,
}

impl Resources {
    pub fn load(
        cfg: &Config,
        lexicon: Option<&Path>,
        brand_map: Option<&Path>,
        equivalence: Option<&Path>,
    ) -> Result<Self> {
        let mut inputs = Vec::new();
        let lex = match lexicon.or(cfg.lexicon.as_deref()) {
            Some(p) => {
                inputs.push(InputDigest::of_file(p)?);
                SigLexicon::load(p).with_context(|| format!("loading lexicon {}", p.display()))?
            }
            None => SigLexicon::shipped(),
        };
        let brands = match brand_map.or(cfg.brand_map.as_deref()) {
            Some(p) => {
                inputs.push(InputDigest::of_file(p)?);
                BrandMap::load(p).with_context(|| format!("loading brand map {}", p.display()))?
            }
            None => BrandMap::shipped(),
        };
        let eq = match equivalence.or(cfg.equivalence.as_deref()) {
            Some(p) => {
                inputs.push(InputDigest::of_file(p)?);
                EquivalenceLexicon::load(p).with_context(|| format!("loading equivalence lexicon {}", p.display()))?
            }
            None => EquivalenceLexicon::shipped().clone(),
        };
        Ok(Resources { lex, brands, eq, inputs })
    }
}
