//! JSON model files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "alphabet": ["a", "b"],
//!   "merges": [["a", "b"]],
//!   "variant": { "kind": "random_drop", "N": 2000, "k": 500, "seed": 1,
//!                "generator": "splitmix64-keyed/v1", "drop_set": ["ab"] },
//!   "config": { ... }
//! }
//! ```
//!
//! `variant` and `config` are optional. Variant blocks store the
//! materialized drop or duplication set so a saved model does not depend on
//! re-ranking a corpus.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bpe::Tokenizer;
use crate::error::{Error, Result};
use crate::rng;
use crate::variants::{DuplicationSpec, InflationSpec, RandomDropSpec, Variant, VariantTokenizer};

pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub version: u32,
    pub alphabet: Vec<String>,
    pub merges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<VariantBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VariantBlock {
    RandomDrop {
        #[serde(rename = "N")]
        n: usize,
        k: usize,
        seed: u64,
        generator: String,
        drop_set: Vec<String>,
    },
    Duplication {
        #[serde(rename = "N")]
        n: usize,
        k: u32,
        seed: u64,
        generator: String,
        duplicated: Vec<String>,
    },
    Inflate {
        extra: usize,
    },
}

impl ModelFile {
    pub fn from_tokenizer(tokenizer: &Tokenizer) -> Self {
        ModelFile {
            version: MODEL_VERSION,
            alphabet: tokenizer.alphabet().iter().map(char::to_string).collect(),
            merges: tokenizer
                .merges()
                .iter()
                .map(|m| (m.left.clone(), m.right.clone()))
                .collect(),
            variant: None,
            config: None,
        }
    }

    pub fn from_variant(tokenizer: &VariantTokenizer) -> Self {
        let mut file = Self::from_tokenizer(&tokenizer.base);
        file.variant = match &tokenizer.variant {
            Variant::Baseline => None,
            Variant::RandomDrop(s) => Some(VariantBlock::RandomDrop {
                n: s.pool_size,
                k: s.drop_count,
                seed: s.seed,
                generator: rng::GENERATOR.to_owned(),
                drop_set: s.drop_set.iter().cloned().collect(),
            }),
            Variant::Duplication(s) => Some(VariantBlock::Duplication {
                n: s.top_count,
                k: s.factor,
                seed: s.seed,
                generator: rng::GENERATOR.to_owned(),
                duplicated: s.duplicated.iter().cloned().collect(),
            }),
            Variant::Inflate(s) => Some(VariantBlock::Inflate {
                extra: s.extra_tokens,
            }),
        };
        file
    }

    pub fn with_config(mut self, config: impl Serialize) -> Result<Self> {
        self.config = Some(serde_json::to_value(config)?);
        Ok(self)
    }

    pub fn tokenizer(&self) -> Result<Tokenizer> {
        if self.version != MODEL_VERSION {
            return Err(Error::InvalidModel(format!(
                "unsupported version {} (expected {MODEL_VERSION})",
                self.version
            )));
        }
        let mut alphabet = Vec::with_capacity(self.alphabet.len());
        for s in &self.alphabet {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => alphabet.push(c),
                _ => {
                    return Err(Error::InvalidModel(format!(
                        "alphabet entry {s:?} is not a single character"
                    )))
                }
            }
        }
        Tokenizer::new(alphabet, self.merges.iter().cloned())
    }

    pub fn variant_tokenizer(&self) -> Result<VariantTokenizer> {
        let base = self.tokenizer()?;
        let variant = match &self.variant {
            None => Variant::Baseline,
            Some(VariantBlock::RandomDrop {
                n,
                k,
                seed,
                generator,
                drop_set,
            }) => {
                check_generator(generator)?;
                let drop_set: BTreeSet<String> = drop_set.iter().cloned().collect();
                if let Some(bad) = drop_set
                    .iter()
                    .find(|t| !base.contains(t) || base.is_atomic(t))
                {
                    return Err(Error::InvalidModel(format!(
                        "drop set entry {bad:?} is not a non-atomic vocabulary entry"
                    )));
                }
                Variant::RandomDrop(RandomDropSpec {
                    pool_size: *n,
                    drop_count: *k,
                    seed: *seed,
                    drop_set,
                })
            }
            Some(VariantBlock::Duplication {
                n,
                k,
                seed,
                generator,
                duplicated,
            }) => {
                check_generator(generator)?;
                if *k < 2 {
                    return Err(Error::InvalidModel(format!("duplication factor {k} < 2")));
                }
                let duplicated: BTreeSet<String> = duplicated.iter().cloned().collect();
                if let Some(bad) = duplicated.iter().find(|t| !base.contains(t)) {
                    return Err(Error::InvalidModel(format!(
                        "duplicated token {bad:?} is not in the vocabulary"
                    )));
                }
                Variant::Duplication(DuplicationSpec {
                    top_count: *n,
                    factor: *k,
                    seed: *seed,
                    duplicated,
                })
            }
            Some(VariantBlock::Inflate { extra }) => Variant::Inflate(InflationSpec {
                extra_tokens: *extra,
            }),
        };
        Ok(VariantTokenizer::new(base, variant))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn check_generator(name: &str) -> Result<()> {
    if name == rng::GENERATOR {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "model was built with generator {name:?}, this build uses {:?}",
            rng::GENERATOR
        )))
    }
}
