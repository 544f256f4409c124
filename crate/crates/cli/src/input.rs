use std::fs;
use std::path::Path;

use serde::Deserialize;
use wkl_core::{Gaussian, GaussianRepr};

use crate::error::{CliError, Result};

/// `{"mu": {"mean": [..], "cov": [[..]]}, "nu": {...}}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile {
    mu: GaussianRepr<f64>,
    nu: GaussianRepr<f64>,
}

#[derive(Debug, Clone)]
pub struct GaussianPair {
    pub mu: Gaussian<f64>,
    pub nu: Gaussian<f64>,
}

impl GaussianPair {
    pub fn new(mu: Gaussian<f64>, nu: Gaussian<f64>) -> Result<Self> {
        if mu.dim() != nu.dim() {
            return Err(CliError::Usage(format!(
                "mu has dimension {} but nu has dimension {}",
                mu.dim(),
                nu.dim()
            )));
        }
        Ok(Self { mu, nu })
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let raw: PairFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::new(raw.mu.try_into()?, raw.nu.try_into()?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, path)
    }
}
