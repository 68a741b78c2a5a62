use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::linear::InnerProduct;
use crate::symbol::SumOperator;
use crate::zeta::{Cache, EngineConfig, Mode, Route};
use crate::{Error, Result};

/// Settings of one run. Loaded from a JSON file, then overridden by flags,
/// then validated; the result is echoed into JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `-1` for strict sums, `+1` for weak sums. `flatten` reads it as the
    /// quasi-shuffle parameter instead.
    pub lambda: i32,
    pub mode: Mode,
    pub precision_bits: u32,
    /// Largest Bernoulli index the exact engine may use.
    pub em_truncation: u32,
    /// Pole order assumed by numeric fitting; derived from the forest if unset.
    pub degree_bound: Option<u32>,
    pub denominator_bound: u64,
    pub q_file: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let e = EngineConfig::default();
        RunConfig {
            lambda: -1,
            mode: e.mode,
            precision_bits: e.fit.numeric.precision_bits,
            em_truncation: e.exact.max_bernoulli,
            degree_bound: None,
            denominator_bound: e.denominator_bound,
            q_file: None,
            cache_dir: None,
            seed: e.fit.seed,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if self.lambda != -1 && self.lambda != 1 {
            return bad(format!("lambda must be -1 or 1, got {}", self.lambda));
        }
        if self.precision_bits < 53 {
            return bad(format!("precision_bits must be at least 53, got {}", self.precision_bits));
        }
        if self.em_truncation < 2 {
            return bad(format!("em_truncation must be at least 2, got {}", self.em_truncation));
        }
        if self.degree_bound == Some(0) {
            return bad("degree_bound must be at least 1".into());
        }
        if self.denominator_bound == 0 {
            return bad("denominator_bound must be at least 1".into());
        }
        Ok(())
    }

    pub fn operator(&self) -> Result<SumOperator> {
        SumOperator::from_lambda(self.lambda)
    }

    pub fn inner_product(&self) -> Result<InnerProduct> {
        match &self.q_file {
            Some(p) => InnerProduct::load(p),
            None => Ok(InnerProduct::identity()),
        }
    }

    /// `$BRZETA_CACHE_DIR` wins over `cache_dir`.
    pub fn cache(&self) -> Option<Cache> {
        Cache::from_env_or(self.cache_dir.clone())
    }

    pub fn engine(&self, route: Route) -> EngineConfig {
        let mut e =
            EngineConfig { mode: self.mode, route, denominator_bound: self.denominator_bound, ..Default::default() };
        e.exact.max_bernoulli = self.em_truncation;
        e.fit.numeric.precision_bits = self.precision_bits;
        e.fit.max_pole_order = self.degree_bound;
        e.fit.seed = self.seed;
        e
    }
}
