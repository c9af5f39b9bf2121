use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::dist::DistributionSpec;
use super::prf::{hash_edge, mix64, unit_open};
use crate::error::{Error, Result};
use crate::lattice::EdgeId;

const RESAMPLE_SALT: u64 = 0x5851_F42D_4C95_7F2D;

#[derive(Debug)]
enum Layer {
    /// Fresh independent draws on `edges`, keyed by `key`.
    Resample { edges: HashSet<EdgeId>, key: u64 },
    /// `tau + 1` wherever `tau >= threshold`.
    Tilde { threshold: f64 },
    /// Fixed values.
    Overrides(HashMap<EdgeId, f64>),
}

/// A reproducible random environment.
///
/// `weight(e)` is a pure function of the distribution, the master seed, the
/// ordered list of layers and `e`. Layers are applied in the order they were
/// added, so an override followed by a tilde perturbation perturbs the
/// override, and a resample after an override replaces it. Layers are shared
/// behind `Arc`, so deriving a perturbed configuration is cheap and leaves the
/// base untouched.
#[derive(Clone, Debug)]
pub struct WeightConfig {
    dist: DistributionSpec,
    master_seed: u64,
    base_key: u64,
    layers: Vec<Arc<Layer>>,
}

impl WeightConfig {
    pub fn new(dist: DistributionSpec, master_seed: u64) -> Result<Self> {
        dist.validate()?;
        Ok(WeightConfig { dist, master_seed, base_key: mix64(master_seed), layers: Vec::new() })
    }

    pub fn dist(&self) -> &DistributionSpec {
        &self.dist
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// True when every weight the configuration can produce is an integer,
    /// so passage times are exact sums.
    pub fn is_integer_valued(&self) -> bool {
        self.dist.is_atomic_integer()
            && self.layers.iter().all(|l| match l.as_ref() {
                Layer::Overrides(map) => map.values().all(|v| v.fract() == 0.0 && *v < 2f64.powi(40)),
                _ => true,
            })
    }

    /// Weight of edge `e`.
    #[inline]
    pub fn weight(&self, e: &EdgeId) -> f64 {
        let mut w = self.dist.sample(unit_open(hash_edge(self.base_key, e)));
        for layer in &self.layers {
            match layer.as_ref() {
                Layer::Resample { edges, key } => {
                    if edges.contains(e) {
                        w = self.dist.sample(unit_open(hash_edge(*key, e)));
                    }
                }
                Layer::Tilde { threshold } => {
                    if w >= *threshold {
                        w += 1.0;
                    }
                }
                Layer::Overrides(map) => {
                    if let Some(v) = map.get(e) {
                        w = *v;
                    }
                }
            }
        }
        w
    }

    /// Sets explicit weights, taking precedence over the random draw.
    pub fn with_overrides(&self, overrides: impl IntoIterator<Item = (EdgeId, f64)>) -> Result<Self> {
        let map: HashMap<EdgeId, f64> = overrides.into_iter().collect();
        if let Some((e, v)) = map.iter().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!("override {v} on {e} is not a nonnegative weight")));
        }
        Ok(self.push(Layer::Overrides(map)))
    }

    /// `tau~_e = tau_e + 1{tau_e >= threshold}`.
    pub fn perturb_tilde(&self, threshold: f64) -> Result<Self> {
        if !(threshold >= 0.0) {
            return Err(Error::InvalidParameter(format!("tilde threshold must be >= 0, got {threshold}")));
        }
        Ok(self.push(Layer::Tilde { threshold }))
    }

    /// Replaces the weights on `edges` by an independent copy keyed by `sub_seed`.
    pub fn resample_region(&self, edges: impl IntoIterator<Item = EdgeId>, sub_seed: u64) -> Self {
        let edges: HashSet<EdgeId> = edges.into_iter().collect();
        if edges.is_empty() {
            return self.clone();
        }
        let key = self.master_seed ^ mix64(sub_seed ^ RESAMPLE_SALT);
        self.push(Layer::Resample { edges, key })
    }

    fn push(&self, layer: Layer) -> Self {
        let mut next = self.clone();
        next.layers.push(Arc::new(layer));
        next
    }
}

/// Free-function form of [`WeightConfig::weight`].
pub fn weight(cfg: &WeightConfig, e: &EdgeId) -> f64 {
    cfg.weight(e)
}
