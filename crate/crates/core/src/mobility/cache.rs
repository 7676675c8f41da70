use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use super::boundary::{boundary_intensities, BoundaryEstimation, BoundaryIntensities};
use crate::error::Result;
use crate::model::NetworkConfig;

type Slot = Arc<Mutex<Option<Arc<BoundaryIntensities>>>>;

/// Boundary intensities keyed by tessellation geometry and estimation
/// settings. Lookups share a read lock on the key map; each key owns a slot
/// so that concurrent requests for the same key run a single estimation.
/// Failed estimations are not cached.
#[derive(Debug, Default)]
pub struct BoundaryCache {
    entries: RwLock<HashMap<u64, Slot>>,
    estimations: AtomicUsize,
}

impl BoundaryCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(config: &NetworkConfig, est: &BoundaryEstimation) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        config.geometry_fingerprint().hash(&mut h);
        est.chords.hash(&mut h);
        est.length.to_bits().hash(&mut h);
        est.seed.hash(&mut h);
        h.finish()
    }

    pub fn get_or_estimate(
        &self,
        config: &NetworkConfig,
        est: &BoundaryEstimation,
    ) -> Result<Arc<BoundaryIntensities>> {
        let key = Self::key(config, est);
        let existing = self.entries.read().expect("cache lock poisoned").get(&key).cloned();
        let slot = match existing {
            Some(slot) => slot,
            None => Arc::clone(self.entries.write().expect("cache lock poisoned").entry(key).or_default()),
        };
        let mut guard = slot.lock().expect("cache slot poisoned");
        if let Some(hit) = guard.as_ref() {
            return Ok(Arc::clone(hit));
        }
        let fresh = Arc::new(boundary_intensities(config, est)?);
        self.estimations.fetch_add(1, Ordering::Relaxed);
        *guard = Some(Arc::clone(&fresh));
        Ok(fresh)
    }

    /// Number of estimations actually run.
    pub fn estimations(&self) -> usize {
        self.estimations.load(Ordering::Relaxed)
    }

    /// Number of cached estimates.
    pub fn len(&self) -> usize {
        let map = self.entries.read().expect("cache lock poisoned");
        map.values().filter(|s| s.lock().expect("cache slot poisoned").is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
