use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::ncat::{fun_enum_with, EnumOptions, NCat};

/// Enumeration and completion limits used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum search nodes visited by a single functor enumeration.
    pub max_nodes: u64,
    /// Maximum cells created by a pushout completion.
    pub max_cells: usize,
    /// Maximum completion rounds of a pushout.
    pub max_rounds: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 20_000_000, max_cells: 10_000, max_rounds: 10 }
    }
}

impl Budget {
    /// Default budget, with `max_nodes` replaced by `NCT_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Ok(v) = std::env::var("NCT_BUDGET") {
            if let Ok(nodes) = v.trim().parse::<u64>() {
                b.max_nodes = nodes;
            }
        }
        b
    }
}

/// 128-bit structural fingerprint of a category (names ignored).
pub fn fingerprint(x: &NCat) -> (u64, u64) {
    let key = x.shape_key();
    let mut h1 = DefaultHasher::new();
    key.hash(&mut h1);
    let mut h2 = DefaultHasher::new();
    0x9e37_79b9_u32.hash(&mut h2);
    key.len().hash(&mut h2);
    key.hash(&mut h2);
    (h1.finish(), h2.finish())
}

type FunKey = ((u64, u64), (u64, u64));

/// Per-run context: the budget plus a memo table of functor sets.
///
/// Cache fills are idempotent, so racing workers store identical entries.
#[derive(Debug, Default)]
pub struct Ctx {
    pub budget: Budget,
    functors: Mutex<HashMap<FunKey, Arc<Vec<Vec<u32>>>>>,
}

impl Ctx {
    pub fn new(budget: Budget) -> Self {
        Ctx { budget, functors: Mutex::new(HashMap::new()) }
    }

    /// All functors `a -> x` as raw assignments, memoized.
    pub fn functors(&self, a: &NCat, x: &NCat) -> Result<Arc<Vec<Vec<u32>>>> {
        let key = (fingerprint(a), fingerprint(x));
        if let Some(v) = self.functors.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let opts = EnumOptions { max_nodes: self.budget.max_nodes, ..EnumOptions::default() };
        let found = Arc::new(fun_enum_with(a, x, &opts)?);
        self.functors.lock().unwrap().entry(key).or_insert_with(|| found.clone());
        Ok(found)
    }
}
