//! Products and fiber products, computed cellwise.

use std::collections::HashMap;
use std::sync::Arc;

use super::{build_from_keys, standard, FunctorMap, NCat};
use crate::error::{NctError, Result};

/// A fiber product together with its projections.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub object: NCat,
    pub left: FunctorMap,
    pub right: FunctorMap,
    pairs: HashMap<(u32, u32), u32>,
}

impl FiberProduct {
    /// The cell `(a, b)`, if it lies in the fiber product.
    pub fn pair(&self, a: u32, b: u32) -> Option<u32> {
        self.pairs.get(&(a, b)).copied()
    }

    /// The universal map `T -> X ×_Z Y` induced by `p: T -> X` and `q: T -> Y`.
    pub fn pair_into(&self, p: &FunctorMap, q: &FunctorMap) -> Result<FunctorMap> {
        if p.source().shape_key() != q.source().shape_key() {
            return Err(NctError::input("pairing maps with different sources"));
        }
        let mut map = Vec::with_capacity(p.source().len());
        for c in p.source().cells() {
            let cell = self
                .pair(p.apply(c), q.apply(c))
                .ok_or_else(|| NctError::input("pairing maps that disagree over the base"))?;
            map.push(cell);
        }
        Ok(FunctorMap::from_arcs(p.source_arc().clone(), Arc::new(self.object.clone()), map))
    }
}

/// `X ×_Z Y` for `f: X -> Z` and `g: Y -> Z`.
pub fn fiber_product(f: &FunctorMap, g: &FunctorMap) -> Result<FiberProduct> {
    let (x, y) = (f.source(), g.source());
    if f.target().shape_key() != g.target().shape_key() {
        return Err(NctError::input("fiber product over different bases"));
    }
    let n = x.n();
    let mut keys = Vec::new();
    for a in x.cells() {
        for b in y.cells() {
            if f.apply(a) == g.apply(b) {
                keys.push((a, b));
            }
        }
    }
    let (object, pairs) = build_from_keys(
        n,
        &keys,
        |&(a, b)| format!("({},{})", x.name(a), y.name(b)),
        |i, &(a, b)| (x.src(i, a), y.src(i, b)),
        |i, &(a, b)| (x.tgt(i, a), y.tgt(i, b)),
        |i, &(a, b), &(c, d)| Some((x.comp(i, a, c)?, y.comp(i, b, d)?)),
    )?;
    let arc = Arc::new(object.clone());
    let left = FunctorMap::from_arcs(arc.clone(), f.source_arc().clone(), keys.iter().map(|k| k.0).collect());
    let right = FunctorMap::from_arcs(arc, g.source_arc().clone(), keys.iter().map(|k| k.1).collect());
    Ok(FiberProduct { object, left, right, pairs })
}

/// The unique functor to the terminal object.
pub fn to_point(x: &NCat) -> FunctorMap {
    FunctorMap::new_unchecked(x, &standard::point(x.n()), vec![0; x.len()])
}

/// `X × Y`, the fiber product over the terminal object.
pub fn product(x: &NCat, y: &NCat) -> Result<FiberProduct> {
    if x.n() != y.n() {
        return Err(NctError::input("product of objects with different ambient dimension"));
    }
    fiber_product(&to_point(x), &to_point(y))
}
