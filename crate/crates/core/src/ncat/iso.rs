use std::sync::Arc;

use super::functor::signatures;
use super::{fun_enum_with, EnumOptions, FunctorMap, NCat};
use crate::budget::Budget;
use crate::error::Result;

fn sorted_signatures(x: &NCat) -> Vec<Vec<u32>> {
    let mut s = signatures(x);
    s.sort();
    s
}

/// Cheap necessary condition for isomorphism.
pub fn same_invariants(a: &NCat, b: &NCat) -> bool {
    a.n() == b.n()
        && a.len() == b.len()
        && a.dim_profile() == b.dim_profile()
        && sorted_signatures(a) == sorted_signatures(b)
}

/// Finds an isomorphism `a -> b` if one exists.
///
/// Invariants (size, dimension profile, degree signatures) are compared
/// first; the search then only tries injective, signature-preserving cells.
pub fn find_iso(a: &NCat, b: &NCat, budget: &Budget) -> Result<Option<FunctorMap>> {
    if !same_invariants(a, b) {
        return Ok(None);
    }
    let opts = EnumOptions {
        max_nodes: budget.max_nodes,
        injective: true,
        match_signature: true,
        limit: Some(1),
        fixed: Vec::new(),
    };
    let found = fun_enum_with(a, b, &opts)?;
    Ok(found
        .into_iter()
        .next()
        .map(|m| FunctorMap::from_arcs(Arc::new(a.clone()), Arc::new(b.clone()), m)))
}

/// Decides whether `a` and `b` are isomorphic.
pub fn is_iso(a: &NCat, b: &NCat, budget: &Budget) -> Result<bool> {
    Ok(find_iso(a, b, budget)?.is_some())
}
