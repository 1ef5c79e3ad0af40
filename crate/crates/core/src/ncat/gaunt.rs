use serde::{Deserialize, Serialize};

use super::standard::{cell, suspend_map_times, suspend_times, walking_iso};
use super::{FunctorMap, NCat};
use crate::budget::Ctx;
use crate::error::Result;

/// Outcome of [`is_gaunt`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GauntReport {
    pub gaunt: bool,
    /// First level k at which the locality test fails.
    pub failing_level: Option<usize>,
    /// Assignment of a functor `σ^{k-1}E -> X` that does not factor through `C_{k-1}`.
    pub witness: Option<Vec<String>>,
    /// A non-identity invertible cell found by the direct scan.
    pub invertible_cell: Option<String>,
    /// Whether the locality test and the direct scan agree.
    pub criteria_agree: bool,
}

/// The collapse `σ^{k}E -> σ^{k}C_0 = C_k`.
pub fn collapse_map(k: usize, n: usize) -> Result<FunctorMap> {
    let e = walking_iso(n)?;
    let base = FunctorMap::new_unchecked(&e, &cell(0, n)?, vec![0; 4]);
    suspend_map_times(&base, k)
}

/// Level-k cells with a two-sided inverse under structure k.
pub fn invertible_cells(x: &NCat, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for f in x.cells() {
        if x.dim(f) != k {
            continue;
        }
        let (s, t) = (x.src(k, f), x.tgt(k, f));
        let inverse = x.cells().any(|g| x.comp(k, g, f) == Some(s) && x.comp(k, f, g) == Some(t));
        if inverse {
            out.push(f);
        }
    }
    out
}

/// Gauntness by locality against `σ^{k-1}E -> C_{k-1}` for k = 1..n,
/// cross-checked against the direct scan for invertible cells.
pub fn is_gaunt(x: &NCat, ctx: &Ctx) -> Result<GauntReport> {
    let n = x.n();
    let mut failing_level = None;
    let mut witness = None;
    for k in 1..=n {
        let p = collapse_map(k - 1, n)?;
        let ek = suspend_times(&walking_iso(n)?, k - 1)?;
        let cells_fun = ctx.functors(p.target(), x)?;
        let e_fun = ctx.functors(&ek, x)?;
        let mut image: Vec<Vec<u32>> = cells_fun
            .iter()
            .map(|f| p.assignment().iter().map(|&c| f[c as usize]).collect())
            .collect();
        image.sort();
        image.dedup();
        let injective = image.len() == cells_fun.len();
        let missing = e_fun.iter().find(|g| image.binary_search(g).is_err());
        if !injective || missing.is_some() {
            failing_level = Some(k);
            witness = missing.map(|g| g.iter().map(|&c| x.name(c).to_string()).collect());
            break;
        }
    }
    let direct = (1..=n).find_map(|k| invertible_cells(x, k).first().map(|&c| (k, c)));
    let gaunt = failing_level.is_none();
    let criteria_agree = match (failing_level, direct) {
        (None, None) => true,
        (Some(k), Some((j, _))) => k == j,
        _ => false,
    };
    Ok(GauntReport {
        gaunt,
        failing_level,
        witness,
        invertible_cell: direct.map(|(_, c)| x.name(c).to_string()),
        criteria_agree,
    })
}
