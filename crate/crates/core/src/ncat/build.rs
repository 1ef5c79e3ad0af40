use std::collections::HashMap;
use std::hash::Hash;

use super::{NCat, NONE};
use crate::error::{NctError, Result};

/// Builds an n-category whose cells are `keys`, with structure given by
/// closures on keys. `comp` is consulted only on pairs with
/// `src(i, x) == tgt(i, y)` and must land back in `keys`.
pub fn build_from_keys<K, FN, FS, FT, FC>(
    n: usize,
    keys: &[K],
    name: FN,
    src: FS,
    tgt: FT,
    comp: FC,
) -> Result<(NCat, HashMap<K, u32>)>
where
    K: Hash + Eq + Clone,
    FN: Fn(&K) -> String,
    FS: Fn(usize, &K) -> K,
    FT: Fn(usize, &K) -> K,
    FC: Fn(usize, &K, &K) -> Option<K>,
{
    let len = keys.len();
    let mut index: HashMap<K, u32> = HashMap::with_capacity(len);
    for (i, k) in keys.iter().enumerate() {
        if index.insert(k.clone(), i as u32).is_some() {
            return Err(NctError::internal("duplicate key in construction"));
        }
    }
    let look = |k: &K| -> Result<u32> {
        index
            .get(k)
            .copied()
            .ok_or_else(|| NctError::internal(format!("construction leaves the cell set at {}", name(k))))
    };
    let mut s = vec![vec![0u32; len]; n];
    let mut t = vec![vec![0u32; len]; n];
    for lvl in 1..=n {
        for (i, k) in keys.iter().enumerate() {
            s[lvl - 1][i] = look(&src(lvl, k))?;
            t[lvl - 1][i] = look(&tgt(lvl, k))?;
        }
    }
    let mut c = vec![vec![NONE; len * len]; n];
    for lvl in 1..=n {
        let mut by_tgt: Vec<Vec<u32>> = vec![Vec::new(); len];
        for y in 0..len {
            by_tgt[t[lvl - 1][y] as usize].push(y as u32);
        }
        for x in 0..len {
            let sx = s[lvl - 1][x] as usize;
            for &y in &by_tgt[sx] {
                let r = comp(lvl, &keys[x], &keys[y as usize]).ok_or_else(|| {
                    NctError::internal(format!(
                        "missing composite of {} and {} at level {lvl}",
                        name(&keys[x]),
                        name(&keys[y as usize])
                    ))
                })?;
                c[lvl - 1][x * len + y as usize] = look(&r)?;
            }
        }
    }
    let names = keys.iter().map(&name).collect();
    Ok((NCat::from_parts(n, names, s, t, c), index))
}
