//! Named objects: cells, boundaries, the walking isomorphism, simplices, and
//! the suspension and coproduct constructions they are built from.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_from_keys, FunctorMap, NCat};
use crate::error::{NctError, Result};

/// Kinds accepted by [`standard_object`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StandardKind {
    /// The free-standing k-cell `C_k`.
    Cell(usize),
    /// The boundary `∂C_k` of the k-cell.
    Boundary(usize),
    /// The walking isomorphism `E`.
    WalkingIso,
    /// The poset on the given vertices, as a 1-category.
    Simplex(Vec<usize>),
    Empty,
    /// The 3-simplex with the edges `0-2` and `1-3` contracted.
    K,
}

/// Builds a standard object inside ambient dimension `n`.
pub fn standard_object(kind: &StandardKind, n: usize) -> Result<NCat> {
    match kind {
        StandardKind::Cell(k) => cell(*k, n),
        StandardKind::Boundary(k) => boundary(*k, n),
        StandardKind::WalkingIso => walking_iso(n),
        StandardKind::Simplex(vs) => simplex(vs, n),
        StandardKind::Empty => Ok(NCat::empty(n)),
        StandardKind::K => k_object(n),
    }
}

/// The terminal n-category, one cell named `o`.
pub fn point(n: usize) -> NCat {
    NCat::from_parts(n, vec!["o".into()], vec![vec![0]; n], vec![vec![0]; n], vec![vec![0]; n])
}

/// `C_k = σ^k(C_0)`.
pub fn cell(k: usize, n: usize) -> Result<NCat> {
    if k > n {
        return Err(NctError::Dimension(format!("C_{k} needs ambient dimension {k}, have {n}")));
    }
    let mut x = point(n);
    for _ in 0..k {
        x = suspension(&x)?;
    }
    Ok(x)
}

/// `∂C_k = σ^k(∅)`.
pub fn boundary(k: usize, n: usize) -> Result<NCat> {
    if k > n {
        return Err(NctError::Dimension(format!("∂C_{k} needs ambient dimension {k}, have {n}")));
    }
    let mut x = NCat::empty(n);
    for _ in 0..k {
        x = suspension(&x)?;
    }
    Ok(x)
}

/// The walking isomorphism: objects `x`, `y`, arrows `f: x -> y`, `g: y -> x`.
pub fn walking_iso(n: usize) -> Result<NCat> {
    if n == 0 {
        return Err(NctError::Dimension("the walking isomorphism needs n >= 1".into()));
    }
    let names = vec!["x".into(), "y".into(), "f".into(), "g".into()];
    let (x, y, f, g) = (0, 1, 2, 3);
    let mut src = vec![vec![0, 1, 2, 3]; n];
    let mut tgt = vec![vec![0, 1, 2, 3]; n];
    src[0] = vec![x, y, x, y];
    tgt[0] = vec![x, y, y, x];
    let mut comp = vec![(1, x, x, x), (1, y, y, y), (1, f, x, f), (1, y, f, f), (1, g, y, g), (1, x, g, g)];
    comp.push((1, g, f, x));
    comp.push((1, f, g, y));
    for lvl in 2..=n {
        for c in 0..4 {
            comp.push((lvl, c, c, c));
        }
    }
    NCat::from_tables(n, names, src, tgt, &comp)
}

/// The poset on `vertices` (sorted, distinct) as a 1-category; cells are
/// pairs `a <= b`, named `a` for objects and `a-b` for arrows.
pub fn simplex(vertices: &[usize], n: usize) -> Result<NCat> {
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() != vertices.len() {
        return Err(NctError::input("simplex vertices must be distinct"));
    }
    if n == 0 && vs.len() > 1 {
        return Err(NctError::Dimension("a simplex with an edge needs n >= 1".into()));
    }
    let mut keys = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        keys.push((a, a));
        for &b in &vs[i + 1..] {
            keys.push((a, b));
        }
    }
    keys.sort_by_key(|&(a, b)| (b - a, a));
    let (x, _) = build_from_keys(
        n,
        &keys,
        |&(a, b)| if a == b { a.to_string() } else { format!("{a}-{b}") },
        |i, &(a, b)| if i == 1 { (a, a) } else { (a, b) },
        |i, &(a, b)| if i == 1 { (b, b) } else { (a, b) },
        |i, &(b, c), &(a, b2)| {
            if i == 1 {
                debug_assert_eq!(b, b2);
                Some((a, c))
            } else {
                ((b, c) == (a, b2)).then_some((b, c))
            }
        },
    )?;
    Ok(x)
}

/// `Δ^[m]`.
pub fn delta(m: usize, n: usize) -> Result<NCat> {
    simplex(&(0..=m).collect::<Vec<_>>(), n)
}

/// The contracted 3-simplex, computed as a pushout.
pub fn k_object(n: usize) -> Result<NCat> {
    let (x, _) = crate::colimit::k_pushout(n, &crate::budget::Budget::default())?;
    Ok(x)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum SKey {
    Top,
    Bot,
    Old(u32),
}

/// The suspension σX in the same ambient dimension; X must have dimension < n.
///
/// New cells `+` (top) and `-` (bottom); an old cell `c` becomes `^c`. At
/// structure 1 every old cell runs from `+` to `-`.
pub fn suspension(x: &NCat) -> Result<NCat> {
    let n = x.n();
    if n == 0 || (!x.is_empty() && x.top_dim() >= n) {
        return Err(NctError::Dimension(format!(
            "cannot suspend a {}-dimensional object in ambient dimension {n}",
            x.top_dim()
        )));
    }
    let mut keys = vec![SKey::Top, SKey::Bot];
    keys.extend(x.cells().map(SKey::Old));
    let (out, _) = build_from_keys(
        n,
        &keys,
        |k| match k {
            SKey::Top => "+".to_string(),
            SKey::Bot => "-".to_string(),
            SKey::Old(c) => format!("^{}", x.name(*c)),
        },
        |i, k| match (i, k) {
            (1, SKey::Old(_)) => SKey::Top,
            (_, SKey::Old(c)) => SKey::Old(x.src(i - 1, *c)),
            (_, k) => *k,
        },
        |i, k| match (i, k) {
            (1, SKey::Old(_)) => SKey::Bot,
            (_, SKey::Old(c)) => SKey::Old(x.tgt(i - 1, *c)),
            (_, k) => *k,
        },
        |i, a, b| match (i, a, b) {
            (1, SKey::Old(_), SKey::Top) => Some(*a),
            (1, SKey::Bot, SKey::Old(_)) => Some(*b),
            (_, SKey::Old(p), SKey::Old(q)) => x.comp(i - 1, *p, *q).map(SKey::Old),
            (_, a, b) if a == b => Some(*a),
            _ => None,
        },
    )?;
    Ok(out)
}

/// σf for a functor `f: X -> Y`, as a functor `σX -> σY`.
pub fn suspend_map(f: &FunctorMap) -> Result<FunctorMap> {
    let sx = suspension(f.source())?;
    let sy = suspension(f.target())?;
    let mut map = vec![0, 1];
    map.extend(f.assignment().iter().map(|&c| c + 2));
    Ok(FunctorMap::from_arcs(Arc::new(sx), Arc::new(sy), map))
}

/// k-fold suspension of an object.
pub fn suspend_times(x: &NCat, k: usize) -> Result<NCat> {
    let mut out = x.clone();
    for _ in 0..k {
        out = suspension(&out)?;
    }
    Ok(out)
}

/// k-fold suspension of a functor.
pub fn suspend_map_times(f: &FunctorMap, k: usize) -> Result<FunctorMap> {
    let mut out = f.clone();
    for _ in 0..k {
        out = suspend_map(&out)?;
    }
    Ok(out)
}

pub(crate) fn disjoint_names(left: &[String], right: &[String]) -> Vec<String> {
    let mut taken: std::collections::HashSet<String> = left.iter().cloned().collect();
    let mut out = Vec::with_capacity(right.len());
    for nm in right {
        let mut cand = nm.clone();
        while taken.contains(&cand) {
            cand.push('\'');
        }
        taken.insert(cand.clone());
        out.push(cand);
    }
    out
}

/// Disjoint union with its two inclusions.
pub fn coproduct(x: &NCat, y: &NCat) -> Result<(NCat, FunctorMap, FunctorMap)> {
    if x.n() != y.n() {
        return Err(NctError::input("coproduct of objects with different ambient dimension"));
    }
    let off = x.len() as u32;
    let right = disjoint_names(x.names(), y.names());
    let mut names = x.names().to_vec();
    names.extend(right);
    let mut comp = Vec::new();
    for (l, a, b, r) in x.comp_entries() {
        comp.push((l, a, b, r));
    }
    for (l, a, b, r) in y.comp_entries() {
        comp.push((l, a + off, b + off, r + off));
    }
    let n = x.n();
    let mut src = Vec::with_capacity(n);
    let mut tgt = Vec::with_capacity(n);
    for i in 1..=n {
        src.push(x.cells().map(|c| x.src(i, c)).chain(y.cells().map(|c| y.src(i, c) + off)).collect());
        tgt.push(x.cells().map(|c| x.tgt(i, c)).chain(y.cells().map(|c| y.tgt(i, c) + off)).collect());
    }
    let sum = NCat::from_tables(n, names, src, tgt, &comp)?;
    let arc = Arc::new(sum.clone());
    let ix = FunctorMap::from_arcs(Arc::new(x.clone()), arc.clone(), x.cells().collect());
    let iy = FunctorMap::from_arcs(Arc::new(y.clone()), arc, y.cells().map(|c| c + off).collect());
    Ok((sum, ix, iy))
}
