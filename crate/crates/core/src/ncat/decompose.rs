//! Fiber products of cells, `C_i ×_{C_j} C_k`, written as iterated pushouts of cells.

use serde::{Deserialize, Serialize};

use super::iso::{find_iso, is_iso};
use super::limits::{fiber_product, product, FiberProduct};
use super::standard::{cell, suspend_times, suspension};
use super::{FunctorMap, NCat};
use crate::budget::Budget;
use crate::colimit::{pushout, wedge_at_endpoints, SpanDiagram};
use crate::error::{NctError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fiber {
    Empty,
    Point,
    Cell(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PullbackCase {
    /// The images meet nowhere; the pullback is empty.
    Disjoint,
    /// The fiber is a single object.
    PointFiber,
    /// The fiber is a cell but the other factor is an object.
    DegenerateFactor,
    /// A product of two positive-dimensional cells.
    GenuineProduct,
}

/// Result of [`decompose_cell_pullback`].
#[derive(Debug, Clone)]
pub struct CellPullback {
    /// Number of suspensions shared by both maps.
    pub depth: usize,
    pub fiber: Fiber,
    pub case: PullbackCase,
    /// Whether the roles of the two maps were exchanged after desuspending.
    pub swapped: bool,
    pub pullback: FiberProduct,
    /// The pushout-of-cells presentation.
    pub recipe: NCat,
    /// `recipe ≅ pullback`.
    pub verified: bool,
}

/// The dimension `k` of a cell, with an isomorphism onto the standard `C_k`.
pub fn as_standard_cell(x: &NCat, budget: &Budget) -> Result<Option<(usize, FunctorMap)>> {
    if x.is_empty() || x.len() % 2 == 0 {
        return Ok(None);
    }
    let k = (x.len() - 1) / 2;
    if k > x.n() {
        return Ok(None);
    }
    let c = cell(k, x.n())?;
    if x.shape_key() == c.shape_key() {
        return Ok(Some((k, FunctorMap::new_unchecked(x, &c, x.cells().collect()))));
    }
    Ok(find_iso(x, &c, budget)?.map(|f| (k, f)))
}

/// `g` with `σg = f`, for `f` between standard cells.
fn desuspend(f: &FunctorMap) -> Option<FunctorMap> {
    let (a, b) = (f.source(), f.target());
    if a.len() < 3 || b.len() < 3 || f.apply(0) != 0 || f.apply(1) != 1 {
        return None;
    }
    let map: Vec<u32> = (2..a.len() as u32).map(|c| f.apply(c)).collect();
    if map.iter().any(|&c| c < 2) {
        return None;
    }
    let n = a.n();
    let lower = |x: &NCat| cell((x.len() - 1) / 2 - 1, n);
    let (la, lb) = (lower(a).ok()?, lower(b).ok()?);
    Some(FunctorMap::new_unchecked(&la, &lb, map.into_iter().map(|c| c - 2).collect()))
}

/// `C_x ∪^{C_0} C_y ∪^{σ(C_{x-1} × C_{y-1})} C_y ∪^{C_0} C_x`.
pub fn product_of_cells_recipe(x: usize, y: usize, n: usize, budget: &Budget) -> Result<NCat> {
    if x == 0 || y == 0 {
        return if x == 0 { cell(y, n) } else { cell(x, n) };
    }
    Ok(pushout(&product_of_cells_span(x, y, n)?, budget)?.object)
}

/// The span `C_x ∨ C_y <- σ(C_{x-1} × C_{y-1}) -> C_y ∨ C_x` behind
/// [`product_of_cells_recipe`]; needs `x, y ≥ 1`.
pub fn product_of_cells_span(x: usize, y: usize, n: usize) -> Result<SpanDiagram> {
    if x == 0 || y == 0 {
        return Err(NctError::input("product span needs positive dimensions"));
    }
    let (cx, cy) = (cell(x, n)?, cell(y, n)?);
    let first = wedge_at_endpoints(&cx, &cy)?;
    let second = wedge_at_endpoints(&cy, &cx)?;
    let inner = product(&cell(x - 1, n)?, &cell(y - 1, n)?)?;
    let glue = suspension(&inner.object)?;
    // An old cell (a, b) of the glue is the composite of the suspended a then b.
    let leg = |w: &crate::colimit::Pushout, swap: bool| -> Result<FunctorMap> {
        let mut map = vec![w.to_left.apply(0), w.to_right.apply(1)];
        for c in inner.object.cells() {
            let (a, b) = (inner.left.apply(c) + 2, inner.right.apply(c) + 2);
            let (l, r) = if swap { (b, a) } else { (a, b) };
            let (l, r) = (w.to_left.apply(l), w.to_right.apply(r));
            let composite = w
                .object
                .comp(1, r, l)
                .ok_or_else(|| NctError::internal("wedge lacks a composite across the glued object"))?;
            map.push(composite);
        }
        FunctorMap::new(&glue, &w.object, map)
    };
    SpanDiagram::new(leg(&first, false)?, leg(&second, true)?)
}

/// Computes `C_i ×_{C_j} C_k` and its presentation as a colimit of cells.
pub fn decompose_cell_pullback(phi: &FunctorMap, psi: &FunctorMap, budget: &Budget) -> Result<CellPullback> {
    let n = phi.source().n();
    let std = |x: &NCat| -> Result<(usize, FunctorMap)> {
        as_standard_cell(x, budget)?.ok_or_else(|| NctError::input("decomposition needs maps between cells"))
    };
    let (_, a_iso) = std(phi.source())?;
    let (_, b_iso) = std(psi.source())?;
    let (_, z_iso) = std(phi.target())?;
    if phi.target().shape_key() != psi.target().shape_key() {
        return Err(NctError::input("maps into different cells"));
    }
    let inverse = |f: &FunctorMap| -> FunctorMap {
        let mut inv = vec![0; f.assignment().len()];
        for (c, &d) in f.assignment().iter().enumerate() {
            inv[d as usize] = c as u32;
        }
        FunctorMap::from_arcs(f.target_arc().clone(), f.source_arc().clone(), inv)
    };
    let normalize = |f: &FunctorMap, src_iso: &FunctorMap| -> Result<FunctorMap> {
        inverse(src_iso).then(&f.retarget(phi.target()))?.then(&z_iso)
    };
    let (mut f, mut g) = (normalize(phi, &a_iso)?, normalize(psi, &b_iso)?);
    let mut depth = 0;
    while let (Some(f1), Some(g1)) = (desuspend(&f), desuspend(&g)) {
        f = f1;
        g = g1;
        depth += 1;
    }
    let swapped = desuspend(&f).is_some();
    if swapped {
        std::mem::swap(&mut f, &mut g);
    }
    // f now factors through the object `p`.
    let p = f.apply(0);
    let fiber_cells: Vec<u32> = g.source().cells().filter(|&c| g.apply(c) == p).collect();
    let (fiber_obj, _) = g.source().restrict_to(&fiber_cells)?;
    let fiber = match fiber_obj.len() {
        0 => Fiber::Empty,
        1 => Fiber::Point,
        _ => Fiber::Cell(std(&fiber_obj)?.0),
    };
    let i_low = (f.source().len() - 1) / 2;
    let core_n = n;
    let (case, core) = match fiber {
        Fiber::Empty => (PullbackCase::Disjoint, NCat::empty(core_n)),
        Fiber::Point => (PullbackCase::PointFiber, cell(i_low, core_n)?),
        Fiber::Cell(m) if i_low == 0 => (PullbackCase::DegenerateFactor, cell(m, core_n)?),
        Fiber::Cell(m) => (PullbackCase::GenuineProduct, product_of_cells_recipe(i_low, m, core_n, budget)?),
    };
    let recipe = suspend_times(&core, depth)?;
    let pullback = fiber_product(phi, psi)?;
    let verified = is_iso(&recipe, &pullback.object, budget)?;
    Ok(CellPullback { depth, fiber, case, swapped, pullback, recipe, verified })
}

/// All maps `C_a -> C_b` between standard cells.
pub fn cell_maps(a: usize, b: usize, n: usize, budget: &Budget) -> Result<Vec<FunctorMap>> {
    super::fun_enum(&cell(a, n)?, &cell(b, n)?, budget)
}
