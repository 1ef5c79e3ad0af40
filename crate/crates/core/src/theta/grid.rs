use std::fmt;

use serde::{Deserialize, Serialize};

use super::{monotone_maps, theta_compose, ThetaMor, ThetaObj};
use crate::error::{NctError, Result};

/// An object `[m_1] × ⋯ × [m_n]` of Δ^×n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// All indices with coordinate sum at most `bound`, ordered by sum then lexicographically.
    pub fn window(n: usize, bound: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0; n];
        fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if k == cur.len() {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for v in 0..=left {
                cur[k] = v;
                go(k + 1, left - v, cur, out);
            }
            cur[k] = 0;
        }
        go(0, bound, &mut cur, &mut out);
        out.sort_by_key(|m| (m.0.iter().sum::<usize>(), m.0.clone()));
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| format!("[{m}]")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// A morphism of Δ^×n: one monotone map per coordinate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct MultiMor {
    pub dom: MultiIndex,
    pub cod: MultiIndex,
    pub maps: Vec<Vec<usize>>,
}

impl MultiMor {
    pub fn identity(m: &MultiIndex) -> MultiMor {
        MultiMor { dom: m.clone(), cod: m.clone(), maps: m.0.iter().map(|&k| (0..=k).collect()).collect() }
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &MultiMor) -> Result<MultiMor> {
        if f.cod != self.dom {
            return Err(NctError::input("cannot compose Δ^×n morphisms"));
        }
        let maps = f.maps.iter().zip(&self.maps).map(|(a, b)| a.iter().map(|&v| b[v]).collect()).collect();
        Ok(MultiMor { dom: f.dom.clone(), cod: self.cod.clone(), maps })
    }

    /// Coordinatewise `j ↦ min(j, cod_k)`.
    pub fn clamp(dom: &MultiIndex, cod: &MultiIndex) -> MultiMor {
        let maps = dom.0.iter().zip(&cod.0).map(|(&a, &b)| (0..=a).map(|j| j.min(b)).collect()).collect();
        MultiMor { dom: dom.clone(), cod: cod.clone(), maps }
    }

    /// Coordinatewise initial-segment inclusion; needs `dom ≤ cod`.
    pub fn inclusion(dom: &MultiIndex, cod: &MultiIndex) -> MultiMor {
        debug_assert!(dom.0.iter().zip(&cod.0).all(|(a, b)| a <= b));
        MultiMor { dom: dom.clone(), cod: cod.clone(), maps: dom.0.iter().map(|&a| (0..=a).collect()).collect() }
    }
}

/// All morphisms `a -> b` in Δ^×n.
pub fn multi_hom(a: &MultiIndex, b: &MultiIndex) -> Vec<MultiMor> {
    let per: Vec<Vec<Vec<usize>>> = a.0.iter().zip(&b.0).map(|(&x, &y)| monotone_maps(x, y)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per.len()];
    loop {
        out.push(MultiMor {
            dom: a.clone(),
            cod: b.clone(),
            maps: idx.iter().zip(&per).map(|(&i, p)| p[i].clone()).collect(),
        });
        let mut k = per.len();
        let mut done = true;
        while k > 0 {
            k -= 1;
            idx[k] += 1;
            if idx[k] < per[k].len() {
                done = false;
                break;
            }
            idx[k] = 0;
        }
        if done {
            return out;
        }
    }
}

/// `δ_n([k_1] × ⋯ × [k_n]) = ([k_n]; g, …, g)` with `g = δ_{n-1}([k_1] × ⋯ × [k_{n-1}])`.
pub fn delta_n(m: &MultiIndex) -> ThetaObj {
    let mut o = ThetaObj::point();
    for (level, &k) in m.0.iter().enumerate() {
        o = ThetaObj::new(level + 1, vec![o; k]).expect("levels line up");
    }
    o
}

/// δ_n on morphisms; every component is δ_{n-1} of the lower coordinates.
pub fn delta_n_mor(f: &MultiMor) -> ThetaMor {
    let n = f.dom.n();
    if n == 0 {
        return ThetaMor::identity(&ThetaObj::point());
    }
    let lower = MultiMor {
        dom: MultiIndex(f.dom.0[..n - 1].to_vec()),
        cod: MultiIndex(f.cod.0[..n - 1].to_vec()),
        maps: f.maps[..n - 1].to_vec(),
    };
    let inner = delta_n_mor(&lower);
    let phi = f.maps[n - 1].clone();
    let count = phi.last().copied().unwrap_or(0) - phi[0];
    ThetaMor { dom: delta_n(&f.dom), cod: delta_n(&f.cod), phi, comps: vec![inner; count] }
}

/// A grid with a section and retraction exhibiting `o` as its retract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridRetract {
    pub index: MultiIndex,
    pub grid: ThetaObj,
    pub section: ThetaMor,
    pub retraction: ThetaMor,
}

impl GridRetract {
    /// `retraction ∘ section = id`.
    pub fn verify(&self) -> Result<bool> {
        Ok(theta_compose(&self.retraction, &self.section)?.is_identity())
    }
}

/// Exhibits `o` as a retract of a grid; each coordinate of the grid is the
/// maximum of the corresponding coordinates of the children's grids.
pub fn grid_retract(o: &ThetaObj) -> Result<GridRetract> {
    if o.level() == 0 {
        let id = ThetaMor::identity(o);
        return Ok(GridRetract { index: MultiIndex(vec![]), grid: o.clone(), section: id.clone(), retraction: id });
    }
    let kids: Vec<GridRetract> = o.kids().iter().map(grid_retract).collect::<Result<_>>()?;
    let mut top = vec![0; o.level() - 1];
    for k in &kids {
        for (t, &v) in top.iter_mut().zip(&k.index.0) {
            *t = (*t).max(v);
        }
    }
    let top = MultiIndex(top);
    let mut index = top.0.clone();
    index.push(o.m());
    let index = MultiIndex(index);
    let grid = delta_n(&index);
    let mut s_comps = Vec::new();
    let mut r_comps = Vec::new();
    for k in &kids {
        let up = delta_n_mor(&MultiMor::inclusion(&k.index, &top));
        let down = delta_n_mor(&MultiMor::clamp(&top, &k.index));
        s_comps.push(theta_compose(&up, &k.section)?);
        r_comps.push(theta_compose(&k.retraction, &down)?);
    }
    let phi: Vec<usize> = (0..=o.m()).collect();
    let section = ThetaMor::new(o, &grid, phi.clone(), s_comps)?;
    let retraction = ThetaMor::new(&grid, o, phi, r_comps)?;
    Ok(GridRetract { index, grid, section, retraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::theta_enumerate_objects;

    #[test]
    fn delta_examples() {
        assert_eq!(delta_n(&MultiIndex(vec![2, 1])).to_string(), "[1; [2]]");
        assert_eq!(delta_n(&MultiIndex(vec![1, 1])).to_string(), "[1; [1]]");
        assert_eq!(delta_n(&MultiIndex(vec![0, 0, 0])).to_string(), "[0]");
    }

    #[test]
    fn delta_is_functorial() {
        let win = MultiIndex::window(2, 3);
        for a in &win {
            assert!(delta_n_mor(&MultiMor::identity(a)).is_identity());
            for b in &win {
                for f in multi_hom(a, b) {
                    for c in &win {
                        for g in multi_hom(b, c) {
                            let lhs = delta_n_mor(&g.after(&f).unwrap());
                            let rhs = theta_compose(&delta_n_mor(&g), &delta_n_mor(&f)).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn grid_examples() {
        let o = ThetaObj::parse("[2; [1], [0]]", 2).unwrap();
        let g = grid_retract(&o).unwrap();
        assert_eq!(g.index, MultiIndex(vec![1, 2]));
        assert_eq!(g.grid.to_string(), "[2; [1], [1]]");
        assert!(g.verify().unwrap());
        for m in 0..5 {
            let s = ThetaObj::simplex(m);
            assert_eq!(grid_retract(&s).unwrap().grid, s);
        }
    }

    #[test]
    fn every_small_object_is_a_grid_retract() {
        for o in theta_enumerate_objects(3, 5) {
            assert!(grid_retract(&o).unwrap().verify().unwrap(), "{o}");
        }
    }
}
