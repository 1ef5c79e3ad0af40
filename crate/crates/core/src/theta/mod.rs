//! Joyal's Θ_n as an iterated wreath product of Δ, the grid category Δ^×n,
//! realization of Θ_n objects as gaunt n-categories, and the grid functor.

mod classify;
mod grid;
mod mor;
mod realize;

pub use classify::{classify_map_to_cell, classify_theta_map_to_cell, CellMapClass};
pub use grid::{delta_n, delta_n_mor, grid_retract, multi_hom, GridRetract, MultiIndex, MultiMor};
pub use mor::{monotone_maps, theta_compose, theta_hom, ThetaMor};
pub use realize::{realize, realize_mor};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NctError, Result};

/// An object `([m]; o_1, …, o_m)` of Θ_level; level 0 is the single point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaObj {
    level: usize,
    kids: Vec<ThetaObj>,
}

impl ThetaObj {
    pub fn point() -> ThetaObj {
        ThetaObj { level: 0, kids: Vec::new() }
    }

    /// `([m]; kids)`; every kid must sit one level below `level`.
    pub fn new(level: usize, kids: Vec<ThetaObj>) -> Result<ThetaObj> {
        if level == 0 && !kids.is_empty() {
            return Err(NctError::input("the point has no children"));
        }
        if kids.iter().any(|k| k.level + 1 != level) {
            return Err(NctError::input("child at the wrong level"));
        }
        Ok(ThetaObj { level, kids })
    }

    /// `[m]` at level 1.
    pub fn simplex(m: usize) -> ThetaObj {
        iota_obj(m, 1)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// The length `m` of the top simplex.
    pub fn m(&self) -> usize {
        self.kids.len()
    }

    pub fn kids(&self) -> &[ThetaObj] {
        &self.kids
    }

    /// Total node count of the tree.
    pub fn size(&self) -> usize {
        1 + self.kids.iter().map(ThetaObj::size).sum::<usize>()
    }

    /// The same tree viewed at a higher level, padding leaves with `[0]`.
    pub fn raised(&self, level: usize) -> Result<ThetaObj> {
        if level < self.level {
            return Err(NctError::input("cannot lower the level of a Θ object"));
        }
        if level == self.level {
            return Ok(self.clone());
        }
        let kids = self.kids.iter().map(|k| k.raised(level - 1)).collect::<Result<_>>()?;
        Ok(ThetaObj { level, kids })
    }

    /// True for `[0]` at any level.
    pub fn is_trivial(&self) -> bool {
        self.kids.is_empty()
    }

    /// Parses the grammar `[m]` or `[m; o_1, …, o_m]` at the given level.
    /// A bare `[m]` at level ≥ 2 has all children `[0]`.
    pub fn parse(text: &str, level: usize) -> Result<ThetaObj> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { s: compact.as_bytes(), pos: 0 };
        let o = p.obj(level)?;
        if p.pos != p.s.len() {
            return Err(NctError::input(format!("trailing input in Θ object `{text}`")));
        }
        Ok(o)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn expect(&mut self, c: u8) -> Result<()> {
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(NctError::input(format!("expected `{}` at offset {}", c as char, self.pos)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| NctError::input(format!("expected a number at offset {start}")))
    }

    fn obj(&mut self, level: usize) -> Result<ThetaObj> {
        self.expect(b'[')?;
        let m = self.number()?;
        if level == 0 {
            self.expect(b']')?;
            return if m == 0 { Ok(ThetaObj::point()) } else { Err(NctError::input("level-0 object must be [0]")) };
        }
        let kids = if self.s.get(self.pos) == Some(&b';') {
            self.pos += 1;
            let mut kids = Vec::with_capacity(m);
            for i in 0..m {
                if i > 0 {
                    self.expect(b',')?;
                }
                kids.push(self.obj(level - 1)?);
            }
            kids
        } else {
            vec![iota_obj(0, level - 1); m]
        };
        self.expect(b']')?;
        Ok(ThetaObj { level, kids })
    }
}

impl fmt::Display for ThetaObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.m())?;
        if self.kids.iter().any(|k| !k.is_trivial()) {
            write!(f, "; ")?;
            for (i, k) in self.kids.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{k}")?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ThetaObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@{}", self.level)
    }
}

/// `σ(o) = ([1]; o)`.
pub fn sigma_obj(o: &ThetaObj) -> ThetaObj {
    ThetaObj { level: o.level + 1, kids: vec![o.clone()] }
}

/// `ι[m] = ([m]; [0], …, [0])` at the given level (≥ 1).
pub fn iota_obj(m: usize, level: usize) -> ThetaObj {
    if level == 0 {
        return ThetaObj::point();
    }
    ThetaObj { level, kids: vec![iota_obj(0, level - 1); m] }
}

/// The cell `C_k = σ^k[0]` at the given level.
pub fn theta_cell(k: usize, level: usize) -> Result<ThetaObj> {
    if k > level {
        return Err(NctError::Dimension(format!("C_{k} is not an object of Θ_{level}")));
    }
    let mut o = iota_obj(0, level - k);
    for _ in 0..k {
        o = sigma_obj(&o);
    }
    Ok(o)
}

/// All objects of Θ_n with at most `size_bound` nodes, ordered by size then text.
pub fn theta_enumerate_objects(n: usize, size_bound: usize) -> Vec<ThetaObj> {
    let mut by_size: Vec<Vec<ThetaObj>> = vec![Vec::new(); size_bound + 1];
    if size_bound >= 1 {
        by_size[1].push(ThetaObj::point());
    }
    for level in 1..=n {
        let prev = by_size;
        let mut next: Vec<Vec<ThetaObj>> = vec![Vec::new(); size_bound + 1];
        for (s, slot) in next.iter_mut().enumerate().skip(1) {
            let mut acc = Vec::new();
            sequences(&prev, s - 1, &mut Vec::new(), &mut |kids| acc.push(ThetaObj { level, kids: kids.to_vec() }));
            *slot = acc;
        }
        by_size = next;
    }
    let mut out: Vec<ThetaObj> = by_size.into_iter().flatten().collect();
    out.sort_by_cached_key(|o| (o.size(), o.to_string()));
    out
}

/// Calls `emit` on every sequence of objects whose sizes sum to `budget`.
fn sequences(pool: &[Vec<ThetaObj>], budget: usize, cur: &mut Vec<ThetaObj>, emit: &mut dyn FnMut(&[ThetaObj])) {
    if budget == 0 {
        emit(cur);
        return;
    }
    for s in 1..=budget.min(pool.len() - 1) {
        for o in &pool[s] {
            cur.push(o.clone());
            sequences(pool, budget - s, cur, emit);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trip() {
        let o = ThetaObj::parse("[2; [1], [0]]", 2).unwrap();
        assert_eq!(o.to_string(), "[2; [1], [0]]");
        assert_eq!(o.size(), 4);
        assert_eq!(ThetaObj::parse(" [ 2 ] ", 2).unwrap(), iota_obj(2, 2));
        assert!(ThetaObj::parse("[2; [1]]", 2).is_err());
    }

    #[test]
    fn enumeration_level_one() {
        let objs = theta_enumerate_objects(1, 4);
        let text: Vec<String> = objs.iter().map(|o| o.to_string()).collect();
        assert_eq!(text, vec!["[0]", "[1]", "[2]", "[3]"]);
    }

    #[test]
    fn enumeration_level_two_small() {
        let objs = theta_enumerate_objects(2, 3);
        assert!(objs.contains(&ThetaObj::parse("[1; [1]]", 2).unwrap()));
        assert!(objs.contains(&ThetaObj::parse("[2; [0], [0]]", 2).unwrap()));
        let mut dedup = objs.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), objs.len());
    }

    #[test]
    fn cells_and_sizes() {
        assert_eq!(theta_cell(2, 2).unwrap().to_string(), "[1; [1]]");
        assert_eq!(theta_cell(2, 3).unwrap().size(), 3);
    }
}
