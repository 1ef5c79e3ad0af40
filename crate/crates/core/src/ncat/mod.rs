//! Finite strict n-categories in single-sorted form.
//!
//! A [`NCat`] is one finite set of cells carrying `n` category structures.
//! Structure `i` (1-based) has total source and target maps and a partial
//! composition `comp(i, x, y)`, defined exactly when `src(i, x) == tgt(i, y)`
//! ("x after y").

mod build;
pub mod decompose;
pub mod functor;
pub mod gaunt;
pub mod iso;
pub mod json;
pub mod limits;
pub mod standard;
mod validate;

use std::collections::HashMap;

pub use build::build_from_keys;
pub use functor::{fun_enum, fun_enum_with, EnumOptions, FunctorMap};
pub use validate::{validate, ValidationReport, Violation};

use crate::error::{NctError, Result};

/// Marker for an undefined composite in the dense tables.
pub const NONE: u32 = u32::MAX;

/// A finite strict n-category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCat {
    n: usize,
    names: Vec<String>,
    src: Vec<Vec<u32>>,
    tgt: Vec<Vec<u32>>,
    comp: Vec<Vec<u32>>,
}

impl NCat {
    /// Builds a category from raw tables without checking the axioms.
    ///
    /// `comp` lists `(level, x, y, result)` with 1-based levels. Entries that
    /// reference unknown cells, or duplicate entries that disagree, are input
    /// errors; axiom violations are left for [`validate`].
    pub fn from_tables(
        n: usize,
        names: Vec<String>,
        src: Vec<Vec<u32>>,
        tgt: Vec<Vec<u32>>,
        comp: &[(usize, u32, u32, u32)],
    ) -> Result<NCat> {
        let len = names.len();
        if src.len() != n || tgt.len() != n {
            return Err(NctError::input(format!(
                "expected {n} structures, got {} sources and {} targets",
                src.len(),
                tgt.len()
            )));
        }
        let mut seen = HashMap::new();
        for (i, nm) in names.iter().enumerate() {
            if seen.insert(nm.clone(), i).is_some() {
                return Err(NctError::input(format!("duplicate cell name {nm:?}")));
            }
        }
        for lvl in 0..n {
            if src[lvl].len() != len || tgt[lvl].len() != len {
                return Err(NctError::input(format!("structure {} is not total", lvl + 1)));
            }
            for &c in src[lvl].iter().chain(tgt[lvl].iter()) {
                if c as usize >= len {
                    return Err(NctError::input(format!(
                        "structure {} references unknown cell {c}",
                        lvl + 1
                    )));
                }
            }
        }
        let mut table = vec![vec![NONE; len * len]; n];
        for &(lvl, x, y, r) in comp {
            if lvl == 0 || lvl > n {
                return Err(NctError::input(format!("composition at unknown level {lvl}")));
            }
            for c in [x, y, r] {
                if c as usize >= len {
                    return Err(NctError::input(format!(
                        "composition entry references unknown cell {c}"
                    )));
                }
            }
            let slot = &mut table[lvl - 1][x as usize * len + y as usize];
            if *slot != NONE && *slot != r {
                return Err(NctError::input(format!(
                    "conflicting composites for ({}, {}) at level {lvl}",
                    names[x as usize], names[y as usize]
                )));
            }
            *slot = r;
        }
        Ok(NCat { n, names, src, tgt, comp: table })
    }

    pub(crate) fn from_parts(
        n: usize,
        names: Vec<String>,
        src: Vec<Vec<u32>>,
        tgt: Vec<Vec<u32>>,
        comp: Vec<Vec<u32>>,
    ) -> NCat {
        NCat { n, names, src, tgt, comp }
    }

    /// The empty n-category.
    pub fn empty(n: usize) -> NCat {
        NCat { n, names: vec![], src: vec![vec![]; n], tgt: vec![vec![]; n], comp: vec![vec![]; n] }
    }

    /// Ambient dimension bound.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: u32) -> &str {
        &self.names[x as usize]
    }

    /// Looks a cell up by name.
    pub fn cell(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|s| s == name).map(|i| i as u32)
    }

    /// Source at structure `i` (1-based).
    #[inline]
    pub fn src(&self, i: usize, x: u32) -> u32 {
        self.src[i - 1][x as usize]
    }

    /// Target at structure `i` (1-based).
    #[inline]
    pub fn tgt(&self, i: usize, x: u32) -> u32 {
        self.tgt[i - 1][x as usize]
    }

    /// Composite `x *_i y`, defined when `src(i, x) == tgt(i, y)`.
    #[inline]
    pub fn comp(&self, i: usize, x: u32, y: u32) -> Option<u32> {
        let r = self.comp[i - 1][x as usize * self.len() + y as usize];
        (r != NONE).then_some(r)
    }

    /// True when `x` lies in the image of `src_i`.
    #[inline]
    pub fn is_identity(&self, i: usize, x: u32) -> bool {
        self.src(i, x) == x
    }

    /// Least `k` such that `x` is an identity at every structure above `k`.
    pub fn dim(&self, x: u32) -> usize {
        (1..=self.n).rev().find(|&i| !self.is_identity(i, x)).unwrap_or(0)
    }

    /// Largest cell dimension, 0 for an empty category.
    pub fn top_dim(&self) -> usize {
        self.cells().map(|x| self.dim(x)).max().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = u32> {
        0..self.len() as u32
    }

    /// Cells of dimension 0.
    pub fn objects(&self) -> Vec<u32> {
        self.cells().filter(|&x| self.dim(x) == 0).collect()
    }

    /// Number of cells in each dimension `0..=n`.
    pub fn dim_profile(&self) -> Vec<usize> {
        let mut out = vec![0; self.n + 1];
        for x in self.cells() {
            out[self.dim(x)] += 1;
        }
        out
    }

    /// Name-free structural key, equal exactly when the tables are equal.
    pub fn shape_key(&self) -> Vec<u32> {
        let mut key = vec![self.n as u32, self.len() as u32];
        for lvl in 0..self.n {
            key.extend_from_slice(&self.src[lvl]);
            key.extend_from_slice(&self.tgt[lvl]);
            key.extend_from_slice(&self.comp[lvl]);
        }
        key
    }

    /// Same cells with the ambient bound raised to `m >= n`; new levels are trivial.
    pub fn with_ambient(&self, m: usize) -> Result<NCat> {
        if m < self.n {
            if self.top_dim() > m {
                return Err(NctError::Dimension(format!(
                    "cannot truncate a {}-dimensional object to ambient {m}",
                    self.top_dim()
                )));
            }
            let mut out = self.clone();
            out.n = m;
            out.src.truncate(m);
            out.tgt.truncate(m);
            out.comp.truncate(m);
            return Ok(out);
        }
        let mut out = self.clone();
        let len = self.len();
        let ids: Vec<u32> = (0..len as u32).collect();
        let mut diag = vec![NONE; len * len];
        for x in 0..len {
            diag[x * len + x] = x as u32;
        }
        for _ in self.n..m {
            out.src.push(ids.clone());
            out.tgt.push(ids.clone());
            out.comp.push(diag.clone());
        }
        out.n = m;
        Ok(out)
    }

    /// Renames cells; `names` must be distinct and of the right length.
    pub fn renamed(&self, names: Vec<String>) -> NCat {
        assert_eq!(names.len(), self.len());
        let mut out = self.clone();
        out.names = names;
        out
    }

    /// Cells grouped by their target at structure `i`.
    pub(crate) fn by_tgt(&self, i: usize) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.len()];
        for x in self.cells() {
            out[self.tgt(i, x) as usize].push(x);
        }
        out
    }

    /// Cells grouped by their source at structure `i`.
    pub(crate) fn by_src(&self, i: usize) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.len()];
        for x in self.cells() {
            out[self.src(i, x) as usize].push(x);
        }
        out
    }

    /// Full substructure on `keep` (assumed closed under the structure maps).
    pub fn restrict_to(&self, keep: &[u32]) -> Result<(NCat, FunctorMap)> {
        let mut pos = vec![NONE; self.len()];
        for (k, &x) in keep.iter().enumerate() {
            pos[x as usize] = k as u32;
        }
        let len = keep.len();
        let names = keep.iter().map(|&x| self.names[x as usize].clone()).collect();
        let mut src = vec![vec![0; len]; self.n];
        let mut tgt = vec![vec![0; len]; self.n];
        let mut comp = vec![vec![NONE; len * len]; self.n];
        for lvl in 1..=self.n {
            for (k, &x) in keep.iter().enumerate() {
                let s = pos[self.src(lvl, x) as usize];
                let t = pos[self.tgt(lvl, x) as usize];
                if s == NONE || t == NONE {
                    return Err(NctError::internal("restriction set not closed under boundaries"));
                }
                src[lvl - 1][k] = s;
                tgt[lvl - 1][k] = t;
            }
            for (a, &x) in keep.iter().enumerate() {
                for (b, &y) in keep.iter().enumerate() {
                    if let Some(r) = self.comp(lvl, x, y) {
                        let p = pos[r as usize];
                        if p == NONE {
                            return Err(NctError::internal("restriction set not closed under composition"));
                        }
                        comp[lvl - 1][a * len + b] = p;
                    }
                }
            }
        }
        let sub = NCat { n: self.n, names, src, tgt, comp };
        let incl = FunctorMap::new_unchecked(&sub, self, keep.to_vec());
        Ok((sub, incl))
    }

    /// The full substructure on cells of dimension at most `k`.
    pub fn max_sub_k(&self, k: usize) -> NCat {
        let keep: Vec<u32> = self.cells().filter(|&x| self.dim(x) <= k).collect();
        self.restrict_to(&keep).expect("low-dimensional cells form a substructure").0
    }

    /// Swaps source and target and reverses composition at each level `i` with `flips[i-1]`.
    pub fn opposite_r(&self, flips: &[bool]) -> NCat {
        assert_eq!(flips.len(), self.n, "one flag per structure");
        let mut out = self.clone();
        let len = self.len();
        for lvl in 0..self.n {
            if !flips[lvl] {
                continue;
            }
            std::mem::swap(&mut out.src[lvl], &mut out.tgt[lvl]);
            let mut t = vec![NONE; len * len];
            for x in 0..len {
                for y in 0..len {
                    t[y * len + x] = self.comp[lvl][x * len + y];
                }
            }
            out.comp[lvl] = t;
        }
        out
    }

    /// Raw composite entries `(level, x, y, result)` in canonical order.
    pub fn comp_entries(&self) -> Vec<(usize, u32, u32, u32)> {
        let len = self.len();
        let mut out = Vec::new();
        for lvl in 0..self.n {
            for x in 0..len {
                for y in 0..len {
                    let r = self.comp[lvl][x * len + y];
                    if r != NONE {
                        out.push((lvl + 1, x as u32, y as u32, r));
                    }
                }
            }
        }
        out
    }

    /// Overwrites one composite without any check; the result may violate the axioms.
    pub fn set_comp_unchecked(&mut self, i: usize, x: u32, y: u32, r: u32) {
        let len = self.len();
        self.comp[i - 1][x as usize * len + y as usize] = r;
    }

    /// Overwrites one source without any check; the result may violate the axioms.
    pub fn set_src_unchecked(&mut self, i: usize, x: u32, v: u32) {
        self.src[i - 1][x as usize] = v;
    }
}
