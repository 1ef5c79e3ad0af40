//! Canonical JSON form of a finite strict n-category.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::NCat;
use crate::error::{NctError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub src: BTreeMap<String, String>,
    pub tgt: BTreeMap<String, String>,
    pub comp: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCatJson {
    pub n: usize,
    pub cells: Vec<String>,
    pub structures: Vec<StructureJson>,
}

impl NCatJson {
    pub fn from_ncat(x: &NCat) -> Self {
        let mut structures = Vec::with_capacity(x.n());
        for i in 1..=x.n() {
            let src = x.cells().map(|c| (x.name(c).to_string(), x.name(x.src(i, c)).to_string())).collect();
            let tgt = x.cells().map(|c| (x.name(c).to_string(), x.name(x.tgt(i, c)).to_string())).collect();
            let comp = x
                .comp_entries()
                .into_iter()
                .filter(|e| e.0 == i)
                .map(|(_, a, b, r)| [x.name(a).to_string(), x.name(b).to_string(), x.name(r).to_string()])
                .collect();
            structures.push(StructureJson { src, tgt, comp });
        }
        NCatJson { n: x.n(), cells: x.names().to_vec(), structures }
    }

    /// Converts to an [`NCat`]; unknown or missing cells are input errors.
    pub fn to_ncat(&self) -> Result<NCat> {
        if self.structures.len() != self.n {
            return Err(NctError::input(format!(
                "n = {} but {} structures given",
                self.n,
                self.structures.len()
            )));
        }
        let index: HashMap<&str, u32> =
            self.cells.iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect();
        let look = |s: &str| -> Result<u32> {
            index.get(s).copied().ok_or_else(|| NctError::input(format!("unknown cell {s:?}")))
        };
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        let mut comp = Vec::new();
        for (k, st) in self.structures.iter().enumerate() {
            let mut s = Vec::with_capacity(self.cells.len());
            let mut t = Vec::with_capacity(self.cells.len());
            for c in &self.cells {
                let sv = st.src.get(c).ok_or_else(|| NctError::input(format!("no source for {c:?}")))?;
                let tv = st.tgt.get(c).ok_or_else(|| NctError::input(format!("no target for {c:?}")))?;
                s.push(look(sv)?);
                t.push(look(tv)?);
            }
            for key in st.src.keys().chain(st.tgt.keys()) {
                look(key)?;
            }
            for [a, b, r] in &st.comp {
                comp.push((k + 1, look(a)?, look(b)?, look(r)?));
            }
            src.push(s);
            tgt.push(t);
        }
        NCat::from_tables(self.n, self.cells.clone(), src, tgt, &comp)
    }
}

/// Canonical pretty JSON text.
pub fn to_json(x: &NCat) -> String {
    serde_json::to_string_pretty(&NCatJson::from_ncat(x)).expect("serializable") + "\n"
}

pub fn from_json(text: &str) -> Result<NCat> {
    let raw: NCatJson = serde_json::from_str(text).map_err(|e| NctError::input(format!("bad JSON: {e}")))?;
    raw.to_ncat()
}
