use serde::{Deserialize, Serialize};

use super::{realize_mor, ThetaMor};
use crate::budget::Budget;
use crate::error::{NctError, Result};
use crate::ncat::decompose::as_standard_cell;
use crate::ncat::{fun_enum_with, EnumOptions, FunctorMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellMapClass {
    /// Factors through the inclusion of a proper sub-cell `C_j`, `j` minimal.
    Degenerate { through: usize },
    Nondegenerate,
}

/// Decides whether a map into a cell factors through a proper sub-cell.
pub fn classify_map_to_cell(f: &FunctorMap, budget: &Budget) -> Result<CellMapClass> {
    let (k, _) = as_standard_cell(f.target(), budget)?.ok_or_else(|| NctError::input("codomain is not a cell"))?;
    let n = f.target().n();
    let mut image: Vec<u32> = f.assignment().to_vec();
    image.sort_unstable();
    image.dedup();
    for j in 0..k {
        let sub = crate::ncat::standard::cell(j, n)?;
        let opts = EnumOptions { injective: true, max_nodes: budget.max_nodes, ..EnumOptions::default() };
        for incl in fun_enum_with(&sub, f.target(), &opts)? {
            if image.iter().all(|c| incl.contains(c)) {
                return Ok(CellMapClass::Degenerate { through: j });
            }
        }
    }
    Ok(CellMapClass::Nondegenerate)
}

/// [`classify_map_to_cell`] for a Θ morphism, through its realization.
pub fn classify_theta_map_to_cell(f: &ThetaMor, n: usize, budget: &Budget) -> Result<CellMapClass> {
    classify_map_to_cell(&realize_mor(f, n)?, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncat::fun_enum;
    use crate::ncat::standard::{cell, suspend_map};
    use crate::ncat::limits::to_point;

    #[test]
    fn maps_from_c2_to_c1() {
        let b = Budget::default();
        let (c2, c1) = (cell(2, 2).unwrap(), cell(1, 2).unwrap());
        let maps = fun_enum(&c2, &c1, &b).unwrap();
        assert_eq!(maps.len(), 3);
        let nondeg: Vec<&FunctorMap> = maps
            .iter()
            .filter(|f| classify_map_to_cell(f, &b).unwrap() == CellMapClass::Nondegenerate)
            .collect();
        assert_eq!(nondeg.len(), 1);
        let susp = suspend_map(&to_point(&c1)).unwrap();
        assert_eq!(nondeg[0].assignment(), susp.assignment());
    }

    #[test]
    fn into_point_and_constants() {
        let b = Budget::default();
        let c1 = cell(1, 1).unwrap();
        assert_eq!(classify_map_to_cell(&to_point(&c1), &b).unwrap(), CellMapClass::Nondegenerate);
        let constant = FunctorMap::new(&c1, &c1, vec![0, 0, 0]).unwrap();
        assert_eq!(classify_map_to_cell(&constant, &b).unwrap(), CellMapClass::Degenerate { through: 0 });
    }
}
