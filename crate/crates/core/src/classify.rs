use serde::Serialize;

use crate::cnf::CnfFormula;

/// Syntactic class membership of a formula, computed in one pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormulaClass {
    /// Smallest `k` such that the formula is a k-CNF formula.
    pub max_clause_width: usize,
    pub krom: bool,
    pub horn: bool,
    pub definite_horn: bool,
    pub nu_horn: bool,
    /// Smallest `d` such that the formula is in VO_d.
    pub max_occurrence: usize,
    pub unit_clauses: usize,
    pub has_empty_clause: bool,
}

impl FormulaClass {
    pub fn is_kcnf(&self, k: usize) -> bool {
        self.max_clause_width <= k
    }

    pub fn is_vo(&self, d: usize) -> bool {
        self.max_occurrence <= d
    }
}

pub fn classify(formula: &CnfFormula) -> FormulaClass {
    let mut max_clause_width = 0;
    let mut horn = true;
    let mut definite_horn = true;
    let mut unit_clauses = 0;
    let mut has_empty_clause = false;
    let mut occ = vec![0usize; formula.max_var() as usize + 1];
    for c in formula.clauses() {
        max_clause_width = max_clause_width.max(c.len());
        let positives = c.positive_count();
        horn &= positives <= 1;
        definite_horn &= positives == 1;
        unit_clauses += c.is_unit() as usize;
        has_empty_clause |= c.is_empty();
        for v in c.vars() {
            occ[v.index() as usize] += 1;
        }
    }
    FormulaClass {
        max_clause_width,
        krom: max_clause_width <= 2,
        horn,
        definite_horn,
        nu_horn: horn && unit_clauses == 0,
        max_occurrence: occ.into_iter().max().unwrap_or(0),
        unit_clauses,
        has_empty_clause,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_of(clauses: &[&[i32]]) -> FormulaClass {
        classify(&CnfFormula::from_ints(clauses.iter().map(|c| c.iter().copied())).unwrap())
    }

    #[test]
    fn definite_horn_clause() {
        let c = class_of(&[&[-1, -2, 3]]);
        assert!(c.horn && c.definite_horn && c.nu_horn);
        assert!(c.is_kcnf(3) && !c.is_kcnf(2));
        assert_eq!(c.max_occurrence, 1);
        assert!(!c.krom);
    }

    #[test]
    fn two_positive_literals_is_not_horn() {
        let c = class_of(&[&[1, 2]]);
        assert!(c.krom);
        assert!(!c.horn && !c.nu_horn && !c.definite_horn);
    }

    #[test]
    fn negative_binary_clause_is_nu_horn() {
        let c = class_of(&[&[-1, -2]]);
        assert!(c.horn && c.nu_horn && c.krom);
        assert!(!c.definite_horn);
    }

    #[test]
    fn unit_clause_breaks_nu_horn() {
        let c = class_of(&[&[1], &[-1, 2]]);
        assert!(c.horn && c.definite_horn && !c.nu_horn);
        assert_eq!(c.unit_clauses, 1);
        assert_eq!(c.max_occurrence, 2);
    }

    #[test]
    fn empty_formula() {
        let c = class_of(&[]);
        assert!(c.krom && c.horn && c.definite_horn && c.nu_horn);
        assert_eq!(c.max_occurrence, 0);
    }
}
