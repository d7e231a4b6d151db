//! The `r_k` hierarchy of generalized unit propagation.
//!
//! `r_0` collapses a formula containing the empty clause to `{⊥}`. For
//! `k > 0`, `r_k` keeps instantiating a literal `l` whenever
//! `r_{k-1}(φ|_¬l)` collapses, until no such literal remains.

use std::collections::BTreeSet;

use crate::cnf::{CnfFormula, Literal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UcResult {
    /// `φ|_forced`; meaningless when `contradiction` is set.
    pub residual: CnfFormula,
    /// Literals in the order they were instantiated.
    pub forced: Vec<Literal>,
    /// The result collapsed to `{⊥}`.
    pub contradiction: bool,
}

impl UcResult {
    pub fn forced_set(&self) -> BTreeSet<Literal> {
        self.forced.iter().copied().collect()
    }
}

pub fn r_level(formula: &CnfFormula, k: usize) -> UcResult {
    let mut residual = formula.clone();
    let mut forced = Vec::new();
    if k == 0 {
        let contradiction = residual.has_empty_clause();
        return UcResult {
            residual,
            forced,
            contradiction,
        };
    }
    loop {
        if residual.has_empty_clause() {
            return UcResult {
                residual,
                forced,
                contradiction: true,
            };
        }
        let hit = residual
            .lits()
            .into_iter()
            .find(|&l| refutes(&residual.reduct_lit(l.complement()), k - 1));
        match hit {
            Some(l) => {
                residual = residual.reduct_lit(l);
                forced.push(l);
            }
            None => {
                return UcResult {
                    residual,
                    forced,
                    contradiction: false,
                }
            }
        }
    }
}

/// `r_k(φ) = {⊥}`.
pub fn refutes(formula: &CnfFormula, k: usize) -> bool {
    r_level(formula, k).contradiction
}

pub fn uc_forced(formula: &CnfFormula, k: usize) -> BTreeSet<Literal> {
    r_level(formula, k).forced_set()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cycle_family;

    fn f(clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_ints(clauses.iter().map(|c| c.iter().copied())).unwrap()
    }

    fn lits(v: &[i32]) -> BTreeSet<Literal> {
        v.iter()
            .map(|&x| Literal::from_dimacs(x).unwrap())
            .collect()
    }

    #[test]
    fn level_one_is_unit_propagation() {
        let r = r_level(&f(&[&[1], &[-1, 2]]), 1);
        assert_eq!(r.forced_set(), lits(&[1, 2]));
        assert!(!r.contradiction);
        assert!(r.residual.is_empty());
    }

    #[test]
    fn level_zero_forces_nothing() {
        let phi = f(&[&[1], &[-1, 2]]);
        assert!(r_level(&phi, 0).forced.is_empty());
        assert!(r_level(&f(&[&[]]), 0).contradiction);
    }

    #[test]
    fn failed_literal_on_cycle() {
        for n in 2..=8 {
            let phi = cycle_family(n).unwrap();
            assert!(
                uc_forced(&phi, 2).contains(&Literal::from_dimacs(-1).unwrap()),
                "n = {n}"
            );
            assert!(uc_forced(&phi, 1).is_empty());
        }
    }

    #[test]
    fn monotone_in_k() {
        let phi = f(&[&[1, 2], &[1, -2], &[-1, 3, 4], &[-3, 4], &[-4, 5, 6]]);
        let mut prev = BTreeSet::new();
        for k in 0..4 {
            let cur = uc_forced(&phi, k);
            assert!(prev.is_subset(&cur));
            prev = cur;
        }
    }
}
