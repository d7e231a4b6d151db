//! Definite Horn formulas: linear-time forward chaining.

use std::collections::BTreeSet;

use crate::classify::classify;
use crate::cnf::{CnfFormula, Var};
use crate::error::{Error, Result};

/// `{x : φ ⊨ x}` for a definite Horn formula, by counter-based forward
/// chaining: a clause fires once all of its negative literals are derived.
pub fn horn_consequences(formula: &CnfFormula) -> Result<BTreeSet<Var>> {
    if !classify(formula).definite_horn {
        return Err(Error::ClassViolation("definite Horn"));
    }
    Ok(forward_chain(formula, &[]))
}

/// Forward chaining over the definite clauses of `formula`, starting from
/// `seeds` plus the unit clauses. Non-definite clauses are ignored.
pub(crate) fn forward_chain(formula: &CnfFormula, seeds: &[Var]) -> BTreeSet<Var> {
    let n = formula.max_var() as usize + 1;
    let clauses: Vec<_> = formula
        .clauses()
        .iter()
        .filter(|c| c.positive_count() == 1)
        .collect();
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut missing: Vec<usize> = Vec::with_capacity(clauses.len());
    let mut queue: Vec<Var> = seeds
        .iter()
        .copied()
        .filter(|v| (v.index() as usize) < n)
        .collect();
    for (i, c) in clauses.iter().enumerate() {
        let body: Vec<Var> = c
            .literals()
            .iter()
            .filter(|l| !l.is_positive())
            .map(|l| l.var())
            .collect();
        for v in &body {
            watch[v.index() as usize].push(i);
        }
        missing.push(body.len());
        if body.is_empty() {
            queue.push(head(c));
        }
    }
    let mut derived = vec![false; n];
    let mut out = BTreeSet::new();
    while let Some(v) = queue.pop() {
        let vi = v.index() as usize;
        if derived[vi] {
            continue;
        }
        derived[vi] = true;
        out.insert(v);
        for &ci in &watch[vi] {
            missing[ci] -= 1;
            if missing[ci] == 0 {
                queue.push(head(clauses[ci]));
            }
        }
    }
    out
}

fn head(c: &crate::cnf::Clause) -> Var {
    c.literals()
        .iter()
        .find(|l| l.is_positive())
        .expect("definite clause")
        .var()
}

/// Iterative k-backbones of a definite Horn formula: the entailed
/// variables, for every `k >= 1`.
pub fn defhorn_iterative_backbones(formula: &CnfFormula, k: usize) -> Result<BTreeSet<Var>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    horn_consequences(formula)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_ints(clauses.iter().map(|c| c.iter().copied())).unwrap()
    }

    fn vars(ids: &[u32]) -> BTreeSet<Var> {
        ids.iter().map(|&i| Var::new(i)).collect()
    }

    #[test]
    fn consequences() {
        assert_eq!(
            horn_consequences(&f(&[&[1], &[-1, 2]])).unwrap(),
            vars(&[1, 2])
        );
        assert!(horn_consequences(&f(&[&[-1, 2]])).unwrap().is_empty());
        assert_eq!(
            horn_consequences(&f(&[&[1, 2]])),
            Err(Error::ClassViolation("definite Horn"))
        );
    }

    #[test]
    fn iterative_needs_all_body_atoms() {
        let phi = f(&[&[1], &[-1, 2], &[-2, -3, 4]]);
        assert_eq!(defhorn_iterative_backbones(&phi, 1).unwrap(), vars(&[1, 2]));
        assert_eq!(defhorn_iterative_backbones(&phi, 7).unwrap(), vars(&[1, 2]));
    }

    #[test]
    fn no_unit_clauses_no_consequences() {
        let phi = f(&[&[-1, 2], &[-2, -3, 1], &[-2, 3]]);
        assert!(defhorn_iterative_backbones(&phi, 3).unwrap().is_empty());
    }
}
