//! Truth-table reference implementations. Everything here enumerates all
//! assignments or all clause subsets, so it is only meant for formulas with
//! a handful of variables and clauses; it shares no code with the searches
//! it is used to check.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::backbone::Order;
use crate::cnf::{Clause, CnfFormula, Literal, Var};
use crate::error::{Error, Result};

/// Largest variable count the truth table accepts.
pub const MAX_VARS: usize = 20;

fn models_of(clauses: &[&Clause]) -> Vec<Vec<(Var, bool)>> {
    let vars: Vec<Var> = clauses
        .iter()
        .flat_map(|c| c.literals().iter().map(|l| l.var()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(
        vars.len() <= MAX_VARS,
        "truth table over {} variables",
        vars.len()
    );
    let mut out = Vec::new();
    for mask in 0u32..(1 << vars.len()) {
        let value = |v: Var| {
            let i = vars.binary_search(&v).unwrap();
            mask >> i & 1 == 1
        };
        let sat = clauses.iter().all(|c| {
            c.literals()
                .iter()
                .any(|l| value(l.var()) == l.is_positive())
        });
        if sat {
            out.push(vars.iter().map(|&v| (v, value(v))).collect());
        }
    }
    out
}

fn subset_sat(clauses: &[&Clause]) -> bool {
    !models_of(clauses).is_empty()
}

fn subset_entails(clauses: &[&Clause], lit: Literal) -> bool {
    models_of(clauses).iter().all(|m| {
        m.iter()
            .find(|(v, _)| *v == lit.var())
            .is_some_and(|&(_, b)| b == lit.is_positive())
    })
}

fn check_size(formula: &CnfFormula) -> Result<()> {
    let n = formula.vars().len();
    if n > MAX_VARS {
        return Err(Error::InvalidParameter(format!(
            "oracle limited to {MAX_VARS} variables, got {n}"
        )));
    }
    Ok(())
}

fn all(formula: &CnfFormula) -> Vec<&Clause> {
    formula.clauses().iter().collect()
}

/// Every model over `Var(φ)`, as sorted literal lists.
pub fn models(formula: &CnfFormula) -> Result<Vec<Vec<Literal>>> {
    check_size(formula)?;
    Ok(models_of(&all(formula))
        .into_iter()
        .map(|m| m.into_iter().map(|(v, b)| v.literal(b)).collect())
        .collect())
}

pub fn satisfiable(formula: &CnfFormula) -> Result<bool> {
    check_size(formula)?;
    Ok(subset_sat(&all(formula)))
}

/// `φ ⊨ l`. A variable outside `φ` is entailed only by an unsatisfiable `φ`.
pub fn entails(formula: &CnfFormula, lit: Literal) -> Result<bool> {
    let ms = models(formula)?;
    Ok(ms.iter().all(|m| m.contains(&lit)))
}

/// Backbone literals of a satisfiable formula, `None` when unsatisfiable.
pub fn backbones(formula: &CnfFormula) -> Result<Option<BTreeSet<Literal>>> {
    let ms = models(formula)?;
    let Some(first) = ms.first() else {
        return Ok(None);
    };
    Ok(Some(
        first
            .iter()
            .copied()
            .filter(|l| ms.iter().all(|m| m.contains(l)))
            .collect(),
    ))
}

/// Size of a smallest unsatisfiable subset, if one has at most `kmax` clauses.
pub fn min_unsat_subset(formula: &CnfFormula, kmax: usize) -> Result<Option<usize>> {
    check_size(formula)?;
    let clauses = all(formula);
    Ok((1..=kmax.min(clauses.len())).find(|&size| {
        clauses
            .iter()
            .copied()
            .combinations(size)
            .any(|sub| !subset_sat(&sub))
    }))
}

/// Literals over `x` entailed by some subset of at most `k` clauses.
pub fn k_backbone_literals(formula: &CnfFormula, x: Var, k: usize) -> Result<BTreeSet<Literal>> {
    check_size(formula)?;
    let clauses = all(formula);
    let mut out = BTreeSet::new();
    for size in 0..=k.min(clauses.len()) {
        for sub in clauses.iter().copied().combinations(size) {
            for l in [x.positive(), x.negative()] {
                if !out.contains(&l) && subset_entails(&sub, l) {
                    out.insert(l);
                }
            }
        }
    }
    Ok(out)
}

/// Smallest `k <= kmax` with a `k`-clause subset entailing `x` or `¬x`.
pub fn backbone_order(formula: &CnfFormula, x: Var, kmax: usize) -> Result<Order> {
    check_size(formula)?;
    let clauses = all(formula);
    for size in 1..=kmax.min(clauses.len()) {
        let hit =
            clauses.iter().copied().combinations(size).any(|sub| {
                subset_entails(&sub, x.positive()) || subset_entails(&sub, x.negative())
            });
        if hit {
            return Ok(Order::Exact(size));
        }
    }
    Ok(Order::Exceeds(kmax))
}

pub fn local_backbone_vars(formula: &CnfFormula, k: usize) -> Result<BTreeSet<Var>> {
    let mut out = BTreeSet::new();
    for x in formula.vars() {
        if !k_backbone_literals(formula, x, k)?.is_empty() {
            out.insert(x);
        }
    }
    Ok(out)
}

/// Iterative k-backbones straight from the definition: collect every
/// literal entailed by a subset of at most `k` clauses of `ψ`, reduce, and
/// repeat. Fails with `UnsatDetected` once both polarities of a variable
/// are collected or the empty clause appears.
pub fn iterative_literals(formula: &CnfFormula, k: usize) -> Result<BTreeSet<Literal>> {
    check_size(formula)?;
    let mut psi = formula.clone();
    let mut forced = BTreeSet::new();
    loop {
        if psi.has_empty_clause() {
            return Err(Error::UnsatDetected);
        }
        let mut new = BTreeSet::new();
        for x in psi.vars() {
            new.extend(k_backbone_literals(&psi, x, k)?);
        }
        if new.iter().any(|l| new.contains(&!*l)) {
            return Err(Error::UnsatDetected);
        }
        if new.is_empty() {
            return Ok(forced);
        }
        let lits: Vec<Literal> = new.iter().copied().collect();
        psi = psi.reduct(&lits)?;
        forced.extend(new);
    }
}
