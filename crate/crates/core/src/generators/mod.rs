//! Instance builders: the constructive reductions as planted-instance
//! generators, seeded random families, and the cycle family.

mod graph;
mod hyperpath;
mod random;

pub use graph::{has_multicolored_clique, planted_clique, ColoredGraph, PlantedClique};
pub use hyperpath::{
    clique_to_hyperpath, hyperpath_to_defhorn, hyperpath_to_nuhorn, is_k_hyperpath,
    normalize_target_clauses, random_hyperpath_instance, shortest_hyperpath, GadgetMode,
    HyperpathInstance,
};
pub use random::{random_formula, Family};

use serde::Serialize;

use crate::cnf::{Clause, ClauseId, CnfFormula, Literal, Var};
use crate::error::{Error, Result};

/// Self-describing metadata written next to a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceMeta {
    pub construction: String,
    pub params: serde_json::Value,
    pub planted: serde_json::Value,
}

/// `{c ∪ {z} : c ∈ φ}` for a fresh variable `z`: `φ` has an unsatisfiable
/// subset of at most `k` clauses iff `z` is a k-backbone of the result.
pub fn lift_sus_to_backbone(formula: &CnfFormula) -> (CnfFormula, Var) {
    let z = Var::new(formula.max_var() + 1);
    let clauses = formula.clauses().iter().map(|c| {
        Clause::new(c.id(), c.literals().iter().copied().chain([z.positive()])).expect("z is fresh")
    });
    (CnfFormula::new(clauses).expect("ids unchanged"), z)
}

/// `{{¬x_i, x_{i+1}} : 1 <= i < n} ∪ {{¬x_n, ¬x_1}}`, which entails `¬x_1`.
pub fn cycle_family(n: usize) -> Result<CnfFormula> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "cycle family needs n >= 2, got {n}"
        )));
    }
    let x = |i: usize| Var::new(i as u32);
    let mut clauses: Vec<Vec<Literal>> = (1..n)
        .map(|i| vec![x(i).negative(), x(i + 1).positive()])
        .collect();
    clauses.push(vec![x(n).negative(), x(1).negative()]);
    CnfFormula::new(
        clauses
            .into_iter()
            .enumerate()
            .map(|(i, lits)| Clause::new(ClauseId(i as u32), lits).expect("distinct variables")),
    )
}

/// A definite Horn chain `x_1, x_1 → x_2, …, x_{n-1} → x_n` with `n`
/// clauses; `x_i` has backbone order `i` and iterative order 1.
pub fn horn_chain(n: usize) -> Result<CnfFormula> {
    if n < 1 {
        return Err(Error::InvalidParameter("horn chain needs n >= 1".into()));
    }
    let mut clauses = vec![vec![1]];
    clauses.extend((1..n as i32).map(|i| vec![-i, i + 1]));
    CnfFormula::from_ints(clauses)
}
