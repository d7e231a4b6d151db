//! Backbones, local backbones and iterative local backbones of CNF formulas,
//! with small-unsatisfiable-subset search, class-specific algorithms for
//! definite Horn and Krom formulas, and the `r_k` hierarchy.

pub mod backbone;
pub mod classify;
pub mod cnf;
pub mod dimacs;
pub mod error;
pub mod exec;
pub mod generators;
pub mod horn;
pub mod krom;
pub mod oracle;
pub mod refutation;
pub mod report;
pub mod sat;
pub mod sus;

pub use backbone::{
    backbone_order, backbone_order_witness, backbone_to_sus, is_k_backbone, iterative_k_backbones,
    iterative_k_backbones_with, iterative_order, iterative_orders, local_backbones,
    local_backbones_with, IterativeBackbones, LocalBackbone, Order,
};
pub use classify::{classify, FormulaClass};
pub use cnf::{Assignment, Clause, ClauseId, CnfFormula, Literal, Var, VarNames};
pub use dimacs::{emit_dimacs, parse_dimacs, parse_dimacs_with, DimacsError, ParseOptions};
pub use error::{Error, Result};
pub use exec::Exec;
pub use horn::{defhorn_iterative_backbones, horn_consequences};
pub use krom::{krom_iterative_backbones, ImplicationGraph};
pub use refutation::{r_level, refutes, uc_forced};
pub use report::OrderDistributionReport;
pub use sat::{
    full_backbones, full_backbones_with, is_satisfiable, solve, unit_propagate, SatResult,
};
pub use sus::{
    minimize_witness, sus_bruteforce, sus_search, sus_search_min, sus_vo_search, WitnessSubset,
};
