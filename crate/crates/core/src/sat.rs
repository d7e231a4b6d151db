//! A small complete satisfiability engine: splitting on the lowest unassigned
//! variable with unit propagation, no clause learning.

use std::collections::BTreeSet;

use crate::cnf::{Assignment, CnfFormula, Literal, Var};
use crate::error::{Error, Result};
use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Assignment),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SatResult::Sat(a) => Some(a),
            SatResult::Unsat => None,
        }
    }
}

pub fn solve(formula: &CnfFormula) -> SatResult {
    match solve_clauses(formula.clauses().iter().map(|c| c.literals())) {
        Some(a) => SatResult::Sat(a),
        None => SatResult::Unsat,
    }
}

pub fn is_satisfiable(formula: &CnfFormula) -> bool {
    solve(formula).is_sat()
}

/// Solves an arbitrary list of literal clauses. The returned model is total
/// on the occurring variables.
pub fn solve_clauses<'a, I>(clauses: I) -> Option<Assignment>
where
    I: IntoIterator<Item = &'a [Literal]>,
{
    Dpll::new(clauses).run()
}

pub fn clauses_satisfiable<'a, I>(clauses: I) -> bool
where
    I: IntoIterator<Item = &'a [Literal]>,
{
    solve_clauses(clauses).is_some()
}

// Variables are renumbered densely; literal code = 2 * dense + negated.
struct Dpll {
    clauses: Vec<Vec<u32>>,
    vars: Vec<Var>,
}

const UNASSIGNED: u8 = 2;

impl Dpll {
    fn new<'a, I: IntoIterator<Item = &'a [Literal]>>(input: I) -> Dpll {
        let raw: Vec<&[Literal]> = input.into_iter().collect();
        let vars: Vec<Var> = raw
            .iter()
            .flat_map(|c| c.iter().map(|l| l.var()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let max = vars.last().map_or(0, |v| v.index() as usize);
        let mut dense = vec![u32::MAX; max + 1];
        for (i, v) in vars.iter().enumerate() {
            dense[v.index() as usize] = i as u32;
        }
        let clauses = raw
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| dense[l.var().index() as usize] * 2 + (!l.is_positive()) as u32)
                    .collect()
            })
            .collect();
        Dpll { clauses, vars }
    }

    fn run(&self) -> Option<Assignment> {
        if self.clauses.iter().any(|c| c.is_empty()) {
            return None;
        }
        let mut values = vec![UNASSIGNED; self.vars.len()];
        let mut trail = Vec::new();
        if !self.search(&mut values, &mut trail) {
            return None;
        }
        let mut model = Assignment::new();
        for (i, &v) in self.vars.iter().enumerate() {
            // Variables left open by an early full-satisfaction exit default to false.
            model.set(v, values[i] == 1);
        }
        Some(model)
    }

    fn lit_value(values: &[u8], code: u32) -> u8 {
        let v = values[(code >> 1) as usize];
        if v == UNASSIGNED {
            UNASSIGNED
        } else {
            v ^ (code & 1) as u8
        }
    }

    /// Returns `false` on conflict. Assigned variables are pushed on `trail`.
    fn propagate(&self, values: &mut [u8], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for clause in &self.clauses {
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for &code in clause {
                    match Self::lit_value(values, code) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        UNASSIGNED => {
                            open_count += 1;
                            open = Some(code);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match open_count {
                    0 => return false,
                    1 => {
                        let code = open.unwrap();
                        let var = (code >> 1) as usize;
                        values[var] = (code & 1 == 0) as u8;
                        trail.push(var);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn all_satisfied(&self, values: &[u8]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&code| Self::lit_value(values, code) == 1))
    }

    fn search(&self, values: &mut [u8], trail: &mut Vec<usize>) -> bool {
        let mark = trail.len();
        if !self.propagate(values, trail) {
            Self::undo(values, trail, mark);
            return false;
        }
        if self.all_satisfied(values) {
            return true;
        }
        let Some(var) = values.iter().position(|&v| v == UNASSIGNED) else {
            return true;
        };
        for value in [1u8, 0u8] {
            values[var] = value;
            trail.push(var);
            if self.search(values, trail) {
                return true;
            }
            trail.pop();
            values[var] = UNASSIGNED;
        }
        Self::undo(values, trail, mark);
        false
    }

    fn undo(values: &mut [u8], trail: &mut Vec<usize>, mark: usize) {
        for var in trail.drain(mark..) {
            values[var] = UNASSIGNED;
        }
    }
}

/// Closure of unit-clause consequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitPropagation {
    /// Forced literals in the order they were derived.
    pub forced: Vec<Literal>,
    pub residual: CnfFormula,
    pub conflict: bool,
}

impl UnitPropagation {
    pub fn forced_set(&self) -> BTreeSet<Literal> {
        self.forced.iter().copied().collect()
    }
}

/// Repeatedly instantiates all unit clauses of the current residual.
/// Units within one pass are applied together, in literal order.
pub fn unit_propagate(formula: &CnfFormula) -> UnitPropagation {
    let mut residual = formula.clone();
    let mut forced = Vec::new();
    loop {
        if residual.has_empty_clause() {
            return UnitPropagation {
                forced,
                residual,
                conflict: true,
            };
        }
        let units: BTreeSet<Literal> = residual
            .clauses()
            .iter()
            .filter(|c| c.is_unit())
            .map(|c| c.literals()[0])
            .collect();
        if units.is_empty() {
            return UnitPropagation {
                forced,
                residual,
                conflict: false,
            };
        }
        let units: Vec<Literal> = units.into_iter().collect();
        match residual.reduct(&units) {
            Ok(r) => {
                forced.extend(units);
                residual = r;
            }
            Err(_) => {
                // Complementary units: keep the consistent prefix, mark the conflict.
                let clash: Vec<Literal> = units
                    .iter()
                    .copied()
                    .filter(|l| !units.contains(&l.complement()))
                    .collect();
                forced.extend(clash.iter().copied());
                residual = residual.reduct(&clash).expect("consistent subset");
                let empty = crate::cnf::Clause::new(crate::cnf::ClauseId(u32::MAX), []).unwrap();
                residual = CnfFormula::new(residual.clauses().iter().cloned().chain([empty]))
                    .expect("fresh id");
                return UnitPropagation {
                    forced,
                    residual,
                    conflict: true,
                };
            }
        }
    }
}

/// `φ ⊨ l`, decided as unsatisfiability of `φ ∪ {{¬l}}`.
pub fn entails(formula: &CnfFormula, lit: Literal) -> bool {
    let neg = [lit.complement()];
    !clauses_satisfiable(
        formula
            .clauses()
            .iter()
            .map(|c| c.literals())
            .chain(std::iter::once(&neg[..])),
    )
}

/// Backbone literals of a satisfiable formula, in variable order.
pub fn full_backbones(formula: &CnfFormula) -> Result<Vec<Literal>> {
    full_backbones_with(formula, Exec::default())
}

pub fn full_backbones_with(formula: &CnfFormula, exec: Exec) -> Result<Vec<Literal>> {
    let SatResult::Sat(model) = solve(formula) else {
        return Err(Error::UnsatInput);
    };
    let candidates: Vec<Literal> = formula
        .vars()
        .into_iter()
        .map(|v| v.literal(model.get(v).unwrap_or(false)))
        .collect();
    let hits = exec.map(&candidates, |&l| entails(formula, l));
    Ok(candidates
        .into_iter()
        .zip(hits)
        .filter_map(|(l, hit)| hit.then_some(l))
        .collect())
}
