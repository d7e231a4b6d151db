//! Small unsatisfiable subsets: a brute-force reference, a pruned search over
//! connected sub-formulas, and the connected-growth search for formulas with
//! bounded variable occurrence.
//!
//! Two facts drive the pruning. A subset-minimal unsatisfiable formula has
//! more clauses than variables, so an unsatisfiable subset of at most `k`
//! clauses contains a minimal one whose clauses all have fewer than `k`
//! literals and which mentions at most `k - 1` variables. And a minimal
//! unsatisfiable formula is connected in the clause/variable incidence graph.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::cnf::{Clause, ClauseId, CnfFormula, Literal};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::sat::clauses_satisfiable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "literal", rename_all = "snake_case")]
pub enum WitnessKind {
    Unsat,
    Entails(Literal),
}

/// A set of clause ids certifying unsatisfiability or an entailed literal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSubset {
    pub clause_ids: Vec<ClauseId>,
    #[serde(flatten)]
    pub kind: WitnessKind,
}

impl WitnessSubset {
    pub fn unsat(mut clause_ids: Vec<ClauseId>) -> WitnessSubset {
        clause_ids.sort_unstable();
        clause_ids.dedup();
        WitnessSubset {
            clause_ids,
            kind: WitnessKind::Unsat,
        }
    }

    pub fn len(&self) -> usize {
        self.clause_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clause_ids.is_empty()
    }

    pub fn subformula(&self, formula: &CnfFormula) -> CnfFormula {
        formula.subset(&self.clause_ids)
    }

    /// Tarsi's inequality: more clauses than variables.
    pub fn satisfies_tarsi(&self, formula: &CnfFormula) -> bool {
        let sub = self.subformula(formula);
        sub.len() > sub.vars().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Return the first witness found (lowest seed clause first).
    #[default]
    First,
    /// Iterative deepening on the subset size: a minimum-cardinality witness.
    Minimum,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SusOptions {
    pub mode: SearchMode,
    pub exec: Exec,
}

fn subset_satisfiable(clauses: &[&Clause]) -> bool {
    clauses_satisfiable(clauses.iter().map(|c| c.literals()))
}

/// Reference oracle: all subsets by increasing size, returns a minimum one.
pub fn sus_bruteforce(formula: &CnfFormula, k: usize) -> Option<WitnessSubset> {
    let clauses: Vec<&Clause> = formula.clauses().iter().collect();
    for size in 1..=k.min(clauses.len()) {
        for combo in clauses.iter().copied().combinations(size) {
            if !subset_satisfiable(&combo) {
                return Some(WitnessSubset::unsat(combo.iter().map(|c| c.id()).collect()));
            }
        }
    }
    None
}

pub fn sus_search(formula: &CnfFormula, k: usize) -> Option<WitnessSubset> {
    sus_search_with(formula, k, SusOptions::default())
}

pub fn sus_search_min(formula: &CnfFormula, k: usize) -> Option<WitnessSubset> {
    sus_search_with(
        formula,
        k,
        SusOptions {
            mode: SearchMode::Minimum,
            ..SusOptions::default()
        },
    )
}

pub fn sus_search_with(formula: &CnfFormula, k: usize, opts: SusOptions) -> Option<WitnessSubset> {
    ConnectedSearch::new(formula, k, None).run(opts)
}

/// Like [`sus_search_with`], but only subsets containing at least one clause
/// from `required` are explored.
pub(crate) fn sus_search_touching(
    formula: &CnfFormula,
    k: usize,
    required: &BTreeSet<ClauseId>,
    opts: SusOptions,
) -> Option<WitnessSubset> {
    ConnectedSearch::new(formula, k, Some(required)).run(opts)
}

/// Enumerates connected clause subsets with the ESU scheme: each subset is
/// generated once, from its lowest-ranked clause, by adding one clause at a
/// time from the exclusive neighbourhood.
struct ConnectedSearch<'a> {
    clauses: Vec<&'a Clause>,
    adj: Vec<Vec<usize>>,
    num_seeds: usize,
    max_var: usize,
    k: usize,
}

struct Frame {
    sub: Vec<usize>,
    in_closed_nbhd: Vec<u32>,
    var_count: Vec<u32>,
    distinct_vars: usize,
}

impl<'a> ConnectedSearch<'a> {
    fn new(formula: &'a CnfFormula, k: usize, required: Option<&BTreeSet<ClauseId>>) -> Self {
        // Clauses of size >= k never occur in a minimal witness of size <= k.
        let mut clauses: Vec<&Clause> = formula.clauses().iter().filter(|c| c.len() < k).collect();
        let num_seeds = match required {
            None => clauses.len(),
            Some(req) => {
                // Required clauses first, so every wanted subset has its seed among them.
                clauses.sort_by_key(|c| !req.contains(&c.id()));
                clauses.iter().filter(|c| req.contains(&c.id())).count()
            }
        };
        let max_var = formula.max_var() as usize;
        let mut occ: Vec<Vec<usize>> = vec![Vec::new(); max_var + 1];
        for (i, c) in clauses.iter().enumerate() {
            for v in c.vars() {
                occ[v.index() as usize].push(i);
            }
        }
        let adj = clauses
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut n: Vec<usize> = c
                    .vars()
                    .flat_map(|v| occ[v.index() as usize].iter().copied())
                    .filter(|&j| j != i)
                    .collect();
                n.sort_unstable();
                n.dedup();
                n
            })
            .collect();
        ConnectedSearch {
            clauses,
            adj,
            num_seeds,
            max_var,
            k,
        }
    }

    fn run(&self, opts: SusOptions) -> Option<WitnessSubset> {
        if self.k == 0 {
            return None;
        }
        let seeds: Vec<usize> = (0..self.num_seeds).collect();
        let found = match opts.mode {
            SearchMode::First => opts
                .exec
                .find_map_first(&seeds, |&s| self.search_seed(s, self.k)),
            SearchMode::Minimum => (1..=self.k).find_map(|size| {
                opts.exec
                    .find_map_first(&seeds, |&s| self.search_seed(s, size))
            }),
        }?;
        Some(WitnessSubset::unsat(
            found.into_iter().map(|i| self.clauses[i].id()).collect(),
        ))
    }

    fn search_seed(&self, seed: usize, limit: usize) -> Option<Vec<usize>> {
        let n = self.clauses.len();
        let mut frame = Frame {
            sub: Vec::with_capacity(limit),
            in_closed_nbhd: vec![0; n],
            var_count: vec![0; self.max_var + 1],
            distinct_vars: 0,
        };
        self.push(&mut frame, seed);
        let ext: Vec<usize> = self.adj[seed]
            .iter()
            .copied()
            .filter(|&u| u > seed)
            .collect();
        self.extend(&mut frame, ext, seed, limit)
    }

    fn push(&self, frame: &mut Frame, i: usize) {
        frame.sub.push(i);
        frame.in_closed_nbhd[i] += 1;
        for &u in &self.adj[i] {
            frame.in_closed_nbhd[u] += 1;
        }
        for v in self.clauses[i].vars() {
            let c = &mut frame.var_count[v.index() as usize];
            if *c == 0 {
                frame.distinct_vars += 1;
            }
            *c += 1;
        }
    }

    fn pop(&self, frame: &mut Frame) {
        let i = frame.sub.pop().unwrap();
        frame.in_closed_nbhd[i] -= 1;
        for &u in &self.adj[i] {
            frame.in_closed_nbhd[u] -= 1;
        }
        for v in self.clauses[i].vars() {
            let c = &mut frame.var_count[v.index() as usize];
            *c -= 1;
            if *c == 0 {
                frame.distinct_vars -= 1;
            }
        }
    }

    fn extend(
        &self,
        frame: &mut Frame,
        mut ext: Vec<usize>,
        seed: usize,
        limit: usize,
    ) -> Option<Vec<usize>> {
        // A minimal witness within `limit` clauses has at most `limit - 1` variables,
        // and every connected subset on the way to it has no more.
        if frame.distinct_vars + 1 > limit {
            return None;
        }
        let subset: Vec<&Clause> = frame.sub.iter().map(|&i| self.clauses[i]).collect();
        if !subset_satisfiable(&subset) {
            return Some(frame.sub.clone());
        }
        if frame.sub.len() == limit {
            return None;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            // exclusive neighbours of w: above the seed, not in N[sub]
            for &u in &self.adj[w] {
                if u > seed && frame.in_closed_nbhd[u] == 0 && !next.contains(&u) {
                    next.push(u);
                }
            }
            self.push(frame, w);
            let r = self.extend(frame, next, seed, limit);
            self.pop(frame);
            if r.is_some() {
                return r;
            }
        }
        None
    }
}

/// Connected-growth search for formulas in which every variable occurs at
/// most `d` times.
///
/// From each seed clause the current set grows by taking the lowest unmarked
/// variable `z`, adding some subset of the remaining clauses through `z`
/// (the empty choice included) and marking `z`.
pub fn sus_vo_search(formula: &CnfFormula, k: usize, d: usize) -> Result<Option<WitnessSubset>> {
    sus_vo_search_with(formula, k, d, Exec::default())
}

pub fn sus_vo_search_with(
    formula: &CnfFormula,
    k: usize,
    d: usize,
    exec: Exec,
) -> Result<Option<WitnessSubset>> {
    if let Some((&var, &count)) = formula.occurrences().iter().find(|(_, &c)| c > d) {
        return Err(Error::OccurrenceBound {
            var,
            count,
            bound: d,
        });
    }
    if k == 0 {
        return Ok(None);
    }
    let grower = Grower::new(formula, k);
    let seeds: Vec<usize> = (0..grower.clauses.len()).collect();
    let found = exec.find_map_first(&seeds, |&seed| {
        let mut set = vec![seed];
        let mut marked = Vec::new();
        grower.grow(&mut set, &mut marked, true)
    });
    Ok(found
        .map(|set| WitnessSubset::unsat(set.into_iter().map(|i| grower.clauses[i].id()).collect())))
}

struct Grower<'a> {
    clauses: Vec<&'a Clause>,
    occ: Vec<Vec<usize>>,
    k: usize,
}

impl<'a> Grower<'a> {
    fn new(formula: &'a CnfFormula, k: usize) -> Self {
        let clauses: Vec<&Clause> = formula.clauses().iter().filter(|c| c.len() < k).collect();
        let mut occ = vec![Vec::new(); formula.max_var() as usize + 1];
        for (i, c) in clauses.iter().enumerate() {
            for v in c.vars() {
                occ[v.index() as usize].push(i);
            }
        }
        Grower { clauses, occ, k }
    }

    fn grow(
        &self,
        set: &mut Vec<usize>,
        marked: &mut Vec<u32>,
        changed: bool,
    ) -> Option<Vec<usize>> {
        if changed {
            let subset: Vec<&Clause> = set.iter().map(|&i| self.clauses[i]).collect();
            if !subset_satisfiable(&subset) {
                return Some(set.clone());
            }
        }
        let z = set
            .iter()
            .flat_map(|&i| self.clauses[i].vars().map(|v| v.index()))
            .filter(|v| !marked.contains(v))
            .min()?;
        let through_z: Vec<usize> = self.occ[z as usize]
            .iter()
            .copied()
            .filter(|i| !set.contains(i))
            .collect();
        marked.push(z);
        let room = self.k - set.len();
        let mut result = None;
        'sizes: for size in 0..=room.min(through_z.len()) {
            for choice in through_z.iter().copied().combinations(size) {
                let base = set.len();
                set.extend(choice);
                result = self.grow(set, marked, size > 0);
                set.truncate(base);
                if result.is_some() {
                    break 'sizes;
                }
            }
        }
        marked.pop();
        result
    }
}

/// Shrinks an unsatisfiable witness to a subset-minimal one by deletion tests.
pub fn minimize_witness(formula: &CnfFormula, witness: &WitnessSubset) -> Result<WitnessSubset> {
    if witness.kind != WitnessKind::Unsat {
        return Err(Error::NotUnsatWitness);
    }
    let mut kept: Vec<&Clause> = witness
        .clause_ids
        .iter()
        .filter_map(|&id| formula.get(id))
        .collect();
    if subset_satisfiable(&kept) {
        return Err(Error::NotUnsatWitness);
    }
    let mut i = 0;
    while i < kept.len() {
        let without: Vec<&Clause> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, c)| *c)
            .collect();
        if subset_satisfiable(&without) {
            i += 1;
        } else {
            kept = without;
        }
    }
    Ok(WitnessSubset::unsat(kept.iter().map(|c| c.id()).collect()))
}
