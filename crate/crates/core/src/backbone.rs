//! k-backbones, backbone order, and iterative k-backbones.
//!
//! Local backbone questions are answered by reduction to small unsatisfiable
//! subsets: `x` is a k-backbone of `φ` iff the disjoint union of `φ|_x` and
//! `φ|_¬x` (on separate variable copies) has an unsatisfiable subset of at
//! most `k` clauses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::cnf::{Clause, ClauseId, CnfFormula, Literal, Var};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::sus::{self, SearchMode, SusOptions, WitnessKind, WitnessSubset};

/// An order value with an explicit cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Exact(usize),
    /// Larger than the cutoff (or never).
    Exceeds(usize),
}

impl Order {
    pub fn exact(self) -> Option<usize> {
        match self {
            Order::Exact(k) => Some(k),
            Order::Exceeds(_) => None,
        }
    }

    pub fn is_at_most(self, k: usize) -> bool {
        matches!(self, Order::Exact(o) if o <= k)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Exact(k) => write!(f, "{k}"),
            Order::Exceeds(k) => write!(f, ">{k}"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Exact(k) => serializer.serialize_u64(*k as u64),
            Order::Exceeds(_) => serializer.serialize_str(&self.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Copy of `φ|_x`; an unsatisfiable subset here certifies `¬x`.
    PositiveReduct,
    /// Copy of `φ|_¬x`; an unsatisfiable subset here certifies `x`.
    NegativeReduct,
}

/// `ψ = φ₁|_{x₁} ∪ φ₂|_{¬x₂}` with provenance of every clause.
#[derive(Debug, Clone)]
pub struct BackboneToSus {
    pub formula: CnfFormula,
    pub variable: Var,
    /// Variables of the second copy are shifted by this amount.
    pub offset: u32,
    origin: Vec<(ClauseId, Side)>,
}

impl BackboneToSus {
    pub fn origin(&self, id: ClauseId) -> (ClauseId, Side) {
        self.origin[id.0 as usize]
    }

    /// Maps a witness over `ψ` back to clauses of `φ` and the literal they entail.
    pub fn map_witness(&self, witness: &WitnessSubset) -> WitnessSubset {
        let side = self.origin(witness.clause_ids[0]).1;
        let forced = match side {
            Side::PositiveReduct => self.variable.negative(),
            Side::NegativeReduct => self.variable.positive(),
        };
        let mut ids: Vec<ClauseId> = witness
            .clause_ids
            .iter()
            .map(|&id| self.origin(id))
            .filter(|&(_, s)| s == side)
            .map(|(id, _)| id)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        WitnessSubset {
            clause_ids: ids,
            kind: WitnessKind::Entails(forced),
        }
    }
}

pub fn backbone_to_sus(formula: &CnfFormula, x: Var) -> Result<BackboneToSus> {
    if !formula.contains_var(x) {
        return Err(Error::UnknownVariable(x));
    }
    let offset = formula.max_var();
    let first = formula.reduct_lit(x.positive());
    let second = formula
        .reduct_lit(x.negative())
        .map_vars(|v| Var::new(v.index() + offset));
    let mut clauses = Vec::with_capacity(first.len() + second.len());
    let mut origin = Vec::with_capacity(clauses.capacity());
    for (part, side) in [
        (&first, Side::PositiveReduct),
        (&second, Side::NegativeReduct),
    ] {
        for c in part.clauses() {
            let id = ClauseId(origin.len() as u32);
            origin.push((c.id(), side));
            clauses.push(c.with_id(id));
        }
    }
    let formula = CnfFormula::new(clauses)?;
    Ok(BackboneToSus {
        formula,
        variable: x,
        offset,
        origin,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalBackbone {
    pub is_backbone: bool,
    /// The literal entailed by the witness.
    pub forced: Option<Literal>,
    pub witness: Option<WitnessSubset>,
}

pub fn is_k_backbone(formula: &CnfFormula, x: Var, k: usize) -> Result<LocalBackbone> {
    let inst = backbone_to_sus(formula, x)?;
    Ok(local_from_search(
        &inst,
        sus::sus_search_with(&inst.formula, k, seq(SearchMode::First)),
    ))
}

fn seq(mode: SearchMode) -> SusOptions {
    SusOptions {
        mode,
        exec: Exec::Sequential,
    }
}

fn local_from_search(inst: &BackboneToSus, found: Option<WitnessSubset>) -> LocalBackbone {
    match found {
        Some(w) => {
            let w = inst.map_witness(&w);
            let WitnessKind::Entails(l) = w.kind else {
                unreachable!()
            };
            LocalBackbone {
                is_backbone: true,
                forced: Some(l),
                witness: Some(w),
            }
        }
        None => LocalBackbone {
            is_backbone: false,
            forced: None,
            witness: None,
        },
    }
}

/// Smallest `k <= kmax` for which `x` is a k-backbone, with a witness of that size.
pub fn backbone_order_witness(
    formula: &CnfFormula,
    x: Var,
    kmax: usize,
) -> Result<(Order, LocalBackbone)> {
    let inst = backbone_to_sus(formula, x)?;
    let local = local_from_search(
        &inst,
        sus::sus_search_with(&inst.formula, kmax, seq(SearchMode::Minimum)),
    );
    let order = match &local.witness {
        Some(w) => Order::Exact(w.len()),
        None => Order::Exceeds(kmax),
    };
    Ok((order, local))
}

pub fn backbone_order(formula: &CnfFormula, x: Var, kmax: usize) -> Result<Order> {
    Ok(backbone_order_witness(formula, x, kmax)?.0)
}

/// All k-backbones with the polarity found, in variable order.
///
/// Follows the literal definition: on a formula with an unsatisfiable subset
/// of at most `k` clauses every variable qualifies.
pub fn local_backbones(formula: &CnfFormula, k: usize) -> Vec<Literal> {
    local_backbones_with(formula, k, Exec::default())
}

pub fn local_backbones_with(formula: &CnfFormula, k: usize, exec: Exec) -> Vec<Literal> {
    let vars: Vec<Var> = formula.vars().into_iter().collect();
    exec.map(&vars, |&v| {
        is_k_backbone(formula, v, k)
            .expect("variable occurs")
            .forced
    })
    .into_iter()
    .flatten()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterativeBackbones {
    /// Forced literals, round by round, each round in literal order.
    pub forced: Vec<Literal>,
    pub vars: BTreeSet<Var>,
    pub rounds: usize,
}

impl IterativeBackbones {
    pub fn forced_set(&self) -> BTreeSet<Literal> {
        self.forced.iter().copied().collect()
    }
}

/// Iterative k-backbones by rounds: every literal `l` of the current formula
/// `ψ` with an unsatisfiable subset of at most `k` clauses in `ψ|_¬l` is
/// collected, then `ψ` is reduced by the collected literals.
pub fn iterative_k_backbones(formula: &CnfFormula, k: usize) -> Result<IterativeBackbones> {
    iterative_k_backbones_with(formula, k, Exec::default())
}

pub fn iterative_k_backbones_with(
    formula: &CnfFormula,
    k: usize,
    exec: Exec,
) -> Result<IterativeBackbones> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let max_rounds = formula.lits().len();
    let mut psi = formula.clone();
    let mut forced = Vec::new();
    let mut rounds = 0;
    while rounds < max_rounds {
        rounds += 1;
        if psi.has_empty_clause() {
            return Err(Error::UnsatDetected);
        }
        // A small unsatisfiable subset of ψ itself would put every literal and
        // its complement into the consequences.
        if sus::sus_search_with(
            &psi,
            k,
            SusOptions {
                mode: SearchMode::First,
                exec,
            },
        )
        .is_some()
        {
            return Err(Error::UnsatDetected);
        }
        let candidates = psi.lits();
        let hits = exec.map(&candidates, |&l| {
            // ψ has no small unsatisfiable subset, so any witness in ψ|_¬l
            // uses a clause that lost ¬l's complement, i.e. contained l.
            let touched: BTreeSet<ClauseId> = psi
                .clauses()
                .iter()
                .filter(|c| c.contains(l))
                .map(Clause::id)
                .collect();
            if touched.is_empty() {
                return false;
            }
            let reduced = psi.reduct_lit(l.complement());
            sus::sus_search_touching(&reduced, k, &touched, seq(SearchMode::First)).is_some()
        });
        let new: Vec<Literal> = candidates
            .into_iter()
            .zip(hits)
            .filter_map(|(l, hit)| hit.then_some(l))
            .collect();
        if new.is_empty() {
            break;
        }
        psi = psi.reduct(&new).map_err(|_| Error::UnsatDetected)?;
        forced.extend(new);
    }
    let vars = forced.iter().map(|l| l.var()).collect();
    Ok(IterativeBackbones {
        forced,
        vars,
        rounds,
    })
}

/// Smallest `k <= kmax` for which `x` is an iterative k-backbone.
pub fn iterative_order(formula: &CnfFormula, x: Var, kmax: usize) -> Result<Order> {
    if !formula.contains_var(x) {
        return Err(Error::UnknownVariable(x));
    }
    for k in 1..=kmax {
        if iterative_k_backbones(formula, k)?.vars.contains(&x) {
            return Ok(Order::Exact(k));
        }
    }
    Ok(Order::Exceeds(kmax))
}

/// Iterative orders of the given variables, sharing one computation per `k`.
/// Stops early once every variable has an order.
pub fn iterative_orders(
    formula: &CnfFormula,
    vars: &[Var],
    kmax: usize,
    exec: Exec,
) -> Result<BTreeMap<Var, Order>> {
    let mut out: BTreeMap<Var, Order> = vars.iter().map(|&v| (v, Order::Exceeds(kmax))).collect();
    let mut open: BTreeSet<Var> = vars.iter().copied().collect();
    for k in 1..=kmax {
        if open.is_empty() {
            break;
        }
        let found = iterative_k_backbones_with(formula, k, exec)?.vars;
        open.retain(|v| {
            if found.contains(v) {
                out.insert(*v, Order::Exact(k));
                false
            } else {
                true
            }
        });
    }
    Ok(out)
}
