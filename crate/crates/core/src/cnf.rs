//! Propositional core: variables, literals, clauses with stable ids, and
//! CNF formulas with set semantics.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(u32);

impl Var {
    /// Panics if `index` is 0.
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variables are numbered from 1");
        Var(index)
    }

    pub fn try_new(index: u32) -> Option<Var> {
        (index >= 1).then_some(Var(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn positive(self) -> Literal {
        Literal::new(self, true)
    }

    pub fn negative(self) -> Literal {
        Literal::new(self, false)
    }

    pub fn literal(self, positive: bool) -> Literal {
        Literal::new(self, positive)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal, packed as `2 * var + negated`.
///
/// The derived order sorts by variable, positive before negative, which is
/// the scan order used throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(u32);

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        Literal((var.0 << 1) | (!positive) as u32)
    }

    pub fn from_dimacs(value: i32) -> Option<Literal> {
        let var = Var::try_new(value.unsigned_abs())?;
        Some(Literal::new(var, value > 0))
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn complement(self) -> Literal {
        Literal(self.0 ^ 1)
    }

    /// Dense index usable for literal-indexed tables of size `2 * (max_var + 1)`.
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        self.complement()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.to_dimacs())
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i32::deserialize(deserializer)?;
        Literal::from_dimacs(v).ok_or_else(|| serde::de::Error::custom("literal 0"))
    }
}

/// Stable clause identifier; survives reducts and subsetting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClauseId(pub u32);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of literals without complementary pairs. May be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    id: ClauseId,
    lits: Vec<Literal>,
}

impl Clause {
    pub fn new(id: ClauseId, lits: impl IntoIterator<Item = Literal>) -> Result<Clause> {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        if let Some(w) = lits.windows(2).find(|w| w[0].var() == w[1].var()) {
            return Err(Error::Tautology(w[0]));
        }
        Ok(Clause { id, lits })
    }

    fn from_sorted(id: ClauseId, lits: Vec<Literal>) -> Clause {
        Clause { id, lits }
    }

    pub fn id(&self) -> ClauseId {
        self.id
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lits.len() == 1
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.contains(var.positive()) || self.contains(var.negative())
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    pub fn positive_count(&self) -> usize {
        self.lits.iter().filter(|l| l.is_positive()).count()
    }

    pub fn with_id(&self, id: ClauseId) -> Clause {
        Clause {
            id,
            lits: self.lits.clone(),
        }
    }

    pub fn to_dimacs(&self) -> Vec<i32> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }
}

/// A CNF formula: a set of clauses kept sorted by id.
///
/// Clauses with equal literal content collapse; the smallest id wins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Result<CnfFormula> {
        let mut clauses: Vec<Clause> = clauses.into_iter().collect();
        clauses.sort_by_key(|c| c.id);
        if let Some(w) = clauses.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateClauseId(w[0].id.0));
        }
        Ok(Self::collapse(clauses))
    }

    /// Builds a formula from DIMACS-style integer clauses, assigning ids
    /// `0, 1, 2, ...` in input order.
    pub fn from_ints<I, C>(clauses: I) -> Result<CnfFormula>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = i32>,
    {
        let mut out = Vec::new();
        for (i, c) in clauses.into_iter().enumerate() {
            let lits = c
                .into_iter()
                .map(|v| {
                    Literal::from_dimacs(v)
                        .ok_or_else(|| Error::InvalidParameter("literal 0 inside a clause".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Clause::new(ClauseId(i as u32), lits)?);
        }
        CnfFormula::new(out)
    }

    // Input must be sorted by id with unique ids.
    fn collapse(clauses: Vec<Clause>) -> CnfFormula {
        let mut seen: HashSet<Vec<Literal>> = HashSet::with_capacity(clauses.len());
        let clauses = clauses
            .into_iter()
            .filter(|c| seen.insert(c.lits.clone()))
            .collect();
        CnfFormula { clauses }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of clauses, `|φ|`.
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Total number of literal occurrences, `‖φ‖`.
    pub fn length(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    pub fn get(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses
            .binary_search_by_key(&id, |c| c.id)
            .ok()
            .map(|i| &self.clauses[i])
    }

    pub fn ids(&self) -> Vec<ClauseId> {
        self.clauses.iter().map(|c| c.id).collect()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.clauses.iter().any(|c| c.contains_var(var))
    }

    /// Both polarities of every occurring variable, in scan order.
    pub fn lits(&self) -> Vec<Literal> {
        self.vars()
            .into_iter()
            .flat_map(|v| [v.positive(), v.negative()])
            .collect()
    }

    pub fn max_var(&self) -> u32 {
        self.clauses
            .iter()
            .flat_map(|c| c.lits.last())
            .map(|l| l.var().0)
            .max()
            .unwrap_or(0)
    }

    pub fn max_id(&self) -> Option<ClauseId> {
        self.clauses.last().map(|c| c.id)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    pub fn occurrences(&self) -> BTreeMap<Var, usize> {
        let mut occ = BTreeMap::new();
        for v in self.clauses.iter().flat_map(|c| c.vars()) {
            *occ.entry(v).or_insert(0) += 1;
        }
        occ
    }

    /// The sub-formula made of the given clause ids; unknown ids are ignored.
    pub fn subset(&self, ids: &[ClauseId]) -> CnfFormula {
        let wanted: HashSet<ClauseId> = ids.iter().copied().collect();
        CnfFormula {
            clauses: self
                .clauses
                .iter()
                .filter(|c| wanted.contains(&c.id))
                .cloned()
                .collect(),
        }
    }

    /// `φ|_L`: drops clauses containing a literal of `L`, removes the
    /// complements of `L` from the rest. Ids are preserved.
    pub fn reduct(&self, lits: &[Literal]) -> Result<CnfFormula> {
        let set: HashSet<Literal> = lits.iter().copied().collect();
        if let Some(l) = lits.iter().find(|l| set.contains(&l.complement())) {
            return Err(Error::ComplementaryLiterals(*l));
        }
        let clauses = self
            .clauses
            .iter()
            .filter(|c| !c.lits.iter().any(|l| set.contains(l)))
            .map(|c| {
                let lits = c
                    .lits
                    .iter()
                    .copied()
                    .filter(|l| !set.contains(&l.complement()))
                    .collect();
                Clause::from_sorted(c.id, lits)
            })
            .collect();
        Ok(Self::collapse(clauses))
    }

    pub fn reduct_lit(&self, lit: Literal) -> CnfFormula {
        self.reduct(&[lit]).expect("a single literal is consistent")
    }

    /// Renames variables through `f`, keeping ids. `f` must be injective.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> CnfFormula {
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                let mut lits: Vec<Literal> = c
                    .lits
                    .iter()
                    .map(|l| Literal::new(f(l.var()), l.is_positive()))
                    .collect();
                lits.sort_unstable();
                Clause::from_sorted(c.id, lits)
            })
            .collect();
        CnfFormula { clauses }
    }

    /// Appends clauses with fresh ids following the current maximum.
    pub fn extend_fresh(
        &self,
        extra: impl IntoIterator<Item = Vec<Literal>>,
    ) -> Result<CnfFormula> {
        let first = self.max_id().map_or(0, |id| id.0 + 1);
        let mut clauses = self.clauses.clone();
        for (id, lits) in (first..).zip(extra) {
            clauses.push(Clause::new(ClauseId(id), lits)?);
        }
        CnfFormula::new(clauses)
    }

    pub fn to_ints(&self) -> Vec<Vec<i32>> {
        self.clauses.iter().map(Clause::to_dimacs).collect()
    }
}

/// Optional external variable names, kept beside a formula for output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarNames(pub BTreeMap<Var, String>);

impl VarNames {
    pub fn insert(&mut self, var: Var, name: impl Into<String>) {
        self.0.insert(var, name.into());
    }

    pub fn get(&self, var: Var) -> Option<&str> {
        self.0.get(&var).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A partial mapping from variables to truth values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var.0 as usize).copied().flatten()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        let i = var.0 as usize;
        if self.values.len() <= i {
            self.values.resize(i + 1, None);
        }
        self.values[i] = Some(value);
    }

    pub fn value_of(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var()).map(|v| v == lit.is_positive())
    }

    pub fn is_total_on(&self, formula: &CnfFormula) -> bool {
        formula.vars().into_iter().all(|v| self.get(v).is_some())
    }

    /// `None` unless the assignment is total on `Var(φ)`.
    pub fn satisfies(&self, formula: &CnfFormula) -> Option<bool> {
        if !self.is_total_on(formula) {
            return None;
        }
        Some(
            formula
                .clauses()
                .iter()
                .all(|c| c.literals().iter().any(|&l| self.value_of(l) == Some(true))),
        )
    }

    /// The literals made true, in variable order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| Literal::new(Var(i as u32), b)))
    }

    pub fn len(&self) -> usize {
        self.values.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl FromIterator<Literal> for Assignment {
    fn from_iter<T: IntoIterator<Item = Literal>>(iter: T) -> Self {
        let mut a = Assignment::new();
        for l in iter {
            a.set(l.var(), l.is_positive());
        }
        a
    }
}
