use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::ColoredGraph;
use crate::classify::classify;
use crate::cnf::{Clause, ClauseId, CnfFormula, Literal, Var, VarNames};
use crate::error::{Error, Result};
use crate::horn::forward_chain;

/// A short-hyperpath question: is there a set of at most `k` clauses of
/// `formula` that derives `t` from `s`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperpathInstance {
    pub formula: CnfFormula,
    pub s: Var,
    pub t: Var,
    pub k: usize,
    pub names: VarNames,
}

impl HyperpathInstance {
    pub fn new(formula: CnfFormula, s: Var, t: Var, k: usize) -> Result<HyperpathInstance> {
        if !classify(&formula).definite_horn {
            return Err(Error::ClassViolation("definite Horn"));
        }
        for v in [s, t] {
            if !formula.contains_var(v) {
                return Err(Error::UnknownVariable(v));
            }
        }
        Ok(HyperpathInstance {
            formula,
            s,
            t,
            k,
            names: VarNames::default(),
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum GadgetMode {
    /// One clause `{¬p_12, …, t}` over all pair variables.
    #[default]
    WideClause,
    /// The wide clause rewritten as a chain of clauses of size at most 3.
    ThreeCnf,
}

fn head(c: &Clause) -> Var {
    c.literals()
        .iter()
        .find(|l| l.is_positive())
        .expect("definite clause")
        .var()
}

fn body(c: &Clause) -> impl Iterator<Item = Var> + '_ {
    c.literals()
        .iter()
        .filter(|l| !l.is_positive())
        .map(|l| l.var())
}

fn require_definite(formula: &CnfFormula) -> Result<()> {
    if classify(formula).definite_horn {
        Ok(())
    } else {
        Err(Error::ClassViolation("definite Horn"))
    }
}

/// Checks the recursive definition directly: `φ'` is a hyperpath from `s`
/// to `t` if `t = s`, or some `{¬x_1, …, ¬x_n, t} ∈ φ'` leaves a remainder
/// that is a hyperpath from `s` to every `x_i`. Also requires `|φ'| <= k`.
pub fn is_k_hyperpath(subset: &CnfFormula, s: Var, t: Var, k: usize) -> Result<bool> {
    require_definite(subset)?;
    if subset.len() > k {
        return Ok(false);
    }
    let all: Vec<usize> = (0..subset.len()).collect();
    let mut memo = HashMap::new();
    Ok(hyperpath_rec(subset.clauses(), &all, s, t, &mut memo))
}

fn hyperpath_rec(
    clauses: &[Clause],
    set: &[usize],
    s: Var,
    t: Var,
    memo: &mut HashMap<(Vec<usize>, Var), bool>,
) -> bool {
    if t == s {
        return true;
    }
    if let Some(&hit) = memo.get(&(set.to_vec(), t)) {
        return hit;
    }
    let found = set.iter().any(|&ci| {
        let c = &clauses[ci];
        if head(c) != t {
            return false;
        }
        let rest: Vec<usize> = set.iter().copied().filter(|&j| j != ci).collect();
        body(c).all(|x| hyperpath_rec(clauses, &rest, s, x, memo))
    });
    memo.insert((set.to_vec(), t), found);
    found
}

/// Size of a smallest hyperpath from `s` to `t` within `kmax` clauses.
///
/// A minimal hyperpath uses at most one clause per head, so the search picks
/// one defining clause for each open goal, bounded by the number of open
/// goals still to cover. Leaves are confirmed by forward chaining.
pub fn shortest_hyperpath(
    formula: &CnfFormula,
    s: Var,
    t: Var,
    kmax: usize,
) -> Result<Option<usize>> {
    require_definite(formula)?;
    if s == t {
        return Ok(Some(0));
    }
    if !forward_chain(formula, &[s]).contains(&t) {
        return Ok(None);
    }
    let mut by_head: HashMap<Var, Vec<usize>> = HashMap::new();
    for (i, c) in formula.clauses().iter().enumerate() {
        by_head.entry(head(c)).or_default().push(i);
    }
    let mut search = PathSearch {
        formula,
        by_head,
        s,
        t,
        best: kmax + 1,
    };
    search.dfs(&mut Vec::new(), &BTreeSet::from([t]));
    Ok((search.best <= kmax).then_some(search.best))
}

struct PathSearch<'a> {
    formula: &'a CnfFormula,
    by_head: HashMap<Var, Vec<usize>>,
    s: Var,
    t: Var,
    best: usize,
}

impl PathSearch<'_> {
    fn dfs(&mut self, chosen: &mut Vec<usize>, open: &BTreeSet<Var>) {
        if chosen.len() + open.len() >= self.best {
            return;
        }
        let Some(&goal) = open.first() else {
            let ids: Vec<ClauseId> = chosen
                .iter()
                .map(|&i| self.formula.clauses()[i].id())
                .collect();
            if forward_chain(&self.formula.subset(&ids), &[self.s]).contains(&self.t) {
                self.best = chosen.len();
            }
            return;
        };
        let candidates = self.by_head.get(&goal).cloned().unwrap_or_default();
        for ci in candidates {
            let c = &self.formula.clauses()[ci];
            let mut next = open.clone();
            next.remove(&goal);
            for x in body(c) {
                let covered = x == self.s
                    || chosen
                        .iter()
                        .any(|&j| head(&self.formula.clauses()[j]) == x);
                if !covered && x != goal {
                    next.insert(x);
                }
            }
            chosen.push(ci);
            self.dfs(chosen, &next);
            chosen.pop();
        }
    }
}

/// Builds the hyperpath instance whose `k'`-hyperpaths correspond to
/// multicolored cliques of `graph`, with `k' = k + C(k,2) + 1` in wide mode
/// and `k' = k + 2·C(k,2) + 1` in 3CNF mode.
///
/// Variables: `s = 1`, `t = 2`, then one per vertex, then `p_{i,j}` for
/// color pairs `i < j`, then the chain variables of 3CNF mode.
pub fn clique_to_hyperpath(graph: &ColoredGraph, mode: GadgetMode) -> Result<HyperpathInstance> {
    let graph = ColoredGraph::new(graph.k, graph.colors.clone(), graph.edges.iter().copied())?;
    let k = graph.k;
    let n = graph.vertex_count() as u32;
    let s = Var::new(1);
    let t = Var::new(2);
    let vertex = |v: usize| Var::new(3 + v as u32);
    let pairs: Vec<(usize, usize)> = (1..=k).tuple_combinations().collect();
    let pair_var = |i: usize, j: usize| {
        let pos = pairs.iter().position(|&p| p == (i, j)).expect("color pair");
        Var::new(3 + n + pos as u32)
    };
    let m = pairs.len();
    let chain = |i: usize| Var::new(2 + n + m as u32 + i as u32);

    let mut names = VarNames::default();
    names.insert(s, "s");
    names.insert(t, "t");
    for v in 0..graph.vertex_count() {
        names.insert(vertex(v), format!("v{v}_c{}", graph.colors[v]));
    }
    for &(i, j) in &pairs {
        names.insert(pair_var(i, j), format!("p{i}_{j}"));
    }

    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    for v in 0..graph.vertex_count() {
        clauses.push(vec![s.negative(), vertex(v).positive()]);
    }
    for &(u, v) in &graph.edges {
        let (u, v) = if graph.colors[u] < graph.colors[v] {
            (u, v)
        } else {
            (v, u)
        };
        let p = pair_var(graph.colors[u], graph.colors[v]);
        clauses.push(vec![
            vertex(u).negative(),
            vertex(v).negative(),
            p.positive(),
        ]);
    }
    let ps: Vec<Var> = pairs.iter().map(|&(i, j)| pair_var(i, j)).collect();
    let k_prime = match mode {
        GadgetMode::WideClause => {
            clauses.push(
                ps.iter()
                    .map(|p| p.negative())
                    .chain([t.positive()])
                    .collect(),
            );
            k + m + 1
        }
        GadgetMode::ThreeCnf => {
            for i in 1..=m {
                names.insert(chain(i), format!("y{i}"));
                let mut c = vec![ps[i - 1].negative(), chain(i).positive()];
                if i > 1 {
                    c.push(chain(i - 1).negative());
                }
                clauses.push(c);
            }
            clauses.push(vec![chain(m).negative(), t.positive()]);
            k + 2 * m + 1
        }
    };
    let formula = build(clauses)?;
    let mut inst = HyperpathInstance::new(formula, s, t, k_prime)?;
    inst.names = names;
    Ok(inst)
}

fn build(clauses: Vec<Vec<Literal>>) -> Result<CnfFormula> {
    CnfFormula::new(
        clauses
            .into_iter()
            .enumerate()
            .map(|(i, lits)| Clause::new(ClauseId(i as u32), lits))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// `ψ = {{s}} ∪ φ` with target `t` and `k' = k + 1`. The unit `{s}` takes
/// the next free clause id.
pub fn hyperpath_to_defhorn(h: &HyperpathInstance) -> (CnfFormula, Var, usize) {
    let unit = vec![h.s.positive()];
    let psi = h
        .formula
        .extend_fresh([unit])
        .expect("s is a plain literal");
    (psi, h.t, h.k + 1)
}

/// Rewrites every clause `{¬a, t}` with `a ≠ s` as `{¬a, ¬s, t}`, which
/// keeps hyperpath sizes since `s` is always reached.
pub fn normalize_target_clauses(h: &HyperpathInstance) -> Result<HyperpathInstance> {
    let clauses = h.formula.clauses().iter().map(|c| {
        if !c.contains(h.t.positive()) || c.len() == 3 {
            return Ok(c.clone());
        }
        match *c.literals() {
            [a, _] | [_, a] if a.var() != h.t && a.var() != h.s => {
                Clause::new(c.id(), c.literals().iter().copied().chain([h.s.negative()]))
            }
            _ => Err(Error::InvalidParameter(format!(
                "clause {} with head t cannot be brought to size 3",
                c.id()
            ))),
        }
    });
    let formula = CnfFormula::new(clauses.collect::<Result<Vec<_>>>()?)?;
    Ok(HyperpathInstance {
        formula,
        s: h.s,
        t: h.t,
        k: h.k,
        names: h.names.clone(),
    })
}

/// Unit-free Horn 3CNF in which `¬x_s` is a k-backbone iff `h` has a
/// k-hyperpath. Clauses `{¬a, ¬b, t}` become `{¬a, ¬b}`; every other clause
/// is kept. Variables keep their indices.
pub fn hyperpath_to_nuhorn(h: &HyperpathInstance) -> Result<(CnfFormula, Literal, usize)> {
    require_definite(&h.formula)?;
    if h.s == h.t {
        return Err(Error::InvalidParameter("s and t must differ".into()));
    }
    let mut out = Vec::with_capacity(h.formula.len());
    for c in h.formula.clauses() {
        if c.len() > 3 {
            return Err(Error::ClassViolation("3CNF"));
        }
        if c.len() == 1 {
            return Err(Error::InvalidParameter(format!(
                "unit clause {} has no gadget image",
                c.id()
            )));
        }
        if head(c) == h.t {
            if c.len() != 3 {
                return Err(Error::InvalidParameter(format!(
                    "clause {} has head t but size {}; normalize first",
                    c.id(),
                    c.len()
                )));
            }
            out.push(Clause::new(
                c.id(),
                c.literals().iter().copied().filter(|l| !l.is_positive()),
            )?);
        } else {
            out.push(c.clone());
        }
    }
    Ok((CnfFormula::new(out)?, h.s.negative(), h.k))
}

/// A tiny random definite Horn 3CNF instance with `s = 1` and `t = n`,
/// no unit clauses, `s` in the first body and `t` as the second head.
/// With `target_size3`, clauses with head `t` always have size 3.
pub fn random_hyperpath_instance(seed: u64, target_size3: bool) -> HyperpathInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=6u32);
    let m = rng.gen_range(3..=7usize);
    let s = Var::new(1);
    let t = Var::new(n);
    let mut clauses = Vec::with_capacity(m);
    for i in 0..m {
        let h = match i {
            0 => Var::new(rng.gen_range(2..=n)),
            1 => t,
            _ => Var::new(rng.gen_range(1..=n)),
        };
        let width = if target_size3 && h == t {
            3
        } else {
            rng.gen_range(2..=3)
        };
        let others: Vec<Var> = (1..=n).map(Var::new).filter(|&v| v != h).collect();
        let mut picked: Vec<Var> = index::sample(&mut rng, others.len(), width - 1)
            .into_iter()
            .map(|j| others[j])
            .collect();
        if i == 0 && !picked.contains(&s) {
            picked[0] = s;
        }
        let lits: Vec<Literal> = picked
            .iter()
            .map(|v| v.negative())
            .chain([h.positive()])
            .collect();
        clauses.push(lits);
    }
    let formula = build(clauses).expect("distinct variables per clause");
    let k = rng.gen_range(1..=4);
    HyperpathInstance::new(formula, s, t, k).expect("s and t occur")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horn::horn_consequences;

    fn f(clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_ints(clauses.iter().map(|c| c.iter().copied())).unwrap()
    }

    const S: i32 = 1;
    const A: i32 = 2;
    const B: i32 = 3;
    const T: i32 = 4;

    fn v(i: i32) -> Var {
        Var::new(i as u32)
    }

    #[test]
    fn definition_examples() {
        assert!(is_k_hyperpath(&f(&[]), v(S), v(S), 0).unwrap());
        let three = f(&[&[-S, A], &[-S, B], &[-A, -B, T]]);
        assert!(is_k_hyperpath(&three, v(S), v(T), 3).unwrap());
        assert!(!is_k_hyperpath(&three, v(S), v(T), 2).unwrap());
        assert!(!is_k_hyperpath(&f(&[&[-A, T]]), v(S), v(T), 1).unwrap());
        assert_eq!(shortest_hyperpath(&three, v(S), v(T), 5).unwrap(), Some(3));
        assert_eq!(shortest_hyperpath(&three, v(S), v(S), 5).unwrap(), Some(0));
        assert!(is_k_hyperpath(&f(&[&[1, 2, 3]]), v(1), v(2), 3).is_err());
    }

    #[test]
    fn cyclic_support_is_not_a_hyperpath() {
        let phi = f(&[&[-A, B], &[-B, A], &[-A, T]]);
        assert!(!is_k_hyperpath(&phi, v(S), v(T), 3).unwrap());
        assert_eq!(shortest_hyperpath(&phi, v(S), v(T), 3).unwrap(), None);
    }

    fn brute_shortest(phi: &CnfFormula, s: Var, t: Var, kmax: usize) -> Option<usize> {
        let ids = phi.ids();
        (0..=kmax.min(ids.len())).find(|&size| {
            ids.iter()
                .copied()
                .combinations(size)
                .any(|sub| is_k_hyperpath(&phi.subset(&sub), s, t, size).unwrap())
        })
    }

    #[test]
    fn shortest_matches_subset_enumeration() {
        for seed in 0..150 {
            let h = random_hyperpath_instance(seed, false);
            let got = shortest_hyperpath(&h.formula, h.s, h.t, 7).unwrap();
            assert_eq!(got, brute_shortest(&h.formula, h.s, h.t, 7), "seed {seed}");
            let with_s = hyperpath_to_defhorn(&h).0;
            let reach = horn_consequences(&with_s).unwrap().contains(&h.t);
            assert_eq!(got.is_some(), reach, "seed {seed}");
        }
    }

    #[test]
    fn triangle_gadget() {
        let g = ColoredGraph::new(3, vec![1, 2, 3], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let h = clique_to_hyperpath(&g, GadgetMode::WideClause).unwrap();
        assert_eq!(h.k, 7);
        assert_eq!(
            shortest_hyperpath(&h.formula, h.s, h.t, 10).unwrap(),
            Some(7)
        );
        let h3 = clique_to_hyperpath(&g, GadgetMode::ThreeCnf).unwrap();
        assert_eq!(h3.k, 10);
        let c = classify(&h3.formula);
        assert!(c.definite_horn && c.max_clause_width <= 3);
        assert_eq!(
            shortest_hyperpath(&h3.formula, h3.s, h3.t, 12).unwrap(),
            Some(10)
        );

        let edgeless = ColoredGraph::new(3, vec![1, 2, 3], []).unwrap();
        let h = clique_to_hyperpath(&edgeless, GadgetMode::WideClause).unwrap();
        assert_eq!(shortest_hyperpath(&h.formula, h.s, h.t, 7).unwrap(), None);
    }

    #[test]
    fn defhorn_gadget_has_one_unit() {
        let h =
            HyperpathInstance::new(f(&[&[-S, A], &[-S, B], &[-A, -B, T]]), v(S), v(T), 3).unwrap();
        let (psi, target, k) = hyperpath_to_defhorn(&h);
        assert_eq!(k, 4);
        assert_eq!(target, v(T));
        assert_eq!(psi.clauses().iter().filter(|c| c.is_unit()).count(), 1);
    }

    #[test]
    fn nuhorn_gadget_shape() {
        let h =
            HyperpathInstance::new(f(&[&[-S, A], &[-S, B], &[-A, -B, T]]), v(S), v(T), 3).unwrap();
        let (psi, target, k) = hyperpath_to_nuhorn(&h).unwrap();
        assert_eq!(psi.to_ints(), vec![vec![-1, 2], vec![-1, 3], vec![-2, -3]]);
        assert_eq!((target, k), (v(S).negative(), 3));
        let c = classify(&psi);
        assert!(c.nu_horn && !c.definite_horn);

        let bad = HyperpathInstance::new(f(&[&[-S, A], &[-A, T]]), v(S), v(T), 2).unwrap();
        assert!(hyperpath_to_nuhorn(&bad).is_err());
        let fixed = normalize_target_clauses(&bad).unwrap();
        assert_eq!(fixed.formula.to_ints(), vec![vec![-1, 2], vec![-1, -2, 4]]);
        assert!(hyperpath_to_nuhorn(&fixed).is_ok());
    }
}
