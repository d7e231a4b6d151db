//! Krom (2-CNF) formulas: implication graphs, short complementary paths,
//! and the polynomial iterative-backbone fixpoint.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::classify::classify;
use crate::cnf::{ClauseId, CnfFormula, Literal, Var};
use crate::error::{Error, Result};

/// Edges `¬a → b` and `¬b → a` for every clause `{a, b}`; a unit clause
/// `{a}` gives the single edge `¬a → a`. Each edge carries its clause id.
#[derive(Debug, Clone)]
pub struct ImplicationGraph {
    succ: Vec<Vec<(Literal, ClauseId)>>,
    vars: BTreeSet<Var>,
}

impl ImplicationGraph {
    pub fn new(formula: &CnfFormula) -> Result<ImplicationGraph> {
        if !classify(formula).krom {
            return Err(Error::ClassViolation("Krom"));
        }
        let mut succ = vec![Vec::new(); 2 * (formula.max_var() as usize + 1)];
        for c in formula.clauses() {
            match *c.literals() {
                [a] => succ[(!a).code()].push((a, c.id())),
                [a, b] => {
                    succ[(!a).code()].push((b, c.id()));
                    succ[(!b).code()].push((a, c.id()));
                }
                _ => {}
            }
        }
        Ok(ImplicationGraph {
            succ,
            vars: formula.vars(),
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = (Literal, Literal, ClauseId)> + '_ {
        self.vars.iter().flat_map(move |&v| {
            [v.positive(), v.negative()]
                .into_iter()
                .flat_map(move |u| self.successors(u).iter().map(move |&(w, id)| (u, w, id)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, lit: Literal) -> &[(Literal, ClauseId)] {
        self.succ.get(lit.code()).map_or(&[], Vec::as_slice)
    }

    /// Edge count of a shortest path `from →* to` with at least one edge,
    /// if one of at most `limit` edges exists.
    pub fn shortest_path(&self, from: Literal, to: Literal, limit: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.succ.len()];
        let mut queue = VecDeque::new();
        for &(w, _) in self.successors(from) {
            if w == to {
                return (limit >= 1).then_some(1);
            }
            if dist[w.code()] == usize::MAX {
                dist[w.code()] = 1;
                queue.push_back(w);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u.code()];
            if d >= limit {
                break;
            }
            for &(w, _) in self.successors(u) {
                if w == to {
                    return Some(d + 1);
                }
                if dist[w.code()] == usize::MAX {
                    dist[w.code()] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Graphviz text, one edge per line labelled with its clause id.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph implication {\n");
        for (u, w, id) in self.edges() {
            writeln!(out, "  \"{u}\" -> \"{w}\" [label=\"c{id}\"];").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KromIterative {
    pub forced: Vec<Literal>,
    pub vars: BTreeSet<Var>,
}

/// Fixpoint of: if `Impl(ψ)` has a path `l →* ¬l` of at most `k` edges,
/// force `¬l` and set `ψ := ψ|_¬l`. Literals are tried in order, lowest
/// variable first, positive polarity first.
pub fn krom_iterative_backbones(formula: &CnfFormula, k: usize) -> Result<KromIterative> {
    if !classify(formula).krom {
        return Err(Error::ClassViolation("Krom"));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut psi = formula.clone();
    let mut forced = Vec::new();
    'fire: loop {
        if psi.has_empty_clause() {
            return Err(Error::UnsatDetected);
        }
        let graph = ImplicationGraph::new(&psi)?;
        for l in psi.lits() {
            if graph.shortest_path(l, !l, k).is_some() {
                forced.push(!l);
                psi = psi.reduct_lit(!l);
                continue 'fire;
            }
        }
        break;
    }
    let vars = forced.iter().map(|l| l.var()).collect();
    Ok(KromIterative { forced, vars })
}

/// Upper bound on the backbone order of `x`: the fewest edges on a path
/// `¬l →* l` for `l ∈ {x, ¬x}`.
pub fn krom_order_upper_bound(formula: &CnfFormula, x: Var) -> Result<Option<usize>> {
    let graph = ImplicationGraph::new(formula)?;
    let limit = graph.edge_count();
    Ok([x.positive(), x.negative()]
        .into_iter()
        .filter_map(|l| graph.shortest_path(!l, l, limit))
        .min())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_ints(clauses.iter().map(|c| c.iter().copied())).unwrap()
    }

    fn lit(v: i32) -> Literal {
        Literal::from_dimacs(v).unwrap()
    }

    #[test]
    fn graph_is_skew_symmetric() {
        let phi = f(&[&[1, 2], &[-2, 3], &[-1], &[3, -4]]);
        let g = ImplicationGraph::new(&phi).unwrap();
        let edges: BTreeSet<(Literal, Literal)> = g.edges().map(|(u, w, _)| (u, w)).collect();
        for &(u, w) in &edges {
            assert!(edges.contains(&(!w, !u)));
        }
        assert!(g.edge_count() <= 2 * phi.len());
        assert!(g.to_dot().contains("\"1\" -> \"-1\" [label=\"c2\"]"));
    }

    #[test]
    fn rejects_wide_clauses() {
        assert!(ImplicationGraph::new(&f(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn two_edge_path_forces() {
        let phi = f(&[&[1, 2], &[1, -2]]);
        let r = krom_iterative_backbones(&phi, 2).unwrap();
        assert_eq!(r.forced, vec![lit(1)]);
        assert!(krom_iterative_backbones(&phi, 1).unwrap().forced.is_empty());
        assert!(krom_iterative_backbones(&f(&[&[1, 2]]), 5)
            .unwrap()
            .forced
            .is_empty());
    }

    #[test]
    fn order_upper_bound() {
        assert_eq!(
            krom_order_upper_bound(&f(&[&[1, 2], &[1, -2]]), Var::new(1)).unwrap(),
            Some(2)
        );
        assert_eq!(
            krom_order_upper_bound(&f(&[&[1, 2]]), Var::new(1)).unwrap(),
            None
        );
        assert_eq!(
            krom_order_upper_bound(&f(&[&[1]]), Var::new(1)).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn contradiction_is_reported() {
        assert_eq!(
            krom_iterative_backbones(&f(&[&[1], &[-1]]), 1),
            Err(Error::UnsatDetected)
        );
    }
}
