//! Order distributions: for every backbone of a satisfiable formula, its
//! exact order and iterative order up to a cutoff, plus the cumulative
//! share of backbones with (iterative) order at most `k`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::backbone::{backbone_order_witness, iterative_orders, Order};
use crate::cnf::{ClauseId, CnfFormula, Var, VarNames};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::sat::full_backbones_with;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub k: usize,
    pub pct_order_leq_k: f64,
    pub pct_iter_leq_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackboneRecord {
    pub variable: Var,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// `"+"` or `"-"`.
    pub polarity: &'static str,
    pub order: Order,
    pub iterative_order: Order,
    /// Clause ids of a smallest entailing subset, when the order is within the cutoff.
    pub witness: Option<Vec<ClauseId>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderDistributionReport {
    pub schema_version: u32,
    pub instance: String,
    pub n_vars: usize,
    pub n_clauses: usize,
    pub backbone_count: usize,
    pub kmax: usize,
    /// One point per `k` in `1..=kmax`; empty when there are no backbones.
    pub curve: Vec<CurvePoint>,
    pub records: Vec<BackboneRecord>,
}

impl OrderDistributionReport {
    pub fn build(instance: &str, formula: &CnfFormula, kmax: usize, exec: Exec) -> Result<Self> {
        Self::build_named(instance, formula, &VarNames::default(), kmax, exec)
    }

    pub fn build_named(
        instance: &str,
        formula: &CnfFormula,
        names: &VarNames,
        kmax: usize,
        exec: Exec,
    ) -> Result<Self> {
        if kmax < 1 {
            return Err(Error::InvalidParameter("kmax must be at least 1".into()));
        }
        let backbones = full_backbones_with(formula, exec)?;
        let vars: Vec<Var> = backbones.iter().map(|l| l.var()).collect();
        let orders = exec.map(&vars, |&v| backbone_order_witness(formula, v, kmax));
        let iter = iterative_orders(formula, &vars, kmax, exec)?;
        let mut records = Vec::with_capacity(backbones.len());
        for (lit, found) in backbones.iter().zip(orders) {
            let (order, local) = found?;
            records.push(BackboneRecord {
                variable: lit.var(),
                name: names.get(lit.var()).map(str::to_owned),
                polarity: if lit.is_positive() { "+" } else { "-" },
                order,
                iterative_order: iter[&lit.var()],
                witness: local.witness.map(|w| w.clause_ids),
            });
        }
        let total = records.len();
        let pct = |count: usize| 100.0 * count as f64 / total as f64;
        let curve = if total == 0 {
            Vec::new()
        } else {
            (1..=kmax)
                .map(|k| CurvePoint {
                    k,
                    pct_order_leq_k: pct(records.iter().filter(|r| r.order.is_at_most(k)).count()),
                    pct_iter_leq_k: pct(records
                        .iter()
                        .filter(|r| r.iterative_order.is_at_most(k))
                        .count()),
                })
                .collect()
        };
        Ok(OrderDistributionReport {
            schema_version: SCHEMA_VERSION,
            instance: instance.to_owned(),
            n_vars: formula.vars().len(),
            n_clauses: formula.len(),
            backbone_count: total,
            kmax,
            curve,
            records,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,pct_order_leq_k,pct_iter_leq_k\n");
        for p in &self.curve {
            writeln!(
                out,
                "{},{:.4},{:.4}",
                p.k, p.pct_order_leq_k, p.pct_iter_leq_k
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_ints(clauses.iter().map(|c| c.iter().copied())).unwrap()
    }

    #[test]
    fn two_backbones() {
        let r = OrderDistributionReport::build("chain", &f(&[&[1], &[-1, 2]]), 3, Exec::Sequential)
            .unwrap();
        assert_eq!(r.backbone_count, 2);
        assert_eq!(r.curve[0].pct_iter_leq_k, 100.0);
        assert_eq!(r.curve[0].pct_order_leq_k, 50.0);
        assert_eq!(r.curve[1].pct_order_leq_k, 100.0);
        assert!(r
            .to_csv()
            .starts_with("k,pct_order_leq_k,pct_iter_leq_k\n1,50.0000,100.0000\n"));
    }

    #[test]
    fn no_backbones_and_errors() {
        let r =
            OrderDistributionReport::build("free", &f(&[&[1, 2]]), 4, Exec::Sequential).unwrap();
        assert_eq!(r.backbone_count, 0);
        assert!(r.curve.is_empty());
        assert_eq!(r.to_csv(), "k,pct_order_leq_k,pct_iter_leq_k\n");
        assert_eq!(
            OrderDistributionReport::build("u", &f(&[&[1], &[-1]]), 4, Exec::Sequential),
            Err(Error::UnsatInput)
        );
        assert!(OrderDistributionReport::build("k", &f(&[&[1]]), 0, Exec::Sequential).is_err());
    }
}
