use std::path::PathBuf;

use backbone_core::generators::{
    clique_to_hyperpath, cycle_family, horn_chain, hyperpath_to_defhorn, hyperpath_to_nuhorn,
    normalize_target_clauses, planted_clique, random_formula, shortest_hyperpath, Family,
    GadgetMode, HyperpathInstance, InstanceMeta,
};
use backbone_core::{is_satisfiable, CnfFormula, VarNames};
use clap::Args;
use serde_json::json;

use crate::{write_instance, Failure};

#[derive(Args)]
pub struct GenerateArgs {
    /// cnf, 3cnf, krom, horn, definite-horn, nu-definite-horn, vo<d>, cycle,
    /// horn-chain, clique, hyperpath-defhorn or hyperpath-nuhorn.
    construction: String,
    /// Variables (random families), or the family size for cycle / horn-chain.
    #[arg(short, long, default_value_t = 10)]
    n: usize,
    /// Clauses (random families).
    #[arg(short, long, default_value_t = 20)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Colors of the planted clique.
    #[arg(short, long, default_value_t = 3)]
    k: usize,
    /// Vertices per color class.
    #[arg(long, default_value_t = 2)]
    per_color: usize,
    /// Probability of each noise edge between color classes.
    #[arg(long, default_value_t = 0.3)]
    noise: f64,
    /// Produce the no-instance (one planted clique edge removed).
    #[arg(long)]
    no: bool,
    /// Rewrite the wide target clause of the clique gadget into 3CNF.
    #[arg(long)]
    three_cnf: bool,
    /// DIMACS output path; the sidecar goes to `<path>.json`.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

pub fn run(a: &GenerateArgs) -> Result<(), Failure> {
    let (formula, names, meta) = build(a)?;
    write_instance(a.output.as_deref(), &formula, &names, &meta)
}

fn build(a: &GenerateArgs) -> Result<(CnfFormula, VarNames, InstanceMeta), Failure> {
    let meta = |params: serde_json::Value, planted: serde_json::Value| InstanceMeta {
        construction: a.construction.clone(),
        params,
        planted,
    };
    Ok(match a.construction.as_str() {
        "cycle" => {
            let n = a.n;
            let phi = cycle_family(n)?;
            let planted = json!({ "backbones": [-1], "order": n, "iterative_order": n });
            (phi, VarNames::default(), meta(json!({ "n": n }), planted))
        }
        "horn-chain" => {
            let n = a.n;
            let phi = horn_chain(n)?;
            let planted = json!({
                "backbones": (1..=n).collect::<Vec<_>>(),
                "orders": (1..=n).collect::<Vec<_>>(),
                "iterative_order": 1,
            });
            (phi, VarNames::default(), meta(json!({ "n": n }), planted))
        }
        "clique" | "hyperpath-defhorn" | "hyperpath-nuhorn" => {
            let mode = if a.three_cnf || a.construction == "hyperpath-nuhorn" {
                GadgetMode::ThreeCnf
            } else {
                GadgetMode::WideClause
            };
            let planted = planted_clique(a.k, a.per_color, a.noise, a.seed, !a.no)?;
            let mut h = clique_to_hyperpath(&planted.graph, mode)?;
            let params = json!({
                "k": a.k,
                "per_color": a.per_color,
                "noise": a.noise,
                "seed": a.seed,
                "three_cnf": mode == GadgetMode::ThreeCnf,
                "no_instance": a.no,
            });
            let clique = json!({ "has_clique": planted.has_clique, "clique": planted.clique });
            match a.construction.as_str() {
                "clique" => {
                    let answer = hyperpath_answer(&h)?;
                    let planted = json!({
                        "clique": clique,
                        "s": h.s, "t": h.t, "k_prime": h.k,
                        "has_k_hyperpath": planted.has_clique,
                        "shortest_hyperpath": answer,
                    });
                    (h.formula, h.names, meta(params, planted))
                }
                "hyperpath-defhorn" => {
                    let (psi, t, k) = hyperpath_to_defhorn(&h);
                    let planted = json!({
                        "clique": clique,
                        "target": t, "k": k,
                        "is_k_backbone": planted.has_clique,
                    });
                    (psi, h.names, meta(params, planted))
                }
                _ => {
                    h = normalize_target_clauses(&h)?;
                    let (psi, target, k) = hyperpath_to_nuhorn(&h)?;
                    let planted = json!({
                        "clique": clique,
                        "target": target, "k": k,
                        "is_k_backbone": planted.has_clique,
                    });
                    (psi, h.names, meta(params, planted))
                }
            }
        }
        other => {
            let family: Family = other.parse()?;
            let phi = random_formula(family, a.n, a.m, a.seed)?;
            let params =
                json!({ "family": family.to_string(), "n": a.n, "m": a.m, "seed": a.seed });
            let planted = json!({ "satisfiable": is_satisfiable(&phi) });
            (phi, VarNames::default(), meta(params, planted))
        }
    })
}

fn hyperpath_answer(h: &HyperpathInstance) -> Result<Option<usize>, Failure> {
    Ok(shortest_hyperpath(&h.formula, h.s, h.t, h.k)?)
}
