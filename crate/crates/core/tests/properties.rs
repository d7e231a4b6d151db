use std::collections::{BTreeMap, BTreeSet};

use backbone_core::generators::lift_sus_to_backbone;
use backbone_core::krom::ImplicationGraph;
use backbone_core::sat::{entails, SatResult};
use backbone_core::sus::sus_vo_search;
use backbone_core::*;
use proptest::prelude::*;

fn formula(
    max_vars: u32,
    max_clauses: usize,
    max_width: usize,
) -> impl Strategy<Value = CnfFormula> {
    prop::collection::vec(
        prop::collection::vec((1..=max_vars, any::<bool>()), 1..=max_width),
        0..=max_clauses,
    )
    .prop_map(|cs| {
        CnfFormula::from_ints(cs.into_iter().map(|c| {
            let mut first: BTreeMap<u32, bool> = BTreeMap::new();
            for (v, s) in c {
                first.entry(v).or_insert(s);
            }
            first
                .into_iter()
                .map(|(v, s)| if s { v as i32 } else { -(v as i32) })
                .collect::<Vec<_>>()
        }))
        .unwrap()
    })
}

fn literal() -> impl Strategy<Value = Literal> {
    (1..=6u32, any::<bool>()).prop_map(|(v, s)| Var::new(v).literal(s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dimacs_round_trip(phi in formula(8, 10, 4)) {
        let text = emit_dimacs(&phi);
        let parsed = parse_dimacs(&text).unwrap();
        prop_assert_eq!(parsed.formula.to_ints(), phi.to_ints());
        prop_assert_eq!(emit_dimacs(&parsed.formula), text);
    }

    #[test]
    fn reduct_drops_instantiated_vars(phi in formula(6, 8, 3), l in literal()) {
        let r = phi.reduct_lit(l);
        let allowed: BTreeSet<Var> = phi.vars().into_iter().filter(|&v| v != l.var()).collect();
        prop_assert!(r.vars().is_subset(&allowed));
    }

    #[test]
    fn reduct_keeps_class(phi in formula(6, 8, 3), l in literal()) {
        let before = classify(&phi);
        let after = classify(&phi.reduct_lit(l));
        prop_assert!(!before.horn || after.horn);
        prop_assert!(!before.krom || after.krom);
        prop_assert!(after.max_occurrence <= before.max_occurrence);
    }

    #[test]
    fn solve_matches_truth_table(phi in formula(7, 10, 3)) {
        let expected = oracle::satisfiable(&phi).unwrap();
        match solve(&phi) {
            SatResult::Sat(m) => {
                prop_assert!(expected);
                prop_assert_eq!(m.satisfies(&phi), Some(true));
            }
            SatResult::Unsat => prop_assert!(!expected),
        }
    }

    #[test]
    fn entailment_matches_models(phi in formula(5, 8, 3), l in literal()) {
        prop_assert_eq!(entails(&phi, l), oracle::entails(&phi, l).unwrap());
    }

    #[test]
    fn unit_propagation_is_idempotent(phi in formula(6, 8, 3)) {
        let up = unit_propagate(&phi);
        if !up.conflict {
            let again = unit_propagate(&up.residual);
            prop_assert!(again.forced.is_empty());
            prop_assert_eq!(again.residual, up.residual);
        }
    }

    #[test]
    fn sus_verdicts_agree(phi in formula(6, 8, 3), k in 1usize..=5) {
        let brute = sus_bruteforce(&phi, k).is_some();
        prop_assert_eq!(sus_search(&phi, k).is_some(), brute);
        let d = classify(&phi).max_occurrence;
        prop_assert_eq!(sus_vo_search(&phi, k, d).unwrap().is_some(), brute);
    }

    #[test]
    fn sus_witnesses_are_monotone_and_tarsi(phi in formula(6, 8, 3), k in 1usize..=5) {
        if let Some(w) = sus_search(&phi, k) {
            prop_assert!(w.len() <= k);
            for bigger in k..=k + 2 {
                prop_assert!(sus_search(&phi, bigger).is_some());
            }
            let m = minimize_witness(&phi, &w).unwrap();
            prop_assert!(m.satisfies_tarsi(&phi));
            prop_assert!(!oracle::satisfiable(&m.subformula(&phi)).unwrap());
        }
        if let Some(w) = sus_search_min(&phi, k) {
            prop_assert_eq!(Some(w.len()), oracle::min_unsat_subset(&phi, k).unwrap());
            prop_assert!(w.satisfies_tarsi(&phi));
        }
    }

    #[test]
    fn lift_has_no_negative_z(phi in formula(6, 8, 3)) {
        let (lifted, z) = lift_sus_to_backbone(&phi);
        prop_assert!(lifted.clauses().iter().all(|c| c.contains(z.positive())));
        prop_assert!(!lifted.clauses().iter().any(|c| c.contains(z.negative())));
    }

    #[test]
    fn containment_chain(phi in formula(6, 7, 3)) {
        let Ok(full) = full_backbones(&phi) else { return Ok(()); };
        let full: BTreeSet<Literal> = full.into_iter().collect();
        let mut prev_local = BTreeSet::new();
        let mut prev_iter = BTreeSet::new();
        for k in 1..=4 {
            let local: BTreeSet<Literal> = local_backbones(&phi, k).into_iter().collect();
            let iter = iterative_k_backbones(&phi, k).unwrap().forced_set();
            prop_assert!(local.is_subset(&iter), "k = {}", k);
            prop_assert!(iter.is_subset(&full), "k = {}", k);
            prop_assert!(prev_local.is_subset(&local));
            prop_assert!(prev_iter.is_subset(&iter));
            prev_local = local;
            prev_iter = iter;
        }
        let all: BTreeSet<Literal> = local_backbones(&phi, phi.len()).into_iter().collect();
        prop_assert_eq!(all, full);
    }

    #[test]
    fn reduct_by_forced_literals_keeps_iterative_set(phi in formula(6, 7, 3), k in 1usize..=3) {
        let Ok(base) = iterative_k_backbones(&phi, k) else { return Ok(()); };
        for l in local_backbones(&phi, k) {
            let mut expected = base.vars.clone();
            expected.remove(&l.var());
            let reduced = iterative_k_backbones(&phi.reduct_lit(l), k).unwrap();
            prop_assert_eq!(reduced.vars, expected, "l = {}", l);
        }
    }

    #[test]
    fn uc_contains_iterative_and_is_sound(phi in formula(6, 7, 3)) {
        if !oracle::satisfiable(&phi).unwrap() {
            return Ok(());
        }
        for k in 1..=3 {
            let uc = uc_forced(&phi, k);
            for &l in &uc {
                prop_assert!(entails(&phi, l));
            }
            let iter = iterative_k_backbones(&phi, k).unwrap().forced_set();
            prop_assert!(iter.is_subset(&uc), "k = {}", k);
        }
        prop_assert_eq!(uc_forced(&phi, 1), unit_propagate(&phi).forced_set());
    }

    #[test]
    fn implication_graph_skew_symmetric(phi in formula(6, 8, 2)) {
        let g = ImplicationGraph::new(&phi).unwrap();
        let edges: BTreeSet<(Literal, Literal)> = g.edges().map(|(u, w, _)| (u, w)).collect();
        for &(u, w) in &edges {
            prop_assert!(edges.contains(&(!w, !u)));
        }
    }

    #[test]
    fn order_bounds_local_membership(phi in formula(5, 6, 3)) {
        if !oracle::satisfiable(&phi).unwrap() {
            return Ok(());
        }
        for x in phi.vars() {
            let order = backbone_order(&phi, x, 6).unwrap();
            prop_assert_eq!(order, oracle::backbone_order(&phi, x, 6).unwrap());
            let iter = iterative_order(&phi, x, 6).unwrap();
            if let Some(o) = order.exact() {
                prop_assert!(iter.is_at_most(o));
            }
        }
    }
}
