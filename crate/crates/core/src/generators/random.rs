use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, ClauseId, CnfFormula, Literal, Var};
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 1000;

/// Random formula families. Every family guarantees its class by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Clause widths uniform in 1..=3, random signs.
    Cnf,
    /// Exactly three distinct variables per clause.
    ThreeCnf,
    /// Widths 1 (one clause in five) or 2.
    Krom,
    /// Widths 1..=3, at most one positive literal.
    Horn,
    /// Exactly one positive literal; units one clause in five, else width 2..=3.
    DefiniteHorn,
    /// Definite Horn without unit clauses.
    NuDefiniteHorn,
    /// Widths 1..=3, each variable used in at most `d` clauses.
    Vo(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cnf => write!(f, "cnf"),
            Family::ThreeCnf => write!(f, "3cnf"),
            Family::Krom => write!(f, "krom"),
            Family::Horn => write!(f, "horn"),
            Family::DefiniteHorn => write!(f, "definite-horn"),
            Family::NuDefiniteHorn => write!(f, "nu-definite-horn"),
            Family::Vo(d) => write!(f, "vo{d}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Ok(match s {
            "cnf" => Family::Cnf,
            "3cnf" => Family::ThreeCnf,
            "krom" => Family::Krom,
            "horn" => Family::Horn,
            "definite-horn" | "definite_horn" => Family::DefiniteHorn,
            "nu-definite-horn" => Family::NuDefiniteHorn,
            other => match other.strip_prefix("vo").map(str::parse) {
                Some(Ok(d)) => Family::Vo(d),
                _ => return Err(Error::InvalidParameter(format!("unknown family `{s}`"))),
            },
        })
    }
}

/// `m` distinct clauses over variables `1..=n`, reproducible from `seed`.
pub fn random_formula(family: Family, n: usize, m: usize, seed: u64) -> Result<CnfFormula> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("n and m must be at least 1".into()));
    }
    match family {
        Family::ThreeCnf if n < 3 => {
            return Err(Error::InvalidParameter("3cnf needs n >= 3".into()));
        }
        Family::NuDefiniteHorn if n < 2 => {
            return Err(Error::InvalidParameter(
                "nu-definite-horn needs n >= 2".into(),
            ));
        }
        Family::Vo(d) if m * 3 > n * d => {
            return Err(Error::InvalidParameter(format!(
                "vo{d} with m = {m}, n = {n}: m * 3 exceeds n * d"
            )));
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<Literal>> = HashSet::new();
    let mut capacity = match family {
        Family::Vo(d) => vec![d; n + 1],
        _ => Vec::new(),
    };
    let mut clauses = Vec::with_capacity(m);
    for id in 0..m {
        let mut attempts = 0;
        let lits = loop {
            attempts += 1;
            if attempts > MAX_ATTEMPTS {
                return Err(Error::InvalidParameter(format!(
                    "could not draw {m} distinct {family} clauses over {n} variables"
                )));
            }
            let lits = draw_clause(family, n, &capacity, &mut rng);
            if !lits.is_empty() && !seen.contains(&lits) {
                break lits;
            }
        };
        seen.insert(lits.clone());
        for l in &lits {
            if let Some(c) = capacity.get_mut(l.var().index() as usize) {
                *c -= 1;
            }
        }
        clauses.push(Clause::new(ClauseId(id as u32), lits).expect("distinct variables"));
    }
    CnfFormula::new(clauses)
}

fn draw_clause(family: Family, n: usize, capacity: &[usize], rng: &mut ChaCha8Rng) -> Vec<Literal> {
    let width = match family {
        Family::Cnf | Family::Horn | Family::Vo(_) => rng.gen_range(1..=3),
        Family::ThreeCnf => 3,
        Family::Krom => {
            if rng.gen_bool(0.2) {
                1
            } else {
                2
            }
        }
        Family::DefiniteHorn => {
            if rng.gen_bool(0.2) {
                1
            } else {
                rng.gen_range(2..=3)
            }
        }
        Family::NuDefiniteHorn => rng.gen_range(2..=3),
    };
    let pool: Vec<usize> = match family {
        Family::Vo(_) => (1..=n).filter(|&v| capacity[v] > 0).collect(),
        _ => (1..=n).collect(),
    };
    let width = width.min(pool.len());
    let vars: Vec<Var> = index::sample(rng, pool.len(), width)
        .into_iter()
        .map(|i| Var::new(pool[i] as u32))
        .collect();
    let positive_at = match family {
        Family::Horn => rng.gen_bool(0.5).then(|| rng.gen_range(0..width.max(1))),
        Family::DefiniteHorn | Family::NuDefiniteHorn => Some(rng.gen_range(0..width.max(1))),
        _ => None,
    };
    let mut lits: Vec<Literal> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let positive = match family {
                Family::Horn | Family::DefiniteHorn | Family::NuDefiniteHorn => {
                    positive_at == Some(i)
                }
                _ => rng.gen_bool(0.5),
            };
            v.literal(positive)
        })
        .collect();
    lits.sort_unstable();
    lits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    #[test]
    fn same_seed_same_formula() {
        for family in [Family::Cnf, Family::Krom, Family::Horn, Family::Vo(3)] {
            let a = random_formula(family, 8, 8, 42).unwrap();
            let b = random_formula(family, 8, 8, 42).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.len(), 8);
        }
        assert_ne!(
            random_formula(Family::ThreeCnf, 10, 10, 1).unwrap(),
            random_formula(Family::ThreeCnf, 10, 10, 2).unwrap()
        );
    }

    #[test]
    fn families_hold_their_class() {
        for seed in 0..50 {
            let c = classify(&random_formula(Family::Krom, 10, 12, seed).unwrap());
            assert!(c.krom);
            let c = classify(&random_formula(Family::Horn, 10, 12, seed).unwrap());
            assert!(c.horn);
            let c = classify(&random_formula(Family::DefiniteHorn, 10, 12, seed).unwrap());
            assert!(c.definite_horn);
            let c = classify(&random_formula(Family::NuDefiniteHorn, 10, 12, seed).unwrap());
            assert!(c.definite_horn && c.nu_horn);
            let c = classify(&random_formula(Family::ThreeCnf, 10, 12, seed).unwrap());
            assert_eq!(c.max_clause_width, 3);
            let c = classify(&random_formula(Family::Vo(3), 10, 10, seed).unwrap());
            assert!(c.is_vo(3));
        }
    }

    #[test]
    fn infeasible_parameters() {
        assert!(random_formula(Family::Vo(1), 3, 2, 0).is_err());
        assert!(random_formula(Family::Krom, 1, 5, 0).is_err());
        assert!(random_formula(Family::ThreeCnf, 2, 1, 0).is_err());
    }

    #[test]
    fn parse_family_names() {
        assert_eq!("vo3".parse::<Family>().unwrap(), Family::Vo(3));
        assert_eq!("3cnf".parse::<Family>().unwrap(), Family::ThreeCnf);
        assert!("x".parse::<Family>().is_err());
    }
}
