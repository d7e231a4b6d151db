//! DIMACS CNF reading and writing.
//!
//! Variable names may be attached with comment lines of the form
//! `c var <index> <name>`; they are read into a [`VarNames`] side table and
//! written back by [`emit_dimacs_named`].

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, ClauseId, CnfFormula, Literal, Var, VarNames};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: malformed header: {detail}")]
    MalformedHeader { line: usize, detail: String },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal index 0 inside a clause (`{token}`)")]
    ZeroLiteral { line: usize, token: String },
    #[error("line {line}: tautological clause contains {var} and -{var}")]
    Tautology { line: usize, var: u32 },
    #[error("line {line}: unterminated clause at end of input")]
    UnterminatedClause { line: usize },
    #[error("no `p cnf` header found")]
    NoHeader,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Drop tautological clauses with a diagnostic instead of failing.
    pub lenient_tautologies: bool,
}

/// A non-fatal observation made while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDimacs {
    pub formula: CnfFormula,
    pub declared_vars: u32,
    pub declared_clauses: usize,
    pub names: VarNames,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn parse_dimacs(text: &str) -> Result<ParsedDimacs, DimacsError> {
    parse_dimacs_with(text, ParseOptions::default())
}

pub fn parse_dimacs_with(text: &str, opts: ParseOptions) -> Result<ParsedDimacs, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut names = VarNames::default();
    let mut diagnostics = Vec::new();
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut clause_line = 0;
    let mut raw_count = 0usize;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                read_name(rest, &mut names);
                continue;
            }
        }
        if trimmed.starts_with('%') {
            // SATLIB trailer
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader {
                    line,
                    detail: "duplicate header".into(),
                });
            }
            header = Some(read_header(trimmed, line)?);
            continue;
        }
        let Some((declared_vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line });
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line,
                token: token.to_string(),
            })?;
            if value == 0 {
                if token.starts_with('-') {
                    return Err(DimacsError::ZeroLiteral {
                        line,
                        token: token.to_string(),
                    });
                }
                raw_count += 1;
                let lits = std::mem::take(&mut current);
                match Clause::new(ClauseId(raw_count as u32 - 1), lits) {
                    Ok(c) => clauses.push(c),
                    Err(crate::Error::Tautology(l)) => {
                        if opts.lenient_tautologies {
                            diagnostics.push(Diagnostic {
                                line: clause_line,
                                message: format!(
                                    "dropped tautological clause on variable {}",
                                    l.var()
                                ),
                            });
                        } else {
                            return Err(DimacsError::Tautology {
                                line: clause_line,
                                var: l.var().index(),
                            });
                        }
                    }
                    Err(e) => unreachable!("clause construction: {e}"),
                }
                continue;
            }
            if value.unsigned_abs() > i32::MAX as u64 {
                return Err(DimacsError::InvalidToken {
                    line,
                    token: token.to_string(),
                });
            }
            if current.is_empty() {
                clause_line = line;
            }
            let lit = Literal::from_dimacs(value as i32).expect("nonzero");
            if lit.var().index() > declared_vars {
                diagnostics.push(Diagnostic {
                    line,
                    message: format!(
                        "variable {} exceeds declared count {}",
                        lit.var(),
                        declared_vars
                    ),
                });
            }
            current.push(lit);
        }
    }

    let Some((declared_vars, declared_clauses)) = header else {
        return Err(DimacsError::NoHeader);
    };
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause { line: last_line });
    }
    if raw_count != declared_clauses {
        diagnostics.push(Diagnostic {
            line: 0,
            message: format!("header declares {declared_clauses} clauses, found {raw_count}"),
        });
    }
    let formula = CnfFormula::new(clauses).expect("ids are unique by construction");
    Ok(ParsedDimacs {
        formula,
        declared_vars,
        declared_clauses,
        names,
        diagnostics,
    })
}

fn read_header(text: &str, line: usize) -> Result<(u32, usize), DimacsError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let bad = |detail: &str| DimacsError::MalformedHeader {
        line,
        detail: detail.to_string(),
    };
    if parts.len() != 4 || parts[0] != "p" {
        return Err(bad("expected `p cnf <vars> <clauses>`"));
    }
    if parts[1] != "cnf" {
        return Err(bad("only the `cnf` format is supported"));
    }
    let vars = parts[2]
        .parse()
        .map_err(|_| bad("variable count is not a non-negative integer"))?;
    let clauses = parts[3]
        .parse()
        .map_err(|_| bad("clause count is not a non-negative integer"))?;
    Ok((vars, clauses))
}

fn read_name(rest: &str, names: &mut VarNames) {
    let mut it = rest.split_whitespace();
    if it.next() != Some("var") {
        return;
    }
    let (Some(idx), Some(name)) = (it.next(), it.next()) else {
        return;
    };
    if let Some(var) = idx.parse().ok().and_then(Var::try_new) {
        names.insert(var, name);
    }
}

/// Writes `p cnf <max var> <clauses>` followed by one line per clause.
pub fn emit_dimacs(formula: &CnfFormula) -> String {
    emit_dimacs_named(formula, &VarNames::default())
}

pub fn emit_dimacs_named(formula: &CnfFormula, names: &VarNames) -> String {
    let mut out = String::new();
    for (var, name) in &names.0 {
        writeln!(out, "c var {var} {name}").unwrap();
    }
    writeln!(out, "p cnf {} {}", formula.max_var(), formula.len()).unwrap();
    for c in formula.clauses() {
        for l in c.literals() {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    #[test]
    fn single_unit_clause() {
        let p = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        assert_eq!(p.formula.to_ints(), vec![vec![1]]);
        assert!(p.diagnostics.is_empty());
    }

    #[test]
    fn two_binary_clauses_are_krom() {
        let p = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0").unwrap();
        assert_eq!(p.formula.to_ints(), vec![vec![1, 2], vec![-1, -2]]);
        assert!(classify(&p.formula).krom);
    }

    #[test]
    fn tautology_strict_and_lenient() {
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n1 -1 0"),
            Err(DimacsError::Tautology { line: 2, var: 1 })
        ));
        let p = parse_dimacs_with(
            "p cnf 2 2\n1 -1 0\n2 0\n",
            ParseOptions {
                lenient_tautologies: true,
            },
        )
        .unwrap();
        assert_eq!(p.formula.to_ints(), vec![vec![2]]);
        assert_eq!(p.diagnostics.len(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_dimacs("p cnf x 1\n"),
            Err(DimacsError::MalformedHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs("p dnf 1 1\n"),
            Err(DimacsError::MalformedHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs("1 0\n"),
            Err(DimacsError::MissingHeader { line: 1 })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n1 -0 0\n"),
            Err(DimacsError::ZeroLiteral { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(DimacsError::UnterminatedClause { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 a 0\n"),
            Err(DimacsError::InvalidToken { .. })
        ));
        assert!(matches!(
            parse_dimacs("c nothing\n"),
            Err(DimacsError::NoHeader)
        ));
    }

    #[test]
    fn out_of_range_variable_is_a_diagnostic() {
        let p = parse_dimacs("p cnf 1 1\n1 3 0\n").unwrap();
        assert_eq!(p.formula.to_ints(), vec![vec![1, 3]]);
        assert_eq!(p.diagnostics.len(), 1);
    }

    #[test]
    fn multiline_clauses_comments_and_trailer() {
        let text = "c hello\np cnf 3 2\n1 2\n 3 0 -1\n0\n%\n0\n";
        let p = parse_dimacs(text).unwrap();
        assert_eq!(p.formula.to_ints(), vec![vec![1, 2, 3], vec![-1]]);
    }

    #[test]
    fn emit_examples() {
        let phi = CnfFormula::from_ints([[1]]).unwrap();
        assert_eq!(emit_dimacs(&phi), "p cnf 1 1\n1 0\n");
        assert_eq!(emit_dimacs(&CnfFormula::default()), "p cnf 0 0\n");
    }

    #[test]
    fn names_roundtrip() {
        let phi = CnfFormula::from_ints([vec![-1, 2]]).unwrap();
        let mut names = VarNames::default();
        names.insert(Var::new(1), "s");
        names.insert(Var::new(2), "t");
        let text = emit_dimacs_named(&phi, &names);
        let p = parse_dimacs(&text).unwrap();
        assert_eq!(p.names, names);
        assert_eq!(p.formula, phi);
    }
}
