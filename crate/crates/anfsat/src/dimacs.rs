//! Strict DIMACS reader and writer for 3-CNF.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, Lit, Problem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("no `p cnf` header line")]
    MissingHeader,
    #[error("line {line}: malformed header, expected `p cnf <vars> <clauses>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: second header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: clause data before the header")]
    ClauseBeforeHeader { line: usize },
    #[error("line {line}: `{token}` is not an integer literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: clause has {len} literals, expected 3")]
    ClauseLength { line: usize, len: usize },
    #[error("line {line}: variable {var} repeated within the clause")]
    RepeatedVariable { line: usize, var: u32 },
    #[error("line {line}: variable {var} outside 1..={n}")]
    VariableOutOfRange { line: usize, var: u32, n: usize },
    #[error("line {line}: clause is not terminated by 0")]
    UnterminatedClause { line: usize },
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCount { declared: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsDocument {
    /// Comment lines without the leading `c`.
    pub comments: Vec<String>,
    pub problem: Problem,
}

pub fn parse_dimacs(text: &str) -> Result<DimacsDocument, DimacsError> {
    let mut comments = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut start_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                comments.push(rest.trim_start().to_string());
                continue;
            }
        }
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line });
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or(DimacsError::MalformedHeader { line })?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(DimacsError::ClauseBeforeHeader { line });
        };
        for tok in trimmed.split_whitespace() {
            let x: i32 = tok.parse().map_err(|_| DimacsError::BadToken {
                line,
                token: tok.to_string(),
            })?;
            if current.is_empty() {
                start_line = line;
            }
            if x != 0 {
                if x.unsigned_abs() as usize > n {
                    return Err(DimacsError::VariableOutOfRange {
                        line,
                        var: x.unsigned_abs(),
                        n,
                    });
                }
                current.push(x);
                continue;
            }
            clauses.push(finish_clause(&current, start_line)?);
            current.clear();
        }
    }
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause { line: start_line });
    }
    let (n, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if declared != clauses.len() {
        return Err(DimacsError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    let problem = Problem::new(n, clauses).expect("literals range-checked while reading");
    Ok(DimacsDocument { comments, problem })
}

fn finish_clause(lits: &[i32], line: usize) -> Result<Clause, DimacsError> {
    let [a, b, c] = lits else {
        return Err(DimacsError::ClauseLength {
            line,
            len: lits.len(),
        });
    };
    let ls = [*a, *b, *c].map(|x| Lit::from_dimacs(x).expect("non-zero"));
    Clause::new(ls).map_err(|_| {
        let var = if ls[0].var == ls[1].var || ls[0].var == ls[2].var {
            ls[0].var
        } else {
            ls[1].var
        };
        DimacsError::RepeatedVariable { line, var }
    })
}

/// Renders comments, header and one clause per line.
pub fn emit_dimacs(doc: &DimacsDocument) -> String {
    let mut s = String::new();
    for c in &doc.comments {
        if c.is_empty() {
            s.push_str("c\n");
        } else {
            let _ = writeln!(s, "c {c}");
        }
    }
    let p = &doc.problem;
    let _ = writeln!(s, "p cnf {} {}", p.n(), p.m());
    for c in p.clauses() {
        let _ = writeln!(s, "{c} 0");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_terminator() {
        let text = "c first\nc\np cnf 4 2\n1 -2 3 0\n-1\n 2 4 0\n%\n0\n";
        let doc = parse_dimacs(text).unwrap();
        assert_eq!(doc.comments, vec!["first".to_string(), String::new()]);
        assert_eq!(doc.problem.m(), 2);
        assert_eq!(doc.problem.clauses()[1].to_string(), "-1 2 4");
        let again = parse_dimacs(&emit_dimacs(&doc)).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn error_kinds_carry_lines() {
        assert_eq!(parse_dimacs("p cnf x 1\n"), Err(DimacsError::MalformedHeader { line: 1 }));
        assert_eq!(
            parse_dimacs("p cnf 3 1\n1 2 0\n"),
            Err(DimacsError::ClauseLength { line: 2, len: 2 })
        );
        assert_eq!(
            parse_dimacs("p cnf 3 1\nc hi\n1 -1 2 0\n"),
            Err(DimacsError::RepeatedVariable { line: 3, var: 1 })
        );
        assert_eq!(
            parse_dimacs("p cnf 3 1\n1 2 4 0\n"),
            Err(DimacsError::VariableOutOfRange { line: 2, var: 4, n: 3 })
        );
        assert_eq!(
            parse_dimacs("p cnf 3 1\n1 2 3\n"),
            Err(DimacsError::UnterminatedClause { line: 2 })
        );
        assert_eq!(parse_dimacs("1 2 3 0\n"), Err(DimacsError::ClauseBeforeHeader { line: 1 }));
        assert_eq!(parse_dimacs(""), Err(DimacsError::MissingHeader));
        assert_eq!(
            parse_dimacs("p cnf 3 2\n1 2 3 0\n"),
            Err(DimacsError::ClauseCount { declared: 2, found: 1 })
        );
        assert!(matches!(
            parse_dimacs("p cnf 3 1\n1 2 a 0\n"),
            Err(DimacsError::BadToken { line: 2, .. })
        ));
    }
}
