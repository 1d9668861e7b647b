//! DIMACS CNF reading and writing.
//!
//! Accepted input: `c` comment lines, one `p cnf <vars> <clauses>` header,
//! then whitespace-separated signed literals with each clause terminated by
//! `0`. Clauses may span lines. A lone `%` token ends the input (SATLIB
//! convention). Output is canonical: header, then one clause per line.

use std::fmt::Write;

use crate::csp::{Clause, CspInstance, Literal};
use crate::{Error, Result};

pub fn parse_dimacs(text: &str) -> Result<CspInstance> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    'lines: for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate problem line"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(Error::parse(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let n = fields[2]
                .parse::<usize>()
                .map_err(|_| Error::parse(line_no, "variable count is not a number"))?;
            let m = fields[3]
                .parse::<usize>()
                .map_err(|_| Error::parse(line_no, "clause count is not a number"))?;
            if n == 0 {
                return Err(Error::parse(
                    line_no,
                    "instance needs at least one variable",
                ));
            }
            header = Some((n, m, line_no));
            continue;
        }
        let Some((n, _, _)) = header else {
            return Err(Error::parse(line_no, "clause data before the problem line"));
        };
        for tok in line.split_whitespace() {
            if tok == "%" {
                break 'lines;
            }
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid literal {tok:?}")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::parse(line_no, "empty clause"));
                }
                clauses.push(Clause::ksat(std::mem::take(&mut current))?);
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > n {
                return Err(Error::parse(
                    line_no,
                    format!("literal {lit} out of range for {n} variables"),
                ));
            }
            current.push(Literal::new(var - 1, lit < 0));
        }
    }

    let Some((n, m, header_line)) = header else {
        return Err(Error::parse(last_line.max(1), "missing problem line"));
    };
    if !current.is_empty() {
        return Err(Error::parse(
            last_line,
            "last clause is not terminated by 0",
        ));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            header_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    CspInstance::uniform(n, 2, clauses)
}

/// Canonical DIMACS text for a k-SAT instance.
pub fn emit_dimacs(instance: &CspInstance) -> Result<String> {
    if !instance.is_ksat() || instance.domains().iter().any(|&d| d != 2) {
        return Err(Error::usage(
            "only binary k-SAT instances can be written as DIMACS",
        ));
    }
    let mut out = String::new();
    writeln!(
        out,
        "p cnf {} {}",
        instance.num_variables(),
        instance.num_clauses()
    )
    .unwrap();
    for c in instance.clauses() {
        for l in c.literals().expect("checked k-SAT") {
            let v = l.var as i64 + 1;
            write!(out, "{} ", if l.negated { -v } else { v }).unwrap();
        }
        out.push_str("0\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Assignment;

    #[test]
    fn parses_single_clause() {
        let inst = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(inst.num_variables(), 2);
        assert_eq!(inst.num_clauses(), 1);
        assert_eq!(
            inst.clause(0).literals().unwrap(),
            &[Literal::positive(0), Literal::negative(1)]
        );
        // x1 = F, x2 = T violates (x1 or not x2)
        assert!(!inst.is_solution(&Assignment(vec![1, 2])).unwrap());
    }

    #[test]
    fn literal_out_of_range() {
        let err = parse_dimacs("p cnf 1 1\n2 0").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("out of range"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comments_multiline_clauses_and_percent() {
        let text = "c hello\nc world\np cnf 3 2\n1 2\n -3 0 2\n0\n%\n0\n";
        let inst = parse_dimacs(text).unwrap();
        assert_eq!(emit_dimacs(&inst).unwrap(), "p cnf 3 2\n1 2 -3 0\n2 0\n");
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse_dimacs("p cnf 2 2\n1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p dnf 2 1\n1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 x 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_dimacs("c only\n"), Err(Error::Parse { .. })));
        assert!(parse_dimacs("p cnf 0 0\n").is_err());
    }

    #[test]
    fn emit_rejects_other_kinds() {
        let inst = CspInstance::uniform(2, 2, vec![Clause::not_equal(0, 1).unwrap()]).unwrap();
        assert!(emit_dimacs(&inst).is_err());
    }
}
