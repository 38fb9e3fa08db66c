use super::IoError;
use crate::reduction::{Clause, CnfFormula, Lit};

fn err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Dimacs {
        line,
        message: message.into(),
    }
}

/// Parses a DIMACS CNF file in which every clause has exactly three
/// literals. Clauses may span lines; repeated literals are allowed.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, IoError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        last_line = line_no;
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate problem line"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            let (vars, count) =
                parsed.ok_or_else(|| err(line_no, "expected `p cnf <variables> <clauses>`"))?;
            header = Some((vars, count, line_no));
            continue;
        }
        let (vars, _, _) = header.ok_or_else(|| err(line_no, "clause before the problem line"))?;
        for token in line.split_whitespace() {
            let v: i64 = token
                .parse()
                .map_err(|_| err(line_no, format!("`{token}` is not an integer literal")))?;
            if v == 0 {
                let n = clauses.len() + 1;
                let lits: Clause = pending.as_slice().try_into().map_err(|_| {
                    err(line_no, format!("clause {n} has {} literals", pending.len()))
                })?;
                clauses.push(lits);
                pending.clear();
                continue;
            }
            if v.unsigned_abs() as usize > vars {
                return Err(err(
                    line_no,
                    format!("literal {v} exceeds the declared {vars} variables"),
                ));
            }
            pending.push(Lit::from_dimacs(v).expect("non-zero"));
        }
    }

    let (vars, count, header_line) = header.ok_or_else(|| err(last_line.max(1), "missing problem line"))?;
    if !pending.is_empty() {
        return Err(err(
            last_line,
            format!("clause {} is not terminated by 0", clauses.len() + 1),
        ));
    }
    if clauses.len() != count {
        return Err(err(
            header_line,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(CnfFormula::new(vars, clauses)?)
}

/// Writes a formula in DIMACS CNF.
pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars, formula.clauses.len());
    for clause in &formula.clauses {
        for lit in clause {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Parses a truth assignment: signed variable numbers, optionally in the
/// `v … 0` lines of a SAT-solver model. Every variable must appear once.
pub fn parse_assignment(text: &str, num_vars: usize) -> Result<Vec<bool>, IoError> {
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('s') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('v') {
            line = rest;
        }
        for token in line.split_whitespace() {
            let v: i64 = token.parse().map_err(|_| IoError::Assignment {
                line: line_no,
                message: format!("`{token}` is not an integer literal"),
            })?;
            if v == 0 {
                continue;
            }
            let var = v.unsigned_abs() as usize;
            if var > num_vars {
                return Err(IoError::Assignment {
                    line: line_no,
                    message: format!("variable {var} exceeds the formula's {num_vars} variables"),
                });
            }
            if values[var - 1].replace(v > 0).is_some() {
                return Err(IoError::Assignment {
                    line: line_no,
                    message: format!("variable {var} assigned twice"),
                });
            }
        }
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| IoError::Assignment {
                line: 0,
                message: format!("variable {} has no value", i + 1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_clause() {
        let f = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(f.num_vars, 3);
        assert_eq!(f.clauses, vec![[Lit::pos(1), Lit::pos(2), Lit::pos(3)]]);
    }

    #[test]
    fn repeated_literals_accepted() {
        let f = parse_dimacs("c tautology\np cnf 1 1\n1 -1 -1 0\n").unwrap();
        assert_eq!(f.clauses, vec![[Lit::pos(1), Lit::neg(1), Lit::neg(1)]]);
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 3 2\n1 -2\n3 0 -1 2\n-3 0\n%\n0\n").unwrap();
        assert_eq!(f.clauses.len(), 2);
    }

    #[test]
    fn four_literals_rejected_with_line() {
        let e = parse_dimacs("p cnf 4 1\n1 2 3 4 0\n").unwrap_err();
        assert_eq!(
            e,
            IoError::Dimacs {
                line: 2,
                message: "clause 1 has 4 literals".into()
            }
        );
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(matches!(parse_dimacs("p cnf x 1\n"), Err(IoError::Dimacs { line: 1, .. })));
        assert!(matches!(parse_dimacs("1 2 3 0\n"), Err(IoError::Dimacs { line: 1, .. })));
        assert!(matches!(parse_dimacs("p cnf 3 1\n1 2 3\n"), Err(IoError::Dimacs { line: 2, .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2 3 0\n"), Err(IoError::Dimacs { line: 2, .. })));
        assert!(matches!(parse_dimacs("p cnf 3 2\n1 2 3 0\n"), Err(IoError::Dimacs { line: 1, .. })));
    }

    #[test]
    fn write_then_parse() {
        let f = parse_dimacs("p cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n").unwrap();
        assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn assignment_from_model_lines() {
        let a = parse_assignment("s SATISFIABLE\nv 1 -2\nv 3 0\n", 3).unwrap();
        assert_eq!(a, vec![true, false, true]);
        assert!(parse_assignment("1 -2", 3).is_err());
        assert!(parse_assignment("1 -1 2", 2).is_err());
    }
}
