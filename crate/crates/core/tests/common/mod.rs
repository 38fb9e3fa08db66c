#![allow(dead_code)]

use ftlb::reduction::{build_instance, CnfFormula, ReducedInstance};

/// Satisfiable corpus: at most 5 variables, at most 12 clauses after
/// balancing.
pub const SATISFIABLE: &[(&str, usize, &[[i64; 3]])] = &[
    ("tautology-pair", 1, &[[1, 1, -1], [-1, -1, 1]]),
    ("two-variable", 2, &[[1, 2, -1], [-1, -2, 2]]),
    ("all-or-none", 3, &[[1, 2, 3], [-1, -2, -3]]),
    ("single-clause", 3, &[[1, 2, 3]]),
    ("four-clause", 3, &[[1, 2, -3], [-1, 2, 3], [1, -2, 3], [-1, -2, -3]]),
    ("five-variable", 5, &[[1, 2, 3], [-3, 4, 5], [-1, -2, -4]]),
];

pub const UNSATISFIABLE: &[(&str, usize, &[[i64; 3]])] = &[
    ("x-and-not-x", 1, &[[1, 1, 1], [-1, -1, -1]]),
    (
        "forced-both-ways",
        2,
        &[[1, 1, 2], [1, 1, -2], [-1, -1, 2], [-1, -1, -2]],
    ),
];

pub fn formula(vars: usize, clauses: &[[i64; 3]]) -> CnfFormula {
    CnfFormula::from_dimacs_clauses(vars, clauses).unwrap()
}

pub fn reduce(vars: usize, clauses: &[[i64; 3]]) -> ReducedInstance {
    build_instance(&formula(vars, clauses)).unwrap()
}
