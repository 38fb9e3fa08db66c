//! 3-CNF formulas and the occurrence-balanced normal form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ReductionError;

/// A literal over variables numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub const fn pos(var: usize) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub const fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    /// DIMACS convention: `+v` or `-v`.
    pub fn from_dimacs(v: i64) -> Option<Self> {
        if v == 0 {
            return None;
        }
        Some(Self {
            var: v.unsigned_abs() as usize,
            negated: v < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn is_satisfied_by(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] != self.negated
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// A literal occurrence tagged with its rank among the occurrences of the
/// same literal (1-based), which picks the gadget vertex it is wired to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
    pub occurrence: usize,
}

impl Literal {
    pub fn lit(self) -> Lit {
        Lit {
            var: self.var,
            negated: self.negated,
        }
    }

    /// Index of this occurrence's vertex among the gadget's `2·m_i` literals.
    pub fn vertex_index(self) -> usize {
        2 * (self.occurrence - 1) + usize::from(self.negated)
    }
}

pub type Clause = [Lit; 3];

/// A 3-CNF formula; repeated literals inside a clause are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, ReductionError> {
        let f = Self { num_vars, clauses };
        f.validate()?;
        Ok(f)
    }

    /// Builds a formula from DIMACS-style signed integers.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[[i64; 3]]) -> Result<Self, ReductionError> {
        let clauses = clauses
            .iter()
            .map(|c| {
                let mut out = [Lit::pos(1); 3];
                for (slot, &v) in out.iter_mut().zip(c) {
                    *slot = Lit::from_dimacs(v).ok_or(ReductionError::VariableOutOfRange {
                        var: 0,
                        num_vars,
                    })?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>, ReductionError>>()?;
        Self::new(num_vars, clauses)
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.clauses.is_empty() || self.num_vars == 0 {
            return Err(ReductionError::EmptyFormula);
        }
        for clause in &self.clauses {
            for lit in clause {
                if lit.var == 0 || lit.var > self.num_vars {
                    return Err(ReductionError::VariableOutOfRange {
                        var: lit.var,
                        num_vars: self.num_vars,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.is_satisfied_by(assignment)))
    }

    /// Index of the first clause the assignment falsifies.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.is_satisfied_by(assignment)))
    }

    /// `(positive, negative)` occurrence counts per variable, index `var - 1`.
    pub fn occurrence_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.num_vars];
        for lit in self.clauses.iter().flatten() {
            let c = &mut counts[lit.var - 1];
            if lit.negated {
                c.1 += 1;
            } else {
                c.0 += 1;
            }
        }
        counts
    }
}

/// Upper limit on variables for exhaustive satisfiability search.
pub const MAX_BRUTE_FORCE_VARS: usize = 20;

/// First satisfying assignment in lexicographic order (false < true,
/// variable 1 most significant), by exhaustive search.
pub fn brute_force_sat(formula: &CnfFormula) -> Result<Option<Vec<bool>>, ReductionError> {
    let n = formula.num_vars;
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(ReductionError::TooManyVariables {
            vars: n,
            limit: MAX_BRUTE_FORCE_VARS,
        });
    }
    let mut assignment = vec![false; n];
    for bits in 0u64..(1u64 << n) {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = (bits >> (n - 1 - i)) & 1 == 1;
        }
        if formula.is_satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// A formula in which every variable occurs exactly `m_i ≥ 3` times
/// positively and `m_i` times negatively, with occurrences indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedCnf {
    pub formula: CnfFormula,
    /// Indexed literal occurrences, one triple per clause.
    pub occurrences: Vec<[Literal; 3]>,
    /// `m_i` per variable, index `var - 1`.
    pub m: Vec<usize>,
}

impl BalancedCnf {
    pub fn num_vars(&self) -> usize {
        self.formula.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.formula.clauses.len()
    }

    pub fn total_occurrences(&self) -> usize {
        self.m.iter().sum()
    }

    /// Wraps an already balanced formula, indexing its occurrences.
    pub fn from_balanced(formula: CnfFormula) -> Result<Self, ReductionError> {
        formula.validate()?;
        let counts = formula.occurrence_counts();
        for (i, &(p, n)) in counts.iter().enumerate() {
            if p != n || p < 3 {
                return Err(ReductionError::NotBalanced {
                    var: i + 1,
                    positive: p,
                    negative: n,
                });
            }
        }
        let mut seen = vec![(0usize, 0usize); formula.num_vars];
        let occurrences = formula
            .clauses
            .iter()
            .map(|clause| {
                clause.map(|lit| {
                    let s = &mut seen[lit.var - 1];
                    let rank = if lit.negated {
                        s.1 += 1;
                        s.1
                    } else {
                        s.0 += 1;
                        s.0
                    };
                    Literal {
                        var: lit.var,
                        negated: lit.negated,
                        occurrence: rank,
                    }
                })
            })
            .collect();
        let m = counts.iter().map(|c| c.0).collect();
        Ok(Self {
            formula,
            occurrences,
            m,
        })
    }
}

/// Pads with tautologies until every variable is balanced, then repeats the
/// whole clause list (twice more at most) so that every `m_i ≥ 3`.
///
/// `(v ∨ ¬v ∨ ¬v)` raises the negative count by one relative to the positive
/// count and `(v ∨ v ∨ ¬v)` does the opposite; both are always true, so the
/// result is equisatisfiable with the input.
pub fn balance_formula(formula: &CnfFormula) -> Result<BalancedCnf, ReductionError> {
    formula.validate()?;
    let mut clauses = formula.clauses.clone();
    for (i, &(pos, neg)) in formula.occurrence_counts().iter().enumerate() {
        let v = i + 1;
        let more_negatives = [Lit::pos(v), Lit::neg(v), Lit::neg(v)];
        let more_positives = [Lit::pos(v), Lit::pos(v), Lit::neg(v)];
        if pos == 0 && neg == 0 {
            clauses.push(more_negatives);
            clauses.push(more_positives);
        } else if pos > neg {
            clauses.extend(std::iter::repeat_n(more_negatives, pos - neg));
        } else {
            clauses.extend(std::iter::repeat_n(more_positives, neg - pos));
        }
    }
    let padded = CnfFormula {
        num_vars: formula.num_vars,
        clauses,
    };
    let min_m = padded
        .occurrence_counts()
        .iter()
        .map(|c| c.0)
        .min()
        .unwrap_or(0);
    let copies = match min_m {
        1 => 3,
        2 => 2,
        _ => 1,
    };
    let clauses = (0..copies)
        .flat_map(|_| padded.clauses.iter().copied())
        .collect();
    BalancedCnf::from_balanced(CnfFormula {
        num_vars: formula.num_vars,
        clauses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, cs: &[[i64; 3]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, cs).unwrap()
    }

    fn all_assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u32..(1 << n)).map(move |b| (0..n).map(|i| (b >> i) & 1 == 1).collect())
    }

    #[test]
    fn single_clause_is_padded_and_doubled() {
        let src = f(3, &[[1, 2, 3]]);
        let b = balance_formula(&src).unwrap();
        assert_eq!(b.m, vec![4, 4, 4]);
        assert_eq!(b.num_clauses(), 8);
        assert_eq!(b.total_occurrences(), 12);
        // equisatisfiable: the tautologies never change the truth value
        for a in all_assignments(3) {
            assert_eq!(src.is_satisfied_by(&a), b.formula.is_satisfied_by(&a));
        }
    }

    #[test]
    fn balanced_input_is_unchanged() {
        let src = f(
            1,
            &[[1, 1, -1], [-1, -1, 1], [1, -1, -1], [1, 1, -1]],
        );
        // Six positive and six negative occurrences of x.
        let counts = src.occurrence_counts();
        assert_eq!(counts[0].0, counts[0].1);
        let b = balance_formula(&src).unwrap();
        assert_eq!(b.formula, src);
        assert_eq!(b.m, vec![6]);
    }

    #[test]
    fn unsatisfiable_stays_unsatisfiable() {
        let src = f(1, &[[1, 1, 1], [-1, -1, -1]]);
        let b = balance_formula(&src).unwrap();
        assert_eq!(b.m, vec![3]);
        assert_eq!(b.num_clauses(), 2);
        assert!(brute_force_sat(&src).unwrap().is_none());
        assert!(brute_force_sat(&b.formula).unwrap().is_none());
    }

    #[test]
    fn occurrence_indices_are_unique_per_literal() {
        let b = balance_formula(&f(3, &[[1, -2, 3], [-1, 2, 2]])).unwrap();
        for (i, &m) in b.m.iter().enumerate() {
            for negated in [false, true] {
                let mut idx: Vec<usize> = b
                    .occurrences
                    .iter()
                    .flatten()
                    .filter(|l| l.var == i + 1 && l.negated == negated)
                    .map(|l| l.occurrence)
                    .collect();
                idx.sort_unstable();
                assert_eq!(idx, (1..=m).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn unused_variable_gets_a_tautology_pair() {
        let b = balance_formula(&f(2, &[[1, 1, -1]])).unwrap();
        assert!(b.m.iter().all(|&m| m >= 3));
    }

    #[test]
    fn rejects_empty_and_out_of_range() {
        assert_eq!(
            CnfFormula::new(2, vec![]).unwrap_err(),
            ReductionError::EmptyFormula
        );
        assert!(matches!(
            CnfFormula::from_dimacs_clauses(2, &[[1, 2, 3]]),
            Err(ReductionError::VariableOutOfRange { var: 3, .. })
        ));
    }

    #[test]
    fn brute_force_finds_lexicographically_first() {
        let src = f(2, &[[1, 2, 2], [-1, -1, -1]]);
        assert_eq!(brute_force_sat(&src).unwrap(), Some(vec![false, true]));
    }

    use proptest::prelude::*;

    fn formula_strategy() -> impl Strategy<Value = CnfFormula> {
        (1usize..=4).prop_flat_map(|n| {
            let lit = (1..=n as i64, any::<bool>()).prop_map(|(v, s)| if s { -v } else { v });
            prop::collection::vec([lit.clone(), lit.clone(), lit], 1..6)
                .prop_map(move |cs| CnfFormula::from_dimacs_clauses(n, &cs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn balancing_is_equisatisfiable_and_balanced(src in formula_strategy()) {
            let b = balance_formula(&src).unwrap();
            for (p, n) in b.formula.occurrence_counts() {
                prop_assert_eq!(p, n);
                prop_assert!(p >= 3);
            }
            prop_assert_eq!(
                brute_force_sat(&src).unwrap().is_some(),
                brute_force_sat(&b.formula).unwrap().is_some()
            );
            // pointwise: every assignment agrees
            for a in all_assignments(src.num_vars) {
                prop_assert_eq!(src.is_satisfied_by(&a), b.formula.is_satisfied_by(&a));
            }
            prop_assert_eq!(3 * b.num_clauses(), 2 * b.total_occurrences());
        }
    }
}
