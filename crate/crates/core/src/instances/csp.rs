use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::Rational;

/// A constraint over a tuple of distinct variables with an explicit truth
/// table. Bit `j` of the table is the predicate value on the assignment whose
/// binary encoding is `j`, with `vars[0]` as the least-significant bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    vars: Vec<usize>,
    table: Vec<bool>,
}

impl Clause {
    pub fn new(vars: Vec<usize>, table: Vec<bool>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::invalid("clauses need at least one variable"));
        }
        if vars.len() >= usize::BITS as usize - 1 {
            return Err(Error::invalid(format!("clause arity {} too large", vars.len())));
        }
        if table.len() != 1 << vars.len() {
            return Err(Error::invalid(format!(
                "truth table has {} entries, arity {} needs {}",
                table.len(),
                vars.len(),
                1usize << vars.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(&v) = vars.iter().find(|&&v| !seen.insert(v)) {
            return Err(Error::invalid(format!("variable {v} repeated within a clause")));
        }
        Ok(Clause { vars, table })
    }

    /// An OR of signed DIMACS literals.
    pub fn disjunction(literals: &[i64]) -> Result<Self> {
        if literals.contains(&0) {
            return Err(Error::invalid("literal 0 is not a variable"));
        }
        let vars: Vec<usize> = literals.iter().map(|l| l.unsigned_abs() as usize).collect();
        let a = vars.len();
        let table = (0..1usize << a)
            .map(|j| {
                literals
                    .iter()
                    .enumerate()
                    .any(|(t, &l)| ((j >> t) & 1 == 1) == (l > 0))
            })
            .collect();
        Clause::new(vars, table)
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Table lookup with `bits` already packed in clause-variable order.
    #[inline]
    pub fn accepts(&self, bits: usize) -> bool {
        self.table[bits]
    }

    /// Evaluate against `values[v - 1]`.
    #[inline]
    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        let mut j = 0usize;
        for (t, &v) in self.vars.iter().enumerate() {
            if values[v - 1] {
                j |= 1 << t;
            }
        }
        self.table[j]
    }

    /// The signed literals if the table is exactly an OR of literals.
    pub fn as_disjunction(&self) -> Option<Vec<i64>> {
        // An OR clause is false on exactly one row: the row falsifying every literal.
        let mut falses = self.table.iter().enumerate().filter(|(_, &b)| !b).map(|(j, _)| j);
        let row = falses.next()?;
        if falses.next().is_some() {
            return None;
        }
        Some(
            self.vars
                .iter()
                .enumerate()
                .map(|(t, &v)| if (row >> t) & 1 == 1 { -(v as i64) } else { v as i64 })
                .collect(),
        )
    }

    pub(crate) fn with_vars(&self, vars: Vec<usize>) -> Clause {
        Clause {
            vars,
            table: self.table.clone(),
        }
    }
}

/// A simple, unweighted CSP over Boolean variables `1..=n_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    n_vars: usize,
    k_max: usize,
    clauses: Vec<Clause>,
}

impl CspInstance {
    pub fn new(n_vars: usize, k_max: usize, clauses: Vec<Clause>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(clauses.len());
        for (i, c) in clauses.iter().enumerate() {
            if c.arity() > k_max {
                return Err(Error::invalid(format!(
                    "clause {} has arity {} above k = {k_max}",
                    i + 1,
                    c.arity()
                )));
            }
            if let Some(&v) = c.vars().iter().find(|&&v| v == 0 || v > n_vars) {
                return Err(Error::invalid(format!(
                    "clause {} uses variable {v} outside 1..={n_vars}",
                    i + 1
                )));
            }
            if !seen.insert(c) {
                return Err(Error::invalid(format!("clause {} duplicates an earlier clause", i + 1)));
            }
        }
        Ok(CspInstance { n_vars, k_max, clauses })
    }

    /// Builds with `k_max` set to the largest clause arity.
    pub fn from_clauses(n_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        let k = clauses.iter().map(Clause::arity).max().unwrap_or(0);
        Self::new(n_vars, k, clauses)
    }

    pub fn from_cnf(n_vars: usize, clauses: &[Vec<i64>]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| Clause::disjunction(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_clauses(n_vars, clauses)
    }

    pub(crate) fn from_parts_unchecked(n_vars: usize, k_max: usize, clauses: Vec<Clause>) -> Self {
        CspInstance { n_vars, k_max, clauses }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Common arity of every clause, or `None` if arities differ or there
    /// are no clauses.
    pub fn uniform_arity(&self) -> Option<usize> {
        let a = self.clauses.first()?.arity();
        self.clauses.iter().all(|c| c.arity() == a).then_some(a)
    }

    pub fn satisfied_count(&self, a: &Assignment) -> Result<usize> {
        a.check_total(self.n_vars)?;
        Ok(self.clauses.iter().filter(|c| c.satisfied_by(&a.values)).count())
    }

    /// Exact fraction of clauses satisfied by `a`; the empty formula has value 1.
    pub fn eval_assignment(&self, a: &Assignment) -> Result<Rational> {
        let sat = self.satisfied_count(a)?;
        Ok(fraction(sat, self.clauses.len()))
    }
}

pub(crate) fn fraction(num: usize, den: usize) -> Rational {
    if den == 0 {
        return Rational::one();
    }
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A total Boolean assignment; `values[i]` is the value of variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all(n: usize, value: bool) -> Self {
        Assignment { values: vec![value; n] }
    }

    /// Variables are numbered from 1.
    pub fn get(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_total(&self, n_vars: usize) -> Result<()> {
        if self.values.len() != n_vars {
            return Err(Error::invalid(format!(
                "assignment covers {} variables, instance has {n_vars}",
                self.values.len()
            )));
        }
        Ok(())
    }
}
