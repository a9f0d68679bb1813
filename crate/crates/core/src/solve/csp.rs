use super::{check_cap, SolveResult};
use crate::error::Result;
use crate::instances::{fraction, Assignment, CspInstance};
use crate::Rational;

pub const MAX_CSP_VARS: usize = 30;

/// Largest number of simultaneously satisfiable clauses, with the first
/// optimal assignment met in Gray-code order from all-false.
pub fn max_satisfied(f: &CspInstance) -> Result<(usize, Assignment)> {
    let n = f.n_vars();
    check_cap("max-CSP variables", n, MAX_CSP_VARS)?;
    let m = f.clause_count();
    // occ[v]: (clause, bit position of v in that clause).
    let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ci, c) in f.clauses().iter().enumerate() {
        for (t, &v) in c.vars().iter().enumerate() {
            occ[v - 1].push((ci, t));
        }
    }
    let mut rows = vec![0usize; m];
    let mut sat: usize = f.clauses().iter().filter(|c| c.accepts(0)).count();
    let mut best = sat;
    let mut best_code: u64 = 0;
    let mut code: u64 = 0;
    for step in 1u64..1 << n {
        if best == m {
            break;
        }
        let v = step.trailing_zeros() as usize;
        code ^= 1 << v;
        for &(ci, t) in &occ[v] {
            let c = &f.clauses()[ci];
            let before = c.accepts(rows[ci]);
            rows[ci] ^= 1 << t;
            let after = c.accepts(rows[ci]);
            match (before, after) {
                (false, true) => sat += 1,
                (true, false) => sat -= 1,
                _ => {}
            }
        }
        if sat > best {
            best = sat;
            best_code = code;
        }
    }
    let witness = Assignment::new((0..n).map(|v| best_code >> v & 1 == 1).collect());
    debug_assert_eq!(f.satisfied_count(&witness).ok(), Some(best));
    Ok((best, witness))
}

/// `val(f)`: the maximum fraction of satisfied clauses, exactly. The empty
/// formula has value 1.
pub fn max_csp_value(f: &CspInstance) -> Result<SolveResult<Rational, Assignment>> {
    let (best, witness) = max_satisfied(f)?;
    Ok(SolveResult::new(fraction(best, f.clause_count()), Some(witness)))
}
