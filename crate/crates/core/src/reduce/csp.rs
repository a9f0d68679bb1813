use super::cloud::{CloudKind, CloudMap};
use crate::error::{Error, Result};
use crate::instances::CspInstance;

/// Output of [`csp_cloud_blowup`].
#[derive(Debug, Clone, PartialEq)]
pub struct CspBlowup {
    pub instance: CspInstance,
    /// Original variable `i` -> its copies `(i-1)R+1 ..= iR`.
    pub variables: CloudMap,
    /// Original clause -> the `R^k` clauses built from it.
    pub clauses: CloudMap,
    pub r: usize,
}

/// Replaces each variable by `r` copies and each clause by one clause per
/// choice of copies (`r^k` of them), keeping its truth table. Clouds appear in
/// original clause order; inside a cloud, copy tuples run lexicographically
/// with the first variable most significant.
///
/// Every clause must have the same arity; otherwise clause clouds differ in
/// size and the value of the blowup is a reweighting of the original.
pub fn csp_cloud_blowup(f: &CspInstance, r: usize) -> Result<CspBlowup> {
    if r < 1 {
        return Err(Error::param("blowup factor must be at least 1"));
    }
    if f.clause_count() > 0 && f.uniform_arity().is_none() {
        return Err(Error::param("cloud blowup needs all clauses to share one arity"));
    }
    let k = f.uniform_arity().unwrap_or(0);
    let per_clause = r
        .checked_pow(k as u32)
        .ok_or_else(|| Error::param("blowup too large"))?;
    let mut clauses = Vec::with_capacity(f.clause_count() * per_clause);
    let mut clause_clouds = Vec::with_capacity(f.clause_count());
    for c in f.clauses() {
        let start = clauses.len();
        for combo in 0..per_clause {
            // Digits of `combo` in base r, first variable most significant.
            let mut rest = combo;
            let mut vars = vec![0usize; k];
            for t in (0..k).rev() {
                vars[t] = (c.vars()[t] - 1) * r + rest % r + 1;
                rest /= r;
            }
            clauses.push(c.with_vars(vars));
        }
        clause_clouds.push((start + 1..=clauses.len()).collect());
    }
    let produced = clauses.len();
    let instance = CspInstance::from_parts_unchecked(f.n_vars() * r, f.k_max(), clauses);
    Ok(CspBlowup {
        instance,
        variables: CloudMap::contiguous(CloudKind::Variable, f.n_vars(), r, 0),
        clauses: CloudMap::new(CloudKind::Clause, produced, clause_clouds)?,
        r,
    })
}
