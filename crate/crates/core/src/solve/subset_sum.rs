use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{check_cap, SolveResult};
use crate::error::{Error, Result};
use crate::instances::SubsetSumInstance;

pub const MITM_CAP: usize = 48;
/// Largest frontier of distinct partial sums the pruned search will hold.
pub const PRUNED_STATE_CAP: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SsStrategy {
    /// Enumerate subset sums of both halves and match them.
    MeetInTheMiddle,
    /// Breadth-first branch and bound over items in descending order,
    /// merging equal partial sums and pruning sums that overshoot the target
    /// or can no longer reach it.
    #[default]
    Pruned,
}

/// Decides whether some subset of the items sums to the target. The witness
/// lists 1-based item indices in ascending order.
pub fn subset_sum_decide(s: &SubsetSumInstance, strategy: SsStrategy) -> Result<SolveResult<bool, Vec<usize>>> {
    let found = match strategy {
        SsStrategy::MeetInTheMiddle => {
            check_cap("meet-in-the-middle items", s.len(), MITM_CAP)?;
            meet_in_the_middle(s)
        }
        SsStrategy::Pruned => pruned(s)?,
    };
    let witness = found.map(|mut w| {
        w.sort_unstable();
        w
    });
    if let Some(w) = &witness {
        if !s.is_witness(w) {
            return Err(Error::invalid("internal: subset-sum witness failed verification"));
        }
    }
    Ok(SolveResult::new(witness.is_some(), witness))
}

fn half_sums(items: &[BigUint]) -> Vec<(BigUint, u32)> {
    let mut sums = Vec::with_capacity(1 << items.len());
    sums.push((BigUint::zero(), 0u32));
    for (i, a) in items.iter().enumerate() {
        let len = sums.len();
        for j in 0..len {
            let (s, m) = &sums[j];
            let next = (s + a, m | 1 << i);
            sums.push(next);
        }
    }
    sums
}

fn meet_in_the_middle(s: &SubsetSumInstance) -> Option<Vec<usize>> {
    let half = s.len() / 2;
    let (left, right) = s.items().split_at(half);
    let lsums = half_sums(left);
    let mut rsums = half_sums(right);
    rsums.sort();
    let target = s.target();
    for (ls, lm) in &lsums {
        if ls > target {
            continue;
        }
        let need = target - ls;
        let pos = rsums.partition_point(|(r, _)| r < &need);
        if let Some((r, rm)) = rsums.get(pos) {
            if *r == need {
                let mut w: Vec<usize> = (0..half).filter(|i| lm >> i & 1 == 1).map(|i| i + 1).collect();
                w.extend((0..right.len()).filter(|i| rm >> i & 1 == 1).map(|i| half + i + 1));
                return Some(w);
            }
        }
    }
    None
}

struct Node {
    sum: BigUint,
    parent: usize,
    took: bool,
}

fn pruned(s: &SubsetSumInstance) -> Result<Option<Vec<usize>>> {
    let target = s.target();
    // Descending by value, ties by index.
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s.items()[b].cmp(&s.items()[a]).then(a.cmp(&b)));
    let mut suffix = vec![BigUint::zero(); order.len() + 1];
    for i in (0..order.len()).rev() {
        suffix[i] = &suffix[i + 1] + &s.items()[order[i]];
    }
    if &suffix[0] < target {
        return Ok(None);
    }
    let mut levels: Vec<Vec<Node>> = vec![vec![Node {
        sum: BigUint::zero(),
        parent: 0,
        took: false,
    }]];
    for (depth, &item) in order.iter().enumerate() {
        if let Some(pos) = levels[depth].iter().position(|n| &n.sum == target) {
            return Ok(Some(reconstruct(&levels, &order, depth, pos)));
        }
        let a = &s.items()[item];
        let rest = &suffix[depth + 1];
        let mut next: Vec<Node> = Vec::new();
        let mut seen: HashSet<BigUint> = HashSet::new();
        for (pi, node) in levels[depth].iter().enumerate() {
            let took = &node.sum + a;
            if &took <= target && &took + rest >= *target && seen.insert(took.clone()) {
                next.push(Node {
                    sum: took,
                    parent: pi,
                    took: true,
                });
            }
            if &node.sum + rest >= *target && seen.insert(node.sum.clone()) {
                next.push(Node {
                    sum: node.sum.clone(),
                    parent: pi,
                    took: false,
                });
            }
        }
        check_cap("pruned subset-sum frontier", next.len(), PRUNED_STATE_CAP)?;
        if next.is_empty() {
            return Ok(None);
        }
        levels.push(next);
    }
    let depth = order.len();
    Ok(levels[depth]
        .iter()
        .position(|n| &n.sum == target)
        .map(|pos| reconstruct(&levels, &order, depth, pos)))
}

fn reconstruct(levels: &[Vec<Node>], order: &[usize], mut depth: usize, mut pos: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    while depth > 0 {
        let node = &levels[depth][pos];
        if node.took {
            chosen.push(order[depth - 1] + 1);
        }
        pos = node.parent;
        depth -= 1;
    }
    chosen
}
