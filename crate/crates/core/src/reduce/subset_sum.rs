//! Dominance gadget for subset-sum.
//!
//! For each (even-padded) item `a_i` with `N` items in total, let
//! `M_i = 2^(C'(N' + i))` with `N' = ceil(log2(sum a))` (1 when the sum is at
//! most 1) and emit the two offset families
//!
//! ```text
//! J_i  = { M_i + a_i * N^3 + k : k in -R..=R }
//! J'_i = { M_i + k             : k in -R..=R }
//! ```
//!
//! with target `S * N^3 + sum M_i`. When the `M_i` dominate, any solution
//! takes exactly one item per index and its offsets cancel, so solutions
//! correspond to subsets of the original items.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::cloud::{CloudKind, CloudMap};
use crate::error::{Error, Result};
use crate::instances::SubsetSumInstance;

/// Which preconditions [`subset_sum_gadget`] enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GadgetCheck {
    /// Dominance of the `M_i` and `R < N^2`, so the gadget is equivalent to
    /// the original in both directions.
    #[default]
    Strict,
    /// Dominance only. Offsets may then add up to a nonzero multiple of
    /// `N^3`, so NO instances can map to YES instances; YES instances still
    /// map to YES and lifted witnesses stay valid.
    CompletenessOnly,
}

/// Identity of one gadget item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GadgetItem {
    /// 1-based index of the (padded) original item.
    pub index: usize,
    /// `true` for the `J'_i` family (item not taken), `false` for `J_i`.
    pub primed: bool,
    pub offset: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSumGadget {
    pub instance: SubsetSumInstance,
    /// Padded original item -> its `2(2R+1)` gadget items.
    pub clouds: CloudMap,
    pub labels: Vec<GadgetItem>,
    pub r: usize,
    pub c_prime: u32,
    /// Number of original items after padding to an even count.
    pub n: usize,
    /// Whether a zero item was appended.
    pub padded: bool,
    pub n_prime: u64,
    pub cube: BigUint,
}

impl SubsetSumGadget {
    /// 1-based gadget item index for `(index, primed, offset)`.
    pub fn item_index(&self, index: usize, primed: bool, offset: i64) -> usize {
        layout_index(self.r, index, primed, offset)
    }

    pub fn label(&self, item: usize) -> GadgetItem {
        self.labels[item - 1]
    }
}

fn layout_index(r: usize, index: usize, primed: bool, offset: i64) -> usize {
    let width = 2 * r + 1;
    (index - 1) * 2 * width + if primed { width } else { 0 } + (offset + r as i64) as usize + 1
}

/// Original items padded with a zero to an even count.
pub fn padded_items(s: &SubsetSumInstance) -> (Vec<BigUint>, bool) {
    let mut items = s.items().to_vec();
    let padded = items.len() % 2 == 1;
    if padded {
        items.push(BigUint::zero());
    }
    (items, padded)
}

fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        1
    } else {
        (x - 1u32).bits()
    }
}

struct Shape {
    items: Vec<BigUint>,
    padded: bool,
    n: usize,
    n_prime: u64,
    cube: BigUint,
}

fn shape(s: &SubsetSumInstance) -> Result<Shape> {
    let (items, padded) = padded_items(s);
    if items.is_empty() {
        return Err(Error::param("the gadget needs at least one item"));
    }
    let n = items.len();
    let total = items.iter().fold(BigUint::zero(), |acc, a| acc + a);
    Ok(Shape {
        n_prime: ceil_log2(&total),
        cube: BigUint::from(n).pow(3),
        items,
        padded,
        n,
    })
}

fn weights(n: usize, n_prime: u64, c_prime: u32) -> Vec<BigUint> {
    (1..=n as u64)
        .map(|i| BigUint::one() << (c_prime as u64 * (n_prime + i)))
        .collect()
}

/// Checks that the `M_i` force exactly one item per index.
///
/// With at most `K = 2(2R+1)` items per index, the non-`M` part of any
/// subset lies in `[-K N R, D]` with `D = K N (a_max N^3 + R)`. Writing
/// `L_i = M_1 + .. + M_i`, it suffices that for every `i`
///
/// * `M_i > K L_{i-1} + D` (skipping index `i` cannot reach the target), and
/// * `M_i > L_{i-1} + S N^3 + K N R` (taking two items of index `i` overshoots).
fn check_dominance(shape: &Shape, target: &BigUint, r: usize, c_prime: u32) -> Result<()> {
    let k = BigUint::from(2 * (2 * r + 1));
    let n = BigUint::from(shape.n);
    let rr = BigUint::from(r);
    let a_max = shape.items.iter().max().cloned().unwrap_or_default();
    let d = &k * &n * (&a_max * &shape.cube + &rr);
    let below = target * &shape.cube + &k * &n * &rr;
    let mut prefix = BigUint::zero();
    for (i, m) in weights(shape.n, shape.n_prime, c_prime).iter().enumerate() {
        let skip = &k * &prefix + &d;
        if m <= &skip {
            return Err(Error::Dominance(format!(
                "C' = {c_prime}: M_{} = {m} must exceed K*L_{} + D = {skip}",
                i + 1,
                i
            )));
        }
        let double = &prefix + &below;
        if m <= &double {
            return Err(Error::Dominance(format!(
                "C' = {c_prime}: M_{} = {m} must exceed L_{} + S*N^3 + K*N*R = {double}",
                i + 1,
                i
            )));
        }
        prefix += m;
    }
    Ok(())
}

/// Smallest `C' >= 1` passing the dominance check.
pub fn minimal_c_prime(s: &SubsetSumInstance, r: usize) -> Result<u32> {
    let shape = shape(s)?;
    (1..=4096)
        .find(|&c| check_dominance(&shape, s.target(), r, c).is_ok())
        .ok_or_else(|| Error::Infeasible("no C' up to 4096 satisfies dominance".into()))
}

pub fn subset_sum_gadget(s: &SubsetSumInstance, r: usize, c_prime: u32, check: GadgetCheck) -> Result<SubsetSumGadget> {
    if r < 1 {
        return Err(Error::param("offset range R must be at least 1"));
    }
    let shape = shape(s)?;
    if check == GadgetCheck::Strict && r >= shape.n * shape.n {
        return Err(Error::Dominance(format!(
            "R = {r} must be below N^2 = {} so that offsets cannot sum to a nonzero multiple of N^3",
            shape.n * shape.n
        )));
    }
    check_dominance(&shape, s.target(), r, c_prime)?;

    let weights = weights(shape.n, shape.n_prime, c_prime);
    let width = 2 * r + 1;
    let mut items = Vec::with_capacity(2 * shape.n * width);
    let mut labels = Vec::with_capacity(items.capacity());
    for (i, (a, m)) in shape.items.iter().zip(&weights).enumerate() {
        let heavy = m + a * &shape.cube;
        for (primed, base) in [(false, &heavy), (true, m)] {
            for offset in -(r as i64)..=r as i64 {
                let value = if offset < 0 {
                    base - BigUint::from(offset.unsigned_abs())
                } else {
                    base + BigUint::from(offset as u64)
                };
                items.push(value);
                labels.push(GadgetItem {
                    index: i + 1,
                    primed,
                    offset,
                });
            }
        }
    }
    let target = s.target() * &shape.cube + weights.iter().fold(BigUint::zero(), |acc, m| acc + m);
    debug_assert!(labels
        .iter()
        .enumerate()
        .all(|(pos, l)| layout_index(r, l.index, l.primed, l.offset) == pos + 1));
    Ok(SubsetSumGadget {
        instance: SubsetSumInstance::new(items, target),
        clouds: CloudMap::contiguous(CloudKind::Item, shape.n, 2 * width, 0),
        labels,
        r,
        c_prime,
        n: shape.n,
        padded: shape.padded,
        n_prime: shape.n_prime,
        cube: shape.cube,
    })
}
