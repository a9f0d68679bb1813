use num_bigint::BigUint;
use num_traits::Zero;

/// A subset-sum instance: nonnegative items (zero is allowed) and a target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetSumInstance {
    items: Vec<BigUint>,
    target: BigUint,
}

impl SubsetSumInstance {
    pub fn new(items: Vec<BigUint>, target: BigUint) -> Self {
        SubsetSumInstance { items, target }
    }

    pub fn from_u64(items: &[u64], target: u64) -> Self {
        SubsetSumInstance {
            items: items.iter().map(|&a| BigUint::from(a)).collect(),
            target: BigUint::from(target),
        }
    }

    pub fn items(&self) -> &[BigUint] {
        &self.items
    }

    pub fn target(&self) -> &BigUint {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.items.iter().fold(BigUint::zero(), |acc, a| acc + a)
    }

    /// Sum of the items at the given 1-based indices.
    pub fn sum_of(&self, indices: &[usize]) -> BigUint {
        indices.iter().fold(BigUint::zero(), |acc, &i| acc + &self.items[i - 1])
    }

    /// True when `indices` are distinct, in range and sum to the target.
    pub fn is_witness(&self, indices: &[usize]) -> bool {
        let mut seen = vec![false; self.items.len() + 1];
        for &i in indices {
            if i == 0 || i > self.items.len() || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        self.sum_of(indices) == self.target
    }
}
