//! Finite subgroups of products of copies of Q/Z: generated-subgroup orders,
//! linear independence, and joint surjectivity of characters.

use std::collections::{HashSet, VecDeque};

use num_integer::Integer;

use super::QZClass;
use crate::error::{Error, Result};

/// Closure enumeration refuses to grow past this many elements.
pub const CLOSURE_LIMIT: usize = 1 << 22;

/// An element of a finite product of cyclic groups, written as a tuple of
/// Q/Z classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbElement(pub Vec<QZClass>);

impl FinAbElement {
    pub fn new(components: Vec<QZClass>) -> Self {
        FinAbElement(components)
    }

    pub fn zero(len: usize) -> Self {
        FinAbElement(vec![QZClass::ZERO; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[QZClass] {
        &self.0
    }

    /// Order of the element: lcm of the component orders.
    pub fn order(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, c| acc.lcm(&c.order()))
    }

    pub fn add(&self, other: &FinAbElement) -> FinAbElement {
        FinAbElement(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }

    pub fn times(&self, k: i128) -> FinAbElement {
        FinAbElement(self.0.iter().map(|c| c.times(k)).collect())
    }
}

fn common_len(elements: &[FinAbElement]) -> Result<usize> {
    let len = elements.first().map_or(0, |e| e.len());
    if elements.iter().any(|e| e.len() != len) {
        return Err(Error::Domain("elements live in different product groups".into()));
    }
    Ok(len)
}

/// Exact order of the subgroup generated by `elements`, by closure.
pub fn subgroup_order(elements: &[FinAbElement]) -> Result<u64> {
    let len = common_len(elements)?;
    let zero = FinAbElement::zero(len);
    let mut seen: HashSet<FinAbElement> = HashSet::new();
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in elements {
            let y = x.add(g);
            if seen.insert(y.clone()) {
                if seen.len() > CLOSURE_LIMIT {
                    return Err(Error::BudgetExceeded {
                        needed: seen.len() as u128,
                        budget: CLOSURE_LIMIT as u128,
                    });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// The elements are linearly independent when the subgroup they generate
/// has order equal to the product of their orders.
pub fn is_linearly_independent(elements: &[FinAbElement]) -> Result<bool> {
    let order = subgroup_order(elements)?;
    let product = elements.iter().try_fold(1u64, |acc, e| acc.checked_mul(e.order()));
    Ok(product == Some(order))
}

/// `characters[i][g]` is the value of the i-th character on the g-th element
/// of an enumerated finite group. Returns whether the product map onto
/// `prod_i (1/n_i)Z/Z` is surjective, `n_i` being the order of the i-th
/// character.
pub fn product_characters_surjective(characters: &[Vec<QZClass>]) -> Result<bool> {
    let group_size = match characters.first() {
        Some(c) => c.len(),
        None => return Ok(true),
    };
    if group_size == 0 {
        return Err(Error::Domain("character tables on the empty group".into()));
    }
    if characters.iter().any(|c| c.len() != group_size) {
        return Err(Error::Domain("character tables have different lengths".into()));
    }
    let mut target: u128 = 1;
    for chi in characters {
        let n = chi.iter().fold(1u64, |acc, v| acc.lcm(&v.order()));
        target *= n as u128;
    }
    let image: HashSet<Vec<QZClass>> = (0..group_size)
        .map(|g| characters.iter().map(|chi| chi[g]).collect())
        .collect();
    Ok(image.len() as u128 == target)
}
