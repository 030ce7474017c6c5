//! Greedy (Mian–Chowla) Sidon sets.

use std::collections::HashSet;

use super::IntSet;

/// The first `n` terms of the Mian–Chowla sequence 1, 2, 4, 8, 13, 21, …:
/// each term is the smallest integer keeping all differences distinct.
pub fn sidon_set(n: usize) -> IntSet {
    let mut elements: Vec<i64> = Vec::with_capacity(n);
    let mut diffs: HashSet<i64> = HashSet::new();
    let mut candidate = 1i64;
    while elements.len() < n {
        let new: Vec<i64> = elements.iter().map(|&a| candidate - a).collect();
        if new.iter().all(|d| !diffs.contains(d)) {
            diffs.extend(new);
            elements.push(candidate);
        }
        candidate += 1;
    }
    IntSet::integers(elements)
}
