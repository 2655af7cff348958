//! Pairwise summation with a fixed reduction tree.
//!
//! The tree shape depends only on the slice length, so the result is bitwise
//! identical whatever the size of the thread pool.

use std::ops::Add;

const LEAF: usize = 64;
const PAR_THRESHOLD: usize = 1 << 14;

pub fn tree_sum<T>(values: &[T]) -> T
where
    T: Copy + Default + Add<Output = T> + Send + Sync,
{
    if values.len() <= LEAF {
        return values.iter().fold(T::default(), |acc, &v| acc + v);
    }
    let mid = split_point(values.len());
    let (lo, hi) = values.split_at(mid);
    if values.len() >= PAR_THRESHOLD {
        let (a, b) = rayon::join(|| tree_sum(lo), || tree_sum(hi));
        a + b
    } else {
        tree_sum(lo) + tree_sum(hi)
    }
}

/// Largest multiple of `LEAF` not exceeding half the length (at least `LEAF`).
fn split_point(len: usize) -> usize {
    ((len / 2) / LEAF).max(1) * LEAF
}
