//! Deterministic subset pools shared by the axiom and topology checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Index subsets of `0..n` with at most `k` elements, ordered by size and then
/// lexicographically.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k.min(n) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&l| l + 1);
            for i in start..n {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A sorted random subset of `0..n` whose size is drawn from `min..=max`.
pub fn random_subset(rng: &mut impl Rng, n: usize, min: usize, max: usize) -> Vec<usize> {
    let max = max.min(n);
    let size = if min >= max { max } else { rng.gen_range(min..=max) };
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.truncate(size);
    idx.sort_unstable();
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets_up_to(13, 3).len(), 1 + 13 + 78 + 286);
        assert_eq!(subsets_up_to(4, 10).len(), 16);
        assert_eq!(subsets_up_to(3, 1), vec![vec![], vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn random_subsets_are_reproducible() {
        let a: Vec<_> = (0..5).map(|_| ()).scan(rng(7), |r, _| Some(random_subset(r, 10, 1, 4))).collect();
        let b: Vec<_> = (0..5).map(|_| ()).scan(rng(7), |r, _| Some(random_subset(r, 10, 1, 4))).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|s| (1..=4).contains(&s.len())));
    }
}
