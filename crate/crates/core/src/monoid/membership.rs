//! Exact membership engines for finitely generated submonoids of `G`.
//!
//! Affine membership uses a reachability search from the identity inside a
//! box. By the Steinitz lemma (constant `d` for any norm), every
//! representation `g = v_1 + ... + v_n` can be reordered so that each partial
//! sum stays within `d·(V + |g|)` of the segment `[0, g]`, where `V` bounds the
//! generators in sup-norm. Searching the box of radius `|g| + d·(V + |g|)` is
//! therefore exact, with no coefficient bound to guess.

use std::collections::{HashSet, VecDeque};
use std::sync::RwLock;

use fixedbitset::FixedBitSet;

use super::element::Element;
use super::groupoid::FiniteTable;
use super::lattice::gcd_all;

/// Dense grids larger than this fall back to a per-query hash search.
const GRID_LIMIT: usize = 1 << 23;

#[derive(Debug)]
pub(crate) enum Engine {
    Finite(FixedBitSet),
    Numerical(NumericalEngine),
    Subgroup(i64),
    Lattice(LatticeEngine),
}

impl Engine {
    pub(crate) fn finite(table: &FiniteTable, gens: &[usize]) -> Self {
        let mut members = FixedBitSet::with_capacity(table.size());
        let mut queue = VecDeque::new();
        for start in std::iter::once(table.one()).chain(gens.iter().copied()) {
            if !members.contains(start) {
                members.insert(start);
                queue.push_back(start);
            }
        }
        while let Some(x) = queue.pop_front() {
            let current: Vec<usize> = members.ones().collect();
            for y in current {
                let p = table.product(x, y);
                if !members.contains(p) {
                    members.insert(p);
                    queue.push_back(p);
                }
            }
        }
        members.insert(table.zero());
        Engine::Finite(members)
    }

    pub(crate) fn integers(gens: &[i64]) -> Self {
        let has_pos = gens.iter().any(|&g| g > 0);
        let has_neg = gens.iter().any(|&g| g < 0);
        let step = gcd_all(gens);
        if has_pos && has_neg {
            Engine::Subgroup(step)
        } else {
            let sign = if has_neg { -1 } else { 1 };
            Engine::Numerical(NumericalEngine::new(gens, step, sign))
        }
    }

    pub(crate) fn lattice(gens: &[Vec<i64>], dim: usize) -> Self {
        Engine::Lattice(LatticeEngine::new(gens, dim))
    }

    pub(crate) fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (Engine::Finite(bits), Element::Index(i)) => bits.contains(*i),
            (Engine::Finite(_), _) => false,
            (_, Element::Infinity) => true,
            (Engine::Numerical(n), Element::Int(x)) => n.contains(*x),
            (Engine::Subgroup(step), Element::Int(x)) => {
                if *step == 0 {
                    *x == 0
                } else {
                    x % step == 0
                }
            }
            (Engine::Lattice(l), Element::Vector(v)) => l.contains(v),
            _ => false,
        }
    }
}

/// Submonoid of `ℤ` with generators of one sign: a scaled numerical semigroup.
#[derive(Debug, Clone)]
pub(crate) struct NumericalEngine {
    step: i64,
    sign: i64,
    members: Vec<bool>,
}

impl NumericalEngine {
    fn new(gens: &[i64], step: i64, sign: i64) -> Self {
        if step == 0 {
            return NumericalEngine {
                step,
                sign,
                members: vec![true],
            };
        }
        let reduced: Vec<usize> = gens
            .iter()
            .filter(|&&g| g != 0)
            .map(|&g| (g.abs() / step) as usize)
            .collect();
        let min = *reduced.iter().min().expect("nonzero generator");
        // grow until `min` consecutive members appear; from there on every value is reachable
        let mut members = vec![true];
        let mut run = 1usize;
        let mut n = 0usize;
        while run < min {
            n += 1;
            let hit = reduced.iter().any(|&g| g <= n && members[n - g]);
            members.push(hit);
            run = if hit { run + 1 } else { 0 };
        }
        let conductor = members.len() - min;
        members.truncate(conductor + 1);
        NumericalEngine {
            step,
            sign,
            members,
        }
    }

    fn contains(&self, x: i64) -> bool {
        let y = self.sign * x;
        if y < 0 {
            return false;
        }
        if self.step == 0 {
            return y == 0;
        }
        if y % self.step != 0 {
            return false;
        }
        let k = (y / self.step) as usize;
        k >= self.members.len() - 1 || self.members[k]
    }

    /// Gaps of the reduced semigroup, when it is numerical (step 1, sign 1).
    pub(crate) fn gaps(&self) -> Vec<i64> {
        (0..self.members.len())
            .filter(|&k| !self.members[k])
            .map(|k| self.sign * self.step * k as i64)
            .collect()
    }
}

#[derive(Debug)]
struct Grid {
    radius: i64,
    side: usize,
    bits: FixedBitSet,
}

impl Grid {
    fn index(&self, v: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for &c in v {
            if c.abs() > self.radius {
                return None;
            }
            idx = idx * self.side + (c + self.radius) as usize;
        }
        Some(idx)
    }
}

#[derive(Debug)]
pub(crate) struct LatticeEngine {
    gens: Vec<Vec<i64>>,
    dim: usize,
    max_norm: i64,
    grid: RwLock<Option<Grid>>,
}

impl LatticeEngine {
    fn new(gens: &[Vec<i64>], dim: usize) -> Self {
        let gens: Vec<Vec<i64>> = gens
            .iter()
            .filter(|g| g.iter().any(|&c| c != 0))
            .cloned()
            .collect();
        let max_norm = gens
            .iter()
            .flat_map(|g| g.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0);
        LatticeEngine {
            gens,
            dim,
            max_norm,
            grid: RwLock::new(None),
        }
    }

    fn required_radius(&self, v: &[i64]) -> i64 {
        let n = v.iter().map(|c| c.abs()).max().unwrap_or(0);
        n + self.dim as i64 * (self.max_norm + n)
    }

    fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        if v.iter().all(|&c| c == 0) {
            return true;
        }
        if self.gens.is_empty() {
            return false;
        }
        let radius = self.required_radius(v);
        {
            let guard = self.grid.read().expect("grid lock poisoned");
            if let Some(grid) = guard.as_ref() {
                if grid.radius >= radius {
                    return grid.index(v).is_some_and(|i| grid.bits.contains(i));
                }
            }
        }
        let mut guard = self.grid.write().expect("grid lock poisoned");
        let current = guard.as_ref().map_or(0, |g| g.radius);
        let target = radius.max(current * 2).max(16);
        let side = (2 * target + 1) as usize;
        if side.checked_pow(self.dim as u32).is_some_and(|n| n <= GRID_LIMIT) {
            let grid = self.build_grid(target, side);
            let hit = grid.index(v).is_some_and(|i| grid.bits.contains(i));
            *guard = Some(grid);
            hit
        } else {
            drop(guard);
            self.search(v, radius)
        }
    }

    fn build_grid(&self, radius: i64, side: usize) -> Grid {
        let mut grid = Grid {
            radius,
            side,
            bits: FixedBitSet::with_capacity(side.pow(self.dim as u32)),
        };
        let origin = vec![0i64; self.dim];
        let start = grid.index(&origin).expect("origin in box");
        grid.bits.insert(start);
        let mut queue = VecDeque::from([origin]);
        while let Some(p) = queue.pop_front() {
            for g in &self.gens {
                let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
                if let Some(i) = grid.index(&q) {
                    if !grid.bits.contains(i) {
                        grid.bits.insert(i);
                        queue.push_back(q);
                    }
                }
            }
        }
        grid
    }

    fn search(&self, target: &[i64], radius: i64) -> bool {
        let origin = vec![0i64; self.dim];
        let mut seen = HashSet::from([origin.clone()]);
        let mut queue = VecDeque::from([origin]);
        while let Some(p) = queue.pop_front() {
            if p == target {
                return true;
            }
            for g in &self.gens {
                let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
                if q.iter().all(|c| c.abs() <= radius) && seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: sums of generators up to `limit` by plain recursion.
    fn representable(x: i64, gens: &[i64]) -> bool {
        if x == 0 {
            return true;
        }
        x > 0 && gens.iter().any(|&g| g <= x && representable(x - g, gens))
    }

    #[test]
    fn two_three_semigroup() {
        let e = Engine::integers(&[2, 3]);
        assert!(e.contains(&Element::Int(7)));
        assert!(!e.contains(&Element::Int(1)));
        assert!(e.contains(&Element::Int(0)));
        assert!(!e.contains(&Element::Int(-2)));
        assert!(e.contains(&Element::Infinity));
    }

    #[test]
    fn numerical_matches_recursion() {
        for gens in [vec![3, 5], vec![3, 4, 5], vec![4, 6, 9], vec![5, 7, 11]] {
            let e = Engine::integers(&gens);
            for x in -5..40 {
                assert_eq!(e.contains(&Element::Int(x)), representable(x, &gens), "{gens:?} {x}");
            }
        }
    }

    #[test]
    fn mixed_signs_give_subgroup() {
        let e = Engine::integers(&[2, 3, -2]);
        assert!(e.contains(&Element::Int(-7)));
        let e = Engine::integers(&[4, -6]);
        assert!(e.contains(&Element::Int(-2)));
        assert!(!e.contains(&Element::Int(3)));
    }

    #[test]
    fn gaps_of_three_four_five() {
        let Engine::Numerical(n) = Engine::integers(&[3, 4, 5]) else {
            panic!()
        };
        assert_eq!(n.gaps(), vec![1, 2]);
    }

    #[test]
    fn quadrant_membership() {
        let e = Engine::lattice(&[vec![1, 0], vec![0, 1]], 2);
        assert!(e.contains(&Element::vector(&[3, 4])));
        assert!(!e.contains(&Element::vector(&[1, -1])));
    }

    #[test]
    fn adjoined_ray_membership() {
        // ⟨N², (-1,3)⟩ = { y ≥ 0, y + 3x ≥ 0 }
        let e = Engine::lattice(&[vec![1, 0], vec![0, 1], vec![-1, 3]], 2);
        for x in -4..=4 {
            for y in -4..=12 {
                let expected = y >= 0 && y + 3 * x >= 0;
                assert_eq!(e.contains(&Element::vector(&[x, y])), expected, "({x},{y})");
            }
        }
    }

    #[test]
    fn non_saturated_membership() {
        // ⟨(2,0),(1,1),(0,2)⟩ misses (1,0) and (0,1) but contains (2,2)
        let e = Engine::lattice(&[vec![2, 0], vec![1, 1], vec![0, 2]], 2);
        assert!(!e.contains(&Element::vector(&[1, 0])));
        assert!(e.contains(&Element::vector(&[3, 1])));
        assert!(!e.contains(&Element::vector(&[2, 1])));
    }

    #[test]
    fn group_generators_give_whole_lattice() {
        let e = Engine::lattice(&[vec![1, 0], vec![0, 1], vec![-1, -1]], 2);
        assert!(e.contains(&Element::vector(&[-5, 3])));
    }

    #[test]
    fn grid_growth_keeps_answers() {
        let e = Engine::lattice(&[vec![1, 0], vec![0, 1], vec![0, -1]], 2);
        assert!(e.contains(&Element::vector(&[1, -1])));
        assert!(e.contains(&Element::vector(&[30, -40])));
        assert!(!e.contains(&Element::vector(&[-30, 2])));
        assert!(e.contains(&Element::vector(&[0, -2])));
    }
}
