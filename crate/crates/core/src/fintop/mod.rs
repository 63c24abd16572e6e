//! Finite topological spaces presented by a subbasis.
//!
//! Points are indexed `0..n` with `n ≤ 64`; subsets are `u64` masks. A finite
//! topology is determined by the minimal open neighbourhood `U_x` of each
//! point (the intersection of the subbasis members containing `x`), so most
//! predicates work from those masks. The full open-set lattice is only
//! materialized for at most [`OPENS_LIMIT`] points.

mod ultrafilter;

use std::collections::BTreeSet;
use std::fmt::Write as _;

pub use ultrafilter::{
    check_ultrafilter_laws, ultrafilter_limit_set, PrincipalUltrafilter, UltrafilterLaws,
};

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 64;
pub const OPENS_LIMIT: usize = 20;

pub fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn mask_of(points: impl IntoIterator<Item = usize>) -> u64 {
    points.into_iter().fold(0, |m, p| m | (1 << p))
}

pub fn points_of(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    subbasis: Vec<u64>,
    min_open: Vec<u64>,
}

/// Verdicts of the Hochster conditions on a finite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralReport {
    pub t0: bool,
    pub quasi_compact: bool,
    pub sober: bool,
    pub compact_opens_form_basis: bool,
    pub compact_opens_closed_under_intersection: bool,
}

impl SpectralReport {
    pub fn hochster(&self) -> bool {
        self.quasi_compact
            && self.sober
            && self.compact_opens_form_basis
            && self.compact_opens_closed_under_intersection
    }
}

impl FiniteSpace {
    /// Builds the topology generated by `subbasis` on `labels.len()` points.
    pub fn new(labels: Vec<String>, subbasis: Vec<u64>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_POINTS {
            return Err(Error::CarrierTooLarge {
                size: n,
                limit: MAX_POINTS,
            });
        }
        let full = full_mask(n);
        if let Some(s) = subbasis.iter().find(|&&s| s & !full != 0) {
            return Err(Error::Precondition(format!(
                "subbasis member {s:#x} is not a subset of the {n} points"
            )));
        }
        let min_open = (0..n)
            .map(|x| {
                subbasis
                    .iter()
                    .filter(|&&s| s >> x & 1 == 1)
                    .fold(full, |acc, s| acc & s)
            })
            .collect();
        Ok(FiniteSpace {
            labels,
            subbasis,
            min_open,
        })
    }

    /// Space on `0..n` with numeric labels.
    pub fn unlabeled(n: usize, subbasis: Vec<u64>) -> Result<Self> {
        FiniteSpace::new((0..n).map(|i| i.to_string()).collect(), subbasis)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn subbasis(&self) -> &[u64] {
        &self.subbasis
    }

    pub fn full(&self) -> u64 {
        full_mask(self.len())
    }

    /// Smallest open set containing `x`.
    pub fn min_open(&self, x: usize) -> u64 {
        self.min_open[x]
    }

    pub fn interior(&self, set: u64) -> u64 {
        (0..self.len())
            .filter(|&x| self.min_open[x] & !set == 0)
            .fold(0, |m, x| m | 1 << x)
    }

    pub fn is_open(&self, set: u64) -> bool {
        self.interior(set) == set
    }

    pub fn is_closed(&self, set: u64) -> bool {
        self.is_open(self.full() & !set)
    }

    pub fn closure(&self, set: u64) -> u64 {
        (0..self.len())
            .filter(|&y| self.min_open[y] & set != 0)
            .fold(0, |m, y| m | 1 << y)
    }

    /// Every open set, sorted. Guarded because the lattice can be exponential.
    pub fn opens(&self) -> Result<Vec<u64>> {
        if self.len() > OPENS_LIMIT {
            return Err(Error::CarrierTooLarge {
                size: self.len(),
                limit: OPENS_LIMIT,
            });
        }
        let mut opens: BTreeSet<u64> = BTreeSet::from([0]);
        for &u in &self.min_open {
            let current: Vec<u64> = opens.iter().copied().collect();
            for o in current {
                opens.insert(o | u);
            }
        }
        opens.insert(self.full());
        Ok(opens.into_iter().collect())
    }

    /// `x ≤ y` in the specialization order: `y ∈ cl{x}`, i.e. `x ∈ U_y`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.min_open[y] >> x & 1 == 1
    }

    /// The specialization relation as a matrix.
    pub fn specialization_order(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|x| (0..self.len()).map(|y| self.specializes(x, y)).collect())
            .collect()
    }

    /// Pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let strictly = |a: usize, b: usize| a != b && self.specializes(a, b) && !self.specializes(b, a);
        let mut edges = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if strictly(x, y) && !(0..n).any(|z| strictly(x, z) && strictly(z, y)) {
                    edges.push((x, y));
                }
            }
        }
        edges
    }

    /// First pair of distinct points with the same neighbourhoods, if any.
    pub fn t0_violation(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| self.min_open[x] == self.min_open[y])
    }

    pub fn is_t0(&self) -> bool {
        self.t0_violation().is_none()
    }

    /// Whether a nonempty closed set is irreducible: any two opens meeting it
    /// meet each other inside it. Basic opens suffice.
    pub fn is_irreducible(&self, closed: u64) -> bool {
        closed != 0
            && points_of(closed).all(|x| {
                points_of(closed).all(|y| self.min_open[x] & self.min_open[y] & closed != 0)
            })
    }

    /// Points whose closure is exactly `closed`.
    pub fn generic_points(&self, closed: u64) -> Vec<usize> {
        points_of(closed)
            .filter(|&x| self.closure(1 << x) == closed)
            .collect()
    }

    /// Every irreducible closed set has exactly one generic point. Closed sets
    /// are enumerated from the open lattice when it is small enough; larger
    /// spaces use point closures, which are the only irreducible closed sets
    /// of a finite space.
    pub fn is_sober(&self) -> bool {
        let candidates: Vec<u64> = match self.opens() {
            Ok(opens) => opens.iter().map(|o| self.full() & !o).collect(),
            Err(_) => (0..self.len()).map(|x| self.closure(1 << x)).collect(),
        };
        candidates
            .into_iter()
            .filter(|&c| self.is_irreducible(c))
            .all(|c| self.generic_points(c).len() == 1)
    }

    /// Alexander-style check on `y`: the subbasis members covering `y` (together
    /// with the whole space, which is always open) admit a finite subcover.
    /// Returns the subcover, chosen greedily, or `None` when `y` is not covered.
    pub fn subbasis_subcover(&self, y: u64) -> Option<Vec<u64>> {
        let mut family: Vec<u64> = self.subbasis.clone();
        family.push(self.full());
        let mut left = y;
        let mut cover = Vec::new();
        while left != 0 {
            let best = *family.iter().max_by_key(|s| (*s & left).count_ones())?;
            if best & left == 0 {
                return None;
            }
            cover.push(best);
            left &= !best;
        }
        Some(cover)
    }

    /// Direct check on `y`: every cover by open sets has a finite subcover. The
    /// family of all opens covers, and one minimal neighbourhood per point of
    /// `y` is a subcover of any cover.
    pub fn open_subcover(&self, y: u64) -> Vec<u64> {
        let mut cover: Vec<u64> = points_of(y).map(|x| self.min_open[x]).collect();
        cover.sort_unstable();
        cover.dedup();
        cover
    }

    pub fn is_quasi_compact(&self, y: u64) -> bool {
        let direct = self.open_subcover(y).iter().fold(0, |m, s| m | s) & y == y;
        let alexander = self.subbasis_subcover(y).is_some();
        direct && alexander
    }

    /// Hochster conditions. In a finite space every open is quasi-compact, so
    /// the basis and intersection conditions reduce to checks on the
    /// minimal neighbourhoods.
    pub fn spectral_report(&self) -> SpectralReport {
        let qc_opens_basis = (0..self.len()).all(|x| {
            self.is_quasi_compact(self.min_open[x]) && self.is_open(self.min_open[x])
        });
        let closed_under_meet = (0..self.len()).all(|x| {
            (0..self.len()).all(|y| {
                let m = self.min_open[x] & self.min_open[y];
                self.is_open(m) && self.is_quasi_compact(m)
            })
        });
        SpectralReport {
            t0: self.is_t0(),
            quasi_compact: self.is_quasi_compact(self.full()),
            sober: self.is_sober(),
            compact_opens_form_basis: qc_opens_basis,
            compact_opens_closed_under_intersection: closed_under_meet,
        }
    }

    /// Spectral for a finite space is T0; the Hochster conditions must agree.
    pub fn is_spectral_finite(&self) -> bool {
        self.is_t0()
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.len()).all(|x| self.min_open[x] == 1 << x)
    }

    pub fn is_hausdorff(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (x + 1..n).all(|y| self.min_open[x] & self.min_open[y] == 0))
    }

    /// Connected components, as masks in order of their least point.
    pub fn components(&self) -> Vec<u64> {
        let n = self.len();
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            loop {
                // grow through overlapping neighbourhoods
                let grown = (0..n)
                    .filter(|&x| comp >> x & 1 == 1 || self.min_open[x] & comp != 0)
                    .fold(comp, |m, x| m | self.min_open[x] | 1 << x);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_totally_disconnected(&self) -> bool {
        self.components().iter().all(|c| c.count_ones() == 1)
    }

    /// The constructible topology, generated by quasi-compact opens and their
    /// complements. Requires a spectral (T0) space.
    pub fn patch_topology(&self) -> Result<FiniteSpace> {
        if let Some((x, y)) = self.t0_violation() {
            return Err(Error::Precondition(format!(
                "patch topology needs a spectral space; points {} and {} are indistinguishable",
                self.labels[x], self.labels[y]
            )));
        }
        let mut subbasis = self.min_open.clone();
        subbasis.extend(self.min_open.iter().map(|u| self.full() & !u));
        FiniteSpace::new(self.labels.clone(), subbasis)
    }

    /// Subspace on the points of `mask`, relabelled in increasing order.
    pub fn subspace(&self, mask: u64) -> FiniteSpace {
        let pts: Vec<usize> = points_of(mask).collect();
        let restrict = |s: u64| {
            pts.iter()
                .enumerate()
                .filter(|(_, &p)| s >> p & 1 == 1)
                .fold(0u64, |m, (i, _)| m | 1 << i)
        };
        FiniteSpace::new(
            pts.iter().map(|&p| self.labels[p].clone()).collect(),
            self.subbasis.iter().map(|&s| restrict(s)).collect(),
        )
        .expect("subspace of a valid space")
    }

    /// Graphviz rendering of the specialization Hasse diagram, edges pointing
    /// from a point to its specializations.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", l.replace('"', "'"));
        }
        for (x, y) in self.hasse_edges() {
            let _ = writeln!(out, "  n{x} -> n{y};");
        }
        out.push_str("}\n");
        out
    }

    /// Text listing of the open sets, one per line, for at most 8 points.
    pub fn open_lattice_text(&self) -> Result<String> {
        if self.len() > 8 {
            return Err(Error::CarrierTooLarge {
                size: self.len(),
                limit: 8,
            });
        }
        let mut out = String::new();
        for o in self.opens()? {
            let names: Vec<&str> = points_of(o).map(|p| self.labels[p].as_str()).collect();
            let _ = writeln!(out, "{{{}}}", names.join(", "));
        }
        Ok(out)
    }
}

/// Isomorphism of specialization preorders, found by backtracking. Finite
/// topologies correspond exactly to preorders, so this decides homeomorphism.
/// Returns `map[x]` = image of point `x`.
pub fn homeomorphism(a: &FiniteSpace, b: &FiniteSpace) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let pa = a.specialization_order();
    let pb = b.specialization_order();
    let profile = |p: &Vec<Vec<bool>>, x: usize| {
        let up = (0..n).filter(|&y| p[x][y]).count();
        let down = (0..n).filter(|&y| p[y][x]).count();
        (up, down)
    };
    let prof_a: Vec<_> = (0..n).map(|x| profile(&pa, x)).collect();
    let prof_b: Vec<_> = (0..n).map(|x| profile(&pb, x)).collect();
    let mut sa = prof_a.clone();
    let mut sb = prof_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    fn extend(
        x: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        pa: &[Vec<bool>],
        pb: &[Vec<bool>],
        prof_a: &[(usize, usize)],
        prof_b: &[(usize, usize)],
    ) -> bool {
        let n = pa.len();
        if x == n {
            return true;
        }
        for y in 0..n {
            if used[y] || prof_a[x] != prof_b[y] {
                continue;
            }
            let consistent = (0..x).all(|z| pa[x][z] == pb[y][map[z]] && pa[z][x] == pb[map[z]][y])
                && pa[x][x] == pb[y][y];
            if !consistent {
                continue;
            }
            map.push(y);
            used[y] = true;
            if extend(x + 1, map, used, pa, pb, prof_a, prof_b) {
                return true;
            }
            map.pop();
            used[y] = false;
        }
        false
    }
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(0, &mut map, &mut used, &pa, &pb, &prof_a, &prof_b).then_some(map)
}

pub fn homeomorphic(a: &FiniteSpace, b: &FiniteSpace) -> bool {
    homeomorphism(a, b).is_some()
}

/// Image of a mask under a point map.
pub fn map_mask(mask: u64, map: &[usize]) -> u64 {
    points_of(mask).fold(0, |m, p| m | 1 << map[p])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FiniteSpace {
        FiniteSpace::unlabeled(2, vec![0b01]).unwrap()
    }

    fn quadrant_spectrum() -> FiniteSpace {
        // points: {inf}, P_x, P_y, M; D(f) for f = (1,1), (1,0), (0,1), (0,0)
        FiniteSpace::new(
            vec!["{inf}".into(), "P_x".into(), "P_y".into(), "M".into()],
            vec![0b0001, 0b0011, 0b0101, 0b1111],
        )
        .unwrap()
    }

    #[test]
    fn sierpinski_space() {
        let s = sierpinski();
        assert_eq!(s.opens().unwrap(), vec![0, 1, 3]);
        assert!(s.is_t0());
        assert!(s.is_sober());
        assert!(s.specializes(0, 1));
        assert!(!s.specializes(1, 0));
        assert_eq!(s.hasse_edges(), vec![(0, 1)]);
    }

    #[test]
    fn singleton_subbasis_is_discrete() {
        let d = FiniteSpace::unlabeled(3, vec![1, 2, 4]).unwrap();
        assert!(d.is_discrete());
        assert_eq!(d.opens().unwrap().len(), 8);
    }

    #[test]
    fn indiscrete_pair() {
        let s = FiniteSpace::unlabeled(2, vec![]).unwrap();
        assert!(!s.is_t0());
        assert!(!s.is_spectral_finite());
        assert!(!s.is_sober());
        assert!(s.patch_topology().is_err());
    }

    #[test]
    fn quadrant_diamond() {
        let s = quadrant_spectrum();
        assert!(s.is_t0() && s.is_sober());
        let mut edges = s.hasse_edges();
        edges.sort();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        let p = s.patch_topology().unwrap();
        assert!(p.is_discrete() && p.is_hausdorff() && p.is_totally_disconnected());
    }

    #[test]
    fn chain_versus_antichain() {
        let chain = sierpinski();
        let anti = FiniteSpace::unlabeled(2, vec![1, 2]).unwrap();
        assert!(!homeomorphic(&chain, &anti));
        let flipped = FiniteSpace::unlabeled(2, vec![0b10]).unwrap();
        assert_eq!(homeomorphism(&chain, &flipped), Some(vec![1, 0]));
    }

    #[test]
    fn hochster_agrees_with_t0() {
        for s in [sierpinski(), quadrant_spectrum()] {
            let r = s.spectral_report();
            assert!(r.t0 && r.hochster());
        }
    }

    #[test]
    fn components_of_disjoint_union() {
        let s = FiniteSpace::unlabeled(4, vec![0b0001, 0b0011, 0b1100]).unwrap();
        assert_eq!(s.components(), vec![0b0011, 0b1100]);
    }

    #[test]
    fn dot_and_lattice_text() {
        let s = sierpinski();
        let dot = s.to_dot("s");
        assert!(dot.contains("n0 -> n1"));
        assert_eq!(s.open_lattice_text().unwrap(), "{}\n{0}\n{0, 1}\n");
        let empty = FiniteSpace::unlabeled(0, vec![]).unwrap();
        assert_eq!(empty.to_dot("e"), "digraph \"e\" {\n  rankdir=BT;\n}\n");
    }

    #[test]
    fn opens_guard() {
        let big = FiniteSpace::unlabeled(21, vec![]).unwrap();
        assert!(matches!(big.opens(), Err(Error::CarrierTooLarge { .. })));
        // predicates that avoid the lattice still work
        assert!(!big.is_t0());
        assert!(big.is_quasi_compact(big.full()));
    }
}
