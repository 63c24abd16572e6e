use std::sync::Arc;

use rand::Rng;

use super::ModuleSystem;
use crate::error::{Error, Result};
use crate::fintop::PrincipalUltrafilter;
use crate::fintop::FiniteSpace;
use crate::monoid::{format_set, Element, Monoid};
use crate::sampling::{random_subset, rng, subsets_up_to};

/// How "nonzero subsets" is read when ranging `U_S` over subsets `S ⊆ G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonzeroReading {
    /// Nonempty subsets of `G ∖ {0}`.
    AvoidZero,
    /// All nonempty subsets of `G`.
    Nonempty,
}

impl NonzeroReading {
    pub fn as_str(self) -> &'static str {
        match self {
            NonzeroReading::AvoidZero => "nonempty subsets of G\\{0}",
            NonzeroReading::Nonempty => "nonempty subsets of G",
        }
    }
}

/// A finite carrier of module systems with the subbasis `U_S = {r : 1 ∈ S_r}`
/// evaluated on a pool of witness sets.
#[derive(Debug)]
pub struct SystemSpace {
    h: Monoid,
    systems: Vec<Arc<dyn ModuleSystem>>,
    window: Vec<Element>,
    pool: Vec<Vec<Element>>,
}

/// Random pool sets on top of the small window subsets.
const RANDOM_POOL: usize = 100;

impl SystemSpace {
    /// Pool: all nonempty window subsets of size at most 2 plus 100 seeded
    /// random subsets of size at most 4.
    pub fn new(systems: Vec<Arc<dyn ModuleSystem>>, window: Vec<Element>, seed: u64) -> Result<Self> {
        let h = systems
            .first()
            .ok_or_else(|| Error::Precondition("a system space needs a system".to_string()))?
            .monoid()
            .clone();
        if systems.len() > 64 {
            return Err(Error::CarrierTooLarge {
                size: systems.len(),
                limit: 64,
            });
        }
        let pick = |idx: &[usize]| -> Vec<Element> { idx.iter().map(|&i| window[i].clone()).collect() };
        let mut pool: Vec<Vec<Element>> = subsets_up_to(window.len(), 2)
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| pick(s))
            .collect();
        let mut r = rng(seed);
        for _ in 0..RANDOM_POOL {
            pool.push(pick(&random_subset(&mut r, window.len(), 1, 4)));
        }
        Ok(SystemSpace {
            h,
            systems,
            window,
            pool,
        })
    }

    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    pub fn systems(&self) -> &[Arc<dyn ModuleSystem>] {
        &self.systems
    }

    pub fn window(&self) -> &[Element] {
        &self.window
    }

    pub fn pool(&self) -> &[Vec<Element>] {
        &self.pool
    }

    pub fn labels(&self) -> Vec<String> {
        self.systems.iter().map(|r| r.name()).collect()
    }

    fn pool_for(&self, reading: NonzeroReading) -> impl Iterator<Item = &Vec<Element>> {
        let grp = self.h.quotient_groupoid().clone();
        self.pool
            .iter()
            .filter(move |s| reading == NonzeroReading::Nonempty || !s.iter().any(|e| grp.is_zero(e)))
    }

    /// `r_i ∈ U_{S,g}`, i.e. `g ∈ S_{r_i}`; `S` must be nonempty.
    pub fn in_u_g(&self, i: usize, s: &[Element], g: &Element) -> Result<bool> {
        if s.is_empty() {
            return Err(Error::Precondition("U_S is defined for nonempty S".to_string()));
        }
        Ok(self.systems[i].contains(s, g))
    }

    /// `r_i ∈ U_S`, i.e. `1 ∈ S_{r_i}`.
    pub fn in_u(&self, i: usize, s: &[Element]) -> Result<bool> {
        self.in_u_g(i, s, &self.h.one())
    }

    /// `U_{S,g}` as a mask over the carrier.
    pub fn u_g_mask(&self, s: &[Element], g: &Element) -> Result<u64> {
        let mut mask = 0u64;
        for i in 0..self.len() {
            if self.in_u_g(i, s, g)? {
                mask |= 1 << i;
            }
        }
        Ok(mask)
    }

    pub fn u_mask(&self, s: &[Element]) -> Result<u64> {
        self.u_g_mask(s, &self.h.one())
    }

    /// The carrier topologized by `U_S` for the pool sets allowed by `reading`.
    pub fn space(&self, reading: NonzeroReading) -> Result<FiniteSpace> {
        let mut subbasis = Vec::new();
        for s in self.pool_for(reading) {
            let m = self.u_mask(s)?;
            if !subbasis.contains(&m) {
                subbasis.push(m);
            }
        }
        FiniteSpace::new(self.labels(), subbasis)
    }

    /// A pool set `S` with exactly one of `r_i, r_j` in `U_S`.
    pub fn separating_set(&self, i: usize, j: usize, reading: NonzeroReading) -> Option<Vec<Element>> {
        self.pool_for(reading)
            .find(|s| self.systems[i].contains(s, &self.h.one()) != self.systems[j].contains(s, &self.h.one()))
            .cloned()
    }

    /// Separation through an arbitrary target: finds `(S, g)` with `g ≠ 0`
    /// telling `r_i` and `r_j` apart and returns `g⁻¹S`, which separates them
    /// through `U_{g⁻¹S}` when both systems satisfy Id3.
    pub fn reduced_separation(&self, i: usize, j: usize) -> Option<(Vec<Element>, Element, Vec<Element>)> {
        let grp = self.h.quotient_groupoid();
        for s in &self.pool {
            for g in self.window.iter().filter(|g| !grp.is_zero(g)) {
                if self.systems[i].contains(s, g) != self.systems[j].contains(s, g) {
                    let inv = grp.inverse(g).expect("nonzero");
                    let reduced: Vec<Element> = s.iter().map(|x| grp.mul(&inv, x)).collect();
                    return Some((s.clone(), g.clone(), reduced));
                }
            }
        }
        None
    }

    /// The system `S ↦ {g : U_{S,g} ∈ 𝒰}` for the principal ultrafilter at `at`.
    pub fn ultrafilter_limit(self: &Arc<Self>, at: usize) -> Result<UltrafilterLimitSystem> {
        Ok(UltrafilterLimitSystem {
            space: Arc::clone(self),
            u: PrincipalUltrafilter::new(at, self.len())?,
        })
    }

    /// Compares the limit system at `at` with the base system on `probes`
    /// seeded `(S, g)` pairs from the pool and window. Returns the number of
    /// probes and the first disagreement.
    pub fn check_limit(self: &Arc<Self>, at: usize, probes: usize, seed: u64) -> Result<(usize, Option<String>)> {
        let limit = self.ultrafilter_limit(at)?;
        let base = &self.systems[at];
        let mut r = rng(seed);
        for n in 0..probes {
            let s = &self.pool[r.gen_range(0..self.pool.len())];
            let g = &self.window[r.gen_range(0..self.window.len())];
            if limit.contains(s, g) != base.contains(s, g) {
                return Ok((n + 1, Some(format!("S={} g={g}", format_set(s)))));
            }
        }
        Ok((probes, None))
    }
}

/// `S ↦ {g ∈ G : U_{S,g} ∈ 𝒰}` for a principal ultrafilter on a carrier.
#[derive(Debug, Clone)]
pub struct UltrafilterLimitSystem {
    space: Arc<SystemSpace>,
    u: PrincipalUltrafilter,
}

impl ModuleSystem for UltrafilterLimitSystem {
    fn name(&self) -> String {
        format!("r_U[{}]", self.space.systems[self.u.point()].name())
    }

    fn monoid(&self) -> &Monoid {
        &self.space.h
    }

    fn contains(&self, a: &[Element], g: &Element) -> bool {
        let mut mask = 0u64;
        for (i, r) in self.space.systems.iter().enumerate() {
            if r.contains(a, g) {
                mask |= 1 << i;
            }
        }
        self.u.contains(mask)
    }
}
