//! Ideal systems on a monoid, r-ideals, prime spectra and their Zariski
//! subbases.

mod axioms;
mod spectrum;

use std::fmt;
use std::sync::Arc;

pub use axioms::{check_ideal_axioms, AxiomOptions};
pub(crate) use axioms::subset_pool;
pub use spectrum::{
    enumerate_ideals, enumerate_primes, ideal_space, is_prime, localize, o_set,
    prime_from_ultrafilter, spec_space, ultrafilter_limit_ideal, SpecPoint,
};

use crate::monoid::{format_set, Element, Monoid};

/// A closure operator `X ↦ X_r` on finite subsets of `H`, given by exact
/// membership in the closure.
pub trait IdealSystem: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn monoid(&self) -> &Monoid;

    /// `g ∈ X_r`.
    fn contains(&self, x: &[Element], g: &Element) -> bool;

    /// Whether the system is known to be finitary by construction.
    fn is_finitary(&self) -> bool {
        false
    }
}

/// `X_s = XH`, with `∅_s = {0}`.
#[derive(Debug, Clone)]
pub struct SSystem {
    h: Monoid,
}

impl SSystem {
    pub fn new(h: &Monoid) -> Self {
        SSystem { h: h.clone() }
    }
}

/// `g ∈ xH` in the groupoid of `h`.
pub(crate) fn in_principal(h: &Monoid, x: &Element, g: &Element) -> bool {
    let grp = h.quotient_groupoid();
    if grp.is_zero(x) {
        return grp.is_zero(g);
    }
    grp.div(g, x).is_some_and(|q| h.contains(&q))
}

impl IdealSystem for SSystem {
    fn name(&self) -> String {
        "s".to_string()
    }

    fn monoid(&self) -> &Monoid {
        &self.h
    }

    fn contains(&self, x: &[Element], g: &Element) -> bool {
        if x.is_empty() {
            return self.h.quotient_groupoid().is_zero(g);
        }
        x.iter().any(|a| in_principal(&self.h, a, g))
    }

    fn is_finitary(&self) -> bool {
        true
    }
}

/// `X_{r_s} = ⋃ { E_r : E ⊆ X finite }`; for finite `X` the union runs over all
/// subsets of `X`.
#[derive(Debug, Clone)]
pub struct Finitary {
    inner: Arc<dyn IdealSystem>,
}

pub fn finitary_of(r: Arc<dyn IdealSystem>) -> Finitary {
    Finitary { inner: r }
}

impl IdealSystem for Finitary {
    fn name(&self) -> String {
        format!("{}_s", self.inner.name())
    }

    fn monoid(&self) -> &Monoid {
        self.inner.monoid()
    }

    fn contains(&self, x: &[Element], g: &Element) -> bool {
        let n = x.len();
        assert!(n < 24, "finitary closure over {n} generators");
        (0..1u32 << n).any(|mask| {
            let e: Vec<Element> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| x[i].clone())
                .collect();
            self.inner.contains(&e, g)
        })
    }

    fn is_finitary(&self) -> bool {
        true
    }
}

type ClosureFn = dyn Fn(&Monoid, &[Element], &Element) -> bool + Send + Sync;

/// A system given by an arbitrary membership function, used for probing the
/// axiom checker with maps that are not ideal systems.
#[derive(Clone)]
pub struct FnSystem {
    name: String,
    h: Monoid,
    f: Arc<ClosureFn>,
}

impl FnSystem {
    pub fn new(
        name: &str,
        h: &Monoid,
        f: impl Fn(&Monoid, &[Element], &Element) -> bool + Send + Sync + 'static,
    ) -> Self {
        FnSystem {
            name: name.to_string(),
            h: h.clone(),
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for FnSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSystem").field("name", &self.name).finish()
    }
}

impl IdealSystem for FnSystem {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn monoid(&self) -> &Monoid {
        &self.h
    }

    fn contains(&self, x: &[Element], g: &Element) -> bool {
        (self.f)(&self.h, x, g)
    }
}

/// The r-ideal generated by a finite set.
#[derive(Debug, Clone)]
pub struct RIdeal {
    system: Arc<dyn IdealSystem>,
    generators: Vec<Element>,
}

impl RIdeal {
    pub fn new(system: Arc<dyn IdealSystem>, generators: Vec<Element>) -> Self {
        RIdeal { system, generators }
    }

    /// The s-ideal of `h` generated by `generators`.
    pub fn s_ideal(h: &Monoid, generators: Vec<Element>) -> Self {
        RIdeal::new(Arc::new(SSystem::new(h)), generators)
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn system(&self) -> &Arc<dyn IdealSystem> {
        &self.system
    }

    pub fn monoid(&self) -> &Monoid {
        self.system.monoid()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.system.contains(&self.generators, g)
    }

    /// `self ⊆ other`, decided on generators.
    pub fn is_subset_of(&self, other: &RIdeal) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_as(&self, other: &RIdeal) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn is_proper(&self) -> bool {
        !self.contains(&self.monoid().one())
    }

    pub fn trace(&self, window: &[Element]) -> Vec<bool> {
        window.iter().map(|g| self.contains(g)).collect()
    }

    pub fn label(&self) -> String {
        if self.generators.is_empty() {
            "{inf}".to_string()
        } else {
            format!("({})_{}", format_set(&self.generators), self.system.name())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_three() -> Monoid {
        Monoid::numerical(&[2, 3]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Element> {
        v.iter().map(|&x| Element::Int(x)).collect()
    }

    #[test]
    fn s_closure_of_two() {
        let h = two_three();
        let s = SSystem::new(&h);
        let members: Vec<i64> = (-3..=20).filter(|&g| s.contains(&ints(&[2]), &Element::Int(g))).collect();
        let mut expected = vec![2];
        expected.extend(4..=20);
        assert_eq!(members, expected);
        assert!(s.contains(&ints(&[2]), &Element::Infinity));
    }

    #[test]
    fn empty_closure_is_zero() {
        let h = two_three();
        let s = SSystem::new(&h);
        for g in h.window(10) {
            assert_eq!(s.contains(&[], &g), g.is_infinity());
        }
    }

    #[test]
    fn quadrant_principal_closure() {
        let h = Monoid::affine(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let s = SSystem::new(&h);
        let x = vec![Element::vector(&[1, 0])];
        for g in h.quotient_groupoid().window(4) {
            let expected = match &g {
                Element::Vector(v) => v[0] >= 1 && v[1] >= 0,
                _ => true,
            };
            assert_eq!(s.contains(&x, &g), expected, "{g}");
        }
    }

    #[test]
    fn finitary_of_s_is_s() {
        let h = two_three();
        let s: Arc<dyn IdealSystem> = Arc::new(SSystem::new(&h));
        let fs = finitary_of(s.clone());
        let ffs = finitary_of(Arc::new(fs.clone()));
        let w = h.window(8);
        for x in crate::sampling::subsets_up_to(w.len(), 3) {
            let xs: Vec<Element> = x.iter().map(|&i| w[i].clone()).collect();
            for g in &w {
                assert_eq!(s.contains(&xs, g), fs.contains(&xs, g));
                assert_eq!(fs.contains(&xs, g), ffs.contains(&xs, g));
            }
        }
        let members: Vec<i64> = (0..=10)
            .filter(|&g| fs.contains(&ints(&[2, 3]), &Element::Int(g)))
            .collect();
        assert_eq!(members, (2..=10).collect::<Vec<_>>());
    }

    #[test]
    fn ideal_equality_by_generators() {
        let h = two_three();
        let a = RIdeal::s_ideal(&h, ints(&[2, 3]));
        let b = RIdeal::s_ideal(&h, ints(&[2, 3, 4, 7]));
        let c = RIdeal::s_ideal(&h, ints(&[2]));
        assert!(a.same_as(&b));
        assert!(c.is_subset_of(&a) && !a.is_subset_of(&c));
        assert!(!RIdeal::s_ideal(&h, ints(&[0])).is_proper());
    }
}
