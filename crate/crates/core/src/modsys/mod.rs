//! Generalized H-module systems on the quotient groupoid: closure maps
//! `A ↦ A_r` on subsets of `G` given by exact membership oracles on finite `A`.
//!
//! Every system here maps `∅` to `{0}` so that `A ∪ {0} ⊆ A_r` holds for the
//! empty set as well.

mod axioms;
mod family;
mod space;
mod witness;

use std::fmt;
use std::sync::Arc;

pub use axioms::{check_module_axioms, is_finitary, ModuleAxiomOptions, ModuleAxiomRun};
pub use family::{falsify_finitary, FalsifyOutcome, FamilyFile, ParamDelta, ParamFamily, Scale};
pub use space::{NonzeroReading, SystemSpace, UltrafilterLimitSystem};
pub use witness::{extract_finite_witness, meet_finite_witness};

use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid, Overmonoid};

/// A closure map on finite subsets of `G`, decided pointwise.
pub trait ModuleSystem: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn monoid(&self) -> &Monoid;

    /// `g ∈ A_r` for a finite `A ⊆ G`.
    fn contains(&self, a: &[Element], g: &Element) -> bool;

    /// When the system is finitary by construction: a bound on the size of a
    /// finite subset needed to witness any membership.
    fn finitary_width(&self) -> Option<usize> {
        None
    }

    /// Whether `(A_r)_r = A_r` is known by construction.
    fn declared_idempotent(&self) -> bool {
        false
    }

    /// The indexed family behind the system, for systems built from one.
    fn family(&self) -> Option<&ParamDelta> {
        None
    }
}

/// `∃ a ∈ A : g ∈ aS`, with `0·S = {0}`.
fn in_translate(s: &Overmonoid, a: &[Element], g: &Element) -> bool {
    let grp = s.groupoid();
    a.iter().any(|x| match grp.div(g, x) {
        Some(q) => s.contains(&q),
        None => grp.is_zero(g),
    })
}

/// `A ↦ ⋂_{S∈Δ} SA` for a finite nonempty list `Δ` of overmonoids.
#[derive(Debug, Clone)]
pub struct DeltaSystem {
    h: Monoid,
    members: Vec<Overmonoid>,
    name: String,
}

impl DeltaSystem {
    pub fn new(h: &Monoid, members: Vec<Overmonoid>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Precondition("r_Delta needs a nonempty family".to_string()));
        }
        let labels: Vec<&str> = members.iter().map(Overmonoid::label).collect();
        let name = format!("r_{{{}}}", labels.join(","));
        Ok(DeltaSystem {
            h: h.clone(),
            members,
            name,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn members(&self) -> &[Overmonoid] {
        &self.members
    }
}

impl ModuleSystem for DeltaSystem {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn monoid(&self) -> &Monoid {
        &self.h
    }

    fn contains(&self, a: &[Element], g: &Element) -> bool {
        if a.is_empty() || self.h.quotient_groupoid().is_zero(g) {
            return self.h.quotient_groupoid().is_zero(g);
        }
        self.members.iter().all(|s| in_translate(s, a, g))
    }

    fn finitary_width(&self) -> Option<usize> {
        Some(self.members.len())
    }

    fn declared_idempotent(&self) -> bool {
        true
    }
}

/// `ι(S) = r_{{S}}`.
pub fn iota(h: &Monoid, s: &Overmonoid) -> DeltaSystem {
    DeltaSystem::new(h, vec![s.clone()])
        .expect("singleton family")
        .with_name(format!("iota({})", s.label()))
}

/// `A_r = G` when `0 ∈ A`, otherwise `AH ∪ {0}`.
#[derive(Debug, Clone)]
pub struct ZeroCollapse {
    h: Monoid,
}

impl ZeroCollapse {
    pub fn new(h: &Monoid) -> Self {
        ZeroCollapse { h: h.clone() }
    }
}

impl ModuleSystem for ZeroCollapse {
    fn name(&self) -> String {
        "zero-collapse".to_string()
    }

    fn monoid(&self) -> &Monoid {
        &self.h
    }

    fn contains(&self, a: &[Element], g: &Element) -> bool {
        let grp = self.h.quotient_groupoid();
        if a.iter().any(|x| grp.is_zero(x)) {
            return grp.contains(g);
        }
        grp.is_zero(g) || in_translate(&self.h.as_overmonoid(), a, g)
    }

    fn finitary_width(&self) -> Option<usize> {
        Some(1)
    }
}

/// Pointwise intersection `A_{∧τ} = ⋂_{r∈τ} A_r`.
#[derive(Debug, Clone)]
pub struct Meet {
    h: Monoid,
    systems: Vec<Arc<dyn ModuleSystem>>,
}

impl Meet {
    pub fn new(systems: Vec<Arc<dyn ModuleSystem>>) -> Result<Self> {
        let h = systems
            .first()
            .ok_or_else(|| Error::Precondition("the meet needs a nonempty list".to_string()))?
            .monoid()
            .clone();
        Ok(Meet { h, systems })
    }

    pub fn systems(&self) -> &[Arc<dyn ModuleSystem>] {
        &self.systems
    }
}

impl ModuleSystem for Meet {
    fn name(&self) -> String {
        let names: Vec<String> = self.systems.iter().map(|r| r.name()).collect();
        format!("meet({})", names.join(","))
    }

    fn monoid(&self) -> &Monoid {
        &self.h
    }

    fn contains(&self, a: &[Element], g: &Element) -> bool {
        self.systems.iter().all(|r| r.contains(a, g))
    }

    fn finitary_width(&self) -> Option<usize> {
        self.systems.iter().map(|r| r.finitary_width()).sum()
    }
}

/// The finitary closure `Φ(r)`: for finite `A`, the union of `F_r` over all
/// subsets `F ⊆ A`.
#[derive(Debug, Clone)]
pub struct Phi {
    inner: Arc<dyn ModuleSystem>,
}

/// Largest `A` for which the subset union is evaluated literally.
const PHI_LIMIT: usize = 20;

impl Phi {
    pub fn new(inner: Arc<dyn ModuleSystem>) -> Self {
        Phi { inner }
    }
}

impl ModuleSystem for Phi {
    fn name(&self) -> String {
        format!("phi({})", self.inner.name())
    }

    fn monoid(&self) -> &Monoid {
        self.inner.monoid()
    }

    fn contains(&self, a: &[Element], g: &Element) -> bool {
        let n = a.len();
        assert!(n <= PHI_LIMIT, "finitary closure over {n} elements");
        (0..1u32 << n).any(|mask| {
            let f: Vec<Element> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| a[i].clone())
                .collect();
            self.inner.contains(&f, g)
        })
    }

    fn finitary_width(&self) -> Option<usize> {
        self.inner.finitary_width().or(Some(PHI_LIMIT))
    }
}

type ClosureFn = dyn Fn(&Monoid, &[Element], &Element) -> bool + Send + Sync;

/// A map given by an arbitrary membership function, for probing the axiom
/// checker with maps that are not module systems.
#[derive(Clone)]
pub struct FnModuleSystem {
    name: String,
    h: Monoid,
    f: Arc<ClosureFn>,
}

impl FnModuleSystem {
    pub fn new(
        name: &str,
        h: &Monoid,
        f: impl Fn(&Monoid, &[Element], &Element) -> bool + Send + Sync + 'static,
    ) -> Self {
        FnModuleSystem {
            name: name.to_string(),
            h: h.clone(),
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for FnModuleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnModuleSystem").field("name", &self.name).finish()
    }
}

impl ModuleSystem for FnModuleSystem {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn monoid(&self) -> &Monoid {
        &self.h
    }

    fn contains(&self, a: &[Element], g: &Element) -> bool {
        (self.f)(&self.h, a, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naturals() -> Monoid {
        Monoid::numerical(&[1]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Element> {
        v.iter().map(|&x| Element::Int(x)).collect()
    }

    fn members(r: &dyn ModuleSystem, a: &[Element], range: std::ops::RangeInclusive<i64>) -> Vec<i64> {
        range.filter(|&g| r.contains(a, &Element::Int(g))).collect()
    }

    #[test]
    fn delta_over_naturals_and_integers() {
        let h = naturals();
        let r = DeltaSystem::new(&h, vec![h.as_overmonoid(), Overmonoid::whole(&h)]).unwrap();
        // (2+N) ∩ (2+Z)
        assert_eq!(members(&r, &ints(&[2]), -5..=8), (2..=8).collect::<Vec<_>>());
        assert!(r.contains(&ints(&[2]), &Element::Int(5)));
        assert!(r.contains(&ints(&[2]), &Element::Infinity));
        assert!(r.contains(&[], &Element::Infinity));
        assert!(!r.contains(&[], &Element::Int(0)));
    }

    #[test]
    fn delta_of_whole_group() {
        let h = Monoid::numerical(&[2, 3]).unwrap();
        let r = DeltaSystem::new(&h, vec![Overmonoid::whole(&h)]).unwrap();
        assert_eq!(members(&r, &ints(&[7]), -6..=6).len(), 13);
        assert!(DeltaSystem::new(&h, vec![]).is_err());
    }

    #[test]
    fn delta_with_zero_generator() {
        let h = naturals();
        let r = iota(&h, &h.as_overmonoid());
        assert!(members(&r, &[Element::Infinity], -3..=3).is_empty());
        assert!(r.contains(&[Element::Infinity], &Element::Infinity));
    }

    #[test]
    fn delta_over_quadrant_localizations() {
        let h = Monoid::affine(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let primes = crate::ideals::enumerate_primes(&h, 4).unwrap();
        let locs: Vec<Overmonoid> = primes
            .iter()
            .map(|p| crate::ideals::localize(&h, p).unwrap())
            .collect();
        let r = DeltaSystem::new(&h, locs.clone()).unwrap();
        let a = vec![Element::vector(&[1, 0])];
        // box oracle: membership in every translate (1,0) + H_P
        for x in -4..=4 {
            for y in -4..=4 {
                let g = Element::vector(&[x, y]);
                let expected = locs.iter().all(|s| s.contains(&Element::vector(&[x - 1, y])));
                assert_eq!(r.contains(&a, &g), expected);
                if x >= 1 && y >= 0 {
                    assert!(r.contains(&a, &g));
                }
            }
        }
    }

    #[test]
    fn zero_collapse_closures() {
        let h = naturals();
        let r = ZeroCollapse::new(&h);
        // {1}_r = 1 + N with the zero adjoined
        assert!(r.contains(&ints(&[1]), &Element::Int(3)));
        assert!(!r.contains(&ints(&[1]), &Element::Int(-1)));
        assert!(r.contains(&ints(&[1]), &Element::Infinity));
        // the identity generates H, the zero generates G
        assert_eq!(members(&r, &ints(&[0]), -3..=3), vec![0, 1, 2, 3]);
        assert_eq!(members(&r, &[Element::Infinity], -3..=3).len(), 7);
    }

    #[test]
    fn meet_examples() {
        let h = naturals();
        let iota_n: Arc<dyn ModuleSystem> = Arc::new(iota(&h, &h.as_overmonoid()));
        let collapse: Arc<dyn ModuleSystem> = Arc::new(ZeroCollapse::new(&h));
        let m = Meet::new(vec![iota_n.clone(), collapse.clone()]).unwrap();
        assert!(m.contains(&ints(&[1]), &Element::Int(3)));
        assert!(!m.contains(&ints(&[1]), &Element::Int(-2)));
        let rev = Meet::new(vec![collapse, iota_n.clone()]).unwrap();
        let single = Meet::new(vec![iota_n.clone()]).unwrap();
        for a in [ints(&[1]), ints(&[-2, 5]), vec![Element::Infinity]] {
            for g in -4..=6 {
                let g = Element::Int(g);
                assert_eq!(m.contains(&a, &g), rev.contains(&a, &g));
                assert_eq!(single.contains(&a, &g), iota_n.contains(&a, &g));
            }
        }
        assert!(Meet::new(vec![]).is_err());
    }

    #[test]
    fn phi_of_zero_collapse_is_itself() {
        let h = Monoid::numerical(&[2, 3]).unwrap();
        let collapse: Arc<dyn ModuleSystem> = Arc::new(ZeroCollapse::new(&h));
        let p = Phi::new(collapse.clone());
        let pp = Phi::new(Arc::new(p.clone()));
        let w = h.quotient_groupoid().window(5);
        for idx in crate::sampling::subsets_up_to(w.len(), 2) {
            let a: Vec<Element> = idx.iter().map(|&i| w[i].clone()).collect();
            for g in &w {
                assert_eq!(p.contains(&a, g), collapse.contains(&a, g));
                assert_eq!(pp.contains(&a, g), p.contains(&a, g));
            }
        }
    }

    #[test]
    fn phi_repairs_a_non_monotone_map() {
        // A ↦ {0} ∪ (A when |A| = 1): the union over subsets recovers A itself
        let h = naturals();
        let odd: Arc<dyn ModuleSystem> = Arc::new(FnModuleSystem::new("singletons", &h, |h, a, g| {
            h.quotient_groupoid().is_zero(g) || (a.len() == 1 && a.contains(g))
        }));
        let p = Phi::new(odd.clone());
        let a = ints(&[1, 2]);
        assert!(!odd.contains(&a, &Element::Int(1)));
        assert!(p.contains(&a, &Element::Int(1)) && p.contains(&a, &Element::Int(2)));
    }
}
