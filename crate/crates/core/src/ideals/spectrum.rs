use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{IdealSystem, RIdeal, SSystem};
use crate::error::{Error, Result};
use crate::fintop::{FiniteSpace, PrincipalUltrafilter};
use crate::monoid::lattice::{cone_facets, dot};
use crate::monoid::{format_set, Element, Monoid, MonoidKind, Overmonoid};

/// A prime s-ideal together with the window on which primality was certified.
#[derive(Debug, Clone)]
pub struct SpecPoint {
    ideal: RIdeal,
    label: String,
    certified_bound: i64,
}

impl SpecPoint {
    /// Wraps `ideal` after checking primality on `H ∩ window(bound)`.
    pub fn certify(ideal: RIdeal, label: impl Into<String>, bound: i64) -> Result<Self> {
        let window = ideal.monoid().window(bound);
        if let Some((a, b)) = is_prime(&ideal, &window)? {
            return Err(Error::NotPrime(format!(
                "{}: {a} and {b} lie outside but their product lies inside",
                ideal.label()
            )));
        }
        Ok(SpecPoint {
            ideal,
            label: label.into(),
            certified_bound: bound,
        })
    }

    pub fn ideal(&self) -> &RIdeal {
        &self.ideal
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn certified_bound(&self) -> i64 {
        self.certified_bound
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.ideal.contains(g)
    }
}

/// Primality on a window: `Ok(None)` when no `a, b ∈ window ∖ I` have
/// `ab ∈ I`, otherwise the first such pair. Errors when `I = H`.
pub fn is_prime(ideal: &RIdeal, window: &[Element]) -> Result<Option<(Element, Element)>> {
    if !ideal.is_proper() {
        return Err(Error::Precondition(format!(
            "{} contains the identity and is not proper",
            ideal.label()
        )));
    }
    let h = ideal.monoid();
    let outside: Vec<&Element> = window
        .iter()
        .filter(|e| h.contains(e) && !ideal.contains(e))
        .collect();
    for (i, a) in outside.iter().enumerate() {
        for b in &outside[i..] {
            if ideal.contains(&h.quotient_groupoid().mul(a, b)) {
                return Ok(Some(((*a).clone(), (*b).clone())));
            }
        }
    }
    Ok(None)
}

fn s_system(h: &Monoid) -> Arc<dyn IdealSystem> {
    Arc::new(SSystem::new(h))
}

/// Every s-ideal of a finite monoid: unions of principal ideals.
fn finite_ideals(h: &Monoid) -> Vec<RIdeal> {
    let elems = h.window(0);
    let sys = s_system(h);
    let trace = |gens: &[Element]| {
        let mut bits = FixedBitSet::with_capacity(elems.len());
        for (i, g) in elems.iter().enumerate() {
            bits.set(i, sys.contains(gens, g));
        }
        bits
    };
    let mut found: BTreeMap<Vec<usize>, Vec<Element>> = BTreeMap::new();
    let mut frontier = vec![Vec::<Element>::new()];
    found.insert(trace(&[]).ones().collect(), Vec::new());
    while let Some(gens) = frontier.pop() {
        for x in &elems {
            let mut next = gens.clone();
            next.push(x.clone());
            let key: Vec<usize> = trace(&next).ones().collect();
            if let std::collections::btree_map::Entry::Vacant(e) = found.entry(key) {
                e.insert(next.clone());
                frontier.push(next);
            }
        }
    }
    let mut ideals: Vec<(usize, Vec<Element>)> = found
        .into_iter()
        .map(|(k, gens)| (k.len(), gens))
        .collect();
    ideals.sort();
    ideals
        .into_iter()
        .map(|(_, gens)| RIdeal::new(sys.clone(), gens))
        .collect()
}

/// Faces of the cone of an affine monoid, as the generator sets they contain.
fn affine_faces(h: &Monoid) -> Result<Vec<Vec<bool>>> {
    let gens: Vec<Vec<i64>> = h
        .generators()
        .iter()
        .filter_map(|g| g.as_vector().map(<[i64]>::to_vec))
        .collect();
    let dim = h.quotient_groupoid().dim();
    let facets = cone_facets(&gens, dim);
    if facets.len() > 20 {
        return Err(Error::Unsupported(format!(
            "cone with {} facets is too large for face enumeration",
            facets.len()
        )));
    }
    let mut faces: Vec<Vec<bool>> = Vec::new();
    for mask in 0u32..1 << facets.len() {
        let in_face: Vec<bool> = gens
            .iter()
            .map(|g| {
                facets
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .all(|(_, n)| dot(n, g) == 0)
            })
            .collect();
        if !faces.contains(&in_face) {
            faces.push(in_face);
        }
    }
    Ok(faces)
}

/// The prime s-ideals of `H`, certified on `window(bound)`, ordered from
/// `{0}` upwards with `M` last.
pub fn enumerate_primes(h: &Monoid, bound: i64) -> Result<Vec<SpecPoint>> {
    let sys = s_system(h);
    let candidates: Vec<RIdeal> = match h.kind() {
        MonoidKind::Numerical => vec![
            RIdeal::new(sys.clone(), Vec::new()),
            RIdeal::new(sys.clone(), h.generators().to_vec()),
        ],
        MonoidKind::Affine => {
            let mut gen_sets: Vec<Vec<Element>> = affine_faces(h)?
                .into_iter()
                .map(|in_face| {
                    h.generators()
                        .iter()
                        .zip(&in_face)
                        .filter(|(_, &f)| !f)
                        .map(|(g, _)| g.clone())
                        .collect()
                })
                .collect();
            gen_sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            gen_sets
                .into_iter()
                .map(|gens| RIdeal::new(sys.clone(), gens))
                .collect()
        }
        MonoidKind::Finite => {
            let window = h.window(0);
            let mut primes = Vec::new();
            for ideal in finite_ideals(h) {
                if ideal.is_proper() && is_prime(&ideal, &window)?.is_none() {
                    primes.push(ideal);
                }
            }
            primes
        }
    };
    let last = candidates.len().saturating_sub(1);
    candidates
        .into_iter()
        .enumerate()
        .map(|(i, ideal)| {
            let label = if ideal.generators().is_empty() {
                "{inf}".to_string()
            } else if i == last {
                "M".to_string()
            } else {
                format!("P{}", format_set(ideal.generators()))
            };
            let label = if h.kind() == MonoidKind::Finite && ideal.generators().is_empty() {
                "{0}".to_string()
            } else {
                label
            };
            SpecPoint::certify(ideal, label, bound)
        })
        .collect()
}

/// s-ideals with least non-absorbing element at most `bound` (numerical), or
/// all s-ideals (finite), always including `{0}`.
pub fn enumerate_ideals(h: &Monoid, bound: i64) -> Result<Vec<RIdeal>> {
    match h.kind() {
        MonoidKind::Finite => Ok(finite_ideals(h)),
        MonoidKind::Affine => Err(Error::Unsupported(
            "s-ideals of an affine monoid form infinite antichains".to_string(),
        )),
        MonoidKind::Numerical => {
            let sys = s_system(h);
            let gaps = h.gaps().unwrap_or_default();
            let conductor = gaps.iter().max().map_or(0, |g| g + 1);
            let mut out = vec![RIdeal::new(sys.clone(), Vec::new())];
            for m in (0..=bound).filter(|&m| h.contains(&Element::Int(m))) {
                let between: Vec<i64> = (m + 1..m + conductor)
                    .filter(|&v| h.contains(&Element::Int(v)))
                    .collect();
                if between.len() > 20 {
                    return Err(Error::Unsupported(format!(
                        "{} candidate generators above {m}",
                        between.len()
                    )));
                }
                let span: Vec<Element> = (m..m + conductor.max(1)).map(Element::Int).collect();
                let mut seen: Vec<Vec<bool>> = Vec::new();
                for subset in crate::sampling::subsets_up_to(between.len(), between.len()) {
                    let mut gens = vec![Element::Int(m)];
                    gens.extend(subset.iter().map(|&i| Element::Int(between[i])));
                    let ideal = RIdeal::new(sys.clone(), gens);
                    let trace = ideal.trace(&span);
                    if !seen.contains(&trace) {
                        seen.push(trace);
                        out.push(ideal);
                    }
                }
            }
            Ok(out)
        }
    }
}

/// `s-spec(H)` with subbasis `D(f) = {P : f ∉ P}` for `f ∈ H ∩ window`.
pub fn spec_space(primes: &[SpecPoint], window: &[Element]) -> Result<FiniteSpace> {
    let labels = primes.iter().map(|p| p.label().to_string()).collect();
    let mut subbasis: Vec<u64> = Vec::new();
    let h = primes.first().map(|p| p.ideal().monoid());
    for f in window.iter().filter(|f| h.is_some_and(|h| h.contains(f))) {
        let d = primes
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.contains(f))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        if !subbasis.contains(&d) {
            subbasis.push(d);
        }
    }
    FiniteSpace::new(labels, subbasis)
}

/// The ideal space with subbasis `U(x) = {I : x ∉ I}` for `x ∈ H ∩ window`.
pub fn ideal_space(ideals: &[RIdeal], window: &[Element]) -> Result<FiniteSpace> {
    let labels = ideals.iter().map(RIdeal::label).collect();
    let mut subbasis: Vec<u64> = Vec::new();
    let h = ideals.first().map(RIdeal::monoid);
    for x in window.iter().filter(|x| h.is_some_and(|h| h.contains(x))) {
        let u = ideals
            .iter()
            .enumerate()
            .filter(|(_, i)| !i.contains(x))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        if !subbasis.contains(&u) {
            subbasis.push(u);
        }
    }
    FiniteSpace::new(labels, subbasis)
}

/// `O_{a,b} = {I : a ∉ I, b ∉ I, ab ∈ I}`, as indices into `ideals`.
pub fn o_set(a: &Element, b: &Element, ideals: &[RIdeal]) -> Vec<usize> {
    ideals
        .iter()
        .enumerate()
        .filter(|(_, i)| {
            let ab = i.monoid().quotient_groupoid().mul(a, b);
            !i.contains(a) && !i.contains(b) && i.contains(&ab)
        })
        .map(|(k, _)| k)
        .collect()
}

fn matching_index(traces: impl Iterator<Item = Vec<bool>>, target: &[bool]) -> Option<usize> {
    traces.enumerate().find(|(_, t)| t == target).map(|(i, _)| i)
}

/// `I_𝒰 = {y : U(y) ∉ 𝒰}` for the principal ultrafilter at `ideals[at]`,
/// evaluated on `window` and matched back to the listed ideal with that trace.
pub fn ultrafilter_limit_ideal(ideals: &[RIdeal], at: usize, window: &[Element]) -> Result<usize> {
    let u = PrincipalUltrafilter::new(at, ideals.len())?;
    let trace: Vec<bool> = window
        .iter()
        .map(|y| {
            let uy = ideals
                .iter()
                .enumerate()
                .filter(|(_, i)| !i.contains(y))
                .fold(0u64, |m, (k, _)| m | 1 << k);
            !u.contains(uy)
        })
        .collect();
    matching_index(ideals.iter().map(|i| i.trace(window)), &trace).ok_or_else(|| {
        Error::Precondition("the limit ideal is not in the listed carrier".to_string())
    })
}

/// `𝔭_𝒰 = {f : V(f) ∈ 𝒰}` for the principal ultrafilter at `primes[at]`.
pub fn prime_from_ultrafilter(primes: &[SpecPoint], at: usize, window: &[Element]) -> Result<usize> {
    let u = PrincipalUltrafilter::new(at, primes.len())?;
    let trace: Vec<bool> = window
        .iter()
        .map(|f| {
            let vf = primes
                .iter()
                .enumerate()
                .filter(|(_, p)| p.contains(f))
                .fold(0u64, |m, (k, _)| m | 1 << k);
            u.contains(vf)
        })
        .collect();
    matching_index(primes.iter().map(|p| p.ideal().trace(window)), &trace).ok_or_else(|| {
        Error::Precondition("the ultrafilter prime is not in the listed spectrum".to_string())
    })
}

/// `H_P = {h/s : h ∈ H, s ∉ P}`. Since `H ∖ P` is generated by the generators
/// of `H` outside `P`, it suffices to invert those.
pub fn localize(h: &Monoid, p: &SpecPoint) -> Result<Overmonoid> {
    let grp = h.quotient_groupoid();
    let inverses: Vec<Element> = h
        .generators()
        .iter()
        .filter(|g| !p.contains(g))
        .filter_map(|g| grp.inverse(g))
        .collect();
    Ok(Overmonoid::generated(h, &inverses)?.with_label(format!("H_{}", p.label())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_three() -> Monoid {
        Monoid::numerical(&[2, 3]).unwrap()
    }

    fn quadrant() -> Monoid {
        Monoid::affine(2, &[vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn primality_examples() {
        let h = two_three();
        let w = h.window(12);
        let m = RIdeal::s_ideal(&h, vec![Element::Int(2), Element::Int(3)]);
        assert_eq!(is_prime(&m, &w).unwrap(), None);
        let zero = RIdeal::s_ideal(&h, vec![]);
        assert_eq!(is_prime(&zero, &w).unwrap(), None);
        let four = RIdeal::s_ideal(&h, vec![Element::Int(4)]);
        assert_eq!(
            is_prime(&four, &w).unwrap(),
            Some((Element::Int(2), Element::Int(2)))
        );
        assert!(is_prime(&RIdeal::s_ideal(&h, vec![Element::Int(0)]), &w).is_err());
    }

    #[test]
    fn primes_of_two_three() {
        let p = enumerate_primes(&two_three(), 10).unwrap();
        let labels: Vec<&str> = p.iter().map(SpecPoint::label).collect();
        assert_eq!(labels, vec!["{inf}", "M"]);
    }

    #[test]
    fn primes_of_quadrant() {
        let p = enumerate_primes(&quadrant(), 4).unwrap();
        let labels: Vec<&str> = p.iter().map(SpecPoint::label).collect();
        assert_eq!(labels, vec!["{inf}", "P{(0,1)}", "P{(1,0)}", "M"]);
        // P{(0,1)} is {b >= 1}
        assert!(p[1].contains(&Element::vector(&[5, 1])));
        assert!(!p[1].contains(&Element::vector(&[5, 0])));
    }

    #[test]
    fn primes_of_half_plane_monoid() {
        let h = Monoid::affine(2, &[vec![1, 0], vec![0, 1], vec![0, -1]]).unwrap();
        let p = enumerate_primes(&h, 4).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p[1].contains(&Element::vector(&[1, -3])));
        assert!(!p[1].contains(&Element::vector(&[0, -3])));
    }

    #[test]
    fn finite_group_with_zero_has_one_prime() {
        let table = (0..3)
            .map(|a| (0..3).map(|b| if a == 2 || b == 2 { 2 } else { (a + b) % 2 }).collect())
            .collect();
        let h = Monoid::finite(table, 0, 2).unwrap();
        let p = enumerate_primes(&h, 0).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].label(), "{0}");
        assert_eq!(enumerate_ideals(&h, 0).unwrap().len(), 2);
    }

    #[test]
    fn ideals_of_two_three() {
        let h = two_three();
        assert_eq!(enumerate_ideals(&h, 0).unwrap().len(), 2);
        assert_eq!(enumerate_ideals(&h, 10).unwrap().len(), 20);
        assert!(enumerate_ideals(&quadrant(), 3).is_err());
    }

    #[test]
    fn sierpinski_spectrum() {
        let h = two_three();
        let p = enumerate_primes(&h, 10).unwrap();
        let s = spec_space(&p, &h.window(10)).unwrap();
        assert_eq!(s.opens().unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn o_sets() {
        let h = two_three();
        let ideals = enumerate_ideals(&h, 10).unwrap();
        let o = o_set(&Element::Int(2), &Element::Int(2), &ideals);
        assert!(o.iter().any(|&i| ideals[i].generators() == [Element::Int(4)]));
        assert!(o_set(&Element::Int(0), &Element::Int(0), &ideals).is_empty());
    }

    #[test]
    fn localizations() {
        let h = quadrant();
        let p = enumerate_primes(&h, 4).unwrap();
        let w = h.quotient_groupoid().window(5);
        // P{(0,1)} = {b >= 1}: inverting (1,0) gives Z x N
        let l = localize(&h, &p[1]).unwrap();
        for e in &w {
            if let Element::Vector(v) = e {
                assert_eq!(l.contains(e), v[1] >= 0, "{e}");
            }
        }
        let l = localize(&h, &p[2]).unwrap();
        for e in &w {
            if let Element::Vector(v) = e {
                assert_eq!(l.contains(e), v[0] >= 0, "{e}");
            }
        }
        assert!(localize(&h, &p[3]).unwrap().agrees_on(&h.as_overmonoid(), &w));
        let z = localize(&two_three(), &enumerate_primes(&two_three(), 5).unwrap()[0]).unwrap();
        assert!((-10..=10).all(|x| z.contains(&Element::Int(x))));
    }
}
