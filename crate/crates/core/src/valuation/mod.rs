//! Valuation overmonoids, the Riemann-Zariski space, and the domination map.

mod descriptor;

use std::collections::BTreeSet;

pub use descriptor::{perpendicular, ValuationDescriptor};

use crate::error::{Error, Result};
use crate::fintop::{FiniteSpace, PrincipalUltrafilter};
use crate::ideals::{localize, SpecPoint};
use crate::monoid::lattice::gcd;
use crate::monoid::{Element, Monoid, MonoidKind, Overmonoid};

/// First `x ∈ window` with `x ≠ 0` and neither `x` nor `x⁻¹` in `s`.
pub fn valuation_witness(s: &Overmonoid, window: &[Element]) -> Option<Element> {
    let grp = s.groupoid();
    window
        .iter()
        .filter(|x| !grp.is_zero(x))
        .find(|x| !s.contains(x) && !grp.inverse(x).is_some_and(|inv| s.contains(&inv)))
        .cloned()
}

pub fn is_valuation(s: &Overmonoid, window: &[Element]) -> bool {
    valuation_witness(s, window).is_none()
}

/// Pair `(m, s)` in the window with `m` a nonunit, `s ∈ S`, and `ms` a unit.
pub fn locality_witness(s: &Overmonoid, window: &[Element]) -> Option<(Element, Element)> {
    let grp = s.groupoid();
    let members: Vec<&Element> = window.iter().filter(|e| s.contains(e)).collect();
    for m in members.iter().filter(|m| !s.is_unit(m)) {
        for t in &members {
            if s.is_unit(&grp.mul(m, t)) {
                return Some(((*m).clone(), (*t).clone()));
            }
        }
    }
    None
}

fn require_local(s: &Overmonoid, window: &[Element]) -> Result<()> {
    match locality_witness(s, window) {
        None => Ok(()),
        Some((m, t)) => Err(Error::Precondition(format!(
            "{} is not local: {m} is a nonunit but {m}*{t} is a unit",
            s.label()
        ))),
    }
}

/// Gaps of the numerical semigroup generated by `gens`.
fn gaps_of(gens: &[i64]) -> Vec<i64> {
    Monoid::numerical(gens)
        .expect("generators of an oversemigroup have gcd 1")
        .gaps()
        .unwrap_or_default()
}

/// All overmonoids of a numerical semigroup in `ℤ ∪ {∞}`: its numerical
/// oversemigroups, found by adjoining special gaps, followed by `ℤ ∪ {∞}`.
pub fn enumerate_overmonoids(h: &Monoid) -> Result<Vec<Overmonoid>> {
    if h.kind() != MonoidKind::Numerical {
        return Err(Error::Unsupported(format!(
            "overmonoid enumeration needs a numerical semigroup, got {}",
            h.kind().as_str()
        )));
    }
    let base: Vec<i64> = h.generators().iter().filter_map(Element::as_int).collect();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut found: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut stack = vec![base];
    while let Some(gens) = stack.pop() {
        let gaps = gaps_of(&gens);
        if !seen.insert(gaps.clone()) {
            continue;
        }
        let member = |v: i64| v >= 0 && !gaps.contains(&v);
        let conductor = gaps.last().map_or(0, |g| g + 1);
        for &g in &gaps {
            // special gap: 2g ∈ T and g + t ∈ T for every nonzero t ∈ T below the conductor
            let special = member(2 * g) && (1..=conductor).filter(|&t| member(t)).all(|t| member(g + t));
            if special {
                let mut next = gens.clone();
                next.push(g);
                stack.push(next);
            }
        }
        found.push((gaps, gens));
    }
    // most gaps first, then lexicographic on the gap sets
    found.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
    let mut out = Vec::new();
    for (gaps, gens) in found {
        let extra: Vec<Element> = gens.iter().map(|&g| Element::Int(g)).collect();
        let s = Overmonoid::generated(h, &extra)?;
        let label = if gaps.is_empty() {
            "N".to_string()
        } else {
            let t = Monoid::numerical(&gens)?;
            minimal_label(&t)
        };
        out.push(s.with_label(label));
    }
    out.push(Overmonoid::generated(h, &[Element::Int(-1)])?.with_label("Z"));
    Ok(out)
}

/// `<a,b,...>` with the minimal generating set of a numerical semigroup.
fn minimal_label(t: &Monoid) -> String {
    let gens: Vec<i64> = t.generators().iter().filter_map(Element::as_int).collect();
    let minimal: Vec<String> = gens
        .iter()
        .filter(|&&g| {
            let others: Vec<i64> = gens.iter().copied().filter(|&o| o != g).collect();
            others.is_empty() || !representable(&others, g)
        })
        .map(|g| g.to_string())
        .collect();
    format!("<{}>", minimal.join(","))
}

/// Whether `g` is a sum of elements of `gens`.
fn representable(gens: &[i64], g: i64) -> bool {
    let mut reach = vec![false; g as usize + 1];
    reach[0] = true;
    for v in 1..=g as usize {
        reach[v] = gens.iter().any(|&s| s as usize <= v && s > 0 && reach[v - s as usize]);
    }
    reach[g as usize]
}

/// Zar(G|H): valuation monoids of `G` containing `H`. Numerical: `{G, ℕ}`.
/// Planar affine: the trivial valuation plus every descriptor with
/// `‖w‖∞ ≤ bound` containing the generators of `H`. Finite: `{G}`.
pub fn enumerate_zar(h: &Monoid, bound: i64) -> Result<Vec<ValuationDescriptor>> {
    let mut out = vec![ValuationDescriptor::Whole];
    match h.kind() {
        MonoidKind::Finite => {}
        MonoidKind::Numerical => out.push(ValuationDescriptor::NonNegative),
        MonoidKind::Affine => {
            if h.quotient_groupoid().dim() != 2 {
                return Err(Error::Unsupported(format!(
                    "valuation descriptors cover dimension 2 only, got {}",
                    h.quotient_groupoid().dim()
                )));
            }
            let mut found = Vec::new();
            for a in -bound..=bound {
                for b in -bound..=bound {
                    if (a, b) == (0, 0) || gcd(a, b) != 1 {
                        continue;
                    }
                    for t in [-1i8, 0, 1] {
                        let d = ValuationDescriptor::Planar { w: [a, b], t };
                        if h.generators().iter().all(|g| d.contains(g)) {
                            found.push(d);
                        }
                    }
                }
            }
            found.sort_by_key(ValuationDescriptor::order_key);
            out.extend(found);
        }
    }
    Ok(out)
}

/// Zar(G|H) as overmonoids.
pub fn zar_carrier(h: &Monoid, bound: i64) -> Result<Vec<Overmonoid>> {
    Ok(enumerate_zar(h, bound)?
        .into_iter()
        .map(|d| Overmonoid::from_valuation(h.quotient_groupoid().clone(), d))
        .collect())
}

/// Indices of carrier members containing `x`: `U(x)`, or `B(x)` on a Zar carrier.
pub fn containing(carrier: &[Overmonoid], x: &Element) -> u64 {
    carrier
        .iter()
        .enumerate()
        .filter(|(_, s)| s.contains(x))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// The space on `carrier` with subbasis `{U(x) : x ∈ window}`.
pub fn overmonoid_space(carrier: &[Overmonoid], window: &[Element]) -> Result<FiniteSpace> {
    let mut subbasis = Vec::new();
    for x in window {
        let b = containing(carrier, x);
        if !subbasis.contains(&b) {
            subbasis.push(b);
        }
    }
    FiniteSpace::new(carrier.iter().map(|s| s.label().to_string()).collect(), subbasis)
}

/// `δ(V) = m_V ∩ H`, matched to the listed prime with the same trace on
/// `window`. The image is rechecked for primality on the window first.
pub fn delta(h: &Monoid, v: &Overmonoid, primes: &[SpecPoint], window: &[Element]) -> Result<usize> {
    let grp = h.quotient_groupoid();
    let in_image = |e: &Element| h.contains(e) && v.in_maximal_ideal(e);
    let outside: Vec<&Element> = window.iter().filter(|e| h.contains(e) && !in_image(e)).collect();
    for (i, a) in outside.iter().enumerate() {
        for b in &outside[i..] {
            if in_image(&grp.mul(a, b)) {
                return Err(Error::NotPrime(format!(
                    "m_V ∩ H for V = {}: {a}*{b} lies inside, {a} and {b} do not",
                    v.label()
                )));
            }
        }
    }
    let trace: Vec<bool> = window.iter().map(in_image).collect();
    primes
        .iter()
        .position(|p| p.ideal().trace(window) == trace)
        .ok_or_else(|| {
            Error::Precondition(format!("δ({}) is not among the listed primes", v.label()))
        })
}

pub fn delta_map(h: &Monoid, zar: &[Overmonoid], primes: &[SpecPoint], window: &[Element]) -> Result<Vec<usize>> {
    zar.iter().map(|v| delta(h, v, primes, window)).collect()
}

/// Outcome of comparing the two sides of a set equality over a finite carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFailure {
    pub x: Element,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

impl LawFailure {
    pub fn describe(&self) -> String {
        format!(
            "x={} lhs={{{}}} rhs={{{}}}",
            self.x,
            self.left.join(","),
            self.right.join(",")
        )
    }
}

fn names(mask: u64, labels: &[String]) -> Vec<String> {
    crate::fintop::points_of(mask).map(|i| labels[i].clone()).collect()
}

/// `δ⁻¹(D(x)) = B(x⁻¹)` for every `x ∈ H ∩ xs`.
pub fn preimage_law(
    h: &Monoid,
    zar: &[Overmonoid],
    primes: &[SpecPoint],
    delta: &[usize],
    xs: &[Element],
) -> (usize, Option<LawFailure>) {
    let grp = h.quotient_groupoid();
    let labels: Vec<String> = zar.iter().map(|v| v.label().to_string()).collect();
    let mut tested = 0;
    for x in xs.iter().filter(|x| h.contains(x) && !grp.is_zero(x)) {
        tested += 1;
        let inv = grp.inverse(x).expect("nonzero");
        let left = delta
            .iter()
            .enumerate()
            .filter(|(_, &p)| !primes[p].contains(x))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        let right = containing(zar, &inv);
        if left != right {
            return (
                tested,
                Some(LawFailure {
                    x: x.clone(),
                    left: names(left, &labels),
                    right: names(right, &labels),
                }),
            );
        }
    }
    (tested, None)
}

/// `δ(B(x)) = spec ∖ V((H:x))` for every nonzero `x ∈ xs`. Membership of
/// `(H:x)` in a prime is decided on `eval`, which must contain enough of `H`
/// to exhibit an element of `(H:x)` outside each prime that omits one.
pub fn image_law(
    h: &Monoid,
    zar: &[Overmonoid],
    primes: &[SpecPoint],
    delta: &[usize],
    xs: &[Element],
    eval: &[Element],
) -> Result<(usize, Option<LawFailure>)> {
    let grp = h.quotient_groupoid();
    let labels: Vec<String> = primes.iter().map(|p| p.label().to_string()).collect();
    let mut tested = 0;
    for x in xs.iter().filter(|x| !grp.is_zero(x)) {
        tested += 1;
        let q = crate::monoid::fraction_ideal(h, x)?;
        let left = delta
            .iter()
            .enumerate()
            .filter(|(i, _)| zar[*i].contains(x))
            .fold(0u64, |m, (_, &p)| m | 1 << p);
        let right = primes
            .iter()
            .enumerate()
            .filter(|(_, p)| eval.iter().any(|e| q.contains(e) && !p.contains(e)))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        if left != right {
            return Ok((
                tested,
                Some(LawFailure {
                    x: x.clone(),
                    left: names(left, &labels),
                    right: names(right, &labels),
                }),
            ));
        }
    }
    Ok((tested, None))
}

/// `h2` dominates `h1`: `h1 ⊆ h2` and `h1 ∩ m_{h2} = m_{h1}`, on the window.
pub fn dominates(h1: &Overmonoid, h2: &Overmonoid, window: &[Element]) -> Result<bool> {
    require_local(h1, window)?;
    require_local(h2, window)?;
    Ok(h1.is_subset_on(h2, window)
        && window
            .iter()
            .filter(|e| h1.contains(e))
            .all(|e| h2.in_maximal_ideal(e) == h1.in_maximal_ideal(e)))
}

/// Index of a candidate that strictly contains `v` and dominates it, if any.
pub fn maximality_violation(v: &Overmonoid, candidates: &[Overmonoid], window: &[Element]) -> Result<Option<usize>> {
    for (i, c) in candidates.iter().enumerate() {
        let strictly_larger = v.is_subset_on(c, window) && !c.is_subset_on(v, window);
        if strictly_larger && dominates(v, c, window)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// A valuation `V` in the carrier with `δ(V) = P` and `H ∖ P = H ∩ V^×` on the window.
pub fn surjectivity_witness(
    h: &Monoid,
    p: &SpecPoint,
    zar: &[Overmonoid],
    window: &[Element],
) -> Result<usize> {
    zar.iter()
        .position(|v| {
            window
                .iter()
                .filter(|e| h.contains(e))
                .all(|e| p.contains(e) == v.in_maximal_ideal(e) && !p.contains(e) == v.is_unit(e))
        })
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no valuation in the carrier dominates {} (enumeration bound too small)",
                p.label()
            ))
        })
}

/// s-Prüfer test: every localization at a prime is a valuation monoid on the
/// window. Returns the first failing prime label and witness.
pub fn pruefer_violation(h: &Monoid, primes: &[SpecPoint], window: &[Element]) -> Result<Option<(String, Element)>> {
    for p in primes {
        let l = localize(h, p)?;
        if let Some(x) = valuation_witness(&l, window) {
            return Ok(Some((p.label().to_string(), x)));
        }
    }
    Ok(None)
}

/// `H_𝒰 = {x ∈ G : B(x) ∈ 𝒰}` for the principal ultrafilter at `carrier[at]`,
/// matched back to the member with that trace on `window`.
pub fn ultrafilter_limit_valuation(carrier: &[Overmonoid], at: usize, window: &[Element]) -> Result<usize> {
    let u = PrincipalUltrafilter::new(at, carrier.len())?;
    let trace: Vec<bool> = window.iter().map(|x| u.contains(containing(carrier, x))).collect();
    carrier
        .iter()
        .position(|s| window.iter().map(|x| s.contains(x)).eq(trace.iter().copied()))
        .ok_or_else(|| Error::Precondition("limit is not in the listed carrier".to_string()))
}

/// DOT rendering of `δ` as a bipartite digraph, with specialization edges on
/// both sides.
pub fn delta_dot(zar: &FiniteSpace, spec: &FiniteSpace, delta: &[usize]) -> String {
    let mut out = String::from("digraph delta {\n  rankdir=LR;\n");
    for (i, l) in zar.labels().iter().enumerate() {
        out.push_str(&format!("  z{i} [label=\"{l}\", shape=box];\n"));
    }
    for (i, l) in spec.labels().iter().enumerate() {
        out.push_str(&format!("  p{i} [label=\"{l}\"];\n"));
    }
    for (x, y) in zar.hasse_edges() {
        out.push_str(&format!("  z{x} -> z{y} [style=dashed];\n"));
    }
    for (x, y) in spec.hasse_edges() {
        out.push_str(&format!("  p{x} -> p{y} [style=dashed];\n"));
    }
    for (v, &p) in delta.iter().enumerate() {
        out.push_str(&format!("  z{v} -> p{p};\n"));
    }
    out.push_str("}\n");
    out
}

/// Labels of a set of carrier indices, for report text.
pub fn describe_members(carrier: &[Overmonoid], mask: u64) -> String {
    let elems: Vec<String> = crate::fintop::points_of(mask).map(|i| carrier[i].label().to_string()).collect();
    format!("{{{}}}", elems.join(","))
}
