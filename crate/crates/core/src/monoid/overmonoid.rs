use std::sync::Arc;

use super::element::Element;
use super::groupoid::Groupoid;
use super::membership::Engine;
use super::Monoid;
use crate::error::{Error, Result};
use crate::valuation::ValuationDescriptor;

#[derive(Debug, Clone)]
enum Rule {
    /// Submonoid generated by a finite list; membership by the exact engines.
    Generated {
        generators: Vec<Element>,
        engine: Arc<Engine>,
    },
    /// A valuation monoid given by its descriptor.
    Valuation(ValuationDescriptor),
}

/// A submonoid `S` of the quotient groupoid with `H ⊆ S`, i.e. a point of
/// `R(G|H)`, with exact membership.
#[derive(Debug, Clone)]
pub struct Overmonoid {
    groupoid: Groupoid,
    rule: Rule,
    label: String,
}

fn engine_for(groupoid: &Groupoid, generators: &[Element]) -> Engine {
    match groupoid {
        Groupoid::Finite(t) => {
            let idx: Vec<usize> = generators
                .iter()
                .filter_map(|e| match e {
                    Element::Index(i) => Some(*i),
                    _ => None,
                })
                .collect();
            Engine::finite(t, &idx)
        }
        Groupoid::Integers => {
            let ints: Vec<i64> = generators.iter().filter_map(Element::as_int).collect();
            Engine::integers(&ints)
        }
        Groupoid::Lattice(l) => {
            let vecs: Vec<Vec<i64>> = generators
                .iter()
                .filter_map(|e| e.as_vector().map(<[i64]>::to_vec))
                .collect();
            Engine::lattice(&vecs, l.dim())
        }
    }
}

fn generated_label(groupoid: &Groupoid, engine: &Engine, generators: &[Element]) -> String {
    match engine {
        Engine::Subgroup(1) => return "Z".to_string(),
        Engine::Numerical(n) if n.gaps().is_empty() && engine.contains(&Element::Int(1)) => {
            return "N".to_string()
        }
        Engine::Finite(bits) if matches!(groupoid, Groupoid::Finite(t) if bits.count_ones(..) == t.size()) => {
            return "G".to_string()
        }
        _ => {}
    }
    let gens: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
    format!("<{}>", gens.join(","))
}

impl Overmonoid {
    pub(crate) fn from_engine(
        groupoid: Groupoid,
        generators: Vec<Element>,
        engine: Arc<Engine>,
        label: String,
    ) -> Self {
        Overmonoid {
            groupoid,
            rule: Rule::Generated { generators, engine },
            label,
        }
    }

    /// The submonoid of `G` generated by `H` and `extra`.
    pub fn generated(h: &Monoid, extra: &[Element]) -> Result<Self> {
        let g = h.quotient_groupoid();
        if let Some(e) = extra.iter().find(|e| !g.contains(e)) {
            return Err(Error::CarrierMismatch(format!("{e} is not in {}", g.describe())));
        }
        let mut generators = h.generators().to_vec();
        for e in extra {
            if !g.is_zero(e) && !g.is_one(e) && !generators.contains(e) {
                generators.push(e.clone());
            }
        }
        let engine = engine_for(g, &generators);
        let label = generated_label(g, &engine, &generators);
        Ok(Overmonoid {
            groupoid: g.clone(),
            rule: Rule::Generated {
                generators,
                engine: Arc::new(engine),
            },
            label,
        })
    }

    /// The whole groupoid `G`.
    pub fn whole(h: &Monoid) -> Self {
        let g = h.quotient_groupoid();
        let mut extra: Vec<Element> = h.generators().iter().filter_map(|e| g.inverse(e)).collect();
        if let Groupoid::Finite(t) = g {
            extra.extend((0..t.size()).map(Element::Index));
        }
        let mut s = Overmonoid::generated(h, &extra).expect("inverses lie in G");
        s.label = "G".to_string();
        s
    }

    pub fn from_valuation(groupoid: Groupoid, descriptor: ValuationDescriptor) -> Self {
        Overmonoid {
            groupoid,
            label: descriptor.to_string(),
            rule: Rule::Valuation(descriptor),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn generators(&self) -> Option<&[Element]> {
        match &self.rule {
            Rule::Generated { generators, .. } => Some(generators),
            Rule::Valuation(_) => None,
        }
    }

    pub fn descriptor(&self) -> Option<&ValuationDescriptor> {
        match &self.rule {
            Rule::Valuation(d) => Some(d),
            Rule::Generated { .. } => None,
        }
    }

    /// Exact membership; elements outside the carrier are never members.
    pub fn contains(&self, e: &Element) -> bool {
        if !self.groupoid.contains(e) {
            return false;
        }
        match &self.rule {
            Rule::Generated { engine, .. } => engine.contains(e),
            Rule::Valuation(d) => d.contains(e),
        }
    }

    /// `e ∈ S^×`.
    pub fn is_unit(&self, e: &Element) -> bool {
        self.contains(e) && self.groupoid.inverse(e).is_some_and(|inv| self.contains(&inv))
    }

    /// `e ∈ m_S = S ∖ S^×`.
    pub fn in_maximal_ideal(&self, e: &Element) -> bool {
        self.contains(e) && !self.is_unit(e)
    }

    /// Smallest submonoid of `G` containing `self` and `x`.
    pub fn adjoin(&self, x: &Element) -> Result<Self> {
        if !self.groupoid.contains(x) {
            return Err(Error::CarrierMismatch(format!(
                "{x} is not in {}",
                self.groupoid.describe()
            )));
        }
        if self.contains(x) {
            return Ok(self.clone());
        }
        match &self.rule {
            Rule::Generated { generators, .. } => {
                let mut generators = generators.clone();
                generators.push(x.clone());
                let engine = engine_for(&self.groupoid, &generators);
                let label = generated_label(&self.groupoid, &engine, &generators);
                Ok(Overmonoid {
                    groupoid: self.groupoid.clone(),
                    rule: Rule::Generated {
                        generators,
                        engine: Arc::new(engine),
                    },
                    label,
                })
            }
            Rule::Valuation(d) => Ok(Overmonoid::from_valuation(
                self.groupoid.clone(),
                d.adjoin(x),
            )),
        }
    }

    /// The first window element on which the two memberships differ.
    pub fn first_difference(&self, other: &Overmonoid, window: &[Element]) -> Option<Element> {
        window
            .iter()
            .find(|e| self.contains(e) != other.contains(e))
            .cloned()
    }

    pub fn agrees_on(&self, other: &Overmonoid, window: &[Element]) -> bool {
        self.first_difference(other, window).is_none()
    }

    pub fn is_subset_on(&self, other: &Overmonoid, window: &[Element]) -> bool {
        window.iter().all(|e| !self.contains(e) || other.contains(e))
    }
}

/// The predicate `(H:x) = {h ∈ H : hx ∈ H}`.
#[derive(Debug, Clone)]
pub struct FractionIdeal {
    monoid: Monoid,
    x: Element,
}

impl FractionIdeal {
    pub fn contains(&self, h: &Element) -> bool {
        self.monoid.contains(h) && self.monoid.contains(&self.monoid.groupoid().mul(h, &self.x))
    }

    pub fn x(&self) -> &Element {
        &self.x
    }
}

pub fn fraction_ideal(h: &Monoid, x: &Element) -> Result<FractionIdeal> {
    let g = h.quotient_groupoid();
    if !g.contains(x) {
        return Err(Error::CarrierMismatch(format!("{x} is not in {}", g.describe())));
    }
    if g.is_zero(x) {
        return Err(Error::Precondition("(H:x) needs a nonzero x".to_string()));
    }
    Ok(FractionIdeal {
        monoid: h.clone(),
        x: x.clone(),
    })
}
