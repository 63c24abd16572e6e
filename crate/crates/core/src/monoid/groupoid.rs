use std::sync::Arc;

use super::element::Element;
use super::lattice::IntLattice;
use crate::error::{Error, Result};

/// Cayley table of a finite group-with-zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    pub(crate) table: Vec<Vec<usize>>,
    pub(crate) one: usize,
    pub(crate) zero: usize,
    pub(crate) inverse: Vec<Option<usize>>,
}

impl FiniteTable {
    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn zero(&self) -> usize {
        self.zero
    }
}

/// The quotient groupoid `G` of a cancellative monoid, with the absorbing
/// element adjoined for the additive realizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Groupoid {
    /// A finite cancellative monoid is already a group-with-zero.
    Finite(Arc<FiniteTable>),
    /// `ℤ ∪ {∞}`.
    Integers,
    /// The sublattice of `ℤ^d` generated by the affine generators, plus `∞`.
    Lattice(Arc<IntLattice>),
}

impl Groupoid {
    pub fn one(&self) -> Element {
        match self {
            Groupoid::Finite(t) => Element::Index(t.one),
            Groupoid::Integers => Element::Int(0),
            Groupoid::Lattice(l) => Element::Vector(vec![0; l.dim()]),
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            Groupoid::Finite(t) => Element::Index(t.zero),
            _ => Element::Infinity,
        }
    }

    pub fn is_zero(&self, e: &Element) -> bool {
        match (self, e) {
            (Groupoid::Finite(t), Element::Index(i)) => *i == t.zero,
            (Groupoid::Finite(_), _) => false,
            (_, Element::Infinity) => true,
            _ => false,
        }
    }

    pub fn is_one(&self, e: &Element) -> bool {
        *e == self.one()
    }

    pub fn dim(&self) -> usize {
        match self {
            Groupoid::Finite(_) => 0,
            Groupoid::Integers => 1,
            Groupoid::Lattice(l) => l.dim(),
        }
    }

    /// Whether `e` belongs to the carrier.
    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (Groupoid::Finite(t), Element::Index(i)) => *i < t.size(),
            (Groupoid::Integers, Element::Int(_)) => true,
            (Groupoid::Lattice(l), Element::Vector(v)) => l.contains(v),
            (Groupoid::Integers | Groupoid::Lattice(_), Element::Infinity) => true,
            _ => false,
        }
    }

    fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(format!(
                "{e} is not in {}",
                self.describe()
            )))
        }
    }

    /// The groupoid product; errors when an operand lies outside the carrier.
    pub fn op(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Unchecked product used on hot paths; operands must lie in the carrier.
    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        match (a, b) {
            (Element::Infinity, _) | (_, Element::Infinity) => Element::Infinity,
            (Element::Index(x), Element::Index(y)) => match self {
                Groupoid::Finite(t) => Element::Index(t.product(*x, *y)),
                _ => unreachable!("index element outside a finite carrier"),
            },
            (Element::Int(x), Element::Int(y)) => Element::Int(x + y),
            (Element::Vector(x), Element::Vector(y)) => {
                Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => unreachable!("mixed carriers: {a} and {b}"),
        }
    }

    /// Inverse in `G^•`; `None` for the zero element.
    pub fn inverse(&self, a: &Element) -> Option<Element> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (Groupoid::Finite(t), Element::Index(i)) => t.inverse[*i].map(Element::Index),
            (_, Element::Int(x)) => Some(Element::Int(-x)),
            (_, Element::Vector(v)) => Some(Element::Vector(v.iter().map(|c| -c).collect())),
            _ => None,
        }
    }

    /// `g · a⁻¹`, `None` when `a` is the zero element.
    pub fn div(&self, g: &Element, a: &Element) -> Option<Element> {
        self.inverse(a).map(|inv| self.mul(g, &inv))
    }

    /// All carrier elements with sup-norm at most `bound`, lexicographically
    /// ordered with the absorbing element last. Finite carriers ignore the bound.
    pub fn window(&self, bound: i64) -> Vec<Element> {
        let mut out = match self {
            Groupoid::Finite(t) => (0..t.size()).map(Element::Index).collect(),
            Groupoid::Integers => (-bound..=bound).map(Element::Int).collect(),
            Groupoid::Lattice(l) => box_points(l.dim(), bound)
                .into_iter()
                .filter(|v| l.contains(v))
                .map(Element::Vector)
                .collect::<Vec<_>>(),
        };
        if !matches!(self, Groupoid::Finite(_)) {
            out.push(Element::Infinity);
        }
        out.sort();
        out
    }

    /// The same window, ordered by sup-norm first and lexicographically within
    /// a shell. Witness searches use this order so they report small witnesses.
    pub fn window_by_norm(&self, bound: i64) -> Vec<Element> {
        let mut w = self.window(bound);
        w.sort_by_key(|e| (e.sup_norm().unwrap_or(i64::MAX), e.clone()));
        w
    }

    pub fn describe(&self) -> String {
        match self {
            Groupoid::Finite(t) => format!("finite group-with-zero of order {}", t.size()),
            Groupoid::Integers => "Z u {inf}".to_string(),
            Groupoid::Lattice(l) => {
                if l.is_standard() {
                    format!("Z^{} u {{inf}}", l.dim())
                } else {
                    format!("rank-{} sublattice of Z^{} u {{inf}}", l.rank(), l.dim())
                }
            }
        }
    }
}

pub(crate) fn box_points(dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * (2 * bound as usize + 1));
        for prefix in &out {
            for c in -bound..=bound {
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}
