use std::fmt;

use crate::monoid::lattice::dot;
use crate::monoid::Element;

/// A valuation monoid of `ℤ ∪ {∞}` or `ℤ² ∪ {∞}` described by finite data.
///
/// In the plane, `Planar { w, t }` is
/// `{x : ⟨w,x⟩ > 0} ∪ {x : ⟨w,x⟩ = 0 and t·⟨w⊥,x⟩ ≥ 0} ∪ {∞}`, where `w` is
/// primitive and `w⊥` is the primitive perpendicular whose first nonzero
/// coordinate is positive. `t = 0` gives the rank-one valuation with a unit
/// line; `t = ±1` gives the two lexicographic refinements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValuationDescriptor {
    /// The trivial valuation: all of `G`.
    Whole,
    /// `ℕ ∪ {∞}` inside `ℤ ∪ {∞}`.
    NonNegative,
    Planar { w: [i64; 2], t: i8 },
}

/// Primitive perpendicular of `w` with positive leading coordinate.
pub fn perpendicular(w: [i64; 2]) -> [i64; 2] {
    let p = [-w[1], w[0]];
    if p[0] > 0 || (p[0] == 0 && p[1] > 0) {
        p
    } else {
        [-p[0], -p[1]]
    }
}

impl ValuationDescriptor {
    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (_, Element::Infinity) => true,
            (ValuationDescriptor::Whole, _) => true,
            (ValuationDescriptor::NonNegative, Element::Int(x)) => *x >= 0,
            (ValuationDescriptor::Planar { w, t }, Element::Vector(v)) if v.len() == 2 => {
                let a = dot(w, v);
                if a != 0 {
                    return a > 0;
                }
                i64::from(*t) * dot(&perpendicular(*w), v) >= 0
            }
            _ => false,
        }
    }

    /// `V[x]`: overmonoids of a valuation monoid are again valuation monoids,
    /// so adjunction stays inside the descriptor family.
    pub fn adjoin(&self, x: &Element) -> ValuationDescriptor {
        if self.contains(x) {
            return self.clone();
        }
        match (self, x) {
            (ValuationDescriptor::Planar { w, t }, Element::Vector(v)) if *t != 0 && dot(w, v) == 0 => {
                ValuationDescriptor::Planar { w: *w, t: 0 }
            }
            _ => ValuationDescriptor::Whole,
        }
    }

    /// Sort key `(‖w‖∞, w, t)`, with the trivial valuation first.
    pub fn order_key(&self) -> (i64, [i64; 2], i8) {
        match self {
            ValuationDescriptor::Whole => (-1, [0, 0], 0),
            ValuationDescriptor::NonNegative => (0, [1, 0], 0),
            ValuationDescriptor::Planar { w, t } => (w[0].abs().max(w[1].abs()), *w, *t),
        }
    }
}

impl fmt::Display for ValuationDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationDescriptor::Whole => write!(f, "G"),
            ValuationDescriptor::NonNegative => write!(f, "N"),
            ValuationDescriptor::Planar { w, t } => {
                let t = match t {
                    1 => "+1".to_string(),
                    other => other.to_string(),
                };
                write!(f, "V[w=({},{}),t={t}]", w[0], w[1])
            }
        }
    }
}
