use std::fmt;

/// A value in one of the supported carriers.
///
/// The library speaks multiplicatively (`op`, `1`, `0`), but the integer and
/// lattice carriers are realized additively: identity is the zero vector,
/// the absorbing element is [`Element::Infinity`], and the operation is `+`.
///
/// The derived ordering is lexicographic on coordinates with `Infinity` last,
/// which is the order used for every deterministic report.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// An index into the Cayley table of a finite monoid.
    Index(usize),
    /// An integer in `ℤ ∪ {∞}`.
    Int(i64),
    /// A lattice vector in `ℤ^d ∪ {∞}`.
    Vector(Vec<i64>),
    /// The absorbing element of the additive carriers.
    Infinity,
}

impl Element {
    pub fn vector(coords: &[i64]) -> Self {
        Element::Vector(coords.to_vec())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Element::Infinity)
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }

    /// Sup-norm of the additive realization; `None` for indices and `∞`.
    pub fn sup_norm(&self) -> Option<i64> {
        match self {
            Element::Int(v) => Some(v.abs()),
            Element::Vector(v) => Some(v.iter().map(|c| c.abs()).max().unwrap_or(0)),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Index(i) => write!(f, "#{i}"),
            Element::Int(v) => write!(f, "{v}"),
            Element::Vector(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Element::Infinity => write!(f, "inf"),
        }
    }
}

/// Formats a finite set of elements as `{a,b,c}`.
pub fn format_set(elems: &[Element]) -> String {
    let inner: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_sorts_last() {
        let mut v = vec![Element::Infinity, Element::Int(3), Element::Int(-2)];
        v.sort();
        assert_eq!(v, vec![Element::Int(-2), Element::Int(3), Element::Infinity]);
    }

    #[test]
    fn vectors_sort_lexicographically() {
        let mut v = vec![
            Element::vector(&[1, 0]),
            Element::Infinity,
            Element::vector(&[0, 5]),
            Element::vector(&[0, -1]),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Element::vector(&[0, -1]),
                Element::vector(&[0, 5]),
                Element::vector(&[1, 0]),
                Element::Infinity
            ]
        );
    }

    #[test]
    fn display() {
        assert_eq!(Element::vector(&[1, -1]).to_string(), "(1,-1)");
        assert_eq!(format_set(&[Element::Int(2), Element::Infinity]), "{2,inf}");
    }
}
