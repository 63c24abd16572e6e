//! Commutative cancellative monoids with zero, their quotient groupoids, and
//! overmonoids with exact membership.

mod element;
mod groupoid;
pub mod lattice;
mod membership;
mod overmonoid;

use std::sync::Arc;

use serde::Deserialize;

pub use element::{format_set, Element};
pub use groupoid::{FiniteTable, Groupoid};
pub use overmonoid::{fraction_ideal, FractionIdeal, Overmonoid};

use crate::error::{Error, Result};
use lattice::{gcd_all, IntLattice};
use membership::Engine;

/// Which presentation a monoid was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonoidKind {
    Finite,
    Numerical,
    Affine,
}

impl MonoidKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MonoidKind::Finite => "finite",
            MonoidKind::Numerical => "numerical",
            MonoidKind::Affine => "affine",
        }
    }
}

/// A finitely presented commutative cancellative monoid `H` with identity and
/// absorbing zero, embedded in its quotient groupoid.
#[derive(Debug, Clone)]
pub struct Monoid {
    kind: MonoidKind,
    groupoid: Groupoid,
    generators: Vec<Element>,
    engine: Arc<Engine>,
}

/// Flat file layout; parsed without buffering so errors keep their line numbers.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidFile {
    kind: String,
    dim: Option<usize>,
    generators: Option<Vec<Coordinate>>,
    size: Option<usize>,
    table: Option<Vec<Vec<usize>>>,
    one: Option<usize>,
    zero: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coordinate {
    Int(i64),
    Vector(Vec<i64>),
}

fn required<T>(value: Option<T>, field: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| Error::field(field, format!("missing for kind \"{kind}\"")))
}

impl Monoid {
    /// Numerical semigroup `⟨generators⟩ ∪ {∞}` inside `ℤ ∪ {∞}`.
    pub fn numerical(generators: &[i64]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::field("generators", "at least one generator is required"));
        }
        if let Some(g) = generators.iter().find(|&&g| g <= 0) {
            return Err(Error::field(
                "generators",
                format!("numerical generators must be positive, got {g}"),
            ));
        }
        if gcd_all(generators) != 1 {
            return Err(Error::field("generators", "generators must have gcd 1"));
        }
        let mut gens = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();
        Ok(Monoid {
            kind: MonoidKind::Numerical,
            groupoid: Groupoid::Integers,
            engine: Arc::new(Engine::integers(&gens)),
            generators: gens.into_iter().map(Element::Int).collect(),
        })
    }

    /// Affine monoid generated by integer vectors; the generators must span `ℚ^d`.
    pub fn affine(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::field("dim", "dimension must be positive"));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::field(
                "generators",
                format!("generator {g:?} does not have dimension {dim}"),
            ));
        }
        let lattice = IntLattice::generated_by(generators, dim);
        if lattice.rank() != dim {
            return Err(Error::Unsupported(format!(
                "affine generators span a rank-{} lattice in dimension {dim}",
                lattice.rank()
            )));
        }
        let mut gens: Vec<Vec<i64>> = generators
            .iter()
            .filter(|g| g.iter().any(|&c| c != 0))
            .cloned()
            .collect();
        gens.sort();
        gens.dedup();
        Ok(Monoid {
            kind: MonoidKind::Affine,
            groupoid: Groupoid::Lattice(Arc::new(lattice)),
            engine: Arc::new(Engine::lattice(&gens, dim)),
            generators: gens.into_iter().map(Element::Vector).collect(),
        })
    }

    /// Finite monoid from a Cayley table. Cancellativity forces it to be a
    /// group-with-zero; anything else is rejected.
    pub fn finite(table: Vec<Vec<usize>>, one: usize, zero: usize) -> Result<Self> {
        let n = table.len();
        if n < 2 {
            return Err(Error::field("table", "a monoid with 1 != 0 has at least two elements"));
        }
        if let Some((i, row)) = table.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::field(
                "table",
                format!("row {i} has {} entries, expected {n}", row.len()),
            ));
        }
        if let Some(v) = table.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::field("table", format!("entry {v} is out of range 0..{n}")));
        }
        if one >= n {
            return Err(Error::field("one", format!("{one} is out of range 0..{n}")));
        }
        if zero >= n {
            return Err(Error::field("zero", format!("{zero} is out of range 0..{n}")));
        }
        if one == zero {
            return Err(Error::field("one", "identity and zero must differ"));
        }
        for a in 0..n {
            if table[one][a] != a {
                return Err(Error::LawViolated(format!("#{one} is not neutral on #{a}")));
            }
            if table[zero][a] != zero {
                return Err(Error::LawViolated(format!("#{zero} is not absorbing on #{a}")));
            }
            for b in 0..n {
                if table[a][b] != table[b][a] {
                    return Err(Error::LawViolated(format!("#{a}#{b} != #{b}#{a}")));
                }
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::LawViolated(format!(
                            "associativity fails at (#{a},#{b},#{c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![None; n];
        for a in (0..n).filter(|&a| a != zero) {
            let mut seen = vec![false; n];
            for b in 0..n {
                let p = table[a][b];
                if seen[p] {
                    return Err(Error::NotCancellative(format!(
                        "multiplication by #{a} is not injective"
                    )));
                }
                seen[p] = true;
            }
            inverse[a] = (0..n).find(|&b| table[a][b] == one);
        }
        let ft = FiniteTable {
            table,
            one,
            zero,
            inverse,
        };
        let gens: Vec<usize> = (0..n).filter(|&a| a != zero && a != one).collect();
        let engine = Engine::finite(&ft, &gens);
        Ok(Monoid {
            kind: MonoidKind::Finite,
            groupoid: Groupoid::Finite(Arc::new(ft)),
            engine: Arc::new(engine),
            generators: gens.into_iter().map(Element::Index).collect(),
        })
    }

    /// Parses a monoid description file.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MonoidFile = serde_json::from_str(text).map_err(|e| Error::from_json(&e))?;
        let kind = file.kind.as_str();
        match kind {
            "numerical" => {
                let gens = required(file.generators, "generators", kind)?;
                let ints = gens
                    .into_iter()
                    .map(|c| match c {
                        Coordinate::Int(v) => Ok(v),
                        Coordinate::Vector(v) => Err(Error::field(
                            "generators",
                            format!("expected an integer, found vector {v:?}"),
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Monoid::numerical(&ints)
            }
            "affine" => {
                let dim = required(file.dim, "dim", kind)?;
                let gens = required(file.generators, "generators", kind)?;
                let vecs = gens
                    .into_iter()
                    .map(|c| match c {
                        Coordinate::Vector(v) => Ok(v),
                        Coordinate::Int(v) => Err(Error::field(
                            "generators",
                            format!("expected a vector, found integer {v}"),
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Monoid::affine(dim, &vecs)
            }
            "finite" => {
                let size = required(file.size, "size", kind)?;
                let table = required(file.table, "table", kind)?;
                let one = required(file.one, "one", kind)?;
                let zero = required(file.zero, "zero", kind)?;
                if table.len() != size {
                    return Err(Error::field(
                        "size",
                        format!("size {size} does not match a table with {} rows", table.len()),
                    ));
                }
                Monoid::finite(table, one, zero)
            }
            other => Err(Error::field(
                "kind",
                format!("unknown kind \"{other}\" (expected numerical, affine or finite)"),
            )),
        }
    }

    pub fn to_json(&self) -> String {
        match (&self.kind, &self.groupoid) {
            (MonoidKind::Numerical, _) => serde_json::json!({
                "kind": "numerical",
                "generators": self.generators.iter().filter_map(Element::as_int).collect::<Vec<_>>(),
            }),
            (MonoidKind::Affine, g) => serde_json::json!({
                "kind": "affine",
                "dim": g.dim(),
                "generators": self.generators.iter().filter_map(|e| e.as_vector().map(<[i64]>::to_vec)).collect::<Vec<_>>(),
            }),
            (MonoidKind::Finite, Groupoid::Finite(t)) => serde_json::json!({
                "kind": "finite",
                "size": t.size(),
                "table": t.table,
                "one": t.one,
                "zero": t.zero,
            }),
            _ => unreachable!("finite monoid over an infinite carrier"),
        }
        .to_string()
    }

    pub fn kind(&self) -> MonoidKind {
        self.kind
    }

    /// The quotient groupoid `G`; for finite monoids `G = H`.
    pub fn quotient_groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn one(&self) -> Element {
        self.groupoid.one()
    }

    pub fn zero(&self) -> Element {
        self.groupoid.zero()
    }

    /// Exact membership test.
    pub fn contains(&self, e: &Element) -> bool {
        self.groupoid.contains(e) && self.engine.contains(e)
    }

    pub fn is_unit(&self, e: &Element) -> bool {
        self.contains(e) && self.groupoid.inverse(e).is_some_and(|inv| self.contains(&inv))
    }

    /// `H` intersected with the groupoid window of radius `bound`.
    pub fn window(&self, bound: i64) -> Vec<Element> {
        self.groupoid
            .window(bound)
            .into_iter()
            .filter(|e| self.contains(e))
            .collect()
    }

    /// This monoid as an element of `R(G|H)`.
    pub fn as_overmonoid(&self) -> Overmonoid {
        Overmonoid::from_engine(
            self.groupoid.clone(),
            self.generators.clone(),
            self.engine.clone(),
            self.label(),
        )
    }

    /// Gaps of a numerical semigroup.
    pub fn gaps(&self) -> Option<Vec<i64>> {
        match (&self.kind, self.engine.as_ref()) {
            (MonoidKind::Numerical, Engine::Numerical(n)) => Some(n.gaps()),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            MonoidKind::Finite => format!("finite[{}]", self.window(0).len()),
            _ => {
                let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
                format!("<{}>", gens.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_with_zero(n: usize) -> Monoid {
        // elements 0..n are the cyclic group, n is the zero
        let size = n + 1;
        let table = (0..size)
            .map(|a| {
                (0..size)
                    .map(|b| if a == n || b == n { n } else { (a + b) % n })
                    .collect()
            })
            .collect();
        Monoid::finite(table, 0, n).unwrap()
    }

    #[test]
    fn parse_numerical() {
        let h = Monoid::from_json(r#"{"kind":"numerical","generators":[2,3]}"#).unwrap();
        assert_eq!(h.kind(), MonoidKind::Numerical);
        assert!(h.contains(&Element::Int(7)));
        assert!(!h.contains(&Element::Int(1)));
        assert_eq!(h.gaps(), Some(vec![1]));
    }

    #[test]
    fn parse_affine() {
        let h =
            Monoid::from_json(r#"{"kind":"affine","dim":2,"generators":[[1,0],[0,1]]}"#).unwrap();
        assert!(!h.contains(&Element::vector(&[1, -1])));
        assert_eq!(h.quotient_groupoid().describe(), "Z^2 u {inf}");
    }

    #[test]
    fn parse_finite_round_trip() {
        let h = cyclic_with_zero(3);
        let again = Monoid::from_json(&h.to_json()).unwrap();
        assert_eq!(again.window(0), h.window(0));
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let err = Monoid::from_json("{\n\"kind\":\"numerical\",\n\"generators\": [2, \"x\"]}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = Monoid::from_json(r#"{"kind":"numerical"}"#).unwrap_err();
        assert!(err.to_string().contains("generators"), "{err}");
        let err = Monoid::from_json(r#"{"kind":"numerical","generators":[2,4]}"#).unwrap_err();
        assert!(matches!(err, Error::InvalidField { ref field, .. } if field == "generators"));
    }

    #[test]
    fn non_cancellative_finite_rejected() {
        // {1, a, 0} with a·a = 0 is commutative and associative but not cancellative
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]];
        assert!(matches!(
            Monoid::finite(table, 0, 2),
            Err(Error::NotCancellative(_))
        ));
    }

    #[test]
    fn finite_group_with_zero_is_its_own_groupoid() {
        let h = cyclic_with_zero(4);
        let g = h.quotient_groupoid();
        for x in g.window(0) {
            assert!(h.contains(&x));
        }
        assert_eq!(g.inverse(&Element::Index(1)), Some(Element::Index(3)));
    }

    #[test]
    fn rank_deficient_affine_is_unsupported() {
        assert!(matches!(
            Monoid::affine(2, &[vec![1, 1]]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn quotient_of_two_three_is_integers() {
        let h = Monoid::numerical(&[2, 3]).unwrap();
        assert_eq!(h.quotient_groupoid(), &Groupoid::Integers);
        // the group of differences reaches 1 = 3 - 2
        assert!(h.contains(&Element::Int(3)) && h.contains(&Element::Int(2)));
    }
}
