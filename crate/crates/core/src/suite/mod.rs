//! Named verification suites: each binds a claim about monoid spectra to a
//! set of exact or bounded checks and assembles a [`Report`].

mod ideal_suites;
mod module_suites;
mod valuation_suites;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ideals::{enumerate_primes, localize};
use crate::modsys::ParamFamily;
use crate::monoid::{Element, Monoid, MonoidKind, Overmonoid};
use crate::report::Report;
use crate::valuation::enumerate_overmonoids;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteName {
    Axioms,
    Spec,
    Ideals,
    Zar,
    Pruefer,
    Pronconst,
    Main1,
    Main2,
    Prop1,
    Prop2,
    Corollaries,
}

impl SuiteName {
    pub const ALL: [SuiteName; 11] = [
        SuiteName::Axioms,
        SuiteName::Spec,
        SuiteName::Ideals,
        SuiteName::Zar,
        SuiteName::Pruefer,
        SuiteName::Pronconst,
        SuiteName::Main1,
        SuiteName::Main2,
        SuiteName::Prop1,
        SuiteName::Prop2,
        SuiteName::Corollaries,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Axioms => "axioms",
            SuiteName::Spec => "spec",
            SuiteName::Ideals => "ideals",
            SuiteName::Zar => "zar",
            SuiteName::Pruefer => "pruefer",
            SuiteName::Pronconst => "pronconst",
            SuiteName::Main1 => "main1",
            SuiteName::Main2 => "main2",
            SuiteName::Prop1 => "prop1",
            SuiteName::Prop2 => "prop2",
            SuiteName::Corollaries => "corollaries",
        }
    }

    /// The statement the suite checks, recorded in the report header.
    pub fn claim(self) -> &'static str {
        match self {
            SuiteName::Axioms => "the s-system X -> XH satisfies Id1-Id4",
            SuiteName::Spec => "the prime s-ideals with the Zariski topology form a spectral space",
            SuiteName::Ideals => "the s-ideals with subbasis U(x) = {I : x not in I} form a spectral space",
            SuiteName::Zar => "Zar(G|H) with subbasis B(x) = {V : x in V} is a spectral space",
            SuiteName::Pruefer => {
                "the domination map Zar(G|H) -> s-spec(H) is a continuous surjection, and a homeomorphism when H is s-Pruefer"
            }
            SuiteName::Pronconst => {
                "s-spec(H) is proconstructible in the ideal space: an ideal is prime iff it lies in no O_{a,b}"
            }
            SuiteName::Main1 => "generalized module systems with subbasis U_S = {r : 1 in S_r} form a spectral space",
            SuiteName::Main2 => "r_Delta is finitary iff Delta is quasi-compact in R(G|H)",
            SuiteName::Prop1 => "iota: S -> r_{S} embeds R(G|H) topologically into the module systems",
            SuiteName::Prop2 => "the meet of finitely many finitary module systems is finitary",
            SuiteName::Corollaries => "r_Delta over finite or quasi-compact Delta is finitary and idempotent",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::field("suite", format!("unknown suite {s:?}")))
    }
}

/// Everything a suite run needs.
#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub suite: SuiteName,
    pub monoid: Option<Monoid>,
    /// How the input is named in the report header.
    pub input: String,
    pub family: Option<ParamFamily>,
    pub bound: Option<i64>,
    pub seed: u64,
}

impl SuiteSpec {
    pub fn new(suite: SuiteName, monoid: Monoid) -> Self {
        SuiteSpec {
            suite,
            input: monoid.label(),
            monoid: Some(monoid),
            family: None,
            bound: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutput {
    pub report: Report,
    /// DOT rendering of the poset or correspondence the suite built.
    pub dot: Option<String>,
}

/// Window radius used when none is given: 10 for numerical monoids, the box
/// `[-4,4]^d` for affine ones; finite carriers ignore it.
pub fn default_bound(h: &Monoid) -> i64 {
    match h.kind() {
        MonoidKind::Numerical => 10,
        MonoidKind::Affine => 4,
        MonoidKind::Finite => 0,
    }
}

pub fn run_suite(spec: &SuiteSpec) -> Result<SuiteOutput> {
    let h = match (&spec.monoid, &spec.family) {
        (Some(h), _) => h.clone(),
        (None, Some(f)) => f.monoid().clone(),
        (None, None) => return Err(Error::field("input", "no monoid given")),
    };
    let bound = spec.bound.unwrap_or_else(|| default_bound(&h));
    if bound < 0 {
        return Err(Error::field("bound", "must be nonnegative"));
    }
    let mut report = Report::new(spec.suite.as_str(), spec.suite.claim(), spec.input.clone(), bound, spec.seed);
    let dot = match spec.suite {
        SuiteName::Axioms => ideal_suites::axioms(&h, bound, spec.seed, &mut report)?,
        SuiteName::Spec => ideal_suites::spec(&h, bound, &mut report)?,
        SuiteName::Ideals => ideal_suites::ideals(&h, bound, &mut report)?,
        SuiteName::Pronconst => ideal_suites::pronconst(&h, bound, &mut report)?,
        SuiteName::Zar => valuation_suites::zar(&h, bound, &mut report)?,
        SuiteName::Pruefer => valuation_suites::pruefer(&h, bound, &mut report)?,
        SuiteName::Main1 => module_suites::main1(&h, bound, spec.seed, &mut report)?,
        SuiteName::Main2 => module_suites::main2(&h, spec.family.as_ref(), bound, spec.seed, &mut report)?,
        SuiteName::Prop1 => module_suites::prop1(&h, bound, spec.seed, &mut report)?,
        SuiteName::Prop2 => module_suites::prop2(&h, bound, spec.seed, &mut report)?,
        SuiteName::Corollaries => module_suites::corollaries(&h, bound, spec.seed, &mut report)?,
    };
    Ok(SuiteOutput { report, dot })
}

/// Weight bound for planar Zar enumeration, capped so carriers stay small.
pub(crate) fn zar_bound(h: &Monoid, bound: i64) -> i64 {
    match h.kind() {
        MonoidKind::Affine => bound.clamp(1, 3),
        _ => bound.max(1),
    }
}

/// A finite part of `R(G|H)`: all of it for numerical monoids, otherwise `H`,
/// its localizations at primes and `G`, without repeats on `window`.
pub(crate) fn overmonoid_carrier(h: &Monoid, bound: i64) -> Result<Vec<Overmonoid>> {
    let listed = match h.kind() {
        MonoidKind::Numerical => enumerate_overmonoids(h)?,
        _ => {
            let mut out = vec![h.as_overmonoid()];
            for p in enumerate_primes(h, bound)?.iter().rev() {
                out.push(localize(h, p)?);
            }
            out.push(Overmonoid::whole(h));
            out
        }
    };
    let window = h.quotient_groupoid().window(bound.min(4));
    let mut out: Vec<Overmonoid> = Vec::new();
    for s in listed {
        if !out.iter().any(|t| t.agrees_on(&s, &window)) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Universe of `G` on which module-system axioms and subbases are sampled.
pub(crate) fn module_universe(h: &Monoid, bound: i64) -> Vec<Element> {
    let radius = match h.kind() {
        MonoidKind::Numerical => bound.min(6),
        _ => bound.min(2),
    };
    h.quotient_groupoid().window(radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in SuiteName::ALL {
            assert_eq!(s.as_str().parse::<SuiteName>().unwrap(), s);
        }
        assert!("main3".parse::<SuiteName>().is_err());
    }

    #[test]
    fn carriers() {
        let h = Monoid::numerical(&[2, 3]).unwrap();
        let labels: Vec<String> = overmonoid_carrier(&h, 10).unwrap().iter().map(|s| s.label().to_string()).collect();
        assert_eq!(labels, vec!["<2,3>", "N", "Z"]);
        let q = Monoid::affine(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let c = overmonoid_carrier(&q, 4).unwrap();
        // H = H_M, two half-planes, G = H_{inf}
        assert_eq!(c.len(), 4);
        assert_eq!(c[0].label(), "<(0,1),(1,0)>");
        assert_eq!(c[3].label(), "H_{inf}");
    }
}
