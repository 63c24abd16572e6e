//! Indexed families `k ↦ S_k` (k ≥ 1) of overmonoids and the system
//! `A ↦ ⋂_k S_k A` over the whole family.
//!
//! Membership quantifies over infinitely many indices. It is decided exactly
//! with a stabilization index: past `stable_index(y)`, the membership of `y`
//! in `S_k` equals its membership in a fixed limit monoid.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Deserialize;

use super::ModuleSystem;
use crate::error::{Error, Result};
use crate::monoid::lattice::dot;
use crate::monoid::{format_set, Element, Monoid, Overmonoid};
use crate::sampling::subsets_up_to;

/// Which coordinates of the ray are multiplied by the index.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Scale {
    Named(String),
    Mask(Vec<bool>),
}

/// The JSON description of an adjoin-ray family.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub family: String,
    pub base: serde_json::Value,
    pub ray: Vec<i64>,
    #[serde(default = "default_scale")]
    pub scale: Scale,
    #[serde(default)]
    pub monotone: Option<String>,
}

fn default_scale() -> Scale {
    Scale::Named("k".to_string())
}

fn parse_base(value: &serde_json::Value) -> Result<Monoid> {
    match value {
        serde_json::Value::String(s) => {
            let (kind, rest) = s
                .split_once(':')
                .ok_or_else(|| Error::field("base", format!("expected kind:generators, got {s:?}")))?;
            match kind.trim() {
                "affine" => {
                    let gens: Vec<Vec<i64>> = serde_json::from_str(rest)
                        .map_err(|e| Error::field("base", e.to_string()))?;
                    let dim = gens
                        .first()
                        .map(Vec::len)
                        .ok_or_else(|| Error::field("base", "no generators"))?;
                    Monoid::affine(dim, &gens)
                }
                "numerical" => {
                    let gens: Vec<i64> = serde_json::from_str(rest)
                        .map_err(|e| Error::field("base", e.to_string()))?;
                    Monoid::numerical(&gens)
                }
                other => Err(Error::field("base", format!("unknown monoid kind {other:?}"))),
            }
        }
        serde_json::Value::Object(_) => Monoid::from_json(&value.to_string()),
        _ => Err(Error::field("base", "expected a string or a monoid object")),
    }
}

/// Coordinates of a nonzero element of `ℤ` or `ℤ^d`.
fn coords(e: &Element) -> Option<Vec<i64>> {
    match e {
        Element::Int(x) => Some(vec![*x]),
        Element::Vector(v) => Some(v.clone()),
        _ => None,
    }
}

fn element_like(h: &Monoid, v: Vec<i64>) -> Element {
    if h.quotient_groupoid().dim() == 1 && matches!(h.one(), Element::Int(_)) {
        Element::Int(v[0])
    } else {
        Element::Vector(v)
    }
}

#[derive(Debug, Clone)]
enum Kind {
    /// `S_k = ⟨H, ray_k⟩` with `ray_k` the ray scaled by `k` on `mask`.
    AdjoinRay {
        ray: Vec<i64>,
        mask: Vec<bool>,
        /// `ℓ ≥ 0` on the generators of `H` with `ℓ(step) > 0`.
        functional: Vec<i64>,
    },
    /// `S_k = members[min(k, n) - 1]`.
    Listed(Vec<Overmonoid>),
}

/// An indexed family of overmonoids with decidable membership at every index.
#[derive(Clone)]
pub struct ParamFamily {
    h: Monoid,
    kind: Kind,
    name: String,
    declared_decreasing: bool,
    cache: Arc<Mutex<HashMap<u64, Overmonoid>>>,
}

impl fmt::Debug for ParamFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamFamily")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .finish()
    }
}

/// Sup-norm radius of the search for a certificate functional.
const FUNCTIONAL_RADIUS: i64 = 4;

impl ParamFamily {
    /// `S_k = ⟨H, ray_k⟩`. Requires an integer functional nonnegative on the
    /// generators of `H` and positive on the scaled part of the ray; without
    /// one, membership over all indices is not decided and the family is
    /// rejected as unsupported.
    pub fn adjoin_ray(h: &Monoid, ray: &[i64], scale: &Scale, declared_decreasing: bool) -> Result<Self> {
        let d = h.quotient_groupoid().dim();
        if d == 0 || ray.len() != d {
            return Err(Error::field(
                "ray",
                format!("expected {d} coordinates, got {}", ray.len()),
            ));
        }
        let mask = match scale {
            Scale::Named(s) if s == "k" => (0..d).map(|i| i == d - 1).collect(),
            Scale::Named(s) if s == "all" => vec![true; d],
            Scale::Named(s) => {
                return Err(Error::field("scale", format!("expected \"k\", \"all\" or a mask, got {s:?}")))
            }
            Scale::Mask(m) if m.len() == d => m.clone(),
            Scale::Mask(m) => {
                return Err(Error::field("scale", format!("mask has {} entries, expected {d}", m.len())))
            }
        };
        let step: Vec<i64> = ray.iter().zip(&mask).map(|(&c, &m)| if m { c } else { 0 }).collect();
        let gens: Vec<Vec<i64>> = h.generators().iter().filter_map(coords).collect();
        let functional = certificate_functional(&gens, &step, d).ok_or_else(|| {
            Error::Unsupported(format!(
                "no functional separates the ray step {step:?} from the generators; membership over all indices is undecided"
            ))
        })?;
        let coords: Vec<String> = ray
            .iter()
            .zip(&mask)
            .map(|(&c, &m)| match (m, c) {
                (false, _) => c.to_string(),
                (true, 1) => "k".to_string(),
                (true, -1) => "-k".to_string(),
                (true, _) => format!("{c}k"),
            })
            .collect();
        let ray_k = if coords.len() == 1 { coords[0].clone() } else { format!("({})", coords.join(",")) };
        Ok(ParamFamily {
            h: h.clone(),
            name: format!("{}+{ray_k}", h.label()),
            kind: Kind::AdjoinRay {
                ray: ray.to_vec(),
                mask,
                functional,
            },
            declared_decreasing,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    /// A finite list read as an eventually constant family.
    pub fn listed(h: &Monoid, members: Vec<Overmonoid>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Precondition("a listed family needs a member".to_string()));
        }
        let labels: Vec<&str> = members.iter().map(Overmonoid::label).collect();
        Ok(ParamFamily {
            h: h.clone(),
            name: format!("[{}]", labels.join(",")),
            kind: Kind::Listed(members),
            declared_decreasing: false,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn from_file(file: &FamilyFile) -> Result<Self> {
        if file.family != "adjoin-ray" {
            return Err(Error::field("family", format!("unknown family {:?}", file.family)));
        }
        let decreasing = match file.monotone.as_deref() {
            None => false,
            Some("decreasing") => true,
            Some(other) => {
                return Err(Error::field("monotone", format!("expected \"decreasing\", got {other:?}")))
            }
        };
        let h = parse_base(&file.base)?;
        ParamFamily::adjoin_ray(&h, &file.ray, &file.scale, decreasing)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| Error::from_json(&e))?;
        ParamFamily::from_file(&file)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn monoid(&self) -> &Monoid {
        &self.h
    }

    pub fn declared_decreasing(&self) -> bool {
        self.declared_decreasing
    }

    /// The generator adjoined at index `k`, for ray families.
    pub fn ray_at(&self, k: u64) -> Option<Element> {
        match &self.kind {
            Kind::AdjoinRay { ray, mask, .. } => {
                let v = ray
                    .iter()
                    .zip(mask)
                    .map(|(&c, &m)| if m { c * k as i64 } else { c })
                    .collect();
                Some(element_like(&self.h, v))
            }
            Kind::Listed(_) => None,
        }
    }

    /// `S_k` for `k ≥ 1`.
    pub fn member(&self, k: u64) -> Overmonoid {
        assert!(k >= 1, "family indices start at 1");
        match &self.kind {
            Kind::Listed(members) => members[(k as usize).min(members.len()) - 1].clone(),
            Kind::AdjoinRay { .. } => {
                let mut cache = self.cache.lock().expect("family cache poisoned");
                cache
                    .entry(k)
                    .or_insert_with(|| {
                        let ray = self.ray_at(k).expect("ray family");
                        Overmonoid::generated(&self.h, &[ray])
                            .expect("ray lies in G")
                            .with_label(format!("S_{k}"))
                    })
                    .clone()
            }
        }
    }

    /// An index past which `y ∈ S_k` no longer depends on `k`.
    pub fn stable_index(&self, y: &Element) -> u64 {
        match &self.kind {
            Kind::Listed(members) => members.len() as u64,
            Kind::AdjoinRay { ray, mask, functional } => {
                let Some(v) = coords(y) else { return 1 };
                // ℓ(ray_k) = c0 + k·c1; past ℓ(ray_k) > ℓ(y) no multiple of ray_k fits in y
                let c0: i64 = ray.iter().zip(mask).zip(functional).filter(|((_, &m), _)| !m).map(|((&c, _), &l)| c * l).sum();
                let c1: i64 = ray.iter().zip(mask).zip(functional).filter(|((_, &m), _)| m).map(|((&c, _), &l)| c * l).sum();
                let excess = dot(functional, &v) - c0;
                (excess.div_euclid(c1) + 1).max(1) as u64
            }
        }
    }

    /// Membership of `y` in every `S_k` with `k ≥ stable_index(y)`.
    pub fn limit_contains(&self, y: &Element) -> bool {
        match &self.kind {
            Kind::Listed(members) => members.last().expect("nonempty").contains(y),
            Kind::AdjoinRay { .. } => self.h.contains(y),
        }
    }

    /// Rechecks the declared decrease `S_{k+1} ⊆ S_k` for `k < k_max` on the window.
    pub fn decrease_violation(&self, k_max: u64, window: &[Element]) -> Option<(u64, Element)> {
        (1..k_max).find_map(|k| {
            let (s, t) = (self.member(k), self.member(k + 1));
            window.iter().find(|e| t.contains(e) && !s.contains(e)).map(|e| (k, e.clone()))
        })
    }
}

fn certificate_functional(gens: &[Vec<i64>], step: &[i64], d: usize) -> Option<Vec<i64>> {
    let mut candidates: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        candidates = candidates
            .into_iter()
            .flat_map(|p| {
                (-FUNCTIONAL_RADIUS..=FUNCTIONAL_RADIUS).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    candidates.sort_by_key(|l| (l.iter().map(|c| c.abs()).max().unwrap_or(0), l.clone()));
    candidates
        .into_iter()
        .find(|l| dot(l, step) > 0 && gens.iter().all(|g| dot(l, g) >= 0))
}

/// `A ↦ ⋂_{k≥1} S_k A` over an indexed family.
#[derive(Debug, Clone)]
pub struct ParamDelta {
    family: ParamFamily,
}

impl ParamDelta {
    pub fn new(family: ParamFamily) -> Self {
        ParamDelta { family }
    }

    pub fn family_ref(&self) -> &ParamFamily {
        &self.family
    }
}

impl ModuleSystem for ParamDelta {
    fn name(&self) -> String {
        format!("r_{}", self.family.name)
    }

    fn monoid(&self) -> &Monoid {
        &self.family.h
    }

    fn contains(&self, a: &[Element], g: &Element) -> bool {
        let grp = self.family.h.quotient_groupoid();
        if a.is_empty() || grp.is_zero(g) {
            return grp.is_zero(g);
        }
        let quotients: Vec<Element> = a.iter().filter_map(|x| grp.div(g, x)).collect();
        if quotients.is_empty() {
            return false;
        }
        let last = quotients.iter().map(|y| self.family.stable_index(y)).max().unwrap_or(1);
        (1..last).all(|k| {
            let s = self.family.member(k);
            quotients.iter().any(|y| s.contains(y))
        }) && quotients.iter().any(|y| self.family.limit_contains(y))
    }

    fn declared_idempotent(&self) -> bool {
        true
    }

    fn family(&self) -> Option<&ParamDelta> {
        Some(self)
    }
}

/// Result of the search for a cover of the family without finite subcover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FalsifyOutcome {
    /// `x_k ∈ S_k` and `x_k ∉ S_j` for `k < j ≤ K`; the identity lies in the
    /// closure of `{x_k⁻¹}` at every tested index but not in `F_r` for any `F`
    /// drawn from the first `K - 1` elements.
    Witness {
        xs: Vec<Element>,
        a: Vec<Element>,
        target: Element,
        k: u64,
        subsets_checked: usize,
    },
    /// No such sequence exists up to index `K` (with the given stuck index).
    NoneUpTo { k: u64, stuck_at: u64 },
}

impl FalsifyOutcome {
    pub fn describe(&self) -> String {
        match self {
            FalsifyOutcome::Witness { xs, a, target, k, subsets_checked } => format!(
                "K={k} x_k={} A={} target={target} in A_r at indices 1..{k}, not in F_r for all {subsets_checked} F over indices <{k}",
                format_set(xs),
                format_set(a)
            ),
            FalsifyOutcome::NoneUpTo { k, stuck_at } => {
                format!("none up to K={k} (no separating element at index {stuck_at})")
            }
        }
    }
}

/// Searches for `x_1, …, x_K` with `x_k ∈ S_k` and `x_k ∉ S_j` for
/// `k < j ≤ K`, candidates drawn from the family's own generators and then
/// the window by norm. On success the witness is verified against the exact
/// system over all indices.
pub fn falsify_finitary(r: &ParamDelta, k_max: u64, window_bound: i64) -> Result<FalsifyOutcome> {
    if k_max < 2 {
        return Err(Error::Precondition("the falsifier needs K >= 2".to_string()));
    }
    let fam = &r.family;
    let grp = fam.h.quotient_groupoid();
    let window: Vec<Element> = grp
        .window_by_norm(window_bound)
        .into_iter()
        .filter(|e| !grp.is_zero(e))
        .collect();
    let members: Vec<Overmonoid> = (1..=k_max).map(|k| fam.member(k)).collect();
    let mut xs = Vec::new();
    for k in 1..=k_max {
        let candidates = fam.ray_at(k).into_iter().chain(window.iter().cloned());
        let found = candidates.into_iter().find(|x| {
            members[k as usize - 1].contains(x) && (k + 1..=k_max).all(|j| !members[j as usize - 1].contains(x))
        });
        match found {
            Some(x) => xs.push(x),
            None => return Ok(FalsifyOutcome::NoneUpTo { k: k_max, stuck_at: k }),
        }
    }
    let a: Vec<Element> = xs.iter().map(|x| grp.inverse(x).expect("nonzero")).collect();
    let target = grp.one();
    for (k, x) in xs.iter().enumerate() {
        // 1 ∈ x_k⁻¹ S_k
        if !members[k].contains(x) {
            return Err(Error::LawViolated(format!("x_{} = {x} left S_{}", k + 1, k + 1)));
        }
    }
    let prefix = (k_max - 1) as usize;
    let subsets = subsets_up_to(prefix, prefix);
    for idx in &subsets {
        let f: Vec<Element> = idx.iter().map(|&i| a[i].clone()).collect();
        if r.contains(&f, &target) {
            return Err(Error::LawViolated(format!(
                "target lies in the closure of the finite set {}",
                format_set(&f)
            )));
        }
    }
    Ok(FalsifyOutcome::Witness {
        xs,
        a,
        target,
        k: k_max,
        subsets_checked: subsets.len(),
    })
}
