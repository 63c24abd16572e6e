use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;

use super::{falsify_finitary, FalsifyOutcome, ModuleSystem};
use crate::ideals::AxiomOptions;
use crate::monoid::{format_set, Element};
use crate::report::Check;
use crate::sampling::{random_subset, rng, subsets_up_to};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAxiomOptions {
    /// Universes up to this size are checked over all subsets.
    pub exhaustive_limit: usize,
    /// Larger universes: all subsets up to this size plus `samples` random ones.
    pub subset_size: usize,
    pub samples: usize,
    /// Number of scalars `c ∈ G^•` tried for Id3.
    pub scalars: usize,
    /// Sets `B` whose closure is fed back in for the idempotency probe.
    pub idempotency_samples: usize,
    /// Largest truncation of `B_r` used as an input set.
    pub idempotency_width: usize,
    /// Index bound for the falsifier on indexed families.
    pub family_bound: u64,
    pub seed: u64,
}

impl Default for ModuleAxiomOptions {
    fn default() -> Self {
        ModuleAxiomOptions {
            exhaustive_limit: 8,
            subset_size: 2,
            samples: 100,
            scalars: 8,
            idempotency_samples: 400,
            idempotency_width: 12,
            family_bound: 6,
            seed: 0,
        }
    }
}

impl ModuleAxiomOptions {
    fn pool(&self, n: usize) -> (Vec<Vec<usize>>, String) {
        crate::ideals::subset_pool(
            n,
            &AxiomOptions {
                exhaustive_limit: self.exhaustive_limit,
                subset_size: self.subset_size,
                samples: self.samples,
                seed: self.seed,
            },
        )
    }
}

#[derive(Debug, Clone)]
pub struct ModuleAxiomRun {
    pub subsets: usize,
    pub mode: String,
    pub checks: Vec<Check>,
}

struct Traces<'a> {
    r: &'a dyn ModuleSystem,
    universe: &'a [Element],
    memo: HashMap<Vec<usize>, FixedBitSet>,
}

impl<'a> Traces<'a> {
    fn get(&mut self, idx: &[usize]) -> &FixedBitSet {
        if !self.memo.contains_key(idx) {
            let a = pick(self.universe, idx);
            let mut bits = FixedBitSet::with_capacity(self.universe.len());
            for (i, g) in self.universe.iter().enumerate() {
                bits.set(i, self.r.contains(&a, g));
            }
            self.memo.insert(idx.to_vec(), bits);
        }
        &self.memo[idx]
    }
}

fn pick(universe: &[Element], idx: &[usize]) -> Vec<Element> {
    idx.iter().map(|&i| universe[i].clone()).collect()
}

/// Checks Id1, M2, Id3 (for `c ∈ G^•`) and M4 on subsets of `universe ⊆ G`,
/// plus Id2 and idempotency as informational lines.
pub fn check_module_axioms(r: &dyn ModuleSystem, universe: &[Element], opts: &ModuleAxiomOptions) -> ModuleAxiomRun {
    let h = r.monoid();
    let grp = h.quotient_groupoid();
    let zero = grp.zero();
    let n = universe.len();
    let (pool, mode) = opts.pool(n);
    let mut traces = Traces {
        r,
        universe,
        memo: HashMap::new(),
    };
    for idx in &pool {
        traces.get(idx);
    }
    let label = |count: usize| format!("({mode}, n={count})");
    let mut checks = Vec::new();

    // Id1: A ∪ {0} ⊆ A_r
    let id1 = pool.iter().find_map(|idx| {
        let a = pick(universe, idx);
        a.iter()
            .chain(std::iter::once(&zero))
            .find(|g| !r.contains(&a, g))
            .map(|g| format!("A={} missing={g}", format_set(&a)))
    });
    checks.push(match id1 {
        None => Check::pass("AXIOM", "Id1", label(pool.len())),
        Some(w) => Check::fail("AXIOM", "Id1", w),
    });

    // M2 on every one-element removal; chains of removals give all A ⊆ B
    let mut m2 = None;
    let mut pairs = 0usize;
    'm2: for idx in &pool {
        let big = traces.get(idx).clone();
        for skip in 0..idx.len() {
            let small: Vec<usize> = idx.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            pairs += 1;
            let st = traces.get(&small);
            if let Some(g) = st.difference(&big).next() {
                m2 = Some(format!(
                    "A={} B={} g={}",
                    format_set(&pick(universe, &small)),
                    format_set(&pick(universe, idx)),
                    universe[g]
                ));
                break 'm2;
            }
        }
    }
    checks.push(match m2 {
        None => Check::pass("AXIOM", "M2", label(pairs)),
        Some(w) => Check::fail("AXIOM", "M2", w),
    });

    // Id3: c·A_r = (cA)_r for c ∈ G^•
    let scalars = pick_scalars(r, universe, opts);
    let mut id3 = None;
    let mut probes = 0usize;
    'id3: for c in &scalars {
        let inv = grp.inverse(c).expect("nonzero scalar");
        for idx in &pool {
            let a = pick(universe, idx);
            let ca: Vec<Element> = a.iter().map(|x| grp.mul(c, x)).collect();
            for g in universe {
                probes += 1;
                let left = r.contains(&a, &grp.mul(&inv, g));
                let right = r.contains(&ca, g);
                if left != right {
                    id3 = Some(format!("c={c} A={} g={g}", format_set(&a)));
                    break 'id3;
                }
            }
        }
    }
    checks.push(match id3 {
        None => Check::pass("AXIOM", "Id3", format!("({mode}, {} scalars, n={probes})", scalars.len())),
        Some(w) => Check::fail("AXIOM", "Id3", w),
    });

    // M4: H·A_r ⊆ A_r, tested on the generators of H
    let mut m4 = None;
    let mut count = 0usize;
    'm4: for idx in &pool {
        let a = pick(universe, idx);
        let members: Vec<usize> = traces.get(idx).ones().collect();
        for i in members {
            for gen in h.generators() {
                count += 1;
                let p = grp.mul(&universe[i], gen);
                if !r.contains(&a, &p) {
                    m4 = Some(format!("A={} g={} h={gen}", format_set(&a), universe[i]));
                    break 'm4;
                }
            }
        }
    }
    checks.push(match m4 {
        None => Check::pass("AXIOM", "M4", label(count)),
        Some(w) => Check::fail("AXIOM", "M4", w),
    });

    // Id2 (A ⊆ B_r ⇒ A_r ⊆ B_r) over pool pairs, and idempotency through the
    // truncation X of B_r: X ⊆ B_r, so X_r ⊄ B_r is both an Id2 and an
    // idempotency counterexample
    let mut id2 = None;
    'id2: for (bi, b) in pool.iter().enumerate() {
        let bt = traces.get(b).clone();
        for a in &pool {
            if a.iter().all(|&i| bt[i]) {
                let at = traces.get(a);
                if let Some(g) = at.difference(&bt).next() {
                    id2 = Some((bi, a.clone(), g));
                    break 'id2;
                }
            }
        }
    }
    let mut idem = None;
    let zero_first = |bits: &FixedBitSet| -> Vec<usize> {
        let mut v: Vec<usize> = bits.ones().collect();
        v.sort_by_key(|&i| !grp.is_zero(&universe[i]));
        v.truncate(opts.idempotency_width);
        v
    };
    'idem: for b in pool.iter().take(opts.idempotency_samples) {
        let bt = traces.get(b).clone();
        let x = zero_first(&bt);
        let xt = traces.get(&x).clone();
        if let Some(g) = xt.difference(&bt).next() {
            idem = Some((b.clone(), x, g));
            break 'idem;
        }
    }
    checks.push(match &id2 {
        None => Check::info("AXIOM", "Id2", format!("holds {}", label(pool.len() * pool.len()))),
        Some((bi, a, g)) => Check::info(
            "AXIOM",
            "Id2",
            format!(
                "fails A={} B={} g={} (A in B_r, g in A_r, g not in B_r)",
                format_set(&pick(universe, a)),
                format_set(&pick(universe, &pool[*bi])),
                universe[*g]
            ),
        ),
    });
    checks.push(match &idem {
        None => Check::info(
            "AXIOM",
            "idempotent",
            format!("holds (n={})", pool.len().min(opts.idempotency_samples)),
        ),
        Some((b, x, g)) => Check::info(
            "AXIOM",
            "idempotent",
            format!(
                "fails B={} X={} g={} (X in B_r, g in X_r, g not in B_r)",
                format_set(&pick(universe, b)),
                format_set(&pick(universe, x)),
                universe[*g]
            ),
        ),
    });
    let idem_holds = idem.is_none();
    checks.push(Check::from_bool(
        "AXIOM",
        "Id2-iff-idempotent",
        id2.is_none() == idem_holds,
        if idem_holds { "both hold" } else { "both fail" },
        "Id2 and idempotency disagree on the samples",
    ));
    if r.declared_idempotent() {
        checks.push(Check::from_bool(
            "AXIOM",
            "declared-idempotent",
            idem_holds,
            "holds on samples",
            "idempotency fails on samples for a system built idempotent",
        ));
    }

    ModuleAxiomRun {
        subsets: pool.len(),
        mode,
        checks,
    }
}

/// The identity, the generators of `H` and their inverses when they lie in
/// the universe, then seeded random nonzero universe elements.
fn pick_scalars(r: &dyn ModuleSystem, universe: &[Element], opts: &ModuleAxiomOptions) -> Vec<Element> {
    let h = r.monoid();
    let grp = h.quotient_groupoid();
    let mut out: Vec<Element> = Vec::new();
    let preferred = std::iter::once(grp.one())
        .chain(h.generators().iter().cloned())
        .chain(h.generators().iter().filter_map(|g| grp.inverse(g)));
    for c in preferred {
        if universe.contains(&c) && !out.contains(&c) {
            out.push(c);
        }
    }
    let mut rest: Vec<&Element> = universe
        .iter()
        .filter(|c| !grp.is_zero(c) && !out.contains(c))
        .collect();
    rest.shuffle(&mut rng(opts.seed ^ 0x5ca1a2));
    out.extend(rest.into_iter().cloned());
    out.truncate(opts.scalars.max(1));
    out
}

/// Bounded finitary check. Systems built from an indexed family go through
/// the falsifier; the rest are compared with the width-bounded finitary
/// closure `A ↦ ⋃ {F_r : F ⊆ A, |F| ≤ width}` on sets larger than the width.
pub fn is_finitary(
    r: &dyn ModuleSystem,
    universe: &[Element],
    opts: &ModuleAxiomOptions,
    width: Option<usize>,
) -> Check {
    let name = r.name();
    if let Some(p) = r.family() {
        let bound = universe.iter().filter_map(Element::sup_norm).max().unwrap_or(4);
        return match falsify_finitary(p, opts.family_bound, bound) {
            Ok(out @ FalsifyOutcome::Witness { .. }) => Check::fail("FINITARY", name, out.describe()),
            Ok(out) => Check::bounded("FINITARY", name, opts.family_bound, &out.describe()),
            Err(e) => Check::fail("FINITARY", name, format!("falsifier error: {e}")),
        };
    }
    let width = width.or(r.finitary_width()).unwrap_or(3);
    let n = universe.len();
    let mut rand = rng(opts.seed);
    let mut sets: Vec<Vec<usize>> = Vec::new();
    if n > width {
        for _ in 0..opts.samples.max(1) {
            sets.push(random_subset(&mut rand, n, width + 1, width + 3));
        }
    }
    let mut probes = 0usize;
    for idx in &sets {
        let a = pick(universe, idx);
        let small = subsets_up_to(a.len(), width);
        for g in universe {
            if !r.contains(&a, g) {
                continue;
            }
            probes += 1;
            let covered = small.iter().any(|f| r.contains(&pick(&a, f), g));
            if !covered {
                return Check::fail(
                    "FINITARY",
                    name,
                    format!("A={} g={g} needs more than {width} elements", format_set(&a)),
                );
            }
        }
    }
    Check::bounded("FINITARY", name, format!("width {width}, n={probes}"), "")
}
