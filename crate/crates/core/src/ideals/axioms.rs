use fixedbitset::FixedBitSet;

use super::{in_principal, IdealSystem};
use crate::monoid::{format_set, Element};
use crate::report::Check;
use crate::sampling::{random_subset, rng, subsets_up_to};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomOptions {
    /// Universes up to this size are checked over all subsets.
    pub exhaustive_limit: usize,
    /// Larger universes: all subsets up to this size...
    pub subset_size: usize,
    /// ...plus this many seeded random subsets of larger size.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            exhaustive_limit: 12,
            subset_size: 3,
            samples: 500,
            seed: 0,
        }
    }
}

/// Result of an axiom run: the verdict lines plus how the subsets were drawn.
#[derive(Debug, Clone)]
pub struct AxiomRun {
    pub subsets: usize,
    pub mode: String,
    pub checks: Vec<Check>,
}

pub(crate) fn subset_pool(n: usize, opts: &AxiomOptions) -> (Vec<Vec<usize>>, String) {
    if n <= opts.exhaustive_limit {
        return (subsets_up_to(n, n), "exhaustive".to_string());
    }
    let mut pool = subsets_up_to(n, opts.subset_size);
    if opts.samples == 0 || opts.subset_size >= n {
        return (pool, format!("exhaustive |X|<={}", opts.subset_size));
    }
    let mut r = rng(opts.seed);
    for _ in 0..opts.samples {
        pool.push(random_subset(&mut r, n, opts.subset_size + 1, opts.subset_size + 3));
    }
    (
        pool,
        format!("exhaustive |X|<={} + sampled {}", opts.subset_size, opts.samples),
    )
}

fn pick(universe: &[Element], idx: &[usize]) -> Vec<Element> {
    idx.iter().map(|&i| universe[i].clone()).collect()
}

/// Checks Id1-Id4 for `r` on subsets of `universe` (which should lie in `H`),
/// comparing closures pointwise on the universe.
pub fn check_ideal_axioms(r: &dyn IdealSystem, universe: &[Element], opts: &AxiomOptions) -> AxiomRun {
    let h = r.monoid();
    let grp = h.quotient_groupoid();
    let zero = grp.zero();
    let n = universe.len();
    let (pool, mode) = subset_pool(n, opts);
    let sets: Vec<Vec<Element>> = pool.iter().map(|s| pick(universe, s)).collect();
    let traces: Vec<FixedBitSet> = sets
        .iter()
        .map(|x| {
            let mut bits = FixedBitSet::with_capacity(n);
            for (i, g) in universe.iter().enumerate() {
                bits.set(i, r.contains(x, g));
            }
            bits
        })
        .collect();
    let label = |count: usize| format!("({mode}, n={count})");
    let mut checks = Vec::new();

    // Id1: X ∪ {0} ⊆ X_r
    let id1 = sets.iter().find_map(|x| {
        x.iter()
            .chain(std::iter::once(&zero))
            .find(|g| !r.contains(x, g))
            .map(|g| format!("X={} missing={g}", format_set(x)))
    });
    checks.push(match id1 {
        None => Check::pass("AXIOM", "Id1", label(sets.len())),
        Some(w) => Check::fail("AXIOM", "Id1", w),
    });

    // Id2: X ⊆ Y_r implies X_r ⊆ Y_r
    let mut id2 = None;
    'outer: for (xi, xs) in pool.iter().enumerate() {
        for (yi, _) in pool.iter().enumerate() {
            if xs.iter().all(|&i| traces[yi][i]) && !traces[xi].is_subset(&traces[yi]) {
                let g = traces[xi].difference(&traces[yi]).next().expect("nonempty difference");
                id2 = Some(format!(
                    "X={} Y={} g={}",
                    format_set(&sets[xi]),
                    format_set(&sets[yi]),
                    universe[g]
                ));
                break 'outer;
            }
        }
    }
    checks.push(match id2 {
        None => Check::pass("AXIOM", "Id2", label(pool.len() * pool.len())),
        Some(w) => Check::fail("AXIOM", "Id2", w),
    });

    // Id3: c·X_r = (cX)_r
    // the absorbing scalar is tried first: it is where closure maps most often break
    let mut scalars: Vec<&Element> = universe.iter().filter(|c| grp.is_zero(c)).collect();
    scalars.extend(universe.iter().filter(|c| !grp.is_zero(c)));
    let mut id3 = None;
    'outer3: for c in scalars {
        for x in &sets {
            let cx: Vec<Element> = x.iter().map(|a| grp.mul(c, a)).collect();
            for g in universe {
                let left = if grp.is_zero(c) {
                    grp.is_zero(g)
                } else {
                    // X_r ⊆ H, so g ∈ c·X_r needs g/c ∈ H
                    let q = grp.div(g, c).expect("c is nonzero");
                    h.contains(&q) && r.contains(x, &q)
                };
                let right = r.contains(&cx, g);
                if left != right {
                    id3 = Some(format!("c={c} X={} g={g}", format_set(x)));
                    break 'outer3;
                }
            }
        }
    }
    checks.push(match id3 {
        None => Check::pass("AXIOM", "Id3", label(sets.len() * n)),
        Some(w) => Check::fail("AXIOM", "Id3", w),
    });

    // Id4: cH ⊆ {c}_r
    let id4 = universe.iter().find_map(|c| {
        let single = [c.clone()];
        universe
            .iter()
            .find(|g| in_principal(h, c, g) && !r.contains(&single, g))
            .map(|g| format!("c={c} g={g}"))
    });
    checks.push(match id4 {
        None => Check::pass("AXIOM", "Id4", label(n)),
        Some(w) => Check::fail("AXIOM", "Id4", w),
    });

    AxiomRun {
        subsets: sets.len(),
        mode,
        checks,
    }
}
