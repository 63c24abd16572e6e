use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::error::Result;
use crate::fintop::FiniteSpace;
use crate::ideals::{enumerate_primes, localize};
use crate::modsys::{
    check_module_axioms, extract_finite_witness, falsify_finitary, is_finitary, iota, meet_finite_witness,
    DeltaSystem, ZeroCollapse, FalsifyOutcome, Meet, ModuleAxiomOptions, ModuleSystem, NonzeroReading, ParamDelta,
    ParamFamily, Phi, SystemSpace,
};
use crate::monoid::{format_set, Element, Monoid, MonoidKind, Overmonoid};
use crate::report::{Check, Report};
use crate::sampling::{random_subset, rng, subsets_up_to};
use crate::valuation::{overmonoid_space, zar_carrier};

use super::ideal_suites::describe_t0;
use super::{module_universe, overmonoid_carrier};

type System = Arc<dyn ModuleSystem>;

fn nonzero(h: &Monoid, universe: &[Element]) -> Vec<Element> {
    let grp = h.quotient_groupoid();
    universe.iter().filter(|e| !grp.is_zero(e)).cloned().collect()
}

fn small_sets(universe: &[Element], k: usize) -> Vec<Vec<Element>> {
    subsets_up_to(universe.len(), k)
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.iter().map(|&i| universe[i].clone()).collect())
        .collect()
}

/// Whether two systems agree on every `(S, g)` with `S` from `sets`.
fn same_on(a: &dyn ModuleSystem, b: &dyn ModuleSystem, sets: &[Vec<Element>], universe: &[Element]) -> bool {
    sets.iter().all(|s| universe.iter().all(|g| a.contains(s, g) == b.contains(s, g)))
}

fn axiom_options(seed: u64) -> ModuleAxiomOptions {
    ModuleAxiomOptions { seed, ..ModuleAxiomOptions::default() }
}

/// Prefixes each axiom line with the system it belongs to.
fn tagged(checks: Vec<Check>, system: &str) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{}@{system}", c.name);
            c
        })
        .collect()
}

/// The main1 carrier: `ι(S)` for listed overmonoids, `r_Δ` over the proper
/// localizations when there are several, the zero-collapsing system `c`, `ι(G) ∧ c`
/// and `Φ(c)`. Systems equal on the probes to an earlier one are dropped
/// and reported.
fn main1_carrier(h: &Monoid, bound: i64, universe: &[Element]) -> Result<(Vec<System>, Vec<String>)> {
    let listed = overmonoid_carrier(h, bound)?;
    let mut candidates: Vec<System> = listed.iter().map(|s| Arc::new(iota(h, s)) as System).collect();
    if h.kind() == MonoidKind::Affine && listed.len() > 3 {
        let inner = listed[1..listed.len() - 1].to_vec();
        candidates.push(Arc::new(DeltaSystem::new(h, inner)?.with_name("r_Delta(proper localizations)")));
    }
    let collapse: System = Arc::new(ZeroCollapse::new(h));
    candidates.push(Arc::clone(&collapse));
    let whole: System = Arc::new(iota(h, &Overmonoid::whole(h)));
    candidates.push(Arc::new(Meet::new(vec![whole, Arc::clone(&collapse)])?));
    candidates.push(Arc::new(Phi::new(collapse)));

    let sets = small_sets(universe, 2);
    let mut kept: Vec<System> = Vec::new();
    let mut merged = Vec::new();
    for r in candidates {
        match kept.iter().find(|k| same_on(k.as_ref(), r.as_ref(), &sets, universe)) {
            Some(k) => merged.push(format!("{}={}", r.name(), k.name())),
            None => kept.push(r),
        }
    }
    Ok((kept, merged))
}

/// The carrier topologized by `U_S` over the pool plus the reduced sets
/// `g⁻¹S` that separate each pair.
fn carrier_space(space: &SystemSpace, reading: NonzeroReading) -> Result<FiniteSpace> {
    let base = space.space(reading)?;
    if reading == NonzeroReading::AvoidZero {
        return Ok(base);
    }
    let mut subbasis = base.subbasis().to_vec();
    for i in 0..space.len() {
        for j in i + 1..space.len() {
            if let Some((_, _, reduced)) = space.reduced_separation(i, j) {
                let m = space.u_mask(&reduced)?;
                if !subbasis.contains(&m) {
                    subbasis.push(m);
                }
            }
        }
    }
    FiniteSpace::new(space.labels(), subbasis)
}

pub(super) fn main1(h: &Monoid, bound: i64, seed: u64, report: &mut Report) -> Result<Option<String>> {
    let universe = module_universe(h, bound);
    let (systems, merged) = main1_carrier(h, bound, &universe)?;
    let names: Vec<String> = systems.iter().map(|r| r.name()).collect();
    report.push(Check::info(
        "CARRIER",
        "systems",
        format!(
            "{} systems on {} window elements: {}{}",
            systems.len(),
            universe.len(),
            names.join(","),
            if merged.is_empty() { String::new() } else { format!("; identified {}", merged.join(",")) }
        ),
    ));
    let opts = axiom_options(seed);
    for r in &systems {
        report.extend(tagged(check_module_axioms(r.as_ref(), &universe, &opts).checks, &r.name()));
    }

    // zero-collapse in additive notation: {0}_r = H, and H contains inf, so ({0}_r)_r = G
    let collapse = ZeroCollapse::new(h);
    let one = [h.one()];
    let first: Vec<Element> = universe.iter().filter(|g| collapse.contains(&one, g)).cloned().collect();
    let first_is_h = universe.iter().all(|g| collapse.contains(&one, g) == h.contains(g));
    let second_is_g = universe.iter().all(|g| collapse.contains(&first, g));
    let outside = universe.iter().find(|g| !h.contains(g));
    report.push(match outside {
        None => Check::info(
            "COLLAPSE",
            "Id2-failure",
            format!("H = G on the window, so ({{1}}_r)_r = {{1}}_r = G (first step H: {first_is_h}, second G: {second_is_g})"),
        ),
        Some(x) => Check::from_bool(
            "COLLAPSE",
            "Id2-failure",
            first_is_h && second_is_g,
            format!(
                "({{1}}_r)_r = G != H = {{1}}_r on the window (1 is the identity {}), e.g. {x} in G minus H",
                h.one()
            ),
            format!("{{1}}_r = H: {first_is_h}, ({{1}}_r)_r = G: {second_is_g}"),
        ),
    });

    let space = Arc::new(SystemSpace::new(systems.clone(), universe.clone(), seed)?);
    let top = carrier_space(&space, NonzeroReading::Nonempty)?;
    let sr = top.spectral_report();
    report.push(Check::from_bool(
        "SPACE",
        "T0",
        sr.t0,
        format!("U_S separates the carrier, S over {}", NonzeroReading::Nonempty.as_str()),
        describe_t0(&top),
    ));
    report.push(Check::from_bool("SPACE", "spectral", sr.hochster(), "finite T0 space", "not spectral"));
    let avoid = space.space(NonzeroReading::AvoidZero)?;
    report.push(Check::info(
        "SPACE",
        "T0-avoid-zero",
        match avoid.t0_violation() {
            None => format!("T0 also with S over {}", NonzeroReading::AvoidZero.as_str()),
            Some(_) => format!("not T0 with S over {}: {}", NonzeroReading::AvoidZero.as_str(), describe_t0(&avoid)),
        },
    ));
    let mut bad_reduction = None;
    let mut pairs = 0;
    for i in 0..space.len() {
        for j in i + 1..space.len() {
            pairs += 1;
            let ok = space.reduced_separation(i, j).is_some_and(|(_, _, reduced)| {
                space.in_u(i, &reduced).ok() != space.in_u(j, &reduced).ok()
            });
            if !ok && bad_reduction.is_none() {
                bad_reduction = Some(format!("{} and {}", names[i], names[j]));
            }
        }
    }
    report.push(Check::from_bool(
        "SPACE",
        "reduced-separation",
        bad_reduction.is_none(),
        format!("U_{{g^-1 S}} separates all {pairs} pairs separated by some U_{{S,g}}"),
        bad_reduction.unwrap_or_default(),
    ));
    report.push(Check::from_bool(
        "SPACE",
        "patch",
        top.patch_topology()?.is_discrete(),
        "patch topology is discrete",
        "patch topology is not discrete",
    ));

    let mut limit_fail = None;
    let mut probes = 0;
    for at in 0..space.len() {
        let (n, diff) = space.check_limit(at, 200, seed.wrapping_add(at as u64))?;
        probes += n;
        if let Some(d) = diff {
            limit_fail.get_or_insert(format!("{}: {d}", names[at]));
        }
    }
    report.push(Check::from_bool(
        "ULTRAFILTER",
        "r_U",
        limit_fail.is_none(),
        format!("r_U reproduces the base system at all {} points ({probes} probes)", space.len()),
        limit_fail.unwrap_or_default(),
    ));
    let limit_universe = module_universe(h, 1);
    for at in 0..space.len() {
        let lim = space.ultrafilter_limit(at)?;
        // each limit evaluates the whole carrier, so probe a smaller window
        let run = check_module_axioms(&lim, &limit_universe, &opts);
        let core: Vec<Check> = run
            .checks
            .into_iter()
            .filter(|c| ["Id1", "M2", "Id3", "M4"].contains(&c.name.as_str()))
            .collect();
        report.extend(tagged(core, &lim.name()));
    }
    Ok(Some(top.to_dot("systems")))
}

/// Overmonoids used as members of finite Δ: the listed carrier plus, in
/// the plane, the valuation monoids with unit weights.
fn delta_pool(h: &Monoid, bound: i64, window: &[Element]) -> Result<Vec<Overmonoid>> {
    let mut pool = overmonoid_carrier(h, bound)?;
    if h.kind() == MonoidKind::Affine {
        for v in zar_carrier(h, 1)? {
            if !pool.iter().any(|s| s.agrees_on(&v, window)) {
                pool.push(v);
            }
        }
    }
    Ok(pool)
}

pub(super) fn main2(
    h: &Monoid,
    family: Option<&ParamFamily>,
    bound: i64,
    seed: u64,
    report: &mut Report,
) -> Result<Option<String>> {
    let universe = module_universe(h, bound);
    let scalars = nonzero(h, &universe);
    let pool = delta_pool(h, bound, &universe)?;
    let mut r = rng(seed);
    let mut instances = 0;
    let mut max_f = 0;
    let mut failure = None;
    let mut idem_failure = None;
    let mut attempts = 0;
    while instances < 100 && attempts < 10_000 {
        attempts += 1;
        let idx = random_subset(&mut r, pool.len(), 1, pool.len().min(4));
        let members: Vec<Overmonoid> = idx.iter().map(|&i| pool[i].clone()).collect();
        let delta = DeltaSystem::new(h, members)?;
        let a: Vec<Element> = random_subset(&mut r, scalars.len(), 1, 4).iter().map(|&i| scalars[i].clone()).collect();
        let inside: Vec<&Element> = scalars.iter().filter(|x| delta.contains(&a, x)).collect();
        let Some(&x) = inside.choose(&mut r) else { continue };
        instances += 1;
        match extract_finite_witness(&delta, &a, x) {
            Ok(f) if f.len() <= idx.len() && f.iter().all(|e| a.contains(e)) => max_f = max_f.max(f.len()),
            Ok(f) => {
                failure.get_or_insert(format!("A={} x={x} F={} |Delta|={}", format_set(&a), format_set(&f), idx.len()));
            }
            Err(e) => {
                failure.get_or_insert(format!("A={} x={x}: {e}", format_set(&a)));
            }
        }
        let b: Vec<Element> = universe.iter().filter(|g| delta.contains(&a, g)).cloned().collect();
        if let Some(g) = universe.iter().find(|g| delta.contains(&b, g) && !delta.contains(&a, g)) {
            idem_failure.get_or_insert(format!("A={} g={g}", format_set(&a)));
        }
    }
    report.push(Check::from_bool(
        "MAIN2",
        "forward",
        failure.is_none() && instances == 100,
        format!(
            "extracted F rechecked on {instances} instances, |F| <= |Delta|, max |F|={max_f}, Delta from {} overmonoids",
            pool.len()
        ),
        failure.unwrap_or_else(|| format!("only {instances} instances found")),
    ));
    report.push(Check::from_bool(
        "MAIN2",
        "idempotent",
        idem_failure.is_none(),
        format!("(A_r)_r = A_r on the window for {instances} instances"),
        idem_failure.unwrap_or_default(),
    ));

    let k_max = bound.max(2) as u64;
    match family {
        Some(fam) => {
            if fam.declared_decreasing() {
                let v = fam.decrease_violation(k_max, &universe);
                report.push(Check::from_bool(
                    "FAMILY",
                    "decreasing",
                    v.is_none(),
                    format!("S_(k+1) in S_k on the window for k < {k_max}"),
                    v.map(|(k, y)| format!("{y} in S_{} but not in S_{k}", k + 1)).unwrap_or_default(),
                ));
            }
            let pd = ParamDelta::new(fam.clone());
            report.push(match falsify_finitary(&pd, k_max, bound.max(1))? {
                out @ FalsifyOutcome::Witness { .. } => {
                    Check::pass("MAIN2", "converse", format!("{}: r_Delta is not finitary, {}", fam.name(), out.describe()))
                }
                out => Check::bounded("MAIN2", "converse", k_max, &format!("{}: {}", fam.name(), out.describe())),
            });
        }
        None => {
            let listed = ParamFamily::listed(h, pool.clone())?;
            let pd = ParamDelta::new(listed);
            report.push(match falsify_finitary(&pd, k_max, bound.clamp(1, 4))? {
                out @ FalsifyOutcome::Witness { .. } => Check::fail(
                    "MAIN2",
                    "converse",
                    format!("a finite family produced a non-finitary witness: {}", out.describe()),
                ),
                out => Check::bounded(
                    "MAIN2",
                    "converse",
                    k_max,
                    &format!("finite family of {} overmonoids: {}", pool.len(), out.describe()),
                ),
            });
        }
    }
    Ok(None)
}

pub(super) fn prop1(h: &Monoid, bound: i64, seed: u64, report: &mut Report) -> Result<Option<String>> {
    let universe = module_universe(h, bound);
    let carrier = overmonoid_carrier(h, bound)?;
    let systems: Vec<System> = carrier.iter().map(|s| Arc::new(iota(h, s)) as System).collect();
    let one = [h.one()];
    let recovered = carrier
        .iter()
        .zip(&systems)
        .find(|(s, r)| universe.iter().any(|g| r.contains(&one, g) != s.contains(g)));
    let mut duplicate = None;
    for i in 0..carrier.len() {
        for j in i + 1..carrier.len() {
            if universe.iter().all(|g| systems[i].contains(&one, g) == systems[j].contains(&one, g)) {
                duplicate.get_or_insert((i, j));
            }
        }
    }
    report.push(Check::from_bool(
        "PROP1",
        "injective",
        recovered.is_none() && duplicate.is_none(),
        format!("{{1}}_iota(S) = S recovers each of the {} overmonoids, pairwise distinct", carrier.len()),
        match (recovered, duplicate) {
            (Some((s, _)), _) => format!("{{1}}_r differs from {}", s.label()),
            (_, Some((i, j))) => format!("{} and {} collide", carrier[i].label(), carrier[j].label()),
            _ => String::new(),
        },
    ));

    let grp = h.quotient_groupoid();
    let scalars = nonzero(h, &universe);
    let sets = small_sets(&scalars, 2);
    let in_mask = |f: &dyn Fn(usize) -> bool| (0..carrier.len()).filter(|&i| f(i)).fold(0u64, |m, i| m | 1 << i);
    let mut pre_fail = None;
    for s in &sets {
        let lhs = in_mask(&|i| systems[i].contains(s, &h.one()));
        let rhs = in_mask(&|i| s.iter().any(|a| carrier[i].contains(&grp.inverse(a).expect("nonzero"))));
        if lhs != rhs {
            pre_fail.get_or_insert(format!("S={}", format_set(s)));
        }
    }
    report.push(Check::from_bool(
        "PROP1",
        "preimage-law",
        pre_fail.is_none(),
        format!("iota^-1(U_S) is the union of U(a^-1) over a in S for {} sets", sets.len()),
        pre_fail.unwrap_or_default(),
    ));

    let xs: Vec<Element> = if h.kind() == MonoidKind::Numerical {
        [1, -1, 2, -2, 3, -3].into_iter().map(Element::Int).collect()
    } else {
        scalars.clone()
    };
    let mut img_fail = None;
    for x in &xs {
        let inv = grp.inverse(x).expect("nonzero");
        let lhs = in_mask(&|i| carrier[i].contains(x));
        let rhs = in_mask(&|i| systems[i].contains(std::slice::from_ref(&inv), &h.one()));
        if lhs != rhs {
            img_fail.get_or_insert(format!("x={x}"));
        }
    }
    report.push(Check::from_bool(
        "PROP1",
        "image-law",
        img_fail.is_none(),
        format!("iota(U(x)) = iota(R) meet U_{{x^-1}} for x in {}", format_set(&xs)),
        img_fail.unwrap_or_default(),
    ));

    let zariski = overmonoid_space(&carrier, &universe)?;
    let sp = SystemSpace::new(systems, universe.clone(), seed)?;
    let induced = sp.space(NonzeroReading::AvoidZero)?;
    let same = (0..carrier.len()).all(|i| zariski.min_open(i) == induced.min_open(i));
    report.push(Check::from_bool(
        "PROP1",
        "embedding",
        same,
        "the topology induced through iota equals the Zariski topology",
        "minimal open neighbourhoods differ",
    ));
    Ok(Some(zariski.to_dot("overmonoids")))
}

pub(super) fn prop2(h: &Monoid, bound: i64, seed: u64, report: &mut Report) -> Result<Option<String>> {
    let universe = module_universe(h, bound);
    let scalars = nonzero(h, &universe);
    let carrier = overmonoid_carrier(h, bound)?;
    let mut pool: Vec<System> = carrier.iter().map(|s| Arc::new(iota(h, s)) as System).collect();
    pool.push(Arc::new(DeltaSystem::new(h, carrier.clone())?.with_name("r_Delta(R)")));
    pool.push(Arc::new(ZeroCollapse::new(h)));

    let mut r = rng(seed);
    let mut instances = 0;
    let mut attempts = 0;
    let mut failure = None;
    while instances < 50 && attempts < 10_000 {
        attempts += 1;
        let tau: Vec<System> = random_subset(&mut r, pool.len(), 1, 3).iter().map(|&i| Arc::clone(&pool[i])).collect();
        let meet = Meet::new(tau.clone())?;
        let a: Vec<Element> = random_subset(&mut r, scalars.len(), 1, 4).iter().map(|&i| scalars[i].clone()).collect();
        let inside: Vec<&Element> = scalars.iter().filter(|x| meet.contains(&a, x)).collect();
        let Some(&x) = inside.choose(&mut r) else { continue };
        instances += 1;
        match meet_finite_witness(&tau, &a, x) {
            Ok(e) if e.iter().all(|y| a.contains(y)) => {}
            Ok(e) => {
                failure.get_or_insert(format!("{} A={} x={x} E={}", meet.name(), format_set(&a), format_set(&e)));
            }
            Err(err) => {
                failure.get_or_insert(format!("{} A={} x={x}: {err}", meet.name(), format_set(&a)));
            }
        }
    }
    report.push(Check::from_bool(
        "PROP2",
        "meet-witness",
        failure.is_none() && instances == 50,
        format!("finite E in A with x in E_r rechecked on {instances} meets of up to 3 systems"),
        failure.unwrap_or_else(|| format!("only {instances} instances found")),
    ));
    let meet = Meet::new(pool)?;
    let opts = ModuleAxiomOptions { samples: 20, ..axiom_options(seed) };
    report.push(is_finitary(&meet, &universe, &opts, None));
    Ok(None)
}

pub(super) fn corollaries(h: &Monoid, bound: i64, seed: u64, report: &mut Report) -> Result<Option<String>> {
    let universe = module_universe(h, bound);
    let locs: Vec<Overmonoid> = enumerate_primes(h, bound)?
        .iter()
        .map(|p| localize(h, p))
        .collect::<Result<_>>()?;
    let zar = zar_carrier(h, 1)?;
    let systems: Vec<DeltaSystem> = vec![
        DeltaSystem::new(h, locs.clone())?.with_name(format!("r_Delta(localizations:{})", locs.len())),
        DeltaSystem::new(h, zar.clone())?.with_name(format!("r_Delta(Zar:{})", zar.len())),
    ];
    let opts = ModuleAxiomOptions { samples: 20, ..axiom_options(seed) };
    let sets = small_sets(&universe, 2);
    for r in &systems {
        report.push(is_finitary(r, &universe, &opts, None));
        let run = check_module_axioms(r, &universe, &opts);
        let kept: Vec<Check> = run
            .checks
            .into_iter()
            .filter(|c| ["Id1", "M2", "Id3", "M4", "declared-idempotent"].contains(&c.name.as_str()))
            .collect();
        report.extend(tagged(kept, &r.name()));
        let phi = Phi::new(Arc::new(r.clone()));
        report.push(Check::from_bool(
            "FIXPHI",
            r.name(),
            same_on(&phi, r, &sets, &universe),
            format!("Phi(r) = r on {} sets", sets.len()),
            "Phi(r) differs from r",
        ));
    }
    Ok(None)
}
