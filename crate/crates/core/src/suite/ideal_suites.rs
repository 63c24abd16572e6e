use std::sync::Arc;

use crate::error::Result;
use crate::fintop::{homeomorphic, mask_of};
use crate::ideals::{
    check_ideal_axioms, enumerate_ideals, enumerate_primes, finitary_of, ideal_space, is_prime, o_set,
    prime_from_ultrafilter, spec_space, ultrafilter_limit_ideal, AxiomOptions, IdealSystem, RIdeal, SSystem,
    SpecPoint,
};
use crate::monoid::{format_set, Element, Monoid, MonoidKind};
use crate::report::{Check, Report};
use crate::sampling::subsets_up_to;

fn conductor(h: &Monoid) -> i64 {
    h.gaps().and_then(|g| g.iter().max().map(|m| m + 1)).unwrap_or(0)
}

fn join<T: AsRef<str>>(items: &[T]) -> String {
    items.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(",")
}

pub(super) fn axioms(h: &Monoid, bound: i64, seed: u64, report: &mut Report) -> Result<Option<String>> {
    let universe = h.window(bound);
    let s: Arc<dyn IdealSystem> = Arc::new(SSystem::new(h));
    let opts = AxiomOptions { seed, ..AxiomOptions::default() };
    let run = check_ideal_axioms(s.as_ref(), &universe, &opts);
    report.push(Check::info(
        "AXIOM",
        "universe",
        format!("{} elements, {} subsets ({})", universe.len(), run.subsets, run.mode),
    ));
    report.extend(run.checks);

    let fin = finitary_of(Arc::clone(&s));
    let small: Vec<Vec<Element>> = subsets_up_to(universe.len(), 3)
        .into_iter()
        .map(|idx| idx.iter().map(|&i| universe[i].clone()).collect())
        .collect();
    let diff = small.iter().find_map(|x| {
        universe
            .iter()
            .find(|g| fin.contains(x, g) != s.contains(x, g))
            .map(|g| format!("X={} g={g}", format_set(x)))
    });
    report.push(Check::from_bool(
        "AXIOM",
        "finitary",
        diff.is_none(),
        format!("X_s equals the union over finite E in X on {} sets", small.len()),
        diff.unwrap_or_default(),
    ));

    // r-ideals generated by small sets are closed and absorb H
    let grp = h.quotient_groupoid();
    let mut bad = None;
    for x in small.iter().filter(|x| x.len() <= 2) {
        let ideal = RIdeal::new(Arc::clone(&s), x.clone());
        let members: Vec<&Element> = universe.iter().filter(|g| ideal.contains(g)).collect();
        let reclosed: Vec<Element> = members.iter().map(|&g| g.clone()).collect();
        let closed = universe.iter().all(|g| s.contains(&reclosed, g) == ideal.contains(g));
        let absorbs = members
            .iter()
            .all(|g| h.generators().iter().all(|t| ideal.contains(&grp.op(g, t).expect("same groupoid"))));
        if !(closed && absorbs && ideal.contains(&h.zero())) {
            bad = Some(format!("X={}", format_set(x)));
            break;
        }
    }
    report.push(Check::from_bool(
        "IDEAL",
        "closure",
        bad.is_none(),
        "every X_s with |X|<=2 contains 0, is closed and absorbs H",
        bad.unwrap_or_default(),
    ));
    Ok(None)
}

/// Prime oracle: s-ideals generated by subsets of the generators, kept when
/// proper and prime on the window, deduplicated by trace.
fn oracle_prime_traces(h: &Monoid, window: &[Element]) -> Result<Option<(usize, Vec<Vec<bool>>)>> {
    let gens: Vec<Element> = match h.kind() {
        MonoidKind::Finite => window
            .iter()
            .filter(|e| !h.quotient_groupoid().is_zero(e) && !h.is_unit(e))
            .cloned()
            .collect(),
        _ => h.generators().to_vec(),
    };
    if gens.len() > 12 {
        return Ok(None);
    }
    let subsets = subsets_up_to(gens.len(), gens.len());
    let mut traces = Vec::new();
    for idx in &subsets {
        let ideal = RIdeal::s_ideal(h, idx.iter().map(|&i| gens[i].clone()).collect());
        if !ideal.is_proper() || is_prime(&ideal, window)?.is_some() {
            continue;
        }
        let t = ideal.trace(window);
        if !traces.contains(&t) {
            traces.push(t);
        }
    }
    Ok(Some((subsets.len(), traces)))
}

fn prime_labels(primes: &[SpecPoint]) -> Vec<String> {
    primes.iter().map(|p| p.label().to_string()).collect()
}

pub(super) fn spec(h: &Monoid, bound: i64, report: &mut Report) -> Result<Option<String>> {
    let primes = enumerate_primes(h, bound)?;
    let window = h.window(bound);
    report.push(Check::info(
        "PRIMES",
        "enumerated",
        format!("{} primes: {}", primes.len(), join(&prime_labels(&primes))),
    ));
    let mut uncertified = None;
    for p in &primes {
        if is_prime(p.ideal(), &window)?.is_some() || !p.ideal().is_proper() {
            uncertified = Some(p.label().to_string());
        }
    }
    report.push(Check::from_bool(
        "PRIMES",
        "certified",
        uncertified.is_none(),
        format!("every listed ideal is proper and prime on the window ({} elements)", window.len()),
        uncertified.unwrap_or_default(),
    ));
    match oracle_prime_traces(h, &window)? {
        Some((candidates, traces)) => {
            let listed: Vec<Vec<bool>> = primes.iter().map(|p| p.ideal().trace(&window)).collect();
            let missing = traces.iter().filter(|t| !listed.contains(t)).count();
            let extra = listed.iter().filter(|t| !traces.contains(t)).count();
            report.push(Check::from_bool(
                "PRIMES",
                "oracle",
                missing == 0 && extra == 0,
                format!("{candidates} generator subsets, {} primes agree", traces.len()),
                format!("{missing} oracle primes missing, {extra} listed primes not found"),
            ));
        }
        None => report.push(Check::info("PRIMES", "oracle", "skipped: more than 12 generators")),
    }

    let space = spec_space(&primes, &window)?;
    let sr = space.spectral_report();
    report.push(Check::from_bool(
        "SPACE",
        "T0",
        sr.t0,
        "specialization order is antisymmetric",
        describe_t0(&space),
    ));
    report.push(Check::from_bool("SPACE", "sober", sr.sober, "every irreducible closed set has one generic point", "not sober"));
    report.push(Check::from_bool("SPACE", "spectral", sr.hochster(), "finite T0 space", "not spectral"));
    report.push(Check::info("SPACE", "poset", hasse_text(&space)));

    let mut wrong = None;
    for at in 0..primes.len() {
        let back = prime_from_ultrafilter(&primes, at, &window)?;
        if back != at {
            wrong = Some(format!("at {} got {}", primes[at].label(), primes[back].label()));
            break;
        }
    }
    report.push(Check::from_bool(
        "ULTRAFILTER",
        "p_U",
        wrong.is_none(),
        format!("{{f : V(f) in U}} is the base prime at all {} principal ultrafilters", primes.len()),
        wrong.unwrap_or_default(),
    ));
    Ok(Some(space.to_dot("spec")))
}

pub(super) fn describe_t0(space: &crate::fintop::FiniteSpace) -> String {
    space
        .t0_violation()
        .map(|(i, j)| format!("{} and {} are topologically indistinguishable", space.labels()[i], space.labels()[j]))
        .unwrap_or_default()
}

pub(super) fn hasse_text(space: &crate::fintop::FiniteSpace) -> String {
    let edges: Vec<String> = space
        .hasse_edges()
        .into_iter()
        .map(|(x, y)| format!("{}->{}", space.labels()[x], space.labels()[y]))
        .collect();
    if edges.is_empty() {
        "no specializations".to_string()
    } else {
        format!("specializations {}", edges.join(" "))
    }
}

/// Window separating the enumerated ideals of a numerical monoid.
fn ideal_window(h: &Monoid, bound: i64) -> Vec<Element> {
    h.window(bound + conductor(h) + 1)
}

fn ideal_label(ideal: &RIdeal, primes: &[SpecPoint], window: &[Element]) -> String {
    let t = ideal.trace(window);
    primes
        .iter()
        .find(|p| p.ideal().trace(window) == t)
        .map(|p| p.label().to_string())
        .unwrap_or_else(|| ideal.label())
}

pub(super) fn ideals(h: &Monoid, bound: i64, report: &mut Report) -> Result<Option<String>> {
    let ideals = enumerate_ideals(h, bound)?;
    let window = ideal_window(h, bound);
    let primes = enumerate_primes(h, bound)?;
    report.push(Check::info(
        "IDEALS",
        "enumerated",
        format!("{} s-ideals with least element <= {bound}, compared on {} elements", ideals.len(), window.len()),
    ));

    let grp = h.quotient_groupoid();
    let bad = ideals.iter().find(|i| {
        let members: Vec<&Element> = window.iter().filter(|g| i.contains(g)).collect();
        !i.contains(&h.zero())
            || !i.generators().iter().all(|g| i.contains(g))
            || !members
                .iter()
                .all(|g| h.generators().iter().all(|t| i.contains(&grp.op(g, t).expect("same groupoid"))))
    });
    report.push(Check::from_bool(
        "IDEALS",
        "closed",
        bad.is_none(),
        "each ideal contains 0 and its generators and absorbs H",
        bad.map(RIdeal::label).unwrap_or_default(),
    ));

    let space = ideal_space(&ideals, &window)?;
    let sr = space.spectral_report();
    report.push(Check::from_bool("SPACE", "T0", sr.t0, "U(x) separates the listed ideals", describe_t0(&space)));
    report.push(Check::from_bool("SPACE", "spectral", sr.hochster(), "finite T0 space", "not spectral"));

    let prime_idx: Vec<usize> = primes
        .iter()
        .filter_map(|p| {
            let t = p.ideal().trace(&window);
            ideals.iter().position(|i| i.trace(&window) == t)
        })
        .collect();
    let restricted = space.subspace(mask_of(prime_idx.iter().copied()));
    let spec = spec_space(&primes, &window)?;
    report.push(Check::from_bool(
        "SPACE",
        "spec-subspace",
        prime_idx.len() == primes.len() && homeomorphic(&restricted, &spec),
        format!("the {} primes carry the Zariski topology as a subspace", primes.len()),
        format!("{} of {} primes found among the ideals, or topologies differ", prime_idx.len(), primes.len()),
    ));

    let mut wrong = None;
    for at in 0..ideals.len() {
        let back = ultrafilter_limit_ideal(&ideals, at, &window)?;
        if back != at {
            wrong = Some(format!("at {} got {}", ideals[at].label(), ideals[back].label()));
            break;
        }
    }
    report.push(Check::from_bool(
        "ULTRAFILTER",
        "I_U",
        wrong.is_none(),
        format!("{{y : U(y) not in U}} is the base ideal at all {} principal ultrafilters", ideals.len()),
        wrong.unwrap_or_default(),
    ));
    report.push(Check::info(
        "SPACE",
        "poset",
        format!("{} specialization edges", space.hasse_edges().len()),
    ));
    let labeled: Vec<String> = ideals.iter().map(|i| ideal_label(i, &primes, &window)).collect();
    let dot_space = crate::fintop::FiniteSpace::new(labeled, space.subbasis().to_vec())?;
    Ok(Some(dot_space.to_dot("ideals")))
}

pub(super) fn pronconst(h: &Monoid, bound: i64, report: &mut Report) -> Result<Option<String>> {
    let ideals = enumerate_ideals(h, bound)?;
    let window = ideal_window(h, bound);
    let primes = enumerate_primes(h, bound)?;
    let ab_bound = 2 * bound.max(1);
    let scalars: Vec<Element> = h
        .window(ab_bound)
        .into_iter()
        .filter(|e| !h.quotient_groupoid().is_zero(e))
        .collect();
    let mut in_some_o = vec![false; ideals.len()];
    for (i, a) in scalars.iter().enumerate() {
        for b in &scalars[i..] {
            for k in o_set(a, b, &ideals) {
                in_some_o[k] = true;
            }
        }
    }
    let prime_window = h.window(ab_bound + conductor(h));
    let mut mismatch = None;
    let mut flagged = Vec::new();
    let mut improper = Vec::new();
    for (k, ideal) in ideals.iter().enumerate() {
        if !ideal.is_proper() {
            improper.push("H".to_string());
            continue;
        }
        let prime = is_prime(ideal, &prime_window)?.is_none();
        if !in_some_o[k] {
            flagged.push(ideal_label(ideal, &primes, &window));
        }
        if prime == in_some_o[k] && mismatch.is_none() {
            mismatch = Some(format!("{} prime={prime} in_O={}", ideal.label(), in_some_o[k]));
        }
    }
    report.push(Check::info(
        "PRONCONST",
        "scope",
        format!(
            "{} s-ideals with least element <= {bound}; a,b in H with a,b <= {ab_bound}; improper {} excluded",
            ideals.len(),
            join(&improper)
        ),
    ));
    report.push(Check::from_bool(
        "PRONCONST",
        "prime-iff-no-O",
        mismatch.is_none(),
        format!("a proper ideal is prime iff it lies in no O_{{a,b}}; flagged {{{}}}", join(&flagged)),
        mismatch.unwrap_or_default(),
    ));
    let primes_match = flagged.len() == primes.len()
        && primes.iter().all(|p| flagged.iter().any(|f| f == p.label()));
    report.push(Check::from_bool(
        "PRONCONST",
        "flagged-are-spec",
        primes_match,
        format!("flagged ideals are the enumerated primes {{{}}}", join(&prime_labels(&primes))),
        format!("flagged {{{}}}", join(&flagged)),
    ));

    let space = ideal_space(&ideals, &window)?;
    report.push(Check::from_bool("SPACE", "T0", space.is_t0(), "U(x) separates the listed ideals", describe_t0(&space)));
    let patch = space.patch_topology()?;
    report.push(Check::from_bool(
        "SPACE",
        "patch-closed",
        patch.is_discrete(),
        "the patch topology is discrete, so the prime set is patch-closed",
        "patch topology is not discrete",
    ));
    let mut wrong = None;
    for at in 0..ideals.len() {
        let back = ultrafilter_limit_ideal(&ideals, at, &window)?;
        if back != at {
            wrong = Some(format!("at {} got {}", ideals[at].label(), ideals[back].label()));
            break;
        }
    }
    report.push(Check::from_bool(
        "ULTRAFILTER",
        "I_U",
        wrong.is_none(),
        format!("identity at all {} principal ultrafilters", ideals.len()),
        wrong.unwrap_or_default(),
    ));
    Ok(None)
}
