//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line reaches stdout; exits nonzero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use monoid_spectra::fintop::{homeomorphic, FiniteSpace};
use monoid_spectra::ideals::{
    check_ideal_axioms, enumerate_ideals, enumerate_primes, ideal_space, o_set, spec_space, ultrafilter_limit_ideal,
    AxiomOptions, RIdeal, SSystem,
};
use monoid_spectra::modsys::{falsify_finitary, FalsifyOutcome, ParamDelta, ParamFamily};
use monoid_spectra::monoid::{Element, Monoid, Overmonoid};
use monoid_spectra::report::{Report, Verdict};
use monoid_spectra::suite::{run_suite, SuiteName, SuiteSpec};
use monoid_spectra::valuation::{
    delta_map, enumerate_overmonoids, image_law, overmonoid_space, preimage_law, pruefer_violation,
    surjectivity_witness, ultrafilter_limit_valuation, zar_carrier, ValuationDescriptor,
};

type Outcome = Result<String, String>;

fn n23() -> Monoid {
    Monoid::numerical(&[2, 3]).unwrap()
}

fn n2() -> Monoid {
    Monoid::affine(2, &[vec![1, 0], vec![0, 1]]).unwrap()
}

fn nxz() -> Monoid {
    Monoid::affine(2, &[vec![1, 0], vec![0, 1], vec![0, -1]]).unwrap()
}

fn run(suite: SuiteName, h: &Monoid, bound: Option<i64>) -> Report {
    let mut spec = SuiteSpec::new(suite, h.clone());
    spec.bound = bound;
    run_suite(&spec).unwrap().report
}

fn verdict(report: &Report, kind: &str, name: &str) -> Option<(Verdict, String)> {
    report
        .checks
        .iter()
        .find(|c| c.kind == kind && c.name == name)
        .map(|c| (c.verdict, c.detail.clone()))
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {:.2?}, limit {limit:?}", t))
}

fn c1_axioms() -> Outcome {
    let start = Instant::now();
    let h = n23();
    let universe = h.window(12);
    ensure(universe.len() == 13, format!("window has {} elements", universe.len()))?;
    let run = check_ideal_axioms(&SSystem::new(&h), &universe, &AxiomOptions::default());
    // subsets of size <= 3 of 13 elements: 1 + 13 + 78 + 286
    let exhaustive = 378;
    ensure(run.mode.starts_with("exhaustive |X|<=3"), format!("mode {}", run.mode))?;
    ensure(run.subsets > exhaustive, "no sampled subsets beyond the exhaustive layer")?;
    for ax in ["Id1", "Id2", "Id3", "Id4"] {
        let c = run.checks.iter().find(|c| c.name == ax).ok_or(format!("{ax} missing"))?;
        ensure(c.verdict == Verdict::Pass, format!("{ax}: {}", c.line()))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "Id1-Id4 on all {exhaustive} subsets of size <=3 of [0,12] with inf, {} subsets in total",
        run.subsets
    ))
}

/// Primality decided from scratch: proper, and `a+b ∈ I` forces `a ∈ I` or `b ∈ I` on the window.
fn oracle_is_prime(i: &RIdeal, window: &[Element]) -> bool {
    let h = i.monoid();
    if i.contains(&h.one()) {
        return false;
    }
    let hs: Vec<&Element> = window.iter().filter(|e| h.contains(e) && !e.is_infinity()).collect();
    hs.iter().all(|a| {
        hs.iter().all(|b| {
            let sum = match (a, b) {
                (Element::Int(x), Element::Int(y)) => Element::Int(x + y),
                (Element::Vector(x), Element::Vector(y)) => Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect()),
                _ => unreachable!(),
            };
            !i.contains(&sum) || i.contains(a) || i.contains(b)
        })
    })
}

/// Prime traces among ideals generated by up to two window elements of `H`.
fn oracle_primes(h: &Monoid, gen_radius: i64, window: &[Element]) -> HashSet<Vec<bool>> {
    let elems: Vec<Element> = h.window(gen_radius).into_iter().filter(|e| !e.is_infinity()).collect();
    let mut sets: Vec<Vec<Element>> = vec![vec![]];
    for (i, a) in elems.iter().enumerate() {
        sets.push(vec![a.clone()]);
        for b in &elems[i + 1..] {
            sets.push(vec![a.clone(), b.clone()]);
        }
    }
    sets.into_iter()
        .map(|g| RIdeal::s_ideal(h, g))
        .filter(|i| oracle_is_prime(i, window))
        .map(|i| i.trace(window))
        .collect()
}

fn c2_spectra() -> Outcome {
    let mut notes = Vec::new();
    for (h, expected) in [(n23(), 2), (n2(), 4)] {
        let start = Instant::now();
        let bound = if expected == 2 { 10 } else { 4 };
        let primes = enumerate_primes(&h, bound).map_err(|e| e.to_string())?;
        ensure(primes.len() == expected, format!("{}: {} primes", h.label(), primes.len()))?;
        let window = h.window(bound);
        let space = spec_space(&primes, &window).map_err(|e| e.to_string())?;
        let edges = space.hasse_edges();
        if expected == 2 {
            ensure(edges == vec![(0, 1)], format!("<2,3> poset edges {edges:?}"))?;
        } else {
            // {inf} below both coordinate primes, both below M
            let mut e = edges.clone();
            e.sort();
            ensure(e == vec![(0, 1), (0, 2), (1, 3), (2, 3)], format!("N^2 poset edges {edges:?}"))?;
        }
        let oracle = oracle_primes(&h, 3, &window);
        let listed: HashSet<Vec<bool>> = primes.iter().map(|p| p.ideal().trace(&window)).collect();
        ensure(oracle == listed, format!("{}: oracle finds {} primes", h.label(), oracle.len()))?;
        within(start, Duration::from_secs(1))?;
        notes.push(format!("{} {} primes", h.label(), expected));
    }
    Ok(format!("{}; chain and diamond; oracle agrees", notes.join(", ")))
}

fn c3_zar() -> Outcome {
    let start = Instant::now();
    let h = n23();
    let zar = zar_carrier(&h, 10).map_err(|e| e.to_string())?;
    ensure(zar.len() == 2, format!("{} members", zar.len()))?;
    let window = h.quotient_groupoid().window(10);
    let nat: Vec<bool> = window.iter().map(|e| e.is_infinity() || e.as_int().unwrap() >= 0).collect();
    let traces: Vec<Vec<bool>> = zar.iter().map(|v| window.iter().map(|e| v.contains(e)).collect()).collect();
    ensure(traces.contains(&vec![true; window.len()]) && traces.contains(&nat), "members are not Z and N")?;
    let space = overmonoid_space(&zar, &window).map_err(|e| e.to_string())?;
    ensure(space.is_t0() && space.spectral_report().hochster(), "space is not T0 and spectral")?;
    for at in 0..zar.len() {
        let back = ultrafilter_limit_valuation(&zar, at, &window).map_err(|e| e.to_string())?;
        ensure(back == at, format!("H_U at {at} gave {back}"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("Zar = {N, Z}; T0 and spectral; H_U is the base point at both ultrafilters".into())
}

fn c4_pruefer() -> Outcome {
    // positive instance
    let h = nxz();
    let primes = enumerate_primes(&h, 4).map_err(|e| e.to_string())?;
    let gw = h.quotient_groupoid().window(4);
    let hw = h.window(4);
    ensure(pruefer_violation(&h, &primes, &gw).map_err(|e| e.to_string())?.is_none(), "NxZ is not s-Pruefer")?;
    let zar = zar_carrier(&h, 3).map_err(|e| e.to_string())?;
    let d = delta_map(&h, &zar, &primes, &hw).map_err(|e| e.to_string())?;
    let mut image = d.clone();
    image.sort();
    ensure(image == (0..primes.len()).collect::<Vec<_>>(), format!("delta {d:?} is not a bijection"))?;
    let zs = overmonoid_space(&zar, &gw).map_err(|e| e.to_string())?;
    let ss = spec_space(&primes, &hw).map_err(|e| e.to_string())?;
    ensure(homeomorphic(&zs, &ss), "Zar and spec are not homeomorphic")?;

    // negative instance
    let h = n2();
    let primes = enumerate_primes(&h, 4).map_err(|e| e.to_string())?;
    let gw = h.quotient_groupoid().window(4);
    let hw = h.window(4);
    ensure(pruefer_violation(&h, &primes, &gw).map_err(|e| e.to_string())?.is_some(), "N^2 reported s-Pruefer")?;
    let zar = zar_carrier(&h, 3).map_err(|e| e.to_string())?;
    let d = delta_map(&h, &zar, &primes, &hw).map_err(|e| e.to_string())?;
    for p in &primes {
        surjectivity_witness(&h, p, &zar, &hw).map_err(|e| e.to_string())?;
    }
    let lex = |t: i8| {
        zar.iter()
            .position(|v| v.descriptor() == Some(&ValuationDescriptor::Planar { w: [1, 1], t }))
            .expect("lex descriptor enumerated")
    };
    let m = primes.len() - 1;
    ensure(d[lex(-1)] == m && d[lex(1)] == m, "the (1,1) lex pair does not map to M")?;
    Ok(format!(
        "NxZ: s-Pruefer, delta bijective, homeomorphic; N^2: not s-Pruefer, surjective on {} primes, {} and {} both map to M",
        primes.len(),
        zar[lex(-1)].label(),
        zar[lex(1)].label()
    ))
}

fn c5_delta_laws() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut tested = Vec::new();
    for (h, bound, zb) in [(n23(), 10, 10), (n2(), 4, 3)] {
        let primes = enumerate_primes(&h, bound).map_err(|e| e.to_string())?;
        let zar = zar_carrier(&h, zb).map_err(|e| e.to_string())?;
        let hw = h.window(bound);
        let gw = h.quotient_groupoid().window(bound);
        let d = delta_map(&h, &zar, &primes, &hw).map_err(|e| e.to_string())?;
        let (n, pre) = preimage_law(&h, &zar, &primes, &d, &hw);
        if let Some(f) = pre {
            failures.push(format!("{} preimage {}", h.label(), f.describe()));
        }
        let (m, img) = image_law(&h, &zar, &primes, &d, &gw, &h.window(2 * bound)).map_err(|e| e.to_string())?;
        if let Some(f) = img {
            failures.push(format!("{} image {}", h.label(), f.describe()));
        }
        tested.push(format!("{} ({n} preimage, {m} image)", h.label()));
    }
    within(start, Duration::from_secs(2))?;
    ensure(
        failures.is_empty(),
        format!(
            "{}; the image law is an equality only for s-Pruefer monoids and neither input is one",
            failures.join("; ")
        ),
    )?;
    Ok(format!("both laws hold on {}", tested.join(", ")))
}

fn c6_pronconst() -> Outcome {
    let start = Instant::now();
    let h = n23();
    let ideals = enumerate_ideals(&h, 10).map_err(|e| e.to_string())?;
    let window = h.window(16);
    let scalars: Vec<Element> = (0..=20).map(Element::Int).filter(|e| h.contains(e)).collect();
    let mut in_o = vec![false; ideals.len()];
    for a in &scalars {
        for b in &scalars {
            for k in o_set(a, b, &ideals) {
                in_o[k] = true;
            }
        }
    }
    let flagged: Vec<usize> = (0..ideals.len())
        .filter(|&k| !in_o[k] && !ideals[k].contains(&h.one()))
        .collect();
    let primes = enumerate_primes(&h, 10).map_err(|e| e.to_string())?;
    let flagged_traces: HashSet<Vec<bool>> = flagged.iter().map(|&k| ideals[k].trace(&window)).collect();
    let prime_traces: HashSet<Vec<bool>> = primes.iter().map(|p| p.ideal().trace(&window)).collect();
    ensure(flagged_traces == prime_traces, format!("flagged {} ideals: {flagged:?}", flagged.len()))?;
    for k in 0..ideals.len() {
        let prime = oracle_is_prime(&ideals[k], &h.window(24));
        ensure(prime == flagged.contains(&k), format!("{} prime={prime}", ideals[k].label()))?;
    }
    for at in 0..ideals.len() {
        let back = ultrafilter_limit_ideal(&ideals, at, &window).map_err(|e| e.to_string())?;
        ensure(back == at, format!("I_U at {at} gave {back}"))?;
    }
    ensure(ideal_space(&ideals, &window).map_err(|e| e.to_string())?.is_t0(), "ideal space is not T0")?;
    let report = run(SuiteName::Pronconst, &h, Some(10));
    ensure(report.passed(), "pronconst suite failed")?;
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "{} ideals; flagged exactly {{inf}}, M among proper ideals; I_U identity; T0",
        ideals.len()
    ))
}

fn c7_main1() -> Outcome {
    let mut notes = Vec::new();
    for h in [n23(), n2()] {
        let report = run(SuiteName::Main1, &h, None);
        for c in &report.checks {
            let core = ["Id1@", "M2@", "Id3@", "M4@"].iter().any(|p| c.name.starts_with(p));
            ensure(!core || c.verdict == Verdict::Pass, format!("{}: {}", h.label(), c.line()))?;
        }
        let (v, detail) = verdict(&report, "COLLAPSE", "Id2-failure").ok_or("Id2 witness line missing")?;
        ensure(v == Verdict::Pass, detail)?;
        let (v, detail) = verdict(&report, "ULTRAFILTER", "r_U").ok_or("r_U line missing")?;
        ensure(v == Verdict::Pass, detail.clone())?;
        let systems = report.checks.iter().filter(|c| c.kind == "AXIOM" && c.name.starts_with("Id1@")).count()
            - report.checks.iter().filter(|c| c.name.starts_with("Id1@r_U")).count();
        ensure(detail.contains(&format!("({} probes)", 200 * systems)), format!("probe count: {detail}"))?;
        notes.push(format!("{}: {systems} systems", h.label()));
    }
    Ok(format!(
        "{}; module axioms pass, ({{1}}_r)_r = G != H, r_U matches on 200 probes per point",
        notes.join(", ")
    ))
}

/// `y ∈ ⟨ℕ², (-1,k)⟩`: some `n ≥ 0` with `y + n(1,-k) ∈ ℕ²`.
fn in_s_k(y: &[i64], k: i64) -> bool {
    let lo = (-y[0]).max(0);
    y[1] >= 0 && lo * k <= y[1]
}

fn c8_main2() -> Outcome {
    let start = Instant::now();
    let report = run(SuiteName::Main2, &n2(), None);
    let (v, detail) = verdict(&report, "MAIN2", "forward").ok_or("forward line missing")?;
    ensure(v == Verdict::Pass && detail.contains("on 100 instances"), detail)?;

    let fam = ParamFamily::from_json(
        r#"{"family":"adjoin-ray","base":"affine:[[1,0],[0,1]]","ray":[-1,1],"scale":"k","monotone":"decreasing"}"#,
    )
    .map_err(|e| e.to_string())?;
    let out = falsify_finitary(&ParamDelta::new(fam), 6, 6).map_err(|e| e.to_string())?;
    let FalsifyOutcome::Witness { xs, a, target, k, .. } = out else {
        return Err(format!("no witness: {}", out.describe()));
    };
    ensure(k == 6 && target == Element::vector(&[0, 0]), "wrong K or target")?;
    let coords: Vec<Vec<i64>> = a.iter().map(|e| e.as_vector().unwrap().to_vec()).collect();
    // target ∈ A + S_j for j = 1..6, i.e. -a ∈ S_j for some a ∈ A
    for j in 1..=6 {
        ensure(
            coords.iter().any(|c| in_s_k(&[-c[0], -c[1]], j)),
            format!("target not in A_r at index {j}"),
        )?;
    }
    // every F drawn from the first K-1 elements misses the target at index K
    let first = &coords[..5];
    for mask in 0u32..1 << 5 {
        let hit = (0..5).filter(|i| mask >> i & 1 == 1).any(|i| in_s_k(&[-first[i][0], -first[i][1]], 6));
        ensure(!hit, format!("F mask {mask:#b} reaches the target at index 6"))?;
    }
    for (i, x) in xs.iter().enumerate() {
        let x = x.as_vector().unwrap();
        ensure(in_s_k(x, i as i64 + 1), format!("x_{} not in S_{}", i + 1, i + 1))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "forward on 100 instances; S_k = <N^2,(-1,k)> K=6 witness A={} verified on 32 subsets",
        monoid_spectra::monoid::format_set(&a)
    ))
}

fn c9_corollaries() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    for h in [n2(), n23()] {
        let report = run(SuiteName::Corollaries, &h, None);
        let finitary: Vec<_> = report.checks.iter().filter(|c| c.kind == "FINITARY").collect();
        ensure(finitary.len() == 2, "expected two finitary lines")?;
        for c in &finitary {
            ensure(c.verdict == Verdict::BoundedPass, c.line())?;
            lines.push(c.name.clone());
        }
        for c in report.checks.iter().filter(|c| c.name.starts_with("declared-idempotent@")) {
            ensure(c.verdict == Verdict::Pass, c.line())?;
        }
        ensure(report.passed(), format!("{} corollaries failed", h.label()))?;
    }
    ensure(lines.iter().any(|l| l == "r_Delta(localizations:4)"), "the four N^2 localizations were not used")?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("BOUNDED-PASS for {}; idempotent on all samples", lines.join(", ")))
}

fn c10_props() -> Outcome {
    let h = n23();
    let r: Vec<Overmonoid> = enumerate_overmonoids(&h).map_err(|e| e.to_string())?;
    ensure(r.len() == 3, format!("R has {} members", r.len()))?;
    let p1 = run(SuiteName::Prop1, &h, None);
    for name in ["injective", "preimage-law", "image-law", "embedding"] {
        let (v, d) = verdict(&p1, "PROP1", name).ok_or(format!("{name} missing"))?;
        ensure(v == Verdict::Pass, format!("{name}: {d}"))?;
    }
    let (_, d) = verdict(&p1, "PROP1", "image-law").unwrap();
    ensure(d.contains("{1,-1,2,-2,3,-3}"), d)?;
    let p2 = run(SuiteName::Prop2, &h, None);
    let (v, d) = verdict(&p2, "PROP2", "meet-witness").ok_or("meet-witness missing")?;
    ensure(v == Verdict::Pass && d.contains("on 50 meets"), d)?;
    Ok("iota injective on 3 overmonoids; laws hold for x in {+-1,+-2,+-3}; 50 meet witnesses recheck".into())
}

fn all_preorders(n: usize) -> Vec<FiniteSpace> {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for bits in 0u64..1 << off.len() {
        let mut rel = vec![vec![false; n]; n];
        for i in 0..n {
            rel[i][i] = true;
        }
        for (k, &(i, j)) in off.iter().enumerate() {
            rel[i][j] = bits >> k & 1 == 1;
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| !rel[i][j] || (0..n).all(|k| !rel[j][k] || rel[i][k])));
        if !transitive {
            continue;
        }
        // minimal open of x: everything x specializes to
        let subbasis: Vec<u64> = (0..n)
            .map(|x| (0..n).filter(|&y| rel[x][y]).fold(0u64, |m, y| m | 1 << y))
            .collect();
        out.push(FiniteSpace::unlabeled(n, subbasis).unwrap());
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Brute force: the least image of the open-set family over all bijections.
fn canonical(space: &FiniteSpace, perms: &[Vec<usize>]) -> Vec<u64> {
    let opens = space.opens().unwrap();
    perms
        .iter()
        .map(|p| {
            let mut v: Vec<u64> = opens
                .iter()
                .map(|&o| (0..space.len()).filter(|&i| o >> i & 1 == 1).fold(0u64, |m, i| m | 1 << p[i]))
                .collect();
            v.sort_unstable();
            v
        })
        .min()
        .unwrap()
}

fn c11_fintop() -> Outcome {
    // only the library calls count against the limit, not the brute-force oracle
    let mut spent = Duration::ZERO;
    let mut spaces = 0;
    let mut pairs = 0;
    let mut t0 = 0;
    for n in 1..=5 {
        let perms = permutations(n);
        let all = all_preorders(n);
        let canon: Vec<Vec<u64>> = all.iter().map(|s| canonical(s, &perms)).collect();
        let mut classes: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        for (i, c) in canon.iter().enumerate() {
            classes.entry(c.clone()).or_insert(i);
        }
        for (i, s) in all.iter().enumerate() {
            // against one representative per class, so every class pair is covered
            for (c, &rep) in &classes {
                pairs += 1;
                let brute = &canon[i] == c;
                let t = Instant::now();
                let fast = homeomorphic(s, &all[rep]);
                spent += t.elapsed();
                ensure(fast == brute, format!("n={n}: space {i} vs representative {rep}"))?;
            }
            if s.is_t0() {
                t0 += 1;
                let t = Instant::now();
                let patch = s.patch_topology().map_err(|e| e.to_string())?;
                let ok = patch.is_discrete() && patch.is_hausdorff() && patch.is_quasi_compact(patch.full());
                spent += t.elapsed();
                ensure(ok, format!("n={n}: patch topology of space {i}"))?;
            }
        }
        spaces += all.len();
    }
    ensure(spent < Duration::from_secs(10), format!("library calls took {spent:.2?}, limit 10s"))?;
    Ok(format!("{spaces} topologies on <=5 points, {pairs} homeomorphism queries, {t0} T0 patch topologies in {spent:.2?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1 s-system axioms on <2,3>", c1_axioms),
        ("2 prime spectra of <2,3> and N^2", c2_spectra),
        ("3 Zar(Z|<2,3>)", c3_zar),
        ("4 domination map on NxZ and N^2", c4_pruefer),
        ("5 delta preimage and image laws", c5_delta_laws),
        ("6 primes are proconstructible in the ideal space", c6_pronconst),
        ("7 module system carrier constructions", c7_main1),
        ("8 finite witnesses and the non-finitary ray family", c8_main2),
        ("9 r_Delta over localizations and Zar carriers", c9_corollaries),
        ("10 iota embedding and meet witnesses", c10_props),
        ("11 finite topology cross-validation", c11_fintop),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
