use crate::error::Result;
use crate::fintop::full_mask;
use crate::ideals::{enumerate_primes, spec_space};
use crate::monoid::{Monoid, MonoidKind, Overmonoid};
use crate::report::{Check, Report};
use crate::valuation::{
    containing, delta_dot, delta_map, describe_members, image_law, is_valuation, overmonoid_space, preimage_law,
    pruefer_violation, surjectivity_witness, ultrafilter_limit_valuation, valuation_witness, zar_carrier,
    ValuationDescriptor,
};

use super::ideal_suites::{describe_t0, hasse_text};
use super::{overmonoid_carrier, zar_bound};

/// Window radius on which `B(x)` separates planar valuations with weights up
/// to the Zar bound; neighbouring slopes need elements of about twice that norm.
fn separating_radius(h: &Monoid, bound: i64) -> i64 {
    match h.kind() {
        MonoidKind::Affine => bound.max(2 * zar_bound(h, bound)),
        _ => bound,
    }
}

fn labels(carrier: &[Overmonoid]) -> String {
    carrier.iter().map(Overmonoid::label).collect::<Vec<_>>().join(",")
}

pub(super) fn zar(h: &Monoid, bound: i64, report: &mut Report) -> Result<Option<String>> {
    let zb = zar_bound(h, bound);
    let zar = zar_carrier(h, zb)?;
    let gw = h.quotient_groupoid().window(separating_radius(h, bound));
    report.push(Check::info(
        "ZAR",
        "enumerated",
        format!("{} valuation monoids: {}", zar.len(), labels(&zar)),
    ));
    if h.kind() == MonoidKind::Affine {
        report.push(Check::info(
            "ZAR",
            "scope",
            format!("weights with sup norm <= {zb}; irrational directions are not enumerated"),
        ));
    }

    let not_val = zar.iter().find_map(|v| valuation_witness(v, &gw).map(|x| format!("{} misses {x} and its inverse", v.label())));
    report.push(Check::from_bool(
        "ZAR",
        "valuation",
        not_val.is_none(),
        format!("x or x^-1 lies in each member for all {} window elements", gw.len()),
        not_val.unwrap_or_default(),
    ));
    let missing = zar
        .iter()
        .find_map(|v| h.generators().iter().find(|g| !v.contains(g)).map(|g| format!("{} misses {g}", v.label())));
    report.push(Check::from_bool(
        "ZAR",
        "contains-H",
        missing.is_none(),
        "every member contains the generators of H",
        missing.unwrap_or_default(),
    ));

    // oracle: valuation monoids among independently listed overmonoids
    let listed = overmonoid_carrier(h, bound)?;
    let vals: Vec<&Overmonoid> = listed.iter().filter(|s| is_valuation(s, &gw)).collect();
    let unmatched: Vec<&str> = vals
        .iter()
        .filter(|s| !zar.iter().any(|v| v.agrees_on(s, &gw)))
        .map(|s| s.label())
        .collect();
    let exact = h.kind() != MonoidKind::Affine;
    let oracle_ok = unmatched.is_empty() && (!exact || vals.len() == zar.len());
    report.push(Check::from_bool(
        "ZAR",
        "oracle",
        oracle_ok,
        format!(
            "{} valuation monoids among {} listed overmonoids, all in Zar{}",
            vals.len(),
            listed.len(),
            if exact { " and no others" } else { "" }
        ),
        format!("unmatched {{{}}}, {} vs {}", unmatched.join(","), vals.len(), zar.len()),
    ));

    let space = overmonoid_space(&zar, &gw)?;
    let sr = space.spectral_report();
    report.push(Check::from_bool("SPACE", "T0", sr.t0, "B(x) separates the members", describe_t0(&space)));
    report.push(Check::from_bool("SPACE", "spectral", sr.hochster(), "finite T0 space", "not spectral"));

    let grp = h.quotient_groupoid();
    let full = full_mask(zar.len());
    let complement = gw.iter().filter(|x| !grp.is_zero(x)).find(|x| {
        let inv = grp.inverse(x).expect("nonzero");
        containing(&zar, x) | containing(&zar, &inv) != full
    });
    report.push(Check::from_bool(
        "SPACE",
        "complement",
        complement.is_none(),
        "Zar minus B(x) lies in B(x^-1) for every nonzero window element",
        complement
            .map(|x| format!("x={x} outside: {}", describe_members(&zar, full & !containing(&zar, x))))
            .unwrap_or_default(),
    ));

    let mut wrong = None;
    for at in 0..zar.len() {
        let back = ultrafilter_limit_valuation(&zar, at, &gw)?;
        if back != at {
            wrong = Some(format!("at {} got {}", zar[at].label(), zar[back].label()));
            break;
        }
    }
    report.push(Check::from_bool(
        "ULTRAFILTER",
        "H_U",
        wrong.is_none(),
        format!("{{x : B(x) in U}} is the base point at all {} principal ultrafilters", zar.len()),
        wrong.unwrap_or_default(),
    ));
    report.push(Check::info("SPACE", "poset", hasse_text(&space)));
    Ok(Some(space.to_dot("zar")))
}

/// A pair of distinct members with the same image, preferring the two
/// lexicographic refinements of one weight.
fn collision(zar: &[Overmonoid], d: &[usize]) -> Option<(usize, usize)> {
    let pairs = || (0..zar.len()).flat_map(|i| (i + 1..zar.len()).map(move |j| (i, j))).filter(|&(i, j)| d[i] == d[j]);
    let lex = pairs().find(|&(i, j)| {
        matches!(
            (zar[i].descriptor(), zar[j].descriptor()),
            (Some(ValuationDescriptor::Planar { w: a, t: s }), Some(ValuationDescriptor::Planar { w: b, t: u }))
                if a == b && *s != 0 && *u != 0
        )
    });
    lex.or_else(|| pairs().next())
}

pub(super) fn pruefer(h: &Monoid, bound: i64, report: &mut Report) -> Result<Option<String>> {
    let primes = enumerate_primes(h, bound)?;
    let zb = zar_bound(h, bound);
    let zar = zar_carrier(h, zb)?;
    let hw = h.window(bound);
    let gw = h.quotient_groupoid().window(bound);
    let sep = h.quotient_groupoid().window(separating_radius(h, bound));
    let eval = h.window(2 * bound.max(1));
    let weights = if h.kind() == MonoidKind::Affine { format!(" (weights <= {zb})") } else { String::new() };
    report.push(Check::info(
        "DELTA",
        "carriers",
        format!("Zar: {} members{weights}, s-spec: {} primes; codomain is s-spec(H)", zar.len(), primes.len()),
    ));

    let violation = pruefer_violation(h, &primes, &gw)?;
    let is_pruefer = violation.is_none();
    report.push(match &violation {
        None => Check::pass("PRUEFER", "s-Pruefer", "every localization at a prime is a valuation monoid"),
        Some((p, x)) => Check::info(
            "PRUEFER",
            "s-Pruefer",
            format!("fails: H_{p} contains neither {x} nor its inverse"),
        ),
    });

    let d = delta_map(h, &zar, &primes, &hw)?;
    report.push(Check::pass("DELTA", "well-defined", "m_V meet H is a listed prime for every V"));

    let mut witnesses = Vec::new();
    let mut missing = None;
    for p in &primes {
        match surjectivity_witness(h, p, &zar, &hw) {
            Ok(i) => witnesses.push(format!("{}<-{}", p.label(), zar[i].label())),
            Err(e) => {
                missing = Some(e.to_string());
                break;
            }
        }
    }
    report.push(Check::from_bool(
        "DELTA",
        "surjective",
        missing.is_none(),
        format!("witnesses {}", witnesses.join(" ")),
        missing.unwrap_or_default(),
    ));

    let clash = collision(&zar, &d);
    let injective = clash.is_none();
    let clash_text = clash
        .map(|(i, j)| format!("{} and {} both map to {}", zar[i].label(), zar[j].label(), primes[d[i]].label()))
        .unwrap_or_default();
    report.push(if is_pruefer {
        Check::from_bool("DELTA", "injective", injective, "distinct valuations have distinct centers", clash_text)
    } else if injective {
        Check::info("DELTA", "injective", "holds on the enumerated carrier")
    } else {
        Check::info("DELTA", "injective", format!("fails: {clash_text}"))
    });

    let zs = overmonoid_space(&zar, &sep)?;
    let ss = spec_space(&primes, &hw)?;
    let order_preserved = (0..zar.len())
        .all(|i| (0..zar.len()).all(|j| zs.specializes(i, j) == ss.specializes(d[i], d[j])));
    let homeo = injective && missing_none(&primes, &d) && order_preserved;
    report.push(if is_pruefer {
        Check::from_bool(
            "DELTA",
            "homeomorphism",
            homeo,
            "delta is a bijection matching the specialization orders",
            "delta is not an order isomorphism",
        )
    } else {
        Check::info(
            "DELTA",
            "homeomorphism",
            format!("not claimed without s-Pruefer; {}", if homeo { "holds" } else { "fails" }),
        )
    });

    let (n, fail) = preimage_law(h, &zar, &primes, &d, &hw);
    report.push(Check::from_bool(
        "DELTA",
        "preimage-law",
        fail.is_none(),
        format!("delta^-1(D(x)) = B(x^-1) for {n} nonzero x in H"),
        fail.map(|f| f.describe()).unwrap_or_default(),
    ));
    let (n, fail) = image_law(h, &zar, &primes, &d, &gw, &eval)?;
    report.push(match fail {
        None => Check::pass("DELTA", "image-law", format!("delta(B(x)) = spec minus V((H:x)) for {n} nonzero x in G")),
        Some(f) if is_pruefer => Check::fail("DELTA", "image-law", f.describe()),
        Some(f) => Check::info("DELTA", "image-law", format!("fails without s-Pruefer: {}", f.describe())),
    });
    Ok(Some(delta_dot(&zs, &ss, &d)))
}

fn missing_none(primes: &[crate::ideals::SpecPoint], d: &[usize]) -> bool {
    (0..primes.len()).all(|p| d.contains(&p))
}
