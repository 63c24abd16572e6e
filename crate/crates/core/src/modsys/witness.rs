use std::sync::Arc;

use super::{in_translate, DeltaSystem, Meet, ModuleSystem};
use crate::error::{Error, Result};
use crate::monoid::{format_set, Element};
use crate::sampling::subsets_up_to;

fn push_unique(out: &mut Vec<Element>, e: &Element) {
    if !out.contains(e) {
        out.push(e.clone());
    }
}

/// For `x ∈ A_{r_Δ}`, picks one `a ∈ A` with `x ∈ aS` for every `S ∈ Δ` and
/// returns the picked elements, rechecked to satisfy `x ∈ F_{r_Δ}`.
pub fn extract_finite_witness(r: &DeltaSystem, a: &[Element], x: &Element) -> Result<Vec<Element>> {
    if !r.contains(a, x) {
        return Err(Error::Precondition(format!(
            "{x} is not in the closure of {}",
            format_set(a)
        )));
    }
    let mut f = Vec::new();
    if !r.monoid().quotient_groupoid().is_zero(x) {
        for s in r.members() {
            let pick = a
                .iter()
                .find(|e| in_translate(s, std::slice::from_ref(e), x))
                .expect("membership gives a witness for every member");
            push_unique(&mut f, pick);
        }
    }
    if !r.contains(&f, x) {
        return Err(Error::LawViolated(format!(
            "{x} is not in the closure of the extracted set {}",
            format_set(&f)
        )));
    }
    Ok(f)
}

/// Smallest subset `E ⊆ A` (by size, then index order) with `x ∈ E_r`.
fn smallest_witness(r: &dyn ModuleSystem, a: &[Element], x: &Element) -> Option<Vec<Element>> {
    subsets_up_to(a.len(), a.len())
        .into_iter()
        .map(|idx| idx.iter().map(|&i| a[i].clone()).collect::<Vec<_>>())
        .find(|e| r.contains(e, x))
}

/// For finitary systems `τ` and `x ∈ A_{∧τ}`: the union of per-system finite
/// witnesses, rechecked to satisfy `x ∈ E_{∧τ}`.
pub fn meet_finite_witness(tau: &[Arc<dyn ModuleSystem>], a: &[Element], x: &Element) -> Result<Vec<Element>> {
    let meet = Meet::new(tau.to_vec())?;
    if let Some(r) = tau.iter().find(|r| r.finitary_width().is_none()) {
        return Err(Error::Precondition(format!("{} is not known to be finitary", r.name())));
    }
    if !meet.contains(a, x) {
        return Err(Error::Precondition(format!(
            "{x} is not in the closure of {}",
            format_set(a)
        )));
    }
    let mut e = Vec::new();
    for r in tau {
        let part = smallest_witness(r.as_ref(), a, x).expect("A itself is a witness");
        for y in &part {
            push_unique(&mut e, y);
        }
    }
    if !meet.contains(&e, x) {
        return Err(Error::LawViolated(format!(
            "{x} is not in the meet closure of the extracted set {}",
            format_set(&e)
        )));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::{enumerate_primes, localize};
    use crate::modsys::{iota, ZeroCollapse, FnModuleSystem};
    use crate::monoid::{Monoid, Overmonoid};

    #[test]
    fn naturals_and_integers() {
        let h = Monoid::numerical(&[1]).unwrap();
        let r = DeltaSystem::new(&h, vec![h.as_overmonoid(), Overmonoid::whole(&h)]).unwrap();
        let a = [Element::Int(5), Element::Int(7)];
        assert_eq!(extract_finite_witness(&r, &a, &Element::Int(12)).unwrap(), vec![Element::Int(5)]);
        assert!(extract_finite_witness(&r, &a, &Element::Int(4)).is_err());
    }

    #[test]
    fn singleton_family_gives_singleton() {
        let h = Monoid::numerical(&[2, 3]).unwrap();
        let r = iota(&h, &h.as_overmonoid());
        let a = [Element::Int(2), Element::Int(3)];
        for x in [4, 5, 7, 9] {
            assert_eq!(extract_finite_witness(&r, &a, &Element::Int(x)).unwrap().len(), 1);
        }
    }

    #[test]
    fn quadrant_localizations() {
        let h = Monoid::affine(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let locs: Vec<Overmonoid> = enumerate_primes(&h, 4)
            .unwrap()
            .iter()
            .map(|p| localize(&h, p).unwrap())
            .collect();
        let r = DeltaSystem::new(&h, locs).unwrap();
        let a = [Element::vector(&[2, 0]), Element::vector(&[0, 2])];
        let x = Element::vector(&[2, 2]);
        let f = extract_finite_witness(&r, &a, &x).unwrap();
        assert!(f.len() <= 2 && r.contains(&f, &x));
    }

    #[test]
    fn meet_of_two_s_type_systems() {
        let h = Monoid::numerical(&[2, 3]).unwrap();
        let tau: Vec<Arc<dyn ModuleSystem>> = vec![
            Arc::new(iota(&h, &h.as_overmonoid())),
            Arc::new(iota(&h, &Overmonoid::generated(&h, &[Element::Int(1)]).unwrap())),
        ];
        let a = [Element::Int(2), Element::Int(3)];
        let e = meet_finite_witness(&tau, &a, &Element::Int(7)).unwrap();
        assert!(e.iter().all(|y| a.contains(y)));
        assert_eq!(e, vec![Element::Int(2)]);
        // x ∈ A directly
        assert_eq!(meet_finite_witness(&tau[..1], &a, &Element::Int(3)).unwrap(), vec![Element::Int(3)]);
        assert_eq!(
            meet_finite_witness(&[Arc::new(ZeroCollapse::new(&h)) as Arc<dyn ModuleSystem>], &a, &Element::Int(6))
                .unwrap(),
            vec![Element::Int(2)]
        );
    }

    #[test]
    fn meet_needs_finitary_flags() {
        let h = Monoid::numerical(&[2, 3]).unwrap();
        let f: Arc<dyn ModuleSystem> = Arc::new(FnModuleSystem::new("all", &h, |_, _, _| true));
        assert!(matches!(
            meet_finite_witness(&[f], &[Element::Int(2)], &Element::Int(2)),
            Err(Error::Precondition(_))
        ));
    }
}
