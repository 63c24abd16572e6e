use super::{full_mask, points_of, FiniteSpace};
use crate::error::{Error, Result};

/// The ultrafilter `{Y : x ∈ Y}` on a finite set. Every ultrafilter on a
/// finite set has this form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrincipalUltrafilter {
    point: usize,
    size: usize,
}

impl PrincipalUltrafilter {
    pub fn new(point: usize, size: usize) -> Result<Self> {
        if point >= size || size > 64 {
            return Err(Error::Precondition(format!(
                "point {point} is not in a carrier of {size} points"
            )));
        }
        Ok(PrincipalUltrafilter { point, size })
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn contains(&self, set: u64) -> bool {
        set >> self.point & 1 == 1
    }
}

/// Outcome of the exhaustive filter/ultrafilter law check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltrafilterLaws {
    pub pairs_checked: u64,
    /// First `(Y, Z)` violating a law, with the law's name.
    pub violation: Option<(&'static str, u64, u64)>,
}

/// Checks the filter axioms, the union dichotomy (`Y ∪ Z ∈ 𝒰` forces `Y` or
/// `Z` into `𝒰`) and the complement dichotomy over all pairs of subsets.
pub fn check_ultrafilter_laws(u: &PrincipalUltrafilter) -> Result<UltrafilterLaws> {
    if u.size > 10 {
        return Err(Error::CarrierTooLarge {
            size: u.size,
            limit: 10,
        });
    }
    let full = full_mask(u.size);
    let mut pairs = 0u64;
    if !u.contains(full) {
        return Ok(UltrafilterLaws {
            pairs_checked: 0,
            violation: Some(("whole set", full, full)),
        });
    }
    if u.contains(0) {
        return Ok(UltrafilterLaws {
            pairs_checked: 0,
            violation: Some(("empty set", 0, 0)),
        });
    }
    for y in 0..=full {
        if u.contains(y) == u.contains(full & !y) {
            return Ok(UltrafilterLaws {
                pairs_checked: pairs,
                violation: Some(("complement dichotomy", y, full & !y)),
            });
        }
        for z in 0..=full {
            pairs += 1;
            let (iy, iz) = (u.contains(y), u.contains(z));
            let law = if iy && iz && !u.contains(y & z) {
                Some("intersection")
            } else if iy && y & !z == 0 && !iz {
                Some("upward closure")
            } else if u.contains(y | z) && !iy && !iz {
                Some("union dichotomy")
            } else {
                None
            };
            if let Some(name) = law {
                return Ok(UltrafilterLaws {
                    pairs_checked: pairs,
                    violation: Some((name, y, z)),
                });
            }
        }
    }
    Ok(UltrafilterLaws {
        pairs_checked: pairs,
        violation: None,
    })
}

/// `Y_𝒮(𝒰) = {z : ∀S ∈ 𝒮, S ∩ Y ∈ 𝒰 ⟺ z ∈ S}` with `𝒮` the space's subbasis.
pub fn ultrafilter_limit_set(
    space: &FiniteSpace,
    y: u64,
    u: &PrincipalUltrafilter,
) -> Result<u64> {
    if u.size != space.len() {
        return Err(Error::Precondition(
            "ultrafilter and space have different carriers".to_string(),
        ));
    }
    if !u.contains(y) {
        return Err(Error::Precondition(format!(
            "the complement of Y lies in the ultrafilter at {}",
            space.labels()[u.point]
        )));
    }
    Ok(points_of(space.full())
        .filter(|&z| {
            space
                .subbasis()
                .iter()
                .all(|&s| u.contains(s & y) == (s >> z & 1 == 1))
        })
        .fold(0, |m, z| m | 1 << z))
}
