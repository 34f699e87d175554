//! End-to-end analysis of one (m, p) pair: orbit decomposition, Hodge
//! numbers, Newton polygon, supersingularity verdict, sigma_0 and the
//! Neron-Severi discriminant, plus the same analysis restricted to the
//! characters invariant under a subgroup of the diagonal group.

use num_bigint::BigInt;
use serde::Serialize;

use crate::characters::{
    b2, check_cap, hodge_numbers, invariant_characters, FermatCharacter, HodgeNumbers,
    DEFAULT_MAX_M,
};
use crate::error::{Error, Result};
use crate::newton::{NewtonPolygon, Slope};
use crate::orbits::{orbit_stream_capped, orbits_in_subset, FrobeniusOrbit};
use crate::residue::{contains_minus_one, Modulus};
use crate::sigma0::sigma0_trace;

/// How a supersingularity verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupersingularReason {
    /// -1 lies in the subgroup generated by p mod m; every orbit is
    /// conjugation-stable, forcing slope 1 without looking at orbits.
    MinusOneShortcut,
    /// All Newton slopes were computed and equal 1.
    SlopesAllOne,
    /// A slope different from 1 was found.
    SlopeObstruction {
        base: FermatCharacter,
        slope: Slope,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupersingularVerdict {
    pub supersingular: bool,
    pub reason: SupersingularReason,
}

/// Is every Newton slope of H^2 equal to 1? Tries the -1 in <p> shortcut
/// first, then falls back to scanning orbits with early exit.
pub fn is_supersingular(m: Modulus, p: u64) -> Result<SupersingularVerdict> {
    is_supersingular_capped(m, p, DEFAULT_MAX_M)
}

pub fn is_supersingular_capped(m: Modulus, p: u64, cap: u64) -> Result<SupersingularVerdict> {
    if contains_minus_one(p, m)? {
        return Ok(SupersingularVerdict {
            supersingular: true,
            reason: SupersingularReason::MinusOneShortcut,
        });
    }
    for orbit in orbit_stream_capped(m, p, cap)? {
        if !orbit.is_supersingular() {
            return Ok(SupersingularVerdict {
                supersingular: false,
                reason: SupersingularReason::SlopeObstruction {
                    base: *orbit.base().expect("streamed orbits carry a base"),
                    slope: orbit.slope(),
                },
            });
        }
    }
    Ok(SupersingularVerdict {
        supersingular: true,
        reason: SupersingularReason::SlopesAllOne,
    })
}

/// disc(NS) = sign * p^exponent with sign = (-1)^(b2 - 1) and
/// exponent = 2 * sigma_0, valid for supersingular surfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeronSeveriDisc {
    pub sign: i8,
    pub p: u64,
    pub exponent: u64,
}

impl NeronSeveriDisc {
    /// The discriminant as a full integer; opt-in because the exponent
    /// can run into the thousands.
    pub fn expanded(&self) -> BigInt {
        let mag = BigInt::from(self.p).pow(self.exponent as u32);
        if self.sign < 0 {
            -mag
        } else {
            mag
        }
    }
}

impl std::fmt::Display for NeronSeveriDisc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{sign}p^{}", self.exponent)
    }
}

/// Sum of sigma_0 contributions over a slice of supersingular orbits.
fn sigma0_sum(orbits: &[FrobeniusOrbit]) -> u64 {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        orbits
            .par_iter()
            .map(|o| {
                sigma0_trace(o.degrees(), o.multiplicity())
                    .expect("supersingular orbit")
                    .contribution
            })
            .sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        orbits
            .iter()
            .map(|o| {
                sigma0_trace(o.degrees(), o.multiplicity())
                    .expect("supersingular orbit")
                    .contribution
            })
            .sum()
    }
}

/// Everything the analysis pipeline knows about one (m, p) pair.
/// sigma_0 and the disc fields are present exactly when the surface is
/// supersingular; for ordinary surfaces rank NS < b_2 and the
/// discriminant formula does not apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrystalSummary {
    pub m: u64,
    pub p: u64,
    pub b2: u64,
    pub hodge: HodgeNumbers,
    pub orbits: Vec<FrobeniusOrbit>,
    pub newton: NewtonPolygon,
    pub supersingular: bool,
    pub reason: SupersingularReason,
    pub sigma0: Option<u64>,
    pub disc_sign: Option<i8>,
    pub disc_p_exponent: Option<u64>,
}

impl CrystalSummary {
    pub fn disc(&self) -> Option<NeronSeveriDisc> {
        Some(NeronSeveriDisc {
            sign: self.disc_sign?,
            p: self.p,
            exponent: self.disc_p_exponent?,
        })
    }
}

pub fn analyze(m: Modulus, p: u64) -> Result<CrystalSummary> {
    analyze_capped(m, p, DEFAULT_MAX_M)
}

pub fn analyze_capped(m: Modulus, p: u64, cap: u64) -> Result<CrystalSummary> {
    let shortcut = contains_minus_one(p, m)?;
    let mut orbits = Vec::new();
    for orbit in orbit_stream_capped(m, p, cap)? {
        orbits.push(orbit);
    }
    orbits.sort_by(|a, b| a.base().cmp(&b.base()));
    let summary = summarize(m.get(), p, orbits, shortcut);
    debug_assert_eq!(summary.b2, b2(m));
    Ok(summary)
}

fn summarize(m: u64, p: u64, orbits: Vec<FrobeniusOrbit>, shortcut: bool) -> CrystalSummary {
    let mut degree_counts = [0u64; 3];
    let mut total = 0u64;
    let mut obstruction: Option<(FermatCharacter, Slope)> = None;
    for orbit in &orbits {
        for &d in orbit.degrees() {
            degree_counts[d as usize] += orbit.multiplicity();
        }
        total += orbit.newton_multiplicity();
        if obstruction.is_none() && !orbit.is_supersingular() {
            obstruction = Some((
                *orbit.base().expect("streamed orbits carry a base"),
                orbit.slope(),
            ));
        }
    }
    let hodge = HodgeNumbers::from_degree_counts(degree_counts);
    let newton =
        NewtonPolygon::from_slopes(orbits.iter().map(|o| (o.slope(), o.newton_multiplicity())));
    let supersingular = obstruction.is_none();
    debug_assert!(!shortcut || supersingular);
    let reason = if shortcut {
        SupersingularReason::MinusOneShortcut
    } else if let Some((base, slope)) = obstruction {
        SupersingularReason::SlopeObstruction { base, slope }
    } else {
        SupersingularReason::SlopesAllOne
    };
    let sigma0 = supersingular.then(|| sigma0_sum(&orbits));
    let disc_sign = supersingular.then(|| if (total - 1) % 2 == 0 { 1i8 } else { -1 });
    CrystalSummary {
        m,
        p,
        b2: total,
        hodge,
        orbits,
        newton,
        supersingular,
        reason,
        sigma0,
        disc_sign,
        disc_p_exponent: sigma0.map(|s| 2 * s),
    }
}

/// The Neron-Severi discriminant of a supersingular Fermat surface:
/// sign (-1)^(b2-1), exponent 2 * sigma_0. Errors with NotSupersingular
/// when some Newton slope differs from 1.
pub fn disc_neron_severi(m: Modulus, p: u64) -> Result<NeronSeveriDisc> {
    disc_neron_severi_capped(m, p, DEFAULT_MAX_M)
}

pub fn disc_neron_severi_capped(m: Modulus, p: u64, cap: u64) -> Result<NeronSeveriDisc> {
    check_cap(m, cap)?;
    let mut sigma0 = 0u64;
    let mut total = 0u64;
    for orbit in orbit_stream_capped(m, p, cap)? {
        if !orbit.is_supersingular() {
            return Err(Error::NotSupersingular { m: m.get(), p });
        }
        sigma0 += sigma0_trace(orbit.degrees(), orbit.multiplicity())
            .expect("supersingular orbit")
            .contribution;
        total += orbit.newton_multiplicity();
    }
    Ok(NeronSeveriDisc {
        sign: if (total - 1) % 2 == 0 { 1 } else { -1 },
        p,
        exponent: 2 * sigma0,
    })
}

/// Analysis restricted to the characters invariant under a subgroup of
/// the diagonal group: the invariant part of H^2 of the quotient surface.
/// The exceptional lattice of the resolved quotient is out of scope and
/// explicitly reported as not computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientSummary {
    pub m: u64,
    pub p: u64,
    pub subgroup: Vec<[u64; 4]>,
    pub invariant_count: u64,
    pub hodge: HodgeNumbers,
    pub orbits: Vec<FrobeniusOrbit>,
    pub newton: NewtonPolygon,
    pub all_slopes_one: bool,
    pub sigma0_invariant_part: Option<u64>,
    pub exceptional_lattice: &'static str,
}

pub const EXCEPTIONAL_LATTICE_NOTE: &str = "not computed";

pub fn analyze_quotient(
    m: Modulus,
    p: u64,
    subgroup: &[[u64; 4]],
    cap: u64,
) -> Result<QuotientSummary> {
    check_cap(m, cap)?;
    let set = crate::characters::enumerate_characters_capped(m, cap)?;
    let invariant = invariant_characters(&set, subgroup);
    let orbits = orbits_in_subset(&invariant, p)?;
    let hodge = hodge_numbers(&invariant);
    let newton =
        NewtonPolygon::from_slopes(orbits.iter().map(|o| (o.slope(), o.newton_multiplicity())));
    let all_slopes_one = orbits.iter().all(|o| o.is_supersingular());
    let sigma0_invariant_part = all_slopes_one.then(|| sigma0_sum(&orbits));
    Ok(QuotientSummary {
        m: m.get(),
        p,
        subgroup: subgroup.to_vec(),
        invariant_count: invariant.len() as u64,
        hodge,
        orbits,
        newton,
        all_slopes_one,
        sigma0_invariant_part,
        exceptional_lattice: EXCEPTIONAL_LATTICE_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn degree_five_split_primes() {
        for p in [2, 3, 7, 13] {
            let s = analyze(m(5), p).unwrap();
            assert_eq!(s.b2, 53);
            assert_eq!((s.hodge.h20, s.hodge.h11, s.hodge.h02), (4, 45, 4));
            assert!(s.supersingular);
            assert_eq!(s.reason, SupersingularReason::MinusOneShortcut);
            assert_eq!(s.sigma0, Some(8));
            assert_eq!(s.disc_sign, Some(1));
            assert_eq!(s.disc_p_exponent, Some(16));
        }
    }

    #[test]
    fn degree_five_inert_minus_one_primes() {
        for p in [19, 29] {
            let s = analyze(m(5), p).unwrap();
            assert!(s.supersingular);
            // sigma_0 = p_g: one (0,2)-orbit per conjugate pair of
            // degree-0 characters, each contributing 1
            assert_eq!(s.sigma0, Some(4));
            assert_eq!(s.disc_p_exponent, Some(8));
        }
    }

    #[test]
    fn degree_five_ordinary_prime() {
        let s = analyze(m(5), 11).unwrap();
        assert!(!s.supersingular);
        assert!(matches!(
            s.reason,
            SupersingularReason::SlopeObstruction { .. }
        ));
        assert_eq!(s.sigma0, None);
        assert_eq!(s.disc_sign, None);
        assert_eq!(s.disc_p_exponent, None);
        assert_eq!(
            disc_neron_severi(m(5), 11),
            Err(Error::NotSupersingular { m: 5, p: 11 })
        );
    }

    #[test]
    fn trivial_surface() {
        let s = analyze(m(1), 2).unwrap();
        assert_eq!(s.b2, 1);
        assert_eq!((s.hodge.h20, s.hodge.h11, s.hodge.h02), (0, 1, 0));
        assert!(s.supersingular);
        assert_eq!(s.sigma0, Some(0));
        assert_eq!(s.disc_p_exponent, Some(0));
        assert_eq!(s.disc_sign, Some(1));
    }

    #[test]
    fn all_tau_one_surface_has_zero_exponent() {
        // m = 3: every nonzero character has degree 1
        let s = analyze(m(3), 2).unwrap();
        assert!(s.supersingular);
        assert_eq!(s.sigma0, Some(0));
        assert_eq!(s.disc_p_exponent, Some(0));
        // b2 = 7, so sign = (-1)^6 = +1
        assert_eq!(s.disc_sign, Some(1));
    }

    #[test]
    fn disc_display_and_expansion() {
        let d = disc_neron_severi(m(5), 2).unwrap();
        assert_eq!(d.to_string(), "+p^16");
        assert_eq!(d.expanded(), BigInt::from(2u64).pow(16));
    }

    #[test]
    fn verdict_reasons() {
        let v = is_supersingular(m(5), 2).unwrap();
        assert!(v.supersingular);
        assert_eq!(v.reason, SupersingularReason::MinusOneShortcut);
        let v = is_supersingular(m(7), 3).unwrap();
        assert!(v.supersingular);
        assert_eq!(v.reason, SupersingularReason::MinusOneShortcut);
        let v = is_supersingular(m(5), 11).unwrap();
        assert!(!v.supersingular);
    }

    #[test]
    fn quotient_with_trivial_subgroup_matches_analyze() {
        let q = analyze_quotient(m(5), 2, &[], DEFAULT_MAX_M).unwrap();
        let s = analyze(m(5), 2).unwrap();
        assert_eq!(q.invariant_count, s.b2);
        assert_eq!(q.hodge, s.hodge);
        assert_eq!(q.newton, s.newton);
        assert_eq!(q.sigma0_invariant_part, s.sigma0);
        assert_eq!(q.orbits, s.orbits);
    }

    #[test]
    fn quotient_module_example() {
        let q = analyze_quotient(m(3), 2, &[[1, 2, 0, 0]], DEFAULT_MAX_M).unwrap();
        assert_eq!(q.invariant_count, 3);
        assert_eq!(q.exceptional_lattice, "not computed");
        assert!(q.all_slopes_one);
    }

    #[test]
    fn quotient_by_full_dual_group() {
        let gens = [[1, 2, 0, 0], [0, 1, 2, 0], [0, 0, 1, 2]];
        let q = analyze_quotient(m(3), 2, &gens, DEFAULT_MAX_M).unwrap();
        assert_eq!(q.invariant_count, 1);
    }
}
