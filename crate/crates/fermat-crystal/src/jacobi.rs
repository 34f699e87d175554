//! Finite-field slope oracle.
//!
//! The Frobenius eigenvalue on the eigenspace of a character
//! (b0, b1, b2, b3) of the degree-m Fermat surface over F_q,
//! q = p^f = 1 mod m, is the Jacobi sum
//!
//!   J(c) = sum over x, y, z in F_q^x with 1 + x + y + z = 0 of
//!          chi^{b1}(x) chi^{b2}(y) chi^{b3}(z),
//!
//! where chi is a multiplicative character of exact order m. This is the
//! classical eigenvalue dictionary for diagonal hypersurfaces (Katz,
//! Ann. Sci. ENS 2, 1969; Shioda-Katsura, Tohoku Math. J. 31, 1979).
//! The generator of F_q^x is free to choose; we normalize chi on the
//! inverse of the tabulated generator (chi(g) = zeta_m^{-1}). Under the
//! p-adic embedding used by [`crate::padic`] -- zeta_m goes to the
//! Teichmueller lift of g^{(q-1)/m} -- this is the normalization for
//! which valuations of eigenvalues match the crystal slopes; the other
//! choice measures the conjugate orbit, with 0 and 2 exchanged.
//! The sum is computed exactly as a cyclotomic integer by the direct
//! O(q^2) double loop; with the `parallel` feature the outer loop fans
//! out across threads and the per-thread coefficient vectors are summed,
//! which is order-independent because the arithmetic is exact.
//!
//! [`slope_check`] compares, orbit by orbit, the p-adic valuation of the
//! eigenvalue of the orbit base against f times the orbit's average
//! Hodge degree, the slope the model crystal predicts.

use serde::Serialize;

use crate::characters::FermatCharacter;
use crate::cyclotomic::CyclotomicInteger;
use crate::error::{Error, Result};
use crate::fq::FiniteFieldTable;
use crate::newton::Slope;
use crate::orbits::orbit_stream_capped;
use crate::padic::{padic_valuation_auto, DEFAULT_Q_CAP};
use crate::residue::{multiplicative_order, Modulus};

/// Accumulate the Jacobi sum coefficients for x in the given packed
/// range. chi_exps[i] = b_i * dlog(.) summand lookups happen inline.
fn accumulate_range(
    table: &FiniteFieldTable,
    b: [u64; 4],
    m: u64,
    from: u64,
    to: u64,
) -> Vec<i64> {
    let q = table.q();
    let one = 1u64; // packed representation of the field unit
    let mut coeffs = vec![0i64; m as usize];
    for x in from..to {
        if x == 0 {
            continue;
        }
        let dx = table.dlog(x).expect("nonzero element has a dlog") as u64;
        let tx = b[1] * dx % m;
        // t = -(1 + x); z = t - y
        let t = table.neg(table.add(one, x));
        for y in 1..q {
            let z = table.sub(t, y);
            if z == 0 {
                continue;
            }
            let dy = table.dlog(y).expect("nonzero element has a dlog") as u64;
            let dz = table.dlog(z).expect("nonzero element has a dlog") as u64;
            // chi(g) = zeta^{-1}: negate the accumulated exponent
            let idx = (m - (tx + b[2] * dy + b[3] * dz) % m) % m;
            coeffs[idx as usize] += 1;
        }
    }
    coeffs
}

/// Reference sequential summation.
pub fn jacobi_eigenvalue_seq(
    table: &FiniteFieldTable,
    c: &FermatCharacter,
) -> Result<CyclotomicInteger> {
    let (b, m) = eigenvalue_preconditions(table, c)?;
    Ok(CyclotomicInteger::from_raw(
        m,
        accumulate_range(table, b, m, 1, table.q()),
    ))
}

/// The Frobenius eigenvalue of a character as an exact cyclotomic
/// integer. Requires q = 1 mod m and all components of c nonzero.
pub fn jacobi_eigenvalue(
    table: &FiniteFieldTable,
    c: &FermatCharacter,
) -> Result<CyclotomicInteger> {
    let (b, m) = eigenvalue_preconditions(table, c)?;

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let q = table.q();
        let workers = rayon::current_num_threads().max(1) as u64;
        let chunk = (q / workers + 1).max(1);
        let coeffs = (0..workers)
            .into_par_iter()
            .map(|w| {
                let from = 1 + w * chunk;
                let to = (from + chunk).min(q);
                if from >= q {
                    vec![0i64; m as usize]
                } else {
                    accumulate_range(table, b, m, from, to)
                }
            })
            .reduce(
                || vec![0i64; m as usize],
                |mut acc, part| {
                    for (a, p) in acc.iter_mut().zip(part) {
                        *a += p;
                    }
                    acc
                },
            );
        Ok(CyclotomicInteger::from_raw(m, coeffs))
    }

    #[cfg(not(feature = "parallel"))]
    {
        Ok(CyclotomicInteger::from_raw(
            m,
            accumulate_range(table, b, m, 1, table.q()),
        ))
    }
}

fn eigenvalue_preconditions(
    table: &FiniteFieldTable,
    c: &FermatCharacter,
) -> Result<([u64; 4], u64)> {
    let m = c.modulus().get();
    if (table.q() - 1) % m != 0 {
        return Err(Error::IncompatibleField { q: table.q(), m });
    }
    if c.components().iter().any(|&b| b == 0) {
        return Err(Error::ZeroComponent);
    }
    Ok((c.components(), m))
}

/// One orbit's entry in the slope report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeCheckEntry {
    pub orbit_base: FermatCharacter,
    pub orbit_length: u64,
    pub expected_slope: Slope,
    pub expected_valuation: u64,
    pub measured_valuation: u64,
    pub f: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeCheckReport {
    pub m: u64,
    pub p: u64,
    pub f: u64,
    pub q: u64,
    pub entries: Vec<SlopeCheckEntry>,
    pub all_pass: bool,
}

/// Verify, for every orbit of nonzero characters, that the p-adic
/// valuation of the Jacobi eigenvalue of the orbit base equals f times
/// the orbit's average Hodge degree. q = p^f is the smallest field where
/// all characters are defined; the run is refused above the q cap.
pub fn slope_check(m: Modulus, p: u64) -> Result<SlopeCheckReport> {
    slope_check_capped(m, p, DEFAULT_Q_CAP)
}

pub fn slope_check_capped(m: Modulus, p: u64, q_cap: u64) -> Result<SlopeCheckReport> {
    let md = m.get();
    let f = multiplicative_order(p, m)?;
    let table = FiniteFieldTable::new(p, f as u32, q_cap)?;
    let q = table.q();
    debug_assert_eq!((q - 1) % md, 0, "m divides q - 1 by the choice of f");

    let mut entries = Vec::new();
    for orbit in orbit_stream_capped(m, p, crate::characters::DEFAULT_MAX_M)? {
        let base = *orbit.base().expect("streamed orbits carry a base");
        if base.is_zero() {
            continue; // the hyperplane class has no Jacobi sum
        }
        let eigenvalue = jacobi_eigenvalue(&table, &base)?;
        let witness = padic_valuation_auto(&eigenvalue, p, q_cap)?;
        let h = orbit.len() as u64;
        debug_assert_eq!(f % h, 0, "orbit length divides the order of p");
        let expected_valuation = f / h * orbit.degree_sum();
        entries.push(SlopeCheckEntry {
            orbit_base: base,
            orbit_length: h,
            expected_slope: orbit.slope(),
            expected_valuation,
            measured_valuation: witness.valuation,
            f,
            pass: witness.valuation == expected_valuation,
        });
    }
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(SlopeCheckReport {
        m: md,
        p,
        f,
        q,
        entries,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    fn chr(md: u64, parts: [i64; 4]) -> FermatCharacter {
        FermatCharacter::new(m(md), parts).unwrap()
    }

    #[test]
    fn eigenvalue_has_absolute_value_q() {
        // m=3, q=7: |J|^2 = 49 under every complex embedding
        let table = FiniteFieldTable::new(7, 1, DEFAULT_Q_CAP).unwrap();
        let j = jacobi_eigenvalue(&table, &chr(3, [1, 1, 2, 2])).unwrap();
        for k in j.embedding_exponents() {
            let a = j.abs_at_embedding(k);
            assert!((a - 7.0).abs() / 7.0 < 1e-6, "embedding {k}: |J| = {a}");
        }
    }

    #[test]
    fn parallel_and_sequential_sums_agree() {
        let table = FiniteFieldTable::new(2, 4, DEFAULT_Q_CAP).unwrap();
        let c = chr(5, [1, 1, 1, 2]);
        let par = jacobi_eigenvalue(&table, &c).unwrap();
        let seq = jacobi_eigenvalue_seq(&table, &c).unwrap();
        assert_eq!(par.coefficients(), seq.coefficients());
    }

    #[test]
    fn preconditions() {
        let table = FiniteFieldTable::new(7, 1, DEFAULT_Q_CAP).unwrap();
        // q = 7 is not 1 mod 5
        assert_eq!(
            jacobi_eigenvalue(&table, &chr(5, [1, 1, 1, 2])),
            Err(Error::IncompatibleField { q: 7, m: 5 })
        );
        assert_eq!(
            jacobi_eigenvalue(&table, &FermatCharacter::zero(m(3))),
            Err(Error::ZeroComponent)
        );
    }

    #[test]
    fn conjugate_eigenvalue_is_complex_conjugate() {
        let table = FiniteFieldTable::new(7, 1, DEFAULT_Q_CAP).unwrap();
        let c = chr(3, [1, 1, 2, 2]);
        let j = jacobi_eigenvalue(&table, &c).unwrap();
        let jc = jacobi_eigenvalue(&table, &c.conjugate()).unwrap();
        assert_eq!(jc.coefficients(), j.conjugate().coefficients());
    }

    #[test]
    fn galois_twist_matches_scaled_character() {
        // applying zeta -> zeta^p to J(c) gives J(p c) exactly
        let table = FiniteFieldTable::new(2, 4, DEFAULT_Q_CAP).unwrap();
        let c = chr(5, [1, 1, 1, 2]);
        let j = jacobi_eigenvalue(&table, &c).unwrap();
        let twisted = j.galois_twist(2).unwrap();
        let scaled = jacobi_eigenvalue(&table, &c.scaled(2)).unwrap();
        assert_eq!(twisted.coefficients(), scaled.coefficients());
    }

    #[test]
    fn supersingular_degree_five_valuations() {
        // m=5, p=2: f=4, q=16; the orbit of (1,1,1,2) has slope 1, so the
        // valuation of its eigenvalue is 4
        let table = FiniteFieldTable::new(2, 4, DEFAULT_Q_CAP).unwrap();
        let j = jacobi_eigenvalue(&table, &chr(5, [1, 1, 1, 2])).unwrap();
        let w = padic_valuation_auto(&j, 2, DEFAULT_Q_CAP).unwrap();
        assert_eq!(w.valuation, 4);
    }

    #[test]
    fn degree_three_split_prime_valuation() {
        // m=3, p=7: f=1, slope 1 orbits give valuation 1
        let table = FiniteFieldTable::new(7, 1, DEFAULT_Q_CAP).unwrap();
        let j = jacobi_eigenvalue(&table, &chr(3, [1, 1, 2, 2])).unwrap();
        let w = padic_valuation_auto(&j, 7, DEFAULT_Q_CAP).unwrap();
        assert_eq!(w.valuation, 1);
    }

    #[test]
    fn slope_report_for_small_cases() {
        let r = slope_check(m(5), 2).unwrap();
        assert_eq!((r.f, r.q), (4, 16));
        assert!(r.all_pass);
        assert!(!r.entries.is_empty());
        for e in &r.entries {
            assert!(e.expected_slope.is_one());
            assert_eq!(e.measured_valuation, 4 * 1);
        }

        let r = slope_check(m(5), 11).unwrap();
        assert!(r.all_pass);
        // ordinary: length-1 orbits with valuations 0, 1, 2
        let vals: std::collections::BTreeSet<u64> =
            r.entries.iter().map(|e| e.measured_valuation).collect();
        assert_eq!(vals, [0u64, 1, 2].into_iter().collect());
    }

    #[test]
    fn trivial_surface_report_is_vacuous() {
        let r = slope_check(m(1), 2).unwrap();
        assert!(r.entries.is_empty());
        assert!(r.all_pass);
    }

    #[test]
    fn purity_pairs_valuations() {
        let table = FiniteFieldTable::new(2, 4, DEFAULT_Q_CAP).unwrap();
        for parts in [[1i64, 1, 1, 2], [1, 2, 3, 4], [1, 1, 4, 4]] {
            let c = chr(5, parts);
            let j = jacobi_eigenvalue(&table, &c).unwrap();
            let jc = jacobi_eigenvalue(&table, &c.conjugate()).unwrap();
            let v = padic_valuation_auto(&j, 2, DEFAULT_Q_CAP).unwrap().valuation;
            let vc = padic_valuation_auto(&jc, 2, DEFAULT_Q_CAP)
                .unwrap()
                .valuation;
            assert_eq!(v + vc, 2 * 4, "purity at {parts:?}");
        }
    }
}
