//! The sigma_0 contribution of a supersingular orbit.
//!
//! For an orbit with degree sequence (tau_0, ..., tau_{h-1}) summing to h,
//! the maximal sub-F-crystal N on which F is divisible by p is
//! N = (+) p^{m_k} M_k with m_k = n + s_k, where s_k are the partial sums
//! of (tau_j - 1) and n = -min_k s_k. The orbit contributes its
//! multiplicity times sum(m_k) to sigma_0, the Witt length of M/N. The
//! total over all orbits determines disc(NS) = (-1)^(b2-1) * p^(2 sigma_0)
//! for a supersingular surface.
//!
//! [`brute_force_sigma0`] is an independent oracle: it searches exponent
//! vectors (a_0, ..., a_{h-1}) with a_{j+1} <= a_j + tau_j - 1 directly
//! and minimizes sum(a_j). Any feasible vector can be lowered by its
//! minimum entry without breaking the cyclic constraints, so restricting
//! the search to 0 <= a_j <= sum(tau) is exhaustive.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default orbit-length bound for the exhaustive oracle.
pub const DEFAULT_ORACLE_BOUND: usize = 10;

/// Full trace of the sigma_0 computation on one orbit, in the order the
/// quantities are produced: partial sums, the shift n, the exponents m_k,
/// and the contribution multiplicity * sum(m_k).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sigma0Trace {
    pub partial_sums: Vec<i64>,
    pub shift_n: i64,
    pub exponents_m: Vec<u64>,
    pub multiplicity: u64,
    pub contribution: u64,
}

fn supersingular_excess(degrees: &[u8]) -> Result<i64> {
    if degrees.is_empty() {
        return Err(Error::EmptyOrbit);
    }
    let excess: i64 = degrees.iter().map(|&d| d as i64 - 1).sum();
    if excess != 0 {
        return Err(Error::NotSupersingularOrbit { excess });
    }
    Ok(excess)
}

/// Run the sigma_0 algorithm on a degree sequence, starting from its
/// first entry. The contribution is independent of the starting point;
/// the trace itself is not, so callers that want the trace for a
/// particular rotation pass the sequence in that rotation.
pub fn sigma0_trace(degrees: &[u8], multiplicity: u64) -> Result<Sigma0Trace> {
    supersingular_excess(degrees)?;
    let mut partial_sums = Vec::with_capacity(degrees.len());
    let mut acc = 0i64;
    for &d in degrees {
        acc += d as i64 - 1;
        partial_sums.push(acc);
    }
    debug_assert_eq!(*partial_sums.last().unwrap(), 0);
    let shift_n = -partial_sums.iter().copied().min().unwrap();
    let exponents_m: Vec<u64> = partial_sums.iter().map(|&s| (shift_n + s) as u64).collect();
    let contribution = multiplicity * exponents_m.iter().sum::<u64>();
    Ok(Sigma0Trace {
        partial_sums,
        shift_n,
        exponents_m,
        multiplicity,
        contribution,
    })
}

/// Independent oracle: exhaustive search (with exact branch-and-bound
/// pruning) over all non-negative exponent vectors satisfying the cyclic
/// constraints, per multiplicity-1 copy of the orbit.
pub fn brute_force_sigma0(degrees: &[u8]) -> Result<u64> {
    brute_force_sigma0_bounded(degrees, DEFAULT_ORACLE_BOUND)
}

pub fn brute_force_sigma0_bounded(degrees: &[u8], max_len: usize) -> Result<u64> {
    supersingular_excess(degrees)?;
    if degrees.len() > max_len {
        return Err(Error::OracleBoundExceeded {
            length: degrees.len(),
            bound: max_len,
        });
    }
    let h = degrees.len();
    let ceiling: i64 = degrees.iter().map(|&d| d as i64).sum();
    let mut best: Option<i64> = None;
    let mut stack: Vec<i64> = Vec::with_capacity(h);

    fn search(
        degrees: &[u8],
        ceiling: i64,
        stack: &mut Vec<i64>,
        partial: i64,
        best: &mut Option<i64>,
    ) {
        if let Some(b) = *best {
            if partial >= b {
                return; // cannot improve on the incumbent
            }
        }
        let j = stack.len();
        if j == degrees.len() {
            // cyclic wrap: a_0 <= a_{h-1} + tau_{h-1} - 1
            let last = *stack.last().unwrap();
            if stack[0] <= last + degrees[degrees.len() - 1] as i64 - 1 {
                *best = Some(partial);
            }
            return;
        }
        let upper = if j == 0 {
            ceiling
        } else {
            ceiling.min(stack[j - 1] + degrees[j - 1] as i64 - 1)
        };
        if upper < 0 {
            return; // no non-negative choice left on this branch
        }
        for a in 0..=upper {
            stack.push(a);
            search(degrees, ceiling, stack, partial + a, best);
            stack.pop();
        }
    }

    search(degrees, ceiling, &mut stack, 0, &mut best);
    let minimum = best.expect("a supersingular orbit always admits a feasible vector");
    Ok(minimum as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_of_two_cycle() {
        let t = sigma0_trace(&[0, 2], 1).unwrap();
        assert_eq!(t.partial_sums, vec![-1, 0]);
        assert_eq!(t.shift_n, 1);
        assert_eq!(t.exponents_m, vec![0, 1]);
        assert_eq!(t.contribution, 1);
    }

    #[test]
    fn trace_of_three_cycle() {
        let t = sigma0_trace(&[0, 2, 1], 1).unwrap();
        assert_eq!(t.partial_sums, vec![-1, 0, 0]);
        assert_eq!(t.shift_n, 1);
        assert_eq!(t.exponents_m, vec![0, 1, 1]);
        assert_eq!(t.contribution, 2);
    }

    #[test]
    fn trace_of_six_cycle() {
        let t = sigma0_trace(&[2, 1, 1, 1, 1, 0], 1).unwrap();
        assert_eq!(t.partial_sums, vec![1, 1, 1, 1, 1, 0]);
        assert_eq!(t.shift_n, 0);
        assert_eq!(t.exponents_m, vec![1, 1, 1, 1, 1, 0]);
        assert_eq!(t.contribution, 5);
    }

    #[test]
    fn trace_of_degree_five_orbit() {
        let t = sigma0_trace(&[0, 1, 2, 1], 1).unwrap();
        assert_eq!(t.partial_sums, vec![-1, -1, 0, 0]);
        assert_eq!(t.contribution, 2);
    }

    #[test]
    fn multiplicity_scales_contribution() {
        let t = sigma0_trace(&[0, 2], 3).unwrap();
        assert_eq!(t.contribution, 3);
    }

    #[test]
    fn exponents_are_nonnegative_with_a_zero() {
        for degrees in [vec![0, 2], vec![0, 1, 2, 1], vec![1u8], vec![2, 0, 1, 1]] {
            let t = sigma0_trace(&degrees, 1).unwrap();
            assert!(t.exponents_m.iter().any(|&e| e == 0));
        }
    }

    #[test]
    fn rejects_unbalanced_sequences() {
        assert_eq!(
            sigma0_trace(&[0, 1], 1),
            Err(Error::NotSupersingularOrbit { excess: -1 })
        );
        assert_eq!(
            sigma0_trace(&[2, 1], 1),
            Err(Error::NotSupersingularOrbit { excess: 1 })
        );
        assert_eq!(sigma0_trace(&[], 1), Err(Error::EmptyOrbit));
    }

    #[test]
    fn oracle_agrees_on_known_cases() {
        assert_eq!(brute_force_sigma0(&[0, 2]).unwrap(), 1);
        assert_eq!(brute_force_sigma0(&[1, 1, 1]).unwrap(), 0);
        assert_eq!(brute_force_sigma0(&[0, 1, 2, 1]).unwrap(), 2);
    }

    #[test]
    fn oracle_bound_is_enforced() {
        let long = vec![1u8; 11];
        assert_eq!(
            brute_force_sigma0(&long),
            Err(Error::OracleBoundExceeded {
                length: 11,
                bound: 10
            })
        );
        assert_eq!(brute_force_sigma0_bounded(&long, 11).unwrap(), 0);
    }

    #[test]
    fn rotation_invariance_of_contribution() {
        let base = [0u8, 1, 2, 2, 0, 1, 1, 1];
        let reference = sigma0_trace(&base, 1).unwrap().contribution;
        for k in 1..base.len() {
            let mut rotated = Vec::new();
            rotated.extend_from_slice(&base[k..]);
            rotated.extend_from_slice(&base[..k]);
            assert_eq!(sigma0_trace(&rotated, 1).unwrap().contribution, reference);
        }
    }

    #[test]
    fn algorithm_matches_oracle_exhaustively() {
        // every balanced degree sequence over {0,1,2} of length <= 6
        for h in 1..=6usize {
            for code in 0..3u32.pow(h as u32) {
                let mut degrees = Vec::with_capacity(h);
                let mut c = code;
                for _ in 0..h {
                    degrees.push((c % 3) as u8);
                    c /= 3;
                }
                if degrees.iter().map(|&d| d as i64 - 1).sum::<i64>() != 0 {
                    continue;
                }
                let fast = sigma0_trace(&degrees, 1).unwrap().contribution;
                let slow = brute_force_sigma0(&degrees).unwrap();
                assert_eq!(fast, slow, "degrees = {degrees:?}");
            }
        }
    }
}
