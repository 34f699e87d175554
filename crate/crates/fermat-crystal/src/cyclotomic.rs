//! Exact arithmetic with elements of Z[zeta_m], stored as integer
//! coefficient vectors of length m against the basis 1, zeta, ...,
//! zeta^{m-1}. The representation is redundant; equality and the zero
//! test reduce the difference modulo the m-th cyclotomic polynomial.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::residue::{gcd, Modulus};

/// An element of Z[zeta_m] by its coefficient vector.
#[derive(Clone, Debug, Serialize)]
pub struct CyclotomicInteger {
    m: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicInteger {
    pub fn new(m: Modulus, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != m.get() as usize {
            return Err(Error::InvalidCharacter(format!(
                "coefficient vector of length {} for zeta_{}",
                coeffs.len(),
                m
            )));
        }
        Ok(CyclotomicInteger { m: m.get(), coeffs })
    }

    pub(crate) fn from_raw(m: u64, coeffs: Vec<i64>) -> Self {
        debug_assert_eq!(coeffs.len(), m as usize);
        CyclotomicInteger { m, coeffs }
    }

    pub fn constant(m: Modulus, value: i64) -> Self {
        let mut coeffs = vec![0; m.get() as usize];
        coeffs[0] = value;
        CyclotomicInteger { m: m.get(), coeffs }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// The Galois twist zeta -> zeta^k, defined for gcd(k, m) = 1.
    pub fn galois_twist(&self, k: u64) -> Result<Self> {
        if gcd(k % self.m.max(1), self.m) != 1 && self.m > 1 {
            return Err(Error::NotCoprime { p: k, m: self.m });
        }
        let mut coeffs = vec![0i64; self.m as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[(i as u64 * k % self.m) as usize] += c;
        }
        Ok(CyclotomicInteger { m: self.m, coeffs })
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conjugate(&self) -> Self {
        let k = if self.m == 1 { 1 } else { self.m - 1 };
        self.galois_twist(k).expect("m - 1 is coprime to m")
    }

    /// Is the element 0 in Z[zeta_m] (not merely as a vector)?
    pub fn is_zero(&self) -> bool {
        let phi = cyclotomic_polynomial(self.m);
        let reduced = reduce_mod(&self.coeffs, &phi);
        reduced.iter().all(|c| c.is_zero())
    }

    /// |sum c_j exp(2 pi i j k / m)| for one embedding zeta -> e^{2pi i k/m},
    /// gcd(k, m) = 1. Floating point; used for the archimedean purity check.
    pub fn abs_at_embedding(&self, k: u64) -> f64 {
        let mut re = 0f64;
        let mut im = 0f64;
        let step = 2.0 * std::f64::consts::PI * k as f64 / self.m as f64;
        for (j, &c) in self.coeffs.iter().enumerate() {
            let angle = step * j as f64;
            re += c as f64 * angle.cos();
            im += c as f64 * angle.sin();
        }
        (re * re + im * im).sqrt()
    }

    /// The exponents of all complex embeddings: k in [1, m] coprime to m.
    pub fn embedding_exponents(&self) -> Vec<u64> {
        (1..=self.m).filter(|&k| gcd(k, self.m) == 1).collect()
    }
}

impl PartialEq for CyclotomicInteger {
    fn eq(&self, other: &Self) -> bool {
        if self.m != other.m {
            return false;
        }
        let diff: Vec<i64> = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a - b)
            .collect();
        CyclotomicInteger {
            m: self.m,
            coeffs: diff,
        }
        .is_zero()
    }
}

impl Eq for CyclotomicInteger {}

/// Exact division of integer polynomials, panicking on nonzero remainder
/// (only used with exact cyclotomic factors).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd] == BigInt::from(1), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = num.len() - 1;
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            rem[i - dd + j] -= &c * d;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division must be exact");
    quot
}

/// The m-th cyclotomic polynomial as an integer coefficient vector
/// (constant term first), computed by dividing x^m - 1 by all proper
/// cyclotomic factors.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    fn compute(m: u64, cache: &mut std::collections::BTreeMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
        if let Some(hit) = cache.get(&m) {
            return hit.clone();
        }
        let mut poly = vec![BigInt::zero(); m as usize + 1];
        poly[0] = BigInt::from(-1);
        poly[m as usize] = BigInt::from(1);
        for d in 1..m {
            if m % d == 0 {
                let factor = compute(d, cache);
                poly = poly_div_exact(&poly, &factor);
            }
        }
        cache.insert(m, poly.clone());
        poly
    }
    let mut cache = std::collections::BTreeMap::new();
    compute(m, &mut cache)
        .into_iter()
        .map(|c| {
            i64::try_from(&c).expect("cyclotomic coefficients fit i64 for supported m")
        })
        .collect()
}

/// Remainder of a coefficient vector modulo a monic integer polynomial.
fn reduce_mod(coeffs: &[i64], modulus: &[i64]) -> Vec<BigInt> {
    let deg = modulus.len() - 1;
    let mut rem: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    if rem.len() <= deg {
        return rem;
    }
    for i in (deg..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, &mcoef) in modulus.iter().enumerate() {
            rem[i - deg + j] -= &c * BigInt::from(mcoef);
        }
        debug_assert!(rem[i].is_zero());
    }
    rem.truncate(deg);
    rem
}

/// p-adic valuation of a plain integer; None for 0.
pub(crate) fn int_valuation(value: &BigInt, p: u64) -> Option<u64> {
    if value.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0u64;
    let mut rest = value.abs();
    loop {
        let (q, r) = (rest.clone() / &p, rest % &p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        rest = q;
    }
}
