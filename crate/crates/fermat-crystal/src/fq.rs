//! Small finite fields F_q, q = p^f, with full discrete-logarithm
//! tables. Built for the Jacobi-sum oracle: q is capped, so elements are
//! packed base-p integers indexing precomputed digit and dlog tables.
//!
//! Elements are residue polynomials modulo a monic irreducible
//! polynomial of degree f over F_p, packed as sum(digit_i * p^i).

use crate::error::{Error, Result};

/// Deterministic trial-division primality test; p is capped by the field
/// size, so this is never large.
pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- dense polynomial arithmetic over F_p (coefficient vectors) ---

pub(crate) fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a modulo the monic polynomial m.
pub(crate) fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
    let mut rem = a.to_vec();
    let deg = m.len() - 1;
    while rem.len() > deg {
        let c = *rem.last().unwrap();
        let shift = rem.len() - 1 - deg;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let idx = shift + j;
                rem[idx] = (rem[idx] + (p - mj % p) % p * c) % p;
            }
        }
        rem.pop();
        poly_trim(&mut rem);
        if rem.len() <= deg {
            break;
        }
    }
    rem
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut acc = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &acc, p), m, p);
        }
        acc = poly_rem(&poly_mul(&acc, &acc, p), m, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        // make y monic for the remainder step
        let lead = *y.last().unwrap();
        let inv = mod_inverse(lead, p);
        let monic: Vec<u64> = y.iter().map(|&c| c * inv % p).collect();
        let r = poly_rem(&x, &monic, p);
        x = y;
        y = r;
    }
    x
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime; Fermat inverse by square-and-multiply
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// x^{p^k} mod m, by iterated p-th powers.
fn frobenius_power(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![0, 1]; // x
    for _ in 0..k {
        acc = poly_powmod(&acc, p, m, p);
    }
    acc
}

/// Is a monic degree-f polynomial irreducible over F_p?
fn is_irreducible(m: &[u64], f: u32, p: u64) -> bool {
    // x^{p^f} = x mod m, and for each prime l | f the polynomial
    // x^{p^{f/l}} - x is coprime to m
    let x = vec![0u64, 1];
    let xq = frobenius_power(f, m, p);
    if poly_rem(&sub_polys(&xq, &x, p), m, p) != Vec::<u64>::new() {
        return false;
    }
    for l in prime_factors(f as u64) {
        let xk = frobenius_power(f / l as u32, m, p);
        let g = poly_gcd(&sub_polys(&xk, &x, p), m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

pub(crate) fn sub_polys(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let av = a.get(i).copied().unwrap_or(0);
        let bv = b.get(i).copied().unwrap_or(0);
        *slot = (av + p - bv) % p;
    }
    poly_trim(&mut out);
    out
}

/// A fully tabulated finite field F_q with a fixed generator of the
/// multiplicative group and its discrete-log table.
#[derive(Debug)]
pub struct FiniteFieldTable {
    p: u64,
    f: u32,
    q: u64,
    modulus: Vec<u64>,
    digits: Vec<u16>,
    dlog: Vec<u32>,
    generator: u64,
}

impl FiniteFieldTable {
    /// Build F_{p^f}. Errors: NotPrime, FieldCapExceeded.
    pub fn new(p: u64, f: u32, q_cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime { p });
        }
        assert!(f >= 1, "extension degree must be at least 1");
        let q = p
            .checked_pow(f)
            .filter(|&v| v <= q_cap)
            .ok_or(Error::FieldCapExceeded {
                q: p.saturating_pow(f),
                cap: q_cap,
            })?;

        // find the first monic irreducible polynomial of degree f
        let modulus = if f == 1 {
            vec![0, 1] // x itself; elements are plain residues
        } else {
            let mut found = None;
            'scan: for tail in 0..q {
                let mut candidate = Vec::with_capacity(f as usize + 1);
                let mut rest = tail;
                for _ in 0..f {
                    candidate.push(rest % p);
                    rest /= p;
                }
                if candidate[0] == 0 {
                    continue; // divisible by x
                }
                candidate.push(1);
                if is_irreducible(&candidate, f, p) {
                    found = Some(candidate);
                    break 'scan;
                }
            }
            found.expect("an irreducible polynomial of each degree exists")
        };

        // digit table: packed value -> base-p digits
        let mut digits = vec![0u16; (q * f as u64) as usize];
        for e in 0..q {
            let mut rest = e;
            for i in 0..f as u64 {
                digits[(e * f as u64 + i) as usize] = (rest % p) as u16;
                rest /= p;
            }
        }

        let mut table = FiniteFieldTable {
            p,
            f,
            q,
            modulus,
            digits,
            dlog: Vec::new(),
            generator: 0,
        };

        // generator: first element whose order is exactly q - 1; for
        // q = 2 the group is trivial and 1 generates it
        let factors = prime_factors(q - 1);
        let generator = if q == 2 {
            1
        } else {
            (2..q)
                .find(|&cand| {
                    factors
                        .iter()
                        .all(|&l| table.pow_packed(cand, (q - 1) / l) != 1)
                })
                .expect("the multiplicative group of a finite field is cyclic")
        };
        table.generator = generator;

        // dlog table by walking the powers of the generator
        let mut dlog = vec![u32::MAX; q as usize];
        let mut acc = 1u64;
        for k in 0..(q - 1) {
            debug_assert_eq!(dlog[acc as usize], u32::MAX);
            dlog[acc as usize] = k as u32;
            acc = table.mul_packed(acc, generator);
        }
        debug_assert_eq!(acc, 1);
        table.dlog = dlog;
        Ok(table)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Discrete log of a nonzero packed element; None for 0.
    pub fn dlog(&self, e: u64) -> Option<u32> {
        let v = self.dlog[e as usize];
        (v != u32::MAX).then_some(v)
    }

    fn unpack(&self, e: u64) -> Vec<u64> {
        let base = (e * self.f as u64) as usize;
        let mut out: Vec<u64> = (0..self.f as usize)
            .map(|i| self.digits[base + i] as u64)
            .collect();
        poly_trim(&mut out);
        out
    }

    fn pack(&self, poly: &[u64]) -> u64 {
        let mut acc = 0u64;
        for &c in poly.iter().rev() {
            acc = acc * self.p + c;
        }
        acc
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (fa, fb) = ((a * self.f as u64) as usize, (b * self.f as u64) as usize);
        let mut acc = 0u64;
        let mut scale = 1u64;
        for i in 0..self.f as usize {
            let d = (self.digits[fa + i] + self.digits[fb + i]) as u64 % self.p;
            acc += d * scale;
            scale *= self.p;
        }
        acc
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (fa, fb) = ((a * self.f as u64) as usize, (b * self.f as u64) as usize);
        let mut acc = 0u64;
        let mut scale = 1u64;
        for i in 0..self.f as usize {
            let d = (self.digits[fa + i] as u64 + self.p - self.digits[fb + i] as u64) % self.p;
            acc += d * scale;
            scale *= self.p;
        }
        acc
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    pub fn mul_packed(&self, a: u64, b: u64) -> u64 {
        let prod = poly_mul(&self.unpack(a), &self.unpack(b), self.p);
        self.pack(&poly_rem(&prod, &self.modulus, self.p))
    }

    pub fn pow_packed(&self, a: u64, mut e: u64) -> u64 {
        let mut result = 1u64;
        let mut acc = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_packed(result, acc);
            }
            acc = self.mul_packed(acc, acc);
            e >>= 1;
        }
        result
    }

    /// Minimal polynomial over F_p of a packed element, as the monic
    /// coefficient vector (constant term first, leading 1 included).
    pub fn minimal_polynomial(&self, e: u64) -> Vec<u64> {
        // Frobenius conjugates of e
        let mut conjugates = vec![e];
        let mut cur = self.pow_packed(e, self.p);
        while cur != e {
            conjugates.push(cur);
            cur = self.pow_packed(cur, self.p);
        }
        // product of (x - conj) with coefficients in F_q
        let mut poly: Vec<u64> = vec![1]; // packed F_q coefficients
        for &c in &conjugates {
            let neg_c = self.neg(c);
            // multiply poly by (x - c)
            let mut next = vec![0u64; poly.len() + 1];
            for (i, &coef) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], coef);
                next[i] = self.add(next[i], self.mul_packed(coef, neg_c));
            }
            poly = next;
        }
        // all coefficients must lie in the prime field
        poly.iter()
            .map(|&c| {
                let digs = self.unpack(c);
                assert!(
                    digs.len() <= 1,
                    "minimal polynomial has prime-field coefficients"
                );
                digs.first().copied().unwrap_or(0)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(7919));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }

    #[test]
    fn prime_field_tables() {
        let t = FiniteFieldTable::new(7, 1, 20_000).unwrap();
        assert_eq!(t.q(), 7);
        // generator order is q - 1 and the dlog table is a bijection
        assert_eq!(t.dlog(1), Some(0));
        assert_eq!(t.dlog(0), None);
        let mut seen: Vec<u32> = (1..7).map(|e| t.dlog(e).unwrap()).collect();
        seen.sort();
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn extension_field_tables() {
        let t = FiniteFieldTable::new(2, 4, 20_000).unwrap();
        assert_eq!(t.q(), 16);
        let mut seen: Vec<u32> = (1..16).map(|e| t.dlog(e).unwrap()).collect();
        seen.sort();
        assert_eq!(seen, (0..15).collect::<Vec<_>>());
        // additive structure: a + a = 0 in characteristic 2
        for a in 0..16 {
            assert_eq!(t.add(a, a), 0);
            assert_eq!(t.neg(a), a);
        }
        // multiplicative consistency with dlogs
        for a in 1..16u64 {
            for b in 1..16u64 {
                let lhs = t.dlog(t.mul_packed(a, b)).unwrap() as u64;
                let rhs = (t.dlog(a).unwrap() as u64 + t.dlog(b).unwrap() as u64) % 15;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn field_arithmetic_in_degree_two() {
        let t = FiniteFieldTable::new(3, 2, 20_000).unwrap();
        assert_eq!(t.q(), 9);
        // Fermat: a^q = a for all a
        for a in 0..9 {
            assert_eq!(t.pow_packed(a, 9), a);
        }
        // subtraction inverts addition
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(t.sub(t.add(a, b), b), a);
            }
        }
    }

    #[test]
    fn minimal_polynomials() {
        let t = FiniteFieldTable::new(2, 4, 20_000).unwrap();
        // a primitive 5th root of unity in F_16 has degree 4 over F_2
        let omega = t.pow_packed(t.generator(), 3); // order (16-1)/3 = 5
        let mp = t.minimal_polynomial(omega);
        assert_eq!(mp.len(), 5);
        assert_eq!(*mp.last().unwrap(), 1);
        // it divides x^5 - 1: check by evaluating the factorization
        // x^5 - 1 = (x - 1) * mp(x) * (remaining factor) over F_2 means
        // omega^5 = 1
        assert_eq!(t.pow_packed(omega, 5), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            FiniteFieldTable::new(6, 2, 20_000).unwrap_err(),
            Error::NotPrime { p: 6 }
        );
        assert!(matches!(
            FiniteFieldTable::new(2, 20, 20_000).unwrap_err(),
            Error::FieldCapExceeded { .. }
        ));
    }
}
