//! Exact modular arithmetic primitives: canonical lifts, multiplicative
//! orders, and membership of -1 in the cyclic subgroup generated by p
//! inside (Z/m)^x.
//!
//! Everything here is plain integer arithmetic; there is no floating
//! point anywhere in this module. The degenerate moduli m = 1 and m = 2
//! are accepted and handled uniformly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The degree m of a Fermat surface, m >= 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidModulus);
        }
        Ok(Modulus(m))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A residue class mod m, stored by its canonical lift in [0, m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    /// Reduce an arbitrary signed integer into [0, m).
    pub fn new(value: i64, modulus: Modulus) -> Self {
        let m = modulus.get() as i64;
        let mut v = value % m;
        if v < 0 {
            v += m;
        }
        Residue {
            value: v as u64,
            modulus,
        }
    }

    pub fn from_u64(value: u64, modulus: Modulus) -> Self {
        Residue {
            value: value % modulus.get(),
            modulus,
        }
    }

    /// The unique integer in [0, m) representing this class.
    pub fn canonical_lift(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn neg(self) -> Self {
        let m = self.modulus.get();
        Residue {
            value: if self.value == 0 { 0 } else { m - self.value },
            modulus: self.modulus,
        }
    }

    /// Multiply by an arbitrary non-negative integer scalar.
    pub fn scaled(self, k: u64) -> Self {
        let m = self.modulus.get();
        // values are < m <= 2^32 in practice, but stay safe via u128
        let v = (self.value as u128 * (k % m) as u128 % m as u128) as u64;
        Residue {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn ensure_coprime(p: u64, m: Modulus) -> Result<u64> {
    let md = m.get();
    let reduced = p % md;
    if gcd(p, md) != 1 {
        return Err(Error::NotCoprime { p, m: md });
    }
    Ok(reduced)
}

/// Smallest h >= 1 with p^h = 1 (mod m). Requires gcd(p, m) = 1.
///
/// Computed by direct powering; the loop terminates within m steps
/// because the powers of a unit cycle through a subgroup of (Z/m)^x.
pub fn multiplicative_order(p: u64, m: Modulus) -> Result<u64> {
    let md = m.get();
    let p0 = ensure_coprime(p, m)?;
    if md == 1 {
        return Ok(1);
    }
    let mut acc = p0;
    let mut h = 1u64;
    while acc != 1 {
        acc = acc * p0 % md;
        h += 1;
    }
    Ok(h)
}

/// Does some power of p equal -1 (mod m)?
///
/// For m <= 2 the classes 1 and -1 coincide, so the answer is trivially
/// true; for m > 2 a positive answer forces the order of p to be even.
pub fn contains_minus_one(p: u64, m: Modulus) -> Result<bool> {
    let md = m.get();
    let p0 = ensure_coprime(p, m)?;
    if md <= 2 {
        return Ok(true);
    }
    let minus_one = md - 1;
    let mut acc = p0;
    loop {
        if acc == minus_one {
            return Ok(true);
        }
        if acc == 1 {
            return Ok(false);
        }
        acc = acc * p0 % md;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    /// Independent totient by trial factorization, used only as an oracle.
    fn euler_phi(mut n: u64) -> u64 {
        let mut phi = n;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                phi -= phi / d;
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            phi -= phi / n;
        }
        phi
    }

    #[test]
    fn canonical_lift_reduces() {
        assert_eq!(Residue::new(3, m(7)).canonical_lift(), 3);
        assert_eq!(Residue::new(-1, m(7)).canonical_lift(), 6);
        assert_eq!(Residue::new(12, m(7)).canonical_lift(), 5);
    }

    #[test]
    fn lift_pairs_sum_to_modulus() {
        for modulus in 1..40u64 {
            for b in 0..modulus as i64 {
                let r = Residue::new(b, m(modulus));
                let sum = r.canonical_lift() + r.neg().canonical_lift();
                if r.is_zero() {
                    assert_eq!(sum, 0);
                } else {
                    assert_eq!(sum, modulus);
                }
            }
        }
    }

    #[test]
    fn orders_by_direct_powering() {
        // 3 mod 7: powers 3, 2, 6, 4, 5, 1
        assert_eq!(multiplicative_order(3, m(7)).unwrap(), 6);
        assert_eq!(multiplicative_order(1, m(17)).unwrap(), 1);
        // 5 mod 13: powers 5, 12, 8, 1
        assert_eq!(multiplicative_order(5, m(13)).unwrap(), 4);
        assert_eq!(multiplicative_order(7, m(1)).unwrap(), 1);
    }

    #[test]
    fn order_requires_coprimality() {
        assert_eq!(
            multiplicative_order(6, m(9)),
            Err(Error::NotCoprime { p: 6, m: 9 })
        );
        assert_eq!(
            contains_minus_one(10, m(15)),
            Err(Error::NotCoprime { p: 10, m: 15 })
        );
    }

    #[test]
    fn order_divides_phi() {
        for modulus in 1..60u64 {
            for p in 1..60u64 {
                if gcd(p, modulus) != 1 {
                    continue;
                }
                let h = multiplicative_order(p, m(modulus)).unwrap();
                assert_eq!(euler_phi(modulus) % h, 0, "p={p} m={modulus}");
            }
        }
    }

    #[test]
    fn minus_one_membership() {
        // <2> mod 5 = {1, 2, 4, 3} contains 4 = -1
        assert_eq!(contains_minus_one(2, m(5)).unwrap(), true);
        // <3> mod 13 = {1, 3, 9}
        assert_eq!(contains_minus_one(3, m(13)).unwrap(), false);
        for modulus in 3..50u64 {
            assert!(contains_minus_one(modulus - 1, m(modulus)).unwrap());
        }
    }

    #[test]
    fn minus_one_forces_even_order() {
        for modulus in 3..60u64 {
            for p in 1..60u64 {
                if gcd(p, modulus) != 1 {
                    continue;
                }
                if contains_minus_one(p, m(modulus)).unwrap() {
                    let h = multiplicative_order(p, m(modulus)).unwrap();
                    assert_eq!(h % 2, 0, "p={p} m={modulus} h={h}");
                }
            }
        }
    }

    #[test]
    fn rejects_zero_modulus() {
        assert_eq!(Modulus::new(0), Err(Error::InvalidModulus));
    }
}
