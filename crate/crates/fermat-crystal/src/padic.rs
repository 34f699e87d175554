//! p-adic valuations of cyclotomic integers.
//!
//! zeta_m is sent to the Teichmueller lift of a primitive m-th root of
//! unity in the degree-f unramified extension of Z_p, f the order of p
//! mod m. Concretely: the minimal polynomial gbar of the root over F_p
//! is a degree-f factor of x^m - 1; Hensel lifting the factorization
//! x^m - 1 = gbar * hbar to Z/p^N gives a monic G whose root x in
//! R = (Z/p^N)[x]/(G) satisfies x^m = 1 exactly, i.e. x is the
//! Teichmueller lift. R is unramified local, so the valuation of an
//! element is the minimum p-adic valuation of its coordinates.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclotomic::{int_valuation, CyclotomicInteger};
use crate::error::{Error, Result};
use crate::fq::{mod_inverse, poly_mul, poly_rem, poly_trim, sub_polys, FiniteFieldTable};
use crate::residue::{gcd, multiplicative_order, Modulus};

/// Default field-size cap shared with the Jacobi oracle.
pub const DEFAULT_Q_CAP: u64 = 20_000;

/// Result of one valuation measurement: the inertia degree f, the
/// working precision in p-adic digits, and the exact valuation
/// normalized so v(p) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PadicWitness {
    pub f: u64,
    pub precision: u32,
    pub valuation: u64,
}

/// Quotient and remainder over F_p; the divisor need not be monic.
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut b = b.to_vec();
    poly_trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let lead_inv = mod_inverse(*b.last().unwrap(), p);
    let monic: Vec<u64> = b.iter().map(|&c| c * lead_inv % p).collect();
    let deg = monic.len() - 1;
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let mut quot = vec![0u64; rem.len().saturating_sub(deg).max(1)];
    while rem.len() > deg {
        let c = *rem.last().unwrap();
        let shift = rem.len() - 1 - deg;
        if c != 0 {
            quot[shift] = (quot[shift] + c * lead_inv) % p;
            for (j, &mj) in monic.iter().enumerate() {
                rem[shift + j] = (rem[shift + j] + (p - mj) % p * c) % p;
            }
        }
        rem.pop();
        poly_trim(&mut rem);
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// Bezout coefficients (s, t) with s*a + t*b = 1 for coprime a, b.
fn poly_bezout(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    // iterative extended Euclid
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1, p);
        let s = sub_polys(&s0, &poly_mul(&q, &s1, p), p);
        let t = sub_polys(&t0, &poly_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(r0.len(), 1, "inputs must be coprime");
    let inv = mod_inverse(r0[0], p);
    let scale = |v: &[u64]| v.iter().map(|&c| c * inv % p).collect::<Vec<u64>>();
    (scale(&s0), scale(&t0))
}

// --- BigInt polynomials modulo p^N ---

fn big_reduce(v: &mut [BigInt], pn: &BigInt) {
    for c in v.iter_mut() {
        *c = &*c % pn;
        if c.is_negative() {
            *c += pn;
        }
    }
}

fn big_mul(a: &[BigInt], b: &[BigInt], pn: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); (a.len() + b.len()).saturating_sub(1).max(1)];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    big_reduce(&mut out, pn);
    out
}

/// The p-adic evaluation ring (Z/p^N)[x]/(G), G a monic degree-f factor
/// of x^m - 1 whose root is the Teichmueller lift of a primitive m-th
/// root of unity.
pub struct PadicRing {
    p: u64,
    m: u64,
    f: u32,
    precision: u32,
    pn: BigInt,
    /// x^i mod G for i = 0..m, each of length f
    xpows: Vec<Vec<BigInt>>,
}

impl PadicRing {
    pub fn new(p: u64, m: Modulus, precision: u32, q_cap: u64) -> Result<Self> {
        let md = m.get();
        if gcd(p % md.max(1), md) != 1 && md > 1 {
            return Err(Error::NotCoprime { p, m: md });
        }
        let f = multiplicative_order(p, m)? as u32;
        let table = FiniteFieldTable::new(p, f, q_cap)?;
        let q = table.q();

        // minimal polynomial of a primitive m-th root of unity over F_p
        let omega = table.pow_packed(table.generator(), (q - 1) / md);
        let gbar = table.minimal_polynomial(omega);
        debug_assert_eq!(gbar.len() as u32, f + 1);

        // cofactor and Bezout data mod p
        let mut xm1 = vec![0u64; md as usize + 1];
        xm1[0] = p - 1; // -1 mod p
        xm1[md as usize] = 1;
        let (hbar, rem) = poly_divmod(&xm1, &gbar, p);
        assert!(rem.is_empty(), "gbar divides x^m - 1");
        // only the hbar-side Bezout coefficient enters the corrections;
        // the gbar side is recovered by exact division
        let (_, b_bez) = poly_bezout(&gbar, &hbar, p);

        // linear Hensel: lift x^m - 1 = G * H from mod p to mod p^N
        let pn = BigInt::from(p).pow(precision);
        let to_big = |v: &[u64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<BigInt>>();
        let mut g_lift = to_big(&gbar);
        let mut h_lift = to_big(&hbar);
        let mut f_poly = vec![BigInt::zero(); md as usize + 1];
        f_poly[0] = BigInt::from(-1i64);
        f_poly[md as usize] = BigInt::one();
        let big_p = BigInt::from(p);
        let mut pj = big_p.clone();
        for _ in 1..precision {
            // error term e = (F - G*H) / p^j, taken mod p
            let gh = big_mul(&g_lift, &h_lift, &pn);
            let mut err: Vec<BigInt> = f_poly
                .iter()
                .enumerate()
                .map(|(i, c)| c - gh.get(i).cloned().unwrap_or_default())
                .collect();
            big_reduce(&mut err, &pn);
            let e_mod_p: Vec<u64> = err
                .iter()
                .map(|c| {
                    let (quo, rem) = (c / &pj, c % &pj);
                    debug_assert!(rem.is_zero(), "error term divisible by p^j");
                    let digit = quo % &big_p;
                    u64::try_from(&digit).expect("digit fits")
                })
                .collect();
            let mut e = e_mod_p;
            poly_trim(&mut e);
            // u = (b*e mod gbar); v = (e - u*hbar) / gbar
            let u = poly_rem(&poly_mul(&b_bez, &e, p), &gbar, p);
            let (v, vrem) = poly_divmod(
                &sub_polys(&e, &poly_mul(&u, &hbar, p), p),
                &gbar,
                p,
            );
            assert!(vrem.is_empty(), "correction divides exactly");
            for (i, &c) in u.iter().enumerate() {
                g_lift[i] += &pj * BigInt::from(c);
            }
            for (i, &c) in v.iter().enumerate() {
                h_lift[i] += &pj * BigInt::from(c);
            }
            big_reduce(&mut g_lift, &pn);
            g_lift[f as usize] = BigInt::one(); // stays monic
            big_reduce(&mut h_lift, &pn);
            pj *= &big_p;
        }

        // powers of x modulo G
        let deg = f as usize;
        let mut xpows: Vec<Vec<BigInt>> = Vec::with_capacity(md as usize + 1);
        let mut cur = vec![BigInt::zero(); deg];
        cur[0] = BigInt::one();
        xpows.push(cur.clone());
        for _ in 0..md {
            // multiply by x: shift, then reduce the overflow against G
            let top = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for i in 0..deg {
                    cur[i] -= &top * &g_lift[i];
                }
            }
            big_reduce(&mut cur, &pn);
            xpows.push(cur.clone());
        }
        // Teichmueller check: x^m = 1 in the ring
        debug_assert!(xpows[md as usize][0] == BigInt::one());
        debug_assert!(xpows[md as usize][1..].iter().all(|c| c.is_zero()));

        Ok(PadicRing {
            p,
            m: md,
            f,
            precision,
            pn,
            xpows,
        })
    }

    pub fn inertia_degree(&self) -> u32 {
        self.f
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Valuation of the image of a cyclotomic integer, v(p) = 1.
    /// Errors with PrecisionExhausted when the image is 0 mod p^N.
    pub fn valuation(&self, j: &CyclotomicInteger) -> Result<u64> {
        assert_eq!(j.order(), self.m, "order mismatch");
        let mut coords = vec![BigInt::zero(); self.f as usize];
        for (i, &c) in j.coefficients().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let big = BigInt::from(c);
            for (k, x) in self.xpows[i].iter().enumerate() {
                coords[k] += &big * x;
            }
        }
        big_reduce(&mut coords, &self.pn);
        let v = coords
            .iter()
            .filter_map(|c| int_valuation(c, self.p))
            .min();
        v.ok_or(Error::PrecisionExhausted {
            precision: self.precision,
        })
    }
}

/// Valuation of a cyclotomic integer at one place over p, at an explicit
/// working precision.
pub fn padic_valuation(j: &CyclotomicInteger, p: u64, precision: u32) -> Result<PadicWitness> {
    padic_valuation_capped(j, p, precision, DEFAULT_Q_CAP)
}

pub fn padic_valuation_capped(
    j: &CyclotomicInteger,
    p: u64,
    precision: u32,
    q_cap: u64,
) -> Result<PadicWitness> {
    let m = Modulus::new(j.order()).expect("cyclotomic order is positive");
    let ring = PadicRing::new(p, m, precision, q_cap)?;
    let valuation = ring.valuation(j)?;
    Ok(PadicWitness {
        f: ring.inertia_degree() as u64,
        precision,
        valuation,
    })
}

/// Valuation with the default precision ladder: start at 2f + 4 digits,
/// double on exhaustion, give up past 8f.
pub fn padic_valuation_auto(j: &CyclotomicInteger, p: u64, q_cap: u64) -> Result<PadicWitness> {
    let m = Modulus::new(j.order()).expect("cyclotomic order is positive");
    let f = multiplicative_order(p, m)? as u32;
    let ceiling = (8 * f).max(2 * f + 4);
    let mut precision = 2 * f + 4;
    loop {
        match padic_valuation_capped(j, p, precision, q_cap) {
            Err(Error::PrecisionExhausted { .. }) if precision < ceiling => {
                precision = (2 * precision).min(ceiling);
            }
            other => return other,
        }
    }
}
