//! Newton and Hodge polygons of the model F-crystal.
//!
//! Each Frobenius orbit of length h and degree sum t contributes the
//! slope t/h with multiplicity h (times the orbit multiplicity); the
//! Hodge polygon uses the integer slopes 0, 1, 2 with the Hodge numbers
//! as multiplicities. Polygons are stored as sorted slope multisets and
//! compared exactly. Convexity lets the on-or-above check look only at
//! breakpoints of the upper polygon.

use serde::Serialize;

use crate::characters::HodgeNumbers;
use crate::error::Result;
use crate::orbits::orbit_stream_capped;
use crate::residue::{gcd, Modulus};

/// An exact non-negative rational slope in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Slope {
    pub num: u64,
    pub den: u64,
}

impl Slope {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "slope denominator must be positive");
        let g = gcd(num, den).max(1);
        Slope {
            num: num / g,
            den: den / g,
        }
    }

    pub fn integer(v: u64) -> Self {
        Slope { num: v, den: 1 }
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.den == 1
    }

    /// The conjugate slope w - self for weight w; None if self > w.
    pub fn reflect(&self, weight: u64) -> Option<Slope> {
        let scaled = weight.checked_mul(self.den)?;
        if scaled < self.num {
            return None;
        }
        Some(Slope::new(scaled - self.num, self.den))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // cross-multiplication in u128 avoids overflow for any u64 parts
        let left = self.num as u128 * other.den as u128;
        let right = other.num as u128 * self.den as u128;
        left.cmp(&right)
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A polygon given by its multiset of slopes, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct NewtonPolygon {
    segments: Vec<SlopeRun>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeRun {
    pub slope: Slope,
    pub multiplicity: u64,
}

impl NewtonPolygon {
    pub fn from_slopes<I: IntoIterator<Item = (Slope, u64)>>(parts: I) -> Self {
        let mut raw: Vec<(Slope, u64)> = parts.into_iter().filter(|&(_, m)| m > 0).collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut segments: Vec<SlopeRun> = Vec::new();
        for (slope, multiplicity) in raw {
            match segments.last_mut() {
                Some(last) if last.slope == slope => last.multiplicity += multiplicity,
                _ => segments.push(SlopeRun {
                    slope,
                    multiplicity,
                }),
            }
        }
        NewtonPolygon { segments }
    }

    pub fn segments(&self) -> &[SlopeRun] {
        &self.segments
    }

    /// Total horizontal length (= rank of the crystal).
    pub fn total_multiplicity(&self) -> u64 {
        self.segments.iter().map(|s| s.multiplicity).sum()
    }

    pub fn multiplicity_of(&self, slope: Slope) -> u64 {
        self.segments
            .iter()
            .find(|s| s.slope == slope)
            .map_or(0, |s| s.multiplicity)
    }

    pub fn all_slopes_one(&self) -> bool {
        self.segments.len() == 1 && self.segments[0].slope.is_one()
    }

    /// Multiplicity of s equals multiplicity of (weight - s) for every s.
    pub fn is_symmetric(&self, weight: u64) -> bool {
        self.segments.iter().all(|run| {
            run.slope
                .reflect(weight)
                .is_some_and(|r| self.multiplicity_of(r) == run.multiplicity)
        })
    }

    /// Height at integer abscissa x: the sum of the x smallest slopes,
    /// as an exact fraction (num, den).
    fn height_at(&self, x: u64) -> (u128, u128) {
        let mut remaining = x;
        let mut num: u128 = 0;
        let mut den: u128 = 1;
        for run in &self.segments {
            if remaining == 0 {
                break;
            }
            let take = remaining.min(run.multiplicity) as u128;
            let (sn, sd) = (run.slope.num as u128, run.slope.den as u128);
            // num/den += take * sn/sd
            num = num * sd + take * sn * den;
            den *= sd;
            let g = gcd_u128(num, den);
            num /= g;
            den /= g;
            remaining -= take as u64;
        }
        (num, den)
    }

    /// Total rise (height at the right endpoint).
    pub fn total_rise(&self) -> (u128, u128) {
        self.height_at(self.total_multiplicity())
    }

    /// Does self lie on or above `lower` pointwise, with both polygons
    /// drawn from (0,0) with slopes ascending? Convexity of both makes
    /// checking the breakpoints of self (plus both endpoints) complete.
    pub fn lies_on_or_above(&self, lower: &NewtonPolygon) -> bool {
        if self.total_multiplicity() != lower.total_multiplicity() {
            return false;
        }
        let mut x = 0u64;
        let mut breakpoints = vec![0u64];
        for run in &self.segments {
            x += run.multiplicity;
            breakpoints.push(x);
        }
        breakpoints.iter().all(|&bx| {
            let (an, ad) = self.height_at(bx);
            let (bn, bd) = lower.height_at(bx);
            an * bd >= bn * ad
        })
    }

    pub fn endpoints_match(&self, other: &NewtonPolygon) -> bool {
        self.total_multiplicity() == other.total_multiplicity()
            && self.total_rise() == other.total_rise()
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl std::fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for run in &self.segments {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{} x{}", run.slope, run.multiplicity)?;
            first = false;
        }
        if first {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}

/// Newton polygon of the degree-m Fermat surface at p, from the orbit
/// decomposition: each orbit contributes slope (sum tau)/h with
/// multiplicity h.
pub fn newton_slopes(m: Modulus, p: u64) -> Result<NewtonPolygon> {
    newton_slopes_capped(m, p, crate::characters::DEFAULT_MAX_M)
}

pub fn newton_slopes_capped(m: Modulus, p: u64, cap: u64) -> Result<NewtonPolygon> {
    let stream = orbit_stream_capped(m, p, cap)?;
    Ok(NewtonPolygon::from_slopes(
        stream.map(|o| (o.slope(), o.newton_multiplicity())),
    ))
}

/// The Hodge polygon: slope i with multiplicity h^{2-i,i}.
pub fn hodge_polygon(h: &HodgeNumbers) -> NewtonPolygon {
    NewtonPolygon::from_slopes([
        (Slope::integer(0), h.h20),
        (Slope::integer(1), h.h11),
        (Slope::integer(2), h.h02),
    ])
}
