//! Frobenius orbits on the character set.
//!
//! For p coprime to m, Frobenius acts on characters by b -> p*b. An orbit
//! is recorded by its cyclic sequence of Hodge degrees together with the
//! character it starts from. Orbits are canonicalized so that the stored
//! degree sequence is the lexicographically least among its rotations;
//! for orbits of actual characters the base point is the character
//! realizing that rotation (least such character on ties).
//!
//! Discovery walks the characters in lexicographic order with a seen-set
//! bitmap, so at most one orbit is materialized at a time and the orbit
//! order is deterministic: ascending in the least member of each orbit.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::characters::{character_stream, check_cap, FermatCharacter, DEFAULT_MAX_M};
use crate::error::{Error, Result};
use crate::newton::Slope;
use crate::residue::{gcd, Modulus};

/// One Frobenius orbit: a base point (absent for abstract orbits given by
/// a bare degree sequence), the cyclic Hodge-degree sequence, and a
/// multiplicity. Fermat characters occur multiplicity-free, so orbits
/// built from them always carry multiplicity 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusOrbit {
    base: Option<FermatCharacter>,
    degrees: Vec<u8>,
    multiplicity: u64,
}

/// Index of the lexicographically least rotation of a cyclic sequence.
/// Ties are resolved to the smallest index.
fn least_rotation(seq: &[u8]) -> usize {
    let n = seq.len();
    let mut best = 0;
    for cand in 1..n {
        for k in 0..n {
            let a = seq[(cand + k) % n];
            let b = seq[(best + k) % n];
            if a != b {
                if a < b {
                    best = cand;
                }
                break;
            }
        }
    }
    best
}

impl FrobeniusOrbit {
    /// An abstract orbit from a bare degree sequence, stored from its
    /// least rotation.
    pub fn from_degrees(degrees: Vec<u8>, multiplicity: u64) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::EmptyOrbit);
        }
        let start = least_rotation(&degrees);
        let mut rotated = Vec::with_capacity(degrees.len());
        rotated.extend_from_slice(&degrees[start..]);
        rotated.extend_from_slice(&degrees[..start]);
        Ok(FrobeniusOrbit {
            base: None,
            degrees: rotated,
            multiplicity,
        })
    }

    /// Build from the walk of an actual character orbit. `members` is the
    /// cycle c, pc, p^2 c, ... in walk order, `degrees[i]` the Hodge
    /// degree of `members[i]`.
    fn from_walk(members: &[FermatCharacter], degrees: &[u8]) -> Self {
        let n = members.len();
        let start = least_rotation(degrees);
        // choose, among rotations equal to the least one, the least base
        let mut best = start;
        for cand in 0..n {
            if cand == start || members[cand] >= members[best] {
                continue;
            }
            let equal = (0..n).all(|k| degrees[(cand + k) % n] == degrees[(start + k) % n]);
            if equal {
                best = cand;
            }
        }
        let mut rotated = Vec::with_capacity(n);
        rotated.extend_from_slice(&degrees[best..]);
        rotated.extend_from_slice(&degrees[..best]);
        FrobeniusOrbit {
            base: Some(members[best]),
            degrees: rotated,
            multiplicity: 1,
        }
    }

    pub fn base(&self) -> Option<&FermatCharacter> {
        self.base.as_ref()
    }

    /// The cyclic sequence of Hodge degrees, starting at the base point.
    pub fn degrees(&self) -> &[u8] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        false // orbits have length >= 1 by construction
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn degree_sum(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    /// Newton slope of the orbit: the average Hodge degree over the cycle.
    pub fn slope(&self) -> Slope {
        Slope::new(self.degree_sum(), self.len() as u64)
    }

    /// A supersingular orbit has slope exactly 1.
    pub fn is_supersingular(&self) -> bool {
        self.degree_sum() == self.len() as u64
    }

    /// Multiplicity contributed to the Newton polygon: length times dim.
    pub fn newton_multiplicity(&self) -> u64 {
        self.len() as u64 * self.multiplicity
    }
}

impl Serialize for FrobeniusOrbit {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("FrobeniusOrbit", 4)?;
        st.serialize_field("base", &self.base)?;
        st.serialize_field("tau", &self.degrees)?;
        st.serialize_field("length", &self.degrees.len())?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

fn ensure_coprime(p: u64, m: Modulus) -> Result<()> {
    if gcd(p, m.get()) != 1 {
        return Err(Error::NotCoprime { p, m: m.get() });
    }
    Ok(())
}

/// Walk the full cycle of c under multiplication by p.
fn walk(c: FermatCharacter, p: u64) -> (Vec<FermatCharacter>, Vec<u8>) {
    let mut members = vec![c];
    let mut degrees = vec![c.hodge_degree()];
    let mut cur = c.scaled(p);
    while cur != c {
        degrees.push(cur.hodge_degree());
        members.push(cur);
        cur = cur.scaled(p);
    }
    (members, degrees)
}

/// The Frobenius orbit through one character.
pub fn orbit_of(c: &FermatCharacter, p: u64) -> Result<FrobeniusOrbit> {
    ensure_coprime(p, c.modulus())?;
    let (members, degrees) = walk(*c, p);
    Ok(FrobeniusOrbit::from_walk(&members, &degrees))
}

/// Fixed-size bitmap over (b0, b1, b2) triples; b3 is determined.
struct SeenSet {
    m: u64,
    bits: Vec<u64>,
}

impl SeenSet {
    fn new(m: u64) -> Self {
        let size = (m * m * m + 63) / 64;
        SeenSet {
            m,
            bits: vec![0; size as usize],
        }
    }

    fn index(&self, c: &FermatCharacter) -> u64 {
        let [b0, b1, b2, _] = c.components();
        (b0 * self.m + b1) * self.m + b2
    }

    fn insert(&mut self, c: &FermatCharacter) -> bool {
        let i = self.index(c);
        let (word, bit) = ((i / 64) as usize, i % 64);
        let fresh = self.bits[word] & (1 << bit) == 0;
        self.bits[word] |= 1 << bit;
        fresh
    }

    fn contains(&self, c: &FermatCharacter) -> bool {
        let i = self.index(c);
        self.bits[(i / 64) as usize] & (1 << (i % 64)) != 0
    }
}

/// Streaming orbit discovery over the whole character set.
pub struct OrbitStream {
    chars: crate::characters::CharacterIter,
    seen: SeenSet,
    p: u64,
}

impl Iterator for OrbitStream {
    type Item = FrobeniusOrbit;

    fn next(&mut self) -> Option<FrobeniusOrbit> {
        loop {
            let c = self.chars.next()?;
            if self.seen.contains(&c) {
                continue;
            }
            let (members, degrees) = walk(c, self.p);
            for member in &members {
                self.seen.insert(member);
            }
            return Some(FrobeniusOrbit::from_walk(&members, &degrees));
        }
    }
}

/// Stream the orbits of the degree-m surface under Frobenius at p, in
/// ascending order of each orbit's least member. At most one orbit is in
/// memory at a time beyond the seen-set bitmap.
pub fn orbit_stream(m: Modulus, p: u64) -> Result<OrbitStream> {
    orbit_stream_capped(m, p, DEFAULT_MAX_M)
}

pub fn orbit_stream_capped(m: Modulus, p: u64, cap: u64) -> Result<OrbitStream> {
    check_cap(m, cap)?;
    ensure_coprime(p, m)?;
    Ok(OrbitStream {
        chars: character_stream(m),
        seen: SeenSet::new(m.get()),
        p,
    })
}

/// All orbits, collected and sorted by canonical base point. Orbits
/// partition the character set, so the lengths (times multiplicities)
/// sum to b_2.
pub fn all_orbits(m: Modulus, p: u64) -> Result<Vec<FrobeniusOrbit>> {
    all_orbits_capped(m, p, DEFAULT_MAX_M)
}

pub fn all_orbits_capped(m: Modulus, p: u64, cap: u64) -> Result<Vec<FrobeniusOrbit>> {
    let mut orbits: Vec<FrobeniusOrbit> = orbit_stream_capped(m, p, cap)?.collect();
    orbits.sort_by(|a, b| a.base.cmp(&b.base));
    Ok(orbits)
}

/// Orbits of a character subset closed under the Frobenius action
/// (e.g. the invariant characters of a quotient surface).
pub fn orbits_in_subset(
    subset: &crate::characters::CharacterSet,
    p: u64,
) -> Result<Vec<FrobeniusOrbit>> {
    ensure_coprime(p, subset.modulus())?;
    let chars = subset.characters();
    let mut seen = vec![false; chars.len()];
    let mut orbits = Vec::new();
    for start in 0..chars.len() {
        if seen[start] {
            continue;
        }
        let (members, degrees) = walk(chars[start], p);
        for member in &members {
            let idx = chars
                .binary_search(member)
                .expect("subset must be closed under the Frobenius action");
            seen[idx] = true;
        }
        orbits.push(FrobeniusOrbit::from_walk(&members, &degrees));
    }
    orbits.sort_by(|a, b| a.base.cmp(&b.base));
    Ok(orbits)
}
