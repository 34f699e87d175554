//! The character set of a degree-m Fermat surface.
//!
//! The diagonal automorphism group acts on H^2 with multiplicity-free
//! character decomposition. The characters that occur are the 4-tuples
//! (b0, b1, b2, b3) of residues mod m with b0 + b1 + b2 + b3 = 0 and
//! either all components nonzero or all zero; the all-zero character is
//! the hyperplane class. See Katz, "On the intersection matrix of a
//! hypersurface", Ann. Sci. ENS 2 (1969).
//!
//! Each nonzero character carries a Hodge degree
//! tau(b) = (1/m) * sum(<b_i>) - 1 in {0, 1, 2}, where <.> is the
//! canonical lift; the zero character has tau = 1. Conjugation b -> -b
//! satisfies tau(-b) = 2 - tau(b).
//!
//! Enumeration is in lexicographic order on (b0, b1, b2, b3) and is
//! deterministic. With the `parallel` feature the outer b0 loop is
//! partitioned across threads and the per-b0 blocks are concatenated in
//! order, which reproduces the sequential sweep exactly.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::residue::Modulus;

/// Default enumeration cap on m. |T| grows like m^3, so m = 200 already
/// means ~7.8 million characters.
pub const DEFAULT_MAX_M: u64 = 200;

/// An eigencharacter of the diagonal group on H^2: four residues mod m
/// summing to zero, all nonzero unless all are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FermatCharacter {
    m: u64,
    components: [u64; 4],
}

impl FermatCharacter {
    /// Validating constructor; reduces the entries mod m first.
    pub fn new(m: Modulus, parts: [i64; 4]) -> Result<Self> {
        let md = m.get() as i64;
        let mut components = [0u64; 4];
        for (slot, &p) in components.iter_mut().zip(parts.iter()) {
            let mut v = p % md;
            if v < 0 {
                v += md;
            }
            *slot = v as u64;
        }
        let sum: u64 = components.iter().sum();
        if sum % m.get() != 0 {
            return Err(Error::InvalidCharacter(format!(
                "components {components:?} do not sum to 0 mod {m}"
            )));
        }
        let zeros = components.iter().filter(|&&c| c == 0).count();
        if zeros != 0 && zeros != 4 {
            return Err(Error::InvalidCharacter(format!(
                "components {components:?} mix zero and nonzero entries"
            )));
        }
        Ok(FermatCharacter {
            m: m.get(),
            components,
        })
    }

    /// The all-zero character (the hyperplane class).
    pub fn zero(m: Modulus) -> Self {
        FermatCharacter {
            m: m.get(),
            components: [0; 4],
        }
    }

    pub(crate) fn from_reduced(m: u64, components: [u64; 4]) -> Self {
        debug_assert!(components.iter().all(|&c| c < m.max(1)));
        debug_assert_eq!(components.iter().sum::<u64>() % m, 0);
        FermatCharacter { m, components }
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.m).expect("modulus is valid by construction")
    }

    pub fn components(&self) -> [u64; 4] {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components == [0; 4]
    }

    /// Hodge degree in {0, 1, 2}: (1/m) * sum of canonical lifts, minus 1,
    /// for nonzero characters; 1 for the zero character.
    pub fn hodge_degree(&self) -> u8 {
        if self.is_zero() {
            return 1;
        }
        let sum: u64 = self.components.iter().sum();
        debug_assert_eq!(sum % self.m, 0);
        (sum / self.m - 1) as u8
    }

    /// Complex conjugation: componentwise negation mod m.
    pub fn conjugate(&self) -> Self {
        let mut components = [0u64; 4];
        for (slot, &c) in components.iter_mut().zip(self.components.iter()) {
            *slot = if c == 0 { 0 } else { self.m - c };
        }
        FermatCharacter {
            m: self.m,
            components,
        }
    }

    /// Componentwise multiplication by k mod m; the Frobenius action for
    /// k = p coprime to m.
    pub fn scaled(&self, k: u64) -> Self {
        let k = k % self.m;
        let mut components = [0u64; 4];
        for (slot, &c) in components.iter_mut().zip(self.components.iter()) {
            *slot = c * k % self.m;
        }
        FermatCharacter {
            m: self.m,
            components,
        }
    }

    /// Pairing with a subgroup generator (a0..a3): sum of b_i * a_i mod m.
    /// Well defined modulo the diagonal because the components sum to 0.
    pub fn pairs_to_zero(&self, generator: &[u64; 4]) -> bool {
        let mut acc: u64 = 0;
        for (b, a) in self.components.iter().zip(generator.iter()) {
            acc = (acc + b * (a % self.m)) % self.m;
        }
        acc == 0
    }
}

impl Serialize for FermatCharacter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        for c in &self.components {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl std::fmt::Display for FermatCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.components;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// The full character set T of one Fermat surface, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSet {
    m: u64,
    characters: Vec<FermatCharacter>,
}

impl CharacterSet {
    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.m).expect("modulus is valid by construction")
    }

    pub fn characters(&self) -> &[FermatCharacter] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FermatCharacter> {
        self.characters.iter()
    }
}

/// Hodge numbers (h^{2,0}, h^{1,1}, h^{0,2}) of H^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeNumbers {
    pub h20: u64,
    pub h11: u64,
    pub h02: u64,
}

impl HodgeNumbers {
    pub fn total(&self) -> u64 {
        self.h20 + self.h11 + self.h02
    }

    /// Count of characters in each Hodge degree.
    pub(crate) fn from_degree_counts(counts: [u64; 3]) -> Self {
        HodgeNumbers {
            h20: counts[0],
            h11: counts[1],
            h02: counts[2],
        }
    }
}

/// Closed form for |T| = b_2 of the degree-m Fermat surface:
/// m^3 - 4m^2 + 6m - 2, also correct for m = 1 and m = 2.
pub fn b2(m: Modulus) -> u64 {
    let m = m.get();
    // grouped so the intermediate values stay non-negative for small m
    (m * m * m + 6 * m) - (4 * m * m + 2)
}

/// Geometric genus p_g = h^{2,0} = (m-1)(m-2)(m-3)/6 for m >= 3, else 0.
pub fn geometric_genus(m: Modulus) -> u64 {
    let m = m.get();
    if m < 3 {
        return 0;
    }
    (m - 1) * (m - 2) * (m - 3) / 6
}

pub(crate) fn check_cap(m: Modulus, cap: u64) -> Result<()> {
    if m.get() > cap {
        return Err(Error::CapExceeded { m: m.get(), cap });
    }
    Ok(())
}

/// Streaming lexicographic enumeration of T. The all-zero character comes
/// first (it is lexicographically least); then all (b0, b1, b2, b3) with
/// every component nonzero and b3 = -(b0 + b1 + b2) != 0, ordered by
/// (b0, b1, b2). Since b3 is determined by the first three components,
/// this is the lexicographic order on full 4-tuples.
pub struct CharacterIter {
    m: u64,
    // next (b0, b1, b2) to try; b0 == m signals exhaustion
    next: [u64; 3],
    zero_emitted: bool,
}

impl CharacterIter {
    fn new(m: u64) -> Self {
        CharacterIter {
            m,
            next: [1, 1, 1],
            zero_emitted: false,
        }
    }

    fn advance(&mut self) {
        let m = self.m;
        self.next[2] += 1;
        if self.next[2] == m {
            self.next[2] = 1;
            self.next[1] += 1;
            if self.next[1] == m {
                self.next[1] = 1;
                self.next[0] += 1;
            }
        }
    }
}

impl Iterator for CharacterIter {
    type Item = FermatCharacter;

    fn next(&mut self) -> Option<FermatCharacter> {
        if !self.zero_emitted {
            self.zero_emitted = true;
            return Some(FermatCharacter::from_reduced(self.m, [0; 4]));
        }
        let m = self.m;
        while self.next[0] < m {
            let [b0, b1, b2] = self.next;
            self.advance();
            let b3 = (3 * m - b0 - b1 - b2) % m;
            if b3 != 0 {
                return Some(FermatCharacter::from_reduced(m, [b0, b1, b2, b3]));
            }
        }
        None
    }
}

/// Lazy lexicographic stream over T; never materializes the set.
pub fn character_stream(m: Modulus) -> CharacterIter {
    CharacterIter::new(m.get())
}

/// All characters with first component b0, in lexicographic order.
fn block_for_b0(m: u64, b0: u64) -> Vec<FermatCharacter> {
    let mut out = Vec::new();
    for b1 in 1..m {
        for b2 in 1..m {
            let b3 = (3 * m - b0 - b1 - b2) % m;
            if b3 != 0 {
                out.push(FermatCharacter::from_reduced(m, [b0, b1, b2, b3]));
            }
        }
    }
    out
}

/// Reference sequential enumeration of T with the default cap.
pub fn enumerate_characters_seq(m: Modulus) -> Result<CharacterSet> {
    enumerate_characters_seq_capped(m, DEFAULT_MAX_M)
}

pub fn enumerate_characters_seq_capped(m: Modulus, cap: u64) -> Result<CharacterSet> {
    check_cap(m, cap)?;
    Ok(CharacterSet {
        m: m.get(),
        characters: character_stream(m).collect(),
    })
}

/// Enumerate T with the default cap. Dispatches to the data-parallel
/// sweep when the `parallel` feature is enabled; the output is identical
/// to [`enumerate_characters_seq`] either way.
pub fn enumerate_characters(m: Modulus) -> Result<CharacterSet> {
    enumerate_characters_capped(m, DEFAULT_MAX_M)
}

pub fn enumerate_characters_capped(m: Modulus, cap: u64) -> Result<CharacterSet> {
    check_cap(m, cap)?;
    let md = m.get();

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let blocks: Vec<Vec<FermatCharacter>> =
            (1..md).into_par_iter().map(|b0| block_for_b0(md, b0)).collect();
        let mut characters = Vec::with_capacity(b2(m) as usize);
        characters.push(FermatCharacter::from_reduced(md, [0; 4]));
        for block in blocks {
            characters.extend(block);
        }
        Ok(CharacterSet { m: md, characters })
    }

    #[cfg(not(feature = "parallel"))]
    {
        let _ = block_for_b0; // sequential build uses the stream directly
        Ok(CharacterSet {
            m: md,
            characters: character_stream(m).collect(),
        })
    }
}

/// Hodge numbers of a character (sub)set: h^{2-i,i} = #{c : tau(c) = i}.
pub fn hodge_numbers(set: &CharacterSet) -> HodgeNumbers {
    let mut counts = [0u64; 3];
    for c in set.iter() {
        counts[c.hodge_degree() as usize] += 1;
    }
    HodgeNumbers::from_degree_counts(counts)
}

/// The subset of characters pairing to zero with every generator of a
/// subgroup of the diagonal group. Generators are 4-tuples mod m taken
/// modulo the diagonal; the pairing is well defined on T because every
/// character's components sum to zero.
pub fn invariant_characters(set: &CharacterSet, subgroup: &[[u64; 4]]) -> CharacterSet {
    let characters = set
        .iter()
        .filter(|c| subgroup.iter().all(|g| c.pairs_to_zero(g)))
        .copied()
        .collect();
    CharacterSet {
        m: set.m,
        characters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    /// Brute-force oracle: filter all of (Z/m)^4 directly.
    fn brute_force_set(md: u64) -> Vec<[u64; 4]> {
        let mut out = vec![[0, 0, 0, 0]];
        for b0 in 1..md {
            for b1 in 1..md {
                for b2 in 1..md {
                    for b3 in 1..md {
                        if (b0 + b1 + b2 + b3) % md == 0 {
                            out.push([b0, b1, b2, b3]);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for md in 1..12u64 {
            let set = enumerate_characters(m(md)).unwrap();
            let oracle = brute_force_set(md);
            assert_eq!(set.len(), oracle.len(), "m = {md}");
            let got: Vec<[u64; 4]> = set.iter().map(|c| c.components()).collect();
            let mut sorted_oracle = oracle.clone();
            sorted_oracle.sort();
            assert_eq!(got, sorted_oracle, "m = {md}: lexicographic order");
        }
    }

    #[test]
    fn cardinalities() {
        // brute-force counts frozen: m=5 -> 53, m=3 -> 7, m=1 -> 1
        assert_eq!(enumerate_characters(m(5)).unwrap().len(), 53);
        assert_eq!(enumerate_characters(m(3)).unwrap().len(), 7);
        let trivial = enumerate_characters(m(1)).unwrap();
        assert_eq!(trivial.characters(), &[FermatCharacter::zero(m(1))]);
        // closed form agrees for every m up to 30
        for md in 2..=30u64 {
            let set = enumerate_characters(m(md)).unwrap();
            assert_eq!(set.len() as u64, b2(m(md)), "m = {md}");
        }
    }

    #[test]
    fn parallel_equals_sequential() {
        for md in [1, 2, 3, 7, 12, 25] {
            assert_eq!(
                enumerate_characters(m(md)).unwrap(),
                enumerate_characters_seq(m(md)).unwrap()
            );
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_characters_capped(m(300), 200),
            Err(Error::CapExceeded { m: 300, cap: 200 })
        );
        assert!(enumerate_characters_capped(m(13), 12).is_err());
        assert!(enumerate_characters_capped(m(13), 13).is_ok());
    }

    #[test]
    fn hodge_degrees() {
        let c = FermatCharacter::new(m(5), [1, 1, 1, 2]).unwrap();
        assert_eq!(c.hodge_degree(), 0);
        assert_eq!(FermatCharacter::zero(m(5)).hodge_degree(), 1);
        // (4,4,4,3): lifts sum to 15, 15/5 - 1 = 2
        let cc = FermatCharacter::new(m(5), [4, 4, 4, 3]).unwrap();
        assert_eq!(cc.hodge_degree(), 2);
        assert_eq!(c.conjugate(), cc);
    }

    #[test]
    fn conjugation_is_an_involution_with_degree_flip() {
        for md in 1..=20u64 {
            for c in character_stream(m(md)) {
                assert_eq!(c.conjugate().conjugate(), c);
                if !c.is_zero() {
                    assert_eq!(c.conjugate().hodge_degree(), 2 - c.hodge_degree());
                }
            }
        }
    }

    #[test]
    fn set_is_closed_under_negation_and_duplicate_free() {
        for md in 1..=15u64 {
            let set = enumerate_characters(m(md)).unwrap();
            let mut sorted: Vec<_> = set.characters().to_vec();
            sorted.dedup();
            assert_eq!(sorted.len(), set.len());
            for c in set.iter() {
                assert!(set.characters().binary_search(&c.conjugate()).is_ok());
            }
        }
    }

    #[test]
    fn hodge_number_examples() {
        let h5 = hodge_numbers(&enumerate_characters(m(5)).unwrap());
        assert_eq!((h5.h20, h5.h11, h5.h02), (4, 45, 4));
        let h3 = hodge_numbers(&enumerate_characters(m(3)).unwrap());
        assert_eq!((h3.h20, h3.h11, h3.h02), (0, 7, 0));
        // m = 4 frozen from the brute-force oracle
        let h4 = hodge_numbers(&enumerate_characters(m(4)).unwrap());
        assert_eq!((h4.h20, h4.h11, h4.h02), (1, 20, 1));
    }

    #[test]
    fn genus_closed_form() {
        for md in 3..=30u64 {
            let h = hodge_numbers(&enumerate_characters(m(md)).unwrap());
            assert_eq!(h.h20, h.h02, "m = {md}");
            assert_eq!(h.h20, geometric_genus(m(md)), "m = {md}");
            assert_eq!(h.total(), b2(m(md)), "m = {md}");
        }
    }

    #[test]
    fn invariant_subset_examples() {
        let set = enumerate_characters(m(3)).unwrap();
        // trivial subgroup: unchanged
        assert_eq!(invariant_characters(&set, &[]), set);
        // generator (1,2,0,0): characters with b0 = b1 mod 3
        let inv = invariant_characters(&set, &[[1, 2, 0, 0]]);
        let expect: Vec<[u64; 4]> = vec![[0, 0, 0, 0], [1, 1, 2, 2], [2, 2, 1, 1]];
        let got: Vec<[u64; 4]> = inv.iter().map(|c| c.components()).collect();
        assert_eq!(got, expect);
        // brute-force pairing oracle for the same subgroup
        let oracle: Vec<[u64; 4]> = set
            .iter()
            .filter(|c| {
                let b = c.components();
                (b[0] + 2 * b[1]) % 3 == 0
            })
            .map(|c| c.components())
            .collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn full_dual_group_leaves_diagonal_invariants() {
        // generators spanning the full pairing lattice mod the diagonal
        let gens = [[1, 2, 0, 0], [0, 1, 2, 0], [0, 0, 1, 2]];
        let set3 = enumerate_characters(m(3)).unwrap();
        let inv3 = invariant_characters(&set3, &gens);
        assert_eq!(inv3.len(), 1); // only the zero character
        let set4 = enumerate_characters(m(4)).unwrap();
        let gens4 = [[1, 3, 0, 0], [0, 1, 3, 0], [0, 0, 1, 3]];
        let inv4 = invariant_characters(&set4, &gens4);
        // orthogonal to everything = constant tuples (d,d,d,d) in T
        let got: Vec<[u64; 4]> = inv4.iter().map(|c| c.components()).collect();
        assert_eq!(
            got,
            vec![[0, 0, 0, 0], [1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 3]]
        );
    }

    #[test]
    fn invariants_monotone_and_idempotent() {
        let set = enumerate_characters(m(6)).unwrap();
        let g1 = [[1, 5, 0, 0]];
        let g2 = [[1, 5, 0, 0], [0, 2, 4, 0]];
        let inv1 = invariant_characters(&set, &g1);
        let inv2 = invariant_characters(&set, &g2);
        assert!(inv2.len() <= inv1.len());
        for c in inv2.iter() {
            assert!(inv1.characters().contains(c));
        }
        // repeating a generator changes nothing
        let rep = invariant_characters(&set, &[[1, 5, 0, 0], [1, 5, 0, 0]]);
        assert_eq!(rep, inv1);
    }

    #[test]
    fn rejects_invalid_characters() {
        assert!(FermatCharacter::new(m(5), [1, 1, 1, 1]).is_err()); // sum != 0
        assert!(FermatCharacter::new(m(5), [0, 1, 2, 2]).is_err()); // mixed zero
        assert!(FermatCharacter::new(m(5), [-1, -1, -1, 3]).is_ok()); // (4,4,4,3)
    }

    #[test]
    fn serializes_as_plain_array() {
        let c = FermatCharacter::new(m(5), [1, 1, 1, 2]).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "[1,1,1,2]");
    }
}
