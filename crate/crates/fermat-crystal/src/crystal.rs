//! The combinatorial type of a CM variety and its model F-crystal.
//!
//! A type is a finite set R with a permutation sigma, a degree function
//! tau: R -> {0..n}, and a multiplicity function dim. The model crystal
//! is the free Witt-vector module on R (with dim copies of each element)
//! and Frobenius F[r] = p^{tau(r)} [sigma(r)]. Newton slopes are the
//! averages of tau over sigma-cycles; dividing F by p^tau renormalizes
//! the crystal to a unit-root one. The same data determines the
//! algebraic part of a Hecke character of weight n whenever
//! tau(iota(r)) = n - tau(r) for the supplied conjugation involution.

use serde::Serialize;

use crate::characters::{enumerate_characters_capped, DEFAULT_MAX_M};
use crate::error::{Error, Result};
use crate::newton::{NewtonPolygon, Slope};
use crate::residue::Modulus;

/// A finite ordered set with permutation, degrees, multiplicities, and a
/// weight. dim must be constant along sigma-cycles because Frobenius
/// maps each isotypical block isomorphically onto the next.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeDatum {
    labels: Vec<String>,
    sigma: Vec<usize>,
    degrees: Vec<u8>,
    dims: Vec<u64>,
    weight: u8,
}

impl TypeDatum {
    pub fn new(
        labels: Vec<String>,
        sigma: Vec<usize>,
        degrees: Vec<u8>,
        dims: Vec<u64>,
        weight: u8,
    ) -> Result<Self> {
        let n = labels.len();
        if sigma.len() != n || degrees.len() != n || dims.len() != n {
            return Err(Error::InvalidTypeDatum(format!(
                "field lengths disagree: {} labels, {} sigma, {} tau, {} dim",
                n,
                sigma.len(),
                degrees.len(),
                dims.len()
            )));
        }
        let mut hit = vec![false; n];
        for &s in &sigma {
            if s >= n || hit[s] {
                return Err(Error::InvalidTypeDatum(
                    "sigma is not a permutation".into(),
                ));
            }
            hit[s] = true;
        }
        if let Some(i) = degrees.iter().position(|&d| d > weight) {
            return Err(Error::InvalidTypeDatum(format!(
                "tau({}) = {} exceeds the weight {}",
                labels[i], degrees[i], weight
            )));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidTypeDatum("dim must be positive".into()));
        }
        let datum = TypeDatum {
            labels,
            sigma,
            degrees,
            dims,
            weight,
        };
        for cycle in datum.cycles() {
            let d0 = datum.dims[cycle[0]];
            if cycle.iter().any(|&i| datum.dims[i] != d0) {
                return Err(Error::InvalidTypeDatum(format!(
                    "dim is not constant on the sigma-cycle of {}",
                    datum.labels[cycle[0]]
                )));
            }
        }
        Ok(datum)
    }

    /// The type of a degree-m Fermat surface at p: the character set with
    /// the Frobenius permutation, Hodge degrees, dim = 1, weight 2.
    pub fn fermat(m: Modulus, p: u64) -> Result<Self> {
        Self::fermat_capped(m, p, DEFAULT_MAX_M)
    }

    pub fn fermat_capped(m: Modulus, p: u64, cap: u64) -> Result<Self> {
        if crate::residue::gcd(p, m.get()) != 1 {
            return Err(Error::NotCoprime { p, m: m.get() });
        }
        let set = enumerate_characters_capped(m, cap)?;
        let chars = set.characters();
        let labels = chars.iter().map(|c| c.to_string()).collect();
        let sigma = chars
            .iter()
            .map(|c| {
                chars
                    .binary_search(&c.scaled(p))
                    .expect("character set is closed under the Frobenius action")
            })
            .collect();
        let degrees = chars.iter().map(|c| c.hodge_degree()).collect();
        let dims = vec![1; chars.len()];
        TypeDatum::new(labels, sigma, degrees, dims, 2)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn weight(&self) -> u8 {
        self.weight
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[u8] {
        &self.degrees
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// The sigma-cycles, each starting from its smallest index, listed in
    /// order of that index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut cycles = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.sigma[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.sigma[cur];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Newton slopes straight from the type: each sigma-cycle contributes
    /// the average degree with multiplicity length * dim.
    pub fn newton_slopes(&self) -> NewtonPolygon {
        NewtonPolygon::from_slopes(self.cycles().into_iter().map(|cycle| {
            let t: u64 = cycle.iter().map(|&i| self.degrees[i] as u64).sum();
            let h = cycle.len() as u64;
            (Slope::new(t, h), h * self.dims[cycle[0]])
        }))
    }
}

/// The model F-crystal of a type: a basis label per copy of each element,
/// the induced permutation, and the p-exponent tau attached to each basis
/// vector. When `unit_root` is set the Frobenius has been renormalized by
/// p^{-tau} and all exponents are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrystalModel {
    pub basis: Vec<String>,
    pub permutation: Vec<usize>,
    pub exponents: Vec<u8>,
    pub unit_root: bool,
}

/// Expand a type into its model crystal, F[r] = p^{tau(r)} [sigma(r)].
pub fn model_crystal(datum: &TypeDatum) -> CrystalModel {
    let mut offsets = Vec::with_capacity(datum.len());
    let mut rank = 0usize;
    for &d in datum.dims() {
        offsets.push(rank);
        rank += d as usize;
    }
    let mut basis = Vec::with_capacity(rank);
    let mut permutation = vec![0usize; rank];
    let mut exponents = Vec::with_capacity(rank);
    for i in 0..datum.len() {
        let dim = datum.dims()[i] as usize;
        for copy in 0..dim {
            if dim == 1 {
                basis.push(datum.labels()[i].clone());
            } else {
                basis.push(format!("{}#{}", datum.labels()[i], copy));
            }
            // copy k of element i maps to copy k of sigma(i); dim is
            // constant on cycles so the target copy exists
            permutation[offsets[i] + copy] = offsets[datum.sigma()[i]] + copy;
            exponents.push(datum.degrees()[i]);
        }
    }
    CrystalModel {
        basis,
        permutation,
        exponents,
        unit_root: false,
    }
}

impl CrystalModel {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Newton slopes from the permutation cycles of the model.
    pub fn newton_slopes(&self) -> NewtonPolygon {
        let mut seen = vec![false; self.rank()];
        let mut parts = Vec::new();
        for start in 0..self.rank() {
            if seen[start] {
                continue;
            }
            let mut t = 0u64;
            let mut h = 0u64;
            let mut cur = start;
            loop {
                seen[cur] = true;
                t += self.exponents[cur] as u64;
                h += 1;
                cur = self.permutation[cur];
                if cur == start {
                    break;
                }
            }
            parts.push((Slope::new(t, h), h));
        }
        NewtonPolygon::from_slopes(parts)
    }

    /// The unit-root renormalization F' = p^{-tau} F: same basis and
    /// permutation, all exponents zero.
    pub fn unit_root_form(&self) -> CrystalModel {
        CrystalModel {
            basis: self.basis.clone(),
            permutation: self.permutation.clone(),
            exponents: vec![0; self.rank()],
            unit_root: true,
        }
    }
}

/// The exponent data of the algebraic part of a Hecke character of
/// weight n attached to a type: r maps to tau(r), legitimate exactly
/// when tau(iota(r)) = n - tau(r) for the conjugation involution iota.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeAlgebraicPart {
    pub exponents: Vec<u8>,
    pub weight: u8,
    pub infinity_type_certified: bool,
}

pub fn hecke_algebraic_part(datum: &TypeDatum, iota: &[usize]) -> Result<HeckeAlgebraicPart> {
    let n = datum.len();
    if iota.len() != n {
        return Err(Error::InvalidTypeDatum(format!(
            "iota has {} entries for {} elements",
            iota.len(),
            n
        )));
    }
    for i in 0..n {
        if iota[i] >= n || iota[iota[i]] != i {
            return Err(Error::InvalidTypeDatum(
                "iota is not an involution".into(),
            ));
        }
    }
    let offenders: Vec<String> = (0..n)
        .filter(|&i| datum.degrees()[iota[i]] != datum.weight() - datum.degrees()[i])
        .map(|i| datum.labels()[i].clone())
        .collect();
    if !offenders.is_empty() {
        return Err(Error::InfinityTypeViolation { offenders });
    }
    Ok(HeckeAlgebraicPart {
        exponents: datum.degrees().to_vec(),
        weight: datum.weight(),
        infinity_type_certified: true,
    })
}

/// The conjugation involution of a Fermat type (characters negate).
pub fn fermat_conjugation(m: Modulus, cap: u64) -> Result<Vec<usize>> {
    let set = enumerate_characters_capped(m, cap)?;
    let chars = set.characters();
    Ok(chars
        .iter()
        .map(|c| {
            chars
                .binary_search(&c.conjugate())
                .expect("character set is closed under negation")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::newton_slopes;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn rank_one_model() {
        let t = TypeDatum::new(vec!["r".into()], vec![0], vec![1], vec![1], 2).unwrap();
        let model = model_crystal(&t);
        assert_eq!(model.basis, vec!["r"]);
        assert_eq!(model.permutation, vec![0]);
        assert_eq!(model.exponents, vec![1]);
        assert!(!model.unit_root);
    }

    #[test]
    fn fermat_model_contains_the_degree_seven_cycle() {
        let t = TypeDatum::fermat(m(7), 3).unwrap();
        let model = model_crystal(&t);
        // locate the basis vector of (1,1,1,4) and walk its cycle
        let start = model
            .basis
            .iter()
            .position(|l| l == "(1,1,1,4)")
            .expect("character is in the basis");
        let mut seq = Vec::new();
        let mut cur = start;
        loop {
            seq.push(model.exponents[cur]);
            cur = model.permutation[cur];
            if cur == start {
                break;
            }
        }
        assert_eq!(seq.len(), 6);
        // the walk is a rotation of (0,1,0,2,1,2)
        let reference: Vec<u8> = vec![0, 1, 0, 2, 1, 2];
        let doubled: Vec<u8> = [reference.clone(), reference].concat();
        assert!(doubled.windows(6).any(|w| w == seq.as_slice()));
    }

    #[test]
    fn model_slopes_match_type_slopes() {
        for (md, p) in [(5u64, 2u64), (5, 11), (7, 3), (13, 5)] {
            let t = TypeDatum::fermat(m(md), p).unwrap();
            let from_type = t.newton_slopes();
            let from_model = model_crystal(&t).newton_slopes();
            let from_orbits = newton_slopes(m(md), p).unwrap();
            assert_eq!(from_type, from_model, "m={md} p={p}");
            assert_eq!(from_type, from_orbits, "m={md} p={p}");
        }
    }

    #[test]
    fn unit_root_form_has_slope_zero() {
        let t = TypeDatum::fermat(m(5), 2).unwrap();
        let unit = model_crystal(&t).unit_root_form();
        assert!(unit.unit_root);
        let np = unit.newton_slopes();
        assert_eq!(np.segments().len(), 1);
        assert_eq!(np.segments()[0].slope, Slope::integer(0));
    }

    #[test]
    fn multiplicities_expand_into_copies() {
        let t = TypeDatum::new(
            vec!["x".into(), "y".into()],
            vec![1, 0],
            vec![0, 2],
            vec![2, 2],
            2,
        )
        .unwrap();
        let model = model_crystal(&t);
        assert_eq!(model.rank(), 4);
        assert_eq!(model.basis, vec!["x#0", "x#1", "y#0", "y#1"]);
        // two 2-cycles, each of slope 1
        assert!(model.newton_slopes().all_slopes_one());
    }

    #[test]
    fn dim_must_be_cycle_constant() {
        let err = TypeDatum::new(
            vec!["x".into(), "y".into()],
            vec![1, 0],
            vec![0, 2],
            vec![1, 2],
            2,
        );
        assert!(err.is_err());
    }

    #[test]
    fn sigma_must_be_a_bijection() {
        assert!(TypeDatum::new(
            vec!["x".into(), "y".into()],
            vec![0, 0],
            vec![1, 1],
            vec![1, 1],
            2
        )
        .is_err());
    }

    #[test]
    fn hecke_part_of_fermat_type() {
        let t = TypeDatum::fermat(m(5), 2).unwrap();
        let iota = fermat_conjugation(m(5), DEFAULT_MAX_M).unwrap();
        let part = hecke_algebraic_part(&t, &iota).unwrap();
        assert!(part.infinity_type_certified);
        assert_eq!(part.exponents, t.degrees());
        assert_eq!(part.weight, 2);
    }

    #[test]
    fn constant_half_weight_type_passes_with_identity() {
        let t = TypeDatum::new(
            vec!["x".into(), "y".into()],
            vec![1, 0],
            vec![1, 1],
            vec![1, 1],
            2,
        )
        .unwrap();
        let part = hecke_algebraic_part(&t, &[0, 1]).unwrap();
        assert!(part.infinity_type_certified);
    }

    #[test]
    fn infinity_type_violation_lists_both_points() {
        let t = TypeDatum::new(
            vec!["x".into(), "y".into()],
            vec![1, 0],
            vec![0, 0],
            vec![1, 1],
            2,
        )
        .unwrap();
        let err = hecke_algebraic_part(&t, &[1, 0]).unwrap_err();
        assert_eq!(
            err,
            Error::InfinityTypeViolation {
                offenders: vec!["x".into(), "y".into()]
            }
        );
    }
}
