//! Combinatorial invariants of Fermat surfaces.
//!
//! The diagonal group of the degree-m Fermat surface acts on H^2 with a
//! multiplicity-free character decomposition, so everything the crystal
//! structure knows is carried by finite data: the character set, its
//! Hodge degrees, and the permutation induced by Frobenius. This crate
//! computes what that data determines:
//!
//! * character enumeration, Hodge numbers, invariant characters of
//!   quotient surfaces ([`characters`]);
//! * Frobenius orbits and their degree cycles ([`orbits`]);
//! * Newton polygons, supersingularity, the sigma_0 invariant, and the
//!   Neron-Severi discriminant (-1)^(b2-1) p^(2 sigma_0) ([`newton`],
//!   [`sigma0`], [`analyze`]);
//! * model F-crystals of general combinatorial types and Hecke
//!   algebraic-part exponent data ([`crystal`]);
//! * Dieudonne presentations of the formal Brauer group per orbit
//!   ([`dieudonne`]);
//! * an independent finite-field oracle measuring Newton slopes as
//!   p-adic valuations of Jacobi sums ([`jacobi`], [`padic`]).
//!
//! Hot loops (character enumeration, Jacobi summation, per-orbit
//! reductions) run data-parallel under the default `parallel` feature
//! and fall back to identical sequential sweeps without it.

pub mod analyze;
pub mod characters;
pub mod crystal;
pub mod cyclotomic;
pub mod dieudonne;
pub mod error;
pub mod fq;
pub mod jacobi;
pub mod newton;
pub mod orbits;
pub mod padic;
pub mod residue;
pub mod sigma0;

pub use analyze::{
    analyze, analyze_capped, analyze_quotient, disc_neron_severi, disc_neron_severi_capped,
    is_supersingular, is_supersingular_capped, CrystalSummary, NeronSeveriDisc, QuotientSummary,
    SupersingularReason, SupersingularVerdict,
};
pub use characters::{
    b2, character_stream, enumerate_characters, enumerate_characters_capped,
    enumerate_characters_seq, geometric_genus, hodge_numbers, invariant_characters, CharacterSet,
    FermatCharacter, HodgeNumbers, DEFAULT_MAX_M,
};
pub use crystal::{
    fermat_conjugation, hecke_algebraic_part, model_crystal, CrystalModel, HeckeAlgebraicPart,
    TypeDatum,
};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicInteger};
pub use dieudonne::{
    formal_group_dimension, formal_group_presentation, DieudonnePresentation, Relation,
    RelationRhs,
};
pub use error::{Error, Result};
pub use fq::FiniteFieldTable;
pub use jacobi::{
    jacobi_eigenvalue, jacobi_eigenvalue_seq, slope_check, slope_check_capped, SlopeCheckEntry,
    SlopeCheckReport,
};
pub use newton::{hodge_polygon, newton_slopes, newton_slopes_capped, NewtonPolygon, Slope};
pub use orbits::{all_orbits, all_orbits_capped, orbit_of, orbit_stream, FrobeniusOrbit};
pub use padic::{padic_valuation, padic_valuation_auto, PadicRing, PadicWitness, DEFAULT_Q_CAP};
pub use residue::{contains_minus_one, multiplicative_order, Modulus, Residue};
pub use sigma0::{
    brute_force_sigma0, brute_force_sigma0_bounded, sigma0_trace, Sigma0Trace,
    DEFAULT_ORACLE_BOUND,
};
