//! Dieudonne presentations of the formal Brauer group, one orbit at a
//! time.
//!
//! H^2(X, W O_X) is the quotient of H^2_cris tensored over W[F] with the
//! Dieudonne ring D (power series in V, FV = VF = p) by the submodule
//! generated by m - V n whenever F m = p n. On the model crystal of a
//! weight-2 orbit this becomes a rewriting problem:
//!
//! * elimination: a basis vector e_j with tau_j >= 1 satisfies
//!   F e_{j-1}-chains through e_j = V p^{tau_j - 1} e_{j+1};
//!   the surviving generators are the e_j with tau_j = 0;
//! * chaining: F g = e_{next} expands through eliminations to
//!   F g = V^s p^t g' with g' the next surviving generator;
//! * p-reduction: p g' = V F g' substitutes the chain of g' repeatedly;
//!   every substitution raises the V-exponent, and a term whose
//!   V-exponent reaches the truncation bound with p still present is 0
//!   in the V-adically complete module;
//! * absorption: a relation F^c g = g' (no V, no p) whose target appears
//!   on no other right-hand side lets g' be replaced by F^c g.
//!
//! p-reduction runs on the degree-one chained relations before
//! absorption; composing first can strand F-powers of absorbed
//! generators on right-hand sides where the p-rewrite cannot reach them.
//! The final relations contain no p.

use serde::Serialize;

use crate::error::{Error, Result};

/// Right-hand side of a relation F^c g = ...: either zero or V^s g'.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationRhs {
    Zero,
    Term { v_power: u64, target: String },
}

/// One relation of a presentation: F^{f_power} generator = rhs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub f_power: u32,
    pub generator: String,
    pub rhs: RelationRhs,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.f_power == 1 {
            write!(f, "F {}", self.generator)?;
        } else {
            write!(f, "F^{} {}", self.f_power, self.generator)?;
        }
        match &self.rhs {
            RelationRhs::Zero => write!(f, " = 0"),
            RelationRhs::Term { v_power: 0, target } => write!(f, " = {target}"),
            RelationRhs::Term { v_power: 1, target } => write!(f, " = V {target}"),
            RelationRhs::Term { v_power, target } => write!(f, " = V^{v_power} {target}"),
        }
    }
}

/// Generators and F/V-relations of the Dieudonne module of one orbit.
/// Every generator owns exactly one relation; the dimension (the length
/// of M/VM) equals the number of degree-0 entries of the orbit, which is
/// also the sum of the F-powers of the relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DieudonnePresentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
    pub dimension: u64,
    /// True when some chain collapsed to 0 at the V-adic truncation
    /// bound with a positive p-power still attached.
    pub truncation_applied: bool,
}

impl DieudonnePresentation {
    /// Length of M/VM read off the relations: each generator contributes
    /// its F-chain g, Fg, ..., F^{c-1} g.
    pub fn mod_v_length(&self) -> u64 {
        self.relations.iter().map(|r| r.f_power as u64).sum()
    }
}

impl std::fmt::Display for DieudonnePresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "0 (no generators)");
        }
        let parts: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Spreadsheet-style generator labels a, b, ..., z, aa, ab, ...
fn label(mut i: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (i % 26) as u8);
        i /= 26;
        if i == 0 {
            break;
        }
        i -= 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii labels")
}

fn validate_weight_two(degrees: &[u8]) -> Result<()> {
    if degrees.is_empty() {
        return Err(Error::EmptyOrbit);
    }
    if let Some(&d) = degrees.iter().find(|&&d| d > 2) {
        return Err(Error::NonWeightTwo { degree: d });
    }
    Ok(())
}

/// Number of degree-0 entries: the dimension of the formal group.
pub fn formal_group_dimension(degrees: &[u8]) -> Result<u64> {
    validate_weight_two(degrees)?;
    Ok(degrees.iter().filter(|&&d| d == 0).count() as u64)
}

#[derive(Clone, Copy)]
struct Chain {
    v: u64,
    t: u64,
    target: usize, // ordinal of the next generator
}

/// Presentation of the Dieudonne module of a weight-2 orbit given by its
/// cyclic degree sequence.
pub fn formal_group_presentation(degrees: &[u8]) -> Result<DieudonnePresentation> {
    validate_weight_two(degrees)?;
    let h = degrees.len();
    let positions: Vec<usize> = (0..h).filter(|&j| degrees[j] == 0).collect();
    let dimension = positions.len() as u64;
    if positions.is_empty() {
        return Ok(DieudonnePresentation {
            generators: Vec::new(),
            relations: Vec::new(),
            dimension: 0,
            truncation_applied: false,
        });
    }

    // chaining: F g = e_{j+1} expanded through eliminated entries up to
    // the next generator; each eliminated step contributes one V and
    // tau - 1 powers of p
    let gen_ordinal = |pos: usize| positions.binary_search(&pos).ok();
    let chains: Vec<Chain> = positions
        .iter()
        .map(|&gpos| {
            let mut v = 0u64;
            let mut t = 0u64;
            let mut j = (gpos + 1) % h;
            while gen_ordinal(j).is_none() {
                v += 1;
                t += degrees[j] as u64 - 1;
                j = (j + 1) % h;
            }
            Chain {
                v,
                t,
                target: gen_ordinal(j).expect("loop stopped at a generator"),
            }
        })
        .collect();

    // p-reduction against the fixed chains; every substitution raises v
    let max_degree = *degrees.iter().max().expect("non-empty") as u64;
    let bound = 4 * h as u64 * max_degree.max(1);
    let mut truncation_applied = false;
    #[derive(Clone)]
    enum Rhs {
        Zero,
        Term { v: u64, target: usize },
    }
    let mut reduced: Vec<Rhs> = Vec::with_capacity(chains.len());
    for chain in &chains {
        let (mut v, mut t, mut target) = (chain.v, chain.t, chain.target);
        while t > 0 {
            if v >= bound {
                truncation_applied = true;
                break;
            }
            let next = chains[target];
            v += 1 + next.v;
            t = t - 1 + next.t;
            target = next.target;
        }
        if t > 0 {
            reduced.push(Rhs::Zero);
        } else {
            reduced.push(Rhs::Term { v, target });
        }
    }

    // absorption: F^c g = g' (v = 0) swallows g' when no other relation
    // points at g'
    let n = positions.len();
    let mut alive = vec![true; n];
    let mut f_power = vec![1u32; n];
    loop {
        let mut merged = false;
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            let (v, target) = match reduced[i] {
                Rhs::Term { v, target } => (v, target),
                Rhs::Zero => continue,
            };
            if v != 0 || target == i || !alive[target] {
                continue;
            }
            let in_degree = (0..n)
                .filter(|&j| alive[j])
                .filter(|&j| matches!(reduced[j], Rhs::Term { target: k, .. } if k == target))
                .count();
            if in_degree != 1 {
                continue;
            }
            alive[target] = false;
            f_power[i] += f_power[target];
            reduced[i] = reduced[target].clone();
            merged = true;
            break;
        }
        if !merged {
            break;
        }
    }

    // label the retained generators in cyclic order of their positions
    let mut names: Vec<Option<String>> = vec![None; n];
    let mut next_label = 0usize;
    for i in 0..n {
        if alive[i] {
            names[i] = Some(label(next_label));
            next_label += 1;
        }
    }
    let generators: Vec<String> = names.iter().flatten().cloned().collect();
    let relations: Vec<Relation> = (0..n)
        .filter(|&i| alive[i])
        .map(|i| Relation {
            f_power: f_power[i],
            generator: names[i].clone().expect("retained generator is named"),
            rhs: match &reduced[i] {
                Rhs::Zero => RelationRhs::Zero,
                Rhs::Term { v, target } => RelationRhs::Term {
                    v_power: *v,
                    target: names[*target]
                        .clone()
                        .expect("targets of retained relations are retained"),
                },
            },
        })
        .collect();

    let presentation = DieudonnePresentation {
        generators,
        relations,
        dimension,
        truncation_applied,
    };
    debug_assert_eq!(presentation.mod_v_length(), dimension);
    Ok(presentation)
}
