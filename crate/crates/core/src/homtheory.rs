//! Necessary conditions for endomorphisms of distance-regular graphs, applied
//! at the parameter level: the `(α, β, γ)` triple search for images of
//! smaller diameter, the complete-core eigenvalue bound and the resulting
//! core classification.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{int, AlgebraError, FieldElement, Rational};
use crate::params::{FamilyClass, ParameterSet, SpectralData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("target diameter e = {e} must satisfy 2 <= e <= d - 1 = {max}")]
    DiameterOutOfRange { e: usize, max: usize },
    #[error("cosines w({e_minus_1},d) and w({e},d) do not alternate in sign")]
    SignStructure { e_minus_1: usize, e: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Range scanned for `α = |C_{e,e−1}|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AlphaBound {
    /// `0 <= α < a_e`; the strict bound matches the known witness tables.
    #[default]
    Strict,
    /// `0 <= α <= a_e`.
    Inclusive,
}

/// A triple `(α, β, γ)` satisfying every condition for an image of diameter `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleWitness {
    pub e: usize,
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

impl TripleWitness {
    pub fn triple(&self) -> (u64, u64, u64) {
        (self.alpha, self.beta, self.gamma)
    }
}

impl fmt::Display for TripleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

fn diff(w: &[FieldElement], a: usize, b: usize) -> Result<FieldElement, AlgebraError> {
    w[a].try_sub(&w[b])
}

/// The `α ≠ γ` condition is waived exactly when the array is bipartite or
/// antipodal with even diameter.
fn alpha_gamma_may_coincide(ps: &ParameterSet) -> bool {
    let fc = FamilyClass::from_parameters(ps);
    fc.bipartite || (fc.antipodal && ps.diameter().is_multiple_of(2))
}

/// All triples for target diameter `e`, ordered by `(α, β)`.
pub fn search_triples(ps: &ParameterSet, sd: &SpectralData, e: usize) -> Result<Vec<TripleWitness>, HomError> {
    search_triples_with(ps, sd, e, AlphaBound::Strict)
}

pub fn search_triples_with(
    ps: &ParameterSet,
    sd: &SpectralData,
    e: usize,
    bound: AlphaBound,
) -> Result<Vec<TripleWitness>, HomError> {
    let d = ps.diameter();
    if e < 2 || e + 1 > d {
        return Err(HomError::DiameterOutOfRange { e, max: d.saturating_sub(1) });
    }
    let w: Vec<FieldElement> = (0..=d + 1).map(|r| sd.cosine(r, d)).collect();
    let theta_d = &sd.theta[d];

    for r in 1..=e {
        let prod = w[r - 1].try_mul(&w[r])?;
        if prod.sign() != Ordering::Less {
            return Err(HomError::SignStructure { e_minus_1: r - 1, e: r });
        }
    }

    let d_alpha = diff(&w, e - 1, e)?;
    let d_beta = diff(&w, e - 1, e + 1)?;
    let d_gamma = diff(&w, e, e + 1)?;
    let a_e = ps.a[e];
    let b_e = ps.b(e);
    let alpha_max = match bound {
        AlphaBound::Strict => a_e.checked_sub(1),
        AlphaBound::Inclusive => Some(a_e),
    };
    let waive_c = alpha_gamma_may_coincide(ps);

    let mut out = Vec::new();
    let Some(alpha_max) = alpha_max else {
        return Ok(out);
    };
    for alpha in 0..=alpha_max {
        for beta in 0..=b_e {
            let gamma = b_e - beta;
            // γ − α > θ_d + a_e  ⇔  θ_d < γ − α − a_e
            let rhs = gamma as i64 - alpha as i64 - a_e as i64;
            if theta_d.cmp_int(rhs) != Ordering::Less {
                continue;
            }
            if !waive_c && alpha == gamma {
                continue;
            }
            let sum = d_alpha
                .scale(&int(alpha as i64))
                .try_add(&d_beta.scale(&int(beta as i64)))?
                .try_add(&d_gamma.scale(&int(gamma as i64)))?;
            if sum.is_zero() {
                out.push(TripleWitness { e, alpha, beta, gamma });
            }
        }
    }
    Ok(out)
}

/// Outcome of comparing `θ_d` with `−2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteCoreReport {
    pub theta_d_vs_minus2: Ordering,
    /// `b_0 / c_2`, present only when `θ_d = −2`.
    pub bound: Option<Rational>,
}

impl CompleteCoreReport {
    /// A complete core is impossible when `θ_d > −2`.
    pub fn rules_out_complete_core(&self) -> bool {
        self.theta_d_vs_minus2 == Ordering::Greater
    }
}

pub fn complete_core_test(ps: &ParameterSet, sd: &SpectralData) -> CompleteCoreReport {
    let d = ps.diameter();
    let ord = sd.theta[d].cmp_int(-2);
    let bound = (ord == Ordering::Equal).then(|| Rational::new((ps.b(0) as i64).into(), (ps.c(2) as i64).into()));
    CompleteCoreReport { theta_d_vs_minus2: ord, bound }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoreTag {
    BipartiteCoreK2,
    ProvenCore,
    ProvenCoreComplete,
    SmallerDiameterCandidate,
    NoSmallDiameterEndomorphism,
    Inconclusive,
}

impl fmt::Display for CoreTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreVerdict {
    pub tag: CoreTag,
    pub witnesses: Vec<TripleWitness>,
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct VerdictRepr {
    tag: CoreTag,
    witnesses: Vec<[u64; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    witness_e: Vec<usize>,
    notes: Vec<String>,
}

impl Serialize for CoreVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        VerdictRepr {
            tag: self.tag,
            witnesses: self.witnesses.iter().map(|w| [w.alpha, w.beta, w.gamma]).collect(),
            witness_e: self.witnesses.iter().map(|w| w.e).collect(),
            notes: self.notes.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoreVerdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = VerdictRepr::deserialize(d)?;
        if r.witness_e.len() != r.witnesses.len() {
            return Err(D::Error::custom("witness_e and witnesses differ in length"));
        }
        let witnesses = r
            .witnesses
            .iter()
            .zip(&r.witness_e)
            .map(|(t, &e)| TripleWitness { e, alpha: t[0], beta: t[1], gamma: t[2] })
            .collect();
        Ok(CoreVerdict { tag: r.tag, witnesses, notes: r.notes })
    }
}

/// Decision procedure combining the triple search, the complete-core bound
/// and the interlacing test `a_d > θ_1` for connectivity of the far layer.
pub fn classify(ps: &ParameterSet, sd: &SpectralData, fc: &FamilyClass) -> Result<CoreVerdict, HomError> {
    let d = ps.diameter();
    if fc.bipartite {
        return Ok(CoreVerdict {
            tag: CoreTag::BipartiteCoreK2,
            witnesses: Vec::new(),
            notes: vec!["bipartite: the core is K2".into()],
        });
    }

    let mut notes = Vec::new();
    let mut witnesses = Vec::new();
    for e in 2..d {
        let found = search_triples(ps, sd, e)?;
        if found.is_empty() {
            notes.push(format!("no triple satisfies the smaller-diameter conditions for e = {e}"));
        }
        witnesses.extend(found);
    }
    let cc = complete_core_test(ps, sd);
    let theta_d = sd.theta[d].to_decimal_string(3);
    notes.push(match cc.theta_d_vs_minus2 {
        Ordering::Greater => format!("θ_{d} = {theta_d} > -2 rules out a complete core"),
        Ordering::Equal => format!(
            "θ_{d} = -2: each colour class has at most {} vertices at distance 2",
            cc.bound.as_ref().expect("bound present when equal")
        ),
        Ordering::Less => format!("θ_{d} = {theta_d} < -2"),
    });

    if !witnesses.is_empty() {
        return Ok(CoreVerdict { tag: CoreTag::SmallerDiameterCandidate, witnesses, notes });
    }

    let a_d = ps.a[d];
    let far_connected = sd.theta[1].cmp_int(a_d as i64) == Ordering::Less;
    let theta_1 = sd.theta[1].to_decimal_string(3);
    if fc.primitive {
        if far_connected {
            notes.push(format!("far subgraph connected by interlacing: a_{d} = {a_d} > θ_1 = {theta_1}"));
            let tag = if cc.rules_out_complete_core() { CoreTag::ProvenCore } else { CoreTag::ProvenCoreComplete };
            return Ok(CoreVerdict { tag, witnesses, notes });
        }
        notes.push(format!("far subgraph connectivity not established: a_{d} = {a_d} ≤ θ_1"));
        return Ok(CoreVerdict { tag: CoreTag::Inconclusive, witnesses, notes });
    }

    if fc.antipodal && d % 2 == 1 {
        notes.push(format!("antipodal with odd diameter {d}: no endomorphism onto a smaller diameter"));
        return Ok(CoreVerdict { tag: CoreTag::NoSmallDiameterEndomorphism, witnesses, notes });
    }
    notes.push(format!("antipodal with even diameter {d}: α = γ cannot be excluded"));
    Ok(CoreVerdict { tag: CoreTag::Inconclusive, witnesses, notes })
}
