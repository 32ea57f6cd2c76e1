//! Parameters derived from an intersection array: valencies, intersection
//! numbers, eigenvalues, multiplicities, cosines, eigenmatrices, Krein
//! parameters and the bipartite/antipodal/primitive classification.

mod array;
mod derive;
mod spectral;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraError;

pub use array::{IntersectionArray, ParseArrayError};
pub use derive::{derive_parameters, intersection_numbers, valencies, ParameterSet};
pub use spectral::{
    cosine_sequence, intersection_char_poly, krein_parameters, krein_zero_threshold, multiplicities, screen_spectrum,
    sign_change_count, spectrum, KreinSign, KreinValue, SpectralConfig, SpectralData,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("array violates structural invariants: {0}")]
    Shape(String),
    #[error("valency k_{index} = {value} is not an integer")]
    NonIntegralValency { index: usize, value: String },
    #[error("intersection number p_{i}{j}^{h} = {value} is not a non-negative integer")]
    BadIntersectionNumber { i: usize, j: usize, h: usize, value: String },
    #[error("expected {expected} distinct real eigenvalues, found {found}")]
    EigenvalueCount { expected: usize, found: usize },
    #[error("multiplicity of eigenvalue {eigenvalue} is {value}, not a positive integer")]
    NonIntegralMultiplicity { eigenvalue: String, value: String },
    #[error("terminal cosine identity fails for {0}")]
    TerminalIdentity(String),
    #[error("valency b_0 <= 2 (paths and cycles) is out of scope for family classification")]
    SmallValency,
    #[error("integer overflow while deriving parameters")]
    Overflow,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl ParamError {
    /// Errors that signal a bug or an impossible state rather than an
    /// infeasible array.
    pub fn is_internal(&self) -> bool {
        matches!(self, ParamError::TerminalIdentity(_) | ParamError::Internal(_) | ParamError::Overflow)
            || matches!(self, ParamError::Algebra(e) if !matches!(e, AlgebraError::Unsupported(_)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyClass {
    pub bipartite: bool,
    pub antipodal: bool,
    pub primitive: bool,
}

impl FamilyClass {
    /// Classification from the intersection numbers alone, without the
    /// spectral cross-check done by [`classify_family`].
    pub fn from_parameters(ps: &ParameterSet) -> FamilyClass {
        let d = ps.diameter();
        let bipartite = ps.a.iter().all(|&a| a == 0);
        let antipodal = (1..d).all(|i| ps.p(d, d, i) == 0);
        FamilyClass { bipartite, antipodal, primitive: !bipartite && !antipodal }
    }

    /// Single label used for filtering: bipartite wins over antipodal.
    pub fn label(&self) -> Family {
        if self.bipartite {
            Family::Bipartite
        } else if self.antipodal {
            Family::Antipodal
        } else {
            Family::Primitive
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Primitive,
    Antipodal,
    Bipartite,
}

/// Bipartite iff every `a_i` is zero; antipodal iff `p_{dd}^i = 0` for
/// `0 < i < d`; primitive iff neither (valid for `b_0 >= 3`).
pub fn classify_family(ps: &ParameterSet, sd: &SpectralData) -> Result<FamilyClass, ParamError> {
    if ps.array.valency() <= 2 {
        return Err(ParamError::SmallValency);
    }
    let fc = FamilyClass::from_parameters(ps);
    let d = ps.diameter();
    let theta_d_is_minus_k = sd.theta[d].cmp_int(-(ps.array.valency() as i64)) == std::cmp::Ordering::Equal;
    if fc.bipartite != theta_d_is_minus_k {
        return Err(ParamError::Internal("bipartiteness disagrees with the least eigenvalue".into()));
    }
    Ok(fc)
}
