//! Feasibility battery for intersection arrays.
//!
//! Checks run in a fixed order and stop at the first failure; everything
//! after it is reported as skipped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraError;
use crate::params::{
    derive_parameters, krein_parameters, multiplicities, screen_spectrum, IntersectionArray, KreinSign, ParamError,
    ParameterSet, SpectralConfig, SpectralData,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
}

impl CheckId {
    pub const ALL: [CheckId; 8] =
        [CheckId::F1, CheckId::F2, CheckId::F3, CheckId::F4, CheckId::F5, CheckId::F6, CheckId::F7, CheckId::F8];

    pub fn description(self) -> &'static str {
        match self {
            CheckId::F1 => "shape invariants",
            CheckId::F2 => "integral valencies",
            CheckId::F3 => "parity of n k_i and k_i a_i",
            CheckId::F4 => "intersection numbers are non-negative integers",
            CheckId::F5 => "d+1 distinct real eigenvalues",
            CheckId::F6 => "multiplicities are positive integers",
            CheckId::F7 => "Krein parameters are non-negative",
            CheckId::F8 => "absolute bound",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: CheckId,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub array: IntersectionArray,
    pub checks: Vec<Check>,
    #[serde(rename = "feasible")]
    pub overall: bool,
}

impl FeasibilityReport {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.verdict == Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Battery outcome together with whatever parameters were derived on the way.
#[derive(Clone, Debug)]
pub struct Assessment {
    pub report: FeasibilityReport,
    pub params: Option<ParameterSet>,
    pub spectral: Option<SpectralData>,
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn pass(&mut self, id: CheckId) {
        self.checks.push(Check { id, verdict: Verdict::Pass, detail: String::new() });
    }

    fn pass_with(&mut self, id: CheckId, detail: String) {
        self.checks.push(Check { id, verdict: Verdict::Pass, detail });
    }

    fn fail(mut self, arr: &IntersectionArray, id: CheckId, detail: String) -> FeasibilityReport {
        self.checks.push(Check { id, verdict: Verdict::Fail, detail });
        for rest in CheckId::ALL.iter().skip(self.checks.len()) {
            self.checks.push(Check {
                id: *rest,
                verdict: Verdict::Skipped,
                detail: format!("skipped after {id} failed"),
            });
        }
        FeasibilityReport { array: arr.clone(), checks: self.checks, overall: false }
    }
}

/// Runs the battery. Internal invariant violations are reported as a failed
/// check whose detail starts with `internal:`; use [`assess`] to surface
/// them as errors instead.
pub fn run_battery(arr: &IntersectionArray) -> FeasibilityReport {
    match assess(arr, &SpectralConfig::from_env()) {
        Ok(a) => a.report,
        Err(e) => {
            let rec = Recorder { checks: Vec::new() };
            rec.fail(arr, CheckId::F1, format!("internal: {e}"))
        }
    }
}

/// Runs the battery and keeps the derived data. Errors are reserved for
/// internal failures; infeasibility is always a verdict.
pub fn assess(arr: &IntersectionArray, cfg: &SpectralConfig) -> Result<Assessment, ParamError> {
    Ok(assess_filtered(arr, cfg, |_| true)?.expect("filter accepts every array"))
}

/// Like [`assess`], but returns `None` as soon as the combinatorial
/// parameters are known and `keep` rejects them, skipping the spectral work.
/// Arrays failing an earlier check are still returned.
pub fn assess_filtered(
    arr: &IntersectionArray,
    cfg: &SpectralConfig,
    keep: impl Fn(&ParameterSet) -> bool,
) -> Result<Option<Assessment>, ParamError> {
    let mut rec = Recorder { checks: Vec::new() };
    let bail = |rec: Recorder, id, detail| {
        Ok(Some(Assessment { report: rec.fail(arr, id, detail), params: None, spectral: None }))
    };

    let violations = arr.shape_violations();
    if !violations.is_empty() {
        return bail(rec, CheckId::F1, violations.join("; "));
    }
    rec.pass(CheckId::F1);

    let k = match crate::params::valencies(arr) {
        Ok(k) => k,
        Err(e @ ParamError::NonIntegralValency { .. }) => return bail(rec, CheckId::F2, e.to_string()),
        Err(e) => return Err(e),
    };
    rec.pass(CheckId::F2);

    if let Some(detail) = parity_violation(arr, &k) {
        return bail(rec, CheckId::F3, detail);
    }
    rec.pass(CheckId::F3);

    let ps = match derive_parameters(arr) {
        Ok(ps) => ps,
        Err(e @ ParamError::BadIntersectionNumber { .. }) => return bail(rec, CheckId::F4, e.to_string()),
        Err(e) => return Err(e),
    };
    rec.pass(CheckId::F4);
    if !keep(&ps) {
        return Ok(None);
    }

    match screen_spectrum(&ps) {
        Ok(()) => {}
        Err(e @ (ParamError::EigenvalueCount { .. } | ParamError::Algebra(AlgebraError::Unsupported(_)))) => {
            return bail(rec, CheckId::F5, e.to_string())
        }
        Err(e @ ParamError::NonIntegralMultiplicity { .. }) => {
            rec.pass(CheckId::F5);
            return bail(rec, CheckId::F6, e.to_string());
        }
        Err(e) => return Err(e),
    }
    rec.pass(CheckId::F5);
    rec.pass(CheckId::F6);

    // Both screens passed, so the exact per-eigenvalue data must exist.
    let (theta, contexts, w) = SpectralData::cosines(&ps)?;
    let m = multiplicities(&ps, &w).map_err(|e| ParamError::Internal(e.to_string()))?;

    let krein = krein_parameters(&ps, &m, &w, cfg)?;
    let d = ps.diameter();
    let mut negative = Vec::new();
    for i in 0..=d {
        for j in i..=d {
            for h in 0..=d {
                if krein[i][j][h].sign == KreinSign::Negative {
                    negative.push(format!("q_{i}{j}^{h} < 0"));
                }
            }
        }
    }
    if !negative.is_empty() {
        return bail(rec, CheckId::F7, negative.join(", "));
    }
    let heuristic = krein.iter().flatten().flatten().filter(|q| q.heuristic_zero()).count();
    if heuristic > 0 {
        rec.pass_with(CheckId::F7, format!("{heuristic} entries treated as zero below the precision threshold"));
    } else {
        rec.pass(CheckId::F7);
    }

    let sd = SpectralData::from_parts(theta, contexts, m, w, krein);
    if let Some(detail) = absolute_bound_violation(&sd) {
        return bail(rec, CheckId::F8, detail);
    }
    rec.pass(CheckId::F8);

    Ok(Some(Assessment {
        report: FeasibilityReport { array: arr.clone(), checks: rec.checks, overall: true },
        params: Some(ps),
        spectral: Some(sd),
    }))
}

/// Handshake conditions on every distance graph `X_i` (`i ≥ 1`) and on the
/// subgraph induced by each layer `Γ_i(v)`, which is `a_i`-regular.
fn parity_violation(arr: &IntersectionArray, k: &[u64]) -> Option<String> {
    let n: u128 = k.iter().map(|&x| x as u128).sum();
    for (i, &ki) in k.iter().enumerate().skip(1) {
        if (n * ki as u128) % 2 == 1 {
            return Some(format!("n k_{i} = {n} * {ki} is odd"));
        }
    }
    for (i, &ki) in k.iter().enumerate() {
        let ai = arr.a(i) as u128;
        if (ki as u128 * ai) % 2 == 1 {
            return Some(format!("k_{i} a_{i} = {ki} * {ai} is odd"));
        }
    }
    None
}

fn absolute_bound_violation(sd: &SpectralData) -> Option<String> {
    let d = sd.diameter();
    let m = &sd.m;
    for i in 1..=d {
        for j in i..=d {
            let total: u128 = (0..=d).filter(|&h| !sd.krein_is_zero(i, j, h)).map(|h| m[h] as u128).sum();
            let (mi, mj) = (m[i] as u128, m[j] as u128);
            let bound = if i == j { mi * (mi + 1) / 2 } else { mi * mj };
            if total > bound {
                return Some(format!("sum of m_h over q_{i}{j}^h != 0 is {total} > {bound}"));
            }
        }
    }
    None
}
