use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::feasibility::{assess, FeasibilityReport, Verdict};
use crate::homtheory::{classify, complete_core_test, CoreVerdict};
use crate::params::{
    classify_family, FamilyClass, IntersectionArray, KreinSign, ParamError, ParameterSet, SpectralConfig, SpectralData,
};

#[derive(Clone, Debug, Serialize)]
pub struct Parameters {
    pub n: u64,
    pub k: Vec<u64>,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    /// `intersection_numbers[i][j][h] = p_{ij}^h`
    pub intersection_numbers: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Eigenvalue {
    /// Integer, or rounded to three decimals.
    pub value: String,
    pub approx: f64,
    pub minpoly: String,
    pub multiplicity: u64,
    /// `w(0..=d, j)` as polynomials in `θ_j` reduced modulo the minimal polynomial.
    pub cosines: Vec<String>,
    pub cosines_approx: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KreinEntry {
    pub i: usize,
    pub j: usize,
    pub h: usize,
    pub sign: KreinSign,
    pub approx: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompleteCore {
    /// `"greater"`, `"equal"` or `"less"`: `θ_d` compared with `−2`.
    pub theta_d_vs_minus2: &'static str,
    pub bound: Option<String>,
}

/// Everything known about one array.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub array: IntersectionArray,
    pub feasibility: FeasibilityReport,
    pub parameters: Option<Parameters>,
    pub family: Option<FamilyClass>,
    pub spectrum: Vec<Eigenvalue>,
    /// Krein parameters `q_{ij}^h` for `i <= j`.
    pub krein: Vec<KreinEntry>,
    pub complete_core: Option<CompleteCore>,
    pub verdict: Option<CoreVerdict>,
    pub notes: Vec<String>,
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Greater => "greater",
        Ordering::Equal => "equal",
        Ordering::Less => "less",
    }
}

fn parameters(ps: &ParameterSet) -> Parameters {
    let d = ps.diameter();
    Parameters {
        n: ps.n,
        k: ps.k.clone(),
        a: ps.a.clone(),
        b: (0..=d).map(|i| if i < d { ps.b(i) } else { 0 }).collect(),
        c: (0..=d).map(|i| if i > 0 { ps.c(i) } else { 0 }).collect(),
        intersection_numbers: ps.p.clone(),
    }
}

fn spectrum(sd: &SpectralData) -> Vec<Eigenvalue> {
    let d = sd.diameter();
    (0..=d)
        .map(|j| {
            let t = &sd.theta[j];
            Eigenvalue {
                value: match t.as_rational() {
                    Some(r) if r.is_integer() => r.to_integer().to_string(),
                    _ => t.to_decimal_string(3),
                },
                approx: t.to_f64(),
                minpoly: t.minpoly().to_string(),
                multiplicity: sd.m[j],
                cosines: (0..=d).map(|i| sd.cosine(i, j).to_string()).collect(),
                cosines_approx: (0..=d).map(|i| sd.cosine(i, j).to_f64()).collect(),
            }
        })
        .collect()
}

fn krein(sd: &SpectralData) -> Vec<KreinEntry> {
    let d = sd.diameter();
    let mut out = Vec::new();
    for i in 0..=d {
        for j in i..=d {
            for h in 0..=d {
                let q = &sd.krein[i][j][h];
                out.push(KreinEntry { i, j, h, sign: q.sign, approx: (q.lo + q.hi) / 2.0, exact: q.exact });
            }
        }
    }
    out
}

/// Runs the battery and, where possible, the spectral and endomorphism
/// analysis. Errors are internal failures only.
pub fn analyze(arr: &IntersectionArray, cfg: &SpectralConfig) -> Result<Analysis, ParamError> {
    let assessment = assess(arr, cfg)?;
    let mut out = Analysis {
        array: arr.clone(),
        feasibility: assessment.report,
        parameters: None,
        family: None,
        spectrum: Vec::new(),
        krein: Vec::new(),
        complete_core: None,
        verdict: None,
        notes: Vec::new(),
    };
    // Parameters and spectra are still shown for arrays rejected late in the battery.
    let ps = match assessment.params {
        Some(ps) => ps,
        None => match crate::params::derive_parameters(arr) {
            Ok(ps) => ps,
            Err(_) => return Ok(out),
        },
    };
    out.parameters = Some(parameters(&ps));
    let sd = match assessment.spectral {
        Some(sd) => sd,
        None => match SpectralData::compute_with(&ps, cfg) {
            Ok(sd) => sd,
            Err(e) => {
                out.notes.push(format!("spectral data unavailable: {e}"));
                return Ok(out);
            }
        },
    };
    out.spectrum = spectrum(&sd);
    out.krein = krein(&sd);
    if ps.diameter() >= 2 {
        let cc = complete_core_test(&ps, &sd);
        out.complete_core = Some(CompleteCore {
            theta_d_vs_minus2: ordering_name(cc.theta_d_vs_minus2),
            bound: cc.bound.map(|b| b.to_string()),
        });
    }
    if !out.feasibility.overall {
        return Ok(out);
    }
    match classify_family(&ps, &sd) {
        Ok(fc) => {
            out.family = Some(fc);
            match classify(&ps, &sd, &fc) {
                Ok(v) => out.verdict = Some(v),
                Err(e) => out.notes.push(format!("classification unavailable: {e}")),
            }
        }
        Err(e) if e.is_internal() => return Err(e),
        Err(e) => out.notes.push(format!("classification unavailable: {e}")),
    }
    Ok(out)
}

impl Analysis {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("analysis serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "array: {}", self.array);
        if let Some(p) = &self.parameters {
            let parts: Vec<String> = p.k.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "vertices: v = {} = {}", p.n, parts.join(" + "));
            let _ = writeln!(s, "a: {:?}", p.a);
        }
        if let Some(f) = &self.family {
            let _ = writeln!(s, "family: {:?}", f.label());
        }
        if !self.spectrum.is_empty() {
            let _ = writeln!(s, "spectrum:");
            for (j, e) in self.spectrum.iter().enumerate() {
                let _ = writeln!(s, "  θ_{j} = {} (min poly {}), multiplicity {}", e.value, e.minpoly, e.multiplicity);
                let _ = writeln!(s, "    cosines: ({})", e.cosines.join(", "));
                let approx: Vec<String> = e.cosines_approx.iter().map(|w| format!("{w:.6}")).collect();
                let _ = writeln!(s, "    approx:  ({})", approx.join(", "));
            }
        }
        let _ = writeln!(s, "feasibility: {}", if self.feasibility.overall { "feasible" } else { "infeasible" });
        for c in &self.feasibility.checks {
            let verdict = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "skip",
            };
            let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
            let _ = writeln!(s, "  {} {verdict:<4} {}{detail}", c.id, c.id.description());
        }
        if let Some(cc) = &self.complete_core {
            let bound = cc.bound.as_ref().map(|b| format!(", bound {b}")).unwrap_or_default();
            let _ = writeln!(s, "θ_d vs -2: {}{bound}", cc.theta_d_vs_minus2);
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(s, "verdict: {}", v.tag);
            if !v.witnesses.is_empty() {
                let _ = writeln!(s, "witnesses: {}", super::witness_cell(&v.witnesses));
            }
            for n in &v.notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("## {}\n\n", self.array);
        if let Some(p) = &self.parameters {
            let parts: Vec<String> = p.k.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "v = {} = {}\n", p.n, parts.join(" + "));
        }
        if !self.spectrum.is_empty() {
            s += "| j | θ_j | m_j | cosines |\n|---|---|---|---|\n";
            for (j, e) in self.spectrum.iter().enumerate() {
                let _ = writeln!(s, "| {j} | {} | {} | {} |", e.value, e.multiplicity, e.cosines.join(", "));
            }
            s += "\n";
        }
        s += "| check | verdict | detail |\n|---|---|---|\n";
        for c in &self.feasibility.checks {
            let verdict = serde_json::to_value(c.verdict).expect("verdict serializes");
            let _ = writeln!(s, "| {} | {} | {} |", c.id, verdict.as_str().unwrap_or(""), c.detail);
        }
        if let Some(v) = &self.verdict {
            let _ = write!(s, "\nverdict: **{}**", v.tag);
            if !v.witnesses.is_empty() {
                let _ = write!(s, ", witnesses {}", super::witness_cell(&v.witnesses));
            }
            s += "\n";
        }
        s
    }
}
