use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{ParamError, ParameterSet};
use crate::algebra::{
    int, rational_factorization, real_roots, AlgebraicReal, FieldElement, Rational, RationalInterval, UniPoly,
};

/// Working precision for interval evaluations (Krein parameters and the
/// numeric cross-checks).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralConfig {
    pub precision_bits: u32,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { precision_bits: 256 }
    }
}

impl SpectralConfig {
    /// Reads `DRG_PRECISION_BITS`, falling back to the default of 256.
    pub fn from_env() -> Self {
        let precision_bits = std::env::var("DRG_PRECISION_BITS")
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&b| b >= 32)
            .unwrap_or(256);
        SpectralConfig { precision_bits }
    }
}

/// Heuristic-zero threshold for Krein parameters: `10^-30`.
pub fn krein_zero_threshold() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(10).pow(30))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KreinSign {
    Negative,
    Zero,
    Positive,
}

/// Certified verdict on one Krein parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KreinValue {
    pub sign: KreinSign,
    /// Numeric enclosure.
    pub lo: f64,
    pub hi: f64,
    /// Decided by exact field arithmetic rather than intervals.
    pub exact: bool,
}

impl KreinValue {
    /// Zero verdict obtained only because refinement could not separate the
    /// enclosure from zero.
    pub fn heuristic_zero(&self) -> bool {
        self.sign == KreinSign::Zero && !self.exact
    }
}

/// Spectral parameters of an intersection array, with cosines kept exact.
#[derive(Clone, Debug)]
pub struct SpectralData {
    /// `θ_0 > θ_1 > … > θ_d`
    pub theta: Vec<AlgebraicReal>,
    contexts: Vec<Arc<AlgebraicReal>>,
    pub m: Vec<u64>,
    /// `w[j][r]` is the cosine `w(r, j)`; row `j` lives in `Q(θ_j)`.
    pub w: Vec<Vec<FieldElement>>,
    /// `krein[i][j][h]` is `q_{ij}^h`.
    pub krein: Vec<Vec<Vec<KreinValue>>>,
}

/// Characteristic polynomial of the tridiagonal intersection matrix.
pub fn intersection_char_poly(ps: &ParameterSet) -> UniPoly {
    let d = ps.diameter();
    let mut prev = UniPoly::one();
    let mut cur = UniPoly::from_ints(&[-(ps.a[0] as i64), 1]);
    for i in 1..=d {
        let lin = UniPoly::from_ints(&[-(ps.a[i] as i64), 1]);
        let off = int((ps.b(i - 1) * ps.c(i)) as i64);
        let next = &(&lin * &cur) - &prev.scale(&off);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The `d+1` eigenvalues, strictly decreasing, with `θ_0 = b_0`.
pub fn spectrum(ps: &ParameterSet) -> Result<Vec<AlgebraicReal>, ParamError> {
    let d = ps.diameter();
    let roots = real_roots(&intersection_char_poly(ps))?;
    if roots.len() != d + 1 {
        return Err(ParamError::EigenvalueCount { expected: d + 1, found: roots.len() });
    }
    if roots[0].cmp_int(ps.array.valency() as i64) != Ordering::Equal {
        return Err(ParamError::Internal("largest eigenvalue differs from b_0".into()));
    }
    Ok(roots)
}

/// Cosine sequence `w(0..=d)` for the eigenvalue generating `ctx`, with the
/// terminal identity `(θ − a_d) w(d) = c_d w(d−1)` checked exactly.
pub fn cosine_sequence(ps: &ParameterSet, ctx: &Arc<AlgebraicReal>) -> Result<Vec<FieldElement>, ParamError> {
    let d = ps.diameter();
    let theta = FieldElement::generator(ctx);
    let mut w = Vec::with_capacity(d + 1);
    w.push(FieldElement::from_int(1, ctx));
    w.push(theta.scale(&Rational::new(1.into(), (ps.b(0) as i64).into())));
    for r in 1..d {
        let t = theta.add_rational(&-int(ps.a[r] as i64));
        let next = t
            .try_mul(&w[r])?
            .try_sub(&w[r - 1].scale(&int(ps.c(r) as i64)))?
            .scale(&Rational::new(1.into(), (ps.b(r) as i64).into()));
        w.push(next);
    }
    let lhs = theta.add_rational(&-int(ps.a[d] as i64)).try_mul(&w[d])?;
    let rhs = w[d - 1].scale(&int(ps.c(d) as i64));
    if !lhs.equals(&rhs)? {
        return Err(ParamError::TerminalIdentity(ctx.to_string()));
    }
    Ok(w)
}

/// `m_j = n / Σ_i k_i w(i,j)^2` for every row, required to be positive integers.
pub fn multiplicities(ps: &ParameterSet, rows: &[Vec<FieldElement>]) -> Result<Vec<u64>, ParamError> {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut norm = FieldElement::from_int(0, row[0].context());
        for (i, wi) in row.iter().enumerate() {
            norm = norm.try_add(&wi.try_mul(wi)?.scale(&int(ps.k[i] as i64)))?;
        }
        // Irrational values occur for arrays with no realization.
        let Some(norm) = norm.as_rational() else {
            return Err(ParamError::NonIntegralMultiplicity {
                eigenvalue: row[0].context().to_string(),
                value: format!("n / ({})", norm.representative()),
            });
        };
        let m = int(ps.n as i64) / norm;
        if !m.is_integer() || !m.is_positive() {
            return Err(ParamError::NonIntegralMultiplicity {
                eigenvalue: row[0].context().to_string(),
                value: m.to_string(),
            });
        }
        out.push(m.to_integer().to_u64().ok_or(ParamError::Overflow)?);
    }
    if out[0] != 1 || out.iter().sum::<u64>() != ps.n {
        return Err(ParamError::Internal(format!("multiplicities {out:?} do not sum to n = {}", ps.n)));
    }
    Ok(out)
}

/// Decides the eigenvalue-count and multiplicity conditions without
/// isolating any root: each irreducible factor `f` of the characteristic
/// polynomial gets one multiplicity `n / Σ k_i u_i(x)^2` computed in
/// `Q[x]/(f)`, shared by all of its roots.
pub fn screen_spectrum(ps: &ParameterSet) -> Result<(), ParamError> {
    let d = ps.diameter();
    let fz = rational_factorization(&intersection_char_poly(ps))?;
    let found = fz.count_real_roots();
    if found != d + 1 {
        return Err(ParamError::EigenvalueCount { expected: d + 1, found });
    }
    let mut moduli: Vec<(UniPoly, String)> =
        fz.rational_roots.iter().map(|r| (UniPoly::linear_root(r), r.to_string())).collect();
    moduli.extend(fz.factors.iter().map(|f| (f.clone(), format!("a root of {f}"))));
    let n = int(ps.n as i64);
    for (f, label) in moduli {
        let reduce = |p: &UniPoly| p.rem(&f);
        let x = UniPoly::x();
        let mut prev = UniPoly::one();
        let mut cur = reduce(&x.scale(&Rational::new(1.into(), (ps.b(0) as i64).into())));
        let mut norm = &UniPoly::one() + &reduce(&(&cur * &cur)).scale(&int(ps.k[1] as i64));
        for r in 1..d {
            let lin = UniPoly::from_ints(&[-(ps.a[r] as i64), 1]);
            let next = (&reduce(&(&lin * &cur)) - &prev.scale(&int(ps.c(r) as i64)))
                .scale(&Rational::new(1.into(), (ps.b(r) as i64).into()));
            norm = &norm + &reduce(&(&next * &next)).scale(&int(ps.k[r + 1] as i64));
            prev = std::mem::replace(&mut cur, next);
        }
        let norm = reduce(&norm);
        let value = match norm.degree() {
            Some(0) => &n / norm.coeff(0),
            _ => return Err(ParamError::NonIntegralMultiplicity { eigenvalue: label, value: format!("n / ({norm})") }),
        };
        if !value.is_integer() || !value.is_positive() {
            return Err(ParamError::NonIntegralMultiplicity { eigenvalue: label, value: value.to_string() });
        }
    }
    Ok(())
}

/// Sign changes after dropping zero entries, so `(1, 1/2, 0, −1/2)` has one.
pub fn sign_change_count(row: &[FieldElement]) -> usize {
    let signs: Vec<Ordering> = row.iter().map(FieldElement::sign).filter(|s| s.is_ne()).collect();
    signs.windows(2).filter(|p| p[0] != p[1]).count()
}

/// Field shared by the rows `i, j, h`, if the conjugate embedding allows one.
fn common_target(w: &[Vec<FieldElement>], rows: [usize; 3]) -> Arc<AlgebraicReal> {
    rows.iter().map(|&x| &w[x][1]).find(|e| e.as_rational().is_none()).unwrap_or(&w[rows[0]][0]).context().clone()
}

fn krein_entry(
    ps: &ParameterSet,
    m: &[u64],
    w: &[Vec<FieldElement>],
    (i, j, h): (usize, usize, usize),
    cfg: &SpectralConfig,
) -> Result<KreinValue, ParamError> {
    let d = ps.diameter();
    let scale = Rational::new(((m[i] * m[j]) as i64).into(), (ps.n as i64).into());

    // Exact route when all three rows embed into one field.
    let target = common_target(w, [i, j, h]);
    let mut exact_sum = Some(FieldElement::from_int(0, &target));
    for r in 0..=d {
        let embedded: Option<Vec<FieldElement>> = [i, j, h].iter().map(|&x| w[x][r].embed_into(&target)).collect();
        let Some(v) = embedded else {
            exact_sum = None;
            break;
        };
        let term = v[0].try_mul(&v[1])?.try_mul(&v[2])?.scale(&int(ps.k[r] as i64));
        exact_sum = Some(exact_sum.unwrap().try_add(&term)?);
    }
    let exact_ok = exact_sum.is_some();
    if exact_ok {
        let q = exact_sum.expect("checked above").scale(&scale);
        let iv = q.enclosure_within(60);
        let (lo, hi) = iv.to_f64_bounds();
        let sign = match q.sign() {
            Ordering::Less => KreinSign::Negative,
            Ordering::Equal => KreinSign::Zero,
            Ordering::Greater => KreinSign::Positive,
        };
        return Ok(KreinValue { sign, lo, hi, exact: true });
    }

    let threshold = krein_zero_threshold();
    let mut bits = 64u32;
    loop {
        let mut acc = RationalInterval::point(Rational::zero());
        for r in 0..=d {
            let t = &(&w[i][r].enclosure(bits) * &w[j][r].enclosure(bits)) * &w[h][r].enclosure(bits);
            acc = &acc + &t.scale(&int(ps.k[r] as i64));
        }
        let q = acc.scale(&scale);
        let (lo, hi) = q.to_f64_bounds();
        match q.sign() {
            Some(1) => return Ok(KreinValue { sign: KreinSign::Positive, lo, hi, exact: false }),
            Some(-1) => return Ok(KreinValue { sign: KreinSign::Negative, lo, hi, exact: false }),
            _ => {}
        }
        if bits >= cfg.precision_bits && q.width() < threshold {
            return Ok(KreinValue { sign: KreinSign::Zero, lo, hi, exact: false });
        }
        bits *= 2;
    }
}

/// Krein parameters `q_{ij}^h = (m_i m_j / n) Σ_r k_r w(r,i) w(r,j) w(r,h)`.
pub fn krein_parameters(
    ps: &ParameterSet,
    m: &[u64],
    w: &[Vec<FieldElement>],
    cfg: &SpectralConfig,
) -> Result<Vec<Vec<Vec<KreinValue>>>, ParamError> {
    let d = ps.diameter();
    let mut q: Vec<Vec<Vec<Option<KreinValue>>>> = vec![vec![vec![None; d + 1]; d + 1]; d + 1];
    for i in 0..=d {
        for j in i..=d {
            for h in 0..=d {
                let v = krein_entry(ps, m, w, (i, j, h), cfg)?;
                q[j][i][h] = Some(v.clone());
                q[i][j][h] = Some(v);
            }
        }
    }
    Ok(q.into_iter().map(|a| a.into_iter().map(|b| b.into_iter().map(Option::unwrap).collect()).collect()).collect())
}

impl SpectralData {
    pub fn compute(ps: &ParameterSet) -> Result<SpectralData, ParamError> {
        Self::compute_with(ps, &SpectralConfig::default())
    }

    pub fn compute_with(ps: &ParameterSet, cfg: &SpectralConfig) -> Result<SpectralData, ParamError> {
        let (theta, contexts, w) = Self::cosines(ps)?;
        let m = multiplicities(ps, &w)?;
        let krein = krein_parameters(ps, &m, &w, cfg)?;
        Ok(SpectralData { theta, contexts, m, w, krein })
    }

    /// Eigenvalues, their field contexts and the exact cosine table.
    #[allow(clippy::type_complexity)]
    pub fn cosines(
        ps: &ParameterSet,
    ) -> Result<(Vec<AlgebraicReal>, Vec<Arc<AlgebraicReal>>, Vec<Vec<FieldElement>>), ParamError> {
        let theta = spectrum(ps)?;
        let contexts: Vec<Arc<AlgebraicReal>> = theta.iter().cloned().map(Arc::new).collect();
        let w = contexts.iter().map(|ctx| cosine_sequence(ps, ctx)).collect::<Result<Vec<_>, _>>()?;
        Ok((theta, contexts, w))
    }

    /// Assembles spectral data from separately computed stages.
    pub fn from_parts(
        theta: Vec<AlgebraicReal>,
        contexts: Vec<Arc<AlgebraicReal>>,
        m: Vec<u64>,
        w: Vec<Vec<FieldElement>>,
        krein: Vec<Vec<Vec<KreinValue>>>,
    ) -> SpectralData {
        SpectralData { theta, contexts, m, w, krein }
    }

    pub fn diameter(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn context(&self, j: usize) -> &Arc<AlgebraicReal> {
        &self.contexts[j]
    }

    /// `w(r, j)`, with the convention `w(d+1, j) = 0`.
    pub fn cosine(&self, r: usize, j: usize) -> FieldElement {
        match self.w[j].get(r) {
            Some(v) => v.clone(),
            None => FieldElement::from_int(0, &self.contexts[j]),
        }
    }

    /// `P(j, i) = k_i w(i, j)`
    pub fn p_matrix(&self, ps: &ParameterSet) -> Vec<Vec<FieldElement>> {
        self.w.iter().map(|row| row.iter().zip(&ps.k).map(|(wi, &k)| wi.scale(&int(k as i64))).collect()).collect()
    }

    /// `Q(i, j) = m_j w(i, j)`
    pub fn q_matrix(&self) -> Vec<Vec<FieldElement>> {
        let d = self.diameter();
        (0..=d).map(|i| (0..=d).map(|j| self.w[j][i].scale(&int(self.m[j] as i64))).collect()).collect()
    }

    /// Largest deviation of `P Q` from `n I`, evaluated in floating point.
    pub fn pq_residual(&self, ps: &ParameterSet) -> f64 {
        let p = self.p_matrix(ps);
        let q = self.q_matrix();
        let d = self.diameter();
        let pf: Vec<Vec<f64>> = p.iter().map(|r| r.iter().map(FieldElement::to_f64).collect()).collect();
        let qf: Vec<Vec<f64>> = q.iter().map(|r| r.iter().map(FieldElement::to_f64).collect()).collect();
        let mut worst = 0f64;
        for a in 0..=d {
            for b in 0..=d {
                let s: f64 = (0..=d).map(|t| pf[a][t] * qf[t][b]).sum();
                let target = if a == b { ps.n as f64 } else { 0.0 };
                worst = worst.max((s - target).abs() / ps.n as f64);
            }
        }
        worst
    }

    /// Whether any Krein verdict was a heuristic zero.
    pub fn has_heuristic_zero(&self) -> bool {
        self.krein.iter().flatten().flatten().any(KreinValue::heuristic_zero)
    }

    pub fn krein_is_zero(&self, i: usize, j: usize, h: usize) -> bool {
        self.krein[i][j][h].sign == KreinSign::Zero
    }
}

impl KreinValue {
    pub fn is_nonnegative(&self) -> bool {
        self.sign != KreinSign::Negative
    }
}

impl SpectralData {
    /// `θ_j` evaluated to `f64`.
    pub fn theta_f64(&self, j: usize) -> f64 {
        self.theta[j].to_f64()
    }
}
