use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AlgebraError, Rational, RationalInterval, UniPoly};

/// Sturm chain of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        SturmChain { chain }
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots, from the sign variations at `±∞`.
    pub fn count_real(&self) -> usize {
        let var = |signs: Vec<i8>| {
            let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let lead_sign = |p: &UniPoly| if p.leading().is_some_and(Signed::is_positive) { 1i8 } else { -1 };
        let at_pos: Vec<i8> = self.chain.iter().map(lead_sign).collect();
        let at_neg: Vec<i8> = self
            .chain
            .iter()
            .map(|p| {
                let s = lead_sign(p);
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        var(at_neg).saturating_sub(var(at_pos))
    }

    /// Distinct roots in the open interval `(lo, hi)`; neither endpoint may
    /// be a root.
    pub fn count_between(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }
}

fn two() -> Rational {
    Rational::from_integer(BigInt::from(2))
}

/// A point strictly inside `(lo, hi)` at which `p` does not vanish.
fn split_point(p: &UniPoly, lo: &Rational, hi: &Rational) -> Rational {
    let width = hi - lo;
    let mut den = 2i64;
    loop {
        for num in 1..den {
            let t = lo + &width * Rational::new(num.into(), den.into());
            if !p.eval(&t).is_zero() {
                return t;
            }
        }
        den += 1;
    }
}

/// Exact real algebraic number: an irreducible monic minimal polynomial
/// together with a rational interval containing exactly one of its roots.
///
/// Rational values use the linear minimal polynomial `x - r` and the
/// degenerate interval `[r, r]`.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    minpoly: UniPoly,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicReal {
    pub fn from_rational(r: Rational) -> Self {
        AlgebraicReal { minpoly: UniPoly::linear_root(&r), lo: r.clone(), hi: r }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// Builds a value from an irreducible polynomial and an isolating
    /// interval. Irreducibility is the caller's responsibility; isolation and
    /// the sign condition at the endpoints are checked.
    pub fn new(minpoly: UniPoly, lo: Rational, hi: Rational) -> Result<Self, AlgebraError> {
        let minpoly = minpoly.monic();
        match minpoly.degree() {
            None | Some(0) => return Err(AlgebraError::ZeroPolynomial),
            Some(1) => {
                let r = -minpoly.coeff(0);
                if r < lo || r > hi {
                    return Err(AlgebraError::NotIsolating);
                }
                return Ok(Self::from_rational(r));
            }
            _ => {}
        }
        if lo >= hi {
            return Err(AlgebraError::NotIsolating);
        }
        let (slo, shi) = (minpoly.sign_at(&lo), minpoly.sign_at(&hi));
        if slo == 0 || shi == 0 || slo == shi {
            return Err(AlgebraError::NotIsolating);
        }
        if SturmChain::new(&minpoly).count_between(&lo, &hi) != 1 {
            return Err(AlgebraError::NotIsolating);
        }
        Ok(AlgebraicReal { minpoly, lo, hi })
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(1)
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.lo.clone())
    }

    /// The stored isolating interval.
    pub fn interval(&self) -> RationalInterval {
        RationalInterval::new(self.lo.clone(), self.hi.clone())
    }

    /// Bisects the isolating interval until its width is at most `width`.
    /// Deterministic, so smaller widths give nested intervals.
    pub fn refine(&self, width: &Rational) -> RationalInterval {
        self.refined(width).interval()
    }

    pub fn refined(&self, width: &Rational) -> AlgebraicReal {
        assert!(width.is_positive(), "refinement width must be positive");
        if self.is_rational() {
            return self.clone();
        }
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        let slo = self.minpoly.sign_at(&lo);
        while &hi - &lo > *width {
            let mid = (&lo + &hi) / two();
            // Irreducible of degree >= 2: never zero at a rational point.
            if self.minpoly.sign_at(&mid) == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        AlgebraicReal { minpoly: self.minpoly.clone(), lo, hi }
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> RationalInterval {
        self.refine(&pow2_inv(bits))
    }

    pub fn to_f64(&self) -> f64 {
        let iv = self.refine(&pow2_inv(64));
        iv.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(r);
        }
        let mut cur = self.clone();
        loop {
            if r < &cur.lo {
                return Ordering::Greater;
            }
            if r > &cur.hi {
                return Ordering::Less;
            }
            let w = (&cur.hi - &cur.lo) / two();
            cur = cur.refined(&w);
        }
    }

    pub fn cmp_int(&self, n: i64) -> Ordering {
        self.cmp_rational(&Rational::from_integer(n.into()))
    }

    /// Exact total order on real algebraic numbers.
    pub fn compare(&self, other: &AlgebraicReal) -> Ordering {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return a.cmp(&b),
            (None, Some(b)) => return self.cmp_rational(&b),
            (Some(a), None) => return other.cmp_rational(&a).reverse(),
            (None, None) => {}
        }
        if self.minpoly == other.minpoly {
            let lo = (&self.lo).max(&other.lo).clone();
            let hi = (&self.hi).min(&other.hi).clone();
            if lo < hi && SturmChain::new(&self.minpoly).count_between(&lo, &hi) == 1 {
                return Ordering::Equal;
            }
        }
        // Distinct values: refine until the intervals separate.
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            let wa = (&a.hi - &a.lo) / two();
            let wb = (&b.hi - &b.lo) / two();
            a = a.refined(&wa);
            b = b.refined(&wb);
        }
    }

    /// Numeric rendering rounded half-to-even at the given number of decimals.
    pub fn to_decimal_string(&self, decimals: u32) -> String {
        let scale = Rational::from_integer(BigInt::from(10).pow(decimals));
        let rounded = if let Some(r) = self.as_rational() {
            round_half_even(&(r * &scale))
        } else {
            // Irrational: never exactly on a rounding tie.
            let mut width = Rational::new(BigInt::one(), BigInt::from(10).pow(decimals + 3));
            loop {
                let iv = self.refine(&width);
                let a = round_half_even(&(&iv.lo * &scale));
                let b = round_half_even(&(&iv.hi * &scale));
                if a == b {
                    break a;
                }
                width /= Rational::from_integer(BigInt::from(16));
            }
        };
        format_scaled(&rounded, decimals)
    }
}

pub(crate) fn pow2_inv(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits as usize)
}

fn round_half_even(x: &Rational) -> BigInt {
    let fl = x.floor();
    let frac = x - &fl;
    let half = Rational::new(1.into(), 2.into());
    let base = fl.to_integer();
    match frac.cmp(&half) {
        Ordering::Less => base,
        Ordering::Greater => base + 1,
        Ordering::Equal => {
            if base.is_even_int() {
                base
            } else {
                base + 1
            }
        }
    }
}

trait EvenInt {
    fn is_even_int(&self) -> bool;
}

impl EvenInt for BigInt {
    fn is_even_int(&self) -> bool {
        num_integer::Integer::is_even(self)
    }
}

fn format_scaled(v: &BigInt, decimals: u32) -> String {
    if decimals == 0 {
        return v.to_string();
    }
    let neg = v.is_negative();
    let digits = v.abs().to_string();
    let d = decimals as usize;
    let padded = if digits.len() <= d { format!("{}{}", "0".repeat(d + 1 - digits.len()), digits) } else { digits };
    let (int, frac) = padded.split_at(padded.len() - d);
    let all_zero = int.chars().all(|c| c == '0') && frac.chars().all(|c| c == '0');
    format!("{}{}.{}", if neg && !all_zero { "-" } else { "" }, int, frac)
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicReal {}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => {
                write!(f, "root of {} in [{}, {}] (~{})", self.minpoly, self.lo, self.hi, self.to_decimal_string(6))
            }
        }
    }
}

/// Disjoint intervals each holding exactly one real root of the squarefree `sqf`.
fn isolate(sqf: &UniPoly) -> Vec<(Rational, Rational)> {
    let sturm = SturmChain::new(sqf);
    let bound = sqf.root_bound();
    let mut isolated = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count_between(&lo, &hi) {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = split_point(sqf, &lo, &hi);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    isolated
}

/// Integer roots of `p` when its primitive integer form is monic (so every
/// rational root is an integer dividing the lowest nonzero coefficient).
/// `None` when that shortcut does not apply.
fn integer_roots(p: &UniPoly) -> Option<Vec<Rational>> {
    let ints = p.primitive_integer();
    if !ints.last()?.is_one() {
        return None;
    }
    let mut roots = Vec::new();
    let shift = ints.iter().position(|c| !c.is_zero())?;
    if shift > 0 {
        roots.push(Rational::zero());
    }
    let c0 = ints[shift].abs().to_u64().filter(|&c| c <= 1 << 40)?;
    let eval = |t: &BigInt| ints[shift..].iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c);
    let mut q = 1u64;
    while q * q <= c0 {
        if c0 % q == 0 {
            let mut divs = vec![q, c0 / q];
            divs.dedup();
            for dv in divs {
                for t in [BigInt::from(dv), -BigInt::from(dv)] {
                    if eval(&t).is_zero() {
                        roots.push(Rational::from_integer(t));
                    }
                }
            }
        }
        q += 1;
    }
    Some(roots)
}

/// General path: isolate every root, then detect the rational ones by
/// refining until only one candidate with the right denominator remains.
fn split_rational(sqf: &UniPoly) -> Vec<Rational> {
    // Rational roots r satisfy r * lead ∈ Z for the primitive integer form.
    let lead = Rational::from_integer(sqf.primitive_integer().last().unwrap().clone());
    let mut rational_roots = Vec::new();
    for (mut lo, mut hi) in isolate(sqf) {
        let slo = sqf.sign_at(&lo);
        let mut exact = None;
        while (&hi - &lo) * &lead >= Rational::one() {
            let mid = (&lo + &hi) / two();
            match sqf.sign_at(&mid) {
                0 => {
                    exact = Some(mid);
                    break;
                }
                s if s == slo => lo = mid,
                _ => hi = mid,
            }
        }
        if exact.is_none() {
            let m = (&lo * &lead).floor() + Rational::one();
            let cand = &m / &lead;
            if cand < hi && sqf.eval(&cand).is_zero() {
                exact = Some(cand);
            }
        }
        rational_roots.extend(exact);
    }
    rational_roots
}

/// Squarefree part of a polynomial split into its rational roots and its
/// irreducible factors of degree at least 2 (all monic).
#[derive(Clone, Debug)]
pub struct Factorization {
    pub rational_roots: Vec<Rational>,
    pub factors: Vec<UniPoly>,
}

impl Factorization {
    /// Distinct real roots, counted by Sturm chains without isolating them.
    pub fn count_real_roots(&self) -> usize {
        self.rational_roots.len() + self.factors.iter().map(|f| SturmChain::new(f).count_real()).sum::<usize>()
    }
}

/// Factors the squarefree part of `p` over the rationals. Irreducible
/// factors above degree 4 are unsupported.
pub fn rational_factorization(p: &UniPoly) -> Result<Factorization, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let sqf = p.squarefree_part();
    let rational_roots = match integer_roots(&sqf) {
        Some(roots) => roots,
        None => split_rational(&sqf),
    };
    let mut rest = sqf;
    for r in &rational_roots {
        rest = rest.div_rem(&UniPoly::linear_root(r)).0;
    }
    let factors = match rest.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => unreachable!("rational roots were divided out"),
        Some(2) | Some(3) => vec![rest.monic()],
        Some(4) => match rest.split_quartic()? {
            Some((f, g)) => vec![f, g],
            None => vec![rest.monic()],
        },
        Some(d) => {
            return Err(AlgebraError::Unsupported(format!(
                "irrational factor of degree {d} (only degrees up to 4 are supported)"
            )))
        }
    };
    Ok(Factorization { rational_roots, factors })
}

/// The distinct real roots of `p`, sorted strictly decreasing.
///
/// Rational roots are split off first so every irrational root carries a
/// minimal polynomial of degree 2, 3 or 4; an irreducible factor of higher
/// degree is reported as unsupported.
pub fn real_roots(p: &UniPoly) -> Result<Vec<AlgebraicReal>, AlgebraError> {
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let fz = rational_factorization(p)?;
    let mut out: Vec<AlgebraicReal> = fz.rational_roots.into_iter().map(AlgebraicReal::from_rational).collect();
    for f in fz.factors {
        for (lo, hi) in isolate(&f) {
            out.push(AlgebraicReal { minpoly: f.clone(), lo, hi });
        }
    }
    out.sort_by(|a, b| b.compare(a));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roots_have_linear_minpolys() {
        let roots = real_roots(&UniPoly::from_ints(&[6, -5, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].as_rational(), Some(q(3, 1)));
        assert_eq!(roots[1].as_rational(), Some(q(2, 1)));
        assert!(roots.iter().all(|r| r.minpoly().degree() == Some(1)));
    }

    #[test]
    fn golden_ratio_pair() {
        let roots = real_roots(&UniPoly::from_ints(&[1, -3, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].to_f64() - 2.618_033_988_749_895).abs() < 1e-12);
        assert!((roots[1].to_f64() - 0.381_966_011_250_105_1).abs() < 1e-12);
        assert_eq!(roots[0].minpoly(), roots[1].minpoly());
    }

    #[test]
    fn mixed_rational_and_quadratic() {
        // (x-4)(x+2)(x^2-2x-1)
        let p = &(&UniPoly::from_ints(&[-4, 1]) * &UniPoly::from_ints(&[2, 1])) * &UniPoly::from_ints(&[-1, -2, 1]);
        let roots = real_roots(&p).unwrap();
        assert_eq!(roots.len(), 4);
        assert_eq!(roots[0].as_rational(), Some(q(4, 1)));
        assert_eq!(roots[1].minpoly(), &UniPoly::from_ints(&[-1, -2, 1]));
        assert!((roots[1].to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((roots[2].to_f64() - (1.0 - 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(roots[3].as_rational(), Some(q(-2, 1)));
    }

    #[test]
    fn repeated_and_fractional_roots() {
        // (2x - 1)^2 (3x + 2)
        let p = &(&UniPoly::from_ints(&[-1, 2]) * &UniPoly::from_ints(&[-1, 2])) * &UniPoly::from_ints(&[2, 3]);
        let roots = real_roots(&p).unwrap();
        let vals: Vec<_> = roots.iter().map(|r| r.as_rational().unwrap()).collect();
        assert_eq!(vals, vec![q(1, 2), q(-2, 3)]);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(matches!(real_roots(&UniPoly::zero()), Err(AlgebraError::ZeroPolynomial)));
    }

    #[test]
    fn quintic_irreducible_is_unsupported() {
        // x^5 - 4x + 2 is Eisenstein at 2 with three real roots
        let r = real_roots(&UniPoly::from_ints(&[2, -4, 0, 0, 0, 1]));
        assert!(matches!(r, Err(AlgebraError::Unsupported(_))));
    }

    #[test]
    fn reducible_quartic_gets_quadratic_minpolys() {
        let p = &UniPoly::from_ints(&[-2, 0, 1]) * &UniPoly::from_ints(&[-3, 0, 1]);
        let roots = real_roots(&p).unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots.iter().all(|r| r.degree() == 2));
        assert!((roots[0].to_f64() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn comparisons() {
        let sqrt2_plus1 = &real_roots(&UniPoly::from_ints(&[-1, -2, 1])).unwrap()[0];
        assert_eq!(sqrt2_plus1.cmp_int(2), Ordering::Greater);
        let phi2 = &real_roots(&UniPoly::from_ints(&[1, -3, 1])).unwrap()[0];
        assert_eq!(phi2.cmp_rational(&q(2618, 1000)), Ordering::Greater);
        assert_eq!(AlgebraicReal::from_int(-2).compare(&AlgebraicReal::from_int(-2)), Ordering::Equal);
        // same value, different isolating intervals
        let coarse = phi2.clone();
        let fine = phi2.refined(&q(1, 1_000_000));
        assert_eq!(coarse.compare(&fine), Ordering::Equal);
        assert_eq!(phi2.compare(sqrt2_plus1), Ordering::Greater);
    }

    #[test]
    fn refinement_widths() {
        let two = AlgebraicReal::from_int(2);
        assert_eq!(two.refine(&q(1, 100)), RationalInterval::point(q(2, 1)));
        let s = &real_roots(&UniPoly::from_ints(&[-1, -2, 1])).unwrap()[0];
        let iv = s.refine(&q(1, 1000));
        assert!(iv.width() <= q(1, 1000));
        assert!(iv.contains(&q(241421, 100000)));
        let small = &real_roots(&UniPoly::from_ints(&[1, -3, 1])).unwrap()[1];
        let iv2 = small.refine(&q(1, 1_000_000));
        assert!(iv2.contains(&q(381966, 1_000_000)) || iv2.contains(&q(381967, 1_000_000)));
        assert!(iv2.width() <= q(1, 1_000_000));
        let iv3 = small.refine(&q(1, 10_000_000));
        assert!(iv3.lo >= iv2.lo && iv3.hi <= iv2.hi);
    }

    #[test]
    fn decimal_rendering() {
        let roots = real_roots(&UniPoly::from_ints(&[1, -3, 1])).unwrap();
        assert_eq!(roots[0].to_decimal_string(3), "2.618");
        assert_eq!(roots[1].to_decimal_string(3), "0.382");
        let s = real_roots(&UniPoly::from_ints(&[-1, -2, 1])).unwrap();
        assert_eq!(s[1].to_decimal_string(3), "-0.414");
        assert_eq!(AlgebraicReal::from_rational(q(5, 2000)).to_decimal_string(3), "0.002");
        assert_eq!(AlgebraicReal::from_rational(q(-3, 2000)).to_decimal_string(3), "-0.002");
    }

    #[test]
    fn constructor_checks_isolation() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        assert!(AlgebraicReal::new(p.clone(), q(1, 1), q(2, 1)).is_ok());
        assert!(AlgebraicReal::new(p.clone(), q(-2, 1), q(2, 1)).is_err());
        assert!(AlgebraicReal::new(p, q(2, 1), q(3, 1)).is_err());
    }
}
