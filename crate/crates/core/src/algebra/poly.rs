use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Rational};

/// Dense univariate polynomial over the rationals, lowest degree first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let lc = lc.clone();
                Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
            }
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of `self(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let q = &rem[i + dd] / &lc;
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(a, m)` monic and `s*a ≡ g (mod m)`.
    pub fn gcd_with_inverse(a: &UniPoly, m: &UniPoly) -> (UniPoly, UniPoly) {
        let (mut r0, mut r1) = (m.clone(), a.clone());
        let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let lc = r0.leading().cloned().unwrap_or_else(Rational::one);
        let inv = lc.recip();
        (r0.scale(&inv), s0.scale(&inv).rem(m))
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = UniPoly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lc = self.leading().expect("root bound of the zero polynomial").abs();
        let max =
            self.coeffs.iter().take(self.coeffs.len() - 1).map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
        max + Rational::one()
    }

    /// Integer polynomial with the same roots, primitive and positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() {
            for c in &mut ints {
                *c /= &g;
            }
        }
        if ints.last().is_some_and(Signed::is_negative) {
            for c in &mut ints {
                *c = -c.clone();
            }
        }
        ints
    }

    /// Splits a quartic without rational roots into two monic quadratics
    /// when such a factorization over the rationals exists.
    pub fn split_quartic(&self) -> Result<Option<(UniPoly, UniPoly)>, AlgebraError> {
        if self.degree() != Some(4) {
            return Ok(None);
        }
        // Reduce to a monic integer quartic in y = lead * x.
        let ints = self.primitive_integer();
        let lead = ints[4].clone();
        // monic_int[i] = ints[i] * lead^(3-i) for i < 4, leading 1
        let mut monic_int = vec![BigInt::one(); 5];
        let mut pow = BigInt::one();
        for i in (0..4).rev() {
            monic_int[i] = &ints[i] * &pow;
            pow *= &lead;
        }
        let (a, b, c, d) = (monic_int[3].clone(), monic_int[2].clone(), monic_int[1].clone(), monic_int[0].clone());
        if d.is_zero() {
            return Ok(None);
        }
        for q in signed_divisors(&d)? {
            let s = &d / &q;
            let candidates: Vec<(BigInt, BigInt)> = if s != q {
                let num = &c - &q * &a;
                let den = &s - &q;
                if !num.is_multiple_of(&den) {
                    continue;
                }
                let p = num / den;
                let r = &a - &p;
                vec![(p, r)]
            } else {
                if c != &q * &a {
                    continue;
                }
                // p + r = a, p r = b - 2q
                let prod = &b - &q * BigInt::from(2);
                let disc = &a * &a - prod * BigInt::from(4);
                if disc.is_negative() {
                    continue;
                }
                let root = disc.sqrt();
                if &root * &root != disc || !(&a + &root).is_even() {
                    continue;
                }
                let p = (&a + &root) / BigInt::from(2);
                let r = &a - &p;
                vec![(p, r)]
            };
            for (p, r) in candidates {
                if &s + &q + &p * &r != b || &p * &s + &q * &r != c {
                    continue;
                }
                // (y^2 + p y + q)(y^2 + r y + s) with y = lead * x
                let l = Rational::from_integer(lead.clone());
                let f1 = UniPoly::new(vec![
                    Rational::from_integer(q.clone()),
                    Rational::from_integer(p.clone()) * &l,
                    &l * &l,
                ])
                .monic();
                let f2 = UniPoly::new(vec![
                    Rational::from_integer(s.clone()),
                    Rational::from_integer(r.clone()) * &l,
                    &l * &l,
                ])
                .monic();
                return Ok(Some((f1, f2)));
            }
        }
        Ok(None)
    }
}

const MAX_TRIAL_DIVISION: u128 = 1 << 48;

fn signed_divisors(n: &BigInt) -> Result<Vec<BigInt>, AlgebraError> {
    let m: u128 = n
        .abs()
        .try_into()
        .map_err(|_| AlgebraError::Unsupported("quartic constant term too large to factor".into()))?;
    if m > MAX_TRIAL_DIVISION * MAX_TRIAL_DIVISION {
        return Err(AlgebraError::Unsupported("quartic constant term too large to factor".into()));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i: u128 = 1;
    while i * i <= m {
        if m.is_multiple_of(i) {
            small.push(i);
            if i * i != m {
                large.push(m / i);
            }
        }
        i += 1;
    }
    large.reverse();
    let mut out = Vec::with_capacity(2 * (small.len() + large.len()));
    for v in small.into_iter().chain(large) {
        out.push(BigInt::from(v));
        out.push(-BigInt::from(v));
    }
    Ok(out)
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn division_round_trips() {
        let a = UniPoly::from_ints(&[-6, 1, 0, 2]);
        let b = UniPoly::from_ints(&[1, 3]);
        let (q, rem) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &rem, a);
        assert!(rem.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = UniPoly::from_ints(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree_part(), UniPoly::from_ints(&[-2, 1, 1]));
        let g = UniPoly::gcd(&p, &UniPoly::from_ints(&[-1, 1]));
        assert_eq!(g, UniPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn inverse_modulo() {
        let m = UniPoly::from_ints(&[-1, -2, 1]);
        let a = UniPoly::from_ints(&[-1, 1]);
        let (g, inv) = UniPoly::gcd_with_inverse(&a, &m);
        assert_eq!(g, UniPoly::one());
        assert_eq!((&a * &inv).rem(&m), UniPoly::one());
    }

    #[test]
    fn quartic_splitting() {
        // (x^2 - 2)(x^2 - 3x + 1)
        let p = &UniPoly::from_ints(&[-2, 0, 1]) * &UniPoly::from_ints(&[1, -3, 1]);
        let (f, g) = p.split_quartic().unwrap().expect("reducible");
        assert_eq!(&f * &g, p);
        // x^4 - 10x^2 + 1 is irreducible over Q
        assert!(UniPoly::from_ints(&[1, 0, -10, 0, 1]).split_quartic().unwrap().is_none());
        // non-monic: (2x^2 - 1)(3x^2 + x - 1)
        let p = &UniPoly::from_ints(&[-1, 0, 2]) * &UniPoly::from_ints(&[-1, 1, 3]);
        let (f, g) = p.split_quartic().unwrap().expect("reducible");
        assert_eq!((&f * &g).monic(), p.monic());
    }

    #[test]
    fn display_is_readable() {
        let p = UniPoly::new(vec![r(1, 2), r(-3, 1), Rational::one()]);
        assert_eq!(p.to_string(), "x^2 - 3*x + 1/2");
        assert_eq!(UniPoly::zero().to_string(), "0");
    }
}
