use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::real::pow2_inv;
use super::{AlgebraError, AlgebraicReal, Rational, RationalInterval, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Element of `Q(θ) = Q[x]/(minpoly θ)`, stored as a reduced representative.
///
/// Elements whose representative is constant are plain rationals and combine
/// with elements of any field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    rep: UniPoly,
    ctx: Arc<AlgebraicReal>,
}

impl FieldElement {
    /// The generator θ of `Q(θ)`.
    pub fn generator(ctx: &Arc<AlgebraicReal>) -> Self {
        Self::from_poly(UniPoly::x(), ctx)
    }

    pub fn from_poly(p: UniPoly, ctx: &Arc<AlgebraicReal>) -> Self {
        let rep = p.rem(ctx.minpoly());
        FieldElement { rep, ctx: Arc::clone(ctx) }
    }

    pub fn from_rational(r: Rational, ctx: &Arc<AlgebraicReal>) -> Self {
        FieldElement { rep: UniPoly::constant(r), ctx: Arc::clone(ctx) }
    }

    pub fn from_int(n: i64, ctx: &Arc<AlgebraicReal>) -> Self {
        Self::from_rational(Rational::from_integer(n.into()), ctx)
    }

    pub fn representative(&self) -> &UniPoly {
        &self.rep
    }

    pub fn context(&self) -> &Arc<AlgebraicReal> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// The rational value when the representative is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.rep.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    fn same_context(&self, other: &FieldElement) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx)
            || (self.ctx.minpoly() == other.ctx.minpoly() && self.ctx.interval() == other.ctx.interval())
    }

    /// Picks the context both operands can live in.
    fn common_context(&self, other: &FieldElement) -> Result<Arc<AlgebraicReal>, AlgebraError> {
        if self.same_context(other) || other.rep.is_constant() {
            Ok(Arc::clone(&self.ctx))
        } else if self.rep.is_constant() {
            Ok(Arc::clone(&other.ctx))
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, AlgebraError> {
        let ctx = self.common_context(other)?;
        Ok(FieldElement { rep: &self.rep + &other.rep, ctx })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, AlgebraError> {
        let ctx = self.common_context(other)?;
        Ok(FieldElement { rep: &self.rep - &other.rep, ctx })
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, AlgebraError> {
        let ctx = self.common_context(other)?;
        let rep = (&self.rep * &other.rep).rem(ctx.minpoly());
        Ok(FieldElement { rep, ctx })
    }

    pub fn inverse(&self) -> Result<FieldElement, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (g, inv) = UniPoly::gcd_with_inverse(&self.rep, self.ctx.minpoly());
        if g != UniPoly::one() {
            // Only possible if the minimal polynomial was not irreducible.
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(FieldElement { rep: inv, ctx: Arc::clone(&self.ctx) })
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, AlgebraError> {
        let ctx = self.common_context(other)?;
        let inv = other.inverse()?;
        let rep = (&self.rep * &inv.rep).rem(ctx.minpoly());
        Ok(FieldElement { rep, ctx })
    }

    pub fn scale(&self, s: &Rational) -> FieldElement {
        FieldElement { rep: self.rep.scale(s), ctx: Arc::clone(&self.ctx) }
    }

    pub fn add_rational(&self, s: &Rational) -> FieldElement {
        FieldElement { rep: &self.rep + &UniPoly::constant(s.clone()), ctx: Arc::clone(&self.ctx) }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { rep: -&self.rep, ctx: Arc::clone(&self.ctx) }
    }

    /// Exact equality of the represented real numbers within one field.
    pub fn equals(&self, other: &FieldElement) -> Result<bool, AlgebraError> {
        Ok(self.try_sub(other)?.is_zero())
    }

    /// Certified enclosure of the value, with the generator refined to
    /// width `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> RationalInterval {
        if let Some(r) = self.as_rational() {
            return RationalInterval::point(r);
        }
        let gen = self.ctx.enclosure(bits);
        let mut acc = RationalInterval::point(Rational::zero());
        for c in self.rep.coeffs().iter().rev() {
            acc = &(&acc * &gen) + &RationalInterval::point(c.clone());
        }
        acc
    }

    /// Enclosure of width at most `2^-bits`, refining adaptively.
    pub fn enclosure_within(&self, bits: u32) -> RationalInterval {
        let target = pow2_inv(bits);
        let mut b = bits + 8;
        loop {
            let iv = self.enclosure(b);
            if iv.width() <= target {
                return iv;
            }
            b += 16;
        }
    }

    /// Exact sign.
    pub fn sign(&self) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.cmp(&Rational::zero());
        }
        // rep(θ) != 0 because the minimal polynomial is irreducible.
        let mut bits = 16;
        loop {
            match self.enclosure(bits).sign() {
                Some(1) => return Ordering::Greater,
                Some(-1) => return Ordering::Less,
                _ => bits *= 2,
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure_within(64).midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Re-expresses the element in `target` when both fields are generated
    /// by roots of the same quadratic (a conjugate pair) or by the same root.
    pub fn embed_into(&self, target: &Arc<AlgebraicReal>) -> Option<FieldElement> {
        if self.rep.is_constant() {
            return Some(FieldElement { rep: self.rep.clone(), ctx: Arc::clone(target) });
        }
        if self.ctx.minpoly() != target.minpoly() {
            return None;
        }
        if self.ctx.compare(target) == Ordering::Equal {
            return Some(FieldElement { rep: self.rep.clone(), ctx: Arc::clone(target) });
        }
        if self.ctx.degree() != 2 {
            return None;
        }
        // θ' = -c1 - θ for the monic quadratic x^2 + c1 x + c0.
        let conj = UniPoly::new(vec![-self.ctx.minpoly().coeff(1), -Rational::one()]);
        Some(FieldElement::from_poly(self.rep.compose(&conj), target))
    }
}

/// Binary operation dispatch over `FieldOp`.
pub fn field_arith(x: &FieldElement, y: &FieldElement, op: FieldOp) -> Result<FieldElement, AlgebraError> {
    match op {
        FieldOp::Add => x.try_add(y),
        FieldOp::Sub => x.try_sub(y),
        FieldOp::Mul => x.try_mul(y),
        FieldOp::Div => x.try_div(y),
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let s = self.rep.to_string().replace('x', "θ");
        write!(f, "{s}")
    }
}

/// Shared context for plain rationals.
pub fn rational_context() -> Arc<AlgebraicReal> {
    Arc::new(AlgebraicReal::from_rational(Rational::from_integer(BigInt::zero())))
}
